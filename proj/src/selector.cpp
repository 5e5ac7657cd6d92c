#include "saola/selector.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace saola {

const char* to_string(BoundMode mode) { return mode == BoundMode::min ? "min" : "max"; }
const char* to_string(TieBreak tie) { return tie == TieBreak::strict ? "strict" : "discard_new"; }

void SaolaConfig::validate() const {
    measure.validate();
    if (top_k && *top_k < 1) throw std::invalid_argument("top_k must be >= 1");
}

namespace {

double counted_association(const Scorer& scorer, const PreparedColumn& a, const PreparedColumn& b,
                           EvaluationCounter* counter) {
    if (counter) ++counter->count;
    return scorer.association(a, b);
}

} // namespace

std::optional<CorrelationScore> relevance_gate(const Scorer& scorer, const PreparedColumn& column,
                                               EvaluationCounter* counter) {
    if (counter) ++counter->count;
    auto score = scorer.relevance(column);
    if (!scorer.passes_gate(score)) return std::nullopt;
    return score;
}

bool redundancy_check_new(const Candidate& candidate, const SelectionState& state, const Scorer& scorer,
                          const SaolaConfig& config, EvaluationCounter* counter) {
    const bool allow_tie = config.tie == TieBreak::discard_new;
    const double rel_new = candidate.relevance.value;
    for (const auto& y : state.selected) {
        const double rel_y = y.relevance.value;
        if (!could_shadow(rel_y, rel_new, allow_tie)) continue;
        const double corr = counted_association(scorer, candidate.column, y.column, counter);
        if (shadows(rel_y, rel_new, corr, config.bound, allow_tie)) return true;
    }
    return false;
}

std::vector<std::size_t> redundancy_purge_incumbents(Candidate candidate, SelectionState& state, const Scorer& scorer,
                                                     const SaolaConfig& config, EvaluationCounter* counter) {
    std::vector<std::size_t> removed;
    const double rel_new = candidate.relevance.value;
    std::erase_if(state.selected, [&](const SelectedFeature& y) {
        if (!could_shadow(rel_new, y.relevance.value, false)) return false;
        const double corr = counted_association(scorer, y.column, candidate.column, counter);
        if (!shadows(rel_new, y.relevance.value, corr, config.bound, false)) return false;
        removed.push_back(y.index);
        return true;
    });
    state.selected.push_back(
        SelectedFeature{candidate.index, std::move(candidate.column), candidate.relevance, state.step});
    return removed;
}

Saola::Saola(const Dataset& d, SaolaConfig config) : config_(config), scorer_(d, config.measure) {
    config_.validate();
}

StepReport Saola::step(const FeatureView& feature) {
    StepReport report{StepOutcome::discarded_irrelevant, {}, {}, 0};
    EvaluationCounter counter;
    ++state_.step;
    ++counters_.seen;

    auto column = scorer_.prepare(*feature.column);
    auto relevance = relevance_gate(scorer_, column, &counter);
    if (!relevance) {
        ++counters_.discarded_irrelevant;
    } else {
        Candidate candidate{feature.index, std::move(column), *relevance};
        if (redundancy_check_new(candidate, state_, scorer_, config_, &counter)) {
            report.outcome = StepOutcome::discarded_redundant;
            ++counters_.discarded_redundant_new;
        } else {
            report.outcome = StepOutcome::selected;
            report.removed = redundancy_purge_incumbents(std::move(candidate), state_, scorer_, config_, &counter);
            counters_.removed_incumbent += report.removed.size();

            if (config_.top_k && state_.selected.size() > *config_.top_k) {
                // Rank by relevance, earlier arrival first on ties; survivors keep insertion order.
                std::vector<std::size_t> rank(state_.selected.size());
                for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
                std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
                    return state_.selected[a].relevance.value > state_.selected[b].relevance.value;
                });
                std::vector<bool> keep(rank.size(), false);
                for (std::size_t i = 0; i < *config_.top_k; ++i) keep[rank[i]] = true;
                std::vector<SelectedFeature> kept;
                for (std::size_t i = 0; i < state_.selected.size(); ++i) {
                    if (keep[i]) {
                        kept.push_back(std::move(state_.selected[i]));
                    } else {
                        report.truncated.push_back(state_.selected[i].index);
                    }
                }
                state_.selected = std::move(kept);
                counters_.removed_incumbent += report.truncated.size();
                counters_.truncated += report.truncated.size();
            }
        }
    }
    report.evaluations = counter.count;
    counters_.evaluations += counter.count;
    return report;
}

std::vector<std::size_t> Saola::selected_indices() const {
    std::vector<std::size_t> out;
    out.reserve(state_.selected.size());
    for (const auto& s : state_.selected) out.push_back(s.index);
    return out;
}

SelectionResult Saola::result() const {
    SelectionResult r;
    for (const auto& s : state_.selected) {
        r.selected_indices.push_back(s.index);
        r.relevance.push_back(s.relevance);
    }
    r.counters = counters_;
    return r;
}

SelectionResult saola_run(FeatureStream& stream, const SaolaConfig& config) {
    if (stream.size() == 0) throw std::invalid_argument("saola_run: empty feature stream");
    const auto start = std::chrono::steady_clock::now();
    Saola selector(stream.dataset(), config);
    while (auto feature = stream.next()) selector.step(*feature);
    auto result = selector.result();
    result.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace saola
