#include "saola/group_selector.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace saola {

std::size_t GroupResult::n_features() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.members.size();
    return n;
}

std::vector<std::size_t> GroupResult::feature_indices() const {
    std::vector<std::size_t> out;
    for (const auto& g : groups) out.insert(out.end(), g.members.begin(), g.members.end());
    return out;
}

std::optional<FeatureGroup> irrelevant_group_gate(const GroupView& group, const Scorer& scorer,
                                                  EvaluationCounter* counter) {
    FeatureGroup kept{group.group_id, {}};
    for (const auto& member : group.members) {
        auto column = scorer.prepare(*member.column);
        if (auto rel = relevance_gate(scorer, column, counter))
            kept.members.push_back(GroupMember{member.index, std::move(column), *rel});
    }
    if (kept.members.empty()) return std::nullopt;
    return kept;
}

std::size_t prune_within_group(FeatureGroup& group, const Scorer& scorer, const SaolaConfig& config,
                               EvaluationCounter* counter) {
    const std::size_t m = group.members.size();
    if (m < 2) return 0;
    const bool discard_new = config.tie == TieBreak::discard_new;

    // Pairwise correlations are symmetric and evaluated lazily, at most once per pair.
    std::vector<double> corr(m * m, std::numeric_limits<double>::quiet_NaN());
    auto correlation = [&](std::size_t a, std::size_t b) {
        double& c = corr[a * m + b];
        if (std::isnan(c)) {
            if (counter) ++counter->count;
            c = scorer.association(group.members[a].column, group.members[b].column);
            corr[b * m + a] = c;
        }
        return c;
    };

    std::vector<bool> alive(m, true);
    std::size_t removed = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t j = 0; j < m; ++j) {
            if (!alive[j]) continue;
            const double rel_j = group.members[j].relevance.value;
            for (std::size_t y = 0; y < m; ++y) {
                if (y == j || !alive[y]) continue;
                const double rel_y = group.members[y].relevance.value;
                const bool allow_tie = discard_new && y < j;
                if (!could_shadow(rel_y, rel_j, allow_tie)) continue;
                if (shadows(rel_y, rel_j, correlation(j, y), config.bound, allow_tie)) {
                    alive[j] = false;
                    ++removed;
                    changed = true;
                    break;
                }
            }
        }
    }

    std::vector<GroupMember> kept;
    for (std::size_t j = 0; j < m; ++j)
        if (alive[j]) kept.push_back(std::move(group.members[j]));
    group.members = std::move(kept);
    return removed;
}

PurgeReport purge_between_groups(GroupState& state, FeatureGroup group, const Scorer& scorer,
                                 const SaolaConfig& config, EvaluationCounter* counter) {
    PurgeReport report;
    const bool discard_new = config.tie == TieBreak::discard_new;
    auto correlation = [&](const GroupMember& a, const GroupMember& b) {
        if (counter) ++counter->count;
        return scorer.association(a.column, b.column);
    };

    // New members shadowed by an incumbent member.
    std::erase_if(group.members, [&](const GroupMember& f) {
        for (const auto& g : state.groups) {
            for (const auto& k : g.members) {
                if (!could_shadow(k.relevance.value, f.relevance.value, discard_new)) continue;
                if (shadows(k.relevance.value, f.relevance.value, correlation(f, k), config.bound, discard_new)) {
                    ++report.removed_from_new;
                    return true;
                }
            }
        }
        return false;
    });
    if (group.members.empty()) return report;

    // Incumbent members shadowed by a surviving new member.
    for (auto& g : state.groups) {
        std::erase_if(g.members, [&](const GroupMember& k) {
            for (const auto& f : group.members) {
                if (!could_shadow(f.relevance.value, k.relevance.value, false)) continue;
                if (shadows(f.relevance.value, k.relevance.value, correlation(k, f), config.bound, false)) {
                    ++report.removed_from_incumbents;
                    return true;
                }
            }
            return false;
        });
    }
    report.incumbents_emptied = std::erase_if(state.groups, [](const FeatureGroup& g) { return g.members.empty(); });
    state.groups.push_back(std::move(group));
    report.inserted = true;
    return report;
}

GroupSaola::GroupSaola(const Dataset& d, SaolaConfig config) : config_(config), scorer_(d, config.measure) {
    config_.validate();
}

void GroupSaola::step(const GroupView& group) {
    if (group.members.empty()) throw std::invalid_argument("group-SAOLA: empty group");
    EvaluationCounter counter;
    ++state_.step;
    ++counters_.groups_seen;
    counters_.features_seen += group.members.size();

    auto kept = irrelevant_group_gate(group, scorer_, &counter);
    if (!kept) {
        ++counters_.groups_discarded_irrelevant;
        counters_.features_discarded_irrelevant += group.members.size();
    } else {
        counters_.features_discarded_irrelevant += group.members.size() - kept->members.size();
        counters_.features_removed_intra += prune_within_group(*kept, scorer_, config_, &counter);
        const auto purge = purge_between_groups(state_, std::move(*kept), scorer_, config_, &counter);
        counters_.features_removed_inter += purge.removed_from_new + purge.removed_from_incumbents;
        counters_.groups_emptied += purge.incumbents_emptied + (purge.inserted ? 0 : 1);
    }
    counters_.evaluations += counter.count;
}

GroupResult GroupSaola::result() const {
    GroupResult r;
    for (const auto& g : state_.groups) {
        RetainedGroup out{g.group_id, {}, {}};
        for (const auto& m : g.members) {
            out.members.push_back(m.index);
            out.relevance.push_back(m.relevance);
        }
        r.groups.push_back(std::move(out));
    }
    r.counters = counters_;
    return r;
}

GroupResult group_saola_run(GroupStream& stream, const SaolaConfig& config) {
    if (stream.size() == 0) throw std::invalid_argument("group_saola_run: empty group stream");
    const auto start = std::chrono::steady_clock::now();
    GroupSaola selector(stream.dataset(), config);
    while (auto group = stream.next()) selector.step(*group);
    auto result = selector.result();
    result.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace saola
