#pragma once

#include "saola/dataset.hpp"
#include "saola/measure.hpp"
#include "saola/redundancy.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace saola {

struct SaolaConfig {
    MeasureConfig measure;
    BoundMode bound = BoundMode::min;
    TieBreak tie = TieBreak::strict;
    std::optional<std::size_t> top_k;

    void validate() const;
};

struct SelectedFeature {
    std::size_t index; // 1-based feature index
    PreparedColumn column;
    CorrelationScore relevance;
    std::size_t arrival; // stream position (1-based) at which it was admitted
};

/// The currently selected feature set, in insertion order.
struct SelectionState {
    std::vector<SelectedFeature> selected;
    std::size_t step = 0;
};

struct Candidate {
    std::size_t index;
    PreparedColumn column;
    CorrelationScore relevance;
};

/// Counts feature-feature and feature-class correlation evaluations.
struct EvaluationCounter {
    std::size_t count = 0;
};

/// Scores `column` against the class; nullopt means the feature is irrelevant.
std::optional<CorrelationScore> relevance_gate(const Scorer& scorer, const PreparedColumn& column,
                                               EvaluationCounter* counter = nullptr);

/// True when some incumbent makes the candidate redundant. Incumbents are
/// scanned in insertion order and the first witness wins.
bool redundancy_check_new(const Candidate& candidate, const SelectionState& state, const Scorer& scorer,
                          const SaolaConfig& config, EvaluationCounter* counter = nullptr);

/// Removes every incumbent the candidate makes redundant, then appends the
/// candidate. Returns the removed feature indices in scan order.
std::vector<std::size_t> redundancy_purge_incumbents(Candidate candidate, SelectionState& state, const Scorer& scorer,
                                                     const SaolaConfig& config, EvaluationCounter* counter = nullptr);

enum class StepOutcome { discarded_irrelevant, discarded_redundant, selected };

struct StepReport {
    StepOutcome outcome;
    std::vector<std::size_t> removed;   // incumbents purged by the new feature
    std::vector<std::size_t> truncated; // features dropped by top_k
    std::size_t evaluations = 0;
};

struct SelectionCounters {
    std::size_t seen = 0;
    std::size_t discarded_irrelevant = 0;
    std::size_t discarded_redundant_new = 0;
    std::size_t removed_incumbent = 0; // includes top_k truncation
    std::size_t truncated = 0;
    std::size_t evaluations = 0;
};

struct SelectionResult {
    std::vector<std::size_t> selected_indices;
    std::vector<CorrelationScore> relevance;
    SelectionCounters counters;
    double elapsed_ms = 0.0;
};

/// Online feature selector: feed features one at a time with `step`.
class Saola {
public:
    Saola(const Dataset& d, SaolaConfig config);

    StepReport step(const FeatureView& feature);

    const SelectionState& state() const noexcept { return state_; }
    const SelectionCounters& counters() const noexcept { return counters_; }
    const Scorer& scorer() const noexcept { return scorer_; }
    const SaolaConfig& config() const noexcept { return config_; }
    std::vector<std::size_t> selected_indices() const;
    SelectionResult result() const;

private:
    SaolaConfig config_;
    Scorer scorer_;
    SelectionState state_;
    SelectionCounters counters_;
};

/// Runs the selector over a whole stream. Throws std::invalid_argument on an empty stream.
SelectionResult saola_run(FeatureStream& stream, const SaolaConfig& config);

} // namespace saola
