#pragma once

#include "saola/dataset.hpp"
#include "saola/measure.hpp"
#include "saola/selector.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace saola {

struct GroupMember {
    std::size_t index; // 1-based feature index
    PreparedColumn column;
    CorrelationScore relevance;
};

struct FeatureGroup {
    std::size_t group_id;
    std::vector<GroupMember> members;
};

struct GroupState {
    std::vector<FeatureGroup> groups; // insertion order
    std::size_t step = 0;
};

struct GroupCounters {
    std::size_t groups_seen = 0;
    std::size_t groups_discarded_irrelevant = 0;
    std::size_t groups_emptied = 0; // new groups emptied on arrival plus incumbents emptied later
    std::size_t features_seen = 0;
    std::size_t features_discarded_irrelevant = 0;
    std::size_t features_removed_intra = 0;
    std::size_t features_removed_inter = 0;
    std::size_t evaluations = 0;
};

struct RetainedGroup {
    std::size_t group_id;
    std::vector<std::size_t> members;
    std::vector<CorrelationScore> relevance;
};

struct GroupResult {
    std::vector<RetainedGroup> groups;
    GroupCounters counters;
    double elapsed_ms = 0.0;

    std::size_t n_features() const;
    /// All retained feature indices, group by group.
    std::vector<std::size_t> feature_indices() const;
};

/// Drops members failing the relevance gate. nullopt means every member failed.
std::optional<FeatureGroup> irrelevant_group_gate(const GroupView& group, const Scorer& scorer,
                                                  EvaluationCounter* counter = nullptr);

/// Removes members shadowed by another member of the same group, rescanning
/// until no rule fires. Under discard_new a member wins ties against members
/// stored after it. Returns the number of removed members.
std::size_t prune_within_group(FeatureGroup& group, const Scorer& scorer, const SaolaConfig& config,
                               EvaluationCounter* counter = nullptr);

struct PurgeReport {
    std::size_t removed_from_new = 0;
    std::size_t removed_from_incumbents = 0;
    std::size_t incumbents_emptied = 0;
    bool inserted = false;
};

/// Inter-group redundancy between the selected groups and a pruned new group.
///
/// New members shadowed by any incumbent member are removed first; if the new
/// group survives, incumbent members shadowed by a surviving new member are
/// removed, emptied incumbents are dropped, and the new group is appended.
PurgeReport purge_between_groups(GroupState& state, FeatureGroup group, const Scorer& scorer,
                                 const SaolaConfig& config, EvaluationCounter* counter = nullptr);

class GroupSaola {
public:
    /// `config.top_k` is not used by group selection.
    GroupSaola(const Dataset& d, SaolaConfig config);

    void step(const GroupView& group);

    const GroupState& state() const noexcept { return state_; }
    const GroupCounters& counters() const noexcept { return counters_; }
    GroupResult result() const;

private:
    SaolaConfig config_;
    Scorer scorer_;
    GroupState state_;
    GroupCounters counters_;
};

GroupResult group_saola_run(GroupStream& stream, const SaolaConfig& config);

} // namespace saola
