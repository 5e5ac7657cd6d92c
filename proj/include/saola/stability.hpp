#pragma once

#include "saola/correlation.hpp"
#include "saola/dataset.hpp"
#include "saola/selector.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace saola {

/// Dense row-major weight table for bipartite matching.
struct WeightMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    WeightMatrix() = default;
    WeightMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct Matching {
    double weight = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // (row, col), sorted by row
};

/// Maximum-weight bipartite matching (Hungarian algorithm, O(n^3)).
/// Weights must be nonnegative; zero-weight pairs are left out of `pairs`.
Matching max_weight_matching(const WeightMatrix& weights);

struct MatchedPair {
    std::size_t left;  // feature index from the first set
    std::size_t right; // feature index from the second set
    double weight;
};

struct SimilarityReport {
    double similarity = 0.0;
    std::vector<MatchedPair> matching;
    bool empty_input = false;
};

/// Caches discrete columns and entropies so repeated set comparisons over
/// one dataset do not recompute them.
class SimilarityWeights {
public:
    /// `d` must be discrete; continuous data is discretized by the caller.
    explicit SimilarityWeights(const Dataset& d);

    double weight(std::size_t feature_a, std::size_t feature_b);
    SimilarityReport compare(std::span<const std::size_t> s1, std::span<const std::size_t> s2);

private:
    const DiscreteFeature& feature(std::size_t index);

    const Dataset* data_;
    std::vector<std::optional<DiscreteFeature>> cache_;
};

/// SU-weighted matching similarity of two feature sets, normalized by the larger set size.
SimilarityReport set_similarity(std::span<const std::size_t> s1, std::span<const std::size_t> s2, const Dataset& d);

using SubsetSelector = std::function<std::vector<std::size_t>(const Dataset& train)>;

/// Adapts a SAOLA configuration into a SubsetSelector running in natural order.
SubsetSelector saola_subset_selector(const SaolaConfig& config);

struct StabilityConfig {
    std::size_t folds = 5;
    std::size_t repeats = 30;
    std::uint64_t seed = 0;
    /// Bins used to discretize continuous data for the SU weights.
    std::size_t weight_bins = 10;
    std::size_t threads = 1;
};

struct StabilityRun {
    std::size_t repeat;
    std::size_t fold; // held-out fold
    std::vector<std::size_t> selected;
};

struct StabilityPair {
    std::size_t run_a; // index into runs
    std::size_t run_b;
    double similarity;
};

struct StabilityReport {
    std::vector<StabilityRun> runs;
    std::vector<StabilityPair> pairs; // all unordered run pairs, pooled across repeats
    double mean_similarity = 0.0;
};

/// Instance folds of sizes differing by at most one; fold of each instance.
std::vector<std::size_t> assign_folds(std::size_t n_instances, std::size_t folds, std::uint64_t seed);

StabilityReport run_stability(const Dataset& d, const SubsetSelector& selector, const StabilityConfig& config);

} // namespace saola
