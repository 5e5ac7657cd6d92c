#pragma once

#include "saola/dataset.hpp"
#include "saola/selector.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace saola {

/// k-NN prediction restricted to `features`. Continuous data uses Euclidean
/// distance on raw values, discrete data counts per-feature mismatches.
/// Distance ties go to the lowest training instance; vote ties go to the
/// label of the nearest neighbor among the tied labels.
std::vector<std::uint32_t> knn_predict(const Dataset& train, const Dataset& test,
                                       std::span<const std::size_t> features, std::size_t k = 1);

double accuracy(std::span<const std::uint32_t> predicted, std::span<const std::uint32_t> truth);

struct Trial {
    std::uint64_t order_seed;
    std::vector<std::size_t> selected;
    double accuracy;
};

struct TrialReport {
    std::vector<Trial> trials;
    double mean_accuracy = 0.0;
    double stddev_accuracy = 0.0; // sample standard deviation (n - 1)
    double mean_size = 0.0;
};

struct TrialConfig {
    std::size_t n_trials = 30;
    std::uint64_t seed = 0;
    std::size_t k = 1;
    std::size_t threads = 1;
};

/// Runs the selector on `n_trials` shuffled feature orders of `train` and
/// scores each selection with k-NN on `test`. An empty selection scores 0.
TrialReport order_trials(const Dataset& train, const Dataset& test, const SaolaConfig& config,
                         const TrialConfig& trials);

} // namespace saola
