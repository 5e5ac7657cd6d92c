#pragma once

#include "saola/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

// Seeded synthetic datasets for benchmarks and tests.
namespace saola::synthetic {

/// Binary class with `pinned` mutually non-redundant anchor features
/// (noisy copies of the class on disjoint flip sets), followed by fillers that
/// alternate between all-zero columns and dominated copies of the anchors.
/// Selection settles at exactly the anchors and never holds more than them.
struct PinnedStream {
    std::size_t n_features = 1000;
    std::size_t pinned = 5;
    std::size_t n_instances = 64;
    std::uint64_t seed = 1;
};
Dataset make_pinned_stream(const PinnedStream& spec);

/// Discrete clusters: each has one dominant feature (the class with a few
/// flips) and several further-degraded copies of it; plus independent noise.
struct PlantedClusters {
    std::size_t clusters = 4;
    std::size_t copies_per_cluster = 4;
    std::size_t noise_features = 20;
    std::size_t n_instances = 400;
    std::uint64_t seed = 1;
};
struct PlantedDataset {
    Dataset data;
    std::vector<std::size_t> dominant;                // 1-based feature index per cluster
    std::vector<std::vector<std::size_t>> followers; // copies per cluster
};
PlantedDataset make_planted_clusters(const PlantedClusters& spec);

/// Hypercube-cluster generator in the style of the NIPS 2003 challenge data:
/// `informative` features carry clusters placed on hypercube vertices,
/// `redundant` features are random linear combinations of them, the rest are
/// Gaussian probes. Values are affinely rescaled and rounded to integers and
/// the columns are shuffled.
struct HypercubeSpec {
    std::size_t n_instances = 2000;
    std::size_t n_features = 500;
    std::size_t informative = 5;
    std::size_t redundant = 15;
    std::size_t clusters_per_class = 16;
    double class_sep = 1.0;
    double flip = 0.01;
    std::uint64_t seed = 1;
};
struct HypercubeDataset {
    Dataset data;
    std::vector<std::size_t> relevant; // 1-based indices of informative + redundant columns
};
HypercubeDataset make_hypercube(const HypercubeSpec& spec);

} // namespace saola::synthetic
