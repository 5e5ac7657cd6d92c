#pragma once

#include "saola/dataset.hpp"
#include "saola/random.hpp"

#include <cstdint>
#include <vector>

namespace fixtures {

using saola::Dataset;
using saola::ValueKind;

/// Builds a dataset from dense columns; zeros become absent entries.
inline Dataset from_columns(const std::vector<std::vector<double>>& columns, std::vector<std::uint32_t> labels,
                            ValueKind kind = ValueKind::discrete) {
    std::vector<saola::SparseColumn> sparse;
    for (const auto& c : columns) sparse.push_back(saola::SparseColumn::from_dense(c));
    return Dataset(std::move(sparse), std::move(labels), kind);
}

/// Balanced binary labels in random order.
inline std::vector<std::uint32_t> balanced_labels(std::size_t n, saola::Rng& rng) {
    std::vector<std::uint32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint32_t>(i % 2);
    rng.shuffle(labels);
    return labels;
}

inline std::vector<double> as_values(const std::vector<std::uint32_t>& codes) {
    return std::vector<double>(codes.begin(), codes.end());
}

/// Copy of `codes` (binary) with the listed positions flipped.
inline std::vector<double> flipped(const std::vector<std::uint32_t>& codes, const std::vector<std::size_t>& at) {
    auto v = as_values(codes);
    for (auto i : at) v[i] = 1.0 - v[i];
    return v;
}

inline std::vector<double> random_codes(std::size_t n, std::uint64_t alphabet, saola::Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(rng.below(alphabet));
    return v;
}

} // namespace fixtures
