#include "saola/synthetic.hpp"

#include "saola/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace saola::synthetic {

namespace {

// Balanced binary labels in random order.
std::vector<std::uint32_t> balanced_labels(std::size_t n, Rng& rng) {
    std::vector<std::uint32_t> labels(n, 0);
    for (std::size_t i = 0; i < n / 2; ++i) labels[i] = 1;
    rng.shuffle(labels);
    return labels;
}

SparseColumn binary_column(const std::vector<std::uint32_t>& bits) {
    SparseColumn c;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0) {
            c.rows.push_back(static_cast<std::uint32_t>(i));
            c.values.push_back(1.0);
        }
    }
    return c;
}

std::vector<std::uint32_t> flipped(std::vector<std::uint32_t> bits, const std::vector<std::size_t>& positions) {
    for (auto p : positions) bits[p] ^= 1u;
    return bits;
}

} // namespace

Dataset make_pinned_stream(const PinnedStream& spec) {
    const std::size_t n = spec.n_instances, s = spec.pinned;
    if (s == 0 || s > spec.n_features) throw std::invalid_argument("pinned stream: need 1 <= pinned <= n_features");
    const std::size_t reserved = s * (s + 1) / 2;
    if (reserved + 4 > n) throw std::invalid_argument("pinned stream: too few instances for the anchor flip sets");

    Rng rng(spec.seed);
    const auto labels = balanced_labels(n, rng);
    std::vector<std::size_t> positions(n);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    rng.shuffle(positions);

    // Anchor j flips j + 1 positions, disjoint from every other anchor's.
    std::vector<std::vector<std::uint32_t>> anchors;
    std::size_t used = 0;
    for (std::size_t j = 0; j < s; ++j) {
        std::vector<std::size_t> flips(positions.begin() + static_cast<std::ptrdiff_t>(used),
                                       positions.begin() + static_cast<std::ptrdiff_t>(used + j + 1));
        used += j + 1;
        anchors.push_back(flipped(labels, flips));
    }
    const std::size_t pool = n - used;

    std::vector<SparseColumn> columns;
    columns.reserve(spec.n_features);
    for (const auto& a : anchors) columns.push_back(binary_column(a));
    for (std::size_t t = s; t < spec.n_features; ++t) {
        if ((t - s) % 2 == 0) {
            columns.emplace_back();
        } else {
            // One extra flip outside every anchor's flip set.
            const std::size_t extra = positions[used + static_cast<std::size_t>(rng.below(pool))];
            columns.push_back(binary_column(flipped(anchors[(t - s) / 2 % s], {extra})));
        }
    }
    return Dataset(std::move(columns), labels, ValueKind::discrete, {"0", "1"});
}

PlantedDataset make_planted_clusters(const PlantedClusters& spec) {
    const std::size_t n = spec.n_instances;
    Rng rng(spec.seed);
    const auto labels = balanced_labels(n, rng);
    std::vector<std::size_t> positions(n);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    rng.shuffle(positions);

    // Dominant of cluster c flips 2 + 2c private positions.
    std::size_t used = 0;
    std::vector<std::vector<std::uint32_t>> dominants;
    for (std::size_t c = 0; c < spec.clusters; ++c) {
        const std::size_t k = 2 + 2 * c;
        if (used + k >= n) throw std::invalid_argument("planted clusters: too few instances");
        std::vector<std::size_t> flips(positions.begin() + static_cast<std::ptrdiff_t>(used),
                                       positions.begin() + static_cast<std::ptrdiff_t>(used + k));
        used += k;
        dominants.push_back(flipped(labels, flips));
    }
    const std::size_t pool = n - used;
    if (pool < 3 + spec.copies_per_cluster) throw std::invalid_argument("planted clusters: too few instances");

    std::vector<SparseColumn> columns;
    PlantedDataset out;
    out.followers.resize(spec.clusters);
    for (std::size_t c = 0; c < spec.clusters; ++c) {
        columns.push_back(binary_column(dominants[c]));
        out.dominant.push_back(columns.size());
        for (std::size_t j = 0; j < spec.copies_per_cluster; ++j) {
            // Followers add 3 + j further flips drawn from the shared pool.
            std::vector<std::size_t> pool_idx(pool);
            std::iota(pool_idx.begin(), pool_idx.end(), used);
            rng.shuffle(pool_idx);
            std::vector<std::size_t> flips;
            for (std::size_t f = 0; f < 3 + j; ++f) flips.push_back(positions[pool_idx[f]]);
            columns.push_back(binary_column(flipped(dominants[c], flips)));
            out.followers[c].push_back(columns.size());
        }
    }
    for (std::size_t j = 0; j < spec.noise_features; ++j) {
        std::vector<std::uint32_t> bits(n);
        for (auto& b : bits) b = static_cast<std::uint32_t>(rng.below(2));
        columns.push_back(binary_column(bits));
    }
    out.data = Dataset(std::move(columns), labels, ValueKind::discrete, {"0", "1"});
    return out;
}

HypercubeDataset make_hypercube(const HypercubeSpec& spec) {
    const std::size_t n = spec.n_instances, inf = spec.informative, red = spec.redundant;
    const std::size_t n_clusters = 2 * spec.clusters_per_class;
    if (inf + red > spec.n_features) throw std::invalid_argument("hypercube: informative + redundant > n_features");
    if (inf >= 31 || n_clusters > (std::size_t{1} << inf))
        throw std::invalid_argument("hypercube: more clusters than hypercube vertices");

    Rng rng(spec.seed);
    // Distinct vertices of the informative hypercube.
    std::vector<std::uint64_t> vertices(std::size_t{1} << inf);
    std::iota(vertices.begin(), vertices.end(), std::uint64_t{0});
    rng.shuffle(vertices);
    vertices.resize(n_clusters);

    std::vector<std::vector<double>> x(spec.n_features, std::vector<double>(n, 0.0));
    std::vector<std::uint32_t> labels(n);
    for (std::size_t k = 0; k < n_clusters; ++k) {
        // Random linear map per cluster, then shift to its vertex.
        std::vector<double> a(inf * inf);
        for (auto& v : a) v = 2.0 * rng.uniform() - 1.0;
        const std::size_t begin = k * n / n_clusters, end = (k + 1) * n / n_clusters;
        for (std::size_t i = begin; i < end; ++i) {
            std::vector<double> z(inf);
            for (auto& v : z) v = rng.normal();
            for (std::size_t f = 0; f < inf; ++f) {
                double acc = 0.0;
                for (std::size_t g = 0; g < inf; ++g) acc += z[g] * a[g * inf + f];
                const double corner = ((vertices[k] >> f) & 1u) ? spec.class_sep : -spec.class_sep;
                x[f][i] = acc + corner;
            }
            labels[i] = static_cast<std::uint32_t>(k % 2);
        }
    }
    std::vector<double> b(inf * red);
    for (auto& v : b) v = 2.0 * rng.uniform() - 1.0;
    for (std::size_t r = 0; r < red; ++r)
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t f = 0; f < inf; ++f) acc += x[f][i] * b[f * red + r];
            x[inf + r][i] = acc;
        }
    for (std::size_t f = inf + red; f < spec.n_features; ++f)
        for (std::size_t i = 0; i < n; ++i) x[f][i] = rng.normal();
    for (auto& l : labels)
        if (rng.uniform() < spec.flip) l ^= 1u;

    // Shuffle instances and columns; rescale to positive integers.
    std::vector<std::size_t> row_perm(n), col_perm(spec.n_features);
    std::iota(row_perm.begin(), row_perm.end(), std::size_t{0});
    std::iota(col_perm.begin(), col_perm.end(), std::size_t{0});
    rng.shuffle(row_perm);
    rng.shuffle(col_perm);

    HypercubeDataset out;
    std::vector<SparseColumn> columns(spec.n_features);
    std::vector<double> dense(n);
    for (std::size_t c = 0; c < spec.n_features; ++c) {
        const std::size_t src = col_perm[c];
        for (std::size_t i = 0; i < n; ++i) dense[i] = std::round(500.0 + 20.0 * x[src][row_perm[i]]);
        columns[c] = SparseColumn::from_dense(dense);
        if (src < inf + red) out.relevant.push_back(c + 1);
    }
    std::vector<std::uint32_t> shuffled_labels(n);
    for (std::size_t i = 0; i < n; ++i) shuffled_labels[i] = labels[row_perm[i]];
    out.data = Dataset(std::move(columns), std::move(shuffled_labels), ValueKind::continuous, {"-1", "1"});
    return out;
}

} // namespace saola::synthetic
