#include "saola/stability.hpp"

#include "saola/error.hpp"
#include "saola/parallel.hpp"
#include "saola/random.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace saola {

Matching max_weight_matching(const WeightMatrix& weights) {
    Matching result;
    if (weights.rows == 0 || weights.cols == 0) return result;

    // The assignment solver wants rows <= cols; transpose otherwise.
    const bool transposed = weights.rows > weights.cols;
    const std::size_t n = transposed ? weights.cols : weights.rows;
    const std::size_t m = transposed ? weights.rows : weights.cols;
    auto w = [&](std::size_t i, std::size_t j) { return transposed ? weights(j, i) : weights(i, j); };

    // Minimize -w with row/column potentials (1-based, column 0 is a sentinel).
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = -w(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j] == 0) continue;
        const std::size_t row = p[j] - 1, col = j - 1;
        if (w(row, col) <= 0.0) continue;
        if (transposed) {
            result.pairs.emplace_back(col, row);
        } else {
            result.pairs.emplace_back(row, col);
        }
    }
    std::sort(result.pairs.begin(), result.pairs.end());
    for (auto [r, c] : result.pairs) result.weight += weights(r, c);
    return result;
}

// ---------------------------------------------------------------------------

SimilarityWeights::SimilarityWeights(const Dataset& d) : data_(&d), cache_(d.n_features()) {
    if (d.value_kind() != ValueKind::discrete) throw std::invalid_argument("SimilarityWeights needs discrete data");
}

const DiscreteFeature& SimilarityWeights::feature(std::size_t index) {
    auto& slot = cache_.at(index - 1);
    if (!slot) {
        auto column = DiscreteColumn::from_sparse(data_->column(index), data_->n_instances());
        const double h = entropy(column);
        slot = DiscreteFeature{std::move(column), h};
    }
    return *slot;
}

double SimilarityWeights::weight(std::size_t feature_a, std::size_t feature_b) {
    const auto& a = feature(feature_a);
    const auto& b = feature(feature_b);
    return symmetrical_uncertainty(a.column, a.entropy, b.column, b.entropy).value;
}

SimilarityReport SimilarityWeights::compare(std::span<const std::size_t> s1, std::span<const std::size_t> s2) {
    SimilarityReport report;
    if (s1.empty() || s2.empty()) {
        report.empty_input = true;
        return report;
    }
    WeightMatrix w(s1.size(), s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i)
        for (std::size_t j = 0; j < s2.size(); ++j) w(i, j) = weight(s1[i], s2[j]);
    const auto matching = max_weight_matching(w);
    std::vector<double> matched;
    for (auto [i, j] : matching.pairs) {
        report.matching.push_back({s1[i], s2[j], w(i, j)});
        matched.push_back(w(i, j));
    }
    // Summing in sorted order makes compare(a, b) and compare(b, a) bit-identical.
    std::sort(matched.begin(), matched.end());
    double total = 0.0;
    for (double x : matched) total += x;
    report.similarity = total / static_cast<double>(std::max(s1.size(), s2.size()));
    return report;
}

SimilarityReport set_similarity(std::span<const std::size_t> s1, std::span<const std::size_t> s2, const Dataset& d) {
    SimilarityWeights weights(d);
    return weights.compare(s1, s2);
}

SubsetSelector saola_subset_selector(const SaolaConfig& config) {
    return [config](const Dataset& train) {
        FeatureStream stream(train, NaturalOrder{});
        return saola_run(stream, config).selected_indices;
    };
}

std::vector<std::size_t> assign_folds(std::size_t n_instances, std::size_t folds, std::uint64_t seed) {
    if (folds < 2 || folds > n_instances) throw std::invalid_argument("need 2 <= folds <= number of instances");
    std::vector<std::size_t> perm(n_instances);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(perm);
    std::vector<std::size_t> fold(n_instances);
    for (std::size_t k = 0; k < n_instances; ++k) fold[perm[k]] = k % folds;
    return fold;
}

StabilityReport run_stability(const Dataset& d, const SubsetSelector& selector, const StabilityConfig& config) {
    if (config.repeats < 1) throw std::invalid_argument("stability needs at least one repeat");
    if (d.n_instances() < config.folds) throw DataError("fewer instances than folds");

    StabilityReport report;
    const std::size_t n_runs = config.repeats * config.folds;
    report.runs.resize(n_runs);
    std::vector<std::vector<std::size_t>> fold_of(config.repeats);
    for (std::size_t r = 0; r < config.repeats; ++r)
        fold_of[r] = assign_folds(d.n_instances(), config.folds, derive_seed(config.seed, r));

    parallel_for(n_runs, config.threads, [&](std::size_t run) {
        const std::size_t r = run / config.folds;
        const std::size_t held_out = run % config.folds;
        std::vector<std::uint32_t> train_rows;
        for (std::size_t i = 0; i < d.n_instances(); ++i)
            if (fold_of[r][i] != held_out) train_rows.push_back(static_cast<std::uint32_t>(i));
        const auto train = d.select_instances(train_rows);
        report.runs[run] = StabilityRun{r, held_out, selector(train)};
    });

    const Dataset weights_data =
        d.value_kind() == ValueKind::discrete ? d : discretize(d, std::min(config.weight_bins, d.n_instances()));
    SimilarityWeights weights(weights_data);
    double total = 0.0;
    for (std::size_t a = 0; a < n_runs; ++a) {
        for (std::size_t b = a + 1; b < n_runs; ++b) {
            const double s = weights.compare(report.runs[a].selected, report.runs[b].selected).similarity;
            report.pairs.push_back({a, b, s});
            total += s;
        }
    }
    report.mean_similarity = report.pairs.empty() ? 1.0 : total / static_cast<double>(report.pairs.size());
    return report;
}

} // namespace saola
