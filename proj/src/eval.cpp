#include "saola/eval.hpp"

#include "saola/parallel.hpp"
#include "saola/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace saola {

namespace {

// Row-major dense copy of the chosen columns; features beyond the dataset's width read as 0.
std::vector<double> dense_rows(const Dataset& d, std::span<const std::size_t> features) {
    const std::size_t n = d.n_instances(), p = features.size();
    std::vector<double> out(n * p, 0.0);
    for (std::size_t f = 0; f < p; ++f) {
        if (features[f] > d.n_features()) continue;
        const auto& col = d.column(features[f]);
        for (std::size_t k = 0; k < col.rows.size(); ++k) out[col.rows[k] * p + f] = col.values[k];
    }
    return out;
}

} // namespace

std::vector<std::uint32_t> knn_predict(const Dataset& train, const Dataset& test,
                                       std::span<const std::size_t> features, std::size_t k) {
    if (features.empty()) throw std::invalid_argument("knn_predict: empty feature set");
    if (k < 1) throw std::invalid_argument("knn_predict: k must be >= 1");
    if (train.n_instances() == 0) throw std::invalid_argument("knn_predict: empty training set");
    for (auto f : features)
        if (f < 1) throw std::invalid_argument("knn_predict: feature indices are 1-based");

    const std::size_t p = features.size();
    const auto xs = dense_rows(train, features);
    const auto qs = dense_rows(test, features);
    const bool mismatch = train.value_kind() == ValueKind::discrete;
    const std::size_t n_train = train.n_instances();
    k = std::min(k, n_train);

    std::vector<std::uint32_t> predicted(test.n_instances());
    std::vector<std::pair<double, std::size_t>> dist(n_train);
    for (std::size_t q = 0; q < test.n_instances(); ++q) {
        const double* query = qs.data() + q * p;
        for (std::size_t i = 0; i < n_train; ++i) {
            const double* x = xs.data() + i * p;
            double acc = 0.0;
            for (std::size_t f = 0; f < p; ++f) {
                if (mismatch) {
                    acc += x[f] != query[f] ? 1.0 : 0.0;
                } else {
                    const double diff = x[f] - query[f];
                    acc += diff * diff;
                }
            }
            dist[i] = {acc, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

        std::vector<std::size_t> votes(train.n_classes(), 0);
        for (std::size_t j = 0; j < k; ++j) ++votes[train.labels()[dist[j].second]];
        const std::size_t best = *std::max_element(votes.begin(), votes.end());
        for (std::size_t j = 0; j < k; ++j) {
            const auto label = train.labels()[dist[j].second];
            if (votes[label] == best) {
                predicted[q] = label;
                break;
            }
        }
    }
    return predicted;
}

double accuracy(std::span<const std::uint32_t> predicted, std::span<const std::uint32_t> truth) {
    if (predicted.size() != truth.size()) throw std::invalid_argument("accuracy: length mismatch");
    if (truth.empty()) throw std::invalid_argument("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

TrialReport order_trials(const Dataset& train, const Dataset& test, const SaolaConfig& config,
                         const TrialConfig& trials) {
    if (trials.n_trials < 2) throw std::invalid_argument("order_trials: need at least 2 trials");
    TrialReport report;
    report.trials.resize(trials.n_trials);
    parallel_for(trials.n_trials, trials.threads, [&](std::size_t t) {
        const std::uint64_t order_seed = derive_seed(trials.seed, t);
        FeatureStream stream(train, ShuffledOrder{order_seed});
        auto selected = saola_run(stream, config).selected_indices;
        double acc = 0.0;
        if (!selected.empty()) acc = accuracy(knn_predict(train, test, selected, trials.k), test.labels());
        report.trials[t] = Trial{order_seed, std::move(selected), acc};
    });

    const double n = static_cast<double>(trials.n_trials);
    double sum = 0.0, size_sum = 0.0;
    for (const auto& t : report.trials) {
        sum += t.accuracy;
        size_sum += static_cast<double>(t.selected.size());
    }
    report.mean_accuracy = sum / n;
    report.mean_size = size_sum / n;
    double ss = 0.0;
    for (const auto& t : report.trials) ss += (t.accuracy - report.mean_accuracy) * (t.accuracy - report.mean_accuracy);
    report.stddev_accuracy = std::sqrt(ss / (n - 1.0));
    return report;
}

} // namespace saola
