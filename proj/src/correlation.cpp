#include "saola/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace saola {

namespace {

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("column length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

// Dense tables up to this many cells; larger products fall back to sort-and-count.
constexpr std::uint64_t kDenseCellLimit = 4096;

} // namespace

DiscreteColumn DiscreteColumn::from_sparse(const SparseColumn& column, std::size_t length) {
    DiscreteColumn out;
    out.length = length;
    out.rows = column.rows;
    std::vector<double> distinct = column.values;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    out.codes.reserve(column.values.size());
    for (double v : column.values) {
        const auto pos = std::lower_bound(distinct.begin(), distinct.end(), v) - distinct.begin();
        out.codes.push_back(static_cast<std::uint32_t>(pos + 1));
    }
    out.alphabet = static_cast<std::uint32_t>(distinct.size() + 1);
    return out;
}

DiscreteColumn DiscreteColumn::from_codes(std::span<const std::uint32_t> codes) {
    DiscreteColumn out;
    out.length = codes.size();
    std::uint32_t max_code = 0;
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (codes[i] != 0) {
            out.rows.push_back(static_cast<std::uint32_t>(i));
            out.codes.push_back(codes[i]);
            max_code = std::max(max_code, codes[i]);
        }
    }
    out.alphabet = max_code + 1;
    return out;
}

JointCounts JointCounts::tabulate(std::span<const DiscreteColumn* const> variables) {
    if (variables.empty() || variables.size() > 3) throw std::invalid_argument("JointCounts: need 1 to 3 variables");
    const std::size_t n = variables[0]->length;
    if (n == 0) throw std::invalid_argument("JointCounts: empty column");
    for (const auto* v : variables) require_same_length(n, v->length);

    JointCounts jc;
    jc.total_ = n;
    std::uint64_t cells = 1;
    for (const auto* v : variables) {
        jc.dims_.push_back(v->alphabet);
        cells *= v->alphabet;
    }

    // k-way merge over the sorted nonzero rows; every merged row yields one key.
    const std::size_t k = variables.size();
    std::size_t cursor[3] = {0, 0, 0};
    std::vector<std::uint64_t> keys;
    for (;;) {
        std::uint32_t row = std::numeric_limits<std::uint32_t>::max();
        for (std::size_t v = 0; v < k; ++v)
            if (cursor[v] < variables[v]->rows.size()) row = std::min(row, variables[v]->rows[cursor[v]]);
        if (row == std::numeric_limits<std::uint32_t>::max()) break;
        std::uint64_t key = 0;
        std::uint64_t radix = 1;
        for (std::size_t v = 0; v < k; ++v) {
            const auto* var = variables[v];
            std::uint32_t code = 0;
            if (cursor[v] < var->rows.size() && var->rows[cursor[v]] == row) code = var->codes[cursor[v]++];
            key += radix * code;
            radix *= var->alphabet;
        }
        keys.push_back(key);
    }
    const std::uint64_t all_zero = n - keys.size();

    if (cells <= kDenseCellLimit) {
        std::vector<std::uint64_t> table(cells, 0);
        table[0] = all_zero;
        for (auto key : keys) ++table[key];
        for (std::uint64_t c = 0; c < cells; ++c)
            if (table[c] > 0) jc.cells_.emplace_back(c, table[c]);
    } else {
        std::sort(keys.begin(), keys.end());
        if (all_zero > 0) jc.cells_.emplace_back(0, all_zero);
        for (std::size_t i = 0; i < keys.size();) {
            std::size_t j = i;
            while (j < keys.size() && keys[j] == keys[i]) ++j;
            if (keys[i] == 0 && !jc.cells_.empty() && jc.cells_.front().first == 0) {
                jc.cells_.front().second += j - i;
            } else {
                jc.cells_.emplace_back(keys[i], j - i);
            }
            i = j;
        }
    }
    return jc;
}

double entropy_from_counts(std::vector<std::uint64_t> counts, std::size_t total) {
    if (total == 0) throw std::invalid_argument("entropy of an empty distribution");
    std::sort(counts.begin(), counts.end());
    // -sum p log2 p rather than log2 n - sum c log2 c / n: a single cell then gives exactly 0.
    const double n = static_cast<double>(total);
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h < 0.0 ? 0.0 : h;
}

double JointCounts::entropy() const {
    std::vector<std::uint64_t> counts;
    counts.reserve(cells_.size());
    for (const auto& [key, c] : cells_) counts.push_back(c);
    return entropy_from_counts(std::move(counts), total_);
}

double entropy(const DiscreteColumn& x) {
    const DiscreteColumn* vars[] = {&x};
    return JointCounts::tabulate(vars).entropy();
}

double joint_entropy(const DiscreteColumn& x, const DiscreteColumn& y) {
    const DiscreteColumn* vars[] = {&x, &y};
    return JointCounts::tabulate(vars).entropy();
}

double joint_entropy(const DiscreteColumn& x, const DiscreteColumn& y, const DiscreteColumn& z) {
    const DiscreteColumn* vars[] = {&x, &y, &z};
    return JointCounts::tabulate(vars).entropy();
}

double mutual_information(const DiscreteColumn& x, const DiscreteColumn& y) {
    require_same_length(x.length, y.length);
    const double mi = entropy(x) + entropy(y) - joint_entropy(x, y);
    return std::max(mi, 0.0);
}

double conditional_mutual_information(const DiscreteColumn& x, const DiscreteColumn& y, const DiscreteColumn& z) {
    require_same_length(x.length, y.length);
    require_same_length(x.length, z.length);
    const double cmi = joint_entropy(x, z) + joint_entropy(y, z) - joint_entropy(x, y, z) - entropy(z);
    return std::max(cmi, 0.0);
}

CorrelationScore symmetrical_uncertainty(const DiscreteColumn& x, double hx, const DiscreteColumn& y, double hy) {
    require_same_length(x.length, y.length);
    const double denom = hx + hy;
    if (denom <= 0.0) return {0.0, std::nullopt, true};
    const double mi = std::max(denom - joint_entropy(x, y), 0.0);
    return {std::clamp(2.0 * mi / denom, 0.0, 1.0), std::nullopt, false};
}

CorrelationScore symmetrical_uncertainty(const DiscreteColumn& x, const DiscreteColumn& y) {
    require_same_length(x.length, y.length);
    return symmetrical_uncertainty(x, entropy(x), y, entropy(y));
}

// ---------------------------------------------------------------------------
// Continuous

ContinuousColumn ContinuousColumn::from_sparse(const SparseColumn& column, std::size_t length) {
    ContinuousColumn out;
    out.length = length;
    out.rows = column.rows;
    out.values = column.values;
    if (length == 0) return out;
    const bool all_stored = column.values.size() == length;
    out.constant = column.values.empty() ||
                   (all_stored && std::all_of(column.values.begin(), column.values.end(),
                                              [&](double v) { return v == column.values.front(); }));
    double sum = 0.0;
    for (double v : column.values) sum += v;
    out.mean = sum / static_cast<double>(length);
    if (out.constant) return out;
    double ss = 0.0;
    for (double v : column.values) ss += (v - out.mean) * (v - out.mean);
    ss += static_cast<double>(length - column.values.size()) * out.mean * out.mean;
    out.centered_ss = ss;
    return out;
}

ContinuousColumn ContinuousColumn::from_dense(std::span<const double> values) {
    const auto sparse = SparseColumn::from_dense(values);
    return from_sparse(sparse, values.size());
}

double pearson(const ContinuousColumn& x, const ContinuousColumn& y) {
    require_same_length(x.length, y.length);
    if (x.constant || y.constant) return 0.0;

    // Centered cross product in one merge pass: rows where only one side is
    // stored contribute (v - mean) * (-other_mean); rows where neither is
    // stored contribute mean_x * mean_y.
    const double mx = x.mean;
    const double my = y.mean;
    double cross = 0.0;
    std::size_t i = 0, j = 0, touched = 0;
    while (i < x.rows.size() || j < y.rows.size()) {
        if (j >= y.rows.size() || (i < x.rows.size() && x.rows[i] < y.rows[j])) {
            cross += (x.values[i] - mx) * (-my);
            ++i;
        } else if (i >= x.rows.size() || y.rows[j] < x.rows[i]) {
            cross += (-mx) * (y.values[j] - my);
            ++j;
        } else {
            cross += (x.values[i] - mx) * (y.values[j] - my);
            ++i;
            ++j;
        }
        ++touched;
    }
    cross += static_cast<double>(x.length - touched) * mx * my;
    const double r = cross / std::sqrt(x.centered_ss * y.centered_ss);
    return std::clamp(r, -1.0, 1.0);
}

double normal_two_sided_p(double statistic) {
    return std::erfc(std::abs(statistic) / std::numbers::sqrt2);
}

FisherZ fisher_z_from_r(double r, std::size_t n) {
    if (n < 4) throw std::invalid_argument("Fisher's Z test needs at least 4 instances");
    FisherZ out;
    out.abs_r = std::clamp(std::abs(r), 0.0, kMaxAbsCorrelation);
    out.z = 0.5 * std::log((1.0 + out.abs_r) / (1.0 - out.abs_r));
    out.statistic = std::sqrt(static_cast<double>(n - 3)) * out.z;
    out.p_value = normal_two_sided_p(out.statistic);
    return out;
}

CorrelationScore fisher_z_test(const ContinuousColumn& x, const ContinuousColumn& y) {
    require_same_length(x.length, y.length);
    if (x.length < 4) throw std::invalid_argument("Fisher's Z test needs at least 4 instances");
    if (x.constant || y.constant) return {0.0, 1.0, true};
    const auto fz = fisher_z_from_r(pearson(x, y), x.length);
    return {fz.abs_r, fz.p_value, false};
}

} // namespace saola
