#pragma once

#include "saola/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace saola {

/// Discrete column with a compact alphabet. Code 0 is implicit for every
/// row not listed; listed rows carry codes in [1, alphabet).
struct DiscreteColumn {
    std::size_t length = 0;
    std::vector<std::uint32_t> rows;
    std::vector<std::uint32_t> codes;
    std::uint32_t alphabet = 1;

    /// Distinct nonzero values are mapped to codes 1..k in increasing value order.
    static DiscreteColumn from_sparse(const SparseColumn& column, std::size_t length);
    /// Dense codes are kept as they are; alphabet = max code + 1.
    static DiscreteColumn from_codes(std::span<const std::uint32_t> codes);
};

/// Contingency table over up to three discrete variables, stored as the
/// nonzero cells only. Cell keys are mixed-radix: x + dims[0] * (y + dims[1] * z).
class JointCounts {
public:
    static JointCounts tabulate(std::span<const DiscreteColumn* const> variables);

    const std::vector<std::uint32_t>& dims() const noexcept { return dims_; }
    std::size_t total() const noexcept { return total_; }
    /// (key, count) pairs, sorted by key, count > 0.
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& cells() const noexcept { return cells_; }

    /// Plug-in entropy in bits of the joint distribution.
    double entropy() const;

private:
    std::vector<std::uint32_t> dims_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cells_;
    std::size_t total_ = 0;
};

/// Plug-in entropy in bits from raw counts. Counts are summed in sorted order
/// so that the result does not depend on the order they are listed in.
double entropy_from_counts(std::vector<std::uint64_t> counts, std::size_t total);

double entropy(const DiscreteColumn& x);
double joint_entropy(const DiscreteColumn& x, const DiscreteColumn& y);
double joint_entropy(const DiscreteColumn& x, const DiscreteColumn& y, const DiscreteColumn& z);

/// I(X;Y) = H(X) + H(Y) - H(X,Y), clamped at 0.
double mutual_information(const DiscreteColumn& x, const DiscreteColumn& y);
/// I(X;Y|Z) = H(X,Z) + H(Y,Z) - H(X,Y,Z) - H(Z), clamped at 0.
double conditional_mutual_information(const DiscreteColumn& x, const DiscreteColumn& y, const DiscreteColumn& z);

struct CorrelationScore {
    double value = 0.0;
    std::optional<double> p_value;
    /// Set when a zero-variance (or all-constant) input forced the score to 0.
    bool degenerate = false;
};

/// 2 I(X;Y) / (H(X) + H(Y)); 0 when both are constant.
CorrelationScore symmetrical_uncertainty(const DiscreteColumn& x, const DiscreteColumn& y);
/// Same, with caller-cached marginal entropies.
CorrelationScore symmetrical_uncertainty(const DiscreteColumn& x, double hx, const DiscreteColumn& y, double hy);

/// Continuous column with cached first and second moments.
struct ContinuousColumn {
    std::size_t length = 0;
    std::vector<std::uint32_t> rows;
    std::vector<double> values;
    double mean = 0.0;
    double centered_ss = 0.0; // sum of squared deviations from the mean
    bool constant = true;

    static ContinuousColumn from_sparse(const SparseColumn& column, std::size_t length);
    static ContinuousColumn from_dense(std::span<const double> values);
};

/// Pearson correlation; 0 when either column has zero variance.
double pearson(const ContinuousColumn& x, const ContinuousColumn& y);

inline constexpr double kMaxAbsCorrelation = 1.0 - 1e-12;

struct FisherZ {
    double abs_r = 0.0;     // |r| after clamping to [0, kMaxAbsCorrelation]
    double z = 0.0;         // atanh(abs_r)
    double statistic = 0.0; // sqrt(n - 3) * z
    double p_value = 1.0;   // two-sided standard normal tail
};

FisherZ fisher_z_from_r(double r, std::size_t n);

/// Two-sided tail probability P(|Z| >= statistic) for a standard normal Z.
double normal_two_sided_p(double statistic);

/// Pairwise (unconditioned) Fisher's Z test. Requires n >= 4.
CorrelationScore fisher_z_test(const ContinuousColumn& x, const ContinuousColumn& y);

} // namespace saola
