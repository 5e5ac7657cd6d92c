#pragma once

#include "saola/correlation.hpp"
#include "saola/dataset.hpp"

#include <variant>

namespace saola {

enum class Backend {
    su_discrete, // symmetrical uncertainty over discrete codes, gate SU > delta
    fisher_z,    // |Pearson r| with Fisher's Z p-value, gate p <= alpha
};

const char* to_string(Backend backend);

struct MeasureConfig {
    Backend backend = Backend::su_discrete;
    double delta = 0.0;
    double alpha = 0.01;

    /// Throws std::invalid_argument unless 0 <= delta < 1 and 0 < alpha < 1.
    void validate() const;
};

/// Backend the dataset's value kind calls for.
Backend default_backend(ValueKind kind);

struct DiscreteFeature {
    DiscreteColumn column;
    double entropy = 0.0;
};

/// A column in the representation its backend scores it with.
using PreparedColumn = std::variant<DiscreteFeature, ContinuousColumn>;

/// Binds a MeasureConfig to one dataset's class column.
///
/// `relevance` scores a feature against the class, `association` scores two
/// features against each other on the same [0, 1] scale, and `passes_gate`
/// applies the delta/alpha rule to a relevance score.
class Scorer {
public:
    Scorer(const Dataset& d, MeasureConfig config);

    const MeasureConfig& config() const noexcept { return config_; }
    std::size_t n_instances() const noexcept { return n_; }

    PreparedColumn prepare(const SparseColumn& column) const;
    CorrelationScore relevance(const PreparedColumn& feature) const;
    double association(const PreparedColumn& a, const PreparedColumn& b) const;
    bool passes_gate(const CorrelationScore& relevance) const;

private:
    MeasureConfig config_;
    std::size_t n_;
    PreparedColumn target_;
};

} // namespace saola
