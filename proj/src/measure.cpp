#include "saola/measure.hpp"

#include "saola/error.hpp"

#include <stdexcept>
#include <string>

namespace saola {

const char* to_string(Backend backend) {
    return backend == Backend::su_discrete ? "su_discrete" : "fisher_z";
}

void MeasureConfig::validate() const {
    if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must satisfy 0 <= delta < 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must satisfy 0 < alpha < 1");
}

Backend default_backend(ValueKind kind) {
    return kind == ValueKind::discrete ? Backend::su_discrete : Backend::fisher_z;
}

Scorer::Scorer(const Dataset& d, MeasureConfig config) : config_(config), n_(d.n_instances()) {
    config_.validate();
    if (n_ == 0) throw DataError("dataset has no instances");
    if (default_backend(d.value_kind()) != config_.backend)
        throw DataError(std::string("backend ") + to_string(config_.backend) + " does not apply to " +
                        to_string(d.value_kind()) + " data");
    if (config_.backend == Backend::su_discrete) {
        auto column = DiscreteColumn::from_codes(d.labels());
        const double h = entropy(column);
        target_ = DiscreteFeature{std::move(column), h};
    } else {
        if (n_ < 4) throw DataError("Fisher's Z test needs at least 4 instances");
        std::vector<double> codes(d.labels().begin(), d.labels().end());
        target_ = ContinuousColumn::from_dense(codes);
    }
}

PreparedColumn Scorer::prepare(const SparseColumn& column) const {
    if (config_.backend == Backend::su_discrete) {
        auto dc = DiscreteColumn::from_sparse(column, n_);
        const double h = entropy(dc);
        return DiscreteFeature{std::move(dc), h};
    }
    return ContinuousColumn::from_sparse(column, n_);
}

namespace {

CorrelationScore score_pair(const PreparedColumn& a, const PreparedColumn& b) {
    if (const auto* da = std::get_if<DiscreteFeature>(&a)) {
        const auto& db = std::get<DiscreteFeature>(b);
        return symmetrical_uncertainty(da->column, da->entropy, db.column, db.entropy);
    }
    return fisher_z_test(std::get<ContinuousColumn>(a), std::get<ContinuousColumn>(b));
}

} // namespace

CorrelationScore Scorer::relevance(const PreparedColumn& feature) const {
    return score_pair(feature, target_);
}

double Scorer::association(const PreparedColumn& a, const PreparedColumn& b) const {
    return score_pair(a, b).value;
}

bool Scorer::passes_gate(const CorrelationScore& relevance) const {
    if (config_.backend == Backend::su_discrete) return relevance.value > config_.delta;
    return relevance.p_value.value_or(1.0) <= config_.alpha;
}

} // namespace saola
