#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace saola {

enum class ValueKind { discrete, continuous };

const char* to_string(ValueKind kind);
ValueKind parse_value_kind(const std::string& text);

/// One feature column in sparse form. Rows are 0-based instance indices,
/// strictly increasing; absent rows hold the implicit value 0 and no stored
/// value is exactly 0.
struct SparseColumn {
    std::vector<std::uint32_t> rows;
    std::vector<double> values;

    std::size_t nnz() const noexcept { return rows.size(); }
    bool empty() const noexcept { return rows.empty(); }

    /// Dense copy of length n.
    std::vector<double> dense(std::size_t n) const;

    static SparseColumn from_dense(std::span<const double> dense);

    friend bool operator==(const SparseColumn&, const SparseColumn&) = default;
};

/// Immutable column-major labeled dataset.
///
/// Feature indices in the public API are 1-based, matching the svmlight
/// convention; labels are dense codes 0..n_classes()-1 assigned in order of
/// first appearance.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<SparseColumn> columns, std::vector<std::uint32_t> labels,
            ValueKind kind, std::vector<std::string> label_names = {});

    std::size_t n_instances() const noexcept { return labels_.size(); }
    std::size_t n_features() const noexcept { return columns_.size(); }
    std::size_t n_classes() const noexcept { return label_names_.size(); }
    ValueKind value_kind() const noexcept { return kind_; }

    /// Column for a 1-based feature index.
    const SparseColumn& column(std::size_t feature_index) const;
    std::span<const SparseColumn> columns() const noexcept { return columns_; }
    std::span<const std::uint32_t> labels() const noexcept { return labels_; }
    const std::vector<std::string>& label_names() const noexcept { return label_names_; }

    /// Count of instances per label code.
    std::vector<std::size_t> label_histogram() const;

    /// New dataset holding only the given instances (0-based, any order kept as given).
    Dataset select_instances(std::span<const std::uint32_t> instances) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::vector<SparseColumn> columns_;
    std::vector<std::uint32_t> labels_;
    ValueKind kind_ = ValueKind::continuous;
    std::vector<std::string> label_names_;
};

struct LoadOptions {
    ValueKind kind = ValueKind::continuous;
    /// Overrides the feature count; must be >= the largest index in the file.
    std::optional<std::size_t> num_features;
    /// Labels with preassigned codes (in order), e.g. a training set's label_names(),
    /// so a separately loaded test set shares its label coding.
    std::vector<std::string> known_labels;
};

Dataset read_svmlight(std::istream& in, const LoadOptions& options = {});
Dataset load_svmlight(const std::filesystem::path& path, const LoadOptions& options = {});
void write_svmlight(std::ostream& out, const Dataset& d);

/// 64-bit FNV-1a over raw bytes; used as the dataset fingerprint in run manifests.
std::uint64_t fingerprint_bytes(std::span<const char> bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t fingerprint_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Streams

struct NaturalOrder {};
struct ShuffledOrder {
    std::uint64_t seed = 0;
};
struct ExplicitOrder {
    std::vector<std::size_t> permutation; // 1-based
};
using OrderSpec = std::variant<NaturalOrder, ShuffledOrder, ExplicitOrder>;

/// Resolves an OrderSpec into a 1-based permutation of 1..n.
std::vector<std::size_t> resolve_order(const OrderSpec& order, std::size_t n);

struct FeatureView {
    std::size_t index; // 1-based
    const SparseColumn* column;
};

/// Single-consumer cursor over the features of a dataset.
class FeatureStream {
public:
    FeatureStream(const Dataset& d, const OrderSpec& order);

    std::optional<FeatureView> next();
    std::size_t size() const noexcept { return order_.size(); }
    const Dataset& dataset() const noexcept { return *data_; }
    const std::vector<std::size_t>& order() const noexcept { return order_; }

private:
    const Dataset* data_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
};

/// Disjoint feature groups over 1..numP (not necessarily covering).
struct Grouping {
    std::vector<std::vector<std::size_t>> groups;

    std::size_t n_groups() const noexcept { return groups.size(); }
    /// Throws DataError unless groups are nonempty, disjoint and within [1, n_features].
    void validate(std::size_t n_features) const;
};

Grouping random_partition(std::size_t n_features, std::size_t n_groups, std::uint64_t seed);
/// One group per line, whitespace-separated 1-based feature indices.
Grouping read_grouping(std::istream& in);
Grouping load_grouping(const std::filesystem::path& path);

struct GroupView {
    std::size_t group_id; // 0-based position in the Grouping
    std::vector<FeatureView> members;
};

class GroupStream {
public:
    GroupStream(const Dataset& d, const Grouping& g, const OrderSpec& order);

    std::optional<GroupView> next();
    std::size_t size() const noexcept { return order_.size(); }
    const Dataset& dataset() const noexcept { return *data_; }

private:
    const Dataset* data_;
    const Grouping* grouping_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
};

// ---------------------------------------------------------------------------
// Transformations

struct TrainTestSplit {
    Dataset train;
    Dataset test;
    std::vector<std::uint32_t> train_rows;
    std::vector<std::uint32_t> test_rows;
};

/// Random instance split; test size is round(N * test_fraction) clamped to [1, N-1].
TrainTestSplit split(const Dataset& d, double test_fraction, std::uint64_t seed);

/// Per-feature equal-frequency binning of a continuous dataset into codes 0..n_bins-1.
Dataset discretize(const Dataset& d, std::size_t n_bins);

/// Equal-frequency codes for one dense column; tied values share the lowest bin they reach.
std::vector<std::uint32_t> equal_frequency_codes(std::span<const double> values, std::size_t n_bins);

} // namespace saola
