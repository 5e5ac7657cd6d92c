#include "saola/dataset.hpp"

#include "saola/error.hpp"
#include "saola/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>

namespace saola {

const char* to_string(ValueKind kind) {
    return kind == ValueKind::discrete ? "discrete" : "continuous";
}

ValueKind parse_value_kind(const std::string& text) {
    if (text == "discrete") return ValueKind::discrete;
    if (text == "continuous") return ValueKind::continuous;
    throw std::invalid_argument("unknown value kind '" + text + "' (expected discrete|continuous)");
}

std::vector<double> SparseColumn::dense(std::size_t n) const {
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < rows.size(); ++k) out[rows[k]] = values[k];
    return out;
}

SparseColumn SparseColumn::from_dense(std::span<const double> dense) {
    SparseColumn c;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0.0) {
            c.rows.push_back(static_cast<std::uint32_t>(i));
            c.values.push_back(dense[i]);
        }
    }
    return c;
}

Dataset::Dataset(std::vector<SparseColumn> columns, std::vector<std::uint32_t> labels, ValueKind kind,
                 std::vector<std::string> label_names)
    : columns_(std::move(columns)), labels_(std::move(labels)), kind_(kind), label_names_(std::move(label_names)) {
    const std::size_t n = labels_.size();
    std::uint32_t max_label = 0;
    for (auto l : labels_) max_label = std::max(max_label, l);
    if (label_names_.empty() && n > 0) {
        for (std::uint32_t c = 0; c <= max_label; ++c) label_names_.push_back(std::to_string(c));
    }
    if (n > 0 && max_label >= label_names_.size()) throw DataError("label code without a name");

    for (std::size_t f = 0; f < columns_.size(); ++f) {
        const auto& col = columns_[f];
        if (col.rows.size() != col.values.size()) throw DataError("column rows/values length mismatch");
        for (std::size_t k = 0; k < col.rows.size(); ++k) {
            if (col.rows[k] >= n) throw DataError("feature " + std::to_string(f + 1) + ": instance index out of range");
            if (k > 0 && col.rows[k] <= col.rows[k - 1])
                throw DataError("feature " + std::to_string(f + 1) + ": instance indices not strictly increasing");
            if (col.values[k] == 0.0) throw DataError("feature " + std::to_string(f + 1) + ": explicit zero entry");
            if (kind_ == ValueKind::discrete && col.values[k] != std::floor(col.values[k]))
                throw DataError("feature " + std::to_string(f + 1) + ": non-integer value in discrete dataset");
        }
    }
}

const SparseColumn& Dataset::column(std::size_t feature_index) const {
    if (feature_index < 1 || feature_index > columns_.size())
        throw std::out_of_range("feature index " + std::to_string(feature_index) + " outside [1, " +
                                std::to_string(columns_.size()) + "]");
    return columns_[feature_index - 1];
}

std::vector<std::size_t> Dataset::label_histogram() const {
    std::vector<std::size_t> h(n_classes(), 0);
    for (auto l : labels_) ++h[l];
    return h;
}

Dataset Dataset::select_instances(std::span<const std::uint32_t> instances) const {
    // old row -> new row, so columns can be rebuilt in sorted order.
    std::vector<std::int64_t> remap(n_instances(), -1);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (instances[i] >= n_instances()) throw std::out_of_range("instance index out of range");
        remap[instances[i]] = static_cast<std::int64_t>(i);
    }
    std::vector<SparseColumn> cols(columns_.size());
    std::vector<std::pair<std::uint32_t, double>> buf;
    for (std::size_t f = 0; f < columns_.size(); ++f) {
        buf.clear();
        const auto& src = columns_[f];
        for (std::size_t k = 0; k < src.rows.size(); ++k) {
            const auto r = remap[src.rows[k]];
            if (r >= 0) buf.emplace_back(static_cast<std::uint32_t>(r), src.values[k]);
        }
        std::sort(buf.begin(), buf.end());
        cols[f].rows.reserve(buf.size());
        cols[f].values.reserve(buf.size());
        for (auto& [r, v] : buf) {
            cols[f].rows.push_back(r);
            cols[f].values.push_back(v);
        }
    }
    std::vector<std::uint32_t> labels(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) labels[i] = labels_[instances[i]];
    return Dataset(std::move(cols), std::move(labels), kind_, label_names_);
}

// ---------------------------------------------------------------------------
// svmlight

namespace {

bool parse_double(std::string_view tok, double& out) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_index(std::string_view tok, std::size_t& out) {
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace

Dataset read_svmlight(std::istream& in, const LoadOptions& options) {
    struct Entry {
        std::uint32_t feature; // 0-based
        std::uint32_t row;
        double value;
    };
    std::vector<Entry> entries;
    std::vector<std::uint32_t> labels;
    std::vector<std::string> label_names;
    std::map<double, std::uint32_t> label_codes;
    std::size_t max_index = 0;
    for (const auto& name : options.known_labels) {
        double v = 0;
        if (!parse_double(name, v)) throw DataError("known label '" + name + "' is not numeric");
        if (label_codes.emplace(v, static_cast<std::uint32_t>(label_names.size())).second) label_names.push_back(name);
    }

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv(line);
        if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);

        std::vector<std::string_view> tokens;
        std::size_t pos = 0;
        while (pos < sv.size()) {
            while (pos < sv.size() && std::isspace(static_cast<unsigned char>(sv[pos]))) ++pos;
            std::size_t start = pos;
            while (pos < sv.size() && !std::isspace(static_cast<unsigned char>(sv[pos]))) ++pos;
            if (pos > start) tokens.push_back(sv.substr(start, pos - start));
        }
        if (tokens.empty()) continue;

        double label_value = 0;
        if (!parse_double(tokens[0], label_value)) throw ParseError(line_no, "non-numeric label '" + std::string(tokens[0]) + "'");
        auto [it, inserted] = label_codes.emplace(label_value, static_cast<std::uint32_t>(label_names.size()));
        if (inserted) label_names.emplace_back(tokens[0]);
        const auto row = static_cast<std::uint32_t>(labels.size());
        labels.push_back(it->second);

        std::size_t prev = 0;
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            const auto tok = tokens[t];
            const auto colon = tok.find(':');
            if (colon == std::string_view::npos) throw ParseError(line_no, "expected idx:val, got '" + std::string(tok) + "'");
            std::size_t idx = 0;
            double value = 0;
            if (!parse_index(tok.substr(0, colon), idx) || idx == 0)
                throw ParseError(line_no, "bad feature index in '" + std::string(tok) + "'");
            if (!parse_double(tok.substr(colon + 1), value))
                throw ParseError(line_no, "non-numeric value in '" + std::string(tok) + "'");
            if (idx <= prev) throw ParseError(line_no, "feature indices not strictly increasing at '" + std::string(tok) + "'");
            if (options.kind == ValueKind::discrete && value != std::floor(value))
                throw ParseError(line_no, "non-integer value in discrete data at '" + std::string(tok) + "'");
            prev = idx;
            max_index = std::max(max_index, idx);
            if (value != 0.0) entries.push_back({static_cast<std::uint32_t>(idx - 1), row, value});
        }
    }
    if (labels.empty()) throw DataError("no instances in svmlight input");

    std::size_t n_features = max_index;
    if (options.num_features) {
        if (*options.num_features < max_index)
            throw DataError("num_features " + std::to_string(*options.num_features) + " is smaller than max index " +
                            std::to_string(max_index));
        n_features = *options.num_features;
    }

    // Transpose: entries are already row-ordered, so a stable bucket by feature keeps rows sorted.
    std::vector<std::size_t> counts(n_features, 0);
    for (const auto& e : entries) ++counts[e.feature];
    std::vector<SparseColumn> columns(n_features);
    for (std::size_t f = 0; f < n_features; ++f) {
        columns[f].rows.reserve(counts[f]);
        columns[f].values.reserve(counts[f]);
    }
    for (const auto& e : entries) {
        columns[e.feature].rows.push_back(e.row);
        columns[e.feature].values.push_back(e.value);
    }
    return Dataset(std::move(columns), std::move(labels), options.kind, std::move(label_names));
}

Dataset load_svmlight(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_svmlight(in, options);
}

void write_svmlight(std::ostream& out, const Dataset& d) {
    // Row-major view of the column store.
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(d.n_instances());
    for (std::size_t f = 0; f < d.n_features(); ++f) {
        const auto& col = d.columns()[f];
        for (std::size_t k = 0; k < col.rows.size(); ++k) rows[col.rows[k]].emplace_back(f + 1, col.values[k]);
    }
    char buf[64];
    for (std::size_t i = 0; i < d.n_instances(); ++i) {
        out << d.label_names()[d.labels()[i]];
        for (auto& [idx, v] : rows[i]) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out << ' ' << idx << ':' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
        }
        out << '\n';
    }
}

std::uint64_t fingerprint_bytes(std::span<const char> bytes, std::uint64_t h) {
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fingerprint_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        h = fingerprint_bytes(std::span<const char>(buf.data(), static_cast<std::size_t>(in.gcount())), h);
    }
    return h;
}

// ---------------------------------------------------------------------------
// Streams

std::vector<std::size_t> resolve_order(const OrderSpec& order, std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{1});
    if (std::holds_alternative<ShuffledOrder>(order)) {
        Rng rng(std::get<ShuffledOrder>(order).seed);
        rng.shuffle(perm);
    } else if (const auto* ex = std::get_if<ExplicitOrder>(&order)) {
        if (ex->permutation.size() != n) throw DataError("explicit order is not a permutation of 1.." + std::to_string(n));
        std::vector<bool> seen(n + 1, false);
        for (auto i : ex->permutation) {
            if (i < 1 || i > n || seen[i]) throw DataError("explicit order is not a permutation of 1.." + std::to_string(n));
            seen[i] = true;
        }
        perm = ex->permutation;
    }
    return perm;
}

FeatureStream::FeatureStream(const Dataset& d, const OrderSpec& order)
    : data_(&d), order_(resolve_order(order, d.n_features())) {}

std::optional<FeatureView> FeatureStream::next() {
    if (cursor_ >= order_.size()) return std::nullopt;
    const auto idx = order_[cursor_++];
    return FeatureView{idx, &data_->column(idx)};
}

void Grouping::validate(std::size_t n_features) const {
    std::vector<bool> seen(n_features + 1, false);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) throw DataError("group " + std::to_string(g + 1) + " is empty");
        for (auto i : groups[g]) {
            if (i < 1 || i > n_features)
                throw DataError("group " + std::to_string(g + 1) + " references feature " + std::to_string(i) +
                                " outside [1, " + std::to_string(n_features) + "]");
            if (seen[i]) throw DataError("feature " + std::to_string(i) + " appears in more than one group");
            seen[i] = true;
        }
    }
}

Grouping random_partition(std::size_t n_features, std::size_t n_groups, std::uint64_t seed) {
    if (n_groups < 1 || n_groups > n_features)
        throw std::invalid_argument("random_partition: need 1 <= n_groups <= n_features");
    std::vector<std::size_t> perm(n_features);
    std::iota(perm.begin(), perm.end(), std::size_t{1});
    Rng rng(seed);
    rng.shuffle(perm);

    Grouping g;
    g.groups.resize(n_groups);
    const std::size_t base = n_features / n_groups;
    const std::size_t extra = n_features % n_groups;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < n_groups; ++k) {
        const std::size_t size = base + (k < extra ? 1 : 0);
        g.groups[k].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                           perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
        std::sort(g.groups[k].begin(), g.groups[k].end());
        pos += size;
    }
    return g;
}

Grouping read_grouping(std::istream& in) {
    Grouping g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<std::size_t> members;
        std::string tok;
        while (ls >> tok) {
            std::size_t idx = 0;
            if (!parse_index(tok, idx) || idx == 0) throw ParseError(line_no, "bad feature index '" + tok + "'");
            members.push_back(idx);
        }
        if (!members.empty()) g.groups.push_back(std::move(members));
    }
    return g;
}

Grouping load_grouping(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_grouping(in);
}

GroupStream::GroupStream(const Dataset& d, const Grouping& g, const OrderSpec& order)
    : data_(&d), grouping_(&g), order_(resolve_order(order, g.n_groups())) {
    g.validate(d.n_features());
}

std::optional<GroupView> GroupStream::next() {
    if (cursor_ >= order_.size()) return std::nullopt;
    const auto gid = order_[cursor_++] - 1;
    GroupView view{gid, {}};
    for (auto idx : grouping_->groups[gid]) view.members.push_back({idx, &data_->column(idx)});
    return view;
}

// ---------------------------------------------------------------------------
// Transformations

TrainTestSplit split(const Dataset& d, double test_fraction, std::uint64_t seed) {
    const std::size_t n = d.n_instances();
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw std::invalid_argument("split: test_fraction must be in (0, 1)");
    if (n < 2) throw DataError("split: need at least 2 instances");
    auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
    n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    Rng rng(seed);
    rng.shuffle(perm);

    TrainTestSplit out;
    out.test_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
    std::sort(out.test_rows.begin(), out.test_rows.end());
    std::sort(out.train_rows.begin(), out.train_rows.end());
    out.train = d.select_instances(out.train_rows);
    out.test = d.select_instances(out.test_rows);
    return out;
}

std::vector<std::uint32_t> equal_frequency_codes(std::span<const double> values, std::size_t n_bins) {
    const std::size_t n = values.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

    std::vector<std::uint32_t> codes(n, 0);
    std::size_t r = 0;
    while (r < n) {
        // A run of equal values takes the bin of its first (lowest) rank.
        const auto bin = static_cast<std::uint32_t>(r * n_bins / n);
        std::size_t e = r;
        while (e < n && values[order[e]] == values[order[r]]) codes[order[e++]] = bin;
        r = e;
    }
    return codes;
}

Dataset discretize(const Dataset& d, std::size_t n_bins) {
    if (d.value_kind() != ValueKind::continuous) throw std::invalid_argument("discretize: dataset is already discrete");
    if (n_bins < 2) throw std::invalid_argument("discretize: n_bins must be >= 2");
    if (n_bins > d.n_instances()) throw std::invalid_argument("discretize: n_bins exceeds instance count");
    const std::size_t n = d.n_instances();
    std::vector<SparseColumn> cols;
    cols.reserve(d.n_features());
    std::vector<double> codes_as_double(n);
    for (const auto& col : d.columns()) {
        const auto dense = col.dense(n);
        const auto codes = equal_frequency_codes(dense, n_bins);
        for (std::size_t i = 0; i < n; ++i) codes_as_double[i] = codes[i];
        cols.push_back(SparseColumn::from_dense(codes_as_double));
    }
    return Dataset(std::move(cols), std::vector<std::uint32_t>(d.labels().begin(), d.labels().end()), ValueKind::discrete,
                   d.label_names());
}

} // namespace saola
