#include "cli.hpp"

#include "manifest.hpp"

#include "saola/dataset.hpp"
#include "saola/error.hpp"
#include "saola/eval.hpp"
#include "saola/group_selector.hpp"
#include "saola/random.hpp"
#include "saola/selector.hpp"
#include "saola/stability.hpp"
#include "saola/synthetic.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace saola::cli {

namespace {

using json = nlohmann::ordered_json;

/// Flag values that could not be checked by CLI11 itself.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DataOptions {
    std::string data;
    std::string kind = "continuous";
    std::optional<std::size_t> num_features;
    std::optional<std::size_t> discretize;
};

struct SelectorOptions {
    double delta = 0.0;
    double alpha = 0.01;
    std::string bound = "min";
    std::string tie = "strict";
    std::optional<std::size_t> top_k;
    std::string order = "natural";
    std::uint64_t seed = 0;
};

struct Options {
    DataOptions data;
    SelectorOptions selector;
    std::string out;
    std::size_t threads = 0;

    // group-select
    std::optional<std::size_t> groups;
    std::string group_file;
    // stability
    std::size_t repeats = 30;
    std::size_t folds = 5;
    std::size_t weight_bins = 10;
    // trials
    std::string test;
    double test_fraction = 0.3;
    std::size_t n_trials = 30;
    std::size_t k = 1;
    // bench
    std::optional<std::size_t> synthetic;
    std::size_t pinned = 5;
    std::size_t instances = 64;
    std::size_t repeat = 1;
};

void add_data_options(CLI::App* cmd, DataOptions& o, bool required = true) {
    auto* data = cmd->add_option("--data", o.data, "svmlight file");
    if (required) data->required();
    cmd->add_option("--kind", o.kind, "value kind")
        ->check(CLI::IsMember({"discrete", "continuous"}))
        ->capture_default_str();
    cmd->add_option("--num-features", o.num_features, "feature count (default: max index in file)");
    cmd->add_option("--discretize", o.discretize, "equal-frequency bins; selects the discrete backend");
}

void add_selector_options(CLI::App* cmd, SelectorOptions& o) {
    cmd->add_option("--delta", o.delta, "relevance threshold for the discrete backend")->capture_default_str();
    cmd->add_option("--alpha", o.alpha, "significance level for the continuous backend")->capture_default_str();
    cmd->add_option("--bound", o.bound, "correlation bound")->check(CLI::IsMember({"min", "max"}))->capture_default_str();
    cmd->add_option("--tie", o.tie, "tie handling")
        ->check(CLI::IsMember({"strict", "discard-new"}))
        ->capture_default_str();
    cmd->add_option("--top-k", o.top_k, "keep at most k features");
    cmd->add_option("--order", o.order, "stream order")
        ->check(CLI::IsMember({"natural", "shuffle"}))
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "seed for shuffles and partitions")->capture_default_str();
}

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SAOLA_THREADS")) {
        try {
            const auto n = std::stoul(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("SAOLA_THREADS must be a positive integer, got '") + env + "'");
    }
    return 1;
}

SaolaConfig make_config(const SelectorOptions& o, ValueKind kind) {
    SaolaConfig cfg;
    cfg.measure.backend = default_backend(kind);
    cfg.measure.delta = o.delta;
    cfg.measure.alpha = o.alpha;
    cfg.bound = o.bound == "max" ? BoundMode::max : BoundMode::min;
    cfg.tie = o.tie == "discard-new" ? TieBreak::discard_new : TieBreak::strict;
    cfg.top_k = o.top_k;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

Dataset load_data(const DataOptions& o, const std::vector<std::string>& known_labels = {}) {
    LoadOptions lo;
    lo.kind = parse_value_kind(o.kind);
    lo.num_features = o.num_features;
    lo.known_labels = known_labels;
    if (o.discretize) {
        if (lo.kind != ValueKind::continuous) throw UsageError("--discretize needs --kind continuous");
        if (*o.discretize < 2) throw UsageError("--discretize needs at least 2 bins");
        return discretize(load_svmlight(o.data, lo), *o.discretize);
    }
    return load_svmlight(o.data, lo);
}

json data_flags(const DataOptions& o) {
    json j;
    j["data"] = o.data;
    j["kind"] = o.kind;
    j["num_features"] = o.num_features ? json(*o.num_features) : json(nullptr);
    j["discretize"] = o.discretize ? json(*o.discretize) : json(nullptr);
    return j;
}

json selector_flags(const SelectorOptions& o) {
    json j;
    j["delta"] = o.delta;
    j["alpha"] = o.alpha;
    j["bound"] = o.bound;
    j["tie"] = o.tie;
    j["top_k"] = o.top_k ? json(*o.top_k) : json(nullptr);
    j["order"] = o.order;
    return j;
}

RunManifest base_manifest(const std::string& command, const Options& o) {
    RunManifest m;
    m.command = command;
    m.flags = data_flags(o.data);
    m.flags.update(selector_flags(o.selector));
    m.seeds["seed"] = o.selector.seed;
    if (!o.data.data.empty()) m.fingerprints[o.data.data] = hex64(fingerprint_file(o.data.data));
    return m;
}

OrderSpec make_order(const SelectorOptions& o, std::uint64_t seed) {
    if (o.order == "shuffle") return ShuffledOrder{seed};
    return NaturalOrder{};
}

json score_json(std::size_t feature, const CorrelationScore& s) {
    json j;
    j["feature"] = feature;
    j["value"] = s.value;
    if (s.p_value) j["p_value"] = *s.p_value;
    return j;
}

/// Writes to --out when given, else to `out`.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DataError("cannot write " + path);
    file << text;
    if (!file) throw DataError("failed writing " + path);
}

std::string join_indices(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(v[i]);
    }
    return s;
}

std::string fmt_double(double v) {
    // Shortest round-trip representation, same as the JSON writer uses.
    return json(v).dump();
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_inspect(const Options& o, std::ostream& out) {
    const auto d = load_data(o.data);
    const auto hist = d.label_histogram();
    out << "N=" << d.n_instances() << " P=" << d.n_features() << " labels={";
    for (std::size_t c = 0; c < hist.size(); ++c) out << (c ? "," : "") << c << ':' << hist[c];
    out << "}\n";
    return kOk;
}

int cmd_select(const Options& o, std::ostream& out) {
    const auto d = load_data(o.data);
    const auto cfg = make_config(o.selector, d.value_kind());
    FeatureStream stream(d, make_order(o.selector, o.selector.seed));
    const auto r = saola_run(stream, cfg);

    json result;
    result["backend"] = to_string(cfg.measure.backend);
    result["selected"] = r.selected_indices;
    json scores = json::array();
    for (std::size_t i = 0; i < r.selected_indices.size(); ++i)
        scores.push_back(score_json(r.selected_indices[i], r.relevance[i]));
    result["scores"] = scores;
    const auto& c = r.counters;
    result["counters"] = {{"seen", c.seen},
                          {"discarded_irrelevant", c.discarded_irrelevant},
                          {"discarded_redundant_new", c.discarded_redundant_new},
                          {"removed_incumbent", c.removed_incumbent},
                          {"truncated", c.truncated},
                          {"evaluations", c.evaluations}};

    json doc;
    doc["manifest"] = base_manifest("select", o).to_json();
    doc["result"] = result;
    doc["timing"] = {{"elapsed_ms", r.elapsed_ms}};
    emit(o.out, out, doc.dump(2) + "\n");
    return kOk;
}

int cmd_group_select(const Options& o, std::ostream& out) {
    const auto d = load_data(o.data);
    const auto cfg = make_config(o.selector, d.value_kind());
    Grouping grouping;
    auto manifest = base_manifest("group-select", o);
    if (o.groups) {
        if (*o.groups < 1 || *o.groups > d.n_features())
            throw UsageError("--groups must be between 1 and the number of features");
        grouping = random_partition(d.n_features(), *o.groups, o.selector.seed);
        manifest.flags["groups"] = *o.groups;
    } else {
        if (o.group_file.empty()) throw UsageError("group-select needs --groups or --group-file");
        grouping = load_grouping(o.group_file);
        manifest.flags["group_file"] = o.group_file;
        manifest.fingerprints[o.group_file] = hex64(fingerprint_file(o.group_file));
    }
    const std::uint64_t order_seed = derive_seed(o.selector.seed, 1);
    manifest.seeds["group_order_seed"] = order_seed;
    GroupStream stream(d, grouping, make_order(o.selector, order_seed));
    const auto r = group_saola_run(stream, cfg);

    json groups = json::array();
    for (const auto& g : r.groups) {
        json scores = json::array();
        for (std::size_t i = 0; i < g.members.size(); ++i) scores.push_back(score_json(g.members[i], g.relevance[i]));
        groups.push_back({{"group_id", g.group_id + 1}, {"members", g.members}, {"scores", scores}});
    }
    const auto& c = r.counters;
    json result;
    result["backend"] = to_string(cfg.measure.backend);
    result["n_groups"] = r.groups.size();
    result["n_features"] = r.n_features();
    result["groups"] = groups;
    result["counters"] = {{"groups_seen", c.groups_seen},
                          {"groups_discarded_irrelevant", c.groups_discarded_irrelevant},
                          {"groups_emptied", c.groups_emptied},
                          {"features_seen", c.features_seen},
                          {"features_discarded_irrelevant", c.features_discarded_irrelevant},
                          {"features_removed_intra", c.features_removed_intra},
                          {"features_removed_inter", c.features_removed_inter},
                          {"evaluations", c.evaluations}};

    json doc;
    doc["manifest"] = manifest.to_json();
    doc["result"] = result;
    doc["timing"] = {{"elapsed_ms", r.elapsed_ms}};
    emit(o.out, out, doc.dump(2) + "\n");
    return kOk;
}

int cmd_stability(const Options& o, std::ostream& out) {
    const auto d = load_data(o.data);
    const auto cfg = make_config(o.selector, d.value_kind());
    StabilityConfig sc;
    sc.folds = o.folds;
    sc.repeats = o.repeats;
    sc.seed = o.selector.seed;
    sc.weight_bins = o.weight_bins;
    sc.threads = resolve_threads(o.threads);
    if (sc.folds < 2 || sc.folds > d.n_instances()) throw UsageError("--folds must be between 2 and N");
    if (sc.repeats < 1) throw UsageError("--repeats must be >= 1");
    const auto report = run_stability(d, saola_subset_selector(cfg), sc);

    auto manifest = base_manifest("stability", o);
    manifest.flags["repeats"] = o.repeats;
    manifest.flags["folds"] = o.folds;
    manifest.flags["weight_bins"] = o.weight_bins;
    std::ostringstream csv;
    csv << manifest.csv_comment() << '\n';
    csv << "repeat,run_a,run_b,similarity\n";
    for (const auto& p : report.pairs)
        csv << report.runs[p.run_a].repeat << ',' << p.run_a << ',' << p.run_b << ',' << fmt_double(p.similarity) << '\n';
    csv << "summary,,," << fmt_double(report.mean_similarity) << '\n';
    emit(o.out, out, csv.str());
    return kOk;
}

int cmd_trials(const Options& o, std::ostream& out) {
    auto manifest = base_manifest("trials", o);
    Dataset train, test;
    const auto full = load_data(o.data);
    if (!o.test.empty()) {
        DataOptions test_opts = o.data;
        test_opts.data = o.test;
        test_opts.num_features.reset();
        test = load_data(test_opts, full.label_names());
        train = full;
        manifest.flags["test"] = o.test;
        manifest.fingerprints[o.test] = hex64(fingerprint_file(o.test));
    } else {
        if (!(o.test_fraction > 0.0 && o.test_fraction < 1.0)) throw UsageError("--test-fraction must be in (0, 1)");
        auto parts = split(full, o.test_fraction, o.selector.seed);
        train = std::move(parts.train);
        test = std::move(parts.test);
        manifest.flags["test_fraction"] = o.test_fraction;
    }
    const auto cfg = make_config(o.selector, train.value_kind());
    if (o.n_trials < 2) throw UsageError("--n must be >= 2");
    if (o.k < 1) throw UsageError("--k must be >= 1");
    TrialConfig tc;
    tc.n_trials = o.n_trials;
    tc.seed = o.selector.seed;
    tc.k = o.k;
    tc.threads = resolve_threads(o.threads);
    const auto report = order_trials(train, test, cfg, tc);

    manifest.flags["n"] = o.n_trials;
    manifest.flags["k"] = o.k;
    std::ostringstream csv;
    csv << manifest.csv_comment() << '\n';
    csv << "trial,order_seed,selected_size,accuracy,selected\n";
    for (std::size_t t = 0; t < report.trials.size(); ++t) {
        const auto& tr = report.trials[t];
        csv << t << ',' << tr.order_seed << ',' << tr.selected.size() << ',' << fmt_double(tr.accuracy) << ','
            << join_indices(tr.selected) << '\n';
    }
    csv << "summary,," << fmt_double(report.mean_size) << ',' << fmt_double(report.mean_accuracy) << ",std="
        << fmt_double(report.stddev_accuracy) << '\n';
    emit(o.out, out, csv.str());
    return kOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
    RunManifest manifest;
    manifest.command = "bench";
    Dataset d;
    if (o.synthetic) {
        synthetic::PinnedStream spec;
        spec.n_features = *o.synthetic;
        spec.pinned = o.pinned;
        spec.n_instances = o.instances;
        spec.seed = o.selector.seed;
        try {
            d = synthetic::make_pinned_stream(spec);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        manifest.flags = {{"synthetic", *o.synthetic}, {"pinned", o.pinned}, {"instances", o.instances}};
    } else {
        if (o.data.data.empty()) throw UsageError("bench needs --data or --synthetic");
        d = load_data(o.data);
        manifest.flags = data_flags(o.data);
        manifest.fingerprints[o.data.data] = hex64(fingerprint_file(o.data.data));
    }
    manifest.flags.update(selector_flags(o.selector));
    manifest.flags["repeat"] = o.repeat;
    manifest.seeds["seed"] = o.selector.seed;
    const auto cfg = make_config(o.selector, d.value_kind());

    std::ostringstream csv;
    csv << manifest.csv_comment() << '\n';
    csv << "run,features,selected,evaluations,step_bound,max_selected,elapsed_ms\n";
    for (std::size_t run = 0; run < o.repeat; ++run) {
        const auto start = std::chrono::steady_clock::now();
        Saola selector(d, cfg);
        FeatureStream stream(d, make_order(o.selector, derive_seed(o.selector.seed, run)));
        std::size_t step_bound = 0, max_selected = 0;
        while (auto f = stream.next()) {
            step_bound += 1 + 2 * selector.state().selected.size();
            selector.step(*f);
            max_selected = std::max(max_selected, selector.state().selected.size());
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        csv << run << ',' << d.n_features() << ',' << selector.state().selected.size() << ','
            << selector.counters().evaluations << ',' << step_bound << ',' << max_selected << ',' << fmt_double(ms)
            << '\n';
    }
    emit(o.out, out, csv.str());
    return kOk;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

/// "did you mean" hints for unknown --flags of the selected subcommand.
std::string suggestions(const CLI::App& app, const std::vector<std::string>& args) {
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands([](const CLI::App*) { return true; }))
        if (s->parsed()) sub = s;
    if (!sub) return {};
    std::vector<std::string> known;
    for (const auto* opt : sub->get_options())
        for (const auto& name : opt->get_lnames()) known.push_back("--" + name);
    std::string hints;
    for (const auto& arg : args) {
        if (arg.rfind("--", 0) != 0) continue;
        const std::string flag = arg.substr(0, arg.find('='));
        if (std::find(known.begin(), known.end(), flag) != known.end()) continue;
        std::string best;
        std::size_t best_d = 3;
        for (const auto& k : known) {
            const auto dist = edit_distance(flag, k);
            if (dist < best_d) {
                best_d = dist;
                best = k;
            }
        }
        if (!best.empty()) hints += "unknown flag " + flag + ", did you mean " + best + "?\n";
    }
    return hints;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Online streaming feature selection (SAOLA and group-SAOLA)", "saola"};
    app.require_subcommand(1);
    Options o;

    auto* inspect = app.add_subcommand("inspect", "print dataset dimensions and label histogram");
    add_data_options(inspect, o.data);

    auto* select = app.add_subcommand("select", "online feature selection over a feature stream");
    add_data_options(select, o.data);
    add_selector_options(select, o.selector);
    select->add_option("--out", o.out, "result JSON (default: stdout)");

    auto* group = app.add_subcommand("group-select", "online group feature selection");
    add_data_options(group, o.data);
    add_selector_options(group, o.selector);
    auto* groups_opt = group->add_option("--groups", o.groups, "random partition into N groups");
    auto* file_opt = group->add_option("--group-file", o.group_file, "one group per line of 1-based indices");
    groups_opt->excludes(file_opt);
    group->add_option("--out", o.out, "result JSON (default: stdout)");

    auto* stability = app.add_subcommand("stability", "subsample stability of the selected sets");
    add_data_options(stability, o.data);
    add_selector_options(stability, o.selector);
    stability->add_option("--repeats", o.repeats)->capture_default_str();
    stability->add_option("--folds", o.folds)->capture_default_str();
    stability->add_option("--weight-bins", o.weight_bins, "bins for SU weights on continuous data")
        ->capture_default_str();
    stability->add_option("--threads", o.threads, "worker threads (default: $SAOLA_THREADS or 1)");
    stability->add_option("--out", o.out, "CSV output (default: stdout)");

    auto* trials = app.add_subcommand("trials", "randomized feature-order trials scored by k-NN");
    add_data_options(trials, o.data);
    add_selector_options(trials, o.selector);
    trials->add_option("--test", o.test, "test svmlight file (default: hold out --test-fraction)");
    trials->add_option("--test-fraction", o.test_fraction)->capture_default_str();
    trials->add_option("--n", o.n_trials, "number of trials")->capture_default_str();
    trials->add_option("--k", o.k, "neighbors")->capture_default_str();
    trials->add_option("--threads", o.threads, "worker threads (default: $SAOLA_THREADS or 1)");
    trials->add_option("--out", o.out, "CSV output (default: stdout)");

    auto* bench = app.add_subcommand("bench", "timing and comparison counts");
    add_data_options(bench, o.data, false);
    add_selector_options(bench, o.selector);
    bench->add_option("--synthetic", o.synthetic, "generate a pinned-selection stream with this many features");
    bench->add_option("--pinned", o.pinned, "selected-set size of the synthetic stream")->capture_default_str();
    bench->add_option("--instances", o.instances, "instances of the synthetic stream")->capture_default_str();
    bench->add_option("--repeat", o.repeat)->capture_default_str();
    bench->add_option("--out", o.out, "CSV output (default: stdout)");

    // Subcommands without worker pools still accept the flag so scripts can pass it uniformly.
    for (auto* cmd : {inspect, select, group, bench}) cmd->add_option("--threads", o.threads, "ignored");

    std::vector<std::string> argv_store{"saola"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << suggestions(app, args);
        return kUsageError;
    }

    try {
        if (inspect->parsed()) return cmd_inspect(o, out);
        if (select->parsed()) return cmd_select(o, out);
        if (group->parsed()) return cmd_group_select(o, out);
        if (stability->parsed()) return cmd_stability(o, out);
        if (trials->parsed()) return cmd_trials(o, out);
        if (bench->parsed()) return cmd_bench(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kUsageError;
}

} // namespace saola::cli
