#include "cli.hpp"
#include "fixtures.hpp"

#include "saola/dataset.hpp"
#include "saola/synthetic.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = saola::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("saola_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& content) const {
        const auto p = path_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::string planted_file(const TempDir& dir, const std::string& name, std::uint64_t seed, std::size_t n = 160) {
    saola::synthetic::PlantedClusters spec;
    spec.seed = seed;
    spec.n_instances = n;
    std::ostringstream text;
    saola::write_svmlight(text, saola::synthetic::make_planted_clusters(spec).data);
    return dir.file(name, text.str());
}

/// CSV body without the manifest comment.
std::string body(const std::string& csv) { return csv.substr(csv.find('\n') + 1); }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("inspect prints dimensions and label histogram") {
    TempDir dir;
    const auto path = dir.file("two.svm", "1 1:1\n0 2:1\n");
    const auto r = run({"inspect", "--data", path});
    CHECK(r.code == 0);
    CHECK(r.out == "N=2 P=2 labels={0:1,1:1}\n");
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"select"}).code == 2);
    CHECK(run({"select", "--data", "x.svm", "--bound", "median"}).code == 2);
    CHECK(run({"select", "--data", "x.svm", "--alpha", "abc"}).code == 2);

    const auto typo = run({"select", "--data", "x.svm", "--alpah", "0.05"});
    CHECK(typo.code == 2);
    CHECK(typo.err.find("did you mean --alpha?") != std::string::npos);
}

TEST_CASE("invalid flag values exit with 2") {
    TempDir dir;
    const auto data = planted_file(dir, "p.svm", 1);
    CHECK(run({"select", "--data", data, "--kind", "discrete", "--delta", "1.5"}).code == 2);
    CHECK(run({"select", "--data", data, "--kind", "discrete", "--top-k", "0"}).code == 2);
    CHECK(run({"group-select", "--data", data, "--kind", "discrete"}).code == 2);
    CHECK(run({"group-select", "--data", data, "--kind", "discrete", "--groups", "0"}).code == 2);
    CHECK(run({"trials", "--data", data, "--kind", "discrete", "--n", "1"}).code == 2);
    CHECK(run({"bench"}).code == 2);
}

TEST_CASE("data errors exit with 1") {
    TempDir dir;
    const auto missing = run({"select", "--data", dir.path("missing.svm")});
    CHECK(missing.code == 1);
    const auto bad = dir.file("bad.svm", "1 1:1\n0 2:x\n");
    const auto r = run({"select", "--data", bad});
    CHECK(r.code == 1);
    CHECK(r.err.find("line 2") != std::string::npos);
    // continuous values loaded as discrete
    const auto frac = dir.file("frac.svm", "1 1:0.5\n0 1:1\n");
    CHECK(run({"select", "--data", frac, "--kind", "discrete"}).code == 1);
}

TEST_CASE("select writes a manifest and replays byte-identically") {
    TempDir dir;
    const auto data = planted_file(dir, "p.svm", 2);
    const auto before = slurp(data);
    const auto out1 = dir.path("r1.json"), out2 = dir.path("r2.json");
    REQUIRE(run({"select", "--data", data, "--kind", "discrete", "--order", "shuffle", "--seed", "4", "--out", out1})
                .code == 0);
    REQUIRE(run({"select", "--data", data, "--kind", "discrete", "--order", "shuffle", "--seed", "4", "--out", out2})
                .code == 0);
    CHECK(slurp(data) == before);

    auto a = json::parse(slurp(out1));
    auto b = json::parse(slurp(out2));
    CHECK(a["manifest"]["command"] == "select");
    CHECK(a["manifest"]["flags"]["order"] == "shuffle");
    CHECK(a["manifest"]["seeds"]["seed"] == 4);
    CHECK(a["manifest"]["dataset_fingerprint"].contains(data));
    CHECK(a["result"]["selected"].size() >= 1);
    CHECK(a["result"]["scores"].size() == a["result"]["selected"].size());
    CHECK(a["timing"].contains("elapsed_ms"));
    CHECK(a["manifest"] == b["manifest"]);
    CHECK(a["result"].dump() == b["result"].dump());
}

TEST_CASE("select to stdout on continuous data") {
    TempDir dir;
    const auto d = saola::synthetic::make_hypercube({200, 40, 3, 3, 2, 1.5, 0.0, 3}).data;
    std::ostringstream text;
    saola::write_svmlight(text, d);
    const auto data = dir.file("h.svm", text.str());
    const auto r = run({"select", "--data", data, "--alpha", "0.01"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["result"]["backend"] == "fisher_z");
    for (const auto& s : j["result"]["scores"]) CHECK(s["p_value"].get<double>() <= 0.01);

    const auto disc = json::parse(run({"select", "--data", data, "--discretize", "4"}).out);
    CHECK(disc["result"]["backend"] == "su_discrete");
}

TEST_CASE("group-select") {
    TempDir dir;
    const auto data = planted_file(dir, "p.svm", 3);
    const auto r = run({"group-select", "--data", data, "--kind", "discrete", "--groups", "6", "--seed", "2"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["result"]["n_groups"].get<std::size_t>() == j["result"]["groups"].size());
    CHECK(j["manifest"]["flags"]["groups"] == 6);

    const auto groups = dir.file("g.txt", "1 2 3\n4 5\n6\n");
    const auto f = run({"group-select", "--data", data, "--kind", "discrete", "--group-file", groups});
    REQUIRE(f.code == 0);
    for (const auto& g : json::parse(f.out)["result"]["groups"]) CHECK(g["members"].size() >= 1);

    CHECK(run({"group-select", "--data", data, "--kind", "discrete", "--groups", "2", "--group-file", groups}).code ==
          2);
    const auto bad = dir.file("bad.txt", "1 999\n");
    CHECK(run({"group-select", "--data", data, "--kind", "discrete", "--group-file", bad}).code == 1);
}

TEST_CASE("stability CSV") {
    TempDir dir;
    const auto data = planted_file(dir, "p.svm", 4, 100);
    const auto one = run({"stability", "--data", data, "--kind", "discrete", "--repeats", "2", "--threads", "1"});
    REQUIRE(one.code == 0);
    CHECK(one.out.rfind("# manifest {", 0) == 0);
    CHECK(body(one.out).rfind("repeat,run_a,run_b,similarity\n", 0) == 0);
    CHECK(one.out.find("\nsummary,,,") != std::string::npos);
    // 10 runs -> 45 pairs, plus header, summary and manifest lines
    CHECK(std::count(one.out.begin(), one.out.end(), '\n') == 48);

    const auto many = run({"stability", "--data", data, "--kind", "discrete", "--repeats", "2", "--threads", "4"});
    CHECK(many.out == one.out);

    ::setenv("SAOLA_THREADS", "3", 1);
    const auto env = run({"stability", "--data", data, "--kind", "discrete", "--repeats", "2"});
    CHECK(env.out == one.out);
    ::setenv("SAOLA_THREADS", "zero", 1);
    CHECK(run({"stability", "--data", data, "--kind", "discrete", "--repeats", "2"}).code == 2);
    ::unsetenv("SAOLA_THREADS");
}

TEST_CASE("trials CSV") {
    TempDir dir;
    const auto train = planted_file(dir, "train.svm", 5);
    const auto test = planted_file(dir, "test.svm", 5, 60);
    const auto r = run({"trials", "--data", train, "--test", test, "--kind", "discrete", "--n", "5", "--seed", "9"});
    REQUIRE(r.code == 0);
    CHECK(body(r.out).rfind("trial,order_seed,selected_size,accuracy,selected\n", 0) == 0);
    CHECK(r.out.find("\nsummary,,") != std::string::npos);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 8);

    const auto again = run({"trials", "--data", train, "--test", test, "--kind", "discrete", "--n", "5", "--seed", "9"});
    CHECK(again.out == r.out);

    const auto held = run({"trials", "--data", train, "--kind", "discrete", "--n", "3", "--test-fraction", "0.25"});
    CHECK(held.code == 0);
}

TEST_CASE("bench") {
    const auto r = run({"bench", "--synthetic", "2000", "--pinned", "4", "--repeat", "2"});
    REQUIRE(r.code == 0);
    std::istringstream lines(body(r.out));
    std::string header, row;
    std::getline(lines, header);
    CHECK(header == "run,features,selected,evaluations,step_bound,max_selected,elapsed_ms");
    while (std::getline(lines, row)) {
        std::vector<std::string> cells;
        std::stringstream ss(row);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        REQUIRE(cells.size() == 7);
        CHECK(cells[1] == "2000");
        CHECK(cells[2] == "4");
        CHECK(std::stoul(cells[3]) <= std::stoul(cells[4]));
        CHECK(std::stoul(cells[3]) <= 2000u * (1 + 2 * 4));
    }
}

TEST_CASE("help exits with 0") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("group-select") != std::string::npos);
}

} // TEST_SUITE
