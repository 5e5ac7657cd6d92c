#include "fixtures.hpp"

#include "saola/dataset.hpp"
#include "saola/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

using namespace saola;

namespace {

Dataset parse(const std::string& text, LoadOptions options = {}) {
    std::istringstream in(text);
    return read_svmlight(in, options);
}

std::vector<std::size_t> drain(FeatureStream& s) {
    std::vector<std::size_t> out;
    while (auto f = s.next()) out.push_back(f->index);
    return out;
}

} // namespace

TEST_SUITE("dataset") {

TEST_CASE("two-line file remaps labels by first appearance") {
    const auto d = parse("1 1:1\n0 2:1\n");
    CHECK(d.n_instances() == 2);
    CHECK(d.n_features() == 2);
    CHECK(std::vector<std::uint32_t>(d.labels().begin(), d.labels().end()) == std::vector<std::uint32_t>{0, 1});
    CHECK(d.label_names() == std::vector<std::string>{"1", "0"});
    CHECK(d.column(1).rows == std::vector<std::uint32_t>{0});
    CHECK(d.column(2).rows == std::vector<std::uint32_t>{1});
}

TEST_CASE("feature count is the largest index seen") {
    const auto d = parse("1 3:5\n");
    CHECK(d.n_instances() == 1);
    CHECK(d.n_features() == 3);
    CHECK(d.column(1).empty());
    CHECK(d.column(2).empty());
    CHECK(d.column(3).values == std::vector<double>{5.0});
}

TEST_CASE("feature count override") {
    LoadOptions o;
    o.num_features = 7;
    CHECK(parse("1 3:5\n", o).n_features() == 7);
    o.num_features = 2;
    CHECK_THROWS_AS(parse("1 3:5\n", o), DataError);
}

TEST_CASE("comments, blank lines and explicit zeros") {
    const auto d = parse("# header\n\n+1 1:0 2:2.5 # trailing\n-1 1:3\n");
    CHECK(d.n_instances() == 2);
    CHECK(d.column(1).rows == std::vector<std::uint32_t>{1});
    CHECK(d.column(2).values == std::vector<double>{2.5});
}

TEST_CASE("malformed lines report the line number") {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("1 1:1\n0 2:x\n") == 2);
    CHECK(line_of("1 2:1 2:3\n") == 1);
    CHECK(line_of("1 1:1\n1 3:1 2:1\n") == 2);
    CHECK(line_of("1 1:1\nabc 1:1\n") == 2);
    CHECK(line_of("1 0:1\n") == 1);
}

TEST_CASE("empty input is an error") {
    CHECK_THROWS_AS(parse(""), DataError);
    CHECK_THROWS_AS(parse("# only a comment\n\n"), DataError);
}

TEST_CASE("discrete kind rejects fractional values") {
    LoadOptions o;
    o.kind = ValueKind::discrete;
    CHECK_NOTHROW(parse("1 1:2\n0 1:1\n", o));
    CHECK_THROWS_AS(parse("1 1:2.5\n", o), DataError);
}

TEST_CASE("known labels fix the coding of a second file") {
    LoadOptions o;
    o.known_labels = {"0", "1"};
    const auto d = parse("1 1:1\n0 1:2\n", o);
    CHECK(d.labels()[0] == 1);
    CHECK(d.labels()[1] == 0);
    CHECK(d.label_names() == std::vector<std::string>{"0", "1"});
}

TEST_CASE("svmlight round trip") {
    Rng rng(11);
    std::vector<std::vector<double>> cols;
    for (int f = 0; f < 9; ++f) {
        std::vector<double> c(40);
        for (auto& v : c) v = rng.uniform() < 0.4 ? rng.normal() * 100.0 : 0.0;
        cols.push_back(c);
    }
    cols.push_back(std::vector<double>(40, 0.0)); // trailing empty feature
    const auto d = fixtures::from_columns(cols, fixtures::balanced_labels(40, rng), ValueKind::continuous);

    LoadOptions o;
    o.num_features = d.n_features();
    auto text_of = [](const Dataset& x) {
        std::ostringstream out;
        write_svmlight(out, x);
        return out.str();
    };
    const auto loaded = parse(text_of(d), o);
    for (std::size_t f = 1; f <= d.n_features(); ++f) CHECK(loaded.column(f) == d.column(f));
    CHECK(loaded.n_instances() == d.n_instances());

    const auto back = parse(text_of(loaded), o);
    CHECK(back.n_features() == loaded.n_features());
    CHECK(std::equal(back.labels().begin(), back.labels().end(), loaded.labels().begin()));
    CHECK(back.label_names() == loaded.label_names());
    CHECK(back == loaded);
}

TEST_CASE("fingerprint depends on content") {
    const std::string a = "1 1:1\n", b = "1 1:2\n";
    CHECK(fingerprint_bytes(a) == fingerprint_bytes(a));
    CHECK(fingerprint_bytes(a) != fingerprint_bytes(b));
}

TEST_CASE("feature streams") {
    const auto d = parse("1 1:1 2:1 3:1\n0 2:1\n");

    SUBCASE("natural order") {
        FeatureStream s(d, NaturalOrder{});
        CHECK(drain(s) == std::vector<std::size_t>{1, 2, 3});
    }
    SUBCASE("explicit order") {
        FeatureStream s(d, ExplicitOrder{{3, 1, 2}});
        CHECK(drain(s) == std::vector<std::size_t>{3, 1, 2});
    }
    SUBCASE("explicit order must be a bijection") {
        CHECK_THROWS_AS(FeatureStream(d, ExplicitOrder{{1, 1, 2}}), DataError);
        CHECK_THROWS_AS(FeatureStream(d, ExplicitOrder{{1, 2}}), DataError);
        CHECK_THROWS_AS(FeatureStream(d, ExplicitOrder{{1, 2, 4}}), DataError);
    }
}

TEST_CASE("shuffled order is reproducible and exhaustive") {
    std::vector<std::vector<double>> cols(500, std::vector<double>{1.0, 0.0});
    const auto d = fixtures::from_columns(cols, {0, 1});
    FeatureStream a(d, ShuffledOrder{7}), b(d, ShuffledOrder{7}), c(d, ShuffledOrder{8});
    const auto va = drain(a), vb = drain(b), vc = drain(c);
    CHECK(va == vb);
    CHECK(va != vc);
    auto sorted = va;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> expect(500);
    std::iota(expect.begin(), expect.end(), 1);
    CHECK(sorted == expect);
}

TEST_CASE("random_partition") {
    auto sizes = [](const Grouping& g) {
        std::vector<std::size_t> s;
        for (const auto& grp : g.groups) s.push_back(grp.size());
        return s;
    };
    auto covers = [](const Grouping& g, std::size_t n) {
        std::vector<std::size_t> all;
        for (const auto& grp : g.groups) all.insert(all.end(), grp.begin(), grp.end());
        std::sort(all.begin(), all.end());
        std::vector<std::size_t> expect(n);
        std::iota(expect.begin(), expect.end(), 1);
        return all == expect;
    };

    const auto g4 = random_partition(4, 2, 3);
    CHECK(sizes(g4) == std::vector<std::size_t>{2, 2});
    CHECK(covers(g4, 4));

    auto s5 = sizes(random_partition(5, 2, 3));
    std::sort(s5.begin(), s5.end());
    CHECK(s5 == std::vector<std::size_t>{2, 3});

    const auto g500 = random_partition(500, 100, 9);
    CHECK(g500.n_groups() == 100);
    CHECK(covers(g500, 500));
    for (auto s : sizes(g500)) CHECK(s == 5);
    CHECK(random_partition(500, 100, 9).groups == g500.groups);

    const auto odd = random_partition(103, 10, 1);
    const auto so = sizes(odd);
    CHECK(*std::max_element(so.begin(), so.end()) - *std::min_element(so.begin(), so.end()) <= 1);
    CHECK(covers(odd, 103));

    CHECK_THROWS(random_partition(3, 4, 1));
    CHECK_THROWS(random_partition(3, 0, 1));
}

TEST_CASE("group streams") {
    std::vector<std::vector<double>> cols(6, std::vector<double>{1.0, 0.0});
    const auto d = fixtures::from_columns(cols, {0, 1});

    SUBCASE("one group of everything") {
        Grouping g{{{1, 2, 3, 4, 5, 6}}};
        GroupStream s(d, g, NaturalOrder{});
        const auto v = s.next();
        REQUIRE(v);
        CHECK(v->members.size() == 6);
        CHECK_FALSE(s.next());
    }
    SUBCASE("explicit group order") {
        Grouping g{{{1, 2}, {3}}};
        GroupStream s(d, g, ExplicitOrder{{2, 1}});
        CHECK(s.next()->group_id == 1);
        CHECK(s.next()->group_id == 0);
    }
    SUBCASE("invalid groupings") {
        CHECK_THROWS_AS(GroupStream(d, Grouping{{{1, 7}}}, NaturalOrder{}), DataError);
        CHECK_THROWS_AS(GroupStream(d, Grouping{{{1, 2}, {2}}}, NaturalOrder{}), DataError);
        CHECK_THROWS_AS(GroupStream(d, Grouping{{{1}, {}}}, NaturalOrder{}), DataError);
    }
    SUBCASE("group file") {
        std::istringstream in("1 2\n\n3 4 5\n");
        const auto g = read_grouping(in);
        CHECK(g.groups == std::vector<std::vector<std::size_t>>{{1, 2}, {3, 4, 5}});
        std::istringstream bad("1 x\n");
        CHECK_THROWS(read_grouping(bad));
    }
}

TEST_CASE("split") {
    std::vector<double> col(10);
    std::iota(col.begin(), col.end(), 1.0);
    std::vector<std::uint32_t> labels(10);
    for (std::size_t i = 0; i < 10; ++i) labels[i] = i % 2;
    const auto d = fixtures::from_columns({col}, labels, ValueKind::continuous);

    const auto s = split(d, 0.2, 5);
    CHECK(s.train.n_instances() == 8);
    CHECK(s.test.n_instances() == 2);
    CHECK(s.train.n_features() == 1);
    CHECK(s.test.n_features() == 1);
    const auto again = split(d, 0.2, 5);
    CHECK(again.train_rows == s.train_rows);
    CHECK(again.test_rows == s.test_rows);
    // Row i carries value i+1, so the test values identify the test rows.
    for (std::size_t k = 0; k < s.test_rows.size(); ++k)
        CHECK(s.test.column(1).dense(2)[k] == doctest::Approx(s.test_rows[k] + 1.0));

    CHECK(split(d, 0.01, 1).test.n_instances() == 1);
    CHECK(split(d, 0.99, 1).train.n_instances() == 1);
    CHECK_THROWS(split(d, 0.0, 1));
    CHECK_THROWS(split(d, 1.0, 1));
}

TEST_CASE("split of 2000 instances partitions the rows") {
    Rng rng(4);
    const auto d = fixtures::from_columns({fixtures::random_codes(2000, 3, rng)}, fixtures::balanced_labels(2000, rng));
    const auto s = split(d, 0.25, 17);
    CHECK(s.train_rows.size() == 1500);
    CHECK(s.test_rows.size() == 500);
    std::set<std::uint32_t> all(s.train_rows.begin(), s.train_rows.end());
    all.insert(s.test_rows.begin(), s.test_rows.end());
    CHECK(all.size() == 2000);
    CHECK(*all.rbegin() == 1999);
}

TEST_CASE("equal-frequency discretization") {
    CHECK(equal_frequency_codes(std::vector<double>{1, 2, 3, 4}, 2) == std::vector<std::uint32_t>{0, 0, 1, 1});
    CHECK(equal_frequency_codes(std::vector<double>{4, 1, 3, 2}, 2) == std::vector<std::uint32_t>{1, 0, 1, 0});
    CHECK(equal_frequency_codes(std::vector<double>(5, 2.5), 3) == std::vector<std::uint32_t>(5, 0));

    Rng rng(3);
    std::vector<double> v(1001);
    for (auto& x : v) x = rng.normal();
    const auto codes = equal_frequency_codes(v, 4);
    std::vector<double> hist(4, 0);
    for (auto c : codes) ++hist[c];
    for (auto h : hist) CHECK(std::abs(h - 1001.0 / 4) <= 1.0);

    const auto d = fixtures::from_columns({{1, 2, 3, 4}, {7, 7, 7, 7}}, {0, 1, 0, 1}, ValueKind::continuous);
    const auto q = discretize(d, 2);
    CHECK(q.value_kind() == ValueKind::discrete);
    CHECK(q.column(1).dense(4) == std::vector<double>{0, 0, 1, 1});
    CHECK(q.column(2).empty());
    CHECK_THROWS(discretize(d, 5));
    CHECK_THROWS(discretize(d, 1));
    CHECK_THROWS(discretize(q, 2));
}

} // TEST_SUITE
