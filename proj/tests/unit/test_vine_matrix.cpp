#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "support/oracles.hpp"
#include "truncvine/errors.hpp"
#include "truncvine/vine_matrix.hpp"

using namespace truncvine;

namespace {

std::vector<VarSet> one_based(std::initializer_list<std::initializer_list<int>> sets) {
    std::vector<VarSet> out;
    for (auto s : sets) {
        std::vector<int> v;
        for (int x : s) v.push_back(x - 1);
        out.emplace_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

CherrySequence example_one() {
    CherrySequence s;
    s.n = 8;
    s.trees = {
        {2, one_based({{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {5, 7}, {7, 8}})},
        {3, one_based({{1, 2, 3}, {2, 3, 4}, {3, 4, 5}, {4, 5, 6}, {4, 5, 7}, {5, 7, 8}})},
        {4, one_based({{1, 2, 3, 4}, {2, 3, 4, 5}, {3, 4, 5, 6}, {3, 4, 5, 7}, {4, 5, 7, 8}})},
        {5, one_based({{1, 2, 3, 4, 5}, {2, 3, 4, 5, 6}, {2, 3, 4, 5, 7}, {3, 4, 5, 7, 8}})},
    };
    s.weights = {0, 0, 0, 0};
    return s;
}

PairCopulaFactor f(int a, int b, std::initializer_list<int> cond = {}) {
    std::vector<int> c;
    for (int x : cond) c.push_back(x - 1);
    return {std::min(a, b) - 1, std::max(a, b) - 1, VarSet(c)};
}

bool has_violation(const std::vector<std::string>& errs, const std::string& needle) {
    return std::any_of(errs.begin(), errs.end(), [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

VineMatrix from_rows(std::vector<std::vector<int>> rows, int t) {
    VineMatrix m;
    m.n = static_cast<int>(rows.size());
    m.trunc_level = t;
    m.entries = Matrix<int>(rows.size(), rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows.size(); ++c) m.entries(r, c) = rows[r][c];
    return m;
}

} // namespace

TEST_CASE("worked example: 22 factors") {
    const auto seq = example_one();
    REQUIRE(check_cherry_sequence(seq).empty());
    const auto m = encode(seq);
    CHECK(validate(m).empty());
    const auto d = decode(m, 5);
    std::vector<PairCopulaFactor> expected{
        f(1, 2), f(2, 3), f(3, 4), f(4, 5), f(1, 3, {2}), f(2, 4, {3}), f(3, 5, {4}), f(1, 4, {2, 3}),
        f(2, 5, {3, 4}), f(1, 5, {2, 3, 4}), f(2, 6, {3, 4, 5}), f(3, 6, {4, 5}), f(4, 6, {5}), f(5, 6),
        f(2, 7, {3, 4, 5}), f(3, 7, {4, 5}), f(4, 7, {5}), f(5, 7), f(3, 8, {4, 5, 7}), f(4, 8, {5, 7}), f(5, 8, {7}),
        f(7, 8)};
    std::sort(expected.begin(), expected.end());
    CHECK(d.factors.size() == 22);
    CHECK(d.factors == expected);
    for (int order = 2; order <= 5; ++order) CHECK(d.clusters(order) == seq.tree(order).clusters);
}

TEST_CASE("three variables, t = 2") {
    CherrySequence s{3, {{2, {{0, 1}, {1, 2}}}}, {0}};
    const auto m = encode(s);
    CHECK(m.trunc_level == 2);
    CHECK(validate(m).empty());
    const auto d = decode(m, 2);
    CHECK(d.factors == std::vector<PairCopulaFactor>{f(1, 2), f(2, 3)});
}

TEST_CASE("2x2 decode") {
    const auto m = from_rows({{1, 0}, {2, 2}}, 2);
    CHECK(validate(m).empty());
    CHECK(decode(m, 2).factors == std::vector<PairCopulaFactor>{f(1, 2)});
}

TEST_CASE("round trip over random regular cherry sequences") {
    int count = 0;
    for (std::uint64_t seed = 1; count < 200; ++seed) {
        const int n = 2 + static_cast<int>(seed % 9);
        const int t = 2 + static_cast<int>((seed / 9) % static_cast<std::uint64_t>(std::min(n, 6) - 1));
        const auto seq = oracle::random_cherry_sequence(n, t, seed);
        ++count;
        CAPTURE(n);
        CAPTURE(t);
        CAPTURE(seed);
        const auto m = encode(seq);
        REQUIRE(validate(m).empty());
        const auto d = decode(m, t);
        CHECK(d.clusters(t) == seq.tree(t).clusters);
        CHECK(d.separators(t) == seq.tree(t).separators());
        for (int order = 2; order <= t; ++order) CHECK(d.clusters(order) == seq.tree(order).clusters);
        std::size_t expected = 0;
        for (int r = 1; r <= t - 1; ++r) expected += static_cast<std::size_t>(n - r);
        CHECK(d.factors.size() == expected);
        for (const auto& fac : d.factors) {
            CHECK_FALSE(fac.conditioning.contains(fac.a));
            CHECK_FALSE(fac.conditioning.contains(fac.b));
            CHECK(fac.a != fac.b);
        }
    }
}

TEST_CASE("validate reports a repeated diagonal entry") {
    auto m = encode(example_one());
    m.entries(0, 0) = m.entries(1, 1);
    CHECK(has_violation(validate(m), "diagonal not injective"));
    CHECK_THROWS_AS(decode(m, 5), structure_error);
}

TEST_CASE("validate reports a level-2 cycle") {
    // D-vine 1-2-3-4 truncated at level 2: bottom-row edges 1-2, 2-3, 3-4
    auto m = from_rows({{1, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 3, 0}, {2, 3, 4, 4}}, 2);
    CHECK(validate(m).empty());
    m.entries(3, 2) = 1; // edge 3-1 closes the cycle 1-2-3
    CHECK(has_violation(validate(m), "level-2 graph not a tree"));
}

TEST_CASE("validate reports truncation and shape problems") {
    auto m = encode(example_one());
    SUBCASE("wrong truncation level") {
        m.trunc_level = 4;
        CHECK(has_violation(validate(m), "zero pattern"));
    }
    SUBCASE("upper triangle") {
        m.entries(0, 1) = 3;
        CHECK(has_violation(validate(m), "lower-triangular"));
    }
    SUBCASE("out of range") {
        m.entries(7, 0) = 9;
        CHECK(has_violation(validate(m), "out of range"));
    }
    SUBCASE("repeated column entry") {
        m.entries(7, 0) = m.entries(6, 0);
        CHECK(has_violation(validate(m), "repeats"));
    }
}

TEST_CASE("validate reports a proximity violation") {
    // c(1,4|2) needs edge 2-4 at the first level, but the edges are 1-2, 2-3, 3-4
    auto m = from_rows({{1, 0, 0, 0}, {0, 2, 0, 0}, {4, 4, 3, 0}, {2, 3, 4, 4}}, 3);
    CHECK(has_violation(validate(m), "proximity condition fails for factor c(1,4|2)"));
}

TEST_CASE("hand-built D-vine on four variables") {
    auto m = from_rows({{1, 0, 0, 0}, {0, 2, 0, 0}, {3, 0, 3, 0}, {2, 3, 4, 4}}, 3);
    CHECK(has_violation(validate(m), "zero pattern")); // column 2 misses its level-2 entry
    auto dv = from_rows({{1, 0, 0, 0}, {0, 2, 0, 0}, {3, 4, 4, 0}, {2, 3, 3, 3}}, 3);
    REQUIRE(validate(dv).empty());
    auto d = decode(dv, 3);
    CHECK(d.clusters(3) == one_based({{1, 2, 3}, {2, 3, 4}}));
    CHECK(d.separators(3) == std::vector<Separator>{{VarSet{1, 2}, 2}});
}

TEST_CASE("reorient is an involution and keeps the factors") {
    const auto m = encode(example_one());
    const auto r = reorient(m);
    CHECK(r.orientation == Orientation::r_package);
    CHECK(reorient(r) == m);
    CHECK(validate(r).empty());
    CHECK(decode(r, 5).factors == decode(m, 5).factors);
    CHECK(to_orientation(r, Orientation::paper) == m);
}

TEST_CASE("reorient 3x3 by hand") {
    auto m = from_rows({{1, 0, 0}, {3, 2, 0}, {2, 3, 3}}, 3);
    REQUIRE(validate(m).empty());
    auto r = reorient(m);
    const std::vector<int> expected{3, 3, 2, 0, 2, 3, 0, 0, 1};
    CHECK(r.entries.data() == expected);
}

TEST_CASE("matrix CSV round trip and header-less inference") {
    const auto m = encode(example_one());
    std::stringstream ss;
    write_matrix_csv(ss, m);
    const std::string text = ss.str();
    CHECK(text.rfind("# {\"n\":8,\"orientation\":\"paper\",\"trunc_level\":5}\n", 0) == 0);
    CHECK(read_matrix_csv(ss) == m);

    std::istringstream body(text.substr(text.find('\n') + 1));
    auto inferred = read_matrix_csv(body);
    CHECK(inferred == m);

    std::stringstream rs;
    write_matrix_csv(rs, reorient(m));
    auto back = read_matrix_csv(rs);
    CHECK(back.orientation == Orientation::r_package);
    CHECK(back.trunc_level == 5);

    std::istringstream bad("1,0\n2,x\n");
    CHECK_THROWS_AS(read_matrix_csv(bad), data_error);
    std::istringstream ragged("1,0\n2\n");
    CHECK_THROWS_AS(read_matrix_csv(ragged), data_error);
}

TEST_CASE("encode error contracts") {
    CHECK_THROWS_AS(encode(example_one(), false), usage_error);
    auto broken = example_one();
    broken.trees[3].clusters.pop_back();
    CHECK_THROWS_AS(encode(broken), structure_error);
    CHECK_THROWS_AS(decode(encode(example_one()), 6), structure_error);
}

TEST_CASE("decode at a lower level") {
    const auto m = encode(example_one());
    const auto d = decode(m, 3);
    CHECK(d.factors.size() == 7 + 6);
    CHECK(d.clusters(3) == example_one().tree(3).clusters);
}

TEST_CASE("structure JSON") {
    const auto j = structure_json(encode(example_one()));
    CHECK(j["n"] == 8);
    CHECK(j["trunc_level"] == 5);
    CHECK(j["orientation"] == "paper");
    CHECK(j["diagonal"].size() == 8);
    CHECK(j["clusters_by_level"]["5"].size() == 4);
    CHECK(j["separators_by_level"]["5"].size() == 2); // {2,3,4,5} x3 and {3,4,5,7} x2
    CHECK(j["clusters_by_level"]["2"][0] == nlohmann::json::array({1, 2}));
}
