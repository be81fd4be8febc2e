#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "truncvine/dataset.hpp"
#include "truncvine/errors.hpp"

using namespace truncvine;

namespace {
std::vector<double> column(const Matrix<double>& m, std::size_t c) {
    std::vector<double> out;
    for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m(r, c));
    return out;
}
Matrix<double> single_column(std::vector<double> v) {
    Matrix<double> m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}
} // namespace

TEST_CASE("parse_csv drops named columns") {
    std::istringstream in("a,b,c\n1,2,x\n3,4,y\n5,6,z\n");
    const std::vector<std::string> drop{"c"};
    auto d = parse_csv(in, drop);
    CHECK(d.rows() == 3);
    CHECK(d.cols() == 2);
    CHECK(d.column_names == std::vector<std::string>{"a", "b"});
    CHECK(d.values(2, 1) == 6.0);
}

TEST_CASE("parse_csv handles quoted headers, CRLF and exponents") {
    std::istringstream in("\"a\",\"b\"\r\n1e-3,+2\r\n-4.5,6\r\n");
    auto d = parse_csv(in, {});
    CHECK(d.column_names == std::vector<std::string>{"a", "b"});
    CHECK(d.values(0, 0) == doctest::Approx(0.001));
    CHECK(d.values(0, 1) == 2.0);
    CHECK(d.values(1, 0) == -4.5);
}

TEST_CASE("parse_csv with a custom delimiter") {
    std::istringstream in("a;b;q\n1;2;3\n4;5;6\n");
    const std::vector<std::string> drop{"q"};
    auto d = parse_csv(in, drop, ';');
    CHECK(d.cols() == 2);
    CHECK(d.values(1, 1) == 5.0);
}

TEST_CASE("parse_csv errors") {
    SUBCASE("letter in a kept column") {
        std::istringstream in("a,b\n1,2\n3,x\n");
        CHECK_THROWS_AS(parse_csv(in, {}), data_error);
    }
    SUBCASE("fewer than two columns remain") {
        std::istringstream in("a,b\n1,2\n3,4\n");
        const std::vector<std::string> drop{"b"};
        CHECK_THROWS_AS(parse_csv(in, drop), data_error);
    }
    SUBCASE("ragged row") {
        std::istringstream in("a,b\n1,2\n3\n");
        CHECK_THROWS_AS(parse_csv(in, {}), data_error);
    }
    SUBCASE("unknown drop column") {
        std::istringstream in("a,b,c\n1,2,3\n3,4,5\n");
        const std::vector<std::string> drop{"zz"};
        CHECK_THROWS_AS(parse_csv(in, drop), data_error);
    }
    SUBCASE("non-finite value") {
        std::istringstream in("a,b\n1,2\n3,inf\n");
        CHECK_THROWS_AS(parse_csv(in, {}), data_error);
    }
    SUBCASE("single row") {
        std::istringstream in("a,b\n1,2\n");
        CHECK_THROWS_AS(parse_csv(in, {}), data_error);
    }
}

TEST_CASE("load_csv reads a file and rejects a missing one") {
    const auto path = std::filesystem::temp_directory_path() / "truncvine_load_test.csv";
    {
        std::ofstream out(path);
        out << "a,b,c\n1,2,3\n4,5,6\n7,8,9\n";
    }
    const std::vector<std::string> drop{"c"};
    auto d = load_csv(path, drop);
    CHECK(d.rows() == 3);
    CHECK(d.cols() == 2);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_csv(path, drop), data_error);
}

TEST_CASE("pobs spec examples") {
    CHECK(column(rank_transform(single_column({3.2, 1.1, 2.7})), 0) == std::vector<double>{3.0 / 3, 1.0 / 3, 2.0 / 3});
    CHECK(column(rank_transform(single_column({10, 20, 30, 40})), 0) == std::vector<double>{0.25, 0.5, 0.75, 1.0});
    CHECK(column(rank_transform(single_column({5, 5, 1})), 0) == std::vector<double>{2.0 / 3, 3.0 / 3, 1.0 / 3});
}

TEST_CASE("pobs m+1 divisor") {
    auto r = rank_transform(single_column({10, 20, 30, 40}), PobsDivisor::m_plus_one);
    CHECK(column(r, 0) == std::vector<double>{0.2, 0.4, 0.6, 0.8});
    CHECK(parse_pobs_divisor("m+1") == PobsDivisor::m_plus_one);
    CHECK_THROWS_AS(parse_pobs_divisor("n"), usage_error);
}

TEST_CASE("pobs matches the stable-rank reference on tie-heavy data") {
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<int> small(0, 9);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t m = 5 + static_cast<std::size_t>(rep) * 7;
        Matrix<double> raw(m, 3);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < 3; ++c) raw(r, c) = small(gen) * 0.5;
        const auto p = rank_transform(raw);
        for (std::size_t c = 0; c < 3; ++c) {
            const auto ref = oracle::stable_ranks(column(raw, c));
            for (std::size_t r = 0; r < m; ++r) CHECK(p(r, c) == static_cast<double>(ref[r]) / static_cast<double>(m));
        }
    }
}

TEST_CASE("pobs properties") {
    const auto raw = oracle::uniform_sample(200, 3, 11);
    const auto p = pobs(oracle::as_dataset(raw));

    SUBCASE("invariant under strictly increasing transforms") {
        Matrix<double> t = raw;
        for (std::size_t r = 0; r < t.rows(); ++r) {
            t(r, 0) = std::exp(3.0 * t(r, 0));
            t(r, 1) = t(r, 1) * t(r, 1) * t(r, 1) - 7.0;
            t(r, 2) = std::log(t(r, 2) + 1e-3);
        }
        CHECK(rank_transform(t) == p.values);
    }
    SUBCASE("sorted columns are 1/m..m/m") {
        for (std::size_t c = 0; c < 3; ++c) {
            auto col = column(p.values, c);
            std::sort(col.begin(), col.end());
            for (std::size_t i = 0; i < col.size(); ++i) CHECK(col[i] == static_cast<double>(i + 1) / 200.0);
        }
    }
    SUBCASE("idempotent") {
        CHECK(rank_transform(p.values) == p.values);
    }
}

TEST_CASE("gather selects rows and columns") {
    PseudoObservations p{Matrix<double>(3, 3), {"a", "b", "c"}};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) p.values(r, c) = static_cast<double>(10 * r + c);
    const std::vector<int> cols{0, 2};
    const std::vector<std::size_t> rows{1, 2};
    CHECK(p.gather(cols, rows) == std::vector<double>{10, 12, 20, 22});
}

TEST_CASE("write_pobs_csv uses 12 significant digits") {
    PseudoObservations p{Matrix<double>(2, 2), {"a", "b"}};
    p.values(0, 0) = 1.0 / 3.0;
    p.values(0, 1) = 1.0;
    p.values(1, 0) = 2.0 / 3.0;
    p.values(1, 1) = 0.5;
    std::ostringstream out;
    write_pobs_csv(out, p);
    CHECK(out.str() == "a,b\n0.333333333333,1\n0.666666666667,0.5\n");
}
