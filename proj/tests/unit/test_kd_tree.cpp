#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "support/oracles.hpp"
#include "truncvine/errors.hpp"
#include "truncvine/kd_tree.hpp"

using namespace truncvine;

namespace {
PointSet random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u;
    std::vector<double> c(n * d);
    for (auto& x : c) x = u(gen);
    return PointSet(std::move(c), d);
}
} // namespace

TEST_CASE("single point index") {
    const PointSet pts({0.3, 0.4}, 2);
    const KdTree tree(pts);
    const std::vector<double> q{0.0, 0.0};
    CHECK(tree.kth_nn_distance(q, 1) == doctest::Approx(0.5));
}

TEST_CASE("one-dimensional examples") {
    const PointSet pts({0.0, 0.5, 1.0}, 1);
    const KdTree tree(pts, 1);
    const std::vector<double> zero{0.0}, q{0.2};
    CHECK(tree.kth_nn_distance(zero, 1, true) == 0.5);
    CHECK(tree.kth_nn_distance(q, 2, false) == doctest::Approx(0.3));
}

TEST_CASE("3x3 grid nearest neighbour") {
    const PointSet pts(oracle::naive_grid(2, 3), 2);
    const KdTree tree(pts, 2);
    const std::vector<double> q{0.1, 0.1};
    CHECK(tree.kth_nn_distance(q, 1) == doctest::Approx(std::sqrt(0.02)));
}

TEST_CASE("matches the exhaustive oracle exactly") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const std::size_t d = seed;
        const auto pts = random_points(500, d, seed);
        const KdTree tree(pts);
        const auto queries = random_points(20, d, 100 + seed);
        for (std::size_t i = 0; i < queries.size(); ++i)
            for (std::size_t k : {1u, 5u, 17u})
                CHECK(tree.kth_nn_squared_distance(queries.point(i), k) ==
                      oracle::naive_kth_nn_squared(pts, queries.point(i), k, false));
        for (std::size_t i = 0; i < 50; ++i)
            CHECK(tree.kth_nn_squared_distance(pts.point(i), 5, true) ==
                  oracle::naive_kth_nn_squared(pts, pts.point(i), 5, true));
    }
}

TEST_CASE("exclude_self skips exactly one coincident point") {
    const PointSet pts({0.2, 0.2, 0.2, 0.9}, 1);
    const KdTree tree(pts);
    const std::vector<double> q{0.2};
    CHECK(tree.kth_nn_distance(q, 1, true) == 0.0);
    CHECK(tree.kth_nn_distance(q, 2, true) == 0.0);
    CHECK(tree.kth_nn_distance(q, 3, true) == doctest::Approx(0.7));
}

TEST_CASE("distances are monotone in k and permutation invariant") {
    auto pts = random_points(300, 3, 42);
    const KdTree tree(pts);
    std::vector<std::size_t> perm(300);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(3));
    std::vector<double> shuffled;
    for (std::size_t i : perm) {
        auto p = pts.point(i);
        shuffled.insert(shuffled.end(), p.begin(), p.end());
    }
    const KdTree tree2(PointSet(shuffled, 3));
    for (std::size_t i = 0; i < 30; ++i) {
        double prev = 0.0;
        for (std::size_t k = 1; k <= 10; ++k) {
            const double d = tree.kth_nn_squared_distance(pts.point(i), k, true);
            CHECK(d >= prev);
            CHECK(d == tree2.kth_nn_squared_distance(pts.point(i), k, true));
            prev = d;
        }
    }
}

TEST_CASE("heavily duplicated points") {
    std::vector<double> c(200, 0.5);
    for (std::size_t i = 0; i < 50; ++i) c[i] = 0.25;
    const PointSet pts(c, 2);
    const KdTree tree(pts, 3);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t k : {1u, 5u, 30u})
            CHECK(tree.kth_nn_squared_distance(pts.point(i), k, true) ==
                  oracle::naive_kth_nn_squared(pts, pts.point(i), k, true));
}

TEST_CASE("error contracts") {
    CHECK_THROWS_AS(KdTree(PointSet({}, 2)), data_error);
    CHECK_THROWS_AS(PointSet({0.5, 1.5}, 2), data_error);
    const PointSet pts({0.0, 0.5, 1.0}, 1);
    const KdTree tree(pts);
    const std::vector<double> q{0.0}, outside{0.3};
    CHECK_THROWS_AS(tree.kth_nn_distance(q, 3, true), data_error);
    CHECK_THROWS_AS(tree.kth_nn_distance(q, 4, false), data_error);
    CHECK_THROWS_AS(tree.kth_nn_distance(outside, 1, true), data_error);
    CHECK_NOTHROW(tree.kth_nn_distance(q, 3, false));
}
