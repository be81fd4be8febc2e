#pragma once

// Independent reference implementations used as test oracles.

#include <cstdint>
#include <utility>
#include <vector>

#include "truncvine/cherry.hpp"
#include "truncvine/dataset.hpp"
#include "truncvine/info_source.hpp"
#include "truncvine/kd_tree.hpp"
#include "truncvine/matrix.hpp"

namespace oracle {

using truncvine::Matrix;
using truncvine::VarSet;

/// Exhaustive k-th nearest neighbour (squared distance).
double naive_kth_nn_squared(const truncvine::PointSet& pts, std::span<const double> q, std::size_t k, bool exclude_self);

/// side^d lattice built by recursion rather than odometer counting.
std::vector<double> naive_grid(std::size_t d, std::size_t side);

/// Estimator formula evaluated with exhaustive neighbour search.
double naive_estimate(const truncvine::PointSet& sample, std::size_t m_grid, std::size_t k, double eps);

/// rank_i = 1 + #{x_j < x_i} + #{j < i : x_j = x_i}
std::vector<int> stable_ranks(const std::vector<double>& column);

/// Every labelled spanning tree of K_n (Prüfer sequences), edges as (a<b).
std::vector<std::vector<std::pair<int, int>>> all_spanning_trees(int n);

/// Rows of a zero-mean Gaussian with the given correlation matrix.
Matrix<double> gaussian_sample(const Matrix<double>& corr, std::size_t m, std::uint64_t seed);
Matrix<double> uniform_sample(std::size_t m, std::size_t n, std::uint64_t seed);
truncvine::RawDataset as_dataset(const Matrix<double>& values);

/// Deterministic pseudo-random "information" per subset, for structure-only tests.
class HashInfo : public truncvine::InfoSource {
public:
    explicit HashInfo(std::uint64_t seed) : seed_(seed) {}
    double info(const VarSet& vars) override;
    std::size_t calls = 0;

private:
    std::uint64_t seed_;
};

truncvine::CherrySequence random_cherry_sequence(int n, int t, std::uint64_t seed);

/// All order-L regular cherry trees (cluster lists) on n vertices by brute force.
std::vector<std::vector<VarSet>> all_cherry_trees(int n, int L);

/// log det of a small symmetric positive-definite matrix.
double log_det(const Matrix<double>& a);

} // namespace oracle
