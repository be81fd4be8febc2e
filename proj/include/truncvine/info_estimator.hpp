#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "truncvine/dataset.hpp"
#include "truncvine/info_source.hpp"
#include "truncvine/kd_tree.hpp"

namespace truncvine {

struct EstimatorConfig {
    std::size_t k_neighbors = 5;
    int trunc_level = 2;
    std::uint64_t seed = 0;
    double epsilon_clamp = 1e-12;
    std::uint64_t grid_point_budget = 50'000'000;
};

/// Smallest integer s with s^d >= m (at least 2).
std::size_t grid_side(std::size_t d, std::size_t m);

/// side^d points with coordinates k/(side-1), plus a K-D tree over them.
struct UniformGrid {
    std::size_t d = 0;
    std::size_t side = 0;
    PointSet points;
    std::unique_ptr<KdTree> index;

    static UniformGrid generate(std::size_t d, std::size_t m, std::uint64_t point_budget = 50'000'000);
};

/// Lazily built grids for a fixed m, shared across truncation levels. Thread-safe.
class GridCache {
public:
    GridCache(std::size_t m, std::uint64_t point_budget) : m_(m), budget_(point_budget) {}

    std::shared_ptr<const UniformGrid> get(std::size_t d);
    std::size_t m() const noexcept { return m_; }

private:
    std::size_t m_;
    std::uint64_t budget_;
    std::mutex mutex_;
    std::map<std::size_t, std::shared_ptr<const UniformGrid>> grids_;
};

/// Builds grids for d = 2..t eagerly.
std::vector<std::shared_ptr<const UniformGrid>> precompute_grids(std::size_t m, int t,
                                                                 std::uint64_t point_budget = 50'000'000);

/// floor(m * sqrt(d/t)), computed exactly in integers.
std::size_t retained_rows(std::size_t m, std::size_t d, int t);

/// Sorted row indices kept for dimension d; all rows when d == t.
std::vector<std::size_t> subsample_for_dim(std::size_t m, std::size_t d, int t, std::uint64_t seed,
                                           std::size_t k_neighbors = 5);

/// k-NN divergence estimate (bits) of the rows of `sample` against the uniform grid.
double estimate_info(const PointSet& sample, const UniformGrid& grid, const EstimatorConfig& config);

/// Memoized information-content estimates for one truncation level.
class InfoEstimator : public InfoSource {
public:
    InfoEstimator(const PseudoObservations& data, EstimatorConfig config, std::shared_ptr<GridCache> grids = nullptr);

    double info(const VarSet& vars) override;
    void prefetch(std::span<const VarSet> sets) override;

    void insert(const VarSet& vars, double value);
    std::map<VarSet, double> cache_snapshot() const;
    std::size_t cache_size() const;
    std::size_t estimator_calls() const noexcept { return calls_.load(); }
    const EstimatorConfig& config() const noexcept { return config_; }

private:
    double compute(const VarSet& vars);
    const std::vector<std::size_t>& rows_for(std::size_t d);

    const PseudoObservations& data_;
    EstimatorConfig config_;
    std::shared_ptr<GridCache> grids_;
    mutable std::mutex mutex_;
    std::map<VarSet, double> cache_;
    std::map<std::size_t, std::vector<std::size_t>> subsets_;
    std::atomic<std::size_t> calls_{0};
};

} // namespace truncvine
