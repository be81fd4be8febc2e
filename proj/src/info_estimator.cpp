#include "truncvine/info_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "truncvine/errors.hpp"

namespace truncvine {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// uniform in [0, bound) by rejection, identical across standard libraries
std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % bound;
}

} // namespace

std::size_t grid_side(std::size_t d, std::size_t m) {
    if (d == 0) throw data_error("grid dimension must be at least 1");
    std::size_t s = 2;
    for (;; ++s) {
        std::size_t p = 1;
        bool reached = false;
        for (std::size_t i = 0; i < d; ++i) {
            p *= s;
            if (p >= m) {
                reached = true;
                break;
            }
        }
        if (reached) return s;
    }
}

UniformGrid UniformGrid::generate(std::size_t d, std::size_t m, std::uint64_t point_budget) {
    if (m < 2) throw data_error("grid needs m >= 2");
    const std::size_t side = grid_side(d, m);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (total > point_budget / side + 1) {
            total = point_budget + 1;
            break;
        }
        total *= side;
    }
    if (total > point_budget)
        throw resource_error("uniform grid for d=" + std::to_string(d) + " (side " + std::to_string(side) +
                             ") exceeds the memory budget of " + std::to_string(point_budget) + " points");

    std::vector<double> coords;
    coords.reserve(total * d);
    std::vector<std::size_t> digits(d, 0);
    const double step = 1.0 / static_cast<double>(side - 1);
    for (std::uint64_t n = 0; n < total; ++n) {
        for (std::size_t i = 0; i < d; ++i)
            coords.push_back(digits[i] == side - 1 ? 1.0 : static_cast<double>(digits[i]) * step);
        for (std::size_t i = d; i-- > 0;) {
            if (++digits[i] < side) break;
            digits[i] = 0;
        }
    }
    UniformGrid g;
    g.d = d;
    g.side = side;
    g.points = PointSet(std::move(coords), d);
    g.index = std::make_unique<KdTree>(g.points);
    return g;
}

std::shared_ptr<const UniformGrid> GridCache::get(std::size_t d) {
    std::lock_guard lock(mutex_);
    auto it = grids_.find(d);
    if (it != grids_.end()) return it->second;
    auto grid = std::make_shared<const UniformGrid>(UniformGrid::generate(d, m_, budget_));
    grids_.emplace(d, grid);
    return grid;
}

std::vector<std::shared_ptr<const UniformGrid>> precompute_grids(std::size_t m, int t, std::uint64_t point_budget) {
    if (t < 2) throw usage_error("truncation level must be at least 2");
    std::vector<std::shared_ptr<const UniformGrid>> out;
    for (int d = 2; d <= t; ++d)
        out.push_back(std::make_shared<const UniformGrid>(
            UniformGrid::generate(static_cast<std::size_t>(d), m, point_budget)));
    return out;
}

std::size_t retained_rows(std::size_t m, std::size_t d, int t) {
    if (m > 100'000'000) throw data_error("too many rows for subsampling");
    const auto tt = static_cast<std::uint64_t>(t);
    const std::uint64_t target = static_cast<std::uint64_t>(m) * m * d; // r^2 * t <= m^2 * d
    auto r = static_cast<std::uint64_t>(std::floor(static_cast<double>(m) * std::sqrt(double(d) / double(t))));
    while ((r + 1) * (r + 1) * tt <= target) ++r;
    while (r > 0 && r * r * tt > target) --r;
    return static_cast<std::size_t>(r);
}

std::vector<std::size_t> subsample_for_dim(std::size_t m, std::size_t d, int t, std::uint64_t seed,
                                           std::size_t k_neighbors) {
    if (d < 2 || static_cast<int>(d) > t)
        throw data_error("subsample dimension " + std::to_string(d) + " outside 2.." + std::to_string(t));
    const std::size_t keep = retained_rows(m, d, t);
    if (keep < k_neighbors + 1)
        throw data_error("only " + std::to_string(keep) + " rows retained for d=" + std::to_string(d) +
                         "; the estimator needs more than k=" + std::to_string(k_neighbors));
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    if (keep == m) return idx;

    std::mt19937_64 gen(splitmix64(seed ^ splitmix64(d)));
    for (std::size_t i = 0; i < keep; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(bounded(gen, m - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());
    return idx;
}

double estimate_info(const PointSet& sample, const UniformGrid& grid, const EstimatorConfig& config) {
    const std::size_t m = sample.size();
    const std::size_t d = sample.dim();
    const std::size_t k = config.k_neighbors;
    if (d != grid.d) throw data_error("sample dimension does not match grid dimension");
    if (m <= k) throw data_error("estimator needs more than k=" + std::to_string(k) + " rows, got " + std::to_string(m));
    if (k > grid.points.size()) throw data_error("grid has fewer than k points");

    const KdTree data_index(sample);
    const double eps = config.epsilon_clamp;
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto p = sample.point(i);
        const double nu = std::max(grid.index->kth_nn_distance(p, k, false), eps);
        const double rho = std::max(data_index.kth_nn_distance(p, k, true), eps);
        sum += std::log2(nu / rho);
    }
    const double md = static_cast<double>(m);
    return static_cast<double>(d) / md * sum + std::log2(md / (md - 1.0));
}

InfoEstimator::InfoEstimator(const PseudoObservations& data, EstimatorConfig config, std::shared_ptr<GridCache> grids)
    : data_(data), config_(config), grids_(std::move(grids)) {
    if (config_.k_neighbors < 1) throw usage_error("k must be at least 1");
    if (config_.trunc_level < 2) throw usage_error("truncation level must be at least 2");
    if (!grids_) grids_ = std::make_shared<GridCache>(data.rows(), config_.grid_point_budget);
    if (grids_->m() != data.rows()) throw usage_error("grid cache was built for a different sample count");
}

const std::vector<std::size_t>& InfoEstimator::rows_for(std::size_t d) {
    std::lock_guard lock(mutex_);
    auto it = subsets_.find(d);
    if (it == subsets_.end())
        it = subsets_
                 .emplace(d, subsample_for_dim(data_.rows(), d, config_.trunc_level, config_.seed,
                                               config_.k_neighbors))
                 .first;
    return it->second;
}

double InfoEstimator::compute(const VarSet& vars) {
    const std::size_t d = vars.size();
    const auto& rows = rows_for(d);
    const auto grid = grids_->get(d);
    PointSet sample(data_.gather(vars.items(), rows), d);
    ++calls_;
    return estimate_info(sample, *grid, config_);
}

double InfoEstimator::info(const VarSet& vars) {
    if (vars.size() <= 1) return 0.0;
    if (static_cast<int>(vars.size()) > config_.trunc_level)
        throw data_error("subset " + vars.to_string() + " is larger than the truncation level " +
                         std::to_string(config_.trunc_level));
    for (int v : vars)
        if (v < 0 || static_cast<std::size_t>(v) >= data_.cols())
            throw data_error("variable index out of range in " + vars.to_string());
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(vars);
        if (it != cache_.end()) return it->second;
    }
    const double value = compute(vars);
    std::lock_guard lock(mutex_);
    return cache_.emplace(vars, value).first->second;
}

void InfoEstimator::prefetch(std::span<const VarSet> sets) {
    std::vector<VarSet> missing;
    {
        std::lock_guard lock(mutex_);
        for (const auto& s : sets)
            if (s.size() > 1 && !cache_.count(s)) missing.push_back(s);
    }
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    if (missing.size() < 2) {
        for (const auto& s : missing) info(s);
        return;
    }
    // warm shared state so worker threads only read it
    for (const auto& s : missing) {
        rows_for(s.size());
        grids_->get(s.size());
    }
    const std::size_t workers =
        std::min<std::size_t>(missing.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i; (i = next++) < missing.size();) info(missing[i]);
            } catch (...) {
                errors[w] = std::current_exception();
                next = missing.size();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void InfoEstimator::insert(const VarSet& vars, double value) {
    std::lock_guard lock(mutex_);
    cache_[vars] = value;
}

std::map<VarSet, double> InfoEstimator::cache_snapshot() const {
    std::lock_guard lock(mutex_);
    return cache_;
}

std::size_t InfoEstimator::cache_size() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
}

} // namespace truncvine
