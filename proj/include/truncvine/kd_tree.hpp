#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace truncvine {

/// Points in [0,1]^d stored row-major.
class PointSet {
public:
    PointSet() = default;
    PointSet(std::vector<double> coords, std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ ? coords_.size() / dim_ : 0; }
    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    const std::vector<double>& coords() const noexcept { return coords_; }

private:
    std::vector<double> coords_;
    std::size_t dim_ = 0;
};

/// Squared Euclidean distance, summed over dimensions in order.
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

/// Exact k-nearest-neighbour index (bucketed K-D tree, median splits on the widest dimension).
class KdTree {
public:
    explicit KdTree(const PointSet& points, std::size_t leaf_size = 10);

    std::size_t size() const noexcept { return count_; }
    std::size_t dim() const noexcept { return dim_; }

    /// Squared distance to the k-th nearest indexed point. With exclude_self the
    /// query must be an indexed point and one zero-distance occurrence is skipped.
    double kth_nn_squared_distance(std::span<const double> query, std::size_t k, bool exclude_self = false) const;
    double kth_nn_distance(std::span<const double> query, std::size_t k, bool exclude_self = false) const;

private:
    struct Node {
        std::size_t begin, end;
        std::size_t split_dim = 0;
        double split = 0.0;
        int left = -1, right = -1;
    };

    int build(std::size_t begin, std::size_t end, std::vector<std::size_t>& order, const PointSet& points);
    void search(int node, std::span<const double> q, std::size_t k, std::vector<double>& heap) const;

    std::size_t dim_ = 0;
    std::size_t count_ = 0;
    std::size_t leaf_size_;
    std::vector<double> coords_; // reordered so every leaf is contiguous
    std::vector<Node> nodes_;
};

} // namespace truncvine
