#include "truncvine/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "truncvine/errors.hpp"

namespace truncvine {

PointSet::PointSet(std::vector<double> coords, std::size_t dim) : coords_(std::move(coords)), dim_(dim) {
    if (dim == 0) throw data_error("point dimension must be at least 1");
    if (coords_.size() % dim != 0) throw data_error("coordinate count is not a multiple of the dimension");
    for (double x : coords_)
        if (!(x >= 0.0 && x <= 1.0)) throw data_error("point coordinates must lie in [0,1]");
}

KdTree::KdTree(const PointSet& points, std::size_t leaf_size)
    : dim_(points.dim()), count_(points.size()), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
    if (count_ == 0) throw data_error("cannot build a K-D tree over an empty point set");
    std::vector<std::size_t> order(count_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    nodes_.reserve(2 * count_ / leaf_size_ + 2);
    build(0, count_, order, points);
    coords_.resize(count_ * dim_);
    for (std::size_t i = 0; i < count_; ++i) {
        auto p = points.point(order[i]);
        std::copy(p.begin(), p.end(), coords_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
    }
}

int KdTree::build(std::size_t begin, std::size_t end, std::vector<std::size_t>& order, const PointSet& points) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    if (end - begin <= leaf_size_) return id;

    std::size_t best_dim = 0;
    double best_spread = -1.0;
    for (std::size_t d = 0; d < dim_; ++d) {
        double lo = 1.0, hi = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const double x = points.point(order[i])[d];
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        if (hi - lo > best_spread) {
            best_spread = hi - lo;
            best_dim = d;
        }
    }
    if (best_spread <= 0.0) return id; // all points coincide

    const std::size_t mid = begin + (end - begin) / 2;
    auto first = order.begin() + static_cast<std::ptrdiff_t>(begin);
    std::nth_element(first, order.begin() + static_cast<std::ptrdiff_t>(mid),
                     order.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                         return points.point(a)[best_dim] < points.point(b)[best_dim];
                     });
    nodes_[id].split_dim = best_dim;
    nodes_[id].split = points.point(order[mid])[best_dim];
    const int l = build(begin, mid, order, points);
    const int r = build(mid, end, order, points);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
}

// heap is a max-heap of the k best squared distances seen so far
void KdTree::search(int node_id, std::span<const double> q, std::size_t k, std::vector<double>& heap) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.left < 0) {
        for (std::size_t i = node.begin; i < node.end; ++i) {
            const double d2 = squared_distance(q, {coords_.data() + i * dim_, dim_});
            if (heap.size() < k) {
                heap.push_back(d2);
                std::push_heap(heap.begin(), heap.end());
            } else if (d2 < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = d2;
                std::push_heap(heap.begin(), heap.end());
            }
        }
        return;
    }
    const double diff = q[node.split_dim] - node.split;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    search(near, q, k, heap);
    if (heap.size() < k || !(diff * diff > heap.front())) search(far, q, k, heap);
}

double KdTree::kth_nn_squared_distance(std::span<const double> query, std::size_t k, bool exclude_self) const {
    if (query.size() != dim_) throw data_error("query dimension does not match the index");
    if (k == 0) throw data_error("k must be at least 1");
    const std::size_t needed = exclude_self ? k + 1 : k;
    if (needed > count_)
        throw data_error("k=" + std::to_string(k) + " is too large for " + std::to_string(count_) + " indexed points" +
                         (exclude_self ? " (excluding self)" : ""));
    std::vector<double> heap;
    heap.reserve(needed);
    search(0, query, needed, heap);
    if (exclude_self && *std::min_element(heap.begin(), heap.end()) != 0.0)
        throw data_error("exclude_self query is not a member of the indexed set");
    return heap.front();
}

double KdTree::kth_nn_distance(std::span<const double> query, std::size_t k, bool exclude_self) const {
    return std::sqrt(kth_nn_squared_distance(query, k, exclude_self));
}

} // namespace truncvine
