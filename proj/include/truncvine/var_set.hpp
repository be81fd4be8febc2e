#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace truncvine {

/// Sorted, duplicate-free set of 0-based variable indices.
///
/// Ordering is lexicographic on the sorted tuple, which is the tie-break
/// order used throughout structure learning and encoding.
class VarSet {
public:
    VarSet() = default;
    VarSet(std::initializer_list<int> items) : VarSet(std::vector<int>(items)) {}
    explicit VarSet(std::vector<int> items) : items_(std::move(items)) {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }

    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    int operator[](std::size_t i) const { return items_[i]; }
    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }
    const std::vector<int>& items() const noexcept { return items_; }

    bool contains(int v) const { return std::binary_search(items_.begin(), items_.end(), v); }
    bool is_subset_of(const VarSet& other) const {
        return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
    }

    VarSet with(int v) const {
        auto copy = items_;
        copy.push_back(v);
        return VarSet(std::move(copy));
    }
    VarSet without(int v) const {
        VarSet out;
        out.items_.reserve(items_.size());
        for (int x : items_)
            if (x != v) out.items_.push_back(x);
        return out;
    }

    friend VarSet set_union(const VarSet& a, const VarSet& b) {
        VarSet out;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.items_));
        return out;
    }
    friend VarSet set_intersection(const VarSet& a, const VarSet& b) {
        VarSet out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.items_));
        return out;
    }
    friend VarSet set_difference(const VarSet& a, const VarSet& b) {
        VarSet out;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.items_));
        return out;
    }

    /// Renders as "{1,2,3}" with labels shifted by `base` (1 for user-facing output).
    std::string to_string(int base = 1) const {
        std::string s = "{";
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(items_[i] + base);
        }
        return s + "}";
    }

    friend bool operator==(const VarSet&, const VarSet&) = default;
    friend auto operator<=>(const VarSet&, const VarSet&) = default;

private:
    std::vector<int> items_;
};

} // namespace truncvine
