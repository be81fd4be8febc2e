#pragma once

#include <span>

#include "truncvine/var_set.hpp"

namespace truncvine {

/// Anything that can report the information content of a variable subset.
class InfoSource {
public:
    virtual ~InfoSource() = default;
    virtual double info(const VarSet& vars) = 0;
    /// Hint that these subsets will be queried soon; implementations may batch or parallelize.
    virtual void prefetch(std::span<const VarSet> sets) {
        for (const auto& s : sets) info(s);
    }
};

} // namespace truncvine
