#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "truncvine/cherry.hpp"
#include "truncvine/info_source.hpp"
#include "truncvine/vine_matrix.hpp"

namespace truncvine {

struct ClusterScore {
    VarSet indices;
    double info = 0.0;
};

struct SeparatorScore {
    VarSet indices;
    int multiplicity = 0;
    double info = 0.0;
};

struct TruncatedVineScore {
    int trunc_level = 0;
    double weight = 0.0;
    std::vector<ClusterScore> clusters;     // sorted
    std::vector<SeparatorScore> separators; // sorted
};

/// sum I(K) - sum (nu_S - 1) I(S); separators and multiplicities are recomputed from the clusters.
TruncatedVineScore weight_of_tree(const std::vector<VarSet>& clusters, InfoSource& info);

/// Decode to level t, then weight_of_tree on the order-t clusters.
TruncatedVineScore score_external_matrix(const VineMatrix& m, int t, InfoSource& info);

nlohmann::json to_json(const TruncatedVineScore& s);

} // namespace truncvine
