#include "truncvine/scoring.hpp"

#include <algorithm>

#include "truncvine/errors.hpp"

namespace truncvine {

TruncatedVineScore weight_of_tree(const std::vector<VarSet>& clusters, InfoSource& info) {
    if (clusters.empty()) throw structure_error("cannot score an empty cluster list");
    auto ks = clusters;
    std::sort(ks.begin(), ks.end());
    const int order = static_cast<int>(ks.front().size());
    for (const auto& k : ks)
        if (static_cast<int>(k.size()) != order) throw structure_error("clusters have different sizes");

    const auto seps = separators_of(ks);
    std::vector<VarSet> needed = ks;
    for (const auto& s : seps)
        if (s.indices.size() >= 2) needed.push_back(s.indices);
    info.prefetch(needed);

    TruncatedVineScore out;
    out.trunc_level = order;
    double cluster_sum = 0.0, separator_sum = 0.0;
    for (const auto& k : ks) {
        const double v = info.info(k);
        out.clusters.push_back({k, v});
        cluster_sum += v;
    }
    for (const auto& s : seps) {
        const double v = s.indices.size() >= 2 ? info.info(s.indices) : 0.0;
        out.separators.push_back({s.indices, s.multiplicity, v});
        separator_sum += (s.multiplicity - 1) * v;
    }
    out.weight = cluster_sum - separator_sum;
    return out;
}

TruncatedVineScore score_external_matrix(const VineMatrix& m, int t, InfoSource& info) {
    const auto decoded = decode(m, t);
    return weight_of_tree(decoded.clusters(t), info);
}

nlohmann::json to_json(const TruncatedVineScore& s) {
    auto labels = [](const VarSet& v) {
        auto a = nlohmann::json::array();
        for (int x : v) a.push_back(x + 1);
        return a;
    };
    nlohmann::json j;
    j["trunc_level"] = s.trunc_level;
    j["weight_bits"] = s.weight;
    auto ks = nlohmann::json::array();
    for (const auto& c : s.clusters) ks.push_back({{"indices", labels(c.indices)}, {"info", c.info}});
    auto ss = nlohmann::json::array();
    for (const auto& c : s.separators)
        ss.push_back({{"indices", labels(c.indices)}, {"multiplicity", c.multiplicity}, {"info", c.info}});
    j["clusters"] = ks;
    j["separators"] = ss;
    return j;
}

} // namespace truncvine
