#include "truncvine/cherry_builder.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "truncvine/errors.hpp"

namespace truncvine {

Matrix<double> mutual_information_matrix(int n, InfoSource& info) {
    if (n < 2) throw data_error("need at least 2 variables");
    std::vector<VarSet> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    info.prefetch(pairs);
    Matrix<double> m(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 0.0);
    for (const auto& p : pairs) m(p[0], p[1]) = m(p[1], p[0]) = info.info(p);
    return m;
}

SpanningTree max_spanning_tree(const Matrix<double>& w) {
    const int n = static_cast<int>(w.rows());
    std::vector<std::pair<int, int>> all;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
    std::stable_sort(all.begin(), all.end(), [&](auto a, auto b) { return w(a.first, a.second) > w(b.first, b.second); });

    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    SpanningTree out{Graph(n), {}, 0.0};
    for (auto [a, b] : all) {
        const int ra = find(a), rb = find(b);
        if (ra == rb) continue;
        parent[ra] = rb;
        out.edges.emplace_back(a, b);
        if (static_cast<int>(out.edges.size()) == n - 1) break;
    }
    std::sort(out.edges.begin(), out.edges.end());
    for (auto [a, b] : out.edges) {
        out.graph.add_edge(a, b);
        out.weight += w(a, b);
    }
    return out;
}

Matrix<std::optional<VarSet>> one_step_neighborhood(const Graph& g, int L) {
    const int n = g.n();
    std::vector<VarSet> ne(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) ne[v] = g.neighbors(v);
    Matrix<std::optional<VarSet>> a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (s == t) continue;
            VarSet w = set_intersection(ne[s], ne[t]).without(s).without(t);
            if (static_cast<int>(w.size()) == L - 2) a(s, t) = std::move(w);
        }
    return a;
}

LevelResult grow_level(const Graph& prev_graph, const std::vector<VarSet>& prev_clusters, int L, InfoSource& info,
                       bool record_audit) {
    const int n = prev_graph.n();
    if (L < 3 || L > n) throw usage_error("grow_level: level " + std::to_string(L) + " outside 3..n");
    const auto A = one_step_neighborhood(prev_graph, L);
    const std::set<VarSet> prev(prev_clusters.begin(), prev_clusters.end());

    LevelResult out;
    out.graph = prev_graph;
    std::vector<char> found(static_cast<std::size_t>(n), 0);
    std::vector<std::pair<int, int>> new_edges;

    for (int r = 0; r < n - L + 1; ++r) {
        const bool first = r == 0;
        std::vector<int> V;
        for (int v = 0; v < n; ++v)
            if (first || found[v]) V.push_back(v);

        std::vector<Candidate> cands;
        std::set<VarSet> seen;
        for (int i : V)
            for (int j = 0; j < n; ++j) {
                if (!A(i, j)) continue;
                const VarSet& a = *A(i, j);
                const VarSet left = a.with(i), right = a.with(j);
                if (!prev.count(left) || !prev.count(right)) continue;
                VarSet c = left.with(j);
                if (std::find(out.clusters.begin(), out.clusters.end(), c) != out.clusters.end()) continue;
                if (!first) {
                    if (found[j]) continue;
                    const bool attached = std::any_of(out.clusters.begin(), out.clusters.end(),
                                                      [&](const VarSet& k) { return left.is_subset_of(k); });
                    if (!attached) continue;
                }
                if (!seen.insert(c).second) continue;
                cands.push_back({std::move(c), i, j, 0.0});
            }
        if (cands.empty())
            throw structure_error("order " + std::to_string(L) + " step " + std::to_string(r + 1) +
                                  ": no candidate cluster; the previous level is not a regular cherry tree");
        std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.cluster < y.cluster; });

        std::vector<VarSet> needed;
        for (const auto& c : cands) {
            needed.push_back(c.cluster);
            if (!first) needed.push_back(c.cluster.without(c.j));
        }
        info.prefetch(needed);
        for (auto& c : cands)
            c.score = first ? info.info(c.cluster) : info.info(c.cluster) - info.info(c.cluster.without(c.j));

        std::size_t best = 0;
        for (std::size_t k = 1; k < cands.size(); ++k)
            if (cands[k].score > cands[best].score) best = k;

        const Candidate& q = cands[best];
        out.weight += q.score;
        out.clusters.push_back(q.cluster);
        for (int v : q.cluster) found[v] = 1;
        new_edges.emplace_back(q.i, q.j);
        if (record_audit) out.audit.push_back({cands, best});
    }
    for (auto [i, j] : new_edges) out.graph.add_edge(i, j);
    return out;
}

BuildResult build_cherry_sequence(int n, int t, InfoSource& info, bool record_audit) {
    if (n < 2) throw data_error("need at least 2 variables");
    if (t < 2 || t > n) throw usage_error("truncation level " + std::to_string(t) + " outside 2..n");

    BuildResult out;
    out.sequence.n = n;
    const auto mi = mutual_information_matrix(n, info);
    auto mst = max_spanning_tree(mi);
    CherryTree t2{2, {}};
    for (auto [a, b] : mst.edges) t2.clusters.push_back({a, b});
    out.sequence.trees.push_back(t2);
    out.sequence.weights.push_back(mst.weight);
    out.graphs.push_back(mst.graph);

    for (int L = 3; L <= t; ++L) {
        auto level = grow_level(out.graphs.back(), out.sequence.trees.back().clusters, L, info, record_audit);
        CherryTree tree{L, level.clusters};
        std::sort(tree.clusters.begin(), tree.clusters.end());
        out.sequence.trees.push_back(std::move(tree));
        out.sequence.weights.push_back(level.weight);
        out.graphs.push_back(std::move(level.graph));
        if (record_audit) out.audit.push_back(std::move(level.audit));
    }
    return out;
}

} // namespace truncvine
