#include "truncvine/cherry.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace truncvine {

void Graph::add_edge(int a, int b) {
    if (a == b) return;
    adj_(a, b) = adj_(b, a) = 1;
}

VarSet Graph::neighbors(int v) const {
    std::vector<int> out;
    for (int u = 0; u < n_; ++u)
        if (adj_(v, u)) out.push_back(u);
    return VarSet(std::move(out));
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b)
            if (adj_(a, b)) out.emplace_back(a, b);
    return out;
}

std::size_t Graph::edge_count() const { return edges().size(); }

Graph graph_of(int n, const std::vector<VarSet>& clusters) {
    Graph g(n);
    for (const auto& k : clusters)
        for (std::size_t i = 0; i < k.size(); ++i)
            for (std::size_t j = i + 1; j < k.size(); ++j) g.add_edge(k[i], k[j]);
    return g;
}

std::vector<Separator> separators_of(const std::vector<VarSet>& clusters) {
    std::map<VarSet, int> count;
    for (const auto& k : clusters) {
        for (int v : k) ++count[k.without(v)];
    }
    std::vector<Separator> out;
    for (const auto& [s, c] : count)
        if (c >= 2) out.push_back({s, c});
    return out;
}

std::optional<std::vector<int>> perfect_elimination_ordering(const Graph& g) {
    const int n = g.n();
    std::vector<int> weight(static_cast<std::size_t>(n), 0);
    std::vector<char> numbered(static_cast<std::size_t>(n), 0);
    std::vector<int> visit; // MCS visit order; its reverse is a PEO for chordal graphs
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (!numbered[v] && (best < 0 || weight[v] > weight[best])) best = v;
        numbered[best] = 1;
        visit.push_back(best);
        for (int u = 0; u < n; ++u)
            if (!numbered[u] && g.has_edge(best, u)) ++weight[u];
    }
    std::vector<int> peo(visit.rbegin(), visit.rend());
    std::vector<int> pos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pos[peo[i]] = i;
    for (int i = 0; i < n; ++i) {
        std::vector<int> later;
        for (int u = 0; u < n; ++u)
            if (g.has_edge(peo[i], u) && pos[u] > i) later.push_back(u);
        for (std::size_t a = 0; a < later.size(); ++a)
            for (std::size_t b = a + 1; b < later.size(); ++b)
                if (!g.has_edge(later[a], later[b])) return std::nullopt;
    }
    return peo;
}

std::vector<std::string> check_cherry_tree(int n, const CherryTree& tree) {
    std::vector<std::string> errs;
    const int L = tree.order;
    const auto& ks = tree.clusters;
    const std::string tag = "order " + std::to_string(L) + ": ";

    if (L < 2 || L > n) {
        errs.push_back(tag + "order outside 2..n");
        return errs;
    }
    if (static_cast<int>(ks.size()) != n - L + 1)
        errs.push_back(tag + "expected " + std::to_string(n - L + 1) + " clusters, got " + std::to_string(ks.size()));
    for (const auto& k : ks) {
        if (static_cast<int>(k.size()) != L) errs.push_back(tag + "cluster " + k.to_string() + " has wrong size");
        for (int v : k)
            if (v < 0 || v >= n) errs.push_back(tag + "cluster " + k.to_string() + " has a vertex out of range");
    }
    auto sorted = ks;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) errs.push_back(tag + "duplicate cluster");
    if (!errs.empty()) return errs;

    VarSet all;
    for (const auto& k : ks) all = set_union(all, k);
    if (static_cast<int>(all.size()) != n) errs.push_back(tag + "clusters do not cover every vertex");

    // junction tree: maximum spanning tree on intersection sizes (Prim)
    const std::size_t c = ks.size();
    std::size_t jt_weight = 0;
    bool connected = true;
    {
        std::vector<char> in(c, 0);
        std::vector<long> best(c, -1);
        best[0] = 0;
        for (std::size_t step = 0; step < c; ++step) {
            std::size_t pick = c;
            for (std::size_t i = 0; i < c; ++i)
                if (!in[i] && best[i] >= 0 && (pick == c || best[i] > best[pick])) pick = i;
            if (pick == c) {
                connected = false;
                break;
            }
            in[pick] = 1;
            jt_weight += static_cast<std::size_t>(best[pick]);
            for (std::size_t i = 0; i < c; ++i) {
                if (in[i]) continue;
                const long w = static_cast<long>(set_intersection(ks[pick], ks[i]).size());
                if (w > 0 && w > best[i]) best[i] = w;
            }
        }
    }
    const std::size_t total = static_cast<std::size_t>(L) * c;
    if (!connected) errs.push_back(tag + "cluster graph is disconnected");
    else if (jt_weight != total - all.size()) errs.push_back(tag + "running intersection property fails");

    const auto seps = separators_of(ks);
    int excess = 0;
    for (const auto& s : seps) excess += s.multiplicity - 1;
    if (excess != n - L)
        errs.push_back(tag + "separator multiplicities sum to " + std::to_string(excess) + ", expected " +
                       std::to_string(n - L));
    for (const auto& k : ks) {
        int linked = 0;
        for (const auto& s : seps)
            if (s.indices.is_subset_of(k)) ++linked;
        if (linked > 2) errs.push_back(tag + "cluster " + k.to_string() + " has more than two separators (not regular)");
    }

    const Graph g = graph_of(n, ks);
    auto peo = perfect_elimination_ordering(g);
    if (!peo) {
        errs.push_back(tag + "cluster graph is not chordal");
    } else {
        std::vector<int> pos(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pos[(*peo)[i]] = i;
        int max_clique = 1;
        for (int v = 0; v < n; ++v) {
            int later = 0;
            for (int u = 0; u < n; ++u)
                if (g.has_edge(v, u) && pos[u] > pos[v]) ++later;
            max_clique = std::max(max_clique, later + 1);
        }
        if (max_clique != L) errs.push_back(tag + "maximum clique has size " + std::to_string(max_clique));
    }
    return errs;
}

std::vector<std::string> check_cherry_sequence(const CherrySequence& seq) {
    std::vector<std::string> errs;
    const int n = seq.n;
    if (seq.trees.empty()) return {"empty cherry sequence"};
    for (std::size_t i = 0; i < seq.trees.size(); ++i) {
        if (seq.trees[i].order != static_cast<int>(i) + 2) {
            errs.push_back("tree " + std::to_string(i) + " has order " + std::to_string(seq.trees[i].order));
            return errs;
        }
    }
    const auto& t2 = seq.trees.front();
    if (static_cast<int>(t2.clusters.size()) != n - 1 || graph_of(n, t2.clusters).edge_count() != t2.clusters.size())
        errs.push_back("order 2: not a spanning tree");
    for (const auto& tree : seq.trees) {
        auto e = check_cherry_tree(n, tree);
        errs.insert(errs.end(), e.begin(), e.end());
    }
    for (std::size_t i = 1; i < seq.trees.size(); ++i) {
        const auto& prev = seq.trees[i - 1].clusters;
        const int L = seq.trees[i].order;
        for (const auto& k : seq.trees[i].clusters) {
            bool nested = false;
            for (std::size_t a = 0; a < prev.size() && !nested; ++a)
                for (std::size_t b = a + 1; b < prev.size() && !nested; ++b)
                    nested = static_cast<int>(set_intersection(prev[a], prev[b]).size()) == L - 2 &&
                             set_union(prev[a], prev[b]) == k;
            if (!nested)
                errs.push_back("order " + std::to_string(L) + ": cluster " + k.to_string() +
                               " is not the union of two linked lower-order clusters");
        }
    }
    return errs;
}

} // namespace truncvine
