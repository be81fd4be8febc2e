#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "truncvine/matrix.hpp"
#include "truncvine/var_set.hpp"

namespace truncvine {

/// Simple undirected graph on vertices 0..n-1.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n), static_cast<std::size_t>(n), 0) {}

    int n() const noexcept { return n_; }
    void add_edge(int a, int b);
    bool has_edge(int a, int b) const { return adj_(a, b) != 0; }
    VarSet neighbors(int v) const;
    std::vector<std::pair<int, int>> edges() const; // (a,b) with a<b, lexicographic
    std::size_t edge_count() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    int n_ = 0;
    Matrix<char> adj_;
};

/// Graph whose edges are all pairs inside some cluster.
Graph graph_of(int n, const std::vector<VarSet>& clusters);

struct Separator {
    VarSet indices;
    int multiplicity = 0;
    friend bool operator==(const Separator&, const Separator&) = default;
    friend auto operator<=>(const Separator&, const Separator&) = default;
};

/// (L-1)-subsets shared by at least two clusters, with the number of clusters containing them.
std::vector<Separator> separators_of(const std::vector<VarSet>& clusters);

struct CherryTree {
    int order = 0;
    std::vector<VarSet> clusters; // sorted

    std::vector<Separator> separators() const { return separators_of(clusters); }
};

/// Trees of orders 2..t; trees[i] has order i+2. weights[i] is the builder's greedy weight of trees[i].
struct CherrySequence {
    int n = 0;
    std::vector<CherryTree> trees;
    std::vector<double> weights;

    int top_order() const { return trees.empty() ? 0 : trees.back().order; }
    const CherryTree& tree(int order) const { return trees.at(static_cast<std::size_t>(order - 2)); }
};

/// Maximum cardinality search followed by a check; nullopt when the graph is not chordal.
/// The returned order eliminates vertices first to last.
std::optional<std::vector<int>> perfect_elimination_ordering(const Graph& g);

/// Violations of the order-L regular cherry tree invariants on n vertices (empty = valid).
std::vector<std::string> check_cherry_tree(int n, const CherryTree& tree);

/// check_cherry_tree on every level, plus the spanning-tree and nesting conditions.
std::vector<std::string> check_cherry_sequence(const CherrySequence& seq);

} // namespace truncvine
