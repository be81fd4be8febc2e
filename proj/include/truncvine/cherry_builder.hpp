#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "truncvine/cherry.hpp"
#include "truncvine/info_source.hpp"
#include "truncvine/matrix.hpp"

namespace truncvine {

/// M(i,j) = I({i,j}); zero diagonal.
Matrix<double> mutual_information_matrix(int n, InfoSource& info);

struct SpanningTree {
    Graph graph;
    std::vector<std::pair<int, int>> edges; // lexicographic
    double weight = 0.0;
};

/// Kruskal on descending weight; equal weights are taken in lexicographic (i,j) order.
SpanningTree max_spanning_tree(const Matrix<double>& weights);

/// A(s,t) = Ne(s) ∩ Ne(t) \ {s,t} when it has exactly L-2 elements.
Matrix<std::optional<VarSet>> one_step_neighborhood(const Graph& g, int L);

struct Candidate {
    VarSet cluster;
    int i = -1, j = -1;
    double score = 0.0; // I(cluster) on the first step, I(cluster) - I(cluster \ {j}) afterwards
};

struct GreedyStep {
    std::vector<Candidate> candidates; // sorted by cluster
    std::size_t chosen = 0;
};

struct LevelResult {
    Graph graph;
    std::vector<VarSet> clusters; // in selection order
    double weight = 0.0;
    std::vector<GreedyStep> audit; // filled only when requested
};

/// One level of the t-neighborhood cherry construction: order L-1 tree to order L tree.
LevelResult grow_level(const Graph& prev_graph, const std::vector<VarSet>& prev_clusters, int L, InfoSource& info,
                       bool record_audit = false);

struct BuildResult {
    CherrySequence sequence;
    std::vector<Graph> graphs;            // G_2..G_t
    std::vector<std::vector<GreedyStep>> audit; // per level 3..t when requested
};

BuildResult build_cherry_sequence(int n, int t, InfoSource& info, bool record_audit = false);

} // namespace truncvine
