#pragma once

#include <Eigen/Sparse>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gal {

/// Immutable directed graph in CSR form (both directions), with a bijective
/// mapping between external string ids and dense node indices.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // deduplicated, no self-loops
    std::vector<std::string> index_to_id;
    std::unordered_map<std::string, int> id_to_index;

    std::vector<int> out_offsets, out_targets;
    std::vector<int> in_offsets, in_targets;

    std::size_t dropped_self_loops = 0;
    std::size_t dropped_duplicates = 0;

    /// Build from raw directed edges over indices 0..n-1. Self-loops are
    /// dropped and duplicates removed; external ids default to the decimal
    /// index unless `ids` is given.
    static Graph from_edges(int n, std::vector<std::pair<int, int>> edge_list,
                            std::vector<std::string> ids = {});

    std::span<const int> out_neighbors(int i) const {
        return {out_targets.data() + out_offsets[i],
                out_targets.data() + out_offsets[i + 1]};
    }
    std::span<const int> in_neighbors(int i) const {
        return {in_targets.data() + in_offsets[i],
                in_targets.data() + in_offsets[i + 1]};
    }
    int out_degree(int i) const { return out_offsets[i + 1] - out_offsets[i]; }
    int in_degree(int i) const { return in_offsets[i + 1] - in_offsets[i]; }
    int num_edges() const { return static_cast<int>(edges.size()); }
};

/// Parse a `src<TAB>dst` edge list. Lines starting with '#' are skipped.
/// With `any_whitespace`, any run of blanks separates the two fields.
Graph load_edge_list(std::istream& in, bool any_whitespace = false);

/// Union of in- and out-neighbors of i, excluding i. Sorted, unique.
std::vector<int> undirected_neighbors(const Graph& g, int i);

enum class AdjacencyMode { Symmetric, DirectedSplit };

/// Normalized propagation operator for the GCN.
///
/// Symmetric mode: sym = D~^{-1/2} (clip(A+A^T) + I) D~^{-1/2}, skew empty.
/// DirectedSplit: sym as above, skew = D~^{-1/2} (A - A^T) D~^{-1/2}
/// (exactly anti-symmetric, zero when A is symmetric).
struct NormalizedAdjacency {
    AdjacencyMode mode = AdjacencyMode::Symmetric;
    Eigen::SparseMatrix<double> sym;
    Eigen::SparseMatrix<double> skew;
};

NormalizedAdjacency normalized_adjacency(const Graph& g, AdjacencyMode mode);

/// Row-stochastic walk matrix D^{-1}A; dangling rows are uniform 1/N.
Eigen::SparseMatrix<double> random_walk_matrix(const Graph& g);

/// Multi-source BFS distances on the undirected view, clamped to `cap`.
/// Unreachable nodes get `cap`.
std::vector<int> bfs_distances(const Graph& g, const std::vector<int>& sources,
                               int cap);

/// Node trussness: max trussness over incident edges on the undirected view.
/// Isolated nodes score 0; edges without triangles give score 2.
std::vector<int> k_truss_scores(const Graph& g);

/// Stochastic block model sample; block index is the ground-truth label.
std::pair<Graph, std::vector<int>> sbm_generate(
    const std::vector<int>& block_sizes, double within_prob,
    double between_prob, bool directed, std::uint64_t seed);

}  // namespace gal
