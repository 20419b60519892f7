#pragma once

#include <Eigen/Dense>

#include "gal/graph.hpp"

namespace gal {

enum class RankKind { PageRank, AdaptivePageRank };

/// Nonnegative per-node score vector from the damped walk process.
struct RankVector {
    Eigen::VectorXd values;
    double gamma = 0.85;
    RankKind kind = RankKind::PageRank;
};

/// Power-iteration PageRank: fixed point of pr = gamma * A~^T pr + (1-gamma)/N.
/// Converges when the max absolute change drops below tol; throws on
/// non-convergence with the last residual in the message.
RankVector pagerank(const Graph& g, double gamma = 0.85, double tol = 1e-10,
                    int max_iters = 10000);

/// Adaptive PageRank: labeled entries are pinned to their PageRank values,
/// unlabeled entries solve apr(U) = gamma * (A~^T apr)(U) + (1-gamma)/N.
RankVector adaptive_pagerank(const Graph& g, const std::vector<int>& labeled,
                             const RankVector& pr, double gamma = 0.85,
                             double tol = 1e-10, int max_iters = 10000);

/// Query score pr(i)/apr(i) for each candidate: high for nodes that are
/// central yet uninfluenced by the labeled set. Length-N vector; entries
/// outside `candidates` are 0.
Eigen::VectorXd apr_query_scores(const RankVector& pr, const RankVector& apr,
                                 const std::vector<int>& candidates);

}  // namespace gal
