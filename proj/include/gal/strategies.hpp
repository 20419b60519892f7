#pragma once

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

#include "gal/graph.hpp"
#include "gal/rank.hpp"

namespace gal {

// All scores follow one rule: higher score = queried first. Functions return
// length-N vectors; candidate filtering happens at selection time.

/// Shannon entropy per row, with 0*ln(0) = 0.
Eigen::VectorXd entropy_scores(const Eigen::MatrixXd& proba);

/// 1 - (p_first - p_second): smallest margin ranks highest. All-zero
/// sentinel rows (isolated-node regional output) score 0.
Eigen::VectorXd margin_scores(const Eigen::MatrixXd& proba);

/// Mean of neighbor probability rows (self excluded); isolated nodes get an
/// all-zero sentinel row so downstream uncertainty is 0.
Eigen::MatrixXd regional_average_proba(const Graph& g,
                                       const Eigen::MatrixXd& proba);

/// Mean of neighbor scores (self excluded); isolated nodes score 0.
Eigen::VectorXd regional_average_scores(const Graph& g,
                                        const Eigen::VectorXd& scores);

/// Min-max normalize each input over `candidates` (constant -> all zero),
/// then 0.7 * geo + 0.3 * centrality.
Eigen::VectorXd geo_centrality_scores(const Eigen::VectorXd& geo,
                                      const Eigen::VectorXd& centrality,
                                      const std::vector<int>& candidates);

/// Mahalanobis distance of each candidate row to the labeled rows' fit,
/// covariance regularized by eps*I with eps = 1e-6*trace(S)/d (floor 1e-9).
Eigen::VectorXd mahalanobis_scores(const Eigen::MatrixXd& reps,
                                   const std::vector<int>& labeled,
                                   const std::vector<int>& candidates);

/// Local outlier factor of each candidate against the labeled reference set.
Eigen::VectorXd lof_scores(const Eigen::MatrixXd& reps,
                           const std::vector<int>& labeled,
                           const std::vector<int>& candidates, int k);

/// Time-scheduled blend: (1 - t/T)*centrality + (t/2T)*(entropy + density),
/// each input min-max normalized over `candidates`.
Eigen::VectorXd chang_scores(const Eigen::VectorXd& centrality,
                             const Eigen::VectorXd& entropy,
                             const Eigen::VectorXd& density, int t, int budget,
                             const std::vector<int>& candidates);

/// Top-b candidates by score, ties broken by seeded uniform random,
/// returned in descending score order.
std::vector<int> select_batch(const Eigen::VectorXd& scores,
                              const std::vector<int>& candidates, int b,
                              std::mt19937_64& rng);

/// Canonical strategy names accepted by the experiment engine.
const std::vector<std::string>& strategy_registry();
bool is_known_strategy(const std::string& name);

/// Everything a strategy may consume at one AL iteration. Optional inputs
/// are null when the driving loop knows the strategy does not need them.
struct StrategyContext {
    const Graph* graph = nullptr;
    const Eigen::MatrixXd* proba = nullptr;  // model predictions, N x C
    const Eigen::MatrixXd* reps = nullptr;   // model logits, N x C
    const std::vector<int>* labeled = nullptr;
    const std::vector<int>* candidates = nullptr;
    const RankVector* pr = nullptr;          // cached once per run
    const Eigen::VectorXd* truss = nullptr;  // cached once per run
    double gamma = 0.85;
    double rank_tol = 1e-10;
    int rank_max_iters = 10000;
    int distance_cap = 9;
    int iteration = 0;     // queries made so far (for chang)
    int query_budget = 1;  // total planned queries (for chang)
    int lof_k = 20;
};

/// Dispatch a registry strategy name to its score vector.
Eigen::VectorXd compute_strategy_scores(const std::string& name,
                                        const StrategyContext& ctx);

}  // namespace gal
