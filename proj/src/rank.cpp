#include "gal/rank.hpp"

#include <stdexcept>
#include <string>

namespace gal {

namespace {

void check_params(double gamma, double tol) {
    if (gamma <= 0.0 || gamma >= 1.0)
        throw std::invalid_argument("gamma must lie in (0,1)");
    if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
}

}  // namespace

RankVector pagerank(const Graph& g, double gamma, double tol, int max_iters) {
    check_params(gamma, tol);
    const int n = g.n;
    const Eigen::SparseMatrix<double> walk = random_walk_matrix(g);
    Eigen::VectorXd pr = Eigen::VectorXd::Constant(n, 1.0 / n);
    const double teleport = (1.0 - gamma) / n;
    double residual = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd next =
            gamma * (walk.transpose() * pr).eval() +
            Eigen::VectorXd::Constant(n, teleport);
        residual = (next - pr).cwiseAbs().maxCoeff();
        pr = std::move(next);
        if (residual < tol) return {pr, gamma, RankKind::PageRank};
    }
    throw std::runtime_error("pagerank did not converge; last residual " +
                             std::to_string(residual));
}

RankVector adaptive_pagerank(const Graph& g, const std::vector<int>& labeled,
                             const RankVector& pr, double gamma, double tol,
                             int max_iters) {
    check_params(gamma, tol);
    const int n = g.n;
    std::vector<bool> is_labeled(n, false);
    for (int i : labeled) {
        if (i < 0 || i >= n)
            throw std::out_of_range("labeled index out of range");
        is_labeled[i] = true;
    }
    const Eigen::SparseMatrix<double> walk = random_walk_matrix(g);
    const double teleport = (1.0 - gamma) / n;

    // Start from PR on labeled entries (pinned) and 0 elsewhere.
    Eigen::VectorXd apr = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        if (is_labeled[i]) apr[i] = pr.values[i];

    double residual = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd next =
            gamma * (walk.transpose() * apr).eval() +
            Eigen::VectorXd::Constant(n, teleport);
        residual = 0.0;
        for (int i = 0; i < n; ++i) {
            if (is_labeled[i]) {
                next[i] = pr.values[i];
            } else {
                residual = std::max(residual, std::abs(next[i] - apr[i]));
            }
        }
        apr = std::move(next);
        if (residual < tol) return {apr, gamma, RankKind::AdaptivePageRank};
    }
    throw std::runtime_error(
        "adaptive_pagerank did not converge; last residual " +
        std::to_string(residual));
}

Eigen::VectorXd apr_query_scores(const RankVector& pr, const RankVector& apr,
                                 const std::vector<int>& candidates) {
    if (pr.values.size() != apr.values.size())
        throw std::invalid_argument("pr/apr length mismatch");
    Eigen::VectorXd scores = Eigen::VectorXd::Zero(pr.values.size());
    for (int i : candidates) {
        if (i < 0 || i >= pr.values.size())
            throw std::out_of_range("candidate index out of range");
        scores[i] = pr.values[i] / apr.values[i];
    }
    return scores;
}

}  // namespace gal
