#include "gal/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gal {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd minmax_over(const VectorXd& v, const std::vector<int>& candidates) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i : candidates) {
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
    }
    VectorXd out = VectorXd::Zero(v.size());
    if (hi > lo)
        for (int i : candidates) out[i] = (v[i] - lo) / (hi - lo);
    return out;  // constant input maps to all-0
}

}  // namespace

VectorXd entropy_scores(const MatrixXd& proba) {
    VectorXd s = VectorXd::Zero(proba.rows());
    for (Eigen::Index i = 0; i < proba.rows(); ++i) {
        double h = 0.0;
        for (Eigen::Index c = 0; c < proba.cols(); ++c) {
            double p = proba(i, c);
            if (p < 0.0)
                throw std::invalid_argument("entropy: negative probability");
            if (p > 0.0) h -= p * std::log(p);
        }
        s[i] = h;
    }
    return s;
}

VectorXd margin_scores(const MatrixXd& proba) {
    if (proba.cols() < 2)
        throw std::invalid_argument("margin: need at least 2 classes");
    VectorXd s = VectorXd::Zero(proba.rows());
    for (Eigen::Index i = 0; i < proba.rows(); ++i) {
        double first = -1.0, second = -1.0;
        bool all_zero = true;
        for (Eigen::Index c = 0; c < proba.cols(); ++c) {
            double p = proba(i, c);
            if (p != 0.0) all_zero = false;
            if (p > first) {
                second = first;
                first = p;
            } else if (p > second) {
                second = p;
            }
        }
        s[i] = all_zero ? 0.0 : 1.0 - (first - second);
    }
    return s;
}

MatrixXd regional_average_proba(const Graph& g, const MatrixXd& proba) {
    MatrixXd out = MatrixXd::Zero(proba.rows(), proba.cols());
    for (int i = 0; i < g.n; ++i) {
        auto nbrs = undirected_neighbors(g, i);
        if (nbrs.empty()) continue;  // all-zero sentinel row
        for (int j : nbrs) out.row(i) += proba.row(j);
        out.row(i) /= static_cast<double>(nbrs.size());
    }
    return out;
}

VectorXd regional_average_scores(const Graph& g, const VectorXd& scores) {
    if (scores.size() != g.n)
        throw std::invalid_argument("regional average: score length mismatch");
    VectorXd out = VectorXd::Zero(g.n);
    for (int i = 0; i < g.n; ++i) {
        auto nbrs = undirected_neighbors(g, i);
        if (nbrs.empty()) continue;
        double acc = 0.0;
        for (int j : nbrs) acc += scores[j];
        out[i] = acc / static_cast<double>(nbrs.size());
    }
    return out;
}

VectorXd geo_centrality_scores(const VectorXd& geo, const VectorXd& centrality,
                               const std::vector<int>& candidates) {
    if (geo.size() != centrality.size())
        throw std::invalid_argument("geo centrality: length mismatch");
    return 0.7 * minmax_over(geo, candidates) +
           0.3 * minmax_over(centrality, candidates);
}

VectorXd mahalanobis_scores(const MatrixXd& reps,
                            const std::vector<int>& labeled,
                            const std::vector<int>& candidates) {
    if (labeled.size() < 2)
        throw std::invalid_argument("mahalanobis: need >= 2 labeled nodes");
    const Eigen::Index d = reps.cols();
    Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(d);
    for (int i : labeled) mu += reps.row(i);
    mu /= static_cast<double>(labeled.size());

    MatrixXd cov = MatrixXd::Zero(d, d);
    for (int i : labeled) {
        Eigen::RowVectorXd c = reps.row(i) - mu;
        cov += c.transpose() * c;
    }
    cov /= static_cast<double>(labeled.size());
    const double eps = std::max(1e-6 * cov.trace() / static_cast<double>(d),
                                1e-9);
    cov += eps * MatrixXd::Identity(d, d);
    Eigen::LDLT<MatrixXd> solver(cov);

    VectorXd out = VectorXd::Zero(reps.rows());
    for (int i : candidates) {
        Eigen::VectorXd c = (reps.row(i) - mu).transpose();
        out[i] = std::sqrt(c.dot(solver.solve(c)));
    }
    return out;
}

VectorXd lof_scores(const MatrixXd& reps, const std::vector<int>& labeled,
                    const std::vector<int>& candidates, int k) {
    const int m = static_cast<int>(labeled.size());
    if (k < 1 || m <= k)
        throw std::invalid_argument("lof: need |labeled| > k >= 1");

    auto dist = [&](int a, int b) { return (reps.row(a) - reps.row(b)).norm(); };
    // k nearest labeled points of an arbitrary row, excluding `self` when it
    // indexes into `labeled`
    auto knn = [&](int row, int self) {
        std::vector<std::pair<double, int>> ds;
        ds.reserve(m);
        for (int j = 0; j < m; ++j) {
            if (j == self) continue;
            ds.emplace_back(dist(row, labeled[j]), j);
        }
        std::partial_sort(ds.begin(), ds.begin() + k, ds.end());
        ds.resize(k);
        return ds;
    };

    std::vector<double> kdist(m);
    std::vector<std::vector<std::pair<double, int>>> ref_nbrs(m);
    for (int j = 0; j < m; ++j) {
        ref_nbrs[j] = knn(labeled[j], j);
        kdist[j] = ref_nbrs[j].back().first;
    }
    auto lrd = [&](const std::vector<std::pair<double, int>>& nbrs) {
        double reach = 0.0;
        for (const auto& [d, o] : nbrs) reach += std::max(d, kdist[o]);
        return static_cast<double>(nbrs.size()) / (reach + 1e-10);
    };
    std::vector<double> ref_lrd(m);
    for (int j = 0; j < m; ++j) ref_lrd[j] = lrd(ref_nbrs[j]);

    VectorXd out = VectorXd::Zero(reps.rows());
    for (int i : candidates) {
        auto nbrs = knn(i, -1);
        double lrd_i = lrd(nbrs);
        double acc = 0.0;
        for (const auto& [d, o] : nbrs) acc += ref_lrd[o];
        out[i] = acc / (static_cast<double>(nbrs.size()) * lrd_i + 1e-30);
    }
    return out;
}

VectorXd chang_scores(const VectorXd& centrality, const VectorXd& entropy,
                      const VectorXd& density, int t, int budget,
                      const std::vector<int>& candidates) {
    if (budget <= 0) throw std::invalid_argument("chang: budget must be > 0");
    if (t < 0 || t > budget)
        throw std::invalid_argument("chang: t must lie in [0, budget]");
    const double frac = static_cast<double>(t) / static_cast<double>(budget);
    const double alpha = 1.0 - frac;
    const double beta = frac / 2.0;  // entropy and density share the rest
    return alpha * minmax_over(centrality, candidates) +
           beta * minmax_over(entropy, candidates) +
           beta * minmax_over(density, candidates);
}

std::vector<int> select_batch(const VectorXd& scores,
                              const std::vector<int>& candidates, int b,
                              std::mt19937_64& rng) {
    if (b < 1) throw std::invalid_argument("select_batch: b must be >= 1");
    if (static_cast<int>(candidates.size()) < b)
        throw std::invalid_argument("select_batch: fewer candidates than b");
    std::vector<std::tuple<double, std::uint64_t, int>> keyed;
    keyed.reserve(candidates.size());
    for (int i : candidates) {
        if (!std::isfinite(scores[i]))
            throw std::invalid_argument("select_batch: non-finite score");
        keyed.emplace_back(-scores[i], rng(), i);
    }
    std::partial_sort(keyed.begin(), keyed.begin() + b, keyed.end());
    std::vector<int> out;
    out.reserve(b);
    for (int j = 0; j < b; ++j) out.push_back(std::get<2>(keyed[j]));
    return out;
}

const std::vector<std::string>& strategy_registry() {
    static const std::vector<std::string> names = {
        "random",        "entropy",       "margin",
        "centrality_pr", "geo_dist",      "geo_centrality",
        "rep_mah",       "rep_lof",       "k_truss",
        "chang",         "apr_ratio",     "region_entropy",
        "region_margin", "region_entropy_ae", "region_margin_ae"};
    return names;
}

bool is_known_strategy(const std::string& name) {
    const auto& reg = strategy_registry();
    return std::find(reg.begin(), reg.end(), name) != reg.end();
}

namespace {

// Representative-distance inputs degenerate early in a run; fall back to a
// constant score (uniform random pick) instead of failing the whole run.
VectorXd mah_or_zero(const StrategyContext& ctx) {
    if (ctx.labeled->size() < 2)
        return VectorXd::Zero(ctx.reps->rows());
    return mahalanobis_scores(*ctx.reps, *ctx.labeled, *ctx.candidates);
}

VectorXd geo_vector(const StrategyContext& ctx) {
    auto d = bfs_distances(*ctx.graph, *ctx.labeled, ctx.distance_cap);
    VectorXd v(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) v[i] = d[i];
    return v;
}

}  // namespace

VectorXd compute_strategy_scores(const std::string& name,
                                 const StrategyContext& ctx) {
    if (name == "random") return VectorXd::Zero(ctx.graph->n);
    if (name == "entropy") return entropy_scores(*ctx.proba);
    if (name == "margin") return margin_scores(*ctx.proba);
    if (name == "centrality_pr") return ctx.pr->values;
    if (name == "geo_dist") return geo_vector(ctx);
    if (name == "geo_centrality")
        return geo_centrality_scores(geo_vector(ctx), ctx.pr->values,
                                     *ctx.candidates);
    if (name == "rep_mah") return mah_or_zero(ctx);
    if (name == "rep_lof") {
        int k = std::min(ctx.lof_k,
                         static_cast<int>(ctx.labeled->size()) - 1);
        if (k < 1) return VectorXd::Zero(ctx.reps->rows());
        return lof_scores(*ctx.reps, *ctx.labeled, *ctx.candidates, k);
    }
    if (name == "k_truss") return *ctx.truss;
    if (name == "chang")
        return chang_scores(ctx.pr->values, entropy_scores(*ctx.proba),
                            mah_or_zero(ctx), ctx.iteration, ctx.query_budget,
                            *ctx.candidates);
    if (name == "apr_ratio") {
        RankVector apr =
            adaptive_pagerank(*ctx.graph, *ctx.labeled, *ctx.pr, ctx.gamma,
                              ctx.rank_tol, ctx.rank_max_iters);
        return apr_query_scores(*ctx.pr, apr, *ctx.candidates);
    }
    if (name == "region_entropy")
        return entropy_scores(regional_average_proba(*ctx.graph, *ctx.proba));
    if (name == "region_margin")
        return margin_scores(regional_average_proba(*ctx.graph, *ctx.proba));
    if (name == "region_entropy_ae")
        return regional_average_scores(*ctx.graph, entropy_scores(*ctx.proba));
    if (name == "region_margin_ae")
        return regional_average_scores(*ctx.graph, margin_scores(*ctx.proba));
    throw std::invalid_argument("unknown strategy: " + name);
}

}  // namespace gal
