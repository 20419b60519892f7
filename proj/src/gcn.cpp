#include "gal/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace gal {

namespace {

using Eigen::MatrixXd;

MatrixXd softmax_rows(const MatrixXd& logits) {
    MatrixXd p(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        Eigen::RowVectorXd row = logits.row(i);
        row.array() -= row.maxCoeff();
        Eigen::RowVectorXd ex = row.array().exp();
        p.row(i) = ex / ex.sum();
    }
    return p;
}

struct ForwardCache {
    MatrixXd a1s, a1k;  // propagated inputs, per channel
    MatrixXd z1, h;     // pre/post activation, N x h or N x 2h
    MatrixXd a2s, a2k;  // propagated hidden
    MatrixXd logits, proba;
};

// Dropout masks are 0/1 matrices; pass keep < 1 to scale (inverted dropout).
void forward(const NormalizedAdjacency& adj, const MatrixXd& x0,
             const MatrixXd& w0, const MatrixXd& w1, const MatrixXd* mask0,
             const MatrixXd* mask1, double keep, ForwardCache& c) {
    const bool split = adj.mode == AdjacencyMode::DirectedSplit;
    MatrixXd x = mask0 ? (x0.cwiseProduct(*mask0) / keep).eval() : x0;
    c.a1s = adj.sym * x;
    if (split) {
        c.a1k = adj.skew * x;
        c.z1.resize(x.rows(), 2 * w0.cols());
        c.z1.leftCols(w0.cols()) = c.a1s * w0;
        c.z1.rightCols(w0.cols()) = c.a1k * w0;
    } else {
        c.z1 = c.a1s * w0;
    }
    c.h = c.z1.cwiseMax(0.0);
    MatrixXd h = mask1 ? (c.h.cwiseProduct(*mask1) / keep).eval() : c.h;
    c.a2s = adj.sym * h;
    if (split) {
        // output halves share w1's row blocks and are summed before softmax
        c.a2k = adj.skew * h;
        c.logits = (c.a2s + c.a2k) * w1;
    } else {
        c.logits = c.a2s * w1;
    }
    c.proba = softmax_rows(c.logits);
}

struct TrainRow {
    int node;
    int cls;
};

double cross_entropy(const MatrixXd& proba, const std::vector<TrainRow>& rows) {
    double loss = 0.0;
    for (const auto& r : rows)
        loss -= std::log(std::max(proba(r.node, r.cls), 1e-300));
    return loss / static_cast<double>(rows.size());
}

// Gradients of cross_entropy + (wd/2)*(|w0|^2+|w1|^2) w.r.t. both weights.
void backward(const NormalizedAdjacency& adj, const ForwardCache& c,
              const MatrixXd& w0, const MatrixXd& w1,
              const std::vector<TrainRow>& rows, const MatrixXd* mask1,
              double keep, double weight_decay, MatrixXd& g0, MatrixXd& g1) {
    const bool split = adj.mode == AdjacencyMode::DirectedSplit;
    const double inv_m = 1.0 / static_cast<double>(rows.size());
    MatrixXd dlogits = MatrixXd::Zero(c.logits.rows(), c.logits.cols());
    for (const auto& r : rows) {
        dlogits.row(r.node) = c.proba.row(r.node) * inv_m;
        dlogits(r.node, r.cls) -= inv_m;
    }
    MatrixXd a2 = split ? (c.a2s + c.a2k).eval() : c.a2s;
    g1 = a2.transpose() * dlogits + weight_decay * w1;

    MatrixXd dh = adj.sym.transpose() * (dlogits * w1.transpose());
    if (split) dh += adj.skew.transpose() * (dlogits * w1.transpose());
    if (mask1) dh = dh.cwiseProduct(*mask1) / keep;
    MatrixXd dz1 = dh.cwiseProduct(
        (c.z1.array() > 0.0).cast<double>().matrix());
    if (split) {
        const Eigen::Index h = w0.cols();
        g0 = c.a1s.transpose() * dz1.leftCols(h) +
             c.a1k.transpose() * dz1.rightCols(h) + weight_decay * w0;
    } else {
        g0 = c.a1s.transpose() * dz1 + weight_decay * w0;
    }
}

std::vector<TrainRow> to_rows(const std::map<int, int>& labels, int n, int c) {
    std::vector<TrainRow> rows;
    rows.reserve(labels.size());
    for (const auto& [node, cls] : labels) {
        if (node < 0 || node >= n)
            throw std::out_of_range("label node index out of range");
        if (cls < 0 || cls >= c)
            throw std::out_of_range("label class out of range");
        rows.push_back({node, cls});
    }
    return rows;
}

MatrixXd glorot_init(Eigen::Index rows, Eigen::Index cols,
                     std::mt19937_64& rng) {
    const double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> unif(-s, s);
    MatrixXd w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = unif(rng);
    return w;
}

MatrixXd bernoulli_mask(Eigen::Index rows, Eigen::Index cols, double keep,
                        std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = unif(rng) < keep ? 1.0 : 0.0;
    return m;
}

struct Adam {
    MatrixXd m, v;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    int t = 0;

    explicit Adam(const MatrixXd& shape_like)
        : m(MatrixXd::Zero(shape_like.rows(), shape_like.cols())),
          v(MatrixXd::Zero(shape_like.rows(), shape_like.cols())) {}

    void step(MatrixXd& w, const MatrixXd& g, double lr) {
        ++t;
        m = beta1 * m + (1.0 - beta1) * g;
        v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
        const double c1 = 1.0 - std::pow(beta1, t);
        const double c2 = 1.0 - std::pow(beta2, t);
        w -= (lr / c1) * m.cwiseQuotient(
                 ((v / c2).cwiseSqrt().array() + eps).matrix());
    }
};

}  // namespace

Eigen::MatrixXd neighbor_label_features(const Graph& g,
                                        const std::map<int, int>& known_labels,
                                        int num_classes) {
    for (const auto& [node, cls] : known_labels) {
        if (node < 0 || node >= g.n)
            throw std::out_of_range("labeled node index out of range");
        if (cls < 0 || cls >= num_classes)
            throw std::out_of_range("label class out of range");
    }
    MatrixXd x = MatrixXd::Zero(g.n, num_classes);
    for (const auto& [node, cls] : known_labels) {
        for (int nbr : undirected_neighbors(g, node)) x(nbr, cls) += 1.0;
    }
    return x;
}

TrainedModel train(const Graph& g, const Eigen::MatrixXd& x0,
                   const std::map<int, int>& labels, int num_classes,
                   const GcnConfig& cfg) {
    if (labels.empty()) throw std::invalid_argument("train: empty label map");
    if (labels.size() < 2)
        throw std::invalid_argument("train: need at least 2 labeled nodes");
    if (x0.rows() != g.n)
        throw std::invalid_argument("train: feature row count mismatch");
    if (cfg.hidden < 1) throw std::invalid_argument("train: hidden must be >= 1");

    auto all_rows = to_rows(labels, g.n, num_classes);
    std::mt19937_64 rng(cfg.seed);

    // Internal validation carved from the labeled set.
    std::vector<TrainRow> train_rows = all_rows, val_rows;
    if (cfg.validation_fraction > 0.0 && all_rows.size() >= 10) {
        std::shuffle(train_rows.begin(), train_rows.end(), rng);
        std::size_t n_val = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::lround(cfg.validation_fraction *
                               static_cast<double>(train_rows.size()))));
        n_val = std::min(n_val, train_rows.size() - 1);
        val_rows.assign(train_rows.end() - n_val, train_rows.end());
        train_rows.resize(train_rows.size() - n_val);
    }

    TrainedModel model;
    model.cfg = cfg;
    model.num_classes = num_classes;
    model.adj = normalized_adjacency(g, cfg.adjacency_mode);
    model.features = x0;

    const bool split = cfg.adjacency_mode == AdjacencyMode::DirectedSplit;
    const Eigen::Index w1_rows = split ? 2 * cfg.hidden : cfg.hidden;
    MatrixXd w0 = glorot_init(x0.cols(), cfg.hidden, rng);
    MatrixXd w1 = glorot_init(w1_rows, num_classes, rng);
    Adam opt0(w0), opt1(w1);

    const double keep = 1.0 - cfg.dropout;
    const bool use_dropout = cfg.dropout > 0.0;

    double best_val = -1.0;
    MatrixXd best_w0 = w0, best_w1 = w1;
    ForwardCache c;
    MatrixXd g0, g1;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        MatrixXd mask0, mask1;
        if (use_dropout) {
            mask0 = bernoulli_mask(x0.rows(), x0.cols(), keep, rng);
            mask1 = bernoulli_mask(x0.rows(), split ? 2 * cfg.hidden : cfg.hidden,
                                   keep, rng);
        }
        forward(model.adj, x0, w0, w1, use_dropout ? &mask0 : nullptr,
                use_dropout ? &mask1 : nullptr, keep, c);
        double loss = cross_entropy(c.proba, train_rows) +
                      0.5 * cfg.weight_decay *
                          (w0.squaredNorm() + w1.squaredNorm());
        if (!std::isfinite(loss))
            throw std::runtime_error("train: non-finite loss at epoch " +
                                     std::to_string(epoch));
        model.epoch_loss.push_back(loss);
        backward(model.adj, c, w0, w1, train_rows,
                 use_dropout ? &mask1 : nullptr, keep, cfg.weight_decay, g0,
                 g1);
        opt0.step(w0, g0, cfg.learning_rate);
        opt1.step(w1, g1, cfg.learning_rate);

        if (!val_rows.empty()) {
            forward(model.adj, x0, w0, w1, nullptr, nullptr, 1.0, c);
            int correct = 0;
            for (const auto& r : val_rows) {
                Eigen::Index pred;
                c.proba.row(r.node).maxCoeff(&pred);
                correct += pred == r.cls;
            }
            double acc = static_cast<double>(correct) /
                         static_cast<double>(val_rows.size());
            model.val_accuracy.push_back(acc);
            if (acc > best_val) {  // ties keep the earliest epoch
                best_val = acc;
                best_w0 = w0;
                best_w1 = w1;
                model.best_epoch = epoch;
            }
        }
    }
    if (val_rows.empty()) {
        best_w0 = w0;
        best_w1 = w1;
        model.best_epoch = cfg.epochs - 1;
    }
    model.w0 = std::move(best_w0);
    model.w1 = std::move(best_w1);
    return model;
}

Eigen::MatrixXd predict_proba(const TrainedModel& m) {
    ForwardCache c;
    forward(m.adj, m.features, m.w0, m.w1, nullptr, nullptr, 1.0, c);
    return c.proba;
}

Eigen::MatrixXd representations(const TrainedModel& m) {
    ForwardCache c;
    forward(m.adj, m.features, m.w0, m.w1, nullptr, nullptr, 1.0, c);
    return c.logits;
}

Eigen::MatrixXd gcn_logits(const NormalizedAdjacency& adj,
                           const Eigen::MatrixXd& x0, const Eigen::MatrixXd& w0,
                           const Eigen::MatrixXd& w1) {
    ForwardCache c;
    forward(adj, x0, w0, w1, nullptr, nullptr, 1.0, c);
    return c.logits;
}

double gcn_loss_and_gradients(const NormalizedAdjacency& adj,
                              const Eigen::MatrixXd& x0,
                              const std::map<int, int>& labels,
                              int num_classes, const Eigen::MatrixXd& w0,
                              const Eigen::MatrixXd& w1, double weight_decay,
                              Eigen::MatrixXd& grad_w0,
                              Eigen::MatrixXd& grad_w1) {
    auto rows = to_rows(labels, static_cast<int>(x0.rows()), num_classes);
    if (rows.empty()) throw std::invalid_argument("empty label map");
    ForwardCache c;
    forward(adj, x0, w0, w1, nullptr, nullptr, 1.0, c);
    backward(adj, c, w0, w1, rows, nullptr, 1.0, weight_decay, grad_w0,
             grad_w1);
    return cross_entropy(c.proba, rows) +
           0.5 * weight_decay * (w0.squaredNorm() + w1.squaredNorm());
}

}  // namespace gal
