#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <vector>

#include "gal/graph.hpp"

namespace gal {

struct GcnConfig {
    int hidden = 16;
    int epochs = 200;
    double learning_rate = 0.01;
    double dropout = 0.6;  // drop probability on each layer's input
    double weight_decay = 0.005;
    double validation_fraction = 0.10;
    AdjacencyMode adjacency_mode = AdjacencyMode::Symmetric;
    std::uint64_t seed = 0;
};

struct TrainedModel {
    GcnConfig cfg;
    int num_classes = 0;
    Eigen::MatrixXd w0;  // F x h
    Eigen::MatrixXd w1;  // h x C (symmetric) or 2h x C (directed-split)
    NormalizedAdjacency adj;
    Eigen::MatrixXd features;  // inputs the model was trained on
    std::vector<double> epoch_loss;
    std::vector<double> val_accuracy;  // empty when no validation split
    int best_epoch = -1;
};

/// Row i, column c = number of undirected neighbors of i labeled c.
Eigen::MatrixXd neighbor_label_features(const Graph& g,
                                        const std::map<int, int>& known_labels,
                                        int num_classes);

/// Two-layer GCN trained by full-batch Adam on the cross-entropy of the
/// training rows, with input dropout on both layers and L2 weight decay.
/// Keeps the best-validation-accuracy snapshot (earliest epoch on ties);
/// no validation split is carved when fewer than 10 nodes are labeled.
TrainedModel train(const Graph& g, const Eigen::MatrixXd& x0,
                   const std::map<int, int>& labels, int num_classes,
                   const GcnConfig& cfg);

/// N x C row-stochastic class probabilities (dropout disabled).
Eigen::MatrixXd predict_proba(const TrainedModel& m);

/// Pre-softmax logits per node; the R^C representation used by the
/// representative-distance strategies.
Eigen::MatrixXd representations(const TrainedModel& m);

// Deterministic forward/backward at given weights with no dropout, for
// direct inspection and finite-difference checks. Gradients include the
// weight-decay term.
Eigen::MatrixXd gcn_logits(const NormalizedAdjacency& adj,
                           const Eigen::MatrixXd& x0, const Eigen::MatrixXd& w0,
                           const Eigen::MatrixXd& w1);
double gcn_loss_and_gradients(const NormalizedAdjacency& adj,
                              const Eigen::MatrixXd& x0,
                              const std::map<int, int>& labels,
                              int num_classes, const Eigen::MatrixXd& w0,
                              const Eigen::MatrixXd& w1, double weight_decay,
                              Eigen::MatrixXd& grad_w0,
                              Eigen::MatrixXd& grad_w1);

}  // namespace gal
