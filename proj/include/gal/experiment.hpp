#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gal/data_io.hpp"
#include "gal/gcn.hpp"
#include "gal/metrics.hpp"

namespace gal {

enum class Protocol { FractionBudget, FixedSplit };
enum class FeatureKind { NeighborLabels, BagOfWords };

struct ProtocolConfig {
    Protocol protocol = Protocol::FractionBudget;
    std::string strategy = "random";
    int batch_size = 1;
    // exactly one stop rule: a labeled-fraction target or a query budget
    std::optional<double> label_fraction;  // default 0.15 when neither set
    std::optional<int> query_budget;       // fixed-split default: 200 queries
    FeatureKind feature_kind = FeatureKind::NeighborLabels;
    int repetitions = 20;
    GcnConfig gcn;
    double gamma = 0.85;
    int distance_cap = 9;
    int lof_k = 20;
    int test_size = 1000;        // fixed-split reserved test nodes
    int validation_size = 500;   // fixed-split reserved pool-limiting set
};

struct CurveRecord {
    int run_id = 0;
    std::string dataset, strategy, protocol;
    int iteration = 0;
    int labeled = 0;
    EvalReport eval;
};

/// One uniformly random pool node per class. Throws naming the class when a
/// class has no pool representative.
std::vector<int> initial_seed(const std::vector<int>& labels, int num_classes,
                              const std::vector<int>& pool,
                              const std::vector<std::string>& class_names,
                              std::mt19937_64& rng);

/// One full AL run: train, evaluate, score, query, repeat. Deterministic
/// given (cfg, run_seed).
std::vector<CurveRecord> run_active_learning(const DatasetBundle& bundle,
                                             const ProtocolConfig& cfg,
                                             std::uint64_t run_seed,
                                             int run_id = 0);

struct SummaryRow {
    std::string dataset, strategy;
    int iteration = 0;
    int labeled = 0;
    int reps = 0;
    double mean_acc = 0, se_acc = 0;
    double mean_micro = 0, se_micro = 0;
    double mean_macro = 0, se_macro = 0;
    double mean_loss = 0, se_loss = 0;
    // final-point delta vs the random strategy, when random is in the sweep
    std::optional<double> delta_vs_random;
};

struct SweepResult {
    std::vector<CurveRecord> records;
    std::vector<SummaryRow> summary;
    std::vector<std::string> errors;  // per-run failures; the sweep continues
};

/// All (config, seed) repetitions, executed on a bounded worker pool.
/// Results are keyed by run id, independent of completion order.
SweepResult run_sweep(const DatasetBundle& bundle,
                      const std::vector<ProtocolConfig>& cfgs,
                      const std::vector<std::uint64_t>& seeds, int workers = 1);

struct DistancePoint {
    double fraction = 0;
    double mean_distance = 0;
    double se = 0;
};

/// For each fraction: sample ceil(f*n) nodes uniformly, average the capped
/// BFS distance of unsampled nodes to the sample, repeat and aggregate.
std::vector<DistancePoint> distance_to_sampled_curve(
    const Graph& g, const std::vector<double>& fractions, int repetitions,
    int cap, std::mt19937_64& rng);

void write_curves_csv(std::ostream& out, const std::vector<CurveRecord>& recs);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_distance_csv(std::ostream& out,
                        const std::vector<DistancePoint>& pts);

}  // namespace gal
