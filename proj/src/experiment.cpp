#include "gal/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "gal/strategies.hpp"

namespace gal {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

const char* protocol_name(Protocol p) {
    return p == Protocol::FractionBudget ? "fraction-budget" : "fixed-split";
}

bool strategy_needs_pagerank(const std::string& s) {
    return s == "centrality_pr" || s == "geo_centrality" || s == "chang" ||
           s == "apr_ratio";
}

struct Stat {
    double mean = 0, se = 0;
};

Stat mean_se(const std::vector<double>& xs) {
    Stat s;
    const double n = static_cast<double>(xs.size());
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return s;
}

}  // namespace

std::vector<int> initial_seed(const std::vector<int>& labels, int num_classes,
                              const std::vector<int>& pool,
                              const std::vector<std::string>& class_names,
                              std::mt19937_64& rng) {
    std::vector<std::vector<int>> per_class(num_classes);
    for (int i : pool) per_class[labels[i]].push_back(i);
    std::vector<int> seeds;
    seeds.reserve(num_classes);
    for (int c = 0; c < num_classes; ++c) {
        if (per_class[c].empty()) {
            std::string name = c < static_cast<int>(class_names.size())
                                   ? class_names[c]
                                   : std::to_string(c);
            throw std::runtime_error("initial_seed: class '" + name +
                                     "' has no pool node");
        }
        std::uniform_int_distribution<std::size_t> pick(
            0, per_class[c].size() - 1);
        seeds.push_back(per_class[c][pick(rng)]);
    }
    return seeds;
}

std::vector<CurveRecord> run_active_learning(const DatasetBundle& bundle,
                                             const ProtocolConfig& cfg,
                                             std::uint64_t run_seed,
                                             int run_id) {
    if (!is_known_strategy(cfg.strategy))
        throw std::invalid_argument("unknown strategy: " + cfg.strategy);
    if (cfg.batch_size < 1)
        throw std::invalid_argument("batch size must be >= 1");
    if (cfg.label_fraction && cfg.query_budget)
        throw std::invalid_argument("exactly one stop rule may be set");
    const Graph& g = bundle.graph;
    const int n = g.n;
    const int num_classes = bundle.num_classes();
    std::mt19937_64 rng(run_seed);

    std::vector<int> test_set, validation_set, pool;
    if (cfg.protocol == Protocol::FixedSplit) {
        if (n < cfg.test_size + cfg.validation_size + num_classes)
            throw std::runtime_error("graph too small for the fixed split");
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        test_set.assign(order.begin(), order.begin() + cfg.test_size);
        validation_set.assign(order.begin() + cfg.test_size,
                              order.begin() + cfg.test_size +
                                  cfg.validation_size);
        pool.assign(order.begin() + cfg.test_size + cfg.validation_size,
                    order.end());
        std::sort(pool.begin(), pool.end());
        std::sort(test_set.begin(), test_set.end());
    } else {
        pool.resize(n);
        std::iota(pool.begin(), pool.end(), 0);
    }

    std::vector<int> labeled = initial_seed(bundle.labels, num_classes, pool,
                                            bundle.class_names, rng);
    {
        std::vector<bool> taken(n, false);
        for (int s : labeled) taken[s] = true;
        std::erase_if(pool, [&](int i) { return taken[i]; });
    }
    const std::size_t seed_count = labeled.size();

    int query_budget;
    if (cfg.query_budget) {
        query_budget = *cfg.query_budget;
    } else {
        const double frac = cfg.label_fraction.value_or(0.15);
        const int target = static_cast<int>(std::ceil(frac * n));
        query_budget = std::max(0, target - static_cast<int>(seed_count));
    }

    if (cfg.feature_kind == FeatureKind::BagOfWords && !bundle.features)
        throw std::runtime_error("bag-of-words features requested but the "
                                 "dataset has none");

    std::optional<RankVector> pr;
    if (strategy_needs_pagerank(cfg.strategy))
        pr = pagerank(g, cfg.gamma);
    std::optional<Eigen::VectorXd> truss;
    if (cfg.strategy == "k_truss") {
        auto t = k_truss_scores(g);
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = t[i];
        truss = std::move(v);
    }

    std::vector<CurveRecord> records;
    int iteration = 0;
    while (true) {
        {
            const int queried = static_cast<int>(labeled.size() - seed_count);
            if (queried < query_budget &&
                static_cast<int>(pool.size()) <
                    std::min(cfg.batch_size, query_budget - queried))
                throw std::runtime_error("pool exhausted before the stop rule");
        }
        // labeled / pool / test / validation stay pairwise disjoint
        std::map<int, int> labeled_map;
        for (int i : labeled) labeled_map[i] = bundle.labels[i];
        if (labeled_map.size() != labeled.size())
            throw std::logic_error("labeled set contains a repeat");

        Eigen::MatrixXd x0 =
            cfg.feature_kind == FeatureKind::BagOfWords
                ? *bundle.features
                : neighbor_label_features(g, labeled_map, num_classes);
        GcnConfig gcn_cfg = cfg.gcn;
        gcn_cfg.seed = splitmix64(run_seed ^ static_cast<std::uint64_t>(
                                                 iteration) * 0x51ed2701ULL);
        TrainedModel model = train(g, x0, labeled_map, num_classes, gcn_cfg);
        Eigen::MatrixXd proba = predict_proba(model);

        std::vector<int> eval_set;
        if (cfg.protocol == Protocol::FixedSplit) {
            eval_set = test_set;
        } else {
            eval_set = pool;  // all currently unlabeled nodes
        }
        CurveRecord rec;
        rec.run_id = run_id;
        rec.dataset = bundle.name;
        rec.strategy = cfg.strategy;
        rec.protocol = protocol_name(cfg.protocol);
        rec.iteration = iteration;
        rec.labeled = static_cast<int>(labeled.size());
        rec.eval = evaluate(proba, bundle.labels, eval_set);
        records.push_back(std::move(rec));

        const int queried = static_cast<int>(labeled.size() - seed_count);
        if (queried >= query_budget) break;
        const int batch =
            std::min(cfg.batch_size, query_budget - queried);
        if (static_cast<int>(pool.size()) < batch)
            throw std::runtime_error("pool exhausted before the stop rule");

        Eigen::MatrixXd reps = representations(model);
        StrategyContext ctx;
        ctx.graph = &g;
        ctx.proba = &proba;
        ctx.reps = &reps;
        ctx.labeled = &labeled;
        ctx.candidates = &pool;
        ctx.pr = pr ? &*pr : nullptr;
        ctx.truss = truss ? &*truss : nullptr;
        ctx.gamma = cfg.gamma;
        ctx.distance_cap = cfg.distance_cap;
        ctx.iteration = queried;
        ctx.query_budget = query_budget;
        ctx.lof_k = cfg.lof_k;
        Eigen::VectorXd scores = compute_strategy_scores(cfg.strategy, ctx);

        std::vector<int> batch_nodes = select_batch(scores, pool, batch, rng);
        std::vector<bool> picked(n, false);
        for (int b : batch_nodes) picked[b] = true;
        std::erase_if(pool, [&](int i) { return picked[i]; });
        // oracle lookup happens here: exactly `batch` ground-truth reads
        labeled.insert(labeled.end(), batch_nodes.begin(), batch_nodes.end());
        ++iteration;
    }
    return records;
}

SweepResult run_sweep(const DatasetBundle& bundle,
                      const std::vector<ProtocolConfig>& cfgs,
                      const std::vector<std::uint64_t>& seeds, int workers) {
    if (cfgs.empty()) throw std::invalid_argument("run_sweep: no configs");
    if (seeds.empty()) throw std::invalid_argument("run_sweep: no seeds");
    struct Job {
        const ProtocolConfig* cfg;
        std::uint64_t seed;
        int run_id;
    };
    std::vector<Job> jobs;
    int run_id = 0;
    for (const auto& cfg : cfgs)
        for (std::uint64_t s : seeds) jobs.push_back({&cfg, s, run_id++});

    std::vector<std::vector<CurveRecord>> results(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            try {
                results[j] = run_active_learning(bundle, *jobs[j].cfg,
                                                 jobs[j].seed, jobs[j].run_id);
            } catch (const std::exception& e) {
                errors[j] = std::string("run ") +
                            std::to_string(jobs[j].run_id) + " (" +
                            jobs[j].cfg->strategy + "): " + e.what();
            }
        }
    };
    workers = std::max(1, std::min<int>(workers,
                                        static_cast<int>(jobs.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    SweepResult sweep;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (!errors[j].empty()) {
            sweep.errors.push_back(errors[j]);
            continue;
        }
        sweep.records.insert(sweep.records.end(), results[j].begin(),
                             results[j].end());
    }

    // per (strategy, iteration) aggregation across repetitions
    struct Key {
        std::string strategy;
        int iteration;
        bool operator<(const Key& o) const {
            return std::tie(strategy, iteration) <
                   std::tie(o.strategy, o.iteration);
        }
    };
    std::map<Key, std::vector<const CurveRecord*>> groups;
    for (const auto& r : sweep.records)
        groups[{r.strategy, r.iteration}].push_back(&r);

    std::map<std::string, int> final_iter;
    for (const auto& [key, recs] : groups)
        final_iter[key.strategy] =
            std::max(final_iter[key.strategy], key.iteration);

    std::optional<double> random_final_acc;
    {
        auto it = groups.find({"random", final_iter.count("random")
                                             ? final_iter["random"]
                                             : 0});
        if (it != groups.end()) {
            std::vector<double> acc;
            for (auto* r : it->second) acc.push_back(r->eval.accuracy);
            random_final_acc = mean_se(acc).mean;
        }
    }

    for (const auto& [key, recs] : groups) {
        SummaryRow row;
        row.dataset = bundle.name;
        row.strategy = key.strategy;
        row.iteration = key.iteration;
        row.labeled = recs.front()->labeled;
        row.reps = static_cast<int>(recs.size());
        std::vector<double> acc, micro, macro, loss;
        for (auto* r : recs) {
            acc.push_back(r->eval.accuracy);
            micro.push_back(r->eval.micro_f1);
            macro.push_back(r->eval.macro_f1);
            loss.push_back(r->eval.mean_loss);
        }
        auto a = mean_se(acc);
        row.mean_acc = a.mean;
        row.se_acc = a.se;
        auto mi = mean_se(micro);
        row.mean_micro = mi.mean;
        row.se_micro = mi.se;
        auto ma = mean_se(macro);
        row.mean_macro = ma.mean;
        row.se_macro = ma.se;
        auto lo = mean_se(loss);
        row.mean_loss = lo.mean;
        row.se_loss = lo.se;
        if (random_final_acc && key.iteration == final_iter[key.strategy])
            row.delta_vs_random = row.mean_acc - *random_final_acc;
        sweep.summary.push_back(std::move(row));
    }
    return sweep;
}

std::vector<DistancePoint> distance_to_sampled_curve(
    const Graph& g, const std::vector<double>& fractions, int repetitions,
    int cap, std::mt19937_64& rng) {
    if (fractions.empty())
        throw std::invalid_argument("distance curve: empty fraction list");
    if (cap < 1) throw std::invalid_argument("distance curve: cap must be >= 1");
    for (double f : fractions)
        if (f <= 0.0 || f > 1.0)
            throw std::invalid_argument("distance curve: fraction outside (0,1]");

    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<DistancePoint> out;
    for (double f : fractions) {
        const int k = std::min<int>(
            g.n, static_cast<int>(std::ceil(f * g.n)));
        std::vector<double> means;
        for (int rep = 0; rep < repetitions; ++rep) {
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<int> sample(order.begin(), order.begin() + k);
            if (k >= g.n) {
                means.push_back(0.0);  // no unsampled nodes
                continue;
            }
            auto dist = bfs_distances(g, sample, cap);
            double acc = 0.0;
            for (int i = k; i < g.n; ++i) acc += dist[order[i]];
            means.push_back(acc / static_cast<double>(g.n - k));
        }
        auto s = mean_se(means);
        out.push_back({f, s.mean, s.se});
    }
    return out;
}

void write_curves_csv(std::ostream& out,
                      const std::vector<CurveRecord>& recs) {
    out << "run_id,dataset,strategy,protocol,iteration,labeled,accuracy,"
           "micro_f1,macro_f1,loss\n";
    for (const auto& r : recs)
        out << r.run_id << ',' << r.dataset << ',' << r.strategy << ','
            << r.protocol << ',' << r.iteration << ',' << r.labeled << ','
            << r.eval.accuracy << ',' << r.eval.micro_f1 << ','
            << r.eval.macro_f1 << ',' << r.eval.mean_loss << '\n';
}

void write_summary_csv(std::ostream& out,
                       const std::vector<SummaryRow>& rows) {
    out << "dataset,strategy,iteration,labeled,reps,mean_acc,se_acc,"
           "mean_micro,se_micro,mean_macro,se_macro,mean_loss,se_loss,"
           "delta_vs_random\n";
    for (const auto& r : rows) {
        out << r.dataset << ',' << r.strategy << ',' << r.iteration << ','
            << r.labeled << ',' << r.reps << ',' << r.mean_acc << ','
            << r.se_acc << ',' << r.mean_micro << ',' << r.se_micro << ','
            << r.mean_macro << ',' << r.se_macro << ',' << r.mean_loss << ','
            << r.se_loss << ',';
        if (r.delta_vs_random) out << *r.delta_vs_random;
        out << '\n';
    }
}

void write_distance_csv(std::ostream& out,
                        const std::vector<DistancePoint>& pts) {
    out << "fraction,mean_distance,se\n";
    for (const auto& p : pts)
        out << p.fraction << ',' << p.mean_distance << ',' << p.se << '\n';
}

}  // namespace gal
