// graphal: benchmark driver for graph active-learning experiments.
//
// Subcommands: run, sweep, analyze-distance, validate, gen-sbm.
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "gal/config.hpp"
#include "gal/data_io.hpp"
#include "gal/experiment.hpp"
#include "gal/strategies.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "graphal 0.1.0";

std::string iso_now() {
    auto t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::uint64_t fnv1a_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

json dataset_checksums(const std::string& dir) {
    json out = json::object();
    for (const char* f : {"edges.tsv", "labels.tsv", "content.tsv"}) {
        fs::path p = fs::path(dir) / f;
        if (fs::exists(p)) {
            std::ostringstream hex;
            hex << std::hex << fnv1a_file(p);
            out[f] = hex.str();
        }
    }
    return out;
}

json config_snapshot(const gal::RunConfig& rc,
                     const std::vector<std::string>& strategies,
                     const std::vector<std::uint64_t>& seeds) {
    const auto& p = rc.protocol;
    json j;
    j["dataset"] = {{"path", rc.dataset_path},
                    {"name", rc.dataset.name},
                    {"drop_isolated", rc.dataset.drop_isolated},
                    {"whitespace_edges", rc.dataset.any_whitespace},
                    {"checksums", dataset_checksums(rc.dataset_path)}};
    json proto = {{"type", p.protocol == gal::Protocol::FixedSplit
                               ? "fixed-split"
                               : "fraction-budget"},
                  {"batch_size", p.batch_size},
                  {"feature_kind",
                   p.feature_kind == gal::FeatureKind::BagOfWords
                       ? "bag-of-words"
                       : "neighbor-labels"},
                  {"repetitions", p.repetitions},
                  {"gamma", p.gamma},
                  {"distance_cap", p.distance_cap},
                  {"test_size", p.test_size},
                  {"validation_size", p.validation_size}};
    if (p.label_fraction) proto["label_fraction"] = *p.label_fraction;
    if (p.query_budget) proto["query_budget"] = *p.query_budget;
    j["protocol"] = proto;
    j["gcn"] = {{"hidden", p.gcn.hidden},
                {"epochs", p.gcn.epochs},
                {"learning_rate", p.gcn.learning_rate},
                {"dropout", p.gcn.dropout},
                {"weight_decay", p.gcn.weight_decay},
                {"validation_fraction", p.gcn.validation_fraction},
                {"adjacency_mode",
                 p.gcn.adjacency_mode == gal::AdjacencyMode::DirectedSplit
                     ? "directed-split"
                     : "symmetric"}};
    j["strategies"] = strategies;
    j["seeds"] = seeds;
    j["lof_k"] = p.lof_k;
    return j;
}

std::vector<std::uint64_t> make_seeds(std::uint64_t base, int reps) {
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < reps; ++i)
        seeds.push_back(base + static_cast<std::uint64_t>(i));
    return seeds;
}

struct CliOverrides {
    std::string strategy;
    std::vector<std::string> strategies;
    int reps = -1;
    std::int64_t seed = -1;
    int workers = 0;
    std::string out_dir;
};

int run_experiment(const std::string& config_path, const CliOverrides& ov,
                   bool multi_strategy) {
    gal::RunConfig rc;
    try {
        rc = gal::parse_run_config(gal::IniFile::parse_file(config_path));
        if (!ov.strategy.empty()) rc.protocol.strategy = ov.strategy;
        if (ov.reps > 0) rc.protocol.repetitions = ov.reps;
        if (ov.seed >= 0) rc.base_seed = static_cast<std::uint64_t>(ov.seed);
        if (!ov.out_dir.empty()) rc.output_dir = ov.out_dir;
        if (!gal::is_known_strategy(rc.protocol.strategy)) {
            std::string all;
            for (const auto& s : gal::strategy_registry()) all += " " + s;
            throw std::invalid_argument("unknown strategy '" +
                                        rc.protocol.strategy + "'; known:" +
                                        all);
        }
        for (const auto& s : ov.strategies)
            if (!gal::is_known_strategy(s)) {
                std::string all;
                for (const auto& k : gal::strategy_registry()) all += " " + k;
                throw std::invalid_argument("unknown strategy '" + s +
                                            "'; known:" + all);
            }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    std::vector<std::string> strategies =
        multi_strategy && !ov.strategies.empty()
            ? ov.strategies
            : std::vector<std::string>{rc.protocol.strategy};
    std::vector<gal::ProtocolConfig> cfgs;
    for (const auto& s : strategies) {
        gal::ProtocolConfig c = rc.protocol;
        c.strategy = s;
        cfgs.push_back(std::move(c));
    }
    auto seeds = make_seeds(rc.base_seed, rc.protocol.repetitions);

    fs::create_directories(rc.output_dir);
    const fs::path out(rc.output_dir);
    json manifest;
    manifest["tool"] = kVersion;
    manifest["started"] = iso_now();
    manifest["config"] = config_snapshot(rc, strategies, seeds);
    manifest["outputs"] = {{"curves", (out / "curves.csv").string()},
                           {"summary", (out / "summary.csv").string()}};
    manifest["status"] = "running";
    std::ofstream(out / "manifest.json") << manifest.dump(2) << "\n";

    auto finish = [&](const std::string& status,
                      const std::vector<std::string>& errors) {
        manifest["status"] = status;
        manifest["finished"] = iso_now();
        if (!errors.empty()) manifest["errors"] = errors;
        std::ofstream(out / "manifest.json") << manifest.dump(2) << "\n";
    };

    try {
        std::vector<std::string> warnings;
        gal::DatasetBundle bundle =
            gal::load_dataset(rc.dataset_path, rc.dataset, &warnings);
        for (const auto& w : warnings) std::cerr << "note: " << w << "\n";
        int workers = ov.workers > 0
                          ? ov.workers
                          : static_cast<int>(std::max(
                                1u, std::thread::hardware_concurrency()));
        gal::SweepResult result =
            gal::run_sweep(bundle, cfgs, seeds, workers);
        {
            std::ofstream c(out / "curves.csv");
            gal::write_curves_csv(c, result.records);
            std::ofstream s(out / "summary.csv");
            gal::write_summary_csv(s, result.summary);
        }
        for (const auto& e : result.errors)
            std::cerr << "run error: " << e << "\n";
        if (result.records.empty()) {
            finish("failed", result.errors);
            return 1;
        }
        finish(result.errors.empty() ? "ok" : "partial", result.errors);
        std::cout << "wrote " << (out / "curves.csv").string() << " and "
                  << (out / "summary.csv").string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        finish("failed", {e.what()});
        return 1;
    }
}

int analyze_distance(const std::string& config_path,
                     const std::vector<double>& fractions_arg, int reps,
                     std::int64_t seed_arg) {
    gal::RunConfig rc;
    try {
        rc = gal::parse_run_config(gal::IniFile::parse_file(config_path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        std::vector<std::string> warnings;
        gal::DatasetBundle bundle =
            gal::load_dataset(rc.dataset_path, rc.dataset, &warnings);
        std::vector<double> fractions = fractions_arg;
        if (fractions.empty()) {
            // default grid: 15 points from 0.005 to 0.15
            for (int i = 0; i < 15; ++i)
                fractions.push_back(0.005 + i * (0.15 - 0.005) / 14.0);
        }
        std::mt19937_64 rng(seed_arg >= 0
                                ? static_cast<std::uint64_t>(seed_arg)
                                : rc.base_seed);
        auto curve = gal::distance_to_sampled_curve(
            bundle.graph, fractions, reps, rc.protocol.distance_cap, rng);
        fs::create_directories(rc.output_dir);
        fs::path path = fs::path(rc.output_dir) / "distance.csv";
        std::ofstream outf(path);
        gal::write_distance_csv(outf, curve);
        std::cout << "wrote " << path.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int validate(const std::string& dir) {
    try {
        gal::LoadOptions opts;
        // use the directory name as the registry key
        opts.name = fs::path(dir).filename().string();
        std::vector<std::string> warnings;
        gal::DatasetBundle b = gal::load_dataset(dir, opts, &warnings);
        gal::ValidationReport r = gal::validate_bundle(b);
        std::cout << b.name << ": " << r.nodes << " nodes / " << r.edges
                  << " edges / " << r.classes << " classes\n";
        if (b.features)
            std::cout << "features: " << b.features->cols() << " columns\n";
        for (const auto& w : warnings) std::cout << "note: " << w << "\n";
        for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int gen_sbm(const std::vector<int>& blocks, double within, double between,
            bool directed, std::int64_t seed, const std::string& out_dir) {
    try {
        auto [graph, labels] = gal::sbm_generate(
            blocks, within, between, directed,
            static_cast<std::uint64_t>(seed));
        gal::DatasetBundle b;
        b.name = "sbm";
        b.labels = labels;
        for (std::size_t c = 0; c < blocks.size(); ++c)
            b.class_names.push_back("block" + std::to_string(c));
        b.graph = std::move(graph);
        gal::save_dataset(b, out_dir);
        std::cout << "wrote " << out_dir << ": " << b.graph.n << " nodes, "
                  << b.graph.num_edges() << " edges, " << blocks.size()
                  << " classes\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph active-learning benchmark"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CliOverrides ov;
    std::string config_path;

    auto* run = app.add_subcommand("run", "run one strategy");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--strategy", ov.strategy, "override strategy");
    run->add_option("--reps", ov.reps, "override repetitions");
    run->add_option("--seed", ov.seed, "override base seed");
    run->add_option("--workers", ov.workers, "worker pool size");
    run->add_option("--out", ov.out_dir, "override output directory");

    auto* sweep = app.add_subcommand("sweep", "run several strategies");
    sweep->add_option("--config", config_path, "config file")->required();
    sweep->add_option("--strategies", ov.strategies, "strategy names")
        ->delimiter(',');
    sweep->add_option("--reps", ov.reps, "override repetitions");
    sweep->add_option("--seed", ov.seed, "override base seed");
    sweep->add_option("--workers", ov.workers, "worker pool size");
    sweep->add_option("--out", ov.out_dir, "override output directory");

    std::vector<double> fractions;
    int dist_reps = 20;
    std::int64_t dist_seed = -1;
    auto* ad = app.add_subcommand("analyze-distance",
                                  "distance-to-sampled-nodes curve");
    ad->add_option("--config", config_path, "config file")->required();
    ad->add_option("--fractions", fractions, "sampling fractions")
        ->delimiter(',');
    ad->add_option("--reps", dist_reps, "repetitions per fraction");
    ad->add_option("--seed", dist_seed, "rng seed");

    std::string dataset_dir;
    auto* val = app.add_subcommand("validate", "check a dataset directory");
    val->add_option("dir", dataset_dir, "dataset directory")->required();

    std::vector<int> blocks;
    double within = 0.3, between = 0.01;
    bool directed = false;
    std::int64_t sbm_seed = 1;
    std::string sbm_out = "sbm";
    auto* gen = app.add_subcommand("gen-sbm", "generate an SBM dataset");
    gen->add_option("--blocks", blocks, "block sizes")
        ->delimiter(',')
        ->required();
    gen->add_option("--within", within, "within-block edge probability");
    gen->add_option("--between", between, "between-block edge probability");
    gen->add_flag("--directed", directed, "sample directed edges");
    gen->add_option("--seed", sbm_seed, "rng seed");
    gen->add_option("--out", sbm_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (run->parsed()) return run_experiment(config_path, ov, false);
    if (sweep->parsed()) return run_experiment(config_path, ov, true);
    if (ad->parsed())
        return analyze_distance(config_path, fractions, dist_reps, dist_seed);
    if (val->parsed()) return validate(dataset_dir);
    if (gen->parsed())
        return gen_sbm(blocks, within, between, directed, sbm_seed, sbm_out);
    return 2;
}
