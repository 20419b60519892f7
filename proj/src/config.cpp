#include "gal/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gal/strategies.hpp"

namespace gal {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_field(const std::string& key, const std::string& why) {
    throw std::invalid_argument("config field '" + key + "': " + why);
}

}  // namespace

IniFile IniFile::parse(std::istream& in) {
    IniFile ini;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config line " +
                                            std::to_string(lineno) +
                                            ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " +
                                        std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " +
                                        std::to_string(lineno) +
                                        ": empty key");
        ini.values_[section.empty() ? key : section + "." + key] = val;
    }
    return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return parse(in);
}

std::string IniFile::get(const std::string& key,
                         const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

int IniFile::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos;
        int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        bad_field(key, "expected an integer, got '" + it->second + "'");
    }
}

double IniFile::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        bad_field(key, "expected a number, got '" + it->second + "'");
    }
}

bool IniFile::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_field(key, "expected a boolean, got '" + v + "'");
}

AdjacencyMode parse_adjacency_mode(const std::string& s) {
    if (s == "symmetric") return AdjacencyMode::Symmetric;
    if (s == "directed-split") return AdjacencyMode::DirectedSplit;
    throw std::invalid_argument(
        "adjacency_mode must be 'symmetric' or 'directed-split', got '" + s +
        "'");
}

FeatureKind parse_feature_kind(const std::string& s) {
    if (s == "neighbor-labels") return FeatureKind::NeighborLabels;
    if (s == "bag-of-words") return FeatureKind::BagOfWords;
    throw std::invalid_argument(
        "feature_kind must be 'neighbor-labels' or 'bag-of-words', got '" + s +
        "'");
}

Protocol parse_protocol(const std::string& s) {
    if (s == "fraction-budget") return Protocol::FractionBudget;
    if (s == "fixed-split") return Protocol::FixedSplit;
    throw std::invalid_argument(
        "protocol type must be 'fraction-budget' or 'fixed-split', got '" + s +
        "'");
}

RunConfig parse_run_config(const IniFile& ini) {
    RunConfig rc;
    rc.dataset_path = ini.get("dataset.path", "");
    if (rc.dataset_path.empty()) bad_field("dataset.path", "required");
    rc.dataset.name = ini.get("dataset.name", "");
    rc.dataset.drop_isolated = ini.get_bool("dataset.drop_isolated", false);
    rc.dataset.any_whitespace =
        ini.get_bool("dataset.whitespace_edges", false);

    ProtocolConfig& p = rc.protocol;
    p.protocol = parse_protocol(ini.get("protocol.type", "fraction-budget"));
    p.strategy = ini.get("strategy.name", "random");
    if (!is_known_strategy(p.strategy)) {
        std::string all;
        for (const auto& s : strategy_registry()) all += " " + s;
        bad_field("strategy.name",
                  "unknown strategy '" + p.strategy + "'; known:" + all);
    }
    p.batch_size = ini.get_int("protocol.batch_size", 1);
    if (p.batch_size < 1) bad_field("protocol.batch_size", "must be >= 1");
    if (ini.has("protocol.label_fraction") && ini.has("protocol.query_budget"))
        bad_field("protocol", "set label_fraction or query_budget, not both");
    if (ini.has("protocol.label_fraction")) {
        double f = ini.get_double("protocol.label_fraction", 0.15);
        if (f <= 0.0 || f > 1.0)
            bad_field("protocol.label_fraction", "must lie in (0,1]");
        p.label_fraction = f;
    }
    if (ini.has("protocol.query_budget")) {
        int b = ini.get_int("protocol.query_budget", 200);
        if (b < 0) bad_field("protocol.query_budget", "must be >= 0");
        p.query_budget = b;
    }
    if (!p.label_fraction && !p.query_budget) {
        if (p.protocol == Protocol::FixedSplit)
            p.query_budget = 200;
        else
            p.label_fraction = 0.15;
    }
    p.feature_kind = parse_feature_kind(
        ini.get("protocol.feature_kind", "neighbor-labels"));
    p.repetitions = ini.get_int("protocol.repetitions", 20);
    if (p.repetitions < 1) bad_field("protocol.repetitions", "must be >= 1");
    p.gamma = ini.get_double("protocol.gamma", 0.85);
    if (p.gamma <= 0.0 || p.gamma >= 1.0)
        bad_field("protocol.gamma", "must lie in (0,1)");
    p.distance_cap = ini.get_int("protocol.distance_cap", 9);
    p.lof_k = ini.get_int("strategy.lof_k", 20);
    p.test_size = ini.get_int("protocol.test_size", 1000);
    p.validation_size = ini.get_int("protocol.validation_size", 500);

    GcnConfig& g = p.gcn;
    g.hidden = ini.get_int("gcn.hidden", 16);
    if (g.hidden < 1) bad_field("gcn.hidden", "must be >= 1");
    g.epochs = ini.get_int("gcn.epochs", 200);
    g.learning_rate = ini.get_double("gcn.learning_rate", 0.01);
    g.dropout = ini.get_double("gcn.dropout", 0.6);
    if (g.dropout < 0.0 || g.dropout >= 1.0)
        bad_field("gcn.dropout", "must lie in [0,1)");
    g.weight_decay = ini.get_double("gcn.weight_decay", 0.005);
    g.validation_fraction = ini.get_double("gcn.validation_fraction", 0.10);
    g.adjacency_mode =
        parse_adjacency_mode(ini.get("gcn.adjacency_mode", "symmetric"));

    rc.base_seed = static_cast<std::uint64_t>(ini.get_int("protocol.seed", 1));
    rc.output_dir = ini.get("output.dir", "out");
    return rc;
}

}  // namespace gal
