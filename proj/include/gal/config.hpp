#pragma once

#include <map>
#include <optional>
#include <string>

#include "gal/experiment.hpp"

namespace gal {

/// Flat view of an INI-style config file: `[section]` headers and
/// `key = value` lines, '#' or ';' comments. Keys are stored as
/// "section.key".
class IniFile {
  public:
    static IniFile parse(std::istream& in);
    static IniFile parse_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    const std::map<std::string, std::string>& entries() const {
        return values_;
    }

  private:
    std::map<std::string, std::string> values_;
};

/// A fully resolved experiment configuration: dataset location, protocol,
/// and output directory. Throws with a field-level message on bad values.
struct RunConfig {
    std::string dataset_path;
    LoadOptions dataset;
    ProtocolConfig protocol;
    std::uint64_t base_seed = 1;
    std::string output_dir = "out";
};

RunConfig parse_run_config(const IniFile& ini);

AdjacencyMode parse_adjacency_mode(const std::string& s);
FeatureKind parse_feature_kind(const std::string& s);
Protocol parse_protocol(const std::string& s);

}  // namespace gal
