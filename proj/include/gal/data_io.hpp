#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gal/graph.hpp"

namespace gal {

struct DatasetBundle {
    Graph graph;
    std::vector<int> labels;  // total: one class per node, dense 0..C-1
    std::vector<std::string> class_names;
    std::optional<Eigen::MatrixXd> features;  // bag-of-words, row per node
    std::string name;
    int num_classes() const { return static_cast<int>(class_names.size()); }
};

struct LabelTable {
    std::unordered_map<std::string, int> node_class;
    std::vector<std::string> class_names;  // indexed by first appearance
};

/// Parse `node_id<TAB>class_name` lines; duplicate node ids are rejected.
LabelTable load_labels(std::istream& in);

struct ContentTable {
    std::vector<std::string> node_ids;
    Eigen::MatrixXd features;  // row per content line
    LabelTable labels;
};

/// Parse Cora-style `.content` lines: node_id, F feature values, class name.
ContentTable load_content(std::istream& in);

struct ValidationReport {
    int nodes = 0;
    long edges = 0;
    int classes = 0;
    std::optional<int> expected_nodes, expected_classes;
    std::optional<long> expected_edges;
    std::vector<std::string> warnings;
};

ValidationReport validate_bundle(const DatasetBundle& b);

struct LoadOptions {
    std::string name;          // registry key, used for expected-count checks
    bool drop_isolated = false;
    bool any_whitespace = false;
};

/// Load a dataset directory: `edges.tsv` plus `labels.tsv` and/or
/// `content.tsv`. Nodes lacking either an edge-list entry or a label/content
/// row are dropped (counts recorded in the report warnings).
DatasetBundle load_dataset(const std::string& dir, const LoadOptions& opts,
                           std::vector<std::string>* warnings = nullptr);

/// Write a bundle back out in the same directory layout.
void save_dataset(const DatasetBundle& b, const std::string& dir);

}  // namespace gal
