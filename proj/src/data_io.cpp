#include "gal/data_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gal {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

struct Expected {
    int nodes;
    long edges;
    int classes;
};

const std::unordered_map<std::string, Expected>& dataset_registry() {
    static const std::unordered_map<std::string, Expected> reg = {
        {"cora", {2708, 5429, 7}},          {"citeseer", {3312, 4732, 6}},
        {"email-eu", {1005, 25571, 42}},    {"pubmed", {19717, 44338, 3}},
        {"subelj-cora", {23166, 91500, 10}}, {"wikispeedia", {4604, 119882, 15}},
    };
    return reg;
}

int intern_class(LabelTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.class_names.size(); ++i)
        if (t.class_names[i] == name) return static_cast<int>(i);
    t.class_names.push_back(name);
    return static_cast<int>(t.class_names.size()) - 1;
}

}  // namespace

LabelTable load_labels(std::istream& in) {
    LabelTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
            throw std::runtime_error("labels parse error at line " +
                                     std::to_string(lineno) +
                                     ": expected node_id<TAB>class_name");
        int cls = intern_class(t, fields[1]);
        if (!t.node_class.emplace(fields[0], cls).second)
            throw std::runtime_error("duplicate node id in labels: " +
                                     fields[0]);
    }
    return t;
}

ContentTable load_content(std::istream& in) {
    ContentTable t;
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() < 3)
            throw std::runtime_error("content parse error at line " +
                                     std::to_string(lineno) +
                                     ": expected id, features, class");
        if (width == 0) width = fields.size();
        if (fields.size() != width)
            throw std::runtime_error(
                "content parse error at line " + std::to_string(lineno) +
                ": inconsistent column count");
        std::vector<double> row(width - 2);
        for (std::size_t j = 1; j + 1 < fields.size(); ++j) {
            try {
                row[j - 1] = std::stod(fields[j]);
            } catch (const std::exception&) {
                throw std::runtime_error("content parse error at line " +
                                         std::to_string(lineno) +
                                         ": bad feature value");
            }
        }
        int cls = intern_class(t.labels, fields.back());
        if (!t.labels.node_class.emplace(fields.front(), cls).second)
            throw std::runtime_error("duplicate node id in content: " +
                                     fields.front());
        t.node_ids.push_back(fields.front());
        rows.push_back(std::move(row));
    }
    t.features.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(width >= 2 ? width - 2 : 0));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            t.features(static_cast<Eigen::Index>(i),
                       static_cast<Eigen::Index>(j)) = rows[i][j];
    return t;
}

ValidationReport validate_bundle(const DatasetBundle& b) {
    ValidationReport r;
    r.nodes = b.graph.n;
    r.edges = b.graph.num_edges();
    r.classes = b.num_classes();
    auto it = dataset_registry().find(b.name);
    if (it != dataset_registry().end()) {
        r.expected_nodes = it->second.nodes;
        r.expected_edges = it->second.edges;
        r.expected_classes = it->second.classes;
        if (r.nodes != it->second.nodes)
            r.warnings.push_back("node count " + std::to_string(r.nodes) +
                                 " differs from registry " +
                                 std::to_string(it->second.nodes));
        if (r.edges != it->second.edges)
            r.warnings.push_back("edge count " + std::to_string(r.edges) +
                                 " differs from registry " +
                                 std::to_string(it->second.edges) +
                                 " (cleanup removes duplicates/self-loops)");
        if (r.classes != it->second.classes)
            r.warnings.push_back("class count " + std::to_string(r.classes) +
                                 " differs from registry " +
                                 std::to_string(it->second.classes));
    }
    return r;
}

DatasetBundle load_dataset(const std::string& dir, const LoadOptions& opts,
                           std::vector<std::string>* warnings) {
    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };
    const fs::path root(dir);
    std::ifstream edges_in(root / "edges.tsv");
    if (!edges_in)
        throw std::runtime_error("cannot open " + (root / "edges.tsv").string());
    Graph raw = load_edge_list(edges_in, opts.any_whitespace);
    if (raw.dropped_self_loops || raw.dropped_duplicates)
        warn("edge cleanup dropped " + std::to_string(raw.dropped_self_loops) +
             " self-loops and " + std::to_string(raw.dropped_duplicates) +
             " duplicate edges");

    LabelTable labels;
    std::optional<ContentTable> content;
    if (fs::exists(root / "content.tsv")) {
        std::ifstream in(root / "content.tsv");
        content = load_content(in);
    }
    if (fs::exists(root / "labels.tsv")) {
        std::ifstream in(root / "labels.tsv");
        labels = load_labels(in);
    } else if (content) {
        labels = content->labels;
    } else {
        throw std::runtime_error("dataset needs labels.tsv or content.tsv: " +
                                 dir);
    }

    // Keep nodes that have edges, a label, and (when present) a content row.
    std::unordered_map<std::string, int> content_row;
    if (content)
        for (std::size_t i = 0; i < content->node_ids.size(); ++i)
            content_row[content->node_ids[i]] = static_cast<int>(i);

    std::vector<int> keep;
    int no_label = 0, no_content = 0;
    for (int i = 0; i < raw.n; ++i) {
        const std::string& id = raw.index_to_id[i];
        if (!labels.node_class.count(id)) {
            ++no_label;
            continue;
        }
        if (content && !content_row.count(id)) {
            ++no_content;
            continue;
        }
        keep.push_back(i);
    }
    if (no_label) warn(std::to_string(no_label) + " graph nodes have no label");
    if (no_content)
        warn(std::to_string(no_content) + " graph nodes have no content row");
    if (content) {
        int extra = static_cast<int>(content->node_ids.size());
        for (const std::string& id : content->node_ids)
            if (raw.id_to_index.count(id)) --extra;
        if (extra)
            warn(std::to_string(extra) + " content rows have no edge-list node");
    }

    auto rebuild = [&](const std::vector<int>& kept) {
        std::vector<int> remap(raw.n, -1);
        for (std::size_t j = 0; j < kept.size(); ++j)
            remap[kept[j]] = static_cast<int>(j);
        std::vector<std::pair<int, int>> edges;
        for (const auto& [s, d] : raw.edges)
            if (remap[s] >= 0 && remap[d] >= 0)
                edges.emplace_back(remap[s], remap[d]);
        std::vector<std::string> ids;
        ids.reserve(kept.size());
        for (int i : kept) ids.push_back(raw.index_to_id[i]);
        return Graph::from_edges(static_cast<int>(kept.size()),
                                 std::move(edges), std::move(ids));
    };

    Graph g = rebuild(keep);
    if (opts.drop_isolated) {
        std::vector<int> connected;
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (g.out_degree(static_cast<int>(j)) +
                    g.in_degree(static_cast<int>(j)) >
                0)
                connected.push_back(keep[j]);
        if (connected.size() != keep.size()) {
            warn(std::to_string(keep.size() - connected.size()) +
                 " isolated nodes dropped");
            keep = std::move(connected);
            g = rebuild(keep);
        }
    }

    DatasetBundle b;
    b.name = opts.name;
    b.class_names = labels.class_names;
    b.labels.resize(g.n);
    for (int i = 0; i < g.n; ++i)
        b.labels[i] = labels.node_class.at(g.index_to_id[i]);
    if (content) {
        Eigen::MatrixXd x(g.n, content->features.cols());
        for (int i = 0; i < g.n; ++i)
            x.row(i) = content->features.row(content_row.at(g.index_to_id[i]));
        b.features = std::move(x);
    }
    b.graph = std::move(g);
    return b;
}

void save_dataset(const DatasetBundle& b, const std::string& dir) {
    fs::create_directories(dir);
    const fs::path root(dir);
    {
        std::ofstream out(root / "edges.tsv");
        for (const auto& [s, d] : b.graph.edges)
            out << b.graph.index_to_id[s] << '\t' << b.graph.index_to_id[d]
                << '\n';
    }
    {
        std::ofstream out(root / "labels.tsv");
        for (int i = 0; i < b.graph.n; ++i)
            out << b.graph.index_to_id[i] << '\t' << b.class_names[b.labels[i]]
                << '\n';
    }
    if (b.features) {
        std::ofstream out(root / "content.tsv");
        for (int i = 0; i < b.graph.n; ++i) {
            out << b.graph.index_to_id[i];
            for (Eigen::Index j = 0; j < b.features->cols(); ++j)
                out << '\t' << (*b.features)(i, j);
            out << '\t' << b.class_names[b.labels[i]] << '\n';
        }
    }
}

}  // namespace gal
