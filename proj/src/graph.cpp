#include "gal/graph.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gal {

namespace {

void build_csr(int n, const std::vector<std::pair<int, int>>& edges,
               std::vector<int>& offsets, std::vector<int>& targets,
               bool reverse) {
    offsets.assign(n + 1, 0);
    for (const auto& [s, d] : edges) ++offsets[(reverse ? d : s) + 1];
    for (int i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    targets.resize(edges.size());
    std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [s, d] : edges)
        targets[cursor[reverse ? d : s]++] = reverse ? s : d;
    for (int i = 0; i < n; ++i)
        std::sort(targets.begin() + offsets[i], targets.begin() + offsets[i + 1]);
}

}  // namespace

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edge_list,
                        std::vector<std::string> ids) {
    Graph g;
    g.n = n;
    for (const auto& [s, d] : edge_list) {
        if (s < 0 || s >= n || d < 0 || d >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (s == d) {
            ++g.dropped_self_loops;
            continue;
        }
        g.edges.emplace_back(s, d);
    }
    std::sort(g.edges.begin(), g.edges.end());
    auto last = std::unique(g.edges.begin(), g.edges.end());
    g.dropped_duplicates = static_cast<std::size_t>(g.edges.end() - last);
    g.edges.erase(last, g.edges.end());

    if (ids.empty()) {
        ids.reserve(n);
        for (int i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    }
    if (static_cast<int>(ids.size()) != n)
        throw std::invalid_argument("id list size does not match node count");
    g.index_to_id = std::move(ids);
    for (int i = 0; i < n; ++i) g.id_to_index[g.index_to_id[i]] = i;
    if (static_cast<int>(g.id_to_index.size()) != n)
        throw std::invalid_argument("duplicate external node id");

    build_csr(n, g.edges, g.out_offsets, g.out_targets, false);
    build_csr(n, g.edges, g.in_offsets, g.in_targets, true);
    return g;
}

Graph load_edge_list(std::istream& in, bool any_whitespace) {
    std::vector<std::pair<std::string, std::string>> raw;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::string src, dst;
        if (any_whitespace) {
            std::istringstream ss(line);
            std::string extra;
            if (!(ss >> src >> dst) || (ss >> extra))
                throw std::runtime_error("edge list parse error at line " +
                                         std::to_string(lineno) +
                                         ": expected two fields");
        } else {
            auto tab = line.find('\t');
            if (tab == std::string::npos ||
                line.find('\t', tab + 1) != std::string::npos)
                throw std::runtime_error("edge list parse error at line " +
                                         std::to_string(lineno) +
                                         ": expected src<TAB>dst");
            src = line.substr(0, tab);
            dst = line.substr(tab + 1);
            if (src.empty() || dst.empty())
                throw std::runtime_error("edge list parse error at line " +
                                         std::to_string(lineno) +
                                         ": empty field");
        }
        raw.emplace_back(std::move(src), std::move(dst));
    }
    if (raw.empty()) throw std::runtime_error("edge list is empty");

    std::unordered_map<std::string, int> index;
    std::vector<std::string> ids;
    auto intern = [&](const std::string& id) {
        auto [it, inserted] = index.emplace(id, static_cast<int>(ids.size()));
        if (inserted) ids.push_back(id);
        return it->second;
    };
    std::vector<std::pair<int, int>> edges;
    edges.reserve(raw.size());
    for (const auto& [s, d] : raw) {
        // keep first-appearance order: the source is interned before the
        // destination (argument evaluation order would not guarantee it)
        int s_idx = intern(s);
        int d_idx = intern(d);
        edges.emplace_back(s_idx, d_idx);
    }
    const int n = static_cast<int>(ids.size());
    return Graph::from_edges(n, std::move(edges), std::move(ids));
}

std::vector<int> undirected_neighbors(const Graph& g, int i) {
    if (i < 0 || i >= g.n) throw std::out_of_range("node index out of range");
    std::vector<int> nbrs;
    auto out = g.out_neighbors(i);
    auto in = g.in_neighbors(i);
    nbrs.reserve(out.size() + in.size());
    std::set_union(out.begin(), out.end(), in.begin(), in.end(),
                   std::back_inserter(nbrs));
    return nbrs;
}

NormalizedAdjacency normalized_adjacency(const Graph& g, AdjacencyMode mode) {
    const int n = g.n;
    // clip(A + A^T) to {0,1}: undirected neighbor structure
    std::vector<Eigen::Triplet<double>> sym_t;
    std::vector<double> deg(n, 1.0);  // +I contributes 1 to every row sum
    for (int i = 0; i < n; ++i) {
        auto nbrs = undirected_neighbors(g, i);
        deg[i] += static_cast<double>(nbrs.size());
    }
    for (int i = 0; i < n; ++i) {
        sym_t.emplace_back(i, i, 1.0 / deg[i]);
        for (int j : undirected_neighbors(g, i))
            sym_t.emplace_back(i, j, 1.0 / std::sqrt(deg[i] * deg[j]));
    }
    NormalizedAdjacency out;
    out.mode = mode;
    out.sym.resize(n, n);
    out.sym.setFromTriplets(sym_t.begin(), sym_t.end());
    if (mode == AdjacencyMode::DirectedSplit) {
        std::vector<Eigen::Triplet<double>> skew_t;
        for (const auto& [s, d] : g.edges) {
            auto out_s = g.out_neighbors(d);
            bool reciprocal = std::binary_search(out_s.begin(), out_s.end(), s);
            if (reciprocal) continue;  // A - A^T cancels
            const double w = 1.0 / std::sqrt(deg[s] * deg[d]);
            skew_t.emplace_back(s, d, w);
            skew_t.emplace_back(d, s, -w);
        }
        out.skew.resize(n, n);
        out.skew.setFromTriplets(skew_t.begin(), skew_t.end());
    }
    return out;
}

Eigen::SparseMatrix<double> random_walk_matrix(const Graph& g) {
    const int n = g.n;
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) {
        auto out = g.out_neighbors(i);
        if (out.empty()) {
            for (int j = 0; j < n; ++j) t.emplace_back(i, j, 1.0 / n);
        } else {
            const double w = 1.0 / static_cast<double>(out.size());
            for (int j : out) t.emplace_back(i, j, w);
        }
    }
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

std::vector<int> bfs_distances(const Graph& g, const std::vector<int>& sources,
                               int cap) {
    if (sources.empty()) throw std::invalid_argument("bfs: empty source set");
    if (cap < 1) throw std::invalid_argument("bfs: cap must be >= 1");
    std::vector<int> dist(g.n, -1);
    std::deque<int> queue;
    for (int s : sources) {
        if (s < 0 || s >= g.n) throw std::out_of_range("bfs: source out of range");
        if (dist[s] != 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        if (dist[u] >= cap) continue;
        auto relax = [&](int v) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        };
        for (int v : g.out_neighbors(u)) relax(v);
        for (int v : g.in_neighbors(u)) relax(v);
    }
    for (int& d : dist)
        if (d < 0 || d > cap) d = cap;
    return dist;
}

std::vector<int> k_truss_scores(const Graph& g) {
    const int n = g.n;
    // undirected simple edge set
    std::vector<std::set<int>> adj(n);
    for (const auto& [s, d] : g.edges) {
        adj[s].insert(d);
        adj[d].insert(s);
    }
    std::vector<std::pair<int, int>> und;
    for (int i = 0; i < n; ++i)
        for (int j : adj[i])
            if (i < j) und.emplace_back(i, j);

    auto support = [&](int a, int b) {
        int cnt = 0;
        const auto& sa = adj[a].size() < adj[b].size() ? adj[a] : adj[b];
        const auto& sb = adj[a].size() < adj[b].size() ? adj[b] : adj[a];
        for (int x : sa) cnt += sb.count(x);
        return cnt;
    };

    std::vector<int> trussness(und.size(), 0);
    std::vector<bool> removed(und.size(), false);
    std::size_t remaining = und.size();
    int k = 2;
    while (remaining > 0) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t e = 0; e < und.size(); ++e) {
                if (removed[e]) continue;
                auto [a, b] = und[e];
                if (support(a, b) < k - 1) {
                    removed[e] = true;
                    trussness[e] = k;
                    adj[a].erase(b);
                    adj[b].erase(a);
                    --remaining;
                    changed = true;
                }
            }
        }
        ++k;
    }
    std::vector<int> scores(n, 0);
    for (std::size_t e = 0; e < und.size(); ++e) {
        auto [a, b] = und[e];
        scores[a] = std::max(scores[a], trussness[e]);
        scores[b] = std::max(scores[b], trussness[e]);
    }
    return scores;
}

std::pair<Graph, std::vector<int>> sbm_generate(
    const std::vector<int>& block_sizes, double within_prob,
    double between_prob, bool directed, std::uint64_t seed) {
    if (within_prob < 0 || within_prob > 1 || between_prob < 0 ||
        between_prob > 1)
        throw std::invalid_argument("sbm: probabilities must lie in [0,1]");
    int n = 0;
    std::vector<int> labels;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        if (block_sizes[b] < 1)
            throw std::invalid_argument("sbm: block sizes must be >= 1");
        n += block_sizes[b];
        labels.insert(labels.end(), block_sizes[b], static_cast<int>(b));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = directed ? 0 : i + 1; j < n; ++j) {
            if (i == j) continue;
            double p = labels[i] == labels[j] ? within_prob : between_prob;
            if (unif(rng) < p) {
                edges.emplace_back(i, j);
                if (!directed) edges.emplace_back(j, i);
            }
        }
    }
    return {Graph::from_edges(n, std::move(edges)), std::move(labels)};
}

}  // namespace gal
