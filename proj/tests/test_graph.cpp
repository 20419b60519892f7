#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "gal/graph.hpp"

using namespace gal;

namespace {

Graph random_graph(int n, double p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && unif(rng) < p) edges.emplace_back(i, j);
    return Graph::from_edges(n, std::move(edges));
}

// all-pairs shortest paths on the undirected view, for checking BFS
std::vector<std::vector<int>> floyd_warshall_undirected(const Graph& g) {
    const int inf = 1 << 20;
    std::vector<std::vector<int>> d(g.n, std::vector<int>(g.n, inf));
    for (int i = 0; i < g.n; ++i) d[i][i] = 0;
    for (const auto& [s, t] : g.edges) d[s][t] = d[t][s] = 1;
    for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

// trussness by trying every k with from-scratch iterative removal
std::vector<int> brute_truss_scores(const Graph& g) {
    std::set<std::pair<int, int>> all;
    for (const auto& [s, t] : g.edges)
        all.insert({std::min(s, t), std::max(s, t)});
    auto k_truss_edges = [&](int k) {
        std::set<std::pair<int, int>> e = all;
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = e.begin(); it != e.end();) {
                auto [a, b] = *it;
                int tri = 0;
                for (int c = 0; c < g.n; ++c) {
                    if (c == a || c == b) continue;
                    if (e.count({std::min(a, c), std::max(a, c)}) &&
                        e.count({std::min(b, c), std::max(b, c)}))
                        ++tri;
                }
                if (tri < k - 2) {
                    it = e.erase(it);
                    changed = true;
                } else {
                    ++it;
                }
            }
        }
        return e;
    };
    std::vector<int> score(g.n, 0);
    for (int k = 2; k <= g.n + 2; ++k) {
        auto e = k_truss_edges(k);
        if (e.empty()) break;
        for (const auto& [a, b] : e) {
            score[a] = std::max(score[a], k);
            score[b] = std::max(score[b], k);
        }
    }
    return score;
}

}  // namespace

TEST_CASE("load_edge_list basics") {
    std::istringstream in("a\tb\nb\ta\n");
    Graph g = load_edge_list(in);
    CHECK(g.n == 2);
    CHECK(g.num_edges() == 2);

    std::istringstream dup("a\tb\na\tb\nc\tc\n");
    Graph g2 = load_edge_list(dup);
    CHECK(g2.n == 3);
    CHECK(g2.num_edges() == 1);
    CHECK(g2.dropped_duplicates == 1);
    CHECK(g2.dropped_self_loops == 1);

    std::istringstream bad("a\tb\tc\n");
    CHECK_THROWS_WITH_AS(load_edge_list(bad),
                         doctest::Contains("line 1"), std::runtime_error);

    std::istringstream empty("# only a comment\n");
    CHECK_THROWS_AS(load_edge_list(empty), std::runtime_error);

    std::istringstream ws("a  b\nb\tc\n");
    Graph g3 = load_edge_list(ws, true);
    CHECK(g3.n == 3);
}

TEST_CASE("index assignment follows first appearance") {
    std::istringstream in("x\ty\nz\tx\n");
    Graph g = load_edge_list(in);
    CHECK(g.id_to_index.at("x") == 0);
    CHECK(g.id_to_index.at("y") == 1);
    CHECK(g.id_to_index.at("z") == 2);
    for (int i = 0; i < g.n; ++i)
        CHECK(g.id_to_index.at(g.index_to_id[i]) == i);
}

TEST_CASE("undirected_neighbors") {
    Graph g = Graph::from_edges(3, {{0, 1}});
    CHECK(undirected_neighbors(g, 0) == std::vector<int>{1});
    CHECK(undirected_neighbors(g, 1) == std::vector<int>{0});
    CHECK(undirected_neighbors(g, 2).empty());

    Graph g2 = Graph::from_edges(2, {{0, 1}, {1, 0}});
    CHECK(undirected_neighbors(g2, 0) == std::vector<int>{1});
    CHECK_THROWS_AS(undirected_neighbors(g2, 2), std::out_of_range);
}

TEST_CASE("in-CSR is the transpose of out-CSR") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = random_graph(1 + trial % 15, 0.3, rng);
        std::set<std::pair<int, int>> out_pairs, in_pairs;
        for (int i = 0; i < g.n; ++i) {
            for (int j : g.out_neighbors(i)) out_pairs.insert({i, j});
            for (int j : g.in_neighbors(i)) in_pairs.insert({j, i});
        }
        CHECK(out_pairs == in_pairs);
    }
}

TEST_CASE("normalized_adjacency symmetric mode") {
    Graph one = Graph::from_edges(1, {});
    auto na = normalized_adjacency(one, AdjacencyMode::Symmetric);
    CHECK(Eigen::MatrixXd(na.sym)(0, 0) == doctest::Approx(1.0));

    Graph pair = Graph::from_edges(2, {{0, 1}});
    auto nb = normalized_adjacency(pair, AdjacencyMode::Symmetric);
    Eigen::MatrixXd m(nb.sym);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(m(i, j) == doctest::Approx(0.5));

    std::mt19937_64 rng(3);
    Graph g = random_graph(50, 0.1, rng);
    auto nc = normalized_adjacency(g, AdjacencyMode::Symmetric);
    Eigen::MatrixXd d(nc.sym);
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("normalized_adjacency spectral radius <= 1") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = random_graph(4 + trial, 0.3, rng);
        auto na = normalized_adjacency(g, AdjacencyMode::Symmetric);
        Eigen::VectorXd v = Eigen::VectorXd::Random(g.n);
        v.normalize();
        double lambda = 0.0;
        for (int it = 0; it < 200; ++it) {
            Eigen::VectorXd w = na.sym * v;
            lambda = w.norm();
            if (lambda == 0.0) break;
            v = w / lambda;
        }
        CHECK(lambda <= 1.0 + 1e-9);
    }
}

TEST_CASE("normalized_adjacency directed-split invariants") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = random_graph(3 + trial * 2, 0.3, rng);
        auto na = normalized_adjacency(g, AdjacencyMode::DirectedSplit);
        Eigen::MatrixXd s(na.sym);
        CHECK((s - s.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::MatrixXd k(na.skew);
        CHECK((k + k.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
    // reciprocal edges cancel out of the anti-symmetric part
    Graph both = Graph::from_edges(2, {{0, 1}, {1, 0}});
    auto na = normalized_adjacency(both, AdjacencyMode::DirectedSplit);
    CHECK(Eigen::MatrixXd(na.skew).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random_walk_matrix") {
    Graph g = Graph::from_edges(2, {{0, 1}});
    Eigen::MatrixXd m(random_walk_matrix(g));
    CHECK(m(0, 0) == 0.0);
    CHECK(m(0, 1) == doctest::Approx(1.0));
    CHECK(m(1, 0) == doctest::Approx(0.5));  // dangling row -> uniform
    CHECK(m(1, 1) == doctest::Approx(0.5));

    Graph cyc = Graph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
    Eigen::MatrixXd p(random_walk_matrix(cyc));
    CHECK(p(0, 1) == 1.0);
    CHECK(p(1, 2) == 1.0);
    CHECK(p(2, 0) == 1.0);

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        Graph r = random_graph(8 + trial, 0.25, rng);
        Eigen::MatrixXd w(random_walk_matrix(r));
        for (int i = 0; i < r.n; ++i)
            CHECK(w.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("bfs_distances") {
    Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}});  // node 3 isolated
    auto d = bfs_distances(g, {0}, 9);
    CHECK(d[0] == 0);
    CHECK(d[1] == 1);
    CHECK(d[2] == 2);
    CHECK(d[3] == 9);  // unreachable -> cap
    CHECK_THROWS_AS(bfs_distances(g, {}, 9), std::invalid_argument);
}

TEST_CASE("bfs_distances matches all-pairs oracle on small graphs") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + trial % 9;
        Graph g = random_graph(n, 0.25, rng);
        auto apsp = floyd_warshall_undirected(g);
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::set<int> srcs = {pick(rng), pick(rng)};
        std::vector<int> sources(srcs.begin(), srcs.end());
        for (int cap : {3, 9}) {
            auto d = bfs_distances(g, sources, cap);
            for (int i = 0; i < n; ++i) {
                int best = 1 << 20;
                for (int s : sources) best = std::min(best, apsp[s][i]);
                CHECK(d[i] == std::min(best, cap));
            }
        }
    }
}

TEST_CASE("k_truss_scores") {
    Graph tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(k_truss_scores(tri) == std::vector<int>{3, 3, 3});

    std::vector<std::pair<int, int>> k4;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) k4.emplace_back(i, j);
    CHECK(k_truss_scores(Graph::from_edges(4, std::move(k4))) ==
          std::vector<int>{4, 4, 4, 4});

    Graph path = Graph::from_edges(3, {{0, 1}, {1, 2}});
    CHECK(k_truss_scores(path) == std::vector<int>{2, 2, 2});

    Graph lonely = Graph::from_edges(2, {});
    CHECK(k_truss_scores(lonely) == std::vector<int>{0, 0});
}

TEST_CASE("k_truss_scores matches brute-force oracle") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = random_graph(3 + trial % 10, 0.4, rng);
        CHECK(k_truss_scores(g) == brute_truss_scores(g));
    }
}

TEST_CASE("sbm_generate") {
    auto [g, labels] = sbm_generate({3, 3}, 1.0, 0.0, false, 42);
    CHECK(g.n == 6);
    CHECK(g.num_edges() == 12);  // two directed 3-cliques
    for (const auto& [s, d] : g.edges) CHECK(labels[s] == labels[d]);

    auto [g2, l2] = sbm_generate({5, 5}, 0.4, 0.1, true, 7);
    auto [g3, l3] = sbm_generate({5, 5}, 0.4, 0.1, true, 7);
    CHECK(g2.edges == g3.edges);

    CHECK_THROWS_AS(sbm_generate({3}, 1.5, 0.0, false, 1),
                    std::invalid_argument);

    // binomial sanity: block of 40 at p=0.5
    auto [g4, l4] = sbm_generate({40}, 0.5, 0.0, false, 99);
    double pairs = 40.0 * 39.0 / 2.0;
    double mean = pairs * 0.5, sd = std::sqrt(pairs * 0.25);
    double undirected = g4.num_edges() / 2.0;
    CHECK(std::abs(undirected - mean) < 4.0 * sd);
}
