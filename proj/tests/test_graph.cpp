#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "signet/signed_graph.hpp"

using namespace signet;

namespace {

// Independent quadratic-time construction used as the oracle: for each node,
// rank every other node by (distance, index) and pick pool members directly.
std::vector<SignedEdge> brute_force_edges(const ExpandedDataset& expanded,
                                          const GraphConfig& cfg) {
    std::vector<Vec> nodes = expanded.nodes();
    std::vector<NodeMeta> meta = expanded.node_meta();
    std::vector<SignedEdge> edges;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::vector<std::pair<double, std::size_t>> ranked;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (j == i) continue;
            ranked.emplace_back(distance(cfg.distance, nodes[i], nodes[j]), j);
        }
        std::sort(ranked.begin(), ranked.end());
        std::size_t taken_pos = 0, taken_neg = 0;
        for (const auto& [d, j] : ranked) {
            bool own_negative = meta[j].class_index == meta[i].class_index &&
                                meta[j].provenance == Provenance::NegativeNeighbor;
            bool negative_pool = meta[j].class_index != meta[i].class_index || own_negative;
            if (!negative_pool && taken_pos < cfg.n_plus) ++taken_pos;
            else if (negative_pool && taken_neg < cfg.n_minus) ++taken_neg;
        }
        // Re-walk to emit positives before negatives in ranked order, matching
        // nothing in particular about the implementation: edge sets are
        // compared as sorted multisets.
        std::size_t p = 0, n = 0;
        for (const auto& [d, j] : ranked) {
            bool own_negative = meta[j].class_index == meta[i].class_index &&
                                meta[j].provenance == Provenance::NegativeNeighbor;
            bool negative_pool = meta[j].class_index != meta[i].class_index || own_negative;
            if (!negative_pool && p < taken_pos) {
                edges.push_back({i, j, +1});
                ++p;
            } else if (negative_pool && n < taken_neg) {
                edges.push_back({i, j, -1});
                ++n;
            }
        }
    }
    return edges;
}

std::vector<std::tuple<std::size_t, std::size_t, int>> canonical(
    std::vector<SignedEdge> edges) {
    std::vector<std::tuple<std::size_t, std::size_t, int>> out;
    for (const SignedEdge& e : edges) out.emplace_back(e.source, e.target, e.phi);
    std::sort(out.begin(), out.end());
    return out;
}

ExpandedDataset random_expanded(std::uint64_t seed, std::size_t per_class,
                                std::size_t generated) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto point = [&] { return Vec{u(rng), u(rng), u(rng)}; };
    ExpandedDataset out;
    out.classes.resize(2);
    for (ExpandedClass& cls : out.classes) {
        for (std::size_t i = 0; i < per_class; ++i) cls.originals.push_back(point());
        for (std::size_t i = 0; i < generated; ++i) cls.positives.push_back(point());
        for (std::size_t i = 0; i < generated; ++i) cls.negatives.push_back(point());
    }
    return out;
}

}  // namespace

TEST_CASE("well separated 2x2 nodes wire to partner and nearest rival", "[graph]") {
    // Class 0 along +x, class 1 along +y; angular distance then pairs each node
    // with its same-direction partner.
    ExpandedDataset expanded;
    expanded.classes.resize(2);
    expanded.classes[0].originals = {{10.0, 0.1}, {9.0, 0.2}};
    expanded.classes[1].originals = {{0.1, 10.0}, {0.3, 9.0}};
    GraphConfig cfg;
    cfg.n_plus = 1;
    cfg.n_minus = 1;

    SignedGraph g = build_graph(expanded, cfg);
    REQUIRE(g.edges.size() == 8);
    REQUIRE(canonical(g.edges) == canonical(brute_force_edges(expanded, cfg)));

    // Spot checks: node 0's positive edge goes to node 1, its negative edge to
    // the angularly closest rival (node 3, whose direction tilts toward x).
    auto [pos, neg] = edge_partition(g);
    REQUIRE(pos[0].source == 0);
    REQUIRE(pos[0].target == 1);
    REQUIRE(neg[0].source == 0);
    REQUIRE(neg[0].target == 3);
}

TEST_CASE("zero edge budgets give an empty edge list", "[graph]") {
    ExpandedDataset expanded = random_expanded(4, 5, 2);
    GraphConfig cfg;
    cfg.n_plus = 0;
    cfg.n_minus = 0;
    SignedGraph g = build_graph(expanded, cfg);
    REQUIRE(g.edges.empty());
    REQUIRE(g.node_count == expanded.total_size());
}

TEST_CASE("build matches the quadratic oracle on random expanded datasets", "[graph]") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        ExpandedDataset expanded = random_expanded(seed, 40, 8);
        GraphConfig cfg;
        cfg.n_plus = 1;
        cfg.n_minus = 4;
        SignedGraph g = build_graph(expanded, cfg);
        REQUIRE(canonical(g.edges) == canonical(brute_force_edges(expanded, cfg)));
        REQUIRE(validate_graph(g, expanded, cfg).empty());
    }
}

TEST_CASE("graph construction is deterministic", "[graph]") {
    ExpandedDataset expanded = random_expanded(11, 30, 6);
    GraphConfig cfg;
    SignedGraph a = build_graph(expanded, cfg);
    SignedGraph b = build_graph(expanded, cfg);
    REQUIRE(a.edges == b.edges);
}

TEST_CASE("edge partition splits and merges back", "[graph]") {
    ExpandedDataset expanded = random_expanded(2, 10, 3);
    GraphConfig cfg;
    cfg.n_plus = 1;
    cfg.n_minus = 2;
    SignedGraph g = build_graph(expanded, cfg);
    auto [pos, neg] = edge_partition(g);
    REQUIRE(pos.size() + neg.size() == g.edges.size());
    for (const SignedEdge& e : pos) REQUIRE(e.phi == 1);
    for (const SignedEdge& e : neg) REQUIRE(e.phi == -1);

    std::vector<SignedEdge> merged = pos;
    merged.insert(merged.end(), neg.begin(), neg.end());
    REQUIRE(canonical(merged) == canonical(g.edges));

    SignedGraph empty;
    empty.node_count = 2;
    auto [p2, n2] = edge_partition(empty);
    REQUIRE(p2.empty());
    REQUIRE(n2.empty());
}

TEST_CASE("validate flags hand-made violations", "[graph]") {
    ExpandedDataset expanded = random_expanded(5, 8, 2);
    GraphConfig cfg;
    cfg.n_plus = 1;
    cfg.n_minus = 2;
    SignedGraph g = build_graph(expanded, cfg);
    REQUIRE(validate_graph(g, expanded, cfg).empty());

    SignedGraph self = g;
    self.edges.push_back({3, 3, +1});
    auto v1 = validate_graph(self, expanded, cfg);
    REQUIRE_FALSE(v1.empty());
    bool names_node = false;
    for (const std::string& v : v1)
        if (v.find("self-edge") != std::string::npos && v.find("3") != std::string::npos)
            names_node = true;
    REQUIRE(names_node);

    // A positive edge from class 0 into class 1 territory.
    std::size_t other_class_node = expanded.classes[0].size();  // first node of class 1
    SignedGraph cross = g;
    cross.edges.push_back({0, other_class_node, +1});
    auto v2 = validate_graph(cross, expanded, cfg);
    bool names_edge = false;
    for (const std::string& v : v2)
        if (v.find("positive edge") != std::string::npos &&
            v.find("(0, " + std::to_string(other_class_node) + ")") != std::string::npos)
            names_edge = true;
    REQUIRE(names_edge);
}

TEST_CASE("single class with no negatives cannot satisfy n_minus", "[graph]") {
    ExpandedDataset expanded;
    expanded.classes.resize(1);
    expanded.classes[0].originals = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    GraphConfig cfg;
    cfg.n_plus = 1;
    cfg.n_minus = 1;
    REQUIRE_THROWS_AS(build_graph(expanded, cfg), std::runtime_error);

    cfg.n_minus = 0;
    SignedGraph g = build_graph(expanded, cfg);
    REQUIRE(g.edges.size() == 3);  // one positive edge per node
}

TEST_CASE("own negative neighbors join the negative pool as sources and targets",
          "[graph]") {
    ExpandedDataset expanded;
    expanded.classes.resize(2);
    expanded.classes[0].originals = {{5.0, 0.0}, {4.0, 0.5}};
    expanded.classes[0].negatives = {{4.5, 0.3}};
    expanded.classes[1].originals = {{0.0, 5.0}, {0.5, 4.0}};
    GraphConfig cfg;
    cfg.n_plus = 1;
    cfg.n_minus = 1;
    SignedGraph g = build_graph(expanded, cfg);
    REQUIRE(canonical(g.edges) == canonical(brute_force_edges(expanded, cfg)));

    // The class-0 negative neighbor (node 2) emits edges too, and class-0
    // originals can take it as their nearest negative target.
    bool node2_has_out = false, node2_is_negative_target = false;
    for (const SignedEdge& e : g.edges) {
        if (e.source == 2) node2_has_out = true;
        if (e.target == 2 && e.phi == -1 && e.source < 2) node2_is_negative_target = true;
    }
    REQUIRE(node2_has_out);
    REQUIRE(node2_is_negative_target);
}
