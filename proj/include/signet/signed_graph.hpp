#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "signet/augment.hpp"
#include "signet/geometry.hpp"

namespace signet {

struct SignedEdge {
    std::size_t source = 0;
    std::size_t target = 0;
    int phi = 1;  // +1 same-class attraction, -1 repulsion

    bool operator==(const SignedEdge&) const = default;
};

struct GraphConfig {
    std::size_t n_plus = 1;   // positive out-edges per node
    std::size_t n_minus = 4;  // negative out-edges per node
    DistanceKind distance = DistanceKind::AngularCosine;
};

/// Directed signed kNN graph over an expanded dataset. Positive edges point
/// to a node's nearest same-class originals and positive neighbors; negative
/// edges point to its nearest points among other classes and its own class's
/// negative neighbors.
struct SignedGraph {
    std::size_t node_count = 0;
    std::vector<SignedEdge> edges;
    std::vector<NodeMeta> node_meta;
};

/// Builds the graph with exactly n_plus/n_minus out-edges per node when the
/// pools allow, fewer (logged) when a pool is smaller. Nearest selection under
/// cfg.distance, ties broken by ascending node index. Throws when a node has
/// an empty negative pool while n_minus > 0.
inline SignedGraph build_graph(const ExpandedDataset& expanded, const GraphConfig& cfg) {
    std::vector<Vec> nodes = expanded.nodes();
    if (nodes.size() < 2) throw std::invalid_argument("build_graph: need at least 2 nodes");

    SignedGraph graph;
    graph.node_count = nodes.size();
    graph.node_meta = expanded.node_meta();

    bool shortfall = false;
    auto emit_nearest = [&](std::size_t i, const std::vector<std::size_t>& pool,
                            std::size_t want, int phi) {
        std::size_t take = std::min(want, pool.size());
        if (take < want) shortfall = true;
        if (take == 0) return;
        std::vector<std::pair<double, std::size_t>> ranked;
        ranked.reserve(pool.size());
        for (std::size_t j : pool)
            ranked.emplace_back(distance(cfg.distance, nodes[i], nodes[j]), j);
        std::sort(ranked.begin(), ranked.end());
        for (std::size_t k = 0; k < take; ++k)
            graph.edges.push_back({i, ranked[k].second, phi});
    };

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const NodeMeta& mi = graph.node_meta[i];
        std::vector<std::size_t> pos_pool, neg_pool;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (j == i) continue;
            const NodeMeta& mj = graph.node_meta[j];
            bool own_negative = mj.class_index == mi.class_index &&
                                mj.provenance == Provenance::NegativeNeighbor;
            if (mj.class_index != mi.class_index || own_negative) {
                neg_pool.push_back(j);
            } else {
                pos_pool.push_back(j);
            }
        }
        if (cfg.n_minus > 0 && neg_pool.empty())
            throw std::runtime_error(
                "build_graph: node " + std::to_string(i) +
                " has an empty negative pool (single class, no negative neighbors)");
        emit_nearest(i, pos_pool, cfg.n_plus, +1);
        emit_nearest(i, neg_pool, cfg.n_minus, -1);
    }
    if (shortfall)
        log_once("graph-pool-shortfall",
                 "some nodes had pools smaller than n_plus/n_minus; emitted fewer edges");
    return graph;
}

inline std::pair<std::vector<SignedEdge>, std::vector<SignedEdge>> edge_partition(
    const SignedGraph& graph) {
    std::vector<SignedEdge> positive, negative;
    for (const SignedEdge& e : graph.edges)
        (e.phi > 0 ? positive : negative).push_back(e);
    return {positive, negative};
}

/// Re-checks the structural invariants; violations are data, not errors.
inline std::vector<std::string> validate_graph(const SignedGraph& graph,
                                               const ExpandedDataset& expanded,
                                               const GraphConfig& cfg) {
    std::vector<std::string> violations;
    std::vector<NodeMeta> meta = expanded.node_meta();
    if (meta.size() != graph.node_count || meta.size() != graph.node_meta.size()) {
        violations.push_back("node count mismatch with expanded dataset");
        return violations;
    }

    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<std::size_t> out_pos(graph.node_count, 0), out_neg(graph.node_count, 0);
    for (const SignedEdge& e : graph.edges) {
        if (e.source >= graph.node_count || e.target >= graph.node_count) {
            violations.push_back("edge endpoint out of range");
            continue;
        }
        if (e.source == e.target)
            violations.push_back("self-edge at node " + std::to_string(e.source));
        if (!seen.insert({e.source, e.target}).second)
            violations.push_back("duplicate edge (" + std::to_string(e.source) + ", " +
                                 std::to_string(e.target) + ")");
        if (e.phi != 1 && e.phi != -1) {
            violations.push_back("edge weight not in {+1,-1}");
            continue;
        }
        const NodeMeta& ms = meta[e.source];
        const NodeMeta& mt = meta[e.target];
        bool own_negative = mt.class_index == ms.class_index &&
                            mt.provenance == Provenance::NegativeNeighbor;
        if (e.phi > 0) {
            ++out_pos[e.source];
            if (mt.class_index != ms.class_index || own_negative)
                violations.push_back("positive edge (" + std::to_string(e.source) + ", " +
                                     std::to_string(e.target) +
                                     ") leaves the same-class pool");
        } else {
            ++out_neg[e.source];
            if (mt.class_index == ms.class_index && !own_negative)
                violations.push_back("negative edge (" + std::to_string(e.source) + ", " +
                                     std::to_string(e.target) +
                                     ") targets same-class labeled data");
        }
    }
    for (std::size_t i = 0; i < graph.node_count; ++i) {
        if (out_pos[i] > cfg.n_plus)
            violations.push_back("node " + std::to_string(i) + " exceeds n_plus");
        if (out_neg[i] > cfg.n_minus)
            violations.push_back("node " + std::to_string(i) + " exceeds n_minus");
    }
    return violations;
}

// --- serialization ------------------------------------------------------------

/// Plain-text edge list, one `source target phi` triple per line.
inline void save_edge_list(const SignedGraph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (const SignedEdge& e : graph.edges)
        out << e.source << " " << e.target << " " << e.phi << "\n";
}

/// Node metadata sidecar: `index,class,provenance` CSV.
inline void save_node_meta(const SignedGraph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "index,class,provenance\n";
    for (std::size_t i = 0; i < graph.node_meta.size(); ++i)
        out << i << "," << graph.node_meta[i].class_index << ","
            << provenance_name(graph.node_meta[i].provenance) << "\n";
}

}  // namespace signet
