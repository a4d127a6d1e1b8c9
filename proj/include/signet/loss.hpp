#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "signet/geometry.hpp"
#include "signet/signed_graph.hpp"

namespace signet {

struct LossConfig {
    double lambda = 1.0;              // regularizer trade-off
    double margin = 1.0;              // minimum embedding distance across negative edges
    DistanceKind embedding_distance = DistanceKind::AngularCosine;
    bool normalize_graph_term = true;  // divide the edge sum by the edge count

    void validate() const {
        if (lambda < 0.0) throw std::invalid_argument("loss: lambda must be >= 0");
        if (!(margin > 0.0)) throw std::invalid_argument("loss: margin must be > 0");
    }
};

struct LossBreakdown {
    double classification = 0.0;  // cross-entropy over labeled nodes
    double graph = 0.0;           // signed graph regularizer
    double total = 0.0;           // classification + lambda * graph

    bool operator==(const LossBreakdown&) const = default;
};

namespace detail {

struct DistWithGrad {
    double value = 0.0;
    Vec d_a;
    Vec d_b;
};

/// Distance between embeddings together with gradients at both endpoints.
/// Near-zero-norm embeddings carry no angular information: distance 1,
/// gradient 0, logged once.
inline DistWithGrad embedding_distance_grad(DistanceKind kind, const Vec& a, const Vec& b) {
    DistWithGrad out;
    out.d_a.assign(a.size(), 0.0);
    out.d_b.assign(b.size(), 0.0);
    if (kind == DistanceKind::Euclidean) {
        double d = euclidean_distance(a, b);
        out.value = d;
        if (d > 1e-12) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                out.d_a[i] = (a[i] - b[i]) / d;
                out.d_b[i] = -out.d_a[i];
            }
        }
        return out;
    }
    double dot = 0.0, na2 = 0.0, nb2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na2 += a[i] * a[i];
        nb2 += b[i] * b[i];
    }
    double na = std::sqrt(na2), nb = std::sqrt(nb2);
    if (na < 1e-12 || nb < 1e-12) {
        log_once("regularizer-zero-norm",
                 "zero-norm embedding in graph regularizer; distance 1, gradient 0");
        out.value = 1.0;
        return out;
    }
    double inv = 1.0 / (na * nb);
    out.value = std::clamp(1.0 - dot * inv, 0.0, 2.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.d_a[i] = -inv * (b[i] - (dot / na2) * a[i]);
        out.d_b[i] = -inv * (a[i] - (dot / nb2) * b[i]);
    }
    return out;
}

}  // namespace detail

struct GraphRegularizerResult {
    double value = 0.0;
    std::vector<Vec> d_embeddings;  // one gradient per node
};

/// Signed graph regularizer: positive edges contribute their embedding
/// distance, negative edges a hinge max(0, margin - distance). The hinge
/// subgradient at the kink is 0. With normalize_graph_term the sum is divided
/// by the edge count, keeping lambda transferable across graph sizes.
inline GraphRegularizerResult graph_regularizer(const std::vector<Vec>& embeddings,
                                                const SignedGraph& graph,
                                                const LossConfig& cfg) {
    cfg.validate();
    if (embeddings.size() != graph.node_count)
        throw std::invalid_argument("graph_regularizer: embeddings/nodes mismatch");
    GraphRegularizerResult out;
    std::size_t dim = embeddings.empty() ? 0 : embeddings.front().size();
    out.d_embeddings.assign(embeddings.size(), Vec(dim, 0.0));
    if (graph.edges.empty()) return out;

    double scale = cfg.normalize_graph_term
                       ? 1.0 / static_cast<double>(graph.edges.size())
                       : 1.0;
    for (const SignedEdge& e : graph.edges) {
        auto d = detail::embedding_distance_grad(cfg.embedding_distance,
                                                 embeddings[e.source],
                                                 embeddings[e.target]);
        double sign;
        if (e.phi > 0) {
            out.value += scale * d.value;
            sign = scale;
        } else {
            double slack = cfg.margin - d.value;
            if (slack <= 0.0) continue;
            out.value += scale * slack;
            sign = -scale;
        }
        Vec& gs = out.d_embeddings[e.source];
        Vec& gt = out.d_embeddings[e.target];
        for (std::size_t i = 0; i < dim; ++i) {
            gs[i] += sign * d.d_a[i];
            gt[i] += sign * d.d_b[i];
        }
    }
    return out;
}

struct CrossEntropyResult {
    double value = 0.0;
    std::vector<Vec> d_probabilities;  // one gradient per sample
};

/// Mean negative log-likelihood over the given samples. Probabilities at the
/// true class are clamped to 1e-12 (logged) to keep the value finite.
inline CrossEntropyResult cross_entropy(const std::vector<Vec>& probabilities,
                                        const std::vector<int>& labels) {
    if (probabilities.size() != labels.size())
        throw std::invalid_argument("cross_entropy: length mismatch");
    if (probabilities.empty()) throw std::invalid_argument("cross_entropy: empty input");
    CrossEntropyResult out;
    double n = static_cast<double>(probabilities.size());
    out.d_probabilities.reserve(probabilities.size());
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const Vec& p = probabilities[i];
        int y = labels[i];
        if (y < 0 || static_cast<std::size_t>(y) >= p.size())
            throw std::invalid_argument("cross_entropy: label out of range");
        double py = p[static_cast<std::size_t>(y)];
        if (py < 1e-12) {
            log_once("cross-entropy-clamp",
                     "probability at true class clamped to 1e-12 in cross-entropy");
            py = 1e-12;
        }
        out.value += -std::log(py) / n;
        Vec g(p.size(), 0.0);
        g[static_cast<std::size_t>(y)] = -1.0 / (n * py);
        out.d_probabilities.push_back(std::move(g));
    }
    return out;
}

struct JointLossResult {
    LossBreakdown breakdown;
    std::vector<Vec> d_embeddings;     // per node, already scaled by lambda
    std::vector<Vec> d_probabilities;  // per node; empty vec for unlabeled nodes
};

/// Composes the two terms over per-node model outputs. Nodes with
/// labeled[i] == 0 (negative neighbors) are excluded from the classification
/// term but keep their graph edges. lambda == 0 skips graph work entirely.
inline JointLossResult joint_loss(const std::vector<Vec>& embeddings,
                                  const std::vector<Vec>& probabilities,
                                  const std::vector<int>& labels,
                                  const std::vector<char>& labeled,
                                  const SignedGraph& graph, const LossConfig& cfg) {
    cfg.validate();
    if (probabilities.size() != labels.size() || labels.size() != labeled.size() ||
        embeddings.size() != labels.size())
        throw std::invalid_argument("joint_loss: per-node input length mismatch");

    JointLossResult out;
    out.d_probabilities.assign(probabilities.size(), Vec{});

    std::vector<Vec> labeled_probs;
    std::vector<int> labeled_labels;
    std::vector<std::size_t> labeled_index;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labeled[i]) continue;
        labeled_probs.push_back(probabilities[i]);
        labeled_labels.push_back(labels[i]);
        labeled_index.push_back(i);
    }
    CrossEntropyResult ce = cross_entropy(labeled_probs, labeled_labels);
    out.breakdown.classification = ce.value;
    for (std::size_t k = 0; k < labeled_index.size(); ++k)
        out.d_probabilities[labeled_index[k]] = std::move(ce.d_probabilities[k]);

    if (cfg.lambda > 0.0) {
        GraphRegularizerResult reg = graph_regularizer(embeddings, graph, cfg);
        out.breakdown.graph = reg.value;
        out.d_embeddings = std::move(reg.d_embeddings);
        for (Vec& g : out.d_embeddings)
            for (double& v : g) v *= cfg.lambda;
        out.breakdown.total = out.breakdown.classification + cfg.lambda * out.breakdown.graph;
    } else {
        std::size_t dim = embeddings.empty() ? 0 : embeddings.front().size();
        out.d_embeddings.assign(embeddings.size(), Vec(dim, 0.0));
        out.breakdown.total = out.breakdown.classification;
    }
    return out;
}

}  // namespace signet
