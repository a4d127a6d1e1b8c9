#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "signet/augment.hpp"
#include "signet/loss.hpp"
#include "signet/metrics.hpp"
#include "signet/mlp.hpp"
#include "signet/signed_graph.hpp"

namespace signet {

enum class Optimizer { Sgd, SgdMomentum };

struct StepInfo {
    std::size_t step = 0;
    const std::vector<std::size_t>& labeled_batch;
    const std::vector<std::size_t>& edge_batch;
};

struct TrainConfig {
    std::size_t epochs = 300;
    std::size_t batch_edges = 64;  // per-step batch size for nodes and edges
    bool full_batch = false;
    double learning_rate = 1e-2;
    Optimizer optimizer = Optimizer::SgdMomentum;
    double momentum = 0.9;
    std::uint64_t rng_seed = 0;
    std::size_t eval_every = 10;
    std::function<void(const StepInfo&)> step_observer;  // test instrumentation

    void validate() const {
        if (epochs == 0) throw std::invalid_argument("train: epochs must be >= 1");
        if (!(learning_rate >= 0.0))
            throw std::invalid_argument("train: learning rate must be >= 0");
        if (!full_batch && batch_edges == 0)
            throw std::invalid_argument("train: batch_edges must be > 0");
        if (eval_every == 0) throw std::invalid_argument("train: eval_every must be >= 1");
    }
};

struct ReportRow {
    std::size_t epoch = 0;
    LossBreakdown losses;
    double train_accuracy = 0.0;
    std::optional<double> test_accuracy;
    std::optional<double> test_auc;

    bool operator==(const ReportRow&) const = default;
};

struct TrainReport {
    std::vector<ReportRow> rows;
    double wall_clock_seconds = 0.0;  // informational; excluded from comparisons
};

struct FitResult {
    Params params;
    TrainReport report;
};

/// Thrown when the joint loss stops being finite.
struct DivergenceError : std::runtime_error {
    std::size_t step;
    explicit DivergenceError(std::size_t at)
        : std::runtime_error("training diverged at step " + std::to_string(at)),
          step(at) {}
};

/// Eval-mode accuracy and, for two-class data, ROC-AUC with the probability of
/// class 1 as the score. AUC is absent for other class counts or single-class
/// label vectors.
inline std::pair<double, std::optional<double>> evaluate(const MlpSpec& spec,
                                                         const Params& params,
                                                         const Dataset& ds) {
    check_dataset(ds);
    std::vector<int> predicted;
    std::vector<double> scores;
    predicted.reserve(ds.size());
    scores.reserve(ds.size());
    for (const Vec& x : ds.samples) {
        ForwardTrace trace = forward(spec, params, x, RunMode::Eval);
        std::size_t best = 0;
        for (std::size_t c = 1; c < trace.probabilities.size(); ++c)
            if (trace.probabilities[c] > trace.probabilities[best]) best = c;
        predicted.push_back(static_cast<int>(best));
        if (spec.class_count == 2) scores.push_back(trace.probabilities[1]);
    }
    double acc = accuracy(predicted, ds.labels);
    std::optional<double> auc;
    if (spec.class_count == 2 && ds.class_count == 2) {
        bool has0 = false, has1 = false;
        for (int y : ds.labels) (y == 0 ? has0 : has1) = true;
        if (has0 && has1) auc = roc_auc(scores, ds.labels);
    }
    return {acc, auc};
}

/// Minimizes classification loss plus lambda times the graph regularizer by
/// mini-batch gradient descent. Each step samples a batch of labeled nodes and
/// a batch of edges, runs one train-mode forward per involved node, combines
/// the two gradients, and updates the parameters. Deterministic per
/// cfg.rng_seed. When lambda is 0 (or the graph is absent/empty) the
/// regularizer path is skipped entirely, including its RNG draws.
inline FitResult fit(const ExpandedDataset& expanded, const SignedGraph* graph,
                     const MlpSpec& spec, const LossConfig& loss_cfg,
                     const TrainConfig& cfg, const Dataset* test = nullptr) {
    spec.validate();
    loss_cfg.validate();
    cfg.validate();
    auto start = std::chrono::steady_clock::now();

    const std::vector<Vec> nodes = expanded.nodes();
    const std::vector<NodeMeta> meta = expanded.node_meta();
    if (nodes.empty()) throw std::invalid_argument("fit: empty dataset");

    std::vector<int> labels(nodes.size());
    std::vector<char> labeled(nodes.size());
    std::vector<std::size_t> labeled_nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        labels[i] = meta[i].class_index;
        labeled[i] = meta[i].provenance != Provenance::NegativeNeighbor;
        if (labeled[i]) labeled_nodes.push_back(i);
    }
    if (labeled_nodes.empty()) throw std::invalid_argument("fit: no labeled nodes");

    bool use_reg = loss_cfg.lambda > 0.0 && graph != nullptr && !graph->edges.empty();
    if (use_reg && graph->node_count != nodes.size())
        throw std::invalid_argument("fit: graph nodes do not align with the dataset");

    Params params = init_params(spec, mix_seed(cfg.rng_seed, 1));
    Params velocity = zeros_like(params);
    std::mt19937_64 batch_rng(mix_seed(cfg.rng_seed, 2));

    std::size_t steps_per_epoch =
        cfg.full_batch ? 1
                       : std::max<std::size_t>(
                             1, (labeled_nodes.size() + cfg.batch_edges - 1) /
                                    cfg.batch_edges);

    TrainReport report;
    std::size_t step = 0;
    std::vector<std::size_t> labeled_batch, edge_batch;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (std::size_t s = 0; s < steps_per_epoch; ++s) {
            ++step;

            labeled_batch.clear();
            if (cfg.full_batch) {
                labeled_batch = labeled_nodes;
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, labeled_nodes.size() - 1);
                for (std::size_t i = 0; i < cfg.batch_edges; ++i)
                    labeled_batch.push_back(labeled_nodes[pick(batch_rng)]);
            }
            edge_batch.clear();
            if (use_reg) {
                if (cfg.full_batch) {
                    edge_batch.resize(graph->edges.size());
                    for (std::size_t i = 0; i < edge_batch.size(); ++i) edge_batch[i] = i;
                } else {
                    std::uniform_int_distribution<std::size_t> pick(0, graph->edges.size() - 1);
                    for (std::size_t i = 0; i < cfg.batch_edges; ++i)
                        edge_batch.push_back(pick(batch_rng));
                }
            }
            if (cfg.step_observer) cfg.step_observer({step, labeled_batch, edge_batch});

            std::set<std::size_t> involved_set(labeled_batch.begin(), labeled_batch.end());
            for (std::size_t e : edge_batch) {
                involved_set.insert(graph->edges[e].source);
                involved_set.insert(graph->edges[e].target);
            }
            std::vector<std::size_t> involved(involved_set.begin(), involved_set.end());
            std::vector<std::size_t> slot_of(nodes.size(), 0);
            std::vector<ForwardTrace> traces;
            traces.reserve(involved.size());
            for (std::size_t k = 0; k < involved.size(); ++k) {
                std::size_t i = involved[k];
                slot_of[i] = k;
                traces.push_back(forward(spec, params, nodes[i], RunMode::Train,
                                         mix_seed(cfg.rng_seed, 3, step, i)));
            }

            std::vector<UpstreamGrad> upstreams(involved.size());

            // Classification term over the labeled batch.
            double class_loss = 0.0;
            double inv_batch = 1.0 / static_cast<double>(labeled_batch.size());
            for (std::size_t i : labeled_batch) {
                const ForwardTrace& trace = traces[slot_of[i]];
                double py = trace.probabilities[static_cast<std::size_t>(labels[i])];
                if (py < 1e-12) {
                    log_once("train-ce-clamp", "probability clamped during training");
                    py = 1e-12;
                }
                class_loss += -std::log(py) * inv_batch;
                UpstreamGrad& up = upstreams[slot_of[i]];
                if (up.d_probabilities.empty())
                    up.d_probabilities.assign(spec.class_count, 0.0);
                up.d_probabilities[static_cast<std::size_t>(labels[i])] -=
                    inv_batch / py;
            }

            double graph_loss = 0.0;
            double total_loss = class_loss;
            if (use_reg) {
                // Per-edge weight making the batch an unbiased estimate of the
                // configured (normalized or raw) regularizer.
                double edge_weight =
                    loss_cfg.normalize_graph_term
                        ? 1.0 / static_cast<double>(edge_batch.size())
                        : static_cast<double>(graph->edges.size()) /
                              static_cast<double>(edge_batch.size());
                for (std::size_t e : edge_batch) {
                    const SignedEdge& edge = graph->edges[e];
                    const ForwardTrace& ts = traces[slot_of[edge.source]];
                    const ForwardTrace& tt = traces[slot_of[edge.target]];
                    auto d = detail::embedding_distance_grad(
                        loss_cfg.embedding_distance, ts.embedding, tt.embedding);
                    double sign;
                    if (edge.phi > 0) {
                        graph_loss += edge_weight * d.value;
                        sign = edge_weight;
                    } else {
                        double slack = loss_cfg.margin - d.value;
                        if (slack <= 0.0) continue;
                        graph_loss += edge_weight * slack;
                        sign = -edge_weight;
                    }
                    UpstreamGrad& us = upstreams[slot_of[edge.source]];
                    UpstreamGrad& ut = upstreams[slot_of[edge.target]];
                    if (us.d_embedding.empty())
                        us.d_embedding.assign(spec.embedding_dim(), 0.0);
                    if (ut.d_embedding.empty())
                        ut.d_embedding.assign(spec.embedding_dim(), 0.0);
                    double scale = loss_cfg.lambda * sign;
                    for (std::size_t i = 0; i < spec.embedding_dim(); ++i) {
                        us.d_embedding[i] += scale * d.d_a[i];
                        ut.d_embedding[i] += scale * d.d_b[i];
                    }
                }
                total_loss = class_loss + loss_cfg.lambda * graph_loss;
            }
            if (!std::isfinite(total_loss)) throw DivergenceError(step);

            Params grads = backward(spec, params, traces, upstreams);
            if (cfg.optimizer == Optimizer::SgdMomentum) {
                for (std::size_t l = 0; l < params.layer_count(); ++l) {
                    for (std::size_t i = 0; i < params.weights[l].data.size(); ++i) {
                        double& v = velocity.weights[l].data[i];
                        v = cfg.momentum * v -
                            cfg.learning_rate * grads.weights[l].data[i];
                        params.weights[l].data[i] += v;
                    }
                    for (std::size_t i = 0; i < params.biases[l].size(); ++i) {
                        double& v = velocity.biases[l][i];
                        v = cfg.momentum * v - cfg.learning_rate * grads.biases[l][i];
                        params.biases[l][i] += v;
                    }
                }
            } else {
                params.scale_add(grads, -cfg.learning_rate);
            }
        }

        if (epoch % cfg.eval_every == 0 || epoch == cfg.epochs) {
            ReportRow row;
            row.epoch = epoch;

            std::vector<Vec> embeddings(nodes.size());
            std::vector<Vec> labeled_probs;
            std::vector<int> labeled_labels, predicted;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                ForwardTrace trace = forward(spec, params, nodes[i], RunMode::Eval);
                embeddings[i] = std::move(trace.embedding);
                if (!labeled[i]) continue;
                std::size_t best = 0;
                for (std::size_t c = 1; c < trace.probabilities.size(); ++c)
                    if (trace.probabilities[c] > trace.probabilities[best]) best = c;
                predicted.push_back(static_cast<int>(best));
                labeled_labels.push_back(labels[i]);
                labeled_probs.push_back(std::move(trace.probabilities));
            }
            row.losses.classification = cross_entropy(labeled_probs, labeled_labels).value;
            if (use_reg) {
                row.losses.graph = graph_regularizer(embeddings, *graph, loss_cfg).value;
                row.losses.total =
                    row.losses.classification + loss_cfg.lambda * row.losses.graph;
            } else {
                row.losses.total = row.losses.classification;
            }
            row.train_accuracy = accuracy(predicted, labeled_labels);
            if (test) {
                auto [acc, auc] = evaluate(spec, params, *test);
                row.test_accuracy = acc;
                row.test_auc = auc;
            }
            if (!std::isfinite(row.losses.total)) throw DivergenceError(step);
            report.rows.push_back(std::move(row));
        }
    }

    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(params), std::move(report)};
}

}  // namespace signet
