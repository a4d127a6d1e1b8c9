#pragma once

// Classifier-only training loop: a copy of signet::fit with every trace of the
// graph regularizer code path physically removed. Used to confirm that running
// the full trainer with lambda = 0 is bitwise-identical to not having the
// regularizer at all.

#include <random>
#include <set>
#include <vector>

#include "signet/trainer.hpp"

namespace signet_testing {

inline signet::FitResult fit_classifier_only(const signet::ExpandedDataset& expanded,
                                             const signet::MlpSpec& spec,
                                             const signet::TrainConfig& cfg,
                                             const signet::Dataset* test = nullptr) {
    using namespace signet;
    spec.validate();
    cfg.validate();

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
    std::vector<std::size_t> labeled_batch;

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

            std::set<std::size_t> involved_set(labeled_batch.begin(), labeled_batch.end());
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
            double class_loss = 0.0;
            double inv_batch = 1.0 / static_cast<double>(labeled_batch.size());
            for (std::size_t i : labeled_batch) {
                const ForwardTrace& trace = traces[slot_of[i]];
                double py = trace.probabilities[static_cast<std::size_t>(labels[i])];
                if (py < 1e-12) py = 1e-12;
                class_loss += -std::log(py) * inv_batch;
                UpstreamGrad& up = upstreams[slot_of[i]];
                if (up.d_probabilities.empty())
                    up.d_probabilities.assign(spec.class_count, 0.0);
                up.d_probabilities[static_cast<std::size_t>(labels[i])] -=
                    inv_batch / py;
            }

            double total_loss = class_loss;
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
            std::vector<Vec> labeled_probs;
            std::vector<int> labeled_labels, predicted;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                ForwardTrace trace = forward(spec, params, nodes[i], RunMode::Eval);
                if (!labeled[i]) continue;
                std::size_t best = 0;
                for (std::size_t c = 1; c < trace.probabilities.size(); ++c)
                    if (trace.probabilities[c] > trace.probabilities[best]) best = c;
                predicted.push_back(static_cast<int>(best));
                labeled_labels.push_back(labels[i]);
                labeled_probs.push_back(std::move(trace.probabilities));
            }
            row.losses.classification = cross_entropy(labeled_probs, labeled_labels).value;
            row.losses.total = row.losses.classification;
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
    return {std::move(params), std::move(report)};
}

}  // namespace signet_testing
