#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "signet/common.hpp"

namespace signet {

/// Linear soft-margin SVM trained in the primal. Serves as the discriminator
/// scoring how class-like a candidate sample is; probability output is the
/// logistic sigmoid of the signed distance to the hyperplane.
struct LinearSvm {
    Vec weights;
    double bias = 0.0;
    double regularization = 1e-2;
    std::size_t epochs = 200;
    std::uint64_t rng_seed = 0;
};

/// Pegasos-style subgradient descent on the L2-regularized hinge loss with
/// step size 1/(regularization * t). One epoch is a shuffled pass over all
/// samples; the bias is regularized together with the weights, which keeps the
/// early large steps bounded. Deterministic per seed.
inline LinearSvm train_svm(const std::vector<Vec>& positives,
                           const std::vector<Vec>& negatives,
                           double regularization = 1e-2, std::size_t epochs = 200,
                           std::uint64_t seed = 0) {
    if (positives.empty() || negatives.empty())
        throw std::invalid_argument("svm: both sides must be non-empty");
    if (!(regularization > 0.0))
        throw std::invalid_argument("svm: regularization must be > 0");
    std::size_t dim = positives.front().size();
    for (const Vec& x : positives)
        if (x.size() != dim) throw std::invalid_argument("svm: dimension mismatch");
    for (const Vec& x : negatives)
        if (x.size() != dim) throw std::invalid_argument("svm: dimension mismatch");

    std::vector<const Vec*> samples;
    std::vector<double> targets;
    for (const Vec& x : positives) {
        samples.push_back(&x);
        targets.push_back(1.0);
    }
    for (const Vec& x : negatives) {
        samples.push_back(&x);
        targets.push_back(-1.0);
    }

    LinearSvm svm;
    svm.weights.assign(dim, 0.0);
    svm.regularization = regularization;
    svm.epochs = epochs;
    svm.rng_seed = seed;

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);

    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t idx : order) {
            ++t;
            double eta = 1.0 / (regularization * static_cast<double>(t));
            const Vec& x = *samples[idx];
            double y = targets[idx];
            double margin = y * (std::inner_product(x.begin(), x.end(),
                                                    svm.weights.begin(), 0.0) +
                                 svm.bias);
            double shrink = 1.0 - eta * regularization;
            for (double& w : svm.weights) w *= shrink;
            svm.bias *= shrink;
            if (margin < 1.0) {
                for (std::size_t d = 0; d < dim; ++d) svm.weights[d] += eta * y * x[d];
                svm.bias += eta * y;
            }
        }
    }
    return svm;
}

/// (w.x + b) / ||w||; positive on the positive side of the hyperplane.
inline double signed_distance(const LinearSvm& svm, const Vec& x) {
    if (x.size() != svm.weights.size())
        throw std::invalid_argument("svm: dimension mismatch");
    double norm = std::sqrt(std::inner_product(svm.weights.begin(), svm.weights.end(),
                                               svm.weights.begin(), 0.0));
    if (norm < 1e-12) throw std::runtime_error("svm: degenerate model (zero weights)");
    double score = std::inner_product(x.begin(), x.end(), svm.weights.begin(), 0.0) +
                   svm.bias;
    return score / norm;
}

inline double probability(const LinearSvm& svm, const Vec& x) {
    return 1.0 / (1.0 + std::exp(-signed_distance(svm, x)));
}

/// Mean hinge loss over both sides (no regularization term); used to verify
/// that the soft margin tolerates contradictory data rather than diverging.
inline double hinge_loss(const LinearSvm& svm, const std::vector<Vec>& positives,
                         const std::vector<Vec>& negatives) {
    auto one_side = [&](const std::vector<Vec>& side, double y) {
        double acc = 0.0;
        for (const Vec& x : side) {
            double score = std::inner_product(x.begin(), x.end(), svm.weights.begin(),
                                              0.0) +
                           svm.bias;
            acc += std::max(0.0, 1.0 - y * score);
        }
        return acc;
    };
    double total = one_side(positives, 1.0) + one_side(negatives, -1.0);
    return total / static_cast<double>(positives.size() + negatives.size());
}

}  // namespace signet
