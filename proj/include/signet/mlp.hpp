#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "signet/common.hpp"

namespace signet {

/// Feedforward classifier: ReLU hidden layers followed by a linear softmax
/// head. The activation of the last hidden layer is the embedding h(x) that
/// the graph regularizer acts on.
struct MlpSpec {
    std::size_t input_dim = 0;
    std::vector<std::size_t> hidden_dims{64, 32};
    std::size_t class_count = 2;
    double dropout_rate = 0.5;
    double weight_decay = 1e-4;

    std::size_t embedding_dim() const { return hidden_dims.back(); }

    void validate() const {
        if (input_dim == 0) throw std::invalid_argument("mlp: input_dim must be > 0");
        if (class_count < 2) throw std::invalid_argument("mlp: class_count must be >= 2");
        if (hidden_dims.empty())
            throw std::invalid_argument("mlp: need at least one hidden layer");
        for (std::size_t w : hidden_dims)
            if (w == 0) throw std::invalid_argument("mlp: zero-width hidden layer");
        if (dropout_rate < 0.0 || dropout_rate >= 1.0)
            throw std::invalid_argument("mlp: dropout_rate must be in [0,1)");
        if (weight_decay < 0.0) throw std::invalid_argument("mlp: negative weight decay");
    }
};

/// Per-layer weights (fan_in x fan_out) and biases; layer L is the softmax head.
struct Params {
    std::vector<Matrix> weights;
    std::vector<Vec> biases;

    std::size_t layer_count() const { return weights.size(); }

    void scale_add(const Params& other, double factor) {
        for (std::size_t l = 0; l < weights.size(); ++l) {
            for (std::size_t i = 0; i < weights[l].data.size(); ++i)
                weights[l].data[i] += factor * other.weights[l].data[i];
            for (std::size_t i = 0; i < biases[l].size(); ++i)
                biases[l][i] += factor * other.biases[l][i];
        }
    }
};

inline std::vector<std::size_t> layer_widths(const MlpSpec& spec) {
    std::vector<std::size_t> widths{spec.input_dim};
    widths.insert(widths.end(), spec.hidden_dims.begin(), spec.hidden_dims.end());
    widths.push_back(spec.class_count);
    return widths;
}

/// Glorot-uniform weights, zero biases, deterministic per seed.
inline Params init_params(const MlpSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> widths = layer_widths(spec);
    Params params;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        std::size_t fan_in = widths[l], fan_out = widths[l + 1];
        double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> u(-bound, bound);
        Matrix w(fan_in, fan_out);
        for (double& v : w.data) v = u(rng);
        params.weights.push_back(std::move(w));
        params.biases.emplace_back(fan_out, 0.0);
    }
    return params;
}

inline Params zeros_like(const Params& params) {
    Params out;
    for (const Matrix& w : params.weights) out.weights.emplace_back(w.rows, w.cols);
    for (const Vec& b : params.biases) out.biases.emplace_back(b.size(), 0.0);
    return out;
}

enum class RunMode { Train, Eval };

struct ForwardTrace {
    Vec input;
    std::vector<Vec> pre_activations;          // per hidden layer
    std::vector<Vec> activations;              // per hidden layer, after dropout
    std::vector<std::vector<char>> dropout_masks;  // empty in eval mode
    Vec embedding;                             // == activations.back()
    Vec logits;
    Vec probabilities;
};

/// One forward pass. Train mode applies inverted dropout after each hidden
/// ReLU using a mask stream seeded by `seed`; eval mode is a pure function of
/// (params, x). Softmax is computed with max subtraction.
inline ForwardTrace forward(const MlpSpec& spec, const Params& params, const Vec& x,
                            RunMode mode, std::uint64_t seed = 0) {
    if (x.size() != spec.input_dim)
        throw std::invalid_argument("mlp: input dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("mlp: non-finite input");

    ForwardTrace trace;
    trace.input = x;
    bool dropout = mode == RunMode::Train && spec.dropout_rate > 0.0;
    std::mt19937_64 rng(dropout ? seed : 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double keep = 1.0 - spec.dropout_rate;

    const Vec* current = &x;
    for (std::size_t l = 0; l < spec.hidden_dims.size(); ++l) {
        const Matrix& w = params.weights[l];
        Vec z = params.biases[l];
        for (std::size_t i = 0; i < w.rows; ++i) {
            double xi = (*current)[i];
            if (xi == 0.0) continue;
            for (std::size_t j = 0; j < w.cols; ++j) z[j] += xi * w(i, j);
        }
        Vec a(z.size());
        for (std::size_t j = 0; j < z.size(); ++j) a[j] = std::max(0.0, z[j]);
        if (mode == RunMode::Train) {
            std::vector<char> mask(a.size(), 1);
            if (dropout) {
                for (std::size_t j = 0; j < a.size(); ++j) {
                    mask[j] = u(rng) < keep ? 1 : 0;
                    a[j] = mask[j] ? a[j] / keep : 0.0;
                }
            }
            trace.dropout_masks.push_back(std::move(mask));
        }
        trace.pre_activations.push_back(std::move(z));
        trace.activations.push_back(std::move(a));
        current = &trace.activations.back();
    }
    trace.embedding = trace.activations.back();

    const Matrix& head = params.weights.back();
    trace.logits = params.biases.back();
    for (std::size_t i = 0; i < head.rows; ++i) {
        double hi = trace.embedding[i];
        if (hi == 0.0) continue;
        for (std::size_t j = 0; j < head.cols; ++j) trace.logits[j] += hi * head(i, j);
    }
    double max_logit = *std::max_element(trace.logits.begin(), trace.logits.end());
    trace.probabilities.resize(trace.logits.size());
    double total = 0.0;
    for (std::size_t j = 0; j < trace.logits.size(); ++j) {
        trace.probabilities[j] = std::exp(trace.logits[j] - max_logit);
        total += trace.probabilities[j];
    }
    for (double& p : trace.probabilities) p /= total;
    return trace;
}

/// Loss gradients flowing into one trace. Either vector may be empty, meaning
/// zero. Probability gradients are pushed through the softmax Jacobian, so
/// pairing this with the cross-entropy gradient reproduces the usual
/// (p - onehot) logit gradient.
struct UpstreamGrad {
    Vec d_embedding;
    Vec d_probabilities;
};

/// Exact reverse-mode gradients, accumulated additively over traces; the
/// weight-decay term 2 * weight_decay * theta is added once per call.
inline Params backward(const MlpSpec& spec, const Params& params,
                       const std::vector<ForwardTrace>& traces,
                       const std::vector<UpstreamGrad>& upstreams) {
    if (traces.size() != upstreams.size())
        throw std::invalid_argument("mlp: traces/upstreams length mismatch");
    std::vector<std::size_t> widths = layer_widths(spec);
    if (params.layer_count() + 1 != widths.size())
        throw std::invalid_argument("mlp: params shape mismatch");

    Params grad = zeros_like(params);
    std::size_t hidden = spec.hidden_dims.size();
    double keep = 1.0 - spec.dropout_rate;

    for (std::size_t t = 0; t < traces.size(); ++t) {
        const ForwardTrace& trace = traces[t];
        const UpstreamGrad& up = upstreams[t];
        if (trace.pre_activations.size() != hidden ||
            trace.embedding.size() != spec.embedding_dim())
            throw std::invalid_argument("mlp: trace/params mismatch");
        if (trace.dropout_masks.size() != hidden)
            throw std::invalid_argument("mlp: backward needs train-mode traces");

        // Softmax head.
        Vec d_logits(spec.class_count, 0.0);
        if (!up.d_probabilities.empty()) {
            if (up.d_probabilities.size() != spec.class_count)
                throw std::invalid_argument("mlp: probability gradient size mismatch");
            const Vec& p = trace.probabilities;
            double inner = 0.0;
            for (std::size_t j = 0; j < p.size(); ++j)
                inner += p[j] * up.d_probabilities[j];
            for (std::size_t j = 0; j < p.size(); ++j)
                d_logits[j] = p[j] * (up.d_probabilities[j] - inner);
        }

        Matrix& head_grad = grad.weights.back();
        const Matrix& head = params.weights.back();
        Vec d_act(spec.embedding_dim(), 0.0);
        for (std::size_t i = 0; i < head.rows; ++i) {
            double hi = trace.embedding[i];
            for (std::size_t j = 0; j < head.cols; ++j) {
                head_grad(i, j) += hi * d_logits[j];
                d_act[i] += head(i, j) * d_logits[j];
            }
        }
        for (std::size_t j = 0; j < d_logits.size(); ++j)
            grad.biases.back()[j] += d_logits[j];

        if (!up.d_embedding.empty()) {
            if (up.d_embedding.size() != spec.embedding_dim())
                throw std::invalid_argument("mlp: embedding gradient size mismatch");
            for (std::size_t i = 0; i < d_act.size(); ++i) d_act[i] += up.d_embedding[i];
        }

        // Hidden layers, last to first.
        for (std::size_t l = hidden; l-- > 0;) {
            const std::vector<char>& mask = trace.dropout_masks[l];
            const Vec& z = trace.pre_activations[l];
            Vec d_z(z.size());
            bool dropout = spec.dropout_rate > 0.0;
            for (std::size_t j = 0; j < z.size(); ++j) {
                double g = d_act[j];
                if (dropout) g = mask[j] ? g / keep : 0.0;
                d_z[j] = z[j] > 0.0 ? g : 0.0;
            }
            const Vec& below = l == 0 ? trace.input : trace.activations[l - 1];
            const Matrix& w = params.weights[l];
            Matrix& w_grad = grad.weights[l];
            Vec d_below(below.size(), 0.0);
            for (std::size_t i = 0; i < w.rows; ++i) {
                double bi = below[i];
                for (std::size_t j = 0; j < w.cols; ++j) {
                    w_grad(i, j) += bi * d_z[j];
                    d_below[i] += w(i, j) * d_z[j];
                }
            }
            for (std::size_t j = 0; j < d_z.size(); ++j) grad.biases[l][j] += d_z[j];
            d_act = std::move(d_below);
        }
    }

    if (spec.weight_decay > 0.0) grad.scale_add(params, 2.0 * spec.weight_decay);
    return grad;
}

// --- parameter serialization -------------------------------------------------

/// Text format with a shape header; values round-trip exactly via %.17g.
inline void save_params(const MlpSpec& spec, const Params& params,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "signet-mlp 1\n";
    out << "input_dim " << spec.input_dim << "\n";
    out << "class_count " << spec.class_count << "\n";
    out << "hidden";
    for (std::size_t w : spec.hidden_dims) out << " " << w;
    out << "\n";
    out << "dropout_rate " << format_double(spec.dropout_rate) << "\n";
    out << "weight_decay " << format_double(spec.weight_decay) << "\n";
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        const Matrix& w = params.weights[l];
        out << "layer " << l << " " << w.rows << " " << w.cols << "\n";
        for (std::size_t i = 0; i < w.rows; ++i) {
            for (std::size_t j = 0; j < w.cols; ++j) {
                if (j) out << " ";
                out << format_double(w(i, j));
            }
            out << "\n";
        }
        out << "bias";
        for (double b : params.biases[l]) out << " " << format_double(b);
        out << "\n";
    }
}

inline std::pair<MlpSpec, Params> load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "signet-mlp" || version != 1)
        throw std::runtime_error("unrecognized model file: " + path);

    MlpSpec spec;
    spec.hidden_dims.clear();
    std::string key;
    in >> key >> spec.input_dim;
    in >> key >> spec.class_count;
    in >> key;  // "hidden"
    std::string line;
    std::getline(in, line);
    std::stringstream hs(line);
    std::size_t width;
    while (hs >> width) spec.hidden_dims.push_back(width);
    in >> key >> spec.dropout_rate;
    in >> key >> spec.weight_decay;
    spec.validate();

    Params params;
    std::size_t index, rows, cols;
    while (in >> key) {
        if (key != "layer") throw std::runtime_error("malformed model file: " + path);
        in >> index >> rows >> cols;
        Matrix w(rows, cols);
        for (double& v : w.data) in >> v;
        in >> key;  // "bias"
        Vec b(cols);
        for (double& v : b) in >> v;
        if (!in) throw std::runtime_error("truncated model file: " + path);
        params.weights.push_back(std::move(w));
        params.biases.push_back(std::move(b));
    }
    std::vector<std::size_t> widths = layer_widths(spec);
    if (params.layer_count() + 1 != widths.size())
        throw std::runtime_error("model file layer count mismatch: " + path);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l)
        if (params.weights[l].rows != widths[l] || params.weights[l].cols != widths[l + 1])
            throw std::runtime_error("model file shape mismatch: " + path);
    return {spec, params};
}

}  // namespace signet
