#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "signet/common.hpp"

namespace signet {

/// Feature vectors with dense integer class labels in {0, ..., class_count-1}.
struct Dataset {
    std::vector<Vec> samples;
    std::vector<int> labels;
    int class_count = 0;

    std::size_t size() const { return samples.size(); }
    std::size_t dim() const { return samples.empty() ? 0 : samples.front().size(); }
};

inline void check_dataset(const Dataset& ds) {
    if (ds.samples.size() != ds.labels.size())
        throw std::invalid_argument("dataset: samples/labels length mismatch");
    if (ds.samples.empty()) throw std::invalid_argument("dataset: empty");
    std::size_t dim = ds.samples.front().size();
    if (dim == 0) throw std::invalid_argument("dataset: zero-dimensional samples");
    for (const Vec& s : ds.samples) {
        if (s.size() != dim) throw std::invalid_argument("dataset: ragged sample dimensions");
        for (double v : s)
            if (!std::isfinite(v)) throw std::invalid_argument("dataset: non-finite feature");
    }
    for (int y : ds.labels)
        if (y < 0 || y >= ds.class_count)
            throw std::invalid_argument("dataset: label out of range");
}

/// Per-class index lists; disjoint and jointly covering the dataset.
struct ClassPartition {
    std::vector<std::vector<std::size_t>> indices;  // indices[c] ascending

    std::size_t class_count() const { return indices.size(); }
};

inline ClassPartition partition_by_class(const Dataset& ds) {
    ClassPartition part;
    part.indices.resize(static_cast<std::size_t>(ds.class_count));
    for (std::size_t i = 0; i < ds.size(); ++i)
        part.indices[static_cast<std::size_t>(ds.labels[i])].push_back(i);
    return part;
}

/// All samples with the given label, in dataset order.
inline std::vector<Vec> class_samples(const Dataset& ds, int label) {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds.labels[i] == label) out.push_back(ds.samples[i]);
    return out;
}

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t rng_seed = 0;
};

namespace detail {

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline bool parse_double(const std::string& token, double& out) {
    if (token.empty()) return false;
    char* end = nullptr;
    out = std::strtod(token.c_str(), &end);
    return end == token.c_str() + token.size() && std::isfinite(out);
}

inline bool parse_int(const std::string& token, long& out) {
    if (token.empty()) return false;
    char* end = nullptr;
    out = std::strtol(token.c_str(), &end, 10);
    return end == token.c_str() + token.size();
}

}  // namespace detail

/// Loads a comma-separated, header-first CSV. Non-label columns must be finite
/// numerics. Label values are used verbatim when they already form a dense
/// 0..C-1 integer set, otherwise they are mapped to class indices in
/// first-appearance order.
inline Dataset load_csv(const std::string& path, const std::string& label_column = "label") {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty file: " + path);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    std::vector<std::string> columns = detail::split_line(header);

    std::size_t label_idx = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == label_column) label_idx = i;
    if (label_idx == columns.size())
        throw std::runtime_error("label column '" + label_column + "' not found in " + path);
    if (columns.size() < 2)
        throw std::runtime_error("no feature columns in " + path);

    Dataset ds;
    std::vector<std::string> raw_labels;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::vector<std::string> fields = detail::split_line(line);
        if (fields.size() != columns.size())
            throw std::runtime_error("row " + std::to_string(row) + ": expected " +
                                     std::to_string(columns.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        Vec features;
        features.reserve(columns.size() - 1);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == label_idx) continue;
            double v = 0.0;
            if (!detail::parse_double(fields[i], v))
                throw std::runtime_error("non-numeric feature at row " + std::to_string(row) +
                                         ", column " + columns[i] + ": '" + fields[i] + "'");
            features.push_back(v);
        }
        ds.samples.push_back(std::move(features));
        raw_labels.push_back(fields[label_idx]);
    }
    if (ds.samples.empty()) throw std::runtime_error("empty file: " + path);

    // Dense integer labels pass through; anything else maps by first appearance.
    bool dense_ints = true;
    long max_label = -1;
    std::unordered_map<std::string, int> distinct;
    for (const std::string& token : raw_labels) {
        long v = 0;
        if (!detail::parse_int(token, v) || v < 0) {
            dense_ints = false;
            break;
        }
        max_label = std::max(max_label, v);
        distinct.emplace(token, 0);
    }
    if (dense_ints && max_label + 1 == static_cast<long>(distinct.size())) {
        for (const std::string& token : raw_labels) {
            long v = 0;
            detail::parse_int(token, v);
            ds.labels.push_back(static_cast<int>(v));
        }
        ds.class_count = static_cast<int>(max_label + 1);
    } else {
        std::unordered_map<std::string, int> mapping;
        for (const std::string& token : raw_labels) {
            auto [it, inserted] = mapping.emplace(token, static_cast<int>(mapping.size()));
            ds.labels.push_back(it->second);
        }
        ds.class_count = static_cast<int>(mapping.size());
    }
    check_dataset(ds);
    return ds;
}

inline void save_csv(const Dataset& ds, const std::string& path,
                     const std::string& label_column = "label") {
    check_dataset(ds);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (std::size_t d = 0; d < ds.dim(); ++d) out << "f" << d << ",";
    out << label_column << "\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (double v : ds.samples[i]) out << format_double(v) << ",";
        out << ds.labels[i] << "\n";
    }
}

/// Two concentric noisy annuli in the plane; class 0 on the inner band,
/// class 1 on the outer. Deterministic per seed.
inline Dataset generate_two_annuli(std::size_t n_per_class, double inner_radius,
                                   double outer_radius, double thickness,
                                   double noise_sd, std::uint64_t seed) {
    if (!(inner_radius > 0.0) || !(inner_radius < outer_radius))
        throw std::invalid_argument("two-annuli: need 0 < inner_radius < outer_radius");
    if (!(thickness > 0.0)) throw std::invalid_argument("two-annuli: thickness must be > 0");
    if (noise_sd < 0.0) throw std::invalid_argument("two-annuli: noise_sd must be >= 0");
    if (n_per_class == 0) throw std::invalid_argument("two-annuli: n_per_class must be >= 1");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> noise(0.0, 1.0);

    Dataset ds;
    ds.class_count = 2;
    for (int cls = 0; cls < 2; ++cls) {
        double base = cls == 0 ? inner_radius : outer_radius;
        std::uniform_real_distribution<double> radius(base, base + thickness);
        for (std::size_t i = 0; i < n_per_class; ++i) {
            double theta = angle(rng);
            double r = radius(rng);
            Vec point{r * std::cos(theta), r * std::sin(theta)};
            if (noise_sd > 0.0) {
                point[0] += noise_sd * noise(rng);
                point[1] += noise_sd * noise(rng);
            }
            ds.samples.push_back(std::move(point));
            ds.labels.push_back(cls);
        }
    }
    return ds;
}

/// Per-feature affine map fitted on training data: x' = (x - mean) / sd with
/// population sd; constant features (sd == 0) map to exactly 0.
struct FeatureScaler {
    Vec mean;
    Vec sd;  // 0 marks a constant feature

    Vec apply(const Vec& x) const {
        if (x.size() != mean.size())
            throw std::invalid_argument("scaler: dimension mismatch");
        Vec out(x.size());
        for (std::size_t d = 0; d < x.size(); ++d)
            out[d] = sd[d] > 0.0 ? (x[d] - mean[d]) / sd[d] : 0.0;
        return out;
    }

    Vec invert(const Vec& x) const {
        if (x.size() != mean.size())
            throw std::invalid_argument("scaler: dimension mismatch");
        Vec out(x.size());
        for (std::size_t d = 0; d < x.size(); ++d) out[d] = x[d] * sd[d] + mean[d];
        return out;
    }

    Dataset apply(const Dataset& ds) const {
        Dataset out = ds;
        for (Vec& s : out.samples) s = apply(s);
        return out;
    }
};

inline std::pair<Dataset, FeatureScaler> normalize_features(const Dataset& ds) {
    check_dataset(ds);
    if (ds.size() < 2) throw std::invalid_argument("normalize_features: need n >= 2");
    std::size_t dim = ds.dim();
    FeatureScaler scaler;
    scaler.mean.assign(dim, 0.0);
    scaler.sd.assign(dim, 0.0);
    double n = static_cast<double>(ds.size());
    for (const Vec& s : ds.samples)
        for (std::size_t d = 0; d < dim; ++d) scaler.mean[d] += s[d];
    for (std::size_t d = 0; d < dim; ++d) scaler.mean[d] /= n;
    for (const Vec& s : ds.samples)
        for (std::size_t d = 0; d < dim; ++d) {
            double c = s[d] - scaler.mean[d];
            scaler.sd[d] += c * c;
        }
    for (std::size_t d = 0; d < dim; ++d) scaler.sd[d] = std::sqrt(scaler.sd[d] / n);
    return {scaler.apply(ds), scaler};
}

/// Stratified deterministic split; round(train_fraction * n_c) samples of each
/// class go to the training side. Original dataset order is preserved within
/// each side.
inline std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
    check_dataset(ds);
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw std::invalid_argument("split: train_fraction must be in (0,1)");
    ClassPartition part = partition_by_class(ds);
    for (std::size_t c = 0; c < part.class_count(); ++c)
        if (part.indices[c].size() < 2)
            throw std::invalid_argument("split: class " + std::to_string(c) +
                                        " has fewer than 2 members");

    std::mt19937_64 rng(spec.rng_seed);
    std::vector<char> in_train(ds.size(), 0);
    for (std::size_t c = 0; c < part.class_count(); ++c) {
        std::vector<std::size_t> order = part.indices[c];
        std::shuffle(order.begin(), order.end(), rng);
        auto take = static_cast<std::size_t>(
            std::llround(spec.train_fraction * static_cast<double>(order.size())));
        for (std::size_t i = 0; i < take; ++i) in_train[order[i]] = 1;
    }

    Dataset train, test;
    train.class_count = test.class_count = ds.class_count;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        Dataset& side = in_train[i] ? train : test;
        side.samples.push_back(ds.samples[i]);
        side.labels.push_back(ds.labels[i]);
    }
    return {train, test};
}

}  // namespace signet
