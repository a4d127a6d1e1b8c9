#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "signet/dataset.hpp"
#include "signet/dfo.hpp"
#include "signet/geometry.hpp"
#include "signet/svm.hpp"

namespace signet {

enum class Provenance { Original, PositiveNeighbor, NegativeNeighbor };

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Original: return "original";
        case Provenance::PositiveNeighbor: return "positive_neighbor";
        default: return "negative_neighbor";
    }
}

inline Provenance parse_provenance(const std::string& name) {
    if (name == "original") return Provenance::Original;
    if (name == "positive_neighbor") return Provenance::PositiveNeighbor;
    if (name == "negative_neighbor") return Provenance::NegativeNeighbor;
    throw std::invalid_argument("unknown provenance: " + name);
}

struct AugmentConfig {
    double gamma = 1e-2;               // weight of the distance hinges
    std::optional<double> r1;          // min spacing among positive neighbors
    std::optional<double> r2;          // min spacing among negative neighbors
    std::optional<double> r3;          // max distance of negatives from class data
    std::size_t budget_T = 200;        // objective evaluations per neighbor
    double positive_fraction = 0.20;
    double negative_fraction = 0.20;
    double seed_noise_sd = 0.05;       // bootstrap noise, as a fraction of per-feature sd
    std::uint64_t rng_seed = 0;
    DistanceKind distance = DistanceKind::AngularCosine;
    double svm_regularization = 1e-2;
    std::size_t svm_epochs = 200;
    double box_expansion = 0.20;       // class box grows by this fraction of range per side

    void validate() const {
        if (gamma < 0.0) throw std::invalid_argument("augment: gamma must be >= 0");
        if (positive_fraction < 0.0 || negative_fraction < 0.0)
            throw std::invalid_argument("augment: fractions must be >= 0");
        if (budget_T == 0) throw std::invalid_argument("augment: budget must be > 0");
        if (r1 && !(*r1 > 0.0)) throw std::invalid_argument("augment: r1 must be > 0");
        if (r2 && r3 && !(*r2 < *r3))
            throw std::invalid_argument("augment: need r2 < r3");
    }
};

/// Spacing radii used by the generation objectives. When not overridden they
/// derive from rho, the minimum pairwise distance within the class originals:
/// r1 = r2 = rho, r3 = 3 * rho.
struct Radii {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
};

inline Radii default_radii(const std::vector<Vec>& class_points, DistanceKind kind) {
    double rho = dataset_min_pairwise(class_points, kind);
    if (rho == 0.0) {
        // Duplicates collapse the minimum; fall back to the smallest nonzero gap.
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < class_points.size(); ++i)
            for (std::size_t j = i + 1; j < class_points.size(); ++j) {
                double d = distance(kind, class_points[i], class_points[j]);
                if (d > 0.0) smallest = std::min(smallest, d);
            }
        if (!std::isfinite(smallest))
            throw std::invalid_argument("default_radii: all points coincident");
        log_once("radii-duplicate-fallback",
                 "duplicate points in class data; using smallest nonzero distance for radii");
        rho = smallest;
    }
    return {rho, rho, 3.0 * rho};
}

/// Per-class triple {originals, positive neighbors, negative neighbors}.
struct ExpandedClass {
    std::vector<Vec> originals;
    std::vector<Vec> positives;
    std::vector<Vec> negatives;

    std::size_t size() const {
        return originals.size() + positives.size() + negatives.size();
    }
};

struct NodeMeta {
    int class_index = 0;
    Provenance provenance = Provenance::Original;
};

struct ExpandedDataset {
    std::vector<ExpandedClass> classes;

    int class_count() const { return static_cast<int>(classes.size()); }

    std::size_t total_size() const {
        std::size_t n = 0;
        for (const ExpandedClass& c : classes) n += c.size();
        return n;
    }

    /// Canonical node order: per class ascending, originals then positive then
    /// negative neighbors, each in construction order.
    std::vector<Vec> nodes() const {
        std::vector<Vec> out;
        out.reserve(total_size());
        for (const ExpandedClass& c : classes) {
            out.insert(out.end(), c.originals.begin(), c.originals.end());
            out.insert(out.end(), c.positives.begin(), c.positives.end());
            out.insert(out.end(), c.negatives.begin(), c.negatives.end());
        }
        return out;
    }

    std::vector<NodeMeta> node_meta() const {
        std::vector<NodeMeta> out;
        out.reserve(total_size());
        for (int c = 0; c < class_count(); ++c) {
            const ExpandedClass& cls = classes[static_cast<std::size_t>(c)];
            out.insert(out.end(), cls.originals.size(), {c, Provenance::Original});
            out.insert(out.end(), cls.positives.size(), {c, Provenance::PositiveNeighbor});
            out.insert(out.end(), cls.negatives.size(), {c, Provenance::NegativeNeighbor});
        }
        return out;
    }
};

/// Wraps a plain dataset as an expanded dataset with empty neighbor sets.
inline ExpandedDataset expand_identity(const Dataset& ds) {
    check_dataset(ds);
    ExpandedDataset out;
    out.classes.resize(static_cast<std::size_t>(ds.class_count));
    for (std::size_t i = 0; i < ds.size(); ++i)
        out.classes[static_cast<std::size_t>(ds.labels[i])].originals.push_back(
            ds.samples[i]);
    return out;
}

/// Per-dimension [min, max] of the class data, expanded on both sides.
inline SearchBox class_search_box(const std::vector<Vec>& class_points,
                                  double expansion) {
    if (class_points.empty())
        throw std::invalid_argument("class_search_box: empty class");
    std::size_t dim = class_points.front().size();
    SearchBox box{Vec(dim), Vec(dim)};
    for (std::size_t d = 0; d < dim; ++d) {
        double lo = class_points.front()[d], hi = lo;
        for (const Vec& p : class_points) {
            lo = std::min(lo, p[d]);
            hi = std::max(hi, p[d]);
        }
        double pad = expansion * (hi - lo);
        box.lower[d] = lo - pad;
        box.upper[d] = hi + pad;
    }
    return box;
}

/// Objective maximized when generating a positive neighbor: discriminator
/// probability minus a hinge that keeps new points at least r1 away from the
/// positive neighbors generated so far. An empty set contributes no hinge.
inline double positive_objective(const Vec& x, const LinearSvm& disc,
                                 const std::vector<Vec>& positives, double gamma,
                                 double r1, DistanceKind kind) {
    double p = probability(disc, x);
    double nearest = min_distance_to_set(x, positives, kind);
    double hinge = std::isinf(nearest) ? 0.0 : std::max(0.0, r1 - nearest);
    return p - gamma * hinge;
}

/// Objective minimized when generating a negative neighbor: discriminator
/// probability plus hinges enforcing spacing r2 among negatives and maximum
/// offset r3 from the class data.
inline double negative_objective(const Vec& x, const LinearSvm& disc,
                                 const std::vector<Vec>& originals,
                                 const std::vector<Vec>& negatives, double gamma,
                                 double r2, double r3, DistanceKind kind) {
    double p = probability(disc, x);
    double nearest_neg = min_distance_to_set(x, negatives, kind);
    double spacing = std::isinf(nearest_neg) ? 0.0 : std::max(0.0, r2 - nearest_neg);
    double nearest_orig = min_distance_to_set(x, originals, kind);
    double offset = std::max(0.0, nearest_orig - r3);
    return p + gamma * spacing + gamma * offset;
}

/// One accepted neighbor and the optimizer run that produced it. Objective
/// values are reported in the natural direction of the polarity: maximized for
/// positive neighbors, minimized for negative ones.
struct NeighborTrace {
    int class_index = 0;
    Provenance polarity = Provenance::PositiveNeighbor;
    std::size_t slot = 0;
    Vec point;
    double objective_value = 0.0;
    std::vector<double> evaluated_values;
};

namespace detail {

/// Noise-corrupted seed points standing in for an empty discriminator side.
/// They exist only for one SVM training and never reach the outputs.
inline std::vector<Vec> bootstrap_points(const std::vector<Vec>& class_points,
                                         double noise_fraction, std::uint64_t seed,
                                         std::size_t count = 5) {
    std::size_t dim = class_points.front().size();
    Vec sd(dim, 0.0), mean(dim, 0.0);
    double n = static_cast<double>(class_points.size());
    for (const Vec& p : class_points)
        for (std::size_t d = 0; d < dim; ++d) mean[d] += p[d];
    for (std::size_t d = 0; d < dim; ++d) mean[d] /= n;
    for (const Vec& p : class_points)
        for (std::size_t d = 0; d < dim; ++d) {
            double c = p[d] - mean[d];
            sd[d] += c * c;
        }
    for (std::size_t d = 0; d < dim; ++d) sd[d] = std::sqrt(sd[d] / n);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, class_points.size() - 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vec p = class_points[pick(rng)];
        for (std::size_t d = 0; d < dim; ++d) p[d] += noise_fraction * sd[d] * gauss(rng);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace detail

/// Generates one neighbor of the requested polarity for one class and appends
/// it to the matching set in `state`. The polarity's discriminator is
/// retrained on the current sets (bootstrapping the opposing side when it is
/// empty) and frozen while the derivative-free search spends cfg.budget_T
/// evaluations inside `box`.
inline Vec generate_neighbor(Provenance polarity, ExpandedClass& state,
                             const SearchBox& box, const Radii& radii,
                             const AugmentConfig& cfg, const DfoConfig& dfo_template,
                             std::uint64_t neighbor_seed,
                             NeighborTrace* trace = nullptr) {
    if (polarity == Provenance::Original)
        throw std::invalid_argument("generate_neighbor: polarity must be a neighbor kind");
    if (state.originals.size() < 2)
        throw std::invalid_argument("generate_neighbor: class needs >= 2 originals");

    bool positive = polarity == Provenance::PositiveNeighbor;
    std::vector<Vec>& own = positive ? state.positives : state.negatives;

    const std::vector<Vec>* opposing = &own;
    std::vector<Vec> bootstrap;
    if (own.empty()) {
        bootstrap = detail::bootstrap_points(state.originals, cfg.seed_noise_sd,
                                             mix_seed(neighbor_seed, 1));
        opposing = &bootstrap;
    }
    LinearSvm disc = train_svm(state.originals, *opposing, cfg.svm_regularization,
                               cfg.svm_epochs, mix_seed(neighbor_seed, 2));

    DfoConfig dfo_cfg = dfo_template;
    dfo_cfg.budget = cfg.budget_T;
    dfo_cfg.rng_seed = mix_seed(neighbor_seed, 3);

    DfoResult result;
    if (positive) {
        result = maximize(
            [&](const Vec& x) {
                return positive_objective(x, disc, state.positives, cfg.gamma, radii.r1,
                                          cfg.distance);
            },
            box, dfo_cfg);
    } else {
        result = maximize(
            [&](const Vec& x) {
                return -negative_objective(x, disc, state.originals, state.negatives,
                                           cfg.gamma, radii.r2, radii.r3, cfg.distance);
            },
            box, dfo_cfg);
    }

    if (trace) {
        trace->polarity = polarity;
        trace->point = result.best.point;
        trace->objective_value = positive ? result.best.value : -result.best.value;
        trace->evaluated_values.clear();
        trace->evaluated_values.reserve(result.evaluations.size());
        for (const Candidate& c : result.evaluations)
            trace->evaluated_values.push_back(positive ? c.value : -c.value);
    }
    own.push_back(result.best.point);
    return result.best.point;
}

/// Expands every class with round(fraction * |class|) positive neighbors
/// followed by the same rule for negatives. Deterministic per cfg.rng_seed;
/// radii are resolved per class from rho unless overridden in cfg.
inline ExpandedDataset expand_dataset(const Dataset& train, const AugmentConfig& cfg,
                                      const DfoConfig& dfo_template,
                                      std::vector<NeighborTrace>* traces = nullptr) {
    cfg.validate();
    check_dataset(train);
    ExpandedDataset out = expand_identity(train);

    for (int c = 0; c < out.class_count(); ++c) {
        ExpandedClass& cls = out.classes[static_cast<std::size_t>(c)];
        auto want = [&](double fraction) {
            return static_cast<std::size_t>(
                std::llround(fraction * static_cast<double>(cls.originals.size())));
        };
        std::size_t want_pos = want(cfg.positive_fraction);
        std::size_t want_neg = want(cfg.negative_fraction);
        if (want_pos == 0 && want_neg == 0) continue;
        if (cls.originals.size() < 2)
            throw std::invalid_argument("expand_dataset: class " + std::to_string(c) +
                                        " has fewer than 2 samples");

        Radii radii = default_radii(cls.originals, cfg.distance);
        if (cfg.r1) radii.r1 = *cfg.r1;
        if (cfg.r2) radii.r2 = *cfg.r2;
        if (cfg.r3) radii.r3 = *cfg.r3;
        SearchBox box = class_search_box(cls.originals, cfg.box_expansion);

        for (std::size_t j = 0; j < want_pos + want_neg; ++j) {
            bool positive = j < want_pos;
            Provenance polarity =
                positive ? Provenance::PositiveNeighbor : Provenance::NegativeNeighbor;
            std::size_t slot = positive ? j : j - want_pos;
            NeighborTrace trace;
            std::uint64_t seed = mix_seed(cfg.rng_seed, static_cast<std::uint64_t>(c),
                                          positive ? 0 : 1, slot);
            generate_neighbor(polarity, cls, box, radii, cfg, dfo_template, seed,
                              traces ? &trace : nullptr);
            if (traces) {
                trace.class_index = c;
                trace.slot = slot;
                traces->push_back(std::move(trace));
            }
        }
    }
    return out;
}

// --- serialization ------------------------------------------------------------

/// CSV with an extra provenance column; label of a generated neighbor is the
/// class whose expansion produced it.
inline void save_expanded_csv(const ExpandedDataset& expanded, const std::string& path,
                              const std::string& label_column = "label") {
    std::vector<Vec> nodes = expanded.nodes();
    std::vector<NodeMeta> meta = expanded.node_meta();
    if (nodes.empty()) throw std::invalid_argument("save_expanded_csv: empty dataset");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (std::size_t d = 0; d < nodes.front().size(); ++d) out << "f" << d << ",";
    out << label_column << ",provenance\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (double v : nodes[i]) out << format_double(v) << ",";
        out << meta[i].class_index << "," << provenance_name(meta[i].provenance) << "\n";
    }
}

/// Reads a provenance-tagged CSV back into per-class sets; plain CSVs load as
/// all-original expanded datasets.
inline ExpandedDataset load_expanded_csv(const std::string& path,
                                         const std::string& label_column = "label") {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty file: " + path);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    std::vector<std::string> columns = detail::split_line(header);

    std::size_t label_idx = columns.size(), prov_idx = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == label_column) label_idx = i;
        if (columns[i] == "provenance") prov_idx = i;
    }
    if (label_idx == columns.size())
        throw std::runtime_error("label column '" + label_column + "' not found in " + path);

    std::vector<Vec> features;
    std::vector<int> labels;
    std::vector<Provenance> provenance;
    std::string line;
    std::size_t row = 0;
    int max_label = -1;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::vector<std::string> fields = detail::split_line(line);
        if (fields.size() != columns.size())
            throw std::runtime_error("row " + std::to_string(row) + ": field count mismatch");
        Vec x;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == label_idx || i == prov_idx) continue;
            double v = 0.0;
            if (!detail::parse_double(fields[i], v))
                throw std::runtime_error("non-numeric feature at row " + std::to_string(row) +
                                         ", column " + columns[i]);
            x.push_back(v);
        }
        long y = 0;
        if (!detail::parse_int(fields[label_idx], y) || y < 0)
            throw std::runtime_error("row " + std::to_string(row) +
                                     ": expanded CSV labels must be class indices");
        max_label = std::max(max_label, static_cast<int>(y));
        features.push_back(std::move(x));
        labels.push_back(static_cast<int>(y));
        provenance.push_back(prov_idx < columns.size()
                                 ? parse_provenance(fields[prov_idx])
                                 : Provenance::Original);
    }
    if (features.empty()) throw std::runtime_error("empty file: " + path);

    ExpandedDataset out;
    out.classes.resize(static_cast<std::size_t>(max_label + 1));
    for (std::size_t i = 0; i < features.size(); ++i) {
        ExpandedClass& cls = out.classes[static_cast<std::size_t>(labels[i])];
        switch (provenance[i]) {
            case Provenance::Original: cls.originals.push_back(std::move(features[i])); break;
            case Provenance::PositiveNeighbor: cls.positives.push_back(std::move(features[i])); break;
            case Provenance::NegativeNeighbor: cls.negatives.push_back(std::move(features[i])); break;
        }
    }
    return out;
}

}  // namespace signet
