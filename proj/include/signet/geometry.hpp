#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "signet/common.hpp"

namespace signet {

enum class DistanceKind { AngularCosine, Euclidean };

inline const char* distance_kind_name(DistanceKind kind) {
    return kind == DistanceKind::AngularCosine ? "angular-cosine" : "euclidean";
}

inline DistanceKind parse_distance_kind(const std::string& name) {
    if (name == "angular-cosine") return DistanceKind::AngularCosine;
    if (name == "euclidean") return DistanceKind::Euclidean;
    throw std::invalid_argument("unknown distance kind: " + name);
}

namespace detail {
inline void check_same_dim(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
}
}  // namespace detail

/// 1 - cos(a, b), clamped to [0, 2]. A vector with norm below 1e-12 carries no
/// directional information; its distance to anything is defined as 1 and the
/// event is logged once per run.
inline double angular_cosine_distance(const Vec& a, const Vec& b) {
    detail::check_same_dim(a, b);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        dot += a[d] * b[d];
        na += a[d] * a[d];
        nb += b[d] * b[d];
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    if (na < 1e-12 || nb < 1e-12) {
        log_once("angular-zero-norm",
                 "angular distance on a near-zero vector; returning 1");
        return 1.0;
    }
    double dist = 1.0 - dot / (na * nb);
    return std::clamp(dist, 0.0, 2.0);
}

inline double euclidean_distance(const Vec& a, const Vec& b) {
    detail::check_same_dim(a, b);
    double acc = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        double diff = a[d] - b[d];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

inline double distance(DistanceKind kind, const Vec& a, const Vec& b) {
    return kind == DistanceKind::AngularCosine ? angular_cosine_distance(a, b)
                                               : euclidean_distance(a, b);
}

/// Minimum distance from x to any point of S; +inf when S is empty so hinge
/// terms built on it evaluate to zero.
inline double min_distance_to_set(const Vec& x, const std::vector<Vec>& set,
                                  DistanceKind kind) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& s : set) best = std::min(best, distance(kind, x, s));
    return best;
}

/// Minimum over unordered distinct pairs.
inline double dataset_min_pairwise(const std::vector<Vec>& points, DistanceKind kind) {
    if (points.size() < 2)
        throw std::invalid_argument("dataset_min_pairwise needs at least 2 points");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            best = std::min(best, distance(kind, points[i], points[j]));
    return best;
}

constexpr std::size_t kNoExclude = static_cast<std::size_t>(-1);

/// k nearest pool members to an arbitrary query point, ascending by distance,
/// ties broken by ascending pool index. `exclude` removes one pool slot.
inline std::vector<std::size_t> knn_point(const Vec& query, const std::vector<Vec>& pool,
                                          std::size_t k, DistanceKind kind,
                                          std::size_t exclude = kNoExclude) {
    std::size_t effective = pool.size() - (exclude < pool.size() ? 1 : 0);
    if (k > effective)
        throw std::invalid_argument("knn: k=" + std::to_string(k) +
                                    " exceeds pool size " + std::to_string(effective));
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(effective);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (i == exclude) continue;
        ranked.emplace_back(distance(kind, query, pool[i]), i);
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = ranked[i].second;
    return out;
}

/// k nearest neighbors of pool[query_index] within the pool itself.
inline std::vector<std::size_t> knn(std::size_t query_index, const std::vector<Vec>& pool,
                                    std::size_t k, DistanceKind kind, bool exclude_self) {
    if (query_index >= pool.size())
        throw std::invalid_argument("knn: query index out of range");
    return knn_point(pool[query_index], pool, k, kind,
                     exclude_self ? query_index : kNoExclude);
}

}  // namespace signet
