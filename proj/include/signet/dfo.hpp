#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "signet/common.hpp"

namespace signet {

/// Axis-aligned box constraining the continuous search space.
struct SearchBox {
    Vec lower;
    Vec upper;

    std::size_t dim() const { return lower.size(); }

    bool contains(const Vec& x) const {
        if (x.size() != lower.size()) return false;
        for (std::size_t d = 0; d < x.size(); ++d)
            if (x[d] < lower[d] || x[d] > upper[d]) return false;
        return true;
    }

    void validate() const {
        if (lower.empty() || lower.size() != upper.size())
            throw std::invalid_argument("search box: inconsistent bounds");
        bool nondegenerate = false;
        for (std::size_t d = 0; d < lower.size(); ++d) {
            if (lower[d] > upper[d])
                throw std::invalid_argument("search box: lower > upper in dimension " +
                                            std::to_string(d));
            if (upper[d] > lower[d]) nondegenerate = true;
        }
        if (!nondegenerate)
            throw std::invalid_argument("search box: degenerate in every dimension");
    }
};

struct DfoConfig {
    std::size_t budget = 200;            // total objective evaluations
    std::size_t population = 20;         // retained solutions
    std::size_t positive_count = 2;      // best solutions defining the learned region
    double exploit_probability = 0.95;   // sample in learned region vs full box
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (budget == 0) throw std::invalid_argument("dfo: budget must be > 0");
        if (positive_count == 0 || positive_count >= population || population > budget)
            throw std::invalid_argument(
                "dfo: need 0 < positive_count < population <= budget");
        if (exploit_probability < 0.0 || exploit_probability > 1.0)
            throw std::invalid_argument("dfo: exploit_probability must be in [0,1]");
    }
};

struct Candidate {
    Vec point;
    double value = 0.0;
};

struct DfoResult {
    Candidate best;                      // argmax over all evaluated points
    std::vector<Candidate> evaluations;  // every evaluated point, in order
};

namespace detail {

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    if (!(hi > lo)) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec sample_box(std::mt19937_64& rng, const SearchBox& box) {
    Vec x(box.dim());
    for (std::size_t d = 0; d < box.dim(); ++d)
        x[d] = uniform_in(rng, box.lower[d], box.upper[d]);
    return x;
}

// Shrinks a copy of the full box so that it still contains every positive
// solution while cutting away negatives along randomly chosen axes. Negatives
// whose coordinates are dominated by the positive hull in every dimension
// cannot be excluded and are left inside.
inline SearchBox learn_region(std::mt19937_64& rng, const SearchBox& full,
                              const std::vector<const Candidate*>& positives,
                              const std::vector<const Candidate*>& negatives) {
    std::size_t dims = full.dim();
    Vec pos_min(dims, 0.0), pos_max(dims, 0.0);
    for (std::size_t d = 0; d < dims; ++d) {
        pos_min[d] = pos_max[d] = positives.front()->point[d];
        for (const Candidate* p : positives) {
            pos_min[d] = std::min(pos_min[d], p->point[d]);
            pos_max[d] = std::max(pos_max[d], p->point[d]);
        }
    }

    SearchBox region = full;
    std::vector<std::size_t> order(negatives.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::size_t> axes(dims);
    std::iota(axes.begin(), axes.end(), 0);
    for (std::size_t n : order) {
        const Vec& neg = negatives[n]->point;
        if (!region.contains(neg)) continue;
        std::shuffle(axes.begin(), axes.end(), rng);
        for (std::size_t d : axes) {
            if (neg[d] < pos_min[d]) {
                region.lower[d] = uniform_in(rng, neg[d], pos_min[d]);
                break;
            }
            if (neg[d] > pos_max[d]) {
                region.upper[d] = uniform_in(rng, pos_max[d], neg[d]);
                break;
            }
        }
    }
    return region;
}

}  // namespace detail

/// Classification-based derivative-free maximization (RACOS style). Keeps a
/// population of evaluated solutions, labels the best `positive_count` of them
/// positive, learns an axis-aligned region around them that sheds the
/// negatives, and samples the next candidate from that region with probability
/// `exploit_probability` (from the full box otherwise). The worst population
/// member is replaced whenever the new candidate improves on it. Spends
/// exactly cfg.budget objective evaluations and is deterministic per seed.
template <typename Objective>
DfoResult maximize(Objective&& objective, const SearchBox& box, const DfoConfig& cfg) {
    cfg.validate();
    box.validate();
    std::mt19937_64 rng(cfg.rng_seed);

    DfoResult result;
    result.evaluations.reserve(cfg.budget);
    auto evaluate = [&](Vec point) {
        if (!box.contains(point))
            throw std::logic_error("dfo: sampled point escaped the search box");
        Candidate c{std::move(point), 0.0};
        c.value = objective(c.point);
        result.evaluations.push_back(c);
        return result.evaluations.size() - 1;
    };

    std::size_t init = std::min(cfg.population, cfg.budget);
    std::vector<std::size_t> population;
    for (std::size_t i = 0; i < init; ++i)
        population.push_back(evaluate(detail::sample_box(rng, box)));

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    while (result.evaluations.size() < cfg.budget) {
        std::vector<std::size_t> ranked = population;
        std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
            double va = result.evaluations[a].value, vb = result.evaluations[b].value;
            return va != vb ? va > vb : a < b;
        });
        std::vector<const Candidate*> positives, negatives;
        for (std::size_t i = 0; i < ranked.size(); ++i)
            (i < cfg.positive_count ? positives : negatives)
                .push_back(&result.evaluations[ranked[i]]);

        SearchBox region = detail::learn_region(rng, box, positives, negatives);
        bool exploit = coin(rng) < cfg.exploit_probability;
        std::size_t id = evaluate(detail::sample_box(rng, exploit ? region : box));

        std::size_t worst = population.front();
        for (std::size_t member : population)
            if (result.evaluations[member].value < result.evaluations[worst].value)
                worst = member;
        if (result.evaluations[id].value > result.evaluations[worst].value)
            *std::find(population.begin(), population.end(), worst) = id;
    }

    result.best = result.evaluations.front();
    for (const Candidate& c : result.evaluations)
        if (c.value > result.best.value) result.best = c;
    return result;
}

template <typename Objective>
std::vector<double> evaluate_batch(Objective&& objective, const std::vector<Vec>& points) {
    std::vector<double> values;
    values.reserve(points.size());
    for (const Vec& p : points) values.push_back(objective(p));
    return values;
}

}  // namespace signet
