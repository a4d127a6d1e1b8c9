#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "signet/common.hpp"

namespace signet {

inline double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual) {
    if (predicted.size() != actual.size())
        throw std::invalid_argument("accuracy: length mismatch");
    if (predicted.empty()) throw std::invalid_argument("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == actual[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

namespace detail {
inline void check_auc_inputs(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("roc_auc: length mismatch");
    if (scores.empty()) throw std::invalid_argument("roc_auc: empty input");
    bool has_pos = false, has_neg = false;
    for (int y : labels) {
        if (y == 1) has_pos = true;
        else if (y == 0) has_neg = true;
        else throw std::invalid_argument("roc_auc: labels must be 0/1");
    }
    if (!has_pos || !has_neg)
        throw std::invalid_argument("roc_auc: both classes must be present");
}
}  // namespace detail

/// Mann-Whitney AUC via average ranks; ties contribute 0.5 per pair. Both the
/// rank sums and the pairwise sums below are multiples of 0.5 well inside the
/// exact integer range of a double, so the two routes agree exactly.
inline double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    detail::check_auc_inputs(scores, labels);
    std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double pos_rank_sum = 0.0;
    std::size_t pos = 0, neg = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) {
                pos_rank_sum += avg_rank;
                ++pos;
            } else {
                ++neg;
            }
        }
        i = j;
    }
    double p = static_cast<double>(pos);
    return (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

/// Exhaustive O(n^2) pairwise estimator, kept as an independent oracle.
inline double roc_auc_pairwise(const std::vector<double>& scores,
                               const std::vector<int>& labels) {
    detail::check_auc_inputs(scores, labels);
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace signet
