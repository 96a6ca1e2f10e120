#include "mdlad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mdlad {

LabeledRanking::LabeledRanking(std::vector<double> s, std::vector<std::uint8_t> l)
    : scores(std::move(s)), labels(std::move(l)) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("scores and labels must have equal length");
    }
    if (scores.empty()) {
        throw std::invalid_argument("empty ranking");
    }
}

std::size_t LabeledRanking::anomaly_count() const {
    std::size_t n1 = 0;
    for (std::uint8_t l : labels) {
        n1 += l ? 1 : 0;
    }
    return n1;
}

double auc(const LabeledRanking& lr) {
    const std::size_t n = lr.scores.size();
    const std::size_t n1 = lr.anomaly_count();
    const std::size_t n0 = n - n1;
    if (n1 == 0 || n0 == 0) {
        throw std::invalid_argument("AUC undefined: both classes must be present");
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&lr](std::size_t a, std::size_t b) {
        return lr.scores[a] < lr.scores[b];
    });

    // Average ranks over tie groups; summing anomaly ranks then gives the
    // Mann-Whitney statistic with half credit per tied pair.
    double anomaly_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && lr.scores[idx[j + 1]] == lr.scores[idx[i]]) {
            ++j;
        }
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t p = i; p <= j; ++p) {
            if (lr.labels[idx[p]]) {
                anomaly_rank_sum += avg_rank;
            }
        }
        i = j + 1;
    }
    const double u = anomaly_rank_sum -
                     0.5 * static_cast<double>(n1) * static_cast<double>(n1 + 1);
    return u / (static_cast<double>(n1) * static_cast<double>(n0));
}

double ndcg(const LabeledRanking& lr, std::optional<std::size_t> cutoff) {
    const std::size_t n = lr.scores.size();
    const std::size_t n1 = lr.anomaly_count();
    if (n1 == 0) {
        throw std::invalid_argument("nDCG undefined: no anomalies");
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&lr](std::size_t a, std::size_t b) {
        if (lr.scores[a] != lr.scores[b]) {
            return lr.scores[a] > lr.scores[b];
        }
        return a < b;
    });

    const std::size_t depth = cutoff ? std::min(*cutoff, n) : n;
    double dcg = 0.0;
    for (std::size_t pos = 0; pos < depth; ++pos) {
        if (lr.labels[idx[pos]]) {
            dcg += 1.0 / std::log2(static_cast<double>(pos + 2));
        }
    }
    double idcg = 0.0;
    const std::size_t ideal_depth = std::min(n1, depth);
    for (std::size_t pos = 0; pos < ideal_depth; ++pos) {
        idcg += 1.0 / std::log2(static_cast<double>(pos + 2));
    }
    return dcg / idcg;
}

}  // namespace mdlad
