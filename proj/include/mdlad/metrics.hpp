#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mdlad {

/// Anomaly scores paired with ground truth. Lengths must match; AUC further
/// requires at least one record of each class.
struct LabeledRanking {
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;  // 1 = anomaly

    LabeledRanking(std::vector<double> s, std::vector<std::uint8_t> l);
    std::size_t anomaly_count() const;
};

/// Probability that a uniformly random anomaly outscores a uniformly random
/// normal record, tied pairs counted half (Mann-Whitney form). Throws when
/// either class is absent.
double auc(const LabeledRanking& lr);

/// Normalized discounted cumulative gain with binary relevance and the
/// 1/log2(rank+1) discount from rank 1. Ranks are assigned by descending
/// score, ties resolved by ascending record index. An optional cutoff
/// truncates both DCG and the ideal DCG. Throws with zero anomalies.
double ndcg(const LabeledRanking& lr,
            std::optional<std::size_t> cutoff = std::nullopt);

}  // namespace mdlad
