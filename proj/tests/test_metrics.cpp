#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "mdlad/metrics.hpp"
#include "mdlad/rng.hpp"

using namespace mdlad;

namespace {

// Independent oracle: count anomaly/normal pairs directly.
double auc_by_pairs(const std::vector<double>& scores,
                    const std::vector<std::uint8_t>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < scores.size(); ++a) {
        if (!labels[a]) {
            continue;
        }
        for (std::size_t b = 0; b < scores.size(); ++b) {
            if (labels[b]) {
                continue;
            }
            ++pairs;
            if (scores[a] > scores[b]) {
                wins += 1.0;
            } else if (scores[a] == scores[b]) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

// Independent oracle: build the ranking explicitly and walk the definition.
double ndcg_by_definition(const std::vector<double>& scores,
                          const std::vector<std::uint8_t>& labels) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });
    double dcg = 0.0;
    std::size_t n1 = 0;
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
        if (labels[idx[pos]]) {
            ++n1;
            dcg += 1.0 / std::log2(static_cast<double>(pos) + 2.0);
        }
    }
    double idcg = 0.0;
    for (std::size_t pos = 0; pos < n1; ++pos) {
        idcg += 1.0 / std::log2(static_cast<double>(pos) + 2.0);
    }
    return dcg / idcg;
}

}  // namespace

TEST_CASE("auc on pinned examples") {
    SUBCASE("perfect ranking") {
        LabeledRanking lr({5.0, 4.0, 1.0, 0.5}, {1, 1, 0, 0});
        CHECK(auc(lr) == 1.0);
    }
    SUBCASE("all ties") {
        LabeledRanking lr({2.0, 2.0, 2.0, 2.0}, {1, 0, 1, 0});
        CHECK(auc(lr) == 0.5);
    }
    SUBCASE("mixed") {
        LabeledRanking lr({3.0, 2.0, 1.0, 0.0}, {1, 0, 1, 0});
        CHECK(auc(lr) == doctest::Approx(0.75).epsilon(1e-12));
    }
    SUBCASE("reversed perfect ranking") {
        LabeledRanking lr({0.5, 1.0, 4.0, 5.0}, {1, 1, 0, 0});
        CHECK(auc(lr) == 0.0);
    }
    SUBCASE("single class is an error") {
        CHECK_THROWS_AS(auc(LabeledRanking({1.0, 2.0}, {1, 1})),
                        std::invalid_argument);
        CHECK_THROWS_AS(auc(LabeledRanking({1.0, 2.0}, {0, 0})),
                        std::invalid_argument);
    }
}

TEST_CASE("ndcg on pinned examples") {
    SUBCASE("anomalies fill the top ranks") {
        LabeledRanking lr({9.0, 8.0, 1.0, 0.0}, {1, 1, 0, 0});
        CHECK(ndcg(lr) == 1.0);
    }
    SUBCASE("one anomaly at rank 1") {
        LabeledRanking lr({9.0, 5.0, 4.0, 3.0, 2.0}, {1, 0, 0, 0, 0});
        CHECK(ndcg(lr) == 1.0);
    }
    SUBCASE("one anomaly at rank 3") {
        LabeledRanking lr({9.0, 8.0, 7.0, 6.0}, {0, 0, 1, 0});
        CHECK(ndcg(lr) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("no anomalies is an error") {
        CHECK_THROWS_AS(ndcg(LabeledRanking({1.0, 2.0}, {0, 0})),
                        std::invalid_argument);
    }
    SUBCASE("cutoff truncates both sums") {
        // Two anomalies, at ranks 1 and 4; nDCG@2 only sees the first.
        LabeledRanking lr({9.0, 8.0, 7.0, 6.0}, {1, 0, 0, 1});
        const double at2 = ndcg(lr, 2);
        CHECK(at2 == doctest::Approx(1.0 / (1.0 + 1.0 / std::log2(3.0)))
                         .epsilon(1e-12));
        CHECK(ndcg(lr) > at2 * 0.5);
    }
}

TEST_CASE("ndcg decreases as the single anomaly's rank worsens") {
    const std::size_t n = 20;
    double prev = 2.0;
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<double> scores(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = static_cast<double>(n - i);
        }
        std::vector<std::uint8_t> labels(n, 0);
        labels[r] = 1;
        const double v = ndcg(LabeledRanking(scores, labels));
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("metrics are invariant under strictly increasing transforms") {
    SplitRng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 4 + rng.next_index(30);
        std::vector<double> scores(n);
        std::vector<std::uint8_t> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = static_cast<double>(rng.next_index(6));  // force ties
            labels[i] = rng.next_bernoulli(0.3) ? 1 : 0;
        }
        labels[0] = 1;
        labels[1] = 0;

        auto affine = scores;
        auto expd = scores;
        for (std::size_t i = 0; i < n; ++i) {
            affine[i] = 2.0 * scores[i] + 7.0;
            expd[i] = std::exp(scores[i]);
        }
        const LabeledRanking base(scores, labels);
        const LabeledRanking a(affine, labels);
        const LabeledRanking e(expd, labels);
        CHECK(auc(base) == auc(a));
        CHECK(auc(base) == auc(e));
        CHECK(ndcg(base) == ndcg(a));
        CHECK(ndcg(base) == ndcg(e));
    }
}

TEST_CASE("metrics match brute-force oracles on random small cases") {
    SplitRng rng(123);
    int done = 0;
    while (done < 1000) {
        const std::size_t n = 2 + rng.next_index(7);  // n <= 8
        std::vector<double> scores(n);
        std::vector<std::uint8_t> labels(n);
        std::size_t n1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = static_cast<double>(rng.next_index(4));  // heavy ties
            labels[i] = rng.next_bernoulli(0.4) ? 1 : 0;
            n1 += labels[i];
        }
        if (n1 == 0 || n1 == n) {
            continue;
        }
        ++done;
        const LabeledRanking lr(scores, labels);
        CHECK(auc(lr) == doctest::Approx(auc_by_pairs(scores, labels)).epsilon(1e-12));
        CHECK(ndcg(lr) ==
              doctest::Approx(ndcg_by_definition(scores, labels)).epsilon(1e-12));
    }
}
