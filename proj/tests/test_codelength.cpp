#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "mdlad/codelength.hpp"
#include "mdlad/rng.hpp"

using namespace mdlad;

namespace {

// Odometer over the product domain; calls fn with each tuple.
template <typename Fn>
void for_each_tuple(const std::vector<std::size_t>& arities, Fn&& fn) {
    std::vector<std::int32_t> tuple(arities.size(), 0);
    for (;;) {
        fn(tuple);
        std::size_t j = 0;
        while (j < arities.size()) {
            if (static_cast<std::size_t>(++tuple[j]) < arities[j]) {
                break;
            }
            tuple[j] = 0;
            ++j;
        }
        if (j == arities.size()) {
            return;
        }
    }
}

double kraft_sum(const ProductHypothesis& h, const std::vector<std::size_t>& arities) {
    double sum = 0.0;
    for_each_tuple(arities, [&](const std::vector<std::int32_t>& tuple) {
        sum += std::exp2(-product_item_cost(h, tuple));
    });
    return sum;
}

}  // namespace

TEST_CASE("floor_log2_bits") {
    CHECK(floor_log2_bits(1) == 0.0);
    CHECK(floor_log2_bits(4) == 2.0);
    CHECK(floor_log2_bits(1000) == 9.0);
    CHECK(floor_log2_bits(1024) == 10.0);
    CHECK_THROWS_AS(floor_log2_bits(0), std::invalid_argument);
}

TEST_CASE("uniform hypothesis") {
    UniformHypothesis u{16};
    CHECK(u.hypothesis_cost() == 0.0);
    CHECK(u.item_cost() == 4.0);
}

TEST_CASE("fit_bernoulli counts ones") {
    std::vector<std::int32_t> a{1, 1, 0, 1};
    auto h = fit_bernoulli(a);
    CHECK(h.ones == 3);
    CHECK(h.sample_size == 4);

    std::vector<std::int32_t> b{0, 0};
    h = fit_bernoulli(b);
    CHECK(h.ones == 0);
    CHECK(h.sample_size == 2);

    std::vector<std::int32_t> c(10, 0);
    std::fill(c.begin(), c.begin() + 7, 1);
    h = fit_bernoulli(c);
    CHECK(h.ones == 7);
    CHECK(h.sample_size == 10);

    CHECK_THROWS_WITH_AS(fit_bernoulli(std::vector<std::int32_t>{}),
                         "empty sample", std::invalid_argument);
    CHECK_THROWS_AS(fit_bernoulli(std::vector<std::int32_t>{0, 2}),
                    std::invalid_argument);
}

TEST_CASE("bernoulli item cost uses Laplace-corrected p") {
    BernoulliHypothesis h{0, 2};  // p = 1/4
    CHECK(h.item_cost(1) == doctest::Approx(2.0).epsilon(1e-12));

    h = {1, 2};  // p = 1/2
    CHECK(h.item_cost(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.item_cost(1) == doctest::Approx(1.0).epsilon(1e-12));

    h = {3, 4};  // p = 2/3
    CHECK(h.item_cost(1) == doctest::Approx(std::log2(1.5)).epsilon(1e-12));
}

TEST_CASE("bernoulli hypothesis cost is floor(log2 n)") {
    CHECK(BernoulliHypothesis{2, 4}.hypothesis_cost() == 2.0);
    CHECK(BernoulliHypothesis{0, 1}.hypothesis_cost() == 0.0);
    CHECK(BernoulliHypothesis{500, 1000}.hypothesis_cost() == 9.0);
    CHECK_THROWS_AS((BernoulliHypothesis{0, 0}.hypothesis_cost()),
                    std::invalid_argument);
}

TEST_CASE("fit_categorical counts every outcome") {
    std::vector<std::int32_t> a{0, 0, 1, 2};
    auto h = fit_categorical(a, 3);
    CHECK(h.counts == std::vector<std::int64_t>{2, 1, 1});
    CHECK(h.sample_size == 4);

    std::vector<std::int32_t> b{0, 0, 0};
    h = fit_categorical(b, 2);
    CHECK(h.counts == std::vector<std::int64_t>{3, 0});

    std::vector<std::int32_t> c{3, 3, 3, 3};
    h = fit_categorical(c, 4);
    CHECK(h.counts == std::vector<std::int64_t>{0, 0, 0, 4});

    CHECK_THROWS_AS(fit_categorical(a, 2), std::invalid_argument);
    CHECK_THROWS_AS(fit_categorical(std::vector<std::int32_t>{}, 2),
                    std::invalid_argument);
}

TEST_CASE("categorical item cost") {
    std::vector<std::int32_t> sample{0, 0, 0};
    auto h = fit_categorical(sample, 2);
    CHECK(h.item_cost(1) == doctest::Approx(std::log2(5.0)).epsilon(1e-12));

    CategoricalHypothesis uniform{{1, 1, 1, 1}, 4};
    for (std::size_t v = 0; v < 4; ++v) {
        CHECK(uniform.item_cost(v) == doctest::Approx(2.0).epsilon(1e-12));
    }

    std::vector<std::int32_t> abc{0, 0, 1, 2};
    h = fit_categorical(abc, 3);
    CHECK(h.item_cost(0) == doctest::Approx(-std::log2(3.0 / 7.0)).epsilon(1e-12));

    CHECK_THROWS_AS(h.item_cost(3), std::invalid_argument);
}

TEST_CASE("categorical hypothesis cost is (k-1) floor(log2 n)") {
    CHECK(CategoricalHypothesis{{5}, 5}.hypothesis_cost() == 0.0);
    CHECK(CategoricalHypothesis{{2, 1, 1}, 4}.hypothesis_cost() == 4.0);
    CHECK(CategoricalHypothesis{{400, 600}, 1000}.hypothesis_cost() == 9.0);
}

TEST_CASE("product costs add up factor by factor") {
    const std::vector<FactorSpec> factors{
        {FactorSpec::Kind::bernoulli, 2}, {FactorSpec::Kind::bernoulli, 2}};
    const std::vector<std::vector<std::int32_t>> records{{1, 0}, {0, 1}};
    auto h = product_fit(factors, records);

    // Each factor fitted on two records: floor(log2 2) = 1 bit apiece.
    CHECK(product_hypothesis_cost(h) == 2.0);
    // Both factors end up at p = 1/2.
    CHECK(product_item_cost(h, std::vector<std::int32_t>{1, 0}) ==
          doctest::Approx(2.0).epsilon(1e-12));

    ProductHypothesis empty;
    CHECK(product_item_cost(empty, std::vector<std::int32_t>{}) == 0.0);
    CHECK(product_hypothesis_cost(empty) == 0.0);

    CHECK_THROWS_AS(product_item_cost(h, std::vector<std::int32_t>{1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(product_fit(factors, {{1, 0}, {0}}), std::invalid_argument);
}

TEST_CASE("product additivity is exact in declared order") {
    SplitRng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<FactorSpec> factors;
        const std::size_t m = 1 + rng.next_index(5);
        for (std::size_t j = 0; j < m; ++j) {
            factors.push_back({FactorSpec::Kind::categorical, 2 + rng.next_index(4)});
        }
        std::vector<std::vector<std::int32_t>> records(3 + rng.next_index(20));
        for (auto& r : records) {
            r.resize(m);
            for (std::size_t j = 0; j < m; ++j) {
                r[j] = static_cast<std::int32_t>(rng.next_index(factors[j].arity));
            }
        }
        auto h = product_fit(factors, records);
        for (const auto& r : records) {
            double manual = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                manual += factor_item_cost(h.components[j], r[j]);
            }
            CHECK(product_item_cost(h, r) == manual);  // bitwise: same order
        }
    }
}

TEST_CASE("Kraft sums over exhaustive domains") {
    SplitRng rng(42);
    SUBCASE("Laplace categorical sums to exactly 1") {
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t k = 1 + rng.next_index(12);
            const std::size_t n = 1 + rng.next_index(200);
            std::vector<std::int32_t> sample(n);
            for (auto& x : sample) {
                x = static_cast<std::int32_t>(rng.next_index(k));
            }
            auto h = fit_categorical(sample, k);
            double sum = 0.0;
            for (std::size_t v = 0; v < k; ++v) {
                sum += std::exp2(-h.item_cost(v));
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("bernoulli sums to exactly 1") {
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 1 + rng.next_index(100);
            std::vector<std::int32_t> sample(n);
            for (auto& x : sample) {
                x = rng.next_bernoulli(0.3) ? 1 : 0;
            }
            auto h = fit_bernoulli(sample);
            CHECK(std::exp2(-h.item_cost(0)) + std::exp2(-h.item_cost(1)) ==
                  doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("random products stay within the inequality") {
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<FactorSpec> factors;
            std::size_t domain = 1;
            while (true) {
                const std::size_t roll = rng.next_index(3);
                FactorSpec f;
                if (roll == 0) {
                    f = {FactorSpec::Kind::uniform, 2 + rng.next_index(5)};
                } else if (roll == 1) {
                    f = {FactorSpec::Kind::bernoulli, 2};
                } else {
                    f = {FactorSpec::Kind::categorical, 2 + rng.next_index(4)};
                }
                if (domain * f.arity > 4096 || factors.size() >= 8) {
                    break;
                }
                domain *= f.arity;
                factors.push_back(f);
                if (rng.next_bernoulli(0.2)) {
                    break;
                }
            }
            if (factors.empty()) {
                factors.push_back({FactorSpec::Kind::bernoulli, 2});
            }
            std::vector<std::vector<std::int32_t>> records(1 + rng.next_index(50));
            for (auto& r : records) {
                r.resize(factors.size());
                for (std::size_t j = 0; j < factors.size(); ++j) {
                    r[j] = static_cast<std::int32_t>(rng.next_index(factors[j].arity));
                }
            }
            auto h = product_fit(factors, records);
            std::vector<std::size_t> arities;
            for (const auto& f : factors) {
                arities.push_back(f.arity);
            }
            CHECK(kraft_sum(h, arities) <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("Laplace probabilities respect their bounds") {
    SplitRng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t k = 1 + rng.next_index(6);
        const std::size_t n = 1 + rng.next_index(50);
        std::vector<std::int32_t> sample(n);
        for (auto& x : sample) {
            x = static_cast<std::int32_t>(rng.next_index(k));
        }
        auto h = fit_categorical(sample, k);
        const double lo = 1.0 / static_cast<double>(n + k);
        const double hi = static_cast<double>(n + 1) / static_cast<double>(n + k);
        double total = 0.0;
        for (std::size_t v = 0; v < k; ++v) {
            const double p = h.probability(v);
            CHECK(p >= lo);
            CHECK(p <= hi);
            CHECK(p > 0.0);
            total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("fitted counts minimize uncorrected empirical cost") {
    // Brute force over every count vector (c_1..c_k) summing to n; cost of a
    // candidate is sum_i -log2(c[x_i]/n), infinite when an observed outcome
    // gets count zero.
    auto empirical_cost = [](const std::vector<std::int64_t>& counts,
                             const std::vector<std::int32_t>& sample) {
        const double n = static_cast<double>(sample.size());
        double bits = 0.0;
        for (std::int32_t x : sample) {
            const auto c = counts[static_cast<std::size_t>(x)];
            if (c == 0) {
                return std::numeric_limits<double>::infinity();
            }
            bits += -std::log2(static_cast<double>(c) / n);
        }
        return bits;
    };

    SplitRng rng(11);
    for (std::size_t k = 1; k <= 3; ++k) {
        for (std::size_t n = 1; n <= 6; ++n) {
            for (int trial = 0; trial < 10; ++trial) {
                std::vector<std::int32_t> sample(n);
                for (auto& x : sample) {
                    x = static_cast<std::int32_t>(rng.next_index(k));
                }
                const auto fitted = fit_categorical(sample, k);
                const double fitted_cost = empirical_cost(fitted.counts, sample);

                std::vector<std::int64_t> candidate(k, 0);
                // Enumerate compositions of n into k parts.
                std::vector<std::size_t> assign(n, 0);
                for (;;) {
                    std::fill(candidate.begin(), candidate.end(), 0);
                    for (std::size_t i = 0; i < n; ++i) {
                        ++candidate[assign[i]];
                    }
                    CHECK(fitted_cost <= empirical_cost(candidate, sample) + 1e-9);
                    std::size_t j = 0;
                    while (j < n && ++assign[j] == k) {
                        assign[j] = 0;
                        ++j;
                    }
                    if (j == n) {
                        break;
                    }
                }
            }
        }
    }
}
