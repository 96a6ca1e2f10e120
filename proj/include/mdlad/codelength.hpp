#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace mdlad {

/// floor(log2(n)) in bits for n >= 1. Throws on n == 0.
double floor_log2_bits(std::uint64_t n);

/// Uniform code over a finite domain: the single hypothesis costs nothing
/// and every outcome costs log2(|X|) bits.
struct UniformHypothesis {
    std::uint64_t domain_size{1};

    double hypothesis_cost() const { return 0.0; }
    double item_cost() const;
};

/// Two-outcome process stored as (number of ones, sample size).
/// Probabilities are derived with the Laplace correction p = (m+1)/(n+2),
/// so both outcomes keep finite codelength even when never observed.
struct BernoulliHypothesis {
    std::int64_t ones{0};
    std::int64_t sample_size{0};

    double one_probability() const;
    double item_cost(int outcome) const;
    double hypothesis_cost() const;
};

/// k-outcome process stored as raw per-outcome counts. Smoothing is applied
/// only when probabilities are derived: p_i = (counts_i + 1)/(n + k), computed
/// directly for every i including the last.
struct CategoricalHypothesis {
    std::vector<std::int64_t> counts;
    std::int64_t sample_size{0};

    std::size_t arity() const { return counts.size(); }
    double probability(std::size_t outcome) const;
    double mle_probability(std::size_t outcome) const;
    double item_cost(std::size_t outcome) const;
    double hypothesis_cost() const;
};

BernoulliHypothesis fit_bernoulli(std::span<const std::int32_t> bits);
CategoricalHypothesis fit_categorical(std::span<const std::int32_t> outcomes,
                                      std::size_t arity);

/// One factor of an independent product: which scenario it is and, for
/// categorical factors, the outcome arity.
struct FactorSpec {
    enum class Kind { uniform, bernoulli, categorical };
    Kind kind{Kind::categorical};
    std::size_t arity{2};
};

using FactorHypothesis =
    std::variant<UniformHypothesis, BernoulliHypothesis, CategoricalHypothesis>;

double factor_item_cost(const FactorHypothesis& h, std::int32_t value);
double factor_hypothesis_cost(const FactorHypothesis& h);

/// Independent product of per-factor hypotheses; costs add up factor by
/// factor, summed left to right in declared order.
struct ProductHypothesis {
    std::vector<FactorHypothesis> components;
};

ProductHypothesis product_fit(std::span<const FactorSpec> factors,
                              const std::vector<std::vector<std::int32_t>>& records);
double product_item_cost(const ProductHypothesis& h,
                         std::span<const std::int32_t> record);
double product_hypothesis_cost(const ProductHypothesis& h);

}  // namespace mdlad
