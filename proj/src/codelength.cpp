#include "mdlad/codelength.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mdlad {

double floor_log2_bits(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("floor_log2_bits: n must be >= 1");
    }
    return static_cast<double>(std::bit_width(n) - 1);
}

double UniformHypothesis::item_cost() const {
    if (domain_size == 0) {
        throw std::invalid_argument("uniform code over empty domain");
    }
    return std::log2(static_cast<double>(domain_size));
}

double BernoulliHypothesis::one_probability() const {
    return static_cast<double>(ones + 1) / static_cast<double>(sample_size + 2);
}

double BernoulliHypothesis::item_cost(int outcome) const {
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("bernoulli outcome must be 0 or 1");
    }
    // 1 - p computed from counts directly so the two probabilities sum to 1
    // without cancellation.
    const std::int64_t hits = outcome == 1 ? ones : sample_size - ones;
    return -std::log2(static_cast<double>(hits + 1) /
                      static_cast<double>(sample_size + 2));
}

double BernoulliHypothesis::hypothesis_cost() const {
    if (sample_size < 1) {
        throw std::invalid_argument("bernoulli hypothesis needs sample_size >= 1");
    }
    return floor_log2_bits(static_cast<std::uint64_t>(sample_size));
}

double CategoricalHypothesis::probability(std::size_t outcome) const {
    if (outcome >= counts.size()) {
        throw std::invalid_argument("unknown category " + std::to_string(outcome));
    }
    return static_cast<double>(counts[outcome] + 1) /
           static_cast<double>(sample_size + static_cast<std::int64_t>(counts.size()));
}

double CategoricalHypothesis::mle_probability(std::size_t outcome) const {
    if (outcome >= counts.size()) {
        throw std::invalid_argument("unknown category " + std::to_string(outcome));
    }
    if (sample_size == 0) {
        throw std::invalid_argument("mle probability undefined for empty sample");
    }
    return static_cast<double>(counts[outcome]) / static_cast<double>(sample_size);
}

double CategoricalHypothesis::item_cost(std::size_t outcome) const {
    return -std::log2(probability(outcome));
}

double CategoricalHypothesis::hypothesis_cost() const {
    if (sample_size < 1 || counts.empty()) {
        throw std::invalid_argument("categorical hypothesis needs n >= 1, k >= 1");
    }
    return static_cast<double>(counts.size() - 1) *
           floor_log2_bits(static_cast<std::uint64_t>(sample_size));
}

BernoulliHypothesis fit_bernoulli(std::span<const std::int32_t> bits) {
    if (bits.empty()) {
        throw std::invalid_argument("empty sample");
    }
    std::int64_t ones = 0;
    for (std::int32_t b : bits) {
        if (b != 0 && b != 1) {
            throw std::invalid_argument("bernoulli sample must contain only 0/1");
        }
        ones += b;
    }
    return BernoulliHypothesis{ones, static_cast<std::int64_t>(bits.size())};
}

CategoricalHypothesis fit_categorical(std::span<const std::int32_t> outcomes,
                                      std::size_t arity) {
    if (outcomes.empty()) {
        throw std::invalid_argument("empty sample");
    }
    if (arity < 1) {
        throw std::invalid_argument("arity must be >= 1");
    }
    CategoricalHypothesis h;
    h.counts.assign(arity, 0);
    for (std::int32_t x : outcomes) {
        if (x < 0 || static_cast<std::size_t>(x) >= arity) {
            throw std::invalid_argument("unknown category " + std::to_string(x));
        }
        ++h.counts[static_cast<std::size_t>(x)];
    }
    h.sample_size = static_cast<std::int64_t>(outcomes.size());
    return h;
}

double factor_item_cost(const FactorHypothesis& h, std::int32_t value) {
    return std::visit(
        [value](const auto& hyp) -> double {
            using T = std::decay_t<decltype(hyp)>;
            if constexpr (std::is_same_v<T, UniformHypothesis>) {
                if (value < 0 ||
                    static_cast<std::uint64_t>(value) >= hyp.domain_size) {
                    throw std::invalid_argument("value outside uniform domain");
                }
                return hyp.item_cost();
            } else if constexpr (std::is_same_v<T, BernoulliHypothesis>) {
                return hyp.item_cost(static_cast<int>(value));
            } else {
                return hyp.item_cost(static_cast<std::size_t>(value));
            }
        },
        h);
}

double factor_hypothesis_cost(const FactorHypothesis& h) {
    return std::visit([](const auto& hyp) { return hyp.hypothesis_cost(); }, h);
}

ProductHypothesis product_fit(std::span<const FactorSpec> factors,
                              const std::vector<std::vector<std::int32_t>>& records) {
    if (records.empty()) {
        throw std::invalid_argument("empty sample");
    }
    for (const auto& r : records) {
        if (r.size() != factors.size()) {
            throw std::invalid_argument("record arity does not match factor count");
        }
    }
    ProductHypothesis h;
    h.components.reserve(factors.size());
    std::vector<std::int32_t> column(records.size());
    for (std::size_t j = 0; j < factors.size(); ++j) {
        for (std::size_t i = 0; i < records.size(); ++i) {
            column[i] = records[i][j];
        }
        switch (factors[j].kind) {
            case FactorSpec::Kind::uniform:
                h.components.emplace_back(
                    UniformHypothesis{static_cast<std::uint64_t>(factors[j].arity)});
                break;
            case FactorSpec::Kind::bernoulli:
                h.components.emplace_back(fit_bernoulli(column));
                break;
            case FactorSpec::Kind::categorical:
                h.components.emplace_back(fit_categorical(column, factors[j].arity));
                break;
        }
    }
    return h;
}

double product_item_cost(const ProductHypothesis& h,
                         std::span<const std::int32_t> record) {
    if (record.size() != h.components.size()) {
        throw std::invalid_argument("record arity does not match product arity");
    }
    double bits = 0.0;
    for (std::size_t j = 0; j < h.components.size(); ++j) {
        bits += factor_item_cost(h.components[j], record[j]);
    }
    return bits;
}

double product_hypothesis_cost(const ProductHypothesis& h) {
    double bits = 0.0;
    for (const auto& c : h.components) {
        bits += factor_hypothesis_cost(c);
    }
    return bits;
}

}  // namespace mdlad
