#include "mdlad/avc.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mdlad {

AvcModel::AvcModel(std::vector<CategoricalHypothesis> per_attribute,
                   std::size_t n_records, ScoringConfig config)
    : per_attribute_(std::move(per_attribute)),
      n_records_(n_records),
      config_(config) {
    if (per_attribute_.empty()) {
        throw std::invalid_argument("AVC model needs at least one attribute");
    }
    for (const auto& h : per_attribute_) {
        if (static_cast<std::size_t>(h.sample_size) != n_records_) {
            throw std::invalid_argument(
                "all attribute hypotheses must share the same sample size");
        }
    }
    laplace_bits_.reserve(per_attribute_.size());
    for (const auto& h : per_attribute_) {
        std::vector<double> bits(h.arity());
        for (std::size_t v = 0; v < h.arity(); ++v) {
            bits[v] = h.item_cost(v);
        }
        laplace_bits_.push_back(std::move(bits));
    }
}

double AvcModel::hypothesis_cost() const {
    double bits = 0.0;
    for (const auto& h : per_attribute_) {
        bits += h.hypothesis_cost();
    }
    return bits;
}

double AvcModel::item_cost(RecordView record) const {
    if (record.size() != per_attribute_.size()) {
        throw std::invalid_argument("record arity does not match model");
    }
    double bits = 0.0;
    for (std::size_t j = 0; j < record.size(); ++j) {
        const auto v = static_cast<std::size_t>(record[j]);
        if (record[j] < 0 || v >= laplace_bits_[j].size()) {
            throw std::invalid_argument("value outside attribute domain");
        }
        bits += laplace_bits_[j][v];
    }
    return bits;
}

double AvcModel::score(RecordView record) const {
    if (record.size() != per_attribute_.size()) {
        throw std::invalid_argument("record arity does not match model");
    }
    double bits = 0.0;
    if (config_.probability_mode == ProbabilityMode::laplace) {
        bits = item_cost(record);
    } else {
        for (std::size_t j = 0; j < record.size(); ++j) {
            const double p =
                per_attribute_[j].mle_probability(static_cast<std::size_t>(record[j]));
            if (p == 0.0) {
                throw std::invalid_argument("zero-probability value under MLE");
            }
            bits += -std::log2(p);
        }
    }
    if (config_.aggregation == Aggregation::mean) {
        bits /= static_cast<double>(per_attribute_.size());
    }
    return bits;
}

AvcModel fit_avc(const CategoricalDataset& data, ScoringConfig config) {
    std::vector<std::size_t> rows(data.n_rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return fit_avc_rows(data, rows, config);
}

AvcModel fit_avc_rows(const CategoricalDataset& data,
                      std::span<const std::size_t> rows, ScoringConfig config) {
    if (rows.empty()) {
        throw std::invalid_argument("empty sample");
    }
    std::vector<CategoricalHypothesis> hyps;
    hyps.reserve(data.n_cols());
    for (std::size_t j = 0; j < data.n_cols(); ++j) {
        CategoricalHypothesis h;
        h.counts.assign(data.arity(j), 0);
        for (std::size_t i : rows) {
            ++h.counts[static_cast<std::size_t>(data.at(i, j))];
        }
        h.sample_size = static_cast<std::int64_t>(rows.size());
        hyps.push_back(std::move(h));
    }
    return AvcModel(std::move(hyps), rows.size(), config);
}

double avc_score(const AvcModel& model, RecordView record) {
    return model.score(record);
}

ScoredRanking avc_score_all(const AvcModel& model, const CategoricalDataset& data) {
    std::vector<double> scores(data.n_rows());
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        scores[i] = model.score(data.row(i));
    }
    return make_ranking(std::move(scores));
}

std::unique_ptr<ComponentModel> AvcLearner::fit(
    const CategoricalDataset& data, std::span<const std::size_t> rows) const {
    return std::make_unique<AvcModel>(fit_avc_rows(data, rows));
}

}  // namespace mdlad
