#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mdlad/codelength.hpp"
#include "mdlad/dataset.hpp"
#include "mdlad/model.hpp"
#include "mdlad/ranking.hpp"

namespace mdlad {

enum class ProbabilityMode { laplace, mle };
enum class Aggregation { sum, mean };

/// How avc_score turns per-attribute probabilities into a record score.
/// The default (laplace + sum) is the true codelength and the only mode
/// valid inside a mixture; mle + mean reproduces uncorrected per-attribute
/// probabilities averaged over attributes.
struct ScoringConfig {
    ProbabilityMode probability_mode = ProbabilityMode::laplace;
    Aggregation aggregation = Aggregation::sum;
};

/// Attribute Value Coding: one categorical hypothesis per column, fitted
/// independently; a record's codelength is the sum of its per-attribute
/// codelengths (left to right in column order).
class AvcModel final : public ComponentModel {
public:
    AvcModel(std::vector<CategoricalHypothesis> per_attribute,
             std::size_t n_records, ScoringConfig config = {});

    double hypothesis_cost() const override;
    /// Kraft-valid codelength (always laplace + sum, whatever the scoring
    /// config says); this is what mixtures consume.
    double item_cost(RecordView record) const override;

    /// Anomaly score under the model's scoring config.
    double score(RecordView record) const;

    const std::vector<CategoricalHypothesis>& per_attribute() const {
        return per_attribute_;
    }
    std::size_t n_records() const { return n_records_; }
    const ScoringConfig& config() const { return config_; }

private:
    std::vector<CategoricalHypothesis> per_attribute_;
    std::size_t n_records_;
    ScoringConfig config_;
    std::vector<std::vector<double>> laplace_bits_;  // [col][value]
};

/// Fits every column of the dataset independently.
AvcModel fit_avc(const CategoricalDataset& data, ScoringConfig config = {});

/// Fits on a row subset; column arities still come from the full dataset's
/// domains.
AvcModel fit_avc_rows(const CategoricalDataset& data,
                      std::span<const std::size_t> rows,
                      ScoringConfig config = {});

double avc_score(const AvcModel& model, RecordView record);

/// Scores every record and ranks descending (ties by ascending record id).
ScoredRanking avc_score_all(const AvcModel& model, const CategoricalDataset& data);

/// AVC as a mixture component learner. Stateless: domains and arities are
/// read off the dataset handed to fit, components always score laplace+sum.
class AvcLearner final : public BaseLearner {
public:
    std::unique_ptr<ComponentModel> fit(
        const CategoricalDataset& data,
        std::span<const std::size_t> rows) const override;
};

}  // namespace mdlad
