#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mdlad/dataset.hpp"

namespace mdlad {

/// A fitted base model: a hypothesis with its two codelength functions.
/// Contract: hypothesis_cost() and item_cost() are nonnegative and finite
/// for every record in the observation space, and for each hypothesis the
/// item codelengths satisfy the Kraft inequality (sum over the space of
/// 2^-item_cost(x) <= 1). Implementations are immutable after fitting and
/// safe to read from concurrent workers.
class ComponentModel {
public:
    virtual ~ComponentModel() = default;

    virtual double hypothesis_cost() const = 0;
    virtual double item_cost(RecordView record) const = 0;

    /// Costs for every record of a dataset. The default loops over
    /// item_cost; batch-oriented models (external compressors) override it.
    virtual std::vector<double> item_costs(const CategoricalDataset& data) const;
};

/// Fits a ComponentModel to a row subset of a dataset. The dataset carries
/// the full-data column domains, so hypotheses fitted on any subset share
/// one observation space and their codelengths are comparable.
class BaseLearner {
public:
    virtual ~BaseLearner() = default;

    virtual std::unique_ptr<ComponentModel> fit(
        const CategoricalDataset& data, std::span<const std::size_t> rows) const = 0;
};

}  // namespace mdlad
