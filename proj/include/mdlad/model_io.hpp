#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mdlad/avc.hpp"
#include "mdlad/dataset.hpp"
#include "mdlad/mixture.hpp"

namespace mdlad {

/// A model reloaded from disk, reduced to what scoring needs. Counts are
/// stored raw and smoothing is reapplied at load time, so serialized models
/// and freshly fitted ones score identically.
class SavedModel {
public:
    virtual ~SavedModel() = default;
    virtual std::string type() const = 0;
    virtual std::vector<double> score_all(const CategoricalDataset& data) const = 0;
};

void save_avc_model(const std::string& path, const AvcModel& model,
                    const CategoricalDataset& fitted_on);

/// Serializes a fitted mixture. AVC-backed components are written as raw
/// count tables. Foreign-tool components have no portable hypothesis, so the
/// model instead pins the fitted dataset by fingerprint and stores the
/// per-record mixture codelengths; such a model can only re-score the exact
/// dataset it was fitted on.
void save_mixture_model(const std::string& path, const MixtureFitResult& result,
                        const CategoricalDataset& fitted_on);

std::unique_ptr<SavedModel> load_model(const std::string& path);

}  // namespace mdlad
