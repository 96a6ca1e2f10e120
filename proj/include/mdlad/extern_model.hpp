#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mdlad/dataset.hpp"
#include "mdlad/model.hpp"

namespace mdlad {

/// How to reach a foreign batch compressor. The adapter invokes
/// `command... <request-file> <response-file>` in a fresh temp directory per
/// call. Request: a line "FIT n m" followed by n rows of m space-separated
/// integer codes, optionally followed by "SCORE q m" and q more rows to be
/// scored under the hypothesis just fitted. Response: "HCOST <bits>", then
/// one "ICOST <bits>" line per FIT row, then one per SCORE row. Reported
/// costs must be nonnegative, finite codelengths (the Kraft inequality is
/// the tool's obligation; the adapter cannot enumerate foreign domains) and
/// per-record costs must exclude the hypothesis cost, which travels only in
/// HCOST.
struct AdapterDescriptor {
    std::vector<std::string> command;
    std::string workdir;
    double timeout_seconds = 60.0;
    /// Tools that reject SCORE sections can only replay costs of records
    /// they were fitted on.
    bool supports_score = true;

    static AdapterDescriptor from_json_file(const std::string& path);
};

/// A foreign hypothesis held at arm's length: the tool's reported hypothesis
/// cost plus a cache of per-record codelengths keyed by record content.
/// Records outside the cache are scored by re-invoking the tool on the
/// stored fit partition with a SCORE section (the tool must be
/// deterministic); tools without SCORE support make such records an error.
class ExternModel final : public ComponentModel {
public:
    ExternModel(AdapterDescriptor descriptor,
                std::vector<std::vector<std::int32_t>> fit_rows);

    double hypothesis_cost() const override;
    double item_cost(RecordView record) const override;
    std::vector<double> item_costs(const CategoricalDataset& data) const override;

    std::size_t fit_size() const { return fit_rows_.size(); }
    bool fitted() const { return fitted_; }

private:
    friend std::unique_ptr<ExternModel> extern_fit(
        const AdapterDescriptor& descriptor, const CategoricalDataset& data,
        std::span<const std::size_t> rows, bool score_whole_dataset);

    void run_fit(const std::vector<std::vector<std::int32_t>>& score_rows);
    std::vector<double> score_via_tool(
        const std::vector<std::vector<std::int32_t>>& rows) const;

    AdapterDescriptor descriptor_;
    std::vector<std::vector<std::int32_t>> fit_rows_;
    bool fitted_{false};
    double hypothesis_cost_bits_{0.0};
    mutable std::mutex mutex_;  // one tool invocation at a time per handle
    mutable std::unordered_map<std::string, double> cost_cache_;
};

/// Fits the foreign tool on a row subset. With score_whole_dataset set the
/// same invocation also scores every record of `data`, priming the cache
/// for mixture reassignment passes.
std::unique_ptr<ExternModel> extern_fit(const AdapterDescriptor& descriptor,
                                        const CategoricalDataset& data,
                                        std::span<const std::size_t> rows,
                                        bool score_whole_dataset = false);

double extern_item_cost(const ExternModel& model, RecordView record);

/// Plugs the foreign compressor into the mixture meta-learner. Every refit
/// is one tool invocation: FIT on the cluster rows plus SCORE over the full
/// dataset.
class ExternLearner final : public BaseLearner {
public:
    explicit ExternLearner(AdapterDescriptor descriptor);

    std::unique_ptr<ComponentModel> fit(
        const CategoricalDataset& data,
        std::span<const std::size_t> rows) const override;

private:
    AdapterDescriptor descriptor_;
};

}  // namespace mdlad
