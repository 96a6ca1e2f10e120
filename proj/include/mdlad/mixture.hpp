#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mdlad/codelength.hpp"
#include "mdlad/dataset.hpp"
#include "mdlad/model.hpp"
#include "mdlad/ranking.hpp"

namespace mdlad {

/// How class labels are coded inside the mixture: an optimal (Laplace
/// categorical) code over observed cluster sizes, or a fixed uniform code
/// over the K classes (which makes the label term a constant, the behavior
/// of clustering schemes that ignore label cost).
enum class LabelCode { optimal, uniform };

/// A K-component mixture hypothesis: K itself (pinned to floor(log2 n)
/// bits), a label model over cluster sizes, and one base-model hypothesis
/// per component. A record costs min over components of label bits plus
/// component bits.
struct MixtureHypothesis {
    std::size_t n{0};  // dataset size; prices the K term
    LabelCode label_code{LabelCode::optimal};
    CategoricalHypothesis label_model;  // arity K, counts = cluster sizes
    std::vector<std::unique_ptr<ComponentModel>> components;

    std::size_t k() const { return components.size(); }
    double label_cost(std::size_t cls) const;
    std::vector<double> label_costs() const;
    double hypothesis_cost() const;
};

double mixture_item_cost(const MixtureHypothesis& h, RecordView record);

/// The class achieving the item-cost minimum; ties go to the lowest index.
std::size_t assign(const MixtureHypothesis& h, RecordView record);

ScoredRanking mixture_score_all(const MixtureHypothesis& h,
                                const CategoricalDataset& data);

/// Per-component codelengths of every record: matrix[j][i] = bits for
/// record i under component j.
std::vector<std::vector<double>> component_cost_matrix(
    const MixtureHypothesis& h, const CategoricalDataset& data);

/// One reassignment pass with hypotheses held fixed. Returns the argmin
/// class per record and the summed data cost (label + component bits of
/// each record's best class, accumulated in record order). Never increases
/// the data cost of the incoming assignment.
struct ReassignResult {
    std::vector<std::uint32_t> assignments;
    double data_cost;
};
ReassignResult reassign_records(const std::vector<double>& label_costs,
                                const std::vector<std::vector<double>>& costs);

/// Data cost of a fixed assignment under fixed hypotheses (for monotonicity
/// checks against reassign_records).
double assignment_data_cost(const std::vector<double>& label_costs,
                            const std::vector<std::vector<double>>& costs,
                            const std::vector<std::uint32_t>& assignments);

enum class StopReason { assignments_stable, epsilon, iteration_cap };

struct FixedKOutcome {
    MixtureHypothesis hypothesis;
    double cost{0.0};  // hypothesis + data bits
    std::size_t iterations{0};
    std::vector<std::uint32_t> assignments;
    StopReason stop{StopReason::assignments_stable};
};

/// Alternating fit at fixed k from one random initialization: refit
/// components on current clusters, refit the label model on cluster sizes,
/// reassign every record, until total cost improves by less than
/// epsilon * previous cost or assignments stabilize. Clusters emptied by
/// reassignment are dropped, so the returned hypothesis may have fewer than
/// k components.
FixedKOutcome fit_mixture_fixed_k(const CategoricalDataset& data, std::size_t k,
                                  const BaseLearner& learner,
                                  std::uint64_t init_seed, double epsilon,
                                  std::size_t max_iterations = 100,
                                  LabelCode label_code = LabelCode::optimal);

struct MixtureFitConfig {
    std::vector<std::size_t> k_schedule{1, 2, 4, 8, 16, 20};
    std::size_t restarts = 10;
    double epsilon = 0.001;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 100;
    LabelCode label_code = LabelCode::optimal;
    /// Restarts within one k run on up to this many worker threads; results
    /// are reduced in restart order so scheduling never changes the output.
    unsigned threads = 1;
};

struct FitReport {
    std::size_t chosen_k{0};  // surviving components of the best hypothesis
    double total_cost_bits{0.0};
    std::map<std::size_t, double> per_k_costs;  // scheduled k -> best cost
    std::map<std::size_t, std::vector<std::size_t>> iterations_per_restart;
    std::vector<std::uint32_t> assignments;
    std::uint64_t seed{0};
    std::string rng_algorithm;
    bool stopped_early{false};  // K search ended before the schedule did
};

struct MixtureFitResult {
    MixtureHypothesis hypothesis;
    FitReport report;
};

/// Full K search: for each scheduled k, the best of `restarts` independent
/// fixed-k fits (seeds derived from config.seed per (k, restart)); the
/// search stops early once a k fails to improve the incumbent best cost by
/// more than an epsilon fraction. Returns the globally best hypothesis over
/// all runs executed.
MixtureFitResult fit_mixture(const CategoricalDataset& data,
                             const BaseLearner& learner,
                             const MixtureFitConfig& config);

}  // namespace mdlad
