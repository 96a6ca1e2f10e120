#include "mdlad/mixture.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mdlad/rng.hpp"

namespace mdlad {

double MixtureHypothesis::label_cost(std::size_t cls) const {
    if (cls >= k()) {
        throw std::invalid_argument("class index out of range");
    }
    if (label_code == LabelCode::uniform) {
        return std::log2(static_cast<double>(k()));
    }
    return label_model.item_cost(cls);
}

std::vector<double> MixtureHypothesis::label_costs() const {
    std::vector<double> bits(k());
    for (std::size_t j = 0; j < k(); ++j) {
        bits[j] = label_cost(j);
    }
    return bits;
}

double MixtureHypothesis::hypothesis_cost() const {
    double bits = floor_log2_bits(static_cast<std::uint64_t>(n));
    if (label_code == LabelCode::optimal) {
        bits += label_model.hypothesis_cost();
    }
    for (const auto& c : components) {
        bits += c->hypothesis_cost();
    }
    return bits;
}

double mixture_item_cost(const MixtureHypothesis& h, RecordView record) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < h.k(); ++j) {
        const double bits = h.label_cost(j) + h.components[j]->item_cost(record);
        if (bits < best) {
            best = bits;
        }
    }
    return best;
}

std::size_t assign(const MixtureHypothesis& h, RecordView record) {
    std::size_t best_class = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < h.k(); ++j) {
        const double bits = h.label_cost(j) + h.components[j]->item_cost(record);
        if (bits < best) {
            best = bits;
            best_class = j;
        }
    }
    return best_class;
}

ScoredRanking mixture_score_all(const MixtureHypothesis& h,
                                const CategoricalDataset& data) {
    const auto costs = component_cost_matrix(h, data);
    const auto label_bits = h.label_costs();
    std::vector<double> scores(data.n_rows());
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < h.k(); ++j) {
            const double bits = label_bits[j] + costs[j][i];
            if (bits < best) {
                best = bits;
            }
        }
        scores[i] = best;
    }
    return make_ranking(std::move(scores));
}

std::vector<std::vector<double>> component_cost_matrix(
    const MixtureHypothesis& h, const CategoricalDataset& data) {
    std::vector<std::vector<double>> costs;
    costs.reserve(h.k());
    for (const auto& c : h.components) {
        costs.push_back(c->item_costs(data));
    }
    return costs;
}

ReassignResult reassign_records(const std::vector<double>& label_costs,
                                const std::vector<std::vector<double>>& costs) {
    if (costs.empty() || costs.size() != label_costs.size()) {
        throw std::invalid_argument("cost matrix and label costs disagree on K");
    }
    const std::size_t n = costs[0].size();
    ReassignResult result;
    result.assignments.resize(n);
    result.data_cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best_class = 0;
        double best = label_costs[0] + costs[0][i];
        for (std::size_t j = 1; j < costs.size(); ++j) {
            const double bits = label_costs[j] + costs[j][i];
            if (bits < best) {
                best = bits;
                best_class = j;
            }
        }
        result.assignments[i] = static_cast<std::uint32_t>(best_class);
        result.data_cost += best;
    }
    return result;
}

double assignment_data_cost(const std::vector<double>& label_costs,
                            const std::vector<std::vector<double>>& costs,
                            const std::vector<std::uint32_t>& assignments) {
    double bits = 0.0;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const std::size_t j = assignments[i];
        bits += label_costs[j] + costs[j][i];
    }
    return bits;
}

namespace {

// Renumbers assignments to contiguous class ids (order-preserving) and
// collects each surviving cluster's rows. Empty clusters vanish here.
struct Clusters {
    std::vector<std::vector<std::size_t>> members;
    std::vector<std::uint32_t> compact_assignments;
};

Clusters compact_clusters(const std::vector<std::uint32_t>& assignments,
                          std::size_t k) {
    std::vector<std::size_t> sizes(k, 0);
    for (std::uint32_t y : assignments) {
        ++sizes[y];
    }
    std::vector<std::uint32_t> remap(k, 0);
    std::size_t next = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (sizes[j] > 0) {
            remap[j] = static_cast<std::uint32_t>(next++);
        }
    }
    Clusters c;
    c.members.resize(next);
    c.compact_assignments.resize(assignments.size());
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const std::uint32_t y = remap[assignments[i]];
        c.compact_assignments[i] = y;
        c.members[y].push_back(i);
    }
    return c;
}

CategoricalHypothesis label_model_from_sizes(
    const std::vector<std::vector<std::size_t>>& members, std::size_t n) {
    CategoricalHypothesis h;
    h.counts.reserve(members.size());
    for (const auto& m : members) {
        h.counts.push_back(static_cast<std::int64_t>(m.size()));
    }
    h.sample_size = static_cast<std::int64_t>(n);
    return h;
}

}  // namespace

FixedKOutcome fit_mixture_fixed_k(const CategoricalDataset& data, std::size_t k,
                                  const BaseLearner& learner,
                                  std::uint64_t init_seed, double epsilon,
                                  std::size_t max_iterations,
                                  LabelCode label_code) {
    const std::size_t n = data.n_rows();
    if (k < 1 || k > n) {
        throw std::invalid_argument("k must lie in [1, n]");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }

    SplitRng rng(init_seed);
    std::vector<std::uint32_t> assignments(n);
    for (std::size_t i = 0; i < n; ++i) {
        assignments[i] = static_cast<std::uint32_t>(rng.next_index(k));
    }

    FixedKOutcome out;
    out.stop = StopReason::iteration_cap;
    double prev_cost = std::numeric_limits<double>::infinity();

    for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
        out.iterations = iter;
        Clusters clusters = compact_clusters(assignments, k);
        k = clusters.members.size();

        MixtureHypothesis hyp;
        hyp.n = n;
        hyp.label_code = label_code;
        hyp.label_model = label_model_from_sizes(clusters.members, n);
        hyp.components.reserve(k);
        for (const auto& rows : clusters.members) {
            hyp.components.push_back(learner.fit(data, rows));
        }

        const auto costs = component_cost_matrix(hyp, data);
        const auto label_bits = hyp.label_costs();
        ReassignResult pass = reassign_records(label_bits, costs);
        const double cost = hyp.hypothesis_cost() + pass.data_cost;

        const bool stable = pass.assignments == clusters.compact_assignments;
        out.hypothesis = std::move(hyp);
        out.cost = cost;
        out.assignments = std::move(pass.assignments);
        assignments = out.assignments;

        if (stable) {
            out.stop = StopReason::assignments_stable;
            break;
        }
        if (prev_cost - cost < epsilon * prev_cost) {
            out.stop = StopReason::epsilon;
            break;
        }
        prev_cost = cost;
    }
    return out;
}

MixtureFitResult fit_mixture(const CategoricalDataset& data,
                             const BaseLearner& learner,
                             const MixtureFitConfig& config) {
    if (config.k_schedule.empty()) {
        throw std::invalid_argument("k_schedule must be nonempty");
    }
    for (std::size_t i = 1; i < config.k_schedule.size(); ++i) {
        if (config.k_schedule[i] <= config.k_schedule[i - 1]) {
            throw std::invalid_argument("k_schedule must be strictly ascending");
        }
    }
    if (config.restarts < 1) {
        throw std::invalid_argument("restarts must be >= 1");
    }

    MixtureFitResult result;
    result.report.seed = config.seed;
    result.report.rng_algorithm = kRngAlgorithm;
    double best_cost = std::numeric_limits<double>::infinity();
    double incumbent = std::numeric_limits<double>::infinity();
    bool have_best = false;

    for (std::size_t k : config.k_schedule) {
        std::vector<FixedKOutcome> runs(config.restarts);
        auto run_restart = [&](std::size_t r) {
            runs[r] = fit_mixture_fixed_k(
                data, k, learner, derive_seed(config.seed, k, r), config.epsilon,
                config.max_iterations, config.label_code);
        };
        const unsigned workers =
            std::min<unsigned>(config.threads,
                               static_cast<unsigned>(config.restarts));
        if (workers > 1) {
            std::vector<std::thread> pool;
            std::atomic<std::size_t> next{0};
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&]() {
                    for (std::size_t r = next.fetch_add(1); r < config.restarts;
                         r = next.fetch_add(1)) {
                        run_restart(r);
                    }
                });
            }
            for (auto& t : pool) {
                t.join();
            }
        } else {
            for (std::size_t r = 0; r < config.restarts; ++r) {
                run_restart(r);
            }
        }

        // Reduce in restart order; the earliest run wins cost ties.
        std::size_t best_r = 0;
        for (std::size_t r = 1; r < config.restarts; ++r) {
            if (runs[r].cost < runs[best_r].cost) {
                best_r = r;
            }
        }
        const double k_cost = runs[best_r].cost;
        result.report.per_k_costs[k] = k_cost;
        auto& iters = result.report.iterations_per_restart[k];
        for (const auto& run : runs) {
            iters.push_back(run.iterations);
        }

        if (k_cost < best_cost) {
            best_cost = k_cost;
            result.hypothesis = std::move(runs[best_r].hypothesis);
            result.report.assignments = std::move(runs[best_r].assignments);
            have_best = true;
        }

        if (std::isfinite(incumbent) &&
            incumbent - k_cost <= config.epsilon * incumbent) {
            result.report.stopped_early = k != config.k_schedule.back();
            break;
        }
        incumbent = std::min(incumbent, k_cost);
    }

    if (!have_best) {
        throw std::logic_error("no mixture fit produced a finite cost");
    }
    result.report.total_cost_bits = best_cost;
    result.report.chosen_k = result.hypothesis.k();
    return result;
}

}  // namespace mdlad
