#include "mdlad/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mdlad/rng.hpp"

namespace mdlad {

namespace {

constexpr int kModelVersion = 1;

nlohmann::json scoring_to_json(const ScoringConfig& c) {
    return {{"probability_mode",
             c.probability_mode == ProbabilityMode::laplace ? "laplace" : "mle"},
            {"aggregation", c.aggregation == Aggregation::sum ? "sum" : "mean"}};
}

ScoringConfig scoring_from_json(const nlohmann::json& j) {
    ScoringConfig c;
    const std::string mode = j.at("probability_mode").get<std::string>();
    const std::string agg = j.at("aggregation").get<std::string>();
    if (mode == "laplace") {
        c.probability_mode = ProbabilityMode::laplace;
    } else if (mode == "mle") {
        c.probability_mode = ProbabilityMode::mle;
    } else {
        throw std::runtime_error("unknown probability_mode '" + mode + "'");
    }
    if (agg == "sum") {
        c.aggregation = Aggregation::sum;
    } else if (agg == "mean") {
        c.aggregation = Aggregation::mean;
    } else {
        throw std::runtime_error("unknown aggregation '" + agg + "'");
    }
    return c;
}

nlohmann::json avc_counts_to_json(const AvcModel& model) {
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& h : model.per_attribute()) {
        counts.push_back(h.counts);
    }
    return counts;
}

AvcModel avc_from_counts(const nlohmann::json& counts, std::size_t n_records,
                         ScoringConfig config) {
    std::vector<CategoricalHypothesis> hyps;
    hyps.reserve(counts.size());
    for (const auto& c : counts) {
        CategoricalHypothesis h;
        h.counts = c.get<std::vector<std::int64_t>>();
        h.sample_size = static_cast<std::int64_t>(n_records);
        hyps.push_back(std::move(h));
    }
    return AvcModel(std::move(hyps), n_records, config);
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    nlohmann::json j;
    in >> j;
    return j;
}

// Recodes `data` against the domains the model was fitted with and returns
// a dataset whose cell codes line up with the stored counts.
CategoricalDataset align_to_model(
    const CategoricalDataset& data, const std::vector<std::string>& columns,
    const std::vector<std::vector<std::string>>& domains) {
    if (data.n_cols() != columns.size()) {
        throw std::runtime_error("dataset has " + std::to_string(data.n_cols()) +
                                 " columns but the model was fitted on " +
                                 std::to_string(columns.size()));
    }
    auto cells = recode_cells(data, domains);
    return CategoricalDataset::from_cells(columns, domains, std::move(cells));
}

class SavedAvcModel final : public SavedModel {
public:
    SavedAvcModel(AvcModel model, std::vector<std::string> columns,
                  std::vector<std::vector<std::string>> domains)
        : model_(std::move(model)),
          columns_(std::move(columns)),
          domains_(std::move(domains)) {}

    std::string type() const override { return "avc"; }

    std::vector<double> score_all(const CategoricalDataset& data) const override {
        const CategoricalDataset aligned = align_to_model(data, columns_, domains_);
        std::vector<double> scores(aligned.n_rows());
        for (std::size_t i = 0; i < aligned.n_rows(); ++i) {
            scores[i] = model_.score(aligned.row(i));
        }
        return scores;
    }

private:
    AvcModel model_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> domains_;
};

class SavedMixtureAvcModel final : public SavedModel {
public:
    SavedMixtureAvcModel(MixtureHypothesis hypothesis,
                         std::vector<std::string> columns,
                         std::vector<std::vector<std::string>> domains)
        : hypothesis_(std::move(hypothesis)),
          columns_(std::move(columns)),
          domains_(std::move(domains)) {}

    std::string type() const override { return "mixture-avc"; }

    std::vector<double> score_all(const CategoricalDataset& data) const override {
        const CategoricalDataset aligned = align_to_model(data, columns_, domains_);
        return mixture_score_all(hypothesis_, aligned).scores;
    }

private:
    MixtureHypothesis hypothesis_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> domains_;
};

class SavedExternMixtureModel final : public SavedModel {
public:
    SavedExternMixtureModel(std::vector<double> record_costs,
                            std::uint64_t fingerprint)
        : record_costs_(std::move(record_costs)), fingerprint_(fingerprint) {}

    std::string type() const override { return "mixture-extern"; }

    std::vector<double> score_all(const CategoricalDataset& data) const override {
        if (data.content_fingerprint() != fingerprint_ ||
            data.n_rows() != record_costs_.size()) {
            throw std::runtime_error(
                "a mixture-extern model stores codelengths only for the "
                "dataset it was fitted on; this dataset does not match");
        }
        return record_costs_;
    }

private:
    std::vector<double> record_costs_;
    std::uint64_t fingerprint_;
};

}  // namespace

void save_avc_model(const std::string& path, const AvcModel& model,
                    const CategoricalDataset& fitted_on) {
    nlohmann::json j = {
        {"version", kModelVersion},
        {"type", "avc"},
        {"scoring", scoring_to_json(model.config())},
        {"columns", fitted_on.column_names()},
        {"domains", fitted_on.domains()},
        {"n_records", model.n_records()},
        {"counts", avc_counts_to_json(model)},
    };
    write_json(path, j);
}

void save_mixture_model(const std::string& path, const MixtureFitResult& result,
                        const CategoricalDataset& fitted_on) {
    const MixtureHypothesis& h = result.hypothesis;
    nlohmann::json j = {
        {"version", kModelVersion},
        {"label_code", h.label_code == LabelCode::optimal ? "optimal" : "uniform"},
        {"n", h.n},
        {"k", h.k()},
        {"label_counts", h.label_model.counts},
        {"assignments", result.report.assignments},
        {"seed", result.report.seed},
        {"rng", result.report.rng_algorithm},
        {"total_cost_bits", result.report.total_cost_bits},
    };
    nlohmann::json per_k = nlohmann::json::object();
    for (const auto& [k, cost] : result.report.per_k_costs) {
        per_k[std::to_string(k)] = cost;
    }
    j["per_k_costs"] = per_k;

    bool all_avc = true;
    for (const auto& c : h.components) {
        if (dynamic_cast<const AvcModel*>(c.get()) == nullptr) {
            all_avc = false;
            break;
        }
    }
    if (all_avc) {
        j["type"] = "mixture-avc";
        j["columns"] = fitted_on.column_names();
        j["domains"] = fitted_on.domains();
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : h.components) {
            const auto* avc = static_cast<const AvcModel*>(c.get());
            comps.push_back({{"n_records", avc->n_records()},
                             {"counts", avc_counts_to_json(*avc)}});
        }
        j["components"] = comps;
    } else {
        j["type"] = "mixture-extern";
        j["dataset_fingerprint"] = fitted_on.content_fingerprint();
        nlohmann::json hcosts = nlohmann::json::array();
        for (const auto& c : h.components) {
            hcosts.push_back(c->hypothesis_cost());
        }
        j["component_hypothesis_costs"] = hcosts;
        j["record_costs"] = mixture_score_all(h, fitted_on).scores;
    }
    write_json(path, j);
}

std::unique_ptr<SavedModel> load_model(const std::string& path) {
    const nlohmann::json j = read_json(path);
    const int version = j.at("version").get<int>();
    if (version != kModelVersion) {
        throw std::runtime_error(path + ": unsupported model version " +
                                 std::to_string(version));
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "avc") {
        AvcModel model = avc_from_counts(j.at("counts"),
                                         j.at("n_records").get<std::size_t>(),
                                         scoring_from_json(j.at("scoring")));
        return std::make_unique<SavedAvcModel>(
            std::move(model), j.at("columns").get<std::vector<std::string>>(),
            j.at("domains").get<std::vector<std::vector<std::string>>>());
    }
    if (type == "mixture-avc") {
        MixtureHypothesis h;
        h.n = j.at("n").get<std::size_t>();
        h.label_code = j.at("label_code").get<std::string>() == "uniform"
                           ? LabelCode::uniform
                           : LabelCode::optimal;
        h.label_model.counts = j.at("label_counts").get<std::vector<std::int64_t>>();
        h.label_model.sample_size = static_cast<std::int64_t>(h.n);
        for (const auto& comp : j.at("components")) {
            h.components.push_back(std::make_unique<AvcModel>(avc_from_counts(
                comp.at("counts"), comp.at("n_records").get<std::size_t>(), {})));
        }
        if (h.components.size() != j.at("k").get<std::size_t>()) {
            throw std::runtime_error(path + ": component count disagrees with k");
        }
        return std::make_unique<SavedMixtureAvcModel>(
            std::move(h), j.at("columns").get<std::vector<std::string>>(),
            j.at("domains").get<std::vector<std::vector<std::string>>>());
    }
    if (type == "mixture-extern") {
        return std::make_unique<SavedExternMixtureModel>(
            j.at("record_costs").get<std::vector<double>>(),
            j.at("dataset_fingerprint").get<std::uint64_t>());
    }
    throw std::runtime_error(path + ": unknown model type '" + type + "'");
}

}  // namespace mdlad
