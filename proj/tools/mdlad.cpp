// mdlad: fit MDL compression models to categorical data and rank records by
// compressed size. Subcommands: synth, fit, score, eval, sweep-k.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "mdlad/avc.hpp"
#include "mdlad/csv.hpp"
#include "mdlad/extern_model.hpp"
#include "mdlad/metrics.hpp"
#include "mdlad/mixture.hpp"
#include "mdlad/model_io.hpp"
#include "mdlad/ranking.hpp"
#include "mdlad/rng.hpp"
#include "mdlad/synthetic.hpp"

namespace {

using namespace mdlad;

std::string bits6(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

std::string metric4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", x);
    return buf;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) {
            out.push_back(std::stoull(tok));
        }
    }
    if (out.empty()) {
        throw std::runtime_error("empty list '" + text + "'");
    }
    return out;
}

unsigned thread_cap() {
    if (const char* env = std::getenv("MDLAD_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) {
            return static_cast<unsigned>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// A K above the record count cannot be fitted; drop such entries rather than
// failing a small-data run on the default schedule.
std::vector<std::size_t> clamp_schedule(std::vector<std::size_t> ks,
                                        std::size_t n_rows) {
    std::vector<std::size_t> kept;
    for (std::size_t k : ks) {
        if (k <= n_rows) {
            kept.push_back(k);
        } else {
            std::cerr << "warning: dropping K=" << k << " (only " << n_rows
                      << " records)\n";
        }
    }
    if (kept.empty()) {
        throw std::runtime_error("no usable K values for " +
                                 std::to_string(n_rows) + " records");
    }
    return kept;
}

struct DataArgs {
    std::string path;
    std::string label_column;
    std::string anomaly_value = "1";
    std::string delimiter = ",";
    bool no_header = false;
    bool one_hot = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--data", path, "input CSV file")->required();
        cmd->add_option("--label-column", label_column,
                        "column holding ground-truth labels; stripped from the data");
        cmd->add_option("--anomaly-value", anomaly_value,
                        "label value marking an anomaly (default 1)");
        cmd->add_option("--delimiter", delimiter, "field delimiter (default ,)");
        cmd->add_flag("--no-header", no_header, "data file has no header row");
        cmd->add_flag("--one-hot", one_hot,
                      "binary-encode columns with more than two values");
    }

    CategoricalDataset load() const {
        CsvOptions opt;
        opt.has_header = !no_header;
        if (delimiter.size() != 1) {
            throw std::runtime_error("delimiter must be a single character");
        }
        opt.delimiter = delimiter[0];
        if (!label_column.empty()) {
            opt.label_column = label_column;
        }
        opt.anomaly_value = anomaly_value;
        auto d = load_csv(path, opt);
        return one_hot ? one_hot_encode(d) : d;
    }
};

std::vector<std::uint8_t> resolve_labels(const CategoricalDataset& data,
                                         const std::string& labels_path,
                                         const std::string& anomaly_value) {
    if (!labels_path.empty()) {
        auto labels = load_labels_csv(labels_path, anomaly_value);
        if (labels.size() != data.n_rows()) {
            throw std::runtime_error("label file has " +
                                     std::to_string(labels.size()) +
                                     " rows but the data has " +
                                     std::to_string(data.n_rows()));
        }
        return labels;
    }
    if (data.has_labels()) {
        return data.labels();
    }
    throw std::runtime_error(
        "no labels: pass --labels <file> or --label-column <name>");
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
    std::string spec_json;
    std::string clusters = "334,333,333";
    std::size_t attributes = 12;
    std::size_t anomalies = 3;
    double active_p = 0.9;
    double inactive_p = 0.1;
    std::uint64_t seed = 0;
    std::string out;
    std::string labels_out;
};

void run_synth(const SynthArgs& a, bool seed_given) {
    SyntheticSpec spec;
    if (!a.spec_json.empty()) {
        spec = SyntheticSpec::from_json_file(a.spec_json);
        if (seed_given) {
            spec.seed = a.seed;
        }
    } else {
        const auto sizes = parse_size_list(a.clusters);
        spec.cluster_sizes = sizes;
        spec.attribute_count = a.attributes;
        spec.anomaly_count = a.anomalies;
        spec.seed = a.seed;
        // Disjoint active blocks, one per cluster.
        spec.cluster_probs.assign(sizes.size(),
                                  std::vector<double>(a.attributes, a.inactive_p));
        const std::size_t block =
            std::max<std::size_t>(1, a.attributes / sizes.size());
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            for (std::size_t j = c * block;
                 j < std::min(a.attributes, (c + 1) * block); ++j) {
                spec.cluster_probs[c][j] = a.active_p;
            }
        }
    }
    const auto data = generate_synthetic(spec);
    write_csv(data, a.out);
    if (!a.labels_out.empty()) {
        write_labels_csv(data.labels(), a.labels_out);
    }
    std::cout << "seed: " << spec.seed << "\n"
              << "records: " << data.n_rows() << "\n"
              << "columns: " << data.n_cols() << "\n"
              << "anomalies: "
              << std::accumulate(data.labels().begin(), data.labels().end(),
                                 std::size_t{0})
              << "\n"
              << "data written: " << a.out << "\n";
    if (!a.labels_out.empty()) {
        std::cout << "labels written: " << a.labels_out << "\n";
    }
}

// ------------------------------------------------------------------ fit ----

struct FitArgs {
    DataArgs data;
    std::string model = "avc";
    std::string scoring = "laplace-sum";
    std::string k_schedule = "1,2,4,8,16,20";
    std::size_t restarts = 10;
    double epsilon = 0.001;
    std::uint64_t seed = 0;
    std::string label_code = "optimal";
    std::string extern_descriptor;
    std::string out;
    bool json = false;
};

ScoringConfig parse_scoring(const std::string& s) {
    if (s == "laplace-sum") {
        return {ProbabilityMode::laplace, Aggregation::sum};
    }
    if (s == "mle-mean") {
        return {ProbabilityMode::mle, Aggregation::mean};
    }
    throw std::runtime_error("unknown scoring '" + s +
                             "' (expected laplace-sum or mle-mean)");
}

void print_fit_report(const FitReport& report, const std::string& model,
                      const std::string& out, bool json) {
    if (json) {
        nlohmann::json j = {{"model", model},
                            {"seed", report.seed},
                            {"rng", report.rng_algorithm},
                            {"chosen_k", report.chosen_k},
                            {"total_cost_bits", report.total_cost_bits},
                            {"stopped_early", report.stopped_early},
                            {"model_path", out}};
        nlohmann::json per_k = nlohmann::json::object();
        for (const auto& [k, cost] : report.per_k_costs) {
            per_k[std::to_string(k)] = cost;
        }
        j["per_k_costs"] = per_k;
        nlohmann::json iters = nlohmann::json::object();
        for (const auto& [k, v] : report.iterations_per_restart) {
            iters[std::to_string(k)] = v;
        }
        j["iterations_per_restart"] = iters;
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::cout << "model: " << model << "\n"
              << "seed: " << report.seed << "  rng: " << report.rng_algorithm
              << "\n"
              << "chosen K: " << report.chosen_k << "\n"
              << "total cost: " << bits6(report.total_cost_bits) << " bits\n";
    for (const auto& [k, cost] : report.per_k_costs) {
        std::cout << "  K=" << k << " best cost: " << bits6(cost) << " bits\n";
    }
    std::cout << "early stop: " << (report.stopped_early ? "yes" : "no") << "\n"
              << "model written: " << out << "\n";
}

void run_fit(const FitArgs& a) {
    const auto data = a.data.load();
    if (a.model == "avc") {
        const auto model = fit_avc(data, parse_scoring(a.scoring));
        save_avc_model(a.out, model, data);
        double total = floor_log2_bits(data.n_rows()) + model.hypothesis_cost();
        for (std::size_t i = 0; i < data.n_rows(); ++i) {
            total += model.item_cost(data.row(i));
        }
        if (a.json) {
            nlohmann::json j = {{"model", "avc"},
                                {"seed", a.seed},
                                {"total_cost_bits", total},
                                {"model_path", a.out}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "model: avc\n"
                      << "seed: " << a.seed << "\n"
                      << "total cost: " << bits6(total) << " bits\n"
                      << "model written: " << a.out << "\n";
        }
        return;
    }

    if (a.scoring != "laplace-sum") {
        std::cerr << "warning: --scoring applies to model=avc only; mixture "
                     "components always use laplace-sum codelengths\n";
    }
    MixtureFitConfig cfg;
    cfg.k_schedule = clamp_schedule(parse_size_list(a.k_schedule), data.n_rows());
    cfg.restarts = a.restarts;
    cfg.epsilon = a.epsilon;
    cfg.seed = a.seed;
    cfg.threads = thread_cap();
    if (a.label_code == "uniform") {
        cfg.label_code = LabelCode::uniform;
    } else if (a.label_code != "optimal") {
        throw std::runtime_error("unknown label code '" + a.label_code + "'");
    }

    MixtureFitResult result;
    if (a.model == "mixture-avc") {
        const AvcLearner learner;
        result = fit_mixture(data, learner, cfg);
    } else if (a.model == "mixture-extern") {
        if (a.extern_descriptor.empty()) {
            throw std::runtime_error(
                "--extern-descriptor is required for model=mixture-extern");
        }
        const ExternLearner learner(
            AdapterDescriptor::from_json_file(a.extern_descriptor));
        result = fit_mixture(data, learner, cfg);
    } else {
        throw std::runtime_error("unknown model '" + a.model + "'");
    }
    save_mixture_model(a.out, result, data);
    print_fit_report(result.report, a.model, a.out, a.json);
}

// ---------------------------------------------------------------- score ----

struct ScoreArgs {
    DataArgs data;
    std::string model;
    std::string out;
    std::string format = "csv";
};

void run_score(const ScoreArgs& a) {
    const auto data = a.data.load();
    const auto model = load_model(a.model);
    const auto ranking = make_ranking(model->score_all(data));
    RankingFormat format;
    if (a.format == "csv") {
        format = RankingFormat::csv;
    } else if (a.format == "json") {
        format = RankingFormat::json;
    } else {
        throw std::runtime_error("unknown format '" + a.format + "'");
    }
    export_ranking(ranking, data.has_labels() ? &data.labels() : nullptr, a.out,
                   format);
    std::cout << "model: " << model->type() << "\n"
              << "records scored: " << data.n_rows() << "\n"
              << "ranking written: " << a.out << "\n";
}

// ----------------------------------------------------------------- eval ----

struct EvalArgs {
    std::string ranking;
    std::string labels;
    std::string anomaly_value = "1";
    bool json = false;
};

void run_eval(const EvalArgs& a) {
    const auto ranking = load_ranking_csv(a.ranking);
    const auto labels = load_labels_csv(a.labels, a.anomaly_value);
    if (labels.size() != ranking.scores.size()) {
        throw std::runtime_error("ranking and labels disagree on record count");
    }
    const LabeledRanking lr(ranking.scores, labels);
    const double auc_v = auc(lr);
    const double ndcg_v = ndcg(lr);
    if (a.json) {
        nlohmann::json j = {{"auc", auc_v}, {"ndcg", ndcg_v}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "AUC " << metric4(auc_v) << "\n"
                  << "nDCG " << metric4(ndcg_v) << "\n";
    }
}

// -------------------------------------------------------------- sweep-k ----

struct SweepArgs {
    DataArgs data;
    std::string labels_path;
    std::string k_schedule = "1,2,4,8,16,20";
    std::size_t restarts = 10;
    double epsilon = 0.001;
    std::uint64_t seed = 0;
    std::string out;
    bool json = false;
};

void run_sweep(const SweepArgs& a) {
    const auto data = a.data.load();
    const auto labels = resolve_labels(data, a.labels_path, a.data.anomaly_value);

    auto ks = clamp_schedule(parse_size_list(a.k_schedule), data.n_rows());
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    if (ks.front() != 1) {
        ks.insert(ks.begin(), 1);  // baseline for the relative-cost column
    }

    struct Run {
        double cost;
        double auc_v;
        double ndcg_v;
    };
    const AvcLearner learner;
    std::vector<std::vector<Run>> runs(ks.size(), std::vector<Run>(a.restarts));
    struct Job {
        std::size_t k_index;
        std::size_t restart;
    };
    std::vector<Job> jobs;
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        for (std::size_t r = 0; r < a.restarts; ++r) {
            jobs.push_back({ki, r});
        }
    }
    auto run_job = [&](const Job& job) {
        const auto out = fit_mixture_fixed_k(
            data, ks[job.k_index], learner,
            derive_seed(a.seed, ks[job.k_index], job.restart), a.epsilon);
        const auto ranking = mixture_score_all(out.hypothesis, data);
        const LabeledRanking lr(ranking.scores, labels);
        runs[job.k_index][job.restart] = Run{out.cost, auc(lr), ndcg(lr)};
    };
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(thread_cap(), jobs.size()));
    if (workers > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < jobs.size();
                     i = next.fetch_add(1)) {
                    run_job(jobs[i]);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    } else {
        for (const auto& job : jobs) {
            run_job(job);
        }
    }

    struct SweepRow {
        std::size_t k;
        double median_cost, relative_cost;
        double median_auc, max_auc, median_ndcg, max_ndcg;
    };
    std::vector<SweepRow> rows;
    double baseline = 0.0;
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        std::vector<double> costs, aucs, ndcgs;
        for (const auto& r : runs[ki]) {
            costs.push_back(r.cost);
            aucs.push_back(r.auc_v);
            ndcgs.push_back(r.ndcg_v);
        }
        SweepRow row;
        row.k = ks[ki];
        row.median_cost = median(costs);
        if (ki == 0) {
            baseline = row.median_cost;
        }
        row.relative_cost = row.median_cost / baseline;
        row.median_auc = median(aucs);
        row.max_auc = *std::max_element(aucs.begin(), aucs.end());
        row.median_ndcg = median(ndcgs);
        row.max_ndcg = *std::max_element(ndcgs.begin(), ndcgs.end());
        rows.push_back(row);
    }

    std::ostringstream table;
    table << "k,median_cost_bits,relative_cost,median_auc,max_auc,"
             "median_ndcg,max_ndcg\n";
    for (const auto& r : rows) {
        table << r.k << ',' << bits6(r.median_cost) << ','
              << metric4(r.relative_cost) << ',' << metric4(r.median_auc) << ','
              << metric4(r.max_auc) << ',' << metric4(r.median_ndcg) << ','
              << metric4(r.max_ndcg) << '\n';
    }
    if (a.json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            arr.push_back({{"k", r.k},
                           {"median_cost_bits", r.median_cost},
                           {"relative_cost", r.relative_cost},
                           {"median_auc", r.median_auc},
                           {"max_auc", r.max_auc},
                           {"median_ndcg", r.median_ndcg},
                           {"max_ndcg", r.max_ndcg}});
        }
        std::cout << "seed: " << a.seed << "\n" << arr.dump(2) << "\n";
    } else {
        std::cout << "seed: " << a.seed << "\n" << table.str();
    }
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) {
            throw std::runtime_error("cannot write '" + a.out + "'");
        }
        f << table.str();
        std::cout << "table written: " << a.out << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MDL-based anomaly detection for categorical data"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd =
        app.add_subcommand("synth", "generate a synthetic heterogeneous dataset");
    synth_cmd->add_option("--spec-json", synth.spec_json,
                          "full generator spec as a JSON file");
    synth_cmd->add_option("--clusters", synth.clusters,
                          "comma-separated cluster sizes (default 334,333,333)");
    synth_cmd->add_option("--attributes", synth.attributes,
                          "number of binary attributes (default 12)");
    synth_cmd->add_option("--anomalies", synth.anomalies,
                          "seeded anomaly count (default 3)");
    synth_cmd->add_option("--active-p", synth.active_p,
                          "in-block attribute probability (default 0.9)");
    synth_cmd->add_option("--inactive-p", synth.inactive_p,
                          "out-of-block attribute probability (default 0.1)");
    synth_cmd->add_option("--seed", synth.seed, "generator seed");
    synth_cmd->add_option("--out", synth.out, "output data CSV")->required();
    synth_cmd->add_option("--labels-out", synth.labels_out, "output labels CSV");
    synth_cmd->callback(
        [&, synth_cmd]() { run_synth(synth, synth_cmd->count("--seed") > 0); });

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "fit a model to a dataset");
    fit.data.attach(fit_cmd);
    fit_cmd->add_option("--model", fit.model,
                        "avc | mixture-avc | mixture-extern (default avc)");
    fit_cmd->add_option("--scoring", fit.scoring,
                        "laplace-sum | mle-mean (avc only; default laplace-sum)");
    fit_cmd->add_option("--k-schedule", fit.k_schedule,
                        "comma-separated K values (default 1,2,4,8,16,20)");
    fit_cmd->add_option("--restarts", fit.restarts,
                        "random restarts per K (default 10)");
    fit_cmd->add_option("--epsilon", fit.epsilon,
                        "relative improvement threshold (default 0.001)");
    fit_cmd->add_option("--seed", fit.seed, "base seed for restarts");
    fit_cmd->add_option("--label-code", fit.label_code,
                        "optimal | uniform class-label code (default optimal)");
    fit_cmd->add_option("--extern-descriptor", fit.extern_descriptor,
                        "adapter descriptor JSON for mixture-extern");
    fit_cmd->add_option("--out", fit.out, "output model JSON")->required();
    fit_cmd->add_flag("--json", fit.json, "machine-readable report");
    fit_cmd->callback([&]() { run_fit(fit); });

    ScoreArgs score;
    auto* score_cmd =
        app.add_subcommand("score", "score records under a fitted model");
    score.data.attach(score_cmd);
    score_cmd->add_option("--model", score.model, "model JSON from fit")
        ->required();
    score_cmd->add_option("--out", score.out, "output ranking file")->required();
    score_cmd->add_option("--format", score.format, "csv | json (default csv)");
    score_cmd->callback([&]() { run_score(score); });

    EvalArgs eval;
    auto* eval_cmd =
        app.add_subcommand("eval", "evaluate a ranking against ground truth");
    eval_cmd->add_option("--ranking", eval.ranking, "ranking CSV from score")
        ->required();
    eval_cmd->add_option("--labels", eval.labels, "labels CSV")->required();
    eval_cmd->add_option("--anomaly-value", eval.anomaly_value,
                         "label value marking an anomaly (default 1)");
    eval_cmd->add_flag("--json", eval.json, "machine-readable output");
    eval_cmd->callback([&]() { run_eval(eval); });

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand(
        "sweep-k", "fit at several K values and tabulate cost and metrics");
    sweep.data.attach(sweep_cmd);
    sweep_cmd->add_option("--labels", sweep.labels_path,
                          "labels CSV (or use --label-column)");
    sweep_cmd->add_option("--k-schedule", sweep.k_schedule,
                          "comma-separated K values (default 1,2,4,8,16,20)");
    sweep_cmd->add_option("--restarts", sweep.restarts, "runs per K (default 10)");
    sweep_cmd->add_option("--epsilon", sweep.epsilon,
                          "convergence threshold (default 0.001)");
    sweep_cmd->add_option("--seed", sweep.seed, "base seed");
    sweep_cmd->add_option("--out", sweep.out, "also write the table here");
    sweep_cmd->add_flag("--json", sweep.json, "machine-readable output");
    sweep_cmd->callback([&]() { run_sweep(sweep); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
