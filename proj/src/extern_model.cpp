#include "mdlad/extern_model.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "mdlad/subprocess.hpp"

namespace mdlad {

namespace {

// Scratch directory for one request/response exchange.
class TempDir {
public:
    TempDir() {
        const char* base = std::getenv("TMPDIR");
        std::string tmpl = std::string(base && *base ? base : "/tmp") +
                           "/mdlad-ext-XXXXXX";
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (::mkdtemp(buf.data()) == nullptr) {
            throw std::runtime_error("cannot create temp directory");
        }
        path_ = buf.data();
    }
    ~TempDir() {
        std::remove((path_ + "/request.txt").c_str());
        std::remove((path_ + "/response.txt").c_str());
        ::rmdir(path_.c_str());
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

std::string encode_row(const std::vector<std::int32_t>& row) {
    std::string line;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (j != 0) {
            line += ' ';
        }
        line += std::to_string(row[j]);
    }
    return line;
}

std::string record_key(RecordView record) {
    std::string key;
    for (std::size_t j = 0; j < record.size(); ++j) {
        if (j != 0) {
            key += ' ';
        }
        key += std::to_string(record[j]);
    }
    return key;
}

double parse_cost_line(const std::string& line, const char* tag,
                       std::size_t line_no) {
    std::istringstream ss(line);
    std::string word;
    double bits = 0.0;
    if (!(ss >> word >> bits) || word != tag) {
        throw std::runtime_error("adapter response line " +
                                 std::to_string(line_no) + ": expected '" +
                                 tag + " <bits>', got '" + line + "'");
    }
    if (!(bits >= 0.0) || !std::isfinite(bits)) {
        throw std::runtime_error("adapter response line " +
                                 std::to_string(line_no) +
                                 ": cost must be finite and nonnegative");
    }
    return bits;
}

struct ToolResponse {
    double hypothesis_cost;
    std::vector<double> fit_costs;
    std::vector<double> score_costs;
};

ToolResponse invoke_tool(const AdapterDescriptor& descriptor,
                         const std::vector<std::vector<std::int32_t>>& fit_rows,
                         const std::vector<std::vector<std::int32_t>>& score_rows) {
    if (fit_rows.empty()) {
        throw std::invalid_argument("extern fit needs a nonempty record set");
    }
    if (descriptor.command.empty()) {
        throw std::invalid_argument("adapter descriptor has no command");
    }
    const std::size_t m = fit_rows[0].size();
    TempDir dir;
    const std::string request_path = dir.path() + "/request.txt";
    const std::string response_path = dir.path() + "/response.txt";
    {
        std::ofstream req(request_path, std::ios::binary);
        if (!req) {
            throw std::runtime_error("cannot write adapter request");
        }
        req << "FIT " << fit_rows.size() << ' ' << m << '\n';
        for (const auto& row : fit_rows) {
            req << encode_row(row) << '\n';
        }
        if (!score_rows.empty()) {
            req << "SCORE " << score_rows.size() << ' ' << m << '\n';
            for (const auto& row : score_rows) {
                req << encode_row(row) << '\n';
            }
        }
    }

    std::vector<std::string> argv = descriptor.command;
    argv.push_back(request_path);
    argv.push_back(response_path);
    const ProcessResult proc =
        run_process(argv, descriptor.workdir, descriptor.timeout_seconds);
    if (proc.exit_code != 0) {
        throw std::runtime_error("external compressor exited with code " +
                                 std::to_string(proc.exit_code) + ": " +
                                 proc.output);
    }

    std::ifstream resp(response_path, std::ios::binary);
    if (!resp) {
        throw std::runtime_error("external compressor produced no response file");
    }
    ToolResponse out;
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() {
        if (!std::getline(resp, line)) {
            throw std::runtime_error("adapter response truncated after line " +
                                     std::to_string(line_no));
        }
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        ++line_no;
    };
    next_line();
    out.hypothesis_cost = parse_cost_line(line, "HCOST", line_no);
    out.fit_costs.reserve(fit_rows.size());
    for (std::size_t i = 0; i < fit_rows.size(); ++i) {
        next_line();
        out.fit_costs.push_back(parse_cost_line(line, "ICOST", line_no));
    }
    out.score_costs.reserve(score_rows.size());
    for (std::size_t i = 0; i < score_rows.size(); ++i) {
        next_line();
        out.score_costs.push_back(parse_cost_line(line, "ICOST", line_no));
    }
    return out;
}

}  // namespace

AdapterDescriptor AdapterDescriptor::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open adapter descriptor '" + path + "'");
    }
    nlohmann::json j;
    in >> j;
    AdapterDescriptor d;
    d.command = j.at("command").get<std::vector<std::string>>();
    d.workdir = j.value("workdir", std::string{});
    d.timeout_seconds = j.value("timeout_seconds", 60.0);
    d.supports_score = j.value("supports_score", true);
    if (d.command.empty()) {
        throw std::runtime_error(path + ": descriptor command must be nonempty");
    }
    return d;
}

ExternModel::ExternModel(AdapterDescriptor descriptor,
                         std::vector<std::vector<std::int32_t>> fit_rows)
    : descriptor_(std::move(descriptor)), fit_rows_(std::move(fit_rows)) {}

void ExternModel::run_fit(
    const std::vector<std::vector<std::int32_t>>& score_rows) {
    const ToolResponse resp = invoke_tool(descriptor_, fit_rows_, score_rows);
    hypothesis_cost_bits_ = resp.hypothesis_cost;
    for (std::size_t i = 0; i < fit_rows_.size(); ++i) {
        cost_cache_[encode_row(fit_rows_[i])] = resp.fit_costs[i];
    }
    for (std::size_t i = 0; i < score_rows.size(); ++i) {
        cost_cache_[encode_row(score_rows[i])] = resp.score_costs[i];
    }
    fitted_ = true;
}

std::vector<double> ExternModel::score_via_tool(
    const std::vector<std::vector<std::int32_t>>& rows) const {
    if (!descriptor_.supports_score) {
        throw std::runtime_error(
            "external compressor cannot score out-of-sample records");
    }
    const ToolResponse resp = invoke_tool(descriptor_, fit_rows_, rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        cost_cache_[encode_row(rows[i])] = resp.score_costs[i];
    }
    return resp.score_costs;
}

double ExternModel::hypothesis_cost() const {
    if (!fitted_) {
        throw std::logic_error("external model is not fitted");
    }
    return hypothesis_cost_bits_;
}

double ExternModel::item_cost(RecordView record) const {
    if (!fitted_) {
        throw std::logic_error("external model is not fitted");
    }
    std::lock_guard<std::mutex> lock(mutex_);
    const std::string key = record_key(record);
    auto it = cost_cache_.find(key);
    if (it != cost_cache_.end()) {
        return it->second;
    }
    return score_via_tool({{record.begin(), record.end()}})[0];
}

std::vector<double> ExternModel::item_costs(const CategoricalDataset& data) const {
    if (!fitted_) {
        throw std::logic_error("external model is not fitted");
    }
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<double> out(data.n_rows());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        auto it = cost_cache_.find(record_key(data.row(i)));
        if (it != cost_cache_.end()) {
            out[i] = it->second;
        } else {
            missing.push_back(i);
        }
    }
    if (!missing.empty()) {
        std::vector<std::vector<std::int32_t>> rows;
        rows.reserve(missing.size());
        for (std::size_t i : missing) {
            const RecordView r = data.row(i);
            rows.emplace_back(r.begin(), r.end());
        }
        const std::vector<double> costs = score_via_tool(rows);
        for (std::size_t p = 0; p < missing.size(); ++p) {
            out[missing[p]] = costs[p];
        }
    }
    return out;
}

std::unique_ptr<ExternModel> extern_fit(const AdapterDescriptor& descriptor,
                                        const CategoricalDataset& data,
                                        std::span<const std::size_t> rows,
                                        bool score_whole_dataset) {
    if (rows.empty()) {
        throw std::invalid_argument("extern fit needs a nonempty record set");
    }
    std::vector<std::vector<std::int32_t>> fit_rows;
    fit_rows.reserve(rows.size());
    for (std::size_t i : rows) {
        const RecordView r = data.row(i);
        fit_rows.emplace_back(r.begin(), r.end());
    }
    auto model = std::make_unique<ExternModel>(descriptor, std::move(fit_rows));
    std::vector<std::vector<std::int32_t>> score_rows;
    if (score_whole_dataset) {
        if (!descriptor.supports_score) {
            throw std::runtime_error(
                "adapter descriptor disables SCORE; the mixture meta-learner "
                "needs whole-dataset scoring");
        }
        score_rows.reserve(data.n_rows());
        for (std::size_t i = 0; i < data.n_rows(); ++i) {
            const RecordView r = data.row(i);
            score_rows.emplace_back(r.begin(), r.end());
        }
    }
    model->run_fit(score_rows);
    return model;
}

double extern_item_cost(const ExternModel& model, RecordView record) {
    return model.item_cost(record);
}

ExternLearner::ExternLearner(AdapterDescriptor descriptor)
    : descriptor_(std::move(descriptor)) {
    if (!descriptor_.supports_score) {
        throw std::invalid_argument(
            "mixture fitting through the adapter requires SCORE support");
    }
}

std::unique_ptr<ComponentModel> ExternLearner::fit(
    const CategoricalDataset& data, std::span<const std::size_t> rows) const {
    return extern_fit(descriptor_, data, rows, /*score_whole_dataset=*/true);
}

}  // namespace mdlad
