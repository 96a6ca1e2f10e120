#include "mdlad/ranking.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mdlad {

namespace {

std::string full_precision(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

std::vector<std::size_t> ScoredRanking::ranks() const {
    std::vector<std::size_t> r(order.size(), 0);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        r[order[pos]] = pos + 1;
    }
    return r;
}

ScoredRanking make_ranking(std::vector<double> scores) {
    ScoredRanking r;
    r.order.resize(scores.size());
    std::iota(r.order.begin(), r.order.end(), std::size_t{0});
    std::sort(r.order.begin(), r.order.end(),
              [&scores](std::size_t a, std::size_t b) {
                  if (scores[a] != scores[b]) {
                      return scores[a] > scores[b];
                  }
                  return a < b;
              });
    r.scores = std::move(scores);
    return r;
}

void export_ranking(const ScoredRanking& r,
                    const std::vector<std::uint8_t>* labels,
                    const std::string& path, RankingFormat format) {
    if (labels && labels->size() != r.scores.size()) {
        throw std::invalid_argument("label count does not match ranking size");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    if (format == RankingFormat::csv) {
        out << "rank,record_id,score_bits";
        if (labels) {
            out << ",label";
        }
        out << '\n';
        for (std::size_t pos = 0; pos < r.order.size(); ++pos) {
            const std::size_t id = r.order[pos];
            out << (pos + 1) << ',' << id << ',' << full_precision(r.scores[id]);
            if (labels) {
                out << ',' << (static_cast<int>((*labels)[id]));
            }
            out << '\n';
        }
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t pos = 0; pos < r.order.size(); ++pos) {
            const std::size_t id = r.order[pos];
            nlohmann::json row = {{"rank", pos + 1},
                                  {"id", id},
                                  {"score_bits", r.scores[id]}};
            if (labels) {
                row["label"] = static_cast<int>((*labels)[id]);
            }
            arr.push_back(std::move(row));
        }
        out << arr.dump(2) << '\n';
    }
}

ScoredRanking load_ranking_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": empty ranking file");
    }
    if (line.rfind("rank,record_id,score_bits", 0) != 0) {
        throw std::runtime_error(path + ": not a ranking file");
    }
    std::vector<std::size_t> order;
    std::vector<std::pair<std::size_t, double>> entries;
    std::size_t max_id = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        std::string rank_s, id_s, score_s;
        if (!std::getline(ss, rank_s, ',') || !std::getline(ss, id_s, ',') ||
            !std::getline(ss, score_s, ',')) {
            throw std::runtime_error(path + ": malformed ranking row '" + line + "'");
        }
        std::size_t id = 0;
        double score = 0.0;
        try {
            id = std::stoull(id_s);
            score = std::stod(score_s);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ": malformed ranking row '" + line + "'");
        }
        entries.emplace_back(id, score);
        order.push_back(id);
        max_id = std::max(max_id, id);
    }
    if (entries.empty()) {
        throw std::runtime_error(path + ": no ranking rows");
    }
    if (max_id + 1 != entries.size()) {
        throw std::runtime_error(path + ": ranking ids are not a permutation");
    }
    ScoredRanking r;
    r.scores.assign(entries.size(), 0.0);
    std::vector<std::uint8_t> seen(entries.size(), 0);
    for (const auto& [id, score] : entries) {
        if (seen[id]) {
            throw std::runtime_error(path + ": duplicate record id " +
                                     std::to_string(id));
        }
        seen[id] = 1;
        r.scores[id] = score;
    }
    r.order = std::move(order);
    return r;
}

}  // namespace mdlad
