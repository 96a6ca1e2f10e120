#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mdlad {

/// Per-record codelength scores plus the induced rank order: descending by
/// score (highest codelength = most anomalous), ties broken by ascending
/// record id so output is reproducible.
struct ScoredRanking {
    std::vector<double> scores;      // scores[id] = bits for record id
    std::vector<std::size_t> order;  // record ids from rank 1 downwards

    /// rank_of[id] = 1-based rank of the record.
    std::vector<std::size_t> ranks() const;
};

ScoredRanking make_ranking(std::vector<double> scores);

enum class RankingFormat { csv, json };

/// Writes rank, record id, score in bits (and the record's label when given)
/// per row. Scores are written with 17 significant digits so a reload
/// round-trips exactly.
void export_ranking(const ScoredRanking& r,
                    const std::vector<std::uint8_t>* labels,
                    const std::string& path, RankingFormat format);

/// Reads a CSV written by export_ranking.
ScoredRanking load_ranking_csv(const std::string& path);

}  // namespace mdlad
