#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mdlad {

using RecordView = std::span<const std::int32_t>;

/// A rectangular table of integer-coded categorical values. Each column has
/// a fixed ordered domain (distinct value strings in first-appearance order);
/// cells hold indices into their column's domain. Domains are fixed once at
/// construction so every model fitted on any row subset sees the same
/// observation space. Immutable after construction.
class CategoricalDataset {
public:
    CategoricalDataset() = default;

    /// Builds a dataset from pre-coded cells (row-major). Every cell must be
    /// a valid index into its column's domain.
    static CategoricalDataset from_cells(std::vector<std::string> column_names,
                                         std::vector<std::vector<std::string>> domains,
                                         std::vector<std::int32_t> cells);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }
    std::size_t arity(std::size_t col) const { return domains_[col].size(); }

    RecordView row(std::size_t i) const {
        return RecordView(cells_.data() + i * n_cols_, n_cols_);
    }
    std::int32_t at(std::size_t i, std::size_t j) const {
        return cells_[i * n_cols_ + j];
    }

    const std::vector<std::string>& column_names() const { return column_names_; }
    const std::vector<std::vector<std::string>>& domains() const { return domains_; }
    const std::string& value_of(std::size_t i, std::size_t j) const {
        return domains_[j][static_cast<std::size_t>(at(i, j))];
    }

    /// Ground-truth anomaly flags (1 = anomaly), present when a label column
    /// was extracted at load time or the data was generated with seeds.
    bool has_labels() const { return !labels_.empty(); }
    const std::vector<std::uint8_t>& labels() const { return labels_; }
    void set_labels(std::vector<std::uint8_t> labels);
    const std::optional<std::string>& label_column() const { return label_column_; }
    void set_label_column(std::string name) { label_column_ = std::move(name); }

    /// FNV-1a over shape and cells; used to pin serialized models to the
    /// dataset they were fitted on.
    std::uint64_t content_fingerprint() const;

private:
    std::vector<std::string> column_names_;
    std::vector<std::vector<std::string>> domains_;
    std::vector<std::int32_t> cells_;
    std::size_t n_rows_{0};
    std::size_t n_cols_{0};
    std::optional<std::string> label_column_;
    std::vector<std::uint8_t> labels_;
};

/// Expands every column of arity > 2 into per-value 0/1 indicator columns
/// (named "col=value"); arity-1 and arity-2 columns pass through unchanged.
/// Idempotent on all-binary input; labels carry over.
CategoricalDataset one_hot_encode(const CategoricalDataset& d);

/// Re-codes a dataset's cells against externally fixed domains (e.g. the
/// domains a model was fitted with). Throws if a value is absent from the
/// target domain.
std::vector<std::int32_t> recode_cells(const CategoricalDataset& d,
                                       const std::vector<std::vector<std::string>>& target_domains);

}  // namespace mdlad
