#include "mdlad/dataset.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>

namespace mdlad {

CategoricalDataset CategoricalDataset::from_cells(
    std::vector<std::string> column_names,
    std::vector<std::vector<std::string>> domains,
    std::vector<std::int32_t> cells) {
    if (column_names.size() != domains.size()) {
        throw std::invalid_argument("column_names and domains size mismatch");
    }
    const std::size_t m = column_names.size();
    if (m == 0) {
        throw std::invalid_argument("dataset needs at least one column");
    }
    if (cells.size() % m != 0) {
        throw std::invalid_argument("cell count is not a multiple of column count");
    }
    const std::size_t n = cells.size() / m;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::int32_t c = cells[i * m + j];
            if (c < 0 || static_cast<std::size_t>(c) >= domains[j].size()) {
                throw std::invalid_argument("cell code out of domain at row " +
                                            std::to_string(i) + ", column " +
                                            std::to_string(j));
            }
        }
    }
    CategoricalDataset d;
    d.column_names_ = std::move(column_names);
    d.domains_ = std::move(domains);
    d.cells_ = std::move(cells);
    d.n_rows_ = n;
    d.n_cols_ = m;
    return d;
}

void CategoricalDataset::set_labels(std::vector<std::uint8_t> labels) {
    if (labels.size() != n_rows_) {
        throw std::invalid_argument("label count does not match record count");
    }
    labels_ = std::move(labels);
}

std::uint64_t CategoricalDataset::content_fingerprint() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(n_rows_);
    mix(n_cols_);
    for (std::int32_t c : cells_) {
        mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)));
    }
    return h;
}

CategoricalDataset one_hot_encode(const CategoricalDataset& d) {
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> domains;
    // out_cols[j] describes where original column j landed: either a single
    // pass-through column or one indicator column per domain value.
    struct ColumnPlan {
        bool pass_through;
        std::size_t first_out;
    };
    std::vector<ColumnPlan> plan(d.n_cols());
    for (std::size_t j = 0; j < d.n_cols(); ++j) {
        if (d.arity(j) <= 2) {
            plan[j] = {true, names.size()};
            names.push_back(d.column_names()[j]);
            domains.push_back(d.domains()[j]);
        } else {
            plan[j] = {false, names.size()};
            for (const auto& value : d.domains()[j]) {
                names.push_back(d.column_names()[j] + "=" + value);
                domains.push_back({"0", "1"});
            }
        }
    }
    const std::size_t out_m = names.size();
    std::vector<std::int32_t> cells(d.n_rows() * out_m, 0);
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        for (std::size_t j = 0; j < d.n_cols(); ++j) {
            const std::int32_t v = d.at(i, j);
            if (plan[j].pass_through) {
                cells[i * out_m + plan[j].first_out] = v;
            } else {
                cells[i * out_m + plan[j].first_out + static_cast<std::size_t>(v)] = 1;
            }
        }
    }
    auto out = CategoricalDataset::from_cells(std::move(names), std::move(domains),
                                              std::move(cells));
    if (d.has_labels()) {
        out.set_labels(d.labels());
    }
    return out;
}

std::vector<std::int32_t> recode_cells(
    const CategoricalDataset& d,
    const std::vector<std::vector<std::string>>& target_domains) {
    if (target_domains.size() != d.n_cols()) {
        throw std::invalid_argument("column count does not match model domains");
    }
    std::vector<std::unordered_map<std::string, std::int32_t>> index(d.n_cols());
    for (std::size_t j = 0; j < d.n_cols(); ++j) {
        for (std::size_t v = 0; v < target_domains[j].size(); ++v) {
            index[j].emplace(target_domains[j][v], static_cast<std::int32_t>(v));
        }
    }
    std::vector<std::int32_t> cells(d.n_rows() * d.n_cols());
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        for (std::size_t j = 0; j < d.n_cols(); ++j) {
            const std::string& value = d.value_of(i, j);
            auto it = index[j].find(value);
            if (it == index[j].end()) {
                throw std::invalid_argument("value '" + value +
                                            "' in column " + std::to_string(j) +
                                            " is not in the model domain");
            }
            cells[i * d.n_cols() + j] = it->second;
        }
    }
    return cells;
}

}  // namespace mdlad
