#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdlad/dataset.hpp"

namespace mdlad {

struct CsvOptions {
    bool has_header = true;
    char delimiter = ',';
    /// When set, this column is stripped from the data and turned into
    /// ground-truth labels: a cell equal to anomaly_value marks an anomaly.
    std::optional<std::string> label_column;
    std::string anomaly_value = "1";
};

/// Loads a delimited text file into a CategoricalDataset. Fields follow
/// RFC-4180 quoting (double quotes, "" escapes, quoted delimiters and
/// newlines). Column domains are built in first-appearance order.
CategoricalDataset load_csv(const std::string& path, const CsvOptions& options = {});

/// Writes the dataset back out as CSV (header + one row per record).
void write_csv(const CategoricalDataset& d, const std::string& path,
               char delimiter = ',');

/// Writes a one-column "label" CSV (0 = normal, 1 = anomaly), aligned with
/// record order.
void write_labels_csv(const std::vector<std::uint8_t>& labels,
                      const std::string& path);

/// Reads labels back; accepts either a bare label column or a file produced
/// by write_labels_csv. anomaly_value selects which cell value flags an
/// anomaly.
std::vector<std::uint8_t> load_labels_csv(const std::string& path,
                                          const std::string& anomaly_value = "1");

}  // namespace mdlad
