#include "mdlad/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mdlad {

namespace {

struct RawTable {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // physical line each row starts on
};

// RFC-4180-style field splitter: quoted fields may contain delimiters,
// escaped quotes ("") and newlines.
RawTable parse_delimited(std::istream& in, char delimiter) {
    RawTable table;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    bool row_started = false;
    std::size_t line = 1;
    std::size_t row_start_line = 1;

    auto end_field = [&]() {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&]() {
        end_field();
        table.rows.push_back(std::move(row));
        table.line_numbers.push_back(row_start_line);
        row.clear();
        row_started = false;
    };

    char c;
    while (in.get(c)) {
        if (!row_started) {
            row_started = true;
            row_start_line = line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field += c;
            }
        } else if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == delimiter) {
            end_field();
        } else if (c == '\n') {
            ++line;
            if (!field.empty() && field.back() == '\r') {
                field.pop_back();
            }
            end_row();
        } else {
            field_started = true;
            field += c;
        }
    }
    if (in_quotes) {
        throw std::runtime_error("unterminated quoted field at end of file");
    }
    if (row_started || !field.empty() || !row.empty()) {
        if (!field.empty() && field.back() == '\r') {
            field.pop_back();
        }
        end_row();
    }
    return table;
}

bool needs_quoting(const std::string& s, char delimiter) {
    for (char c : s) {
        if (c == delimiter || c == '"' || c == '\n' || c == '\r') {
            return true;
        }
    }
    return false;
}

void write_field(std::ostream& out, const std::string& s, char delimiter) {
    if (!needs_quoting(s, delimiter)) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"') {
            out << "\"\"";
        } else {
            out << c;
        }
    }
    out << '"';
}

}  // namespace

CategoricalDataset load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    RawTable table = parse_delimited(in, options.delimiter);
    if (table.rows.empty()) {
        throw std::runtime_error(path + ": no records");
    }

    std::vector<std::string> header;
    std::size_t first_data_row = 0;
    const std::size_t m_raw = table.rows[0].size();
    if (options.has_header) {
        header = table.rows[0];
        first_data_row = 1;
    } else {
        header.reserve(m_raw);
        for (std::size_t j = 0; j < m_raw; ++j) {
            header.push_back("col_" + std::to_string(j));
        }
    }
    if (first_data_row >= table.rows.size()) {
        throw std::runtime_error(path + ": no records");
    }

    std::size_t label_index = m_raw;
    if (options.label_column) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (header[j] == *options.label_column) {
                label_index = j;
                break;
            }
        }
        if (label_index == m_raw) {
            throw std::runtime_error(path + ": missing label column '" +
                                     *options.label_column + "'");
        }
    }

    std::vector<std::string> names;
    for (std::size_t j = 0; j < m_raw; ++j) {
        if (j != label_index) {
            names.push_back(header[j]);
        }
    }
    if (names.empty()) {
        throw std::runtime_error(path + ": no data columns besides the label");
    }
    const std::size_t m = names.size();

    std::vector<std::vector<std::string>> domains(m);
    std::vector<std::unordered_map<std::string, std::int32_t>> code(m);
    std::vector<std::int32_t> cells;
    std::vector<std::uint8_t> labels;
    cells.reserve((table.rows.size() - first_data_row) * m);

    for (std::size_t r = first_data_row; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != m_raw) {
            throw std::runtime_error(path + ": line " +
                                     std::to_string(table.line_numbers[r]) +
                                     ": expected " + std::to_string(m_raw) +
                                     " fields, got " + std::to_string(row.size()));
        }
        std::size_t out_j = 0;
        for (std::size_t j = 0; j < m_raw; ++j) {
            if (j == label_index) {
                labels.push_back(row[j] == options.anomaly_value ? 1 : 0);
                continue;
            }
            auto [it, inserted] = code[out_j].try_emplace(
                row[j], static_cast<std::int32_t>(domains[out_j].size()));
            if (inserted) {
                domains[out_j].push_back(row[j]);
            }
            cells.push_back(it->second);
            ++out_j;
        }
    }

    auto d = CategoricalDataset::from_cells(std::move(names), std::move(domains),
                                            std::move(cells));
    if (options.label_column) {
        d.set_labels(std::move(labels));
        d.set_label_column(*options.label_column);
    }
    return d;
}

void write_csv(const CategoricalDataset& d, const std::string& path,
               char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    for (std::size_t j = 0; j < d.n_cols(); ++j) {
        if (j != 0) {
            out << delimiter;
        }
        write_field(out, d.column_names()[j], delimiter);
    }
    out << '\n';
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        for (std::size_t j = 0; j < d.n_cols(); ++j) {
            if (j != 0) {
                out << delimiter;
            }
            write_field(out, d.value_of(i, j), delimiter);
        }
        out << '\n';
    }
}

void write_labels_csv(const std::vector<std::uint8_t>& labels,
                      const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << "label\n";
    for (std::uint8_t l : labels) {
        out << (l ? '1' : '0') << '\n';
    }
}

std::vector<std::uint8_t> load_labels_csv(const std::string& path,
                                          const std::string& anomaly_value) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    RawTable table = parse_delimited(in, ',');
    if (table.rows.empty()) {
        throw std::runtime_error(path + ": no records");
    }
    std::size_t first = 0;
    if (table.rows[0].size() == 1 && table.rows[0][0] == "label") {
        first = 1;
    }
    std::vector<std::uint8_t> labels;
    for (std::size_t r = first; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != 1) {
            throw std::runtime_error(path + ": line " +
                                     std::to_string(table.line_numbers[r]) +
                                     ": expected a single label field");
        }
        labels.push_back(table.rows[r][0] == anomaly_value ? 1 : 0);
    }
    if (labels.empty()) {
        throw std::runtime_error(path + ": no records");
    }
    return labels;
}

}  // namespace mdlad
