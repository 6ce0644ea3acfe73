#pragma once

// RFC-4180 CSV reading and writing for binary datasets.

#include "knora/dataset.hpp"
#include "knora/error.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

namespace knora::io {

namespace detail {

[[nodiscard]] inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw data_error("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

[[nodiscard]] inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

/// Parses a decimal number with '.' as separator. Returns false on any trailing garbage.
[[nodiscard]] inline bool parse_double(std::string_view text, double &out) {
    text = trim(text);
    if (text.empty()) {
        return false;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto *first = text.data();
    const auto *last = text.data() + text.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

/// Shortest text that parses back to the same double.
[[nodiscard]] inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

}  // namespace detail

using CsvRecord = std::vector<std::string>;

/// Splits CSV text into records. Quoted fields may contain commas, newlines and
/// doubled quotes. Blank lines are skipped.
[[nodiscard]] inline std::vector<CsvRecord> parse_csv(std::string_view text) {
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    const auto end_field = [&] {
        current.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    const auto end_record = [&] {
        end_field();
        const bool blank = current.size() == 1 && current.front().empty();
        if (!blank) {
            records.push_back(std::move(current));
        }
        current.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !detail::trim(field).empty()) {
                    throw data_error("csv: stray quote inside unquoted field");
                }
                field.clear();
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                end_record();
                break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (in_quotes) {
        throw data_error("csv: unterminated quoted field");
    }
    if (field_started || !field.empty() || !current.empty()) {
        end_record();
    }
    return records;
}

/// Label column given by header name, or by zero-based index when no header matches.
using ColumnRef = std::variant<std::string, std::size_t>;

[[nodiscard]] inline Dataset parse_csv_dataset(std::string_view text, const ColumnRef &label_column, std::string name) {
    const auto records = parse_csv(text);
    if (records.empty()) {
        throw data_error("csv '" + name + "': missing header row");
    }
    const CsvRecord &header = records.front();

    std::size_t label_idx = header.size();
    if (const auto *col_name = std::get_if<std::string>(&label_column)) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (detail::trim(header[j]) == *col_name) {
                label_idx = j;
                break;
            }
        }
        if (label_idx == header.size()) {
            std::size_t as_index = 0;
            const auto res = std::from_chars(col_name->data(), col_name->data() + col_name->size(), as_index);
            if (res.ec == std::errc{} && res.ptr == col_name->data() + col_name->size()) {
                label_idx = as_index;
            }
        }
    } else {
        label_idx = std::get<std::size_t>(label_column);
    }
    if (label_idx >= header.size()) {
        throw data_error("csv '" + name + "': missing label column");
    }

    std::vector<std::string> feature_names;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j != label_idx) {
            feature_names.emplace_back(detail::trim(header[j]));
        }
    }

    FeatureMatrix features(0, 0);
    std::vector<std::string> labels;
    std::vector<double> row;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const CsvRecord &rec = records[r];
        if (rec.size() != header.size()) {
            throw data_error("csv '" + name + "': row " + std::to_string(r + 1) + " has " + std::to_string(rec.size()) +
                             " fields, header has " + std::to_string(header.size()));
        }
        row.clear();
        for (std::size_t j = 0; j < rec.size(); ++j) {
            if (j == label_idx) {
                labels.emplace_back(detail::trim(rec[j]));
                continue;
            }
            double v = 0.0;
            if (!detail::parse_double(rec[j], v)) {
                throw data_error("csv '" + name + "': non-numeric feature cell '" + rec[j] + "' in row " + std::to_string(r + 1));
            }
            if (!std::isfinite(v)) {
                throw data_error("csv '" + name + "': non-finite feature in row " + std::to_string(r + 1));
            }
            row.push_back(v);
        }
        features.append_row(row);
    }
    if (labels.empty()) {
        throw data_error("csv '" + name + "': empty data section");
    }
    if (features.cols() == 0) {
        features = FeatureMatrix(labels.size(), 0);
    }
    return make_dataset(std::move(name), std::move(feature_names), std::move(features), labels);
}

[[nodiscard]] inline Dataset load_csv(const std::filesystem::path &path, const ColumnRef &label_column) {
    return parse_csv_dataset(detail::read_file(path), label_column, path.stem().string());
}

namespace detail {

[[nodiscard]] inline std::string quote_csv(const std::string &s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace detail

/// Features first, label column last, named `label_header`.
inline void write_csv(std::ostream &out, const Dataset &d, const std::string &label_header = "class") {
    for (std::size_t j = 0; j < d.num_features(); ++j) {
        const std::string name = j < d.feature_names.size() ? d.feature_names[j] : "x" + std::to_string(j);
        out << detail::quote_csv(name) << ',';
    }
    out << detail::quote_csv(label_header) << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (const double v : d.sample(i)) {
            out << detail::format_double(v) << ',';
        }
        out << detail::quote_csv(d.class_names[static_cast<std::size_t>(d.labels[i])]) << '\n';
    }
}

inline void save_csv(const std::filesystem::path &path, const Dataset &d, const std::string &label_header = "class") {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw data_error("cannot write '" + path.string() + "'");
    }
    write_csv(out, d, label_header);
}

}  // namespace knora::io
