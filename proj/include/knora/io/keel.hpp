#pragma once

// KEEL .dat reader and writer.
//
// Layout:
//   @relation <name>
//   @attribute <name> real|integer|numeric [min, max]
//   @attribute <name> {v1, v2, ...}
//   @inputs a, b, ...      (optional: defaults to every attribute but the last)
//   @outputs c             (optional: defaults to the last attribute)
//   @data
//   1.0, 2.0, ..., label
//
// Keywords are case-insensitive and lines starting with '%' are comments.
// Nominal input attributes are rejected.

#include "knora/dataset.hpp"
#include "knora/error.hpp"
#include "knora/io/csv.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace knora::io {

struct KeelAttribute {
    std::string name;
    bool nominal{false};
    std::vector<std::string> values;  // nominal domain
    std::optional<double> min;
    std::optional<double> max;
};

struct KeelHeader {
    std::string relation;
    std::vector<KeelAttribute> attributes;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

struct KeelFile {
    KeelHeader header;
    Dataset dataset;
};

namespace detail {

[[nodiscard]] inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

[[nodiscard]] inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!piece.empty()) {
            out.emplace_back(piece);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

/// Splits "<name> <rest>"; the name may be single-quoted.
[[nodiscard]] inline std::pair<std::string, std::string_view> take_name(std::string_view s, std::size_t line_no) {
    s = trim(s);
    if (s.empty()) {
        throw data_error("keel: line " + std::to_string(line_no) + ": attribute without name");
    }
    if (s.front() == '\'' || s.front() == '"') {
        const auto close = s.find(s.front(), 1);
        if (close == std::string_view::npos) {
            throw data_error("keel: line " + std::to_string(line_no) + ": unterminated quoted name");
        }
        return {std::string(s.substr(1, close - 1)), trim(s.substr(close + 1))};
    }
    auto end = s.find_first_of(" \t{[");
    if (end == std::string_view::npos) {
        return {std::string(s), {}};
    }
    return {std::string(s.substr(0, end)), trim(s.substr(end))};
}

[[nodiscard]] inline KeelAttribute parse_attribute(std::string_view rest, std::size_t line_no) {
    KeelAttribute attr;
    auto [name, spec] = take_name(rest, line_no);
    attr.name = std::move(name);
    if (spec.empty()) {
        throw data_error("keel: line " + std::to_string(line_no) + ": attribute '" + attr.name + "' has no type");
    }
    if (spec.front() == '{') {
        const auto close = spec.find('}');
        if (close == std::string_view::npos) {
            throw data_error("keel: line " + std::to_string(line_no) + ": unterminated nominal domain");
        }
        attr.nominal = true;
        attr.values = split_list(spec.substr(1, close - 1));
        return attr;
    }
    const auto type_end = spec.find_first_of(" \t[");
    const auto type = lower(spec.substr(0, type_end));
    if (type != "real" && type != "integer" && type != "numeric") {
        throw data_error("keel: line " + std::to_string(line_no) + ": unsupported attribute type '" + type + "'");
    }
    if (const auto open = spec.find('['); open != std::string_view::npos) {
        const auto close = spec.find(']', open);
        if (close == std::string_view::npos) {
            throw data_error("keel: line " + std::to_string(line_no) + ": unterminated range");
        }
        const auto bounds = split_list(spec.substr(open + 1, close - open - 1));
        double lo = 0.0;
        double hi = 0.0;
        if (bounds.size() != 2 || !parse_double(bounds[0], lo) || !parse_double(bounds[1], hi)) {
            throw data_error("keel: line " + std::to_string(line_no) + ": malformed range");
        }
        attr.min = lo;
        attr.max = hi;
    }
    return attr;
}

[[nodiscard]] inline std::size_t attribute_index(const KeelHeader &h, const std::string &name) {
    for (std::size_t i = 0; i < h.attributes.size(); ++i) {
        if (h.attributes[i].name == name) {
            return i;
        }
    }
    throw data_error("keel: unknown attribute '" + name + "' in @inputs/@outputs");
}

}  // namespace detail

[[nodiscard]] inline KeelFile parse_keel(std::string_view text) {
    KeelFile file;
    KeelHeader &h = file.header;
    bool in_data = false;
    bool saw_relation = false;

    std::vector<std::string> data_lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '%') {
            continue;
        }
        if (in_data) {
            data_lines.emplace_back(line);
            continue;
        }
        if (line.front() != '@') {
            throw data_error("keel: line " + std::to_string(line_no) + ": expected a header keyword");
        }
        const auto kw_end = line.find_first_of(" \t");
        const auto keyword = detail::lower(line.substr(0, kw_end));
        const auto rest = kw_end == std::string_view::npos ? std::string_view{} : detail::trim(line.substr(kw_end));
        if (keyword == "@relation") {
            h.relation = std::string(rest);
            saw_relation = true;
        } else if (keyword == "@attribute") {
            h.attributes.push_back(detail::parse_attribute(rest, line_no));
        } else if (keyword == "@inputs") {
            h.inputs = detail::split_list(rest);
        } else if (keyword == "@outputs" || keyword == "@output") {
            h.outputs = detail::split_list(rest);
        } else if (keyword == "@data") {
            in_data = true;
        } else {
            throw data_error("keel: line " + std::to_string(line_no) + ": unknown keyword '" + keyword + "'");
        }
    }

    if (!saw_relation) {
        throw data_error("keel: malformed header: missing @relation");
    }
    if (!in_data) {
        throw data_error("keel: malformed header: missing @data");
    }
    if (h.attributes.size() < 2) {
        throw data_error("keel: malformed header: need at least one input and one output attribute");
    }
    if (h.outputs.empty()) {
        h.outputs = {h.attributes.back().name};
    }
    if (h.outputs.size() != 1) {
        throw data_error("keel: malformed header: exactly one output attribute is supported");
    }
    if (h.inputs.empty()) {
        for (const auto &a : h.attributes) {
            if (a.name != h.outputs.front()) {
                h.inputs.push_back(a.name);
            }
        }
    }

    std::vector<std::size_t> input_cols;
    for (const auto &name : h.inputs) {
        const auto idx = detail::attribute_index(h, name);
        if (h.attributes[idx].nominal) {
            throw data_error("keel: non-numeric input attribute '" + name + "'");
        }
        input_cols.push_back(idx);
    }
    const auto output_col = detail::attribute_index(h, h.outputs.front());

    if (data_lines.empty()) {
        throw data_error("keel: empty data section");
    }

    FeatureMatrix features(0, 0);
    std::vector<std::string> labels;
    std::vector<double> row;
    for (std::size_t r = 0; r < data_lines.size(); ++r) {
        const auto fields = parse_csv(data_lines[r]);
        if (fields.size() != 1 || fields.front().size() != h.attributes.size()) {
            throw data_error("keel: data row " + std::to_string(r + 1) + " does not have " +
                             std::to_string(h.attributes.size()) + " values");
        }
        const auto &rec = fields.front();
        row.clear();
        for (const auto c : input_cols) {
            double v = 0.0;
            if (!detail::parse_double(rec[c], v) || !std::isfinite(v)) {
                throw data_error("keel: data row " + std::to_string(r + 1) + ": non-numeric value '" + rec[c] + "' for '" +
                                 h.attributes[c].name + "'");
            }
            row.push_back(v);
        }
        features.append_row(row);
        labels.emplace_back(detail::trim(rec[output_col]));
    }

    std::vector<std::string> distinct = labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() != 2) {
        throw data_error("keel: non-binary output attribute '" + h.outputs.front() + "' (" + std::to_string(distinct.size()) +
                         " distinct values)");
    }
    file.dataset = make_dataset(h.relation, h.inputs, std::move(features), labels);
    return file;
}

[[nodiscard]] inline Dataset load_keel(const std::filesystem::path &path) {
    return parse_keel(detail::read_file(path)).dataset;
}

inline void write_keel(std::ostream &out, const Dataset &d, const std::string &output_name = "Class") {
    out << "@relation " << d.name << '\n';
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d.num_features(); ++j) {
        names.push_back(j < d.feature_names.size() ? d.feature_names[j] : "x" + std::to_string(j));
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double v = d.features(i, j);
            lo = i == 0 ? v : std::min(lo, v);
            hi = i == 0 ? v : std::max(hi, v);
        }
        out << "@attribute " << names.back() << " real [" << detail::format_double(lo) << ", " << detail::format_double(hi)
            << "]\n";
    }
    out << "@attribute " << output_name << " {" << d.class_names[0] << ", " << d.class_names[1] << "}\n";
    out << "@inputs ";
    for (std::size_t j = 0; j < names.size(); ++j) {
        out << (j ? ", " : "") << names[j];
    }
    out << "\n@outputs " << output_name << "\n@data\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (const double v : d.sample(i)) {
            out << detail::format_double(v) << ", ";
        }
        out << d.class_names[static_cast<std::size_t>(d.labels[i])] << '\n';
    }
}

inline void save_keel(const std::filesystem::path &path, const Dataset &d) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw data_error("cannot write '" + path.string() + "'");
    }
    write_keel(out, d);
}

}  // namespace knora::io
