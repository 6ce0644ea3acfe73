#pragma once

// Binary-labelled datasets, imbalance statistics and min-max feature scaling.

#include "knora/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace knora {

/// Class code of a sample: 0 or 1, indexing into Dataset::class_names.
/// Codes follow lexicographic order of the class names.
using ClassLabel = int;

inline constexpr std::size_t num_classes = 2;

/// Dense row-major N x F matrix of doubles.
class FeatureMatrix {
  public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols) : rows_{rows}, cols_{cols}, data_(rows * cols, 0.0) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    [[nodiscard]] double &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    void append_row(std::span<const double> values) {
        if (rows_ == 0 && cols_ == 0) {
            cols_ = values.size();
        }
        if (values.size() != cols_) {
            throw data_error("row has " + std::to_string(values.size()) + " values, expected " + std::to_string(cols_));
        }
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    [[nodiscard]] const std::vector<double> &values() const noexcept { return data_; }

    bool operator==(const FeatureMatrix &) const = default;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> data_;
};

struct Dataset {
    std::string name;
    std::vector<std::string> feature_names;
    FeatureMatrix features;
    std::vector<ClassLabel> labels;
    std::array<std::string, num_classes> class_names;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t num_features() const noexcept { return features.cols(); }
    [[nodiscard]] std::span<const double> sample(std::size_t i) const { return features.row(i); }

    /// Same samples, features and classes. The name is not compared.
    [[nodiscard]] bool same_content(const Dataset &other) const {
        return features == other.features && labels == other.labels && class_names == other.class_names;
    }
};

struct ImbalanceSummary {
    double ir{1.0};
    ClassLabel minority{0};
    std::array<std::size_t, num_classes> counts{};
};

[[nodiscard]] inline std::array<std::size_t, num_classes> class_counts(std::span<const ClassLabel> labels) {
    std::array<std::size_t, num_classes> counts{};
    for (const ClassLabel y : labels) {
        ++counts.at(static_cast<std::size_t>(y));
    }
    return counts;
}

/// Minority is the class with fewer samples; on equal counts the lexicographically
/// smaller name (code 0) is the minority.
[[nodiscard]] inline ImbalanceSummary imbalance_summary(const Dataset &d) {
    ImbalanceSummary s;
    s.counts = class_counts(d.labels);
    s.minority = s.counts[1] < s.counts[0] ? 1 : 0;
    const auto lo = std::min(s.counts[0], s.counts[1]);
    const auto hi = std::max(s.counts[0], s.counts[1]);
    if (lo == 0) {
        throw data_error("imbalance ratio undefined: dataset '" + d.name + "' has a class with no samples");
    }
    s.ir = static_cast<double>(hi) / static_cast<double>(lo);
    return s;
}

/// Checks N >= 2, F >= 1, finite features, both classes present.
inline void validate(const Dataset &d) {
    if (d.features.rows() != d.labels.size()) {
        throw data_error("dataset '" + d.name + "': feature rows and label count differ");
    }
    if (d.size() < 2) {
        throw data_error("dataset '" + d.name + "': need at least 2 samples");
    }
    if (d.num_features() < 1) {
        throw data_error("dataset '" + d.name + "': need at least 1 feature");
    }
    for (const double v : d.features.values()) {
        if (!std::isfinite(v)) {
            throw data_error("dataset '" + d.name + "': non-finite feature value");
        }
    }
    for (const ClassLabel y : d.labels) {
        if (y != 0 && y != 1) {
            throw data_error("dataset '" + d.name + "': label code out of range");
        }
    }
    const auto counts = class_counts(d.labels);
    if (counts[0] == 0 || counts[1] == 0) {
        throw data_error("dataset '" + d.name + "': non-binary labels (only one class present)");
    }
}

/// Builds a Dataset from string labels. Exactly two distinct labels are required;
/// codes are assigned in lexicographic order.
[[nodiscard]] inline Dataset make_dataset(std::string name, std::vector<std::string> feature_names, FeatureMatrix features,
                                          const std::vector<std::string> &raw_labels) {
    std::vector<std::string> distinct = raw_labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() != 2) {
        throw data_error("dataset '" + name + "': non-binary labels (" + std::to_string(distinct.size()) + " distinct values)");
    }
    Dataset d;
    d.name = std::move(name);
    d.feature_names = std::move(feature_names);
    d.features = std::move(features);
    d.class_names = {distinct[0], distinct[1]};
    d.labels.reserve(raw_labels.size());
    for (const auto &l : raw_labels) {
        d.labels.push_back(l == distinct[0] ? 0 : 1);
    }
    validate(d);
    return d;
}

/// Rows of `d` at `indices`, in that order. The result may hold a single class.
[[nodiscard]] inline Dataset subset(const Dataset &d, std::span<const std::size_t> indices) {
    Dataset out;
    out.name = d.name;
    out.feature_names = d.feature_names;
    out.class_names = d.class_names;
    out.labels.reserve(indices.size());
    FeatureMatrix m(indices.size(), d.num_features());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto src = d.sample(indices[r]);
        std::copy(src.begin(), src.end(), m.row(r).begin());
        out.labels.push_back(d.labels[indices[r]]);
    }
    out.features = std::move(m);
    return out;
}

/// Per-column affine map onto [0,1] fitted on one partition and reused on others.
/// Constant columns map to 0.
class MinMaxScaler {
  public:
    MinMaxScaler() = default;

    static MinMaxScaler fit(const FeatureMatrix &x) {
        MinMaxScaler s;
        const std::size_t f = x.cols();
        s.min_.assign(f, 0.0);
        s.range_.assign(f, 0.0);
        if (x.rows() == 0) {
            return s;
        }
        for (std::size_t j = 0; j < f; ++j) {
            double lo = x(0, j);
            double hi = x(0, j);
            for (std::size_t i = 1; i < x.rows(); ++i) {
                lo = std::min(lo, x(i, j));
                hi = std::max(hi, x(i, j));
            }
            s.min_[j] = lo;
            s.range_[j] = hi - lo;
        }
        return s;
    }

    [[nodiscard]] double transform_value(std::size_t column, double v) const {
        if (range_[column] == 0.0) {
            return 0.0;
        }
        return (v - min_[column]) / range_[column];
    }

    [[nodiscard]] FeatureMatrix transform(const FeatureMatrix &x) const {
        if (x.cols() != min_.size()) {
            throw data_error("scaler fitted on " + std::to_string(min_.size()) + " features, got " + std::to_string(x.cols()));
        }
        FeatureMatrix out(x.rows(), x.cols());
        for (std::size_t i = 0; i < x.rows(); ++i) {
            for (std::size_t j = 0; j < x.cols(); ++j) {
                out(i, j) = transform_value(j, x(i, j));
            }
        }
        return out;
    }

    [[nodiscard]] Dataset transform(const Dataset &d) const {
        Dataset out = d;
        out.features = transform(d.features);
        return out;
    }

    [[nodiscard]] const std::vector<double> &minimums() const noexcept { return min_; }
    [[nodiscard]] const std::vector<double> &ranges() const noexcept { return range_; }

  private:
    std::vector<double> min_;
    std::vector<double> range_;
};

struct NormalizedDataset {
    Dataset data;
    MinMaxScaler scaler;
};

/// Fits a scaler on `d` and applies it to `d`. Use `scaler` on held-out partitions.
[[nodiscard]] inline NormalizedDataset minmax_normalize(const Dataset &d) {
    auto scaler = MinMaxScaler::fit(d.features);
    return {scaler.transform(d), std::move(scaler)};
}

}  // namespace knora
