#pragma once

// Region of competence: the K nearest validation samples of a query, nearest
// first, plus the borderline reduction rules used by KNORA-B and KNORA-BI.

#include "knora/dataset.hpp"
#include "knora/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace knora {

struct RegionOfCompetence {
    static constexpr std::size_t no_query = std::numeric_limits<std::size_t>::max();

    std::vector<std::size_t> neighbors;  // validation indices, nearest first
    std::vector<double> distances;       // matches `neighbors`, nondecreasing
    std::size_t query_id{no_query};

    [[nodiscard]] std::size_t size() const noexcept { return neighbors.size(); }
    [[nodiscard]] bool empty() const noexcept { return neighbors.empty(); }

    /// Copy without the entry at `position` (0 = nearest).
    [[nodiscard]] RegionOfCompetence without(std::size_t position) const {
        RegionOfCompetence out = *this;
        out.neighbors.erase(out.neighbors.begin() + static_cast<std::ptrdiff_t>(position));
        out.distances.erase(out.distances.begin() + static_cast<std::ptrdiff_t>(position));
        return out;
    }

    /// First `n` entries.
    [[nodiscard]] RegionOfCompetence prefix(std::size_t n) const {
        RegionOfCompetence out;
        out.neighbors.assign(neighbors.begin(), neighbors.begin() + static_cast<std::ptrdiff_t>(n));
        out.distances.assign(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(n));
        out.query_id = query_id;
        return out;
    }

    [[nodiscard]] RegionOfCompetence emptied() const {
        RegionOfCompetence out;
        out.query_id = query_id;
        return out;
    }

    bool operator==(const RegionOfCompetence &) const = default;
};

struct RegionClassProfile {
    std::array<std::size_t, num_classes> counts{};

    [[nodiscard]] std::size_t distinct() const noexcept {
        return static_cast<std::size_t>(counts[0] > 0) + static_cast<std::size_t>(counts[1] > 0);
    }
    [[nodiscard]] bool contains(ClassLabel c) const { return counts.at(static_cast<std::size_t>(c)) > 0; }
};

[[nodiscard]] inline RegionClassProfile class_profile(const RegionOfCompetence &r, std::span<const ClassLabel> labels) {
    RegionClassProfile p;
    for (const auto j : r.neighbors) {
        ++p.counts.at(static_cast<std::size_t>(labels[j]));
    }
    return p;
}

/// The k validation samples closest to `query` in Euclidean distance; equal
/// distances are ordered by ascending validation index.
[[nodiscard]] inline RegionOfCompetence knn_region(std::span<const double> query, const FeatureMatrix &validation, std::size_t k,
                                                   std::size_t query_id = RegionOfCompetence::no_query) {
    if (k == 0) {
        throw config_error("region size k must be at least 1");
    }
    if (k > validation.rows()) {
        throw data_error("region size k=" + std::to_string(k) + " exceeds validation size " + std::to_string(validation.rows()));
    }
    if (query.size() != validation.cols()) {
        throw data_error("query has " + std::to_string(query.size()) + " features, validation has " + std::to_string(validation.cols()));
    }
    std::vector<std::pair<double, std::size_t>> dist(validation.rows());
    for (std::size_t j = 0; j < validation.rows(); ++j) {
        const auto row = validation.row(j);
        double acc = 0.0;
        for (std::size_t f = 0; f < row.size(); ++f) {
            const double d = row[f] - query[f];
            acc += d * d;
        }
        dist[j] = {acc, j};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    RegionOfCompetence r;
    r.query_id = query_id;
    r.neighbors.reserve(k);
    r.distances.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        r.neighbors.push_back(dist[i].second);
        r.distances.push_back(std::sqrt(dist[i].first));
    }
    return r;
}

[[nodiscard]] inline RegionOfCompetence knn_region(std::span<const double> query, const Dataset &validation, std::size_t k,
                                                   std::size_t query_id = RegionOfCompetence::no_query) {
    return knn_region(query, validation.features, k, query_id);
}

/// True iff the region holds samples of both classes.
[[nodiscard]] inline bool is_indecision_region(const RegionOfCompetence &r, std::span<const ClassLabel> labels) {
    return class_profile(r, labels).distinct() >= 2;
}

/// Position (0 = nearest) that the KNORA-B reduction removes: the furthest sample
/// whose class still has another representative in the region. nullopt when every
/// class present has exactly one sample.
[[nodiscard]] inline std::optional<std::size_t> borderline_removal(const RegionOfCompetence &r, std::span<const ClassLabel> labels) {
    const auto profile = class_profile(r, labels);
    for (std::size_t b = r.size(); b > 0; --b) {
        if (profile.counts.at(static_cast<std::size_t>(labels[r.neighbors[b - 1]])) >= 2) {
            return b - 1;
        }
    }
    return std::nullopt;
}

/// Position that the KNORA-BI reduction removes: the furthest sample that is not of
/// the minority class, or whose class keeps another representative.
[[nodiscard]] inline std::optional<std::size_t> borderline_imbalanced_removal(const RegionOfCompetence &r,
                                                                              std::span<const ClassLabel> labels, ClassLabel minority) {
    const auto profile = class_profile(r, labels);
    for (std::size_t b = r.size(); b > 0; --b) {
        const ClassLabel c = labels[r.neighbors[b - 1]];
        if (c != minority || profile.counts.at(static_cast<std::size_t>(c)) >= 2) {
            return b - 1;
        }
    }
    return std::nullopt;
}

/// One KNORA-B reduction step. Returns an empty region when no sample can be
/// removed without losing a class.
[[nodiscard]] inline RegionOfCompetence reduce_region_b(const RegionOfCompetence &r, std::span<const ClassLabel> labels) {
    const auto pos = borderline_removal(r, labels);
    return pos ? r.without(*pos) : r.emptied();
}

/// One KNORA-BI reduction step. Returns an empty region when only a lone minority
/// sample is left to remove.
[[nodiscard]] inline RegionOfCompetence reduce_region_bi(const RegionOfCompetence &r, std::span<const ClassLabel> labels,
                                                         ClassLabel minority) {
    const auto pos = borderline_imbalanced_removal(r, labels, minority);
    return pos ? r.without(*pos) : r.emptied();
}

}  // namespace knora
