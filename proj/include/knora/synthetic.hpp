#pragma once

// Gaussian-blob binary datasets with a controllable imbalance ratio. The majority
// class is one isotropic blob at the origin; the minority class is split into a
// few smaller blobs placed at `separation` from the origin in random directions,
// so no single hyperplane separates the classes.

#include "knora/dataset.hpp"
#include "knora/error.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace knora {

struct SyntheticSpec {
    std::string name{"blobs"};
    std::size_t samples{400};
    double imbalance_ratio{9.0};
    std::size_t dimensions{2};
    std::size_t minority_clusters{2};
    double separation{2.0};
    double minority_spread{0.75};
    std::uint64_t seed{1};
};

inline constexpr const char *synthetic_majority_name = "negative";
inline constexpr const char *synthetic_minority_name = "positive";

[[nodiscard]] inline Dataset make_blobs(const SyntheticSpec &spec) {
    if (spec.dimensions == 0 || spec.minority_clusters == 0) {
        throw config_error("synthetic data needs at least one dimension and one minority cluster");
    }
    if (!(spec.imbalance_ratio >= 1.0)) {
        throw config_error("imbalance ratio must be >= 1");
    }
    const auto minority = static_cast<std::size_t>(std::lround(static_cast<double>(spec.samples) / (1.0 + spec.imbalance_ratio)));
    if (minority < 1 || minority >= spec.samples) {
        throw config_error("synthetic data: " + std::to_string(spec.samples) + " samples cannot realise IR " +
                           std::to_string(spec.imbalance_ratio));
    }
    const std::size_t majority = spec.samples - minority;

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::vector<double>> centers(spec.minority_clusters, std::vector<double>(spec.dimensions));
    for (auto &c : centers) {
        double norm = 0.0;
        for (auto &v : c) {
            v = gauss(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (auto &v : c) {
            v = norm > 0.0 ? v / norm * spec.separation : spec.separation;
        }
    }

    FeatureMatrix x(spec.samples, spec.dimensions);
    std::vector<std::string> labels;
    labels.reserve(spec.samples);
    for (std::size_t i = 0; i < majority; ++i) {
        for (auto &v : x.row(i)) {
            v = gauss(rng);
        }
        labels.emplace_back(synthetic_majority_name);
    }
    for (std::size_t i = 0; i < minority; ++i) {
        const auto &c = centers[i % centers.size()];
        auto row = x.row(majority + i);
        for (std::size_t f = 0; f < spec.dimensions; ++f) {
            row[f] = c[f] + spec.minority_spread * gauss(rng);
        }
        labels.emplace_back(synthetic_minority_name);
    }

    std::vector<std::string> names;
    for (std::size_t f = 0; f < spec.dimensions; ++f) {
        names.push_back("x" + std::to_string(f));
    }
    return make_dataset(spec.name, std::move(names), std::move(x), labels);
}

/// Twelve imbalanced problems with IR from 2 to 30, varying dimension and minority
/// cluster count; `seed` changes every sample.
[[nodiscard]] inline std::vector<SyntheticSpec> bundled_suite(std::uint64_t seed) {
    const double irs[] = {2, 3, 4, 5, 6, 8, 10, 13, 16, 20, 25, 30};
    std::vector<SyntheticSpec> out;
    for (std::size_t i = 0; i < std::size(irs); ++i) {
        SyntheticSpec s;
        s.imbalance_ratio = irs[i];
        s.samples = 600;
        s.dimensions = 2 + i % 4;
        s.minority_clusters = 1 + i % 3;
        s.separation = 2.0;
        s.seed = seed * 1000 + i;
        s.name = "blobs-ir" + std::to_string(static_cast<int>(irs[i])) + "-d" + std::to_string(s.dimensions) + "-c" +
                 std::to_string(s.minority_clusters);
        out.push_back(s);
    }
    return out;
}

}  // namespace knora
