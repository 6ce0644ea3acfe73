#pragma once

// Nested stratified cross-validation: an outer k-fold picks the test part, an
// inner k-fold over the remaining samples picks validation, the rest trains.
// With the defaults (5 outer, 4 inner) each replication is 60/20/20 and there
// are 20 replications.

#include "knora/dataset.hpp"
#include "knora/error.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace knora {

struct Replication {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;

    bool operator==(const Replication &) const = default;
};

struct FoldPlan {
    std::size_t outer_k{5};
    std::size_t inner_k{4};
    std::uint64_t seed{0};
    std::vector<Replication> replications;

    bool operator==(const FoldPlan &) const = default;
};

namespace detail {

/// Splits `items` into `k` contiguous chunks; the first `size % k` chunks get one extra item.
[[nodiscard]] inline std::vector<std::vector<std::size_t>> chunk(const std::vector<std::size_t> &items, std::size_t k) {
    std::vector<std::vector<std::size_t>> out(k);
    const std::size_t base = items.size() / k;
    const std::size_t extra = items.size() % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        out[f].assign(items.begin() + static_cast<std::ptrdiff_t>(pos), items.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    return out;
}

}  // namespace detail

[[nodiscard]] inline FoldPlan stratified_nested_split(std::span<const ClassLabel> labels, std::size_t outer_k, std::size_t inner_k,
                                                      std::uint64_t seed) {
    if (outer_k < 2 || inner_k < 2) {
        throw config_error("fold counts must be at least 2");
    }
    std::array<std::vector<std::size_t>, num_classes> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class.at(static_cast<std::size_t>(labels[i])).push_back(i);
    }
    for (const auto &members : by_class) {
        if (members.size() < outer_k) {
            throw data_error("insufficient minority samples: a class has " + std::to_string(members.size()) +
                             " samples, outer folds need " + std::to_string(outer_k));
        }
        if (members.size() - members.size() / outer_k - (members.size() % outer_k ? 1 : 0) < inner_k) {
            throw data_error("insufficient minority samples for " + std::to_string(inner_k) + " inner folds");
        }
    }

    std::mt19937_64 rng(seed);
    std::array<std::vector<std::vector<std::size_t>>, num_classes> outer;
    for (std::size_t c = 0; c < num_classes; ++c) {
        auto shuffled = by_class[c];
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        outer[c] = detail::chunk(shuffled, outer_k);
    }

    FoldPlan plan{outer_k, inner_k, seed, {}};
    plan.replications.reserve(outer_k * inner_k);
    for (std::size_t o = 0; o < outer_k; ++o) {
        std::array<std::vector<std::vector<std::size_t>>, num_classes> inner;
        for (std::size_t c = 0; c < num_classes; ++c) {
            std::vector<std::size_t> remaining;
            for (std::size_t f = 0; f < outer_k; ++f) {
                if (f != o) {
                    remaining.insert(remaining.end(), outer[c][f].begin(), outer[c][f].end());
                }
            }
            inner[c] = detail::chunk(remaining, inner_k);
        }
        for (std::size_t v = 0; v < inner_k; ++v) {
            Replication rep;
            for (std::size_t c = 0; c < num_classes; ++c) {
                rep.test.insert(rep.test.end(), outer[c][o].begin(), outer[c][o].end());
                for (std::size_t f = 0; f < inner_k; ++f) {
                    auto &dst = f == v ? rep.validation : rep.train;
                    dst.insert(dst.end(), inner[c][f].begin(), inner[c][f].end());
                }
            }
            std::sort(rep.train.begin(), rep.train.end());
            std::sort(rep.validation.begin(), rep.validation.end());
            std::sort(rep.test.begin(), rep.test.end());
            plan.replications.push_back(std::move(rep));
        }
    }
    return plan;
}

[[nodiscard]] inline FoldPlan stratified_nested_split(const Dataset &d, std::size_t outer_k = 5, std::size_t inner_k = 4,
                                                      std::uint64_t seed = 0) {
    return stratified_nested_split(d.labels, outer_k, inner_k, seed);
}

}  // namespace knora
