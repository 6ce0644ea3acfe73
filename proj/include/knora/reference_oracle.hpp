#pragma once

// Deliberately naive selectors for differential testing. Each step is done the
// long way: class sets are recomputed from scratch, every loop
// iteration rescans the whole region, neighbors are found by a full sort. Slow
// and obvious by design; never used by the harness.

#include "knora/dataset.hpp"
#include "knora/pool.hpp"
#include "knora/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace knora::reference {

using Region = std::vector<std::size_t>;  // validation indices, nearest first

[[nodiscard]] inline Region knn(std::span<const double> query, const FeatureMatrix &validation, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < validation.rows(); ++j) {
        double d = 0.0;
        for (std::size_t f = 0; f < query.size(); ++f) {
            d += (query[f] - validation(j, f)) * (query[f] - validation(j, f));
        }
        all.emplace_back(std::sqrt(d), j);
    }
    std::sort(all.begin(), all.end());
    Region out;
    for (std::size_t i = 0; i < k && i < all.size(); ++i) {
        out.push_back(all[i].second);
    }
    return out;
}

struct Problem {
    const OracleMatrix &oracle;
    const std::vector<ClassLabel> &labels;
    ClassLabel minority;
    std::vector<std::size_t> classifiers;  // the pool C (or a pre-selected part of it)
};

[[nodiscard]] inline std::vector<std::size_t> whole_pool(const OracleMatrix &oracle) {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < oracle.pool_size(); ++i) {
        c.push_back(i);
    }
    return c;
}

[[nodiscard]] inline std::set<ClassLabel> class_set(const Problem &p, const Region &psi) {
    std::set<ClassLabel> s;
    for (const auto j : psi) {
        s.insert(p.labels[j]);
    }
    return s;
}

[[nodiscard]] inline bool correct_on_all(const Problem &p, std::size_t c, const Region &psi) {
    for (const auto j : psi) {
        if (!p.oracle.correct(c, j)) {
            return false;
        }
    }
    return true;
}

[[nodiscard]] inline Region without_bth(const Region &psi, std::size_t b) {  // b is 1-based from the nearest
    Region out = psi;
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(b - 1));
    return out;
}

[[nodiscard]] inline SelectedEnsemble as_ensemble(const std::map<std::size_t, int> &eoc) {
    SelectedEnsemble e;
    for (const auto &[c, w] : eoc) {
        e.members.push_back({c, w});
    }
    return e;
}

/// All classifiers matching the single best accuracy on the original region.
[[nodiscard]] inline SelectedEnsemble fallback_best_accuracy(const Problem &p, const Region &psi_original) {
    std::map<std::size_t, int> accuracy;
    for (const auto c : p.classifiers) {
        int hits = 0;
        for (const auto j : psi_original) {
            if (p.oracle.correct(c, j)) {
                hits += 1;
            }
        }
        accuracy[c] = hits;
    }
    int best = -1;
    for (const auto &[c, a] : accuracy) {
        best = std::max(best, a);
    }
    std::map<std::size_t, int> eoc;
    for (const auto &[c, a] : accuracy) {
        if (a == best) {
            eoc[c] = 1;
        }
    }
    return as_ensemble(eoc);
}

[[nodiscard]] inline SelectedEnsemble knora_e(const Problem &p, const Region &psi_original) {
    Region psi = psi_original;
    std::map<std::size_t, int> eoc;
    while (eoc.empty() && !psi.empty()) {
        for (const auto c : p.classifiers) {
            if (correct_on_all(p, c, psi)) {
                eoc[c] = 1;
            }
        }
        if (eoc.empty()) {
            psi = without_bth(psi, psi.size());
        }
    }
    if (eoc.empty()) {
        return fallback_best_accuracy(p, psi_original);
    }
    return as_ensemble(eoc);
}

[[nodiscard]] inline SelectedEnsemble knora_u(const Problem &p, const Region &psi) {
    std::map<std::size_t, int> eoc;
    for (const auto c : p.classifiers) {
        for (const auto j : psi) {
            if (p.oracle.correct(c, j)) {
                eoc[c] += 1;
            }
        }
    }
    if (eoc.empty()) {
        for (const auto c : p.classifiers) {
            eoc[c] = 1;
        }
    }
    return as_ensemble(eoc);
}

/// Reduced region for KNORA-B: scanning b from the furthest to the nearest, drop the
/// first neighbor whose removal keeps the class set; the empty region if none does.
[[nodiscard]] inline Region reduce_b(const Problem &p, const Region &psi) {
    const auto classes = class_set(p, psi);
    for (std::size_t b = psi.size(); b >= 1; --b) {
        const Region candidate = without_bth(psi, b);
        if (class_set(p, candidate) == classes) {
            return candidate;
        }
    }
    return {};
}

/// Reduced region for KNORA-BI: a neighbor is removable if it is not of the minority
/// class or its removal keeps the class set.
[[nodiscard]] inline Region reduce_bi(const Problem &p, const Region &psi) {
    const auto classes = class_set(p, psi);
    for (std::size_t b = psi.size(); b >= 1; --b) {
        const Region candidate = without_bth(psi, b);
        if (p.labels[psi[b - 1]] != p.minority || class_set(p, candidate) == classes) {
            return candidate;
        }
    }
    return {};
}

template <typename Reduce>
[[nodiscard]] SelectedEnsemble borderline(const Problem &p, const Region &psi_original, Reduce reduce) {
    Region psi = psi_original;
    std::map<std::size_t, int> eoc;
    while (eoc.empty() && !psi.empty()) {
        for (const auto c : p.classifiers) {
            if (correct_on_all(p, c, psi)) {
                eoc[c] = 1;
            }
        }
        if (eoc.empty()) {
            psi = reduce(p, psi);
        }
    }
    if (eoc.empty()) {
        return knora_e(p, psi_original);
    }
    return as_ensemble(eoc);
}

[[nodiscard]] inline SelectedEnsemble knora_b(const Problem &p, const Region &psi) { return borderline(p, psi, reduce_b); }

[[nodiscard]] inline SelectedEnsemble knora_bi(const Problem &p, const Region &psi) { return borderline(p, psi, reduce_bi); }

/// Classifiers correct on some pair of region samples with different labels; all of
/// `p.classifiers` when the region is homogeneous or nobody qualifies.
[[nodiscard]] inline std::vector<std::size_t> dfp(const Problem &p, const Region &psi) {
    if (class_set(p, psi).size() < 2) {
        return p.classifiers;
    }
    std::vector<std::size_t> kept;
    for (const auto c : p.classifiers) {
        bool crosses = false;
        for (const auto j : psi) {
            for (const auto k : psi) {
                if (p.labels[j] != p.labels[k] && p.oracle.correct(c, j) && p.oracle.correct(c, k)) {
                    crosses = true;
                }
            }
        }
        if (crosses) {
            kept.push_back(c);
        }
    }
    return kept.empty() ? p.classifiers : kept;
}

/// Dispatch by technique name; an "F" prefix applies `dfp` first.
[[nodiscard]] inline SelectedEnsemble select(const std::string &technique, const OracleMatrix &oracle, const std::vector<ClassLabel> &labels,
                                             ClassLabel minority, const Region &psi) {
    Problem p{oracle, labels, minority, whole_pool(oracle)};
    std::string name = technique;
    if (name.size() > 1 && name.front() == 'F') {
        p.classifiers = dfp(p, psi);
        name.erase(0, 1);
    }
    if (name == "KNORA-E") {
        return knora_e(p, psi);
    }
    if (name == "KNORA-U") {
        return knora_u(p, psi);
    }
    if (name == "KNORA-B") {
        return knora_b(p, psi);
    }
    if (name == "KNORA-BI") {
        return knora_bi(p, psi);
    }
    throw std::invalid_argument("reference: unknown technique " + technique);
}

}  // namespace knora::reference
