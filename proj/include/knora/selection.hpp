#pragma once

// K-Nearest Oracles dynamic ensemble selection.
//
// Every selector works on a precomputed OracleMatrix and a region of competence
// (validation indices, nearest first) and always returns a nonempty ensemble:
//
//   KNORA-U   classifiers correct on at least one region sample, weighted by how
//             many they get right; all classifiers (weight 1) if none qualifies.
//   KNORA-E   classifiers correct on the whole region; drop the furthest sample
//             until someone qualifies, else the best-accuracy tie set on the
//             original region.
//   KNORA-B   as KNORA-E, but a reduction step never removes the last sample of
//             a class; when stuck, KNORA-E on the original region.
//   KNORA-BI  as KNORA-B, but only the last minority sample is protected.
//
// A candidate set restricts selection (and fallbacks) to part of the pool; it is
// how the DFP pre-selection (F-prefixed techniques) plugs in.

#include "knora/dataset.hpp"
#include "knora/error.hpp"
#include "knora/pool.hpp"
#include "knora/region.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace knora {

struct EnsembleMember {
    std::size_t classifier{0};
    int weight{1};

    bool operator==(const EnsembleMember &) const = default;
};

struct SelectedEnsemble {
    std::vector<EnsembleMember> members;  // ascending classifier index

    [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
    [[nodiscard]] bool empty() const noexcept { return members.empty(); }
    [[nodiscard]] std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(members.size());
        for (const auto &m : members) {
            out.push_back(m.classifier);
        }
        return out;
    }

    bool operator==(const SelectedEnsemble &) const = default;
};

struct TraceIteration {
    std::vector<std::size_t> region;
    std::vector<ClassLabel> classes;
    std::size_t selected{0};
    std::optional<std::size_t> removed;  // validation index dropped after this iteration
    bool fallback{false};

    bool operator==(const TraceIteration &) const = default;
};

struct SelectionTrace {
    std::string technique;
    std::size_t query_id{RegionOfCompetence::no_query};
    std::vector<TraceIteration> iterations;
    bool fallback_used{false};
    SelectedEnsemble result;

    bool operator==(const SelectionTrace &) const = default;
};

/// Read-only inputs shared by every selection for one validation set.
struct SelectionContext {
    const OracleMatrix &oracle;
    std::span<const ClassLabel> validation_labels;
    ClassLabel minority{1};
    std::span<const std::size_t> candidates{};  // empty: the whole pool

    [[nodiscard]] std::vector<std::size_t> candidate_list() const {
        if (!candidates.empty()) {
            return {candidates.begin(), candidates.end()};
        }
        std::vector<std::size_t> all(oracle.pool_size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }

    [[nodiscard]] SelectionContext restricted_to(std::span<const std::size_t> subset) const {
        return {oracle, validation_labels, minority, subset};
    }
};

namespace detail {

inline void record(SelectionTrace *trace, const RegionOfCompetence &region, std::span<const ClassLabel> labels, std::size_t selected,
                   std::optional<std::size_t> removed, bool fallback) {
    if (trace == nullptr) {
        return;
    }
    TraceIteration it;
    it.region = region.neighbors;
    for (const auto j : region.neighbors) {
        it.classes.push_back(labels[j]);
    }
    it.selected = selected;
    it.removed = removed;
    it.fallback = fallback;
    trace->iterations.push_back(std::move(it));
}

inline SelectedEnsemble finish(SelectionTrace *trace, SelectedEnsemble e) {
    if (trace != nullptr) {
        trace->result = e;
    }
    return e;
}

inline void require_region(const RegionOfCompetence &region) {
    if (region.empty()) {
        throw data_error("selection requires a nonempty region of competence");
    }
}

[[nodiscard]] inline SelectedEnsemble unit_weights(const std::vector<std::size_t> &indices) {
    SelectedEnsemble e;
    e.members.reserve(indices.size());
    for (const auto i : indices) {
        e.members.push_back({i, 1});
    }
    return e;
}

}  // namespace detail

/// All candidates whose number of correct samples on `original` equals the best.
[[nodiscard]] inline SelectedEnsemble fallback_best_accuracy(const SelectionContext &ctx, const RegionOfCompetence &original) {
    detail::require_region(original);
    std::vector<std::size_t> best;
    std::size_t best_hits = 0;
    for (const auto i : ctx.candidate_list()) {
        std::size_t hits = 0;
        for (const auto j : original.neighbors) {
            hits += ctx.oracle.correct(i, j) ? 1 : 0;
        }
        if (best.empty() || hits > best_hits) {
            best_hits = hits;
            best.assign(1, i);
        } else if (hits == best_hits) {
            best.push_back(i);
        }
    }
    std::sort(best.begin(), best.end());
    return detail::unit_weights(best);
}

/// KNORA-E. A classifier survives the region shrunk to size s iff its leading run of
/// correct samples has length >= s, so the answer is the set with the longest run.
[[nodiscard]] inline SelectedEnsemble select_knora_e(const SelectionContext &ctx, const RegionOfCompetence &region,
                                                     SelectionTrace *trace = nullptr) {
    detail::require_region(region);
    const auto candidates = ctx.candidate_list();
    std::vector<std::size_t> run(candidates.size(), 0);
    std::size_t longest = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        std::size_t n = 0;
        while (n < region.size() && ctx.oracle.correct(candidates[c], region.neighbors[n])) {
            ++n;
        }
        run[c] = n;
        longest = std::max(longest, n);
    }
    std::vector<std::size_t> chosen;
    if (longest > 0) {
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (run[c] == longest) {
                chosen.push_back(candidates[c]);
            }
        }
        std::sort(chosen.begin(), chosen.end());
    }
    if (trace != nullptr) {
        const std::size_t stop = std::max<std::size_t>(longest, 1);
        for (std::size_t s = region.size(); s >= stop; --s) {
            const bool last = s == stop;
            const std::size_t selected = last ? chosen.size() : 0;
            const auto removed = selected == 0 ? std::optional<std::size_t>{region.neighbors[s - 1]} : std::nullopt;
            detail::record(trace, region.prefix(s), ctx.validation_labels, selected, removed, false);
            if (s == 1) {
                break;
            }
        }
    }
    if (!chosen.empty()) {
        return detail::finish(trace, detail::unit_weights(chosen));
    }
    if (trace != nullptr) {
        trace->fallback_used = true;
    }
    auto fb = fallback_best_accuracy(ctx, region);
    detail::record(trace, region, ctx.validation_labels, fb.size(), std::nullopt, true);
    return detail::finish(trace, std::move(fb));
}

/// KNORA-U: weight = number of region samples the classifier gets right.
[[nodiscard]] inline SelectedEnsemble select_knora_u(const SelectionContext &ctx, const RegionOfCompetence &region,
                                                     SelectionTrace *trace = nullptr) {
    detail::require_region(region);
    auto candidates = ctx.candidate_list();
    std::sort(candidates.begin(), candidates.end());
    SelectedEnsemble e;
    for (const auto i : candidates) {
        int hits = 0;
        for (const auto j : region.neighbors) {
            hits += ctx.oracle.correct(i, j) ? 1 : 0;
        }
        if (hits > 0) {
            e.members.push_back({i, hits});
        }
    }
    detail::record(trace, region, ctx.validation_labels, e.size(), std::nullopt, false);
    if (e.empty()) {
        if (trace != nullptr) {
            trace->fallback_used = true;
        }
        e = detail::unit_weights(candidates);
        detail::record(trace, region, ctx.validation_labels, e.size(), std::nullopt, true);
    }
    return detail::finish(trace, std::move(e));
}

namespace detail {

/// Shared loop of KNORA-B and KNORA-BI. `removal` picks the position to drop from
/// the current region, or nullopt when the region cannot shrink.
template <typename RemovalRule>
[[nodiscard]] SelectedEnsemble borderline_select(const SelectionContext &ctx, const RegionOfCompetence &original, RemovalRule removal,
                                                 SelectionTrace *trace) {
    require_region(original);
    auto candidates = ctx.candidate_list();
    std::sort(candidates.begin(), candidates.end());

    // wrong[c]: region samples candidate c misclassifies
    std::vector<std::size_t> wrong(candidates.size(), 0);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        for (const auto j : original.neighbors) {
            wrong[c] += ctx.oracle.correct(candidates[c], j) ? 0 : 1;
        }
    }

    RegionOfCompetence region = original;
    std::vector<std::size_t> chosen;
    while (chosen.empty() && !region.empty()) {
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (wrong[c] == 0) {
                chosen.push_back(candidates[c]);
            }
        }
        if (!chosen.empty()) {
            record(trace, region, ctx.validation_labels, chosen.size(), std::nullopt, false);
            break;
        }
        const std::optional<std::size_t> pos = removal(region);
        if (!pos) {
            record(trace, region, ctx.validation_labels, 0, std::nullopt, false);
            region = region.emptied();
            break;
        }
        const std::size_t dropped = region.neighbors[*pos];
        record(trace, region, ctx.validation_labels, 0, dropped, false);
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (!ctx.oracle.correct(candidates[c], dropped)) {
                --wrong[c];
            }
        }
        region = region.without(*pos);
    }
    if (!chosen.empty()) {
        return finish(trace, unit_weights(chosen));
    }

    if (trace != nullptr) {
        trace->fallback_used = true;
    }
    SelectionTrace fallback_trace;
    auto fb = select_knora_e(ctx, original, trace != nullptr ? &fallback_trace : nullptr);
    if (trace != nullptr) {
        for (auto &it : fallback_trace.iterations) {
            it.fallback = true;
            trace->iterations.push_back(std::move(it));
        }
    }
    return finish(trace, std::move(fb));
}

}  // namespace detail

[[nodiscard]] inline SelectedEnsemble select_knora_b(const SelectionContext &ctx, const RegionOfCompetence &region,
                                                     SelectionTrace *trace = nullptr) {
    return detail::borderline_select(
        ctx, region, [&](const RegionOfCompetence &r) { return borderline_removal(r, ctx.validation_labels); }, trace);
}

[[nodiscard]] inline SelectedEnsemble select_knora_bi(const SelectionContext &ctx, const RegionOfCompetence &region,
                                                      SelectionTrace *trace = nullptr) {
    return detail::borderline_select(
        ctx, region, [&](const RegionOfCompetence &r) { return borderline_imbalanced_removal(r, ctx.validation_labels, ctx.minority); },
        trace);
}

/// Simplified DFP pre-selection. In an indecision region, keeps classifiers that are
/// correct on at least one sample of each class present (their boundary crosses the
/// region). Homogeneous regions, or an empty result, keep the whole pool.
[[nodiscard]] inline std::vector<std::size_t> preselect_dfp(const SelectionContext &ctx, const RegionOfCompetence &region) {
    detail::require_region(region);
    auto all = ctx.candidate_list();
    std::sort(all.begin(), all.end());
    if (!is_indecision_region(region, ctx.validation_labels)) {
        return all;
    }
    std::vector<std::size_t> kept;
    for (const auto i : all) {
        std::array<bool, num_classes> hit{};
        for (const auto j : region.neighbors) {
            if (ctx.oracle.correct(i, j)) {
                hit.at(static_cast<std::size_t>(ctx.validation_labels[j])) = true;
            }
        }
        if (hit[0] && hit[1]) {
            kept.push_back(i);
        }
    }
    return kept.empty() ? all : kept;
}

struct VoteResult {
    ClassLabel predicted{0};
    double score{0.0};  // minority vote mass / total vote mass
};

/// Weighted majority vote; ties go to the minority class.
[[nodiscard]] inline VoteResult combine_votes(const SelectedEnsemble &ensemble, const ClassifierPool &pool, std::span<const double> query,
                                              ClassLabel minority) {
    if (ensemble.empty()) {
        throw data_error("combine_votes: empty ensemble");
    }
    double minority_mass = 0.0;
    double total = 0.0;
    for (const auto &m : ensemble.members) {
        const double w = static_cast<double>(m.weight);
        total += w;
        if (pool[m.classifier].predict(query) == minority) {
            minority_mass += w;
        }
    }
    return {minority_mass >= total - minority_mass ? minority : other_class(minority), minority_mass / total};
}

// ---- technique registry ----------------------------------------------------

using SelectorFn = std::function<SelectedEnsemble(const SelectionContext &, const RegionOfCompetence &, SelectionTrace *)>;

/// Name -> selector. Names with an "F" prefix that are not registered resolve to the
/// base technique wrapped in DFP pre-selection.
class SelectorRegistry {
  public:
    static SelectorRegistry builtin() {
        SelectorRegistry r;
        r.add("KNORA-U", [](const auto &c, const auto &reg, auto *t) { return select_knora_u(c, reg, t); });
        r.add("KNORA-E", [](const auto &c, const auto &reg, auto *t) { return select_knora_e(c, reg, t); });
        r.add("KNORA-B", [](const auto &c, const auto &reg, auto *t) { return select_knora_b(c, reg, t); });
        r.add("KNORA-BI", [](const auto &c, const auto &reg, auto *t) { return select_knora_bi(c, reg, t); });
        return r;
    }

    void add(std::string name, SelectorFn fn) { selectors_[std::move(name)] = std::move(fn); }

    [[nodiscard]] bool contains(const std::string &name) const {
        return selectors_.count(name) > 0 || (name.size() > 1 && name.front() == 'F' && selectors_.count(name.substr(1)) > 0);
    }

    [[nodiscard]] SelectorFn get(const std::string &name) const {
        if (const auto it = selectors_.find(name); it != selectors_.end()) {
            return it->second;
        }
        if (name.size() > 1 && name.front() == 'F') {
            if (const auto it = selectors_.find(name.substr(1)); it != selectors_.end()) {
                SelectorFn base = it->second;
                return [base](const SelectionContext &ctx, const RegionOfCompetence &region, SelectionTrace *trace) {
                    const auto kept = preselect_dfp(ctx, region);
                    return base(ctx.restricted_to(kept), region, trace);
                };
            }
        }
        throw config_error("unknown technique '" + name + "'");
    }

    [[nodiscard]] std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto &[name, fn] : selectors_) {
            out.push_back(name);
        }
        return out;
    }

  private:
    std::map<std::string, SelectorFn> selectors_;
};

// ---- trace output -------------------------------------------------------------

[[nodiscard]] inline nlohmann::json trace_to_json(const SelectionTrace &t) {
    nlohmann::json iterations = nlohmann::json::array();
    for (std::size_t n = 0; n < t.iterations.size(); ++n) {
        const auto &it = t.iterations[n];
        iterations.push_back({{"iteration", n + 1},
                              {"region", it.region},
                              {"classes", it.classes},
                              {"selected", it.selected},
                              {"removed", it.removed ? nlohmann::json(*it.removed) : nlohmann::json(nullptr)},
                              {"fallback", it.fallback}});
    }
    nlohmann::json members = nlohmann::json::array();
    for (const auto &m : t.result.members) {
        members.push_back({{"classifier", m.classifier}, {"weight", m.weight}});
    }
    nlohmann::json j = {{"technique", t.technique},
                        {"iterations", std::move(iterations)},
                        {"fallback_used", t.fallback_used},
                        {"selected", std::move(members)}};
    if (t.query_id != RegionOfCompetence::no_query) {
        j["query"] = t.query_id;
    }
    return j;
}

/// One JSON object per iteration, then one summary line with the selection.
inline void write_trace_lines(std::ostream &out, const SelectionTrace &t) {
    const auto j = trace_to_json(t);
    for (const auto &it : j.at("iterations")) {
        nlohmann::json line = it;
        line["technique"] = t.technique;
        if (j.contains("query")) {
            line["query"] = j["query"];
        }
        out << line.dump() << '\n';
    }
    nlohmann::json summary = {{"technique", t.technique}, {"fallback_used", t.fallback_used}, {"selected", j.at("selected")}};
    if (j.contains("query")) {
        summary["query"] = j["query"];
    }
    out << summary.dump() << '\n';
}

}  // namespace knora
