#pragma once

// A five-neighbor, two-classifier instance where the eliminate rule and the
// borderline rule diverge on the third iteration.
//
//   query q = (0, 0), true class "circle"
//   A (-1.0,  0.0) square   |q-A| = 1.00
//   B ( 0.5,  1.4) square   |q-B| = 1.49
//   C ( 1.8,  0.8) circle   |q-C| = 1.97
//   D (-2.4,  0.5) circle   |q-D| = 2.45
//   E (-1.0, -2.9) circle   |q-E| = 3.07
//
//   c1: x + 0.5 >= 0 -> circle. Correct on A and C only, and on q.
//   c2: always square. Correct on A and B only, wrong on q.
//
// Eliminate drops E, D, then C and keeps {c2}. Borderline drops E, D, then B
// (C is the last circle) and keeps {c1}.

#include "knora/dataset.hpp"
#include "knora/pool.hpp"
#include "knora/region.hpp"
#include "knora/selection.hpp"

#include <array>
#include <string>
#include <vector>

namespace knora {

struct ScenarioFixture {
    Dataset validation;
    ClassifierPool pool;
    OracleMatrix oracle;
    std::vector<double> query;
    ClassLabel query_label{0};
    ClassLabel circle{0};
    ClassLabel square{1};
    RegionOfCompetence region;
    std::array<std::string, 5> point_names{"A", "B", "C", "D", "E"};
};

[[nodiscard]] inline ScenarioFixture scenario_fixture() {
    FeatureMatrix x(0, 2);
    const std::array<std::array<double, 2>, 5> points{{{-1.0, 0.0}, {0.5, 1.4}, {1.8, 0.8}, {-2.4, 0.5}, {-1.0, -2.9}}};
    for (const auto &p : points) {
        x.append_row(p);
    }
    ScenarioFixture f;
    f.validation = make_dataset("scenario", {"x", "y"}, std::move(x), {"square", "square", "circle", "circle", "circle"});
    f.circle = 0;
    f.square = 1;
    f.pool.classifiers.push_back({{1.0, 0.0}, 0.5, f.circle, f.square});
    f.pool.classifiers.push_back(constant_classifier(2, f.square, f.circle));
    f.pool.bag_seeds = {0, 0};
    f.oracle = build_oracle_matrix(f.pool, f.validation);
    f.query = {0.0, 0.0};
    f.query_label = f.circle;
    f.region = knn_region(f.query, f.validation, 5);
    return f;
}

struct ScenarioTraces {
    SelectionTrace knora_e;
    SelectionTrace knora_b;
    SelectionTrace knora_bi_circle_minority;
    SelectionTrace knora_bi_circle_majority;
};

[[nodiscard]] inline ScenarioTraces scenario_traces() {
    const auto f = scenario_fixture();
    ScenarioTraces out;
    const auto run = [&](SelectionTrace &trace, const std::string &name, ClassLabel minority, auto selector) {
        trace.technique = name;
        const SelectionContext ctx{f.oracle, f.validation.labels, minority, {}};
        (void)selector(ctx, f.region, &trace);
    };
    run(out.knora_e, "KNORA-E", f.circle, [](const auto &c, const auto &r, auto *t) { return select_knora_e(c, r, t); });
    run(out.knora_b, "KNORA-B", f.circle, [](const auto &c, const auto &r, auto *t) { return select_knora_b(c, r, t); });
    run(out.knora_bi_circle_minority, "KNORA-BI", f.circle, [](const auto &c, const auto &r, auto *t) { return select_knora_bi(c, r, t); });
    run(out.knora_bi_circle_majority, "KNORA-BI", f.square, [](const auto &c, const auto &r, auto *t) { return select_knora_bi(c, r, t); });
    return out;
}

/// Same iterations, flags and result; the technique name is ignored.
[[nodiscard]] inline bool same_path(const SelectionTrace &a, const SelectionTrace &b) {
    return a.iterations == b.iterations && a.fallback_used == b.fallback_used && a.result == b.result;
}

}  // namespace knora
