#include "generators.hpp"

#include "knora/folds.hpp"
#include "knora/reference_oracle.hpp"
#include "knora/scenario.hpp"
#include "knora/synthetic.hpp"

#include <gtest/gtest.h>

namespace {

using namespace knora;

TEST(Scenario, FixtureGeometry) {
    const auto f = scenario_fixture();
    EXPECT_EQ(f.region.neighbors, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
    EXPECT_TRUE(f.pool.classifiers[0].predict(f.query) == f.query_label);
    EXPECT_FALSE(f.pool.classifiers[1].predict(f.query) == f.query_label);
    // c1 right on A and C, c2 right on A and B
    EXPECT_EQ(f.oracle.correct(0, 0), true);
    EXPECT_EQ(f.oracle.correct(0, 2), true);
    EXPECT_EQ(f.oracle.correct(0, 1) || f.oracle.correct(0, 3) || f.oracle.correct(0, 4), false);
    EXPECT_EQ(f.oracle.correct(1, 0) && f.oracle.correct(1, 1), true);
    EXPECT_EQ(f.oracle.correct(1, 2) || f.oracle.correct(1, 3) || f.oracle.correct(1, 4), false);
}

TEST(Scenario, EliminateDropsTheLastCircleAndKeepsTheWrongClassifier) {
    const auto t = scenario_traces().knora_e;
    ASSERT_EQ(t.iterations.size(), 4U);
    EXPECT_EQ(t.iterations[0].removed, std::optional<std::size_t>{4});
    EXPECT_EQ(t.iterations[1].removed, std::optional<std::size_t>{3});
    EXPECT_EQ(t.iterations[2].removed, std::optional<std::size_t>{2});
    EXPECT_EQ(t.result.indices(), (std::vector<std::size_t>{1}));
    EXPECT_FALSE(t.fallback_used);
}

TEST(Scenario, BorderlineKeepsTheLastCircleAndTheRightClassifier) {
    const auto traces = scenario_traces();
    for (const auto *t : {&traces.knora_b, &traces.knora_bi_circle_minority}) {
        ASSERT_EQ(t->iterations.size(), 4U);
        EXPECT_EQ(t->iterations[2].removed, std::optional<std::size_t>{1});
        EXPECT_EQ(t->result.indices(), (std::vector<std::size_t>{0}));
    }
    EXPECT_TRUE(same_path(traces.knora_b, traces.knora_bi_circle_minority));
    // with circle as the majority class the lone circle is no longer protected
    EXPECT_TRUE(same_path(traces.knora_e, traces.knora_bi_circle_majority));
}

TEST(Scenario, VotesFollowTheSelection) {
    const auto f = scenario_fixture();
    const auto traces = scenario_traces();
    EXPECT_EQ(combine_votes(traces.knora_b.result, f.pool, f.query, f.circle).predicted, f.circle);
    EXPECT_EQ(combine_votes(traces.knora_e.result, f.pool, f.query, f.circle).predicted, f.square);
}

TEST(Scenario, AgreesWithReference) {
    const auto f = scenario_fixture();
    const auto region = reference::knn(f.query, f.validation.features, 5);
    EXPECT_EQ(region, f.region.neighbors);
    const auto traces = scenario_traces();
    EXPECT_EQ(reference::select("KNORA-E", f.oracle, f.validation.labels, f.circle, region), traces.knora_e.result);
    EXPECT_EQ(reference::select("KNORA-B", f.oracle, f.validation.labels, f.circle, region), traces.knora_b.result);
    EXPECT_EQ(reference::select("KNORA-BI", f.oracle, f.validation.labels, f.square, region), traces.knora_bi_circle_majority.result);
}

// ---- synthetic data --------------------------------------------------------------

TEST(Synthetic, CountsAndImbalance) {
    SyntheticSpec spec;
    spec.samples = 400;
    spec.imbalance_ratio = 9.0;
    const auto d = make_blobs(spec);
    EXPECT_EQ(d.size(), 400U);
    const auto s = imbalance_summary(d);
    EXPECT_EQ(s.counts[s.minority], 40U);
    EXPECT_EQ(d.class_names[s.minority], synthetic_minority_name);
    EXPECT_NEAR(s.ir, 9.0, 1e-12);
    EXPECT_EQ(make_blobs(spec).features, d.features);
    EXPECT_EQ(make_blobs(spec).labels, d.labels);
    spec.seed = 2;
    EXPECT_NE(make_blobs(spec).features, d.features);
}

TEST(Synthetic, Errors) {
    SyntheticSpec spec;
    spec.imbalance_ratio = 0.5;
    EXPECT_THROW((void)make_blobs(spec), config_error);
    spec.imbalance_ratio = 500.0;
    spec.samples = 10;
    EXPECT_THROW((void)make_blobs(spec), config_error);
    spec = {};
    spec.dimensions = 0;
    EXPECT_THROW((void)make_blobs(spec), config_error);
}

TEST(Synthetic, BundledSuite) {
    const auto suite = bundled_suite(1);
    ASSERT_EQ(suite.size(), 12U);
    EXPECT_DOUBLE_EQ(suite.front().imbalance_ratio, 2.0);
    EXPECT_DOUBLE_EQ(suite.back().imbalance_ratio, 30.0);
    for (const auto &spec : suite) {
        const auto d = make_blobs(spec);
        const auto s = imbalance_summary(d);
        EXPECT_NEAR(s.ir, spec.imbalance_ratio, 0.6) << spec.name;
        EXPECT_NO_THROW((void)stratified_nested_split(d)) << spec.name;
    }
}

}  // namespace
