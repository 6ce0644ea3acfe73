#include "generators.hpp"

#include "knora/perceptron.hpp"
#include "knora/pool.hpp"
#include "knora/pool_io.hpp"
#include "knora/synthetic.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

namespace {

using namespace knora;

Dataset two_points() {
    FeatureMatrix x(0, 2);
    x.append_row(std::vector<double>{0.0, 0.0});
    x.append_row(std::vector<double>{1.0, 1.0});
    return make_dataset("two", {"a", "b"}, std::move(x), {"neg", "pos"});
}

TEST(Perceptron, SeparatesTwoPoints) {
    const auto d = two_points();
    const auto clf = train_perceptron(d, 1, {}, 3);
    EXPECT_GE(clf.score(std::vector<double>{1.0, 1.0}), 0.0);
    EXPECT_LT(clf.score(std::vector<double>{0.0, 0.0}), 0.0);
}

TEST(Perceptron, SingleClassBagIsConstant) {
    const auto d = two_points();
    const std::vector<std::size_t> only_pos{1, 1, 1};
    const auto clf = train_perceptron(d, only_pos, 1, {}, 0);
    EXPECT_EQ(clf, constant_classifier(2, 1, 1));
    EXPECT_EQ(clf.predict(std::vector<double>{-5.0, 100.0}), 1);
    const std::vector<std::size_t> only_neg{0};
    EXPECT_EQ(train_perceptron(d, only_neg, 1, {}, 0).predict(std::vector<double>{1.0, 1.0}), 0);
}

TEST(Perceptron, BoundaryPredictsPositive) {
    const LinearClassifier clf{{1.0, -1.0}, 0.0, 1, 0};
    EXPECT_EQ(clf.predict(std::vector<double>{2.0, 2.0}), 1);
    EXPECT_THROW((void)clf.score(std::vector<double>{1.0}), data_error);
}

TEST(PerceptronProperty, SeparableSetsReachZeroTrainingError) {
    gen::Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        // margin-separated points around a random hyperplane
        const std::vector<double> w{gen::uniform(rng, -1, 1), gen::uniform(rng, -1, 1)};
        FeatureMatrix x(0, 2);
        std::vector<std::string> labels;
        while (x.rows() < 50) {
            const std::vector<double> p{gen::uniform(rng, -1, 1), gen::uniform(rng, -1, 1)};
            const double s = w[0] * p[0] + w[1] * p[1] + 0.1;
            if (std::fabs(s) < 0.05 * std::hypot(w[0], w[1])) {
                continue;
            }
            x.append_row(p);
            labels.emplace_back(s > 0 ? "b" : "a");
        }
        if (std::count(labels.begin(), labels.end(), "a") == 0 || std::count(labels.begin(), labels.end(), "b") == 0) {
            continue;
        }
        const auto d = make_dataset("sep", {"x", "y"}, std::move(x), labels);
        const auto clf = train_perceptron(d, 1, {}, static_cast<std::uint64_t>(trial));
        for (std::size_t i = 0; i < d.size(); ++i) {
            ASSERT_EQ(clf.predict(d.sample(i)), d.labels[i]) << "trial " << trial;
        }
    }
}

TEST(PerceptronProperty, SignFlipFlipsPredictions) {
    gen::Rng rng(10);
    for (int trial = 0; trial < 500; ++trial) {
        LinearClassifier c{{gen::uniform(rng, -1, 1), gen::uniform(rng, -1, 1)}, gen::uniform(rng, -1, 1), 1, 0};
        LinearClassifier flipped{{-c.weights[0], -c.weights[1]}, -c.bias, 1, 0};
        const std::vector<double> x{gen::uniform(rng, -1, 1), gen::uniform(rng, -1, 1)};
        if (c.score(x) == 0.0) {
            continue;
        }
        ASSERT_NE(c.predict(x), flipped.predict(x));
    }
}

TEST(Bagging, PoolSizeSeedsAndDeterminism) {
    gen::Rng rng(11);
    const auto d = gen::random_dataset(rng, 80, 3, 0.3);
    const auto pool = bagging_pool(d, 100, 1, {}, 500);
    EXPECT_EQ(pool.size(), 100U);
    EXPECT_EQ(pool.bag_seeds.front(), 500U);
    EXPECT_EQ(pool.bag_seeds.back(), 599U);
    EXPECT_EQ(bagging_pool(d, 1, 1, {}, 42), bagging_pool(d, 1, 1, {}, 42));
    EXPECT_EQ(bagging_pool(d, 5, 1, {}, 42).classifiers[3], bagging_pool(d, 4, 1, {}, 42).classifiers[3]);
    EXPECT_THROW((void)bagging_pool(d, 0, 1, {}, 0), config_error);
    EXPECT_THROW((void)bagging_pool(subset(d, std::vector<std::size_t>{}), 3, 1, {}, 0), data_error);
}

// Per-bag spread is about 0.022 at n = 200, so roughly 2% of bags fall outside 0.05.
TEST(Bagging, OutOfBagFractionNearOneOverE) {
    SyntheticSpec spec;
    spec.samples = 200;
    const auto data = make_blobs(spec);
    const auto pool = bagging_pool(data, 100, 1, {5, 0.1}, 17);
    double total = 0.0;
    std::size_t within = 0;
    for (const auto seed : pool.bag_seeds) {
        const auto bag = bootstrap_indices(data.size(), seed);
        const std::set<std::size_t> in(bag.begin(), bag.end());
        const double oob = 1.0 - static_cast<double>(in.size()) / 200.0;
        within += std::fabs(oob - std::exp(-1.0)) <= 0.05 ? 1 : 0;
        total += oob;
    }
    EXPECT_GE(within, 94U);
    EXPECT_NEAR(total / 100.0, std::exp(-1.0), 0.01);
}

TEST(Oracle, ConstantClassifierRow) {
    FeatureMatrix x(0, 1);
    for (int i = 0; i < 5; ++i) {
        x.append_row(std::vector<double>{static_cast<double>(i)});
    }
    const auto v = make_dataset("v", {"x"}, std::move(x), {"pos", "pos", "pos", "neg", "neg"});
    const ClassLabel pos = 1;
    ClassifierPool pool;
    pool.classifiers = {constant_classifier(1, pos, pos), constant_classifier(1, pos, pos)};
    const auto m = build_oracle_matrix(pool, v);
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_EQ(m.correct(0, j), j < 3);
        EXPECT_EQ(m.correct(1, j), m.correct(0, j));
    }
}

TEST(Oracle, DimensionMismatchAndEmptyValidation) {
    gen::Rng rng(12);
    const auto v = gen::random_dataset(rng, 10, 3);
    ClassifierPool pool;
    pool.classifiers = {constant_classifier(2, 1, 1)};
    EXPECT_THROW((void)build_oracle_matrix(pool, v), data_error);
    EXPECT_THROW((void)build_oracle_matrix(pool, subset(v, std::vector<std::size_t>{})), data_error);
}

TEST(OracleProperty, MatchesRecount) {
    gen::Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const auto train = gen::random_dataset(rng, 40, 3, 0.3);
        const auto validation = gen::random_dataset(rng, 25, 3, 0.3);
        const auto pool = bagging_pool(train, 12, 1, {20, 0.1}, rng());
        const auto m = build_oracle_matrix(pool, validation);
        ASSERT_EQ(m.pool_size(), 12U);
        ASSERT_EQ(m.validation_size(), 25U);
        for (std::size_t i = 0; i < pool.size(); ++i) {
            for (std::size_t j = 0; j < validation.size(); ++j) {
                const double s = std::inner_product(pool[i].weights.begin(), pool[i].weights.end(), validation.sample(j).begin(), pool[i].bias);
                const ClassLabel predicted = s >= 0.0 ? pool[i].positive_label : pool[i].negative_label;
                ASSERT_EQ(m.correct(i, j), predicted == validation.labels[j]);
            }
        }
    }
}

TEST(PoolIo, JsonRoundTrip) {
    gen::Rng rng(14);
    const auto train = gen::random_dataset(rng, 30, 4);
    PoolFile f{bagging_pool(train, 7, 0, {30, 0.05}, 99), train.class_names, {30, 0.05}, 99};
    EXPECT_EQ(pool_from_json(pool_to_json(f)), f);

    const auto dir = std::filesystem::temp_directory_path() / "knora_pool_io_test";
    std::filesystem::create_directories(dir);
    save_pool(dir / "pool.json", f);
    EXPECT_EQ(load_pool(dir / "pool.json"), f);
    std::filesystem::remove_all(dir);
}

TEST(PoolIo, RejectsForeignOrFutureFiles) {
    auto j = pool_to_json({});
    j["version"] = pool_format_version + 1;
    EXPECT_THROW((void)pool_from_json(j), data_error);
    EXPECT_THROW((void)pool_from_json(nlohmann::json{{"format", "other"}}), data_error);
    EXPECT_THROW((void)pool_from_json(nlohmann::json::array()), data_error);
}

TEST(MixSeed, IsAPermutationOnSamples) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        seen.insert(mix_seed(s));
    }
    EXPECT_EQ(seen.size(), 10000U);
}

}  // namespace
