#include "generators.hpp"

#include "knora/folds.hpp"

#include <gtest/gtest.h>

#include <set>

namespace {

using namespace knora;

std::size_t count_class(const std::vector<std::size_t> &part, const std::vector<ClassLabel> &labels, ClassLabel c) {
    return static_cast<std::size_t>(std::count_if(part.begin(), part.end(), [&](std::size_t i) { return labels[i] == c; }));
}

std::vector<ClassLabel> labels_with(std::size_t zeros, std::size_t ones, gen::Rng &rng) {
    std::vector<ClassLabel> labels(zeros, 0);
    labels.insert(labels.end(), ones, 1);
    std::shuffle(labels.begin(), labels.end(), rng);
    return labels;
}

TEST(Folds, BalancedHundred) {
    gen::Rng rng(1);
    const auto labels = labels_with(50, 50, rng);
    const auto plan = stratified_nested_split(labels, 5, 4, 7);
    ASSERT_EQ(plan.replications.size(), 20U);
    for (const auto &rep : plan.replications) {
        EXPECT_EQ(count_class(rep.test, labels, 0), 10U);
        EXPECT_EQ(count_class(rep.test, labels, 1), 10U);
        EXPECT_EQ(rep.validation.size() + rep.train.size(), 80U);
    }
}

TEST(Folds, IrisSizedKeepsTwoToOne) {
    gen::Rng rng(2);
    const auto labels = labels_with(100, 50, rng);
    for (const auto &rep : stratified_nested_split(labels, 5, 4, 3).replications) {
        EXPECT_NEAR(static_cast<double>(count_class(rep.test, labels, 0)), 2.0 * static_cast<double>(count_class(rep.test, labels, 1)), 1.0);
    }
}

TEST(Folds, TooFewMinoritySamples) {
    gen::Rng rng(3);
    const auto labels = labels_with(20, 3, rng);
    try {
        (void)stratified_nested_split(labels, 5, 4, 0);
        FAIL() << "expected an error";
    } catch (const data_error &e) {
        EXPECT_NE(std::string(e.what()).find("insufficient minority samples"), std::string::npos);
    }
    EXPECT_THROW((void)stratified_nested_split(labels, 1, 4, 0), config_error);
}

TEST(FoldsProperty, PartitionAndStratification) {
    gen::Rng rng(4);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t ones = gen::uniform_size(rng, 5, 40);
        const std::size_t zeros = gen::uniform_size(rng, 5, 200);
        const auto labels = labels_with(zeros, ones, rng);
        const auto plan = stratified_nested_split(labels, 5, 4, rng());
        ASSERT_EQ(plan.replications.size(), 20U);
        for (const auto &rep : plan.replications) {
            std::vector<int> seen(labels.size(), 0);
            for (const auto *part : {&rep.train, &rep.validation, &rep.test}) {
                ASSERT_TRUE(std::is_sorted(part->begin(), part->end()));
                for (const auto i : *part) {
                    ++seen[i];
                }
            }
            ASSERT_TRUE(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
            for (const ClassLabel c : {0, 1}) {
                const double n = static_cast<double>(c == 0 ? zeros : ones);
                const double full = n / static_cast<double>(labels.size());
                for (const auto *part : {&rep.validation, &rep.test}) {
                    const double share = static_cast<double>(count_class(*part, labels, c)) / static_cast<double>(part->size());
                    ASSERT_LE(std::fabs(share - full), 1.0 / static_cast<double>(part->size()) + 1e-12);
                }
                ASSERT_LE(std::fabs(static_cast<double>(count_class(rep.test, labels, c)) - 0.2 * n), 1.0 + 1e-9);
                ASSERT_LE(std::fabs(static_cast<double>(count_class(rep.validation, labels, c)) - 0.2 * n), 1.0 + 1e-9);
                // the training remainder absorbs the rounding of two folds
                ASSERT_LE(std::fabs(static_cast<double>(count_class(rep.train, labels, c)) - 0.6 * n), 1.2 + 1e-9);
            }
        }
    }
}

TEST(FoldsProperty, SeedDeterminismAndDiversity) {
    gen::Rng rng(5);
    const auto labels = labels_with(60, 15, rng);
    EXPECT_EQ(stratified_nested_split(labels, 5, 4, 11), stratified_nested_split(labels, 5, 4, 11));
    std::set<std::vector<std::size_t>> distinct;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        distinct.insert(stratified_nested_split(labels, 5, 4, seed).replications.front().test);
    }
    EXPECT_GE(distinct.size(), 99U);
}

TEST(Folds, DatasetOverloadUsesDefaults) {
    gen::Rng rng(6);
    const auto d = gen::random_dataset(rng, 60, 2);
    const auto plan = stratified_nested_split(d);
    EXPECT_EQ(plan.outer_k, 5U);
    EXPECT_EQ(plan.inner_k, 4U);
    EXPECT_EQ(plan.replications.size(), 20U);
}

}  // namespace
