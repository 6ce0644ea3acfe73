#include "generators.hpp"

#include "knora/reference_oracle.hpp"
#include "knora/region.hpp"

#include <gtest/gtest.h>

#include <set>

namespace {

using namespace knora;

constexpr ClassLabel o = 0;  // circle
constexpr ClassLabel s = 1;  // square

FeatureMatrix line(std::initializer_list<double> values) {
    FeatureMatrix m(0, 1);
    for (const double v : values) {
        m.append_row(std::vector<double>{v});
    }
    return m;
}

TEST(Knn, OneDimensional) {
    const auto r = knn_region(std::vector<double>{0.1}, line({0, 1, 2, 3}), 2);
    EXPECT_EQ(r.neighbors, (std::vector<std::size_t>{0, 1}));
    EXPECT_NEAR(r.distances[0], 0.1, 1e-12);
    EXPECT_NEAR(r.distances[1], 0.9, 1e-12);
}

TEST(Knn, EqualDistanceLowerIndexWins) {
    EXPECT_EQ(knn_region(std::vector<double>{0.0}, line({1, -1}), 1).neighbors, std::vector<std::size_t>{0});
    EXPECT_EQ(knn_region(std::vector<double>{0.0}, line({5, -1, 1}), 1).neighbors, std::vector<std::size_t>{1});
}

TEST(Knn, Errors) {
    const auto v = line({0, 1});
    EXPECT_THROW((void)knn_region(std::vector<double>{0.0}, v, 0), config_error);
    EXPECT_THROW((void)knn_region(std::vector<double>{0.0}, v, 3), data_error);
    EXPECT_THROW((void)knn_region(std::vector<double>{0.0, 1.0}, v, 1), data_error);
}

TEST(KnnProperty, MatchesExhaustiveSort) {
    gen::Rng rng(21);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t v = gen::uniform_size(rng, 1, 50);
        const std::size_t f = gen::uniform_size(rng, 1, 5);
        auto x = gen::random_matrix(rng, v, f);
        if (trial % 2 == 0) {  // integer grid: many equal distances
            for (std::size_t i = 0; i < v; ++i) {
                for (std::size_t j = 0; j < f; ++j) {
                    x(i, j) = std::round(x(i, j) * 2.0);
                }
            }
        }
        std::vector<double> q(f);
        for (auto &c : q) {
            c = std::round(gen::uniform(rng, -2, 2));
        }
        const std::size_t k = gen::uniform_size(rng, 1, std::min<std::size_t>(v, 7));
        const auto r = knn_region(q, x, k, 5);
        ASSERT_EQ(r.neighbors, reference::knn(q, x, k));
        ASSERT_TRUE(std::is_sorted(r.distances.begin(), r.distances.end()));
        ASSERT_EQ(std::set<std::size_t>(r.neighbors.begin(), r.neighbors.end()).size(), k);
        ASSERT_EQ(r.query_id, 5U);
    }
}

TEST(Indecision, Examples) {
    const std::vector<ClassLabel> same{s, s, s};
    const std::vector<ClassLabel> mixed{o, o, s};
    EXPECT_FALSE(is_indecision_region(gen::identity_region(3), same));
    EXPECT_TRUE(is_indecision_region(gen::identity_region(3), mixed));
}

TEST(IndecisionProperty, EqualsClassSetSize) {
    gen::Rng rng(22);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t v = gen::uniform_size(rng, 1, 20);
        const auto labels = gen::labels_from_bits(rng(), v);
        const auto r = gen::random_region(rng, v, gen::uniform_size(rng, 1, v));
        std::set<ClassLabel> classes;
        for (const auto j : r.neighbors) {
            classes.insert(labels[j]);
        }
        ASSERT_EQ(is_indecision_region(r, labels), classes.size() >= 2);
    }
}

TEST(ReduceB, Examples) {
    const auto r = gen::identity_region(3);
    const std::vector<ClassLabel> oss{o, s, s};
    EXPECT_EQ(reduce_region_b(r, oss).neighbors, (std::vector<std::size_t>{0, 1}));
    const std::vector<ClassLabel> sso{s, s, o};
    EXPECT_EQ(reduce_region_b(r, sso).neighbors, (std::vector<std::size_t>{0, 2}));
    const std::vector<ClassLabel> os{o, s};
    EXPECT_TRUE(reduce_region_b(gen::identity_region(2), os).empty());
}

TEST(ReduceBi, Examples) {
    const auto r = gen::identity_region(3);
    const std::vector<ClassLabel> oss{o, s, s};
    EXPECT_EQ(reduce_region_bi(r, oss, o).neighbors, (std::vector<std::size_t>{0, 1}));
    const std::vector<ClassLabel> sso{s, s, o};
    EXPECT_EQ(reduce_region_bi(r, sso, o).neighbors, (std::vector<std::size_t>{0, 2}));
    const std::vector<ClassLabel> sss{s, s, s};
    EXPECT_EQ(reduce_region_bi(r, sss, o).neighbors, (std::vector<std::size_t>{0, 1}));
    // with s as minority, the lone o is not protected
    EXPECT_EQ(reduce_region_bi(r, sso, s).neighbors, (std::vector<std::size_t>{0, 1}));
    const std::vector<ClassLabel> lone{o};
    EXPECT_TRUE(reduce_region_bi(gen::identity_region(1), lone, o).empty());
}

TEST(ReduceProperty, RandomRegionsAgainstDirectRules) {
    gen::Rng rng(23);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t v = gen::uniform_size(rng, 1, 12);
        const std::vector<ClassLabel> labels = gen::labels_from_bits(rng(), v);
        const auto r = gen::random_region(rng, v, gen::uniform_size(rng, 1, std::min<std::size_t>(v, 7)));
        const auto before = class_profile(r, labels);
        const ClassLabel minority = static_cast<ClassLabel>(rng() % 2);
        const OracleMatrix none(0, v);
        const reference::Problem p{none, labels, minority, {}};

        const auto b = reduce_region_b(r, labels);
        ASSERT_TRUE(b.empty() || b.size() == r.size() - 1);
        ASSERT_EQ(b.neighbors, reference::reduce_b(p, r.neighbors));
        if (!b.empty()) {
            ASSERT_EQ(class_profile(b, labels).distinct(), before.distinct());
        }

        const auto bi = reduce_region_bi(r, labels, minority);
        ASSERT_EQ(bi.neighbors, reference::reduce_bi(p, r.neighbors));
        if (!before.contains(minority)) {
            ASSERT_EQ(bi, r.prefix(r.size() - 1));
        }
    }
}

}  // namespace
