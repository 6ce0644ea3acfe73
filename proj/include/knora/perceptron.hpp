#pragma once

#include "knora/dataset.hpp"
#include "knora/error.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace knora {

/// splitmix64 finalizer; turns correlated seeds (base + i) into independent streams.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

/// Hyperplane classifier: predicts `positive_label` iff w.x + b >= 0.
struct LinearClassifier {
    std::vector<double> weights;
    double bias{0.0};
    ClassLabel positive_label{1};
    ClassLabel negative_label{0};

    [[nodiscard]] double score(std::span<const double> x) const {
        if (x.size() != weights.size()) {
            throw data_error("classifier expects " + std::to_string(weights.size()) + " features, got " + std::to_string(x.size()));
        }
        return std::inner_product(weights.begin(), weights.end(), x.begin(), bias);
    }

    [[nodiscard]] ClassLabel predict(std::span<const double> x) const { return score(x) >= 0.0 ? positive_label : negative_label; }

    bool operator==(const LinearClassifier &) const = default;
};

[[nodiscard]] constexpr ClassLabel other_class(ClassLabel c) noexcept { return c == 0 ? 1 : 0; }

[[nodiscard]] inline LinearClassifier constant_classifier(std::size_t num_features, ClassLabel predicted, ClassLabel positive) {
    return {std::vector<double>(num_features, 0.0), predicted == positive ? 1.0 : -1.0, positive, other_class(positive)};
}

struct PerceptronParams {
    std::size_t epochs{100};
    double learning_rate{0.1};

    bool operator==(const PerceptronParams &) const = default;
};

/// Classic perceptron on the rows `rows` of `train`: zero-initialised, w += lr*y*x on
/// every mistake with y in {-1,+1}, visiting order reshuffled each epoch. Stops early
/// after an epoch without mistakes. A single-class sample set yields the constant
/// classifier for that class.
[[nodiscard]] inline LinearClassifier train_perceptron(const Dataset &train, std::span<const std::size_t> rows, ClassLabel positive,
                                                       const PerceptronParams &params, std::uint64_t seed) {
    const std::size_t f = train.num_features();
    if (rows.empty()) {
        throw data_error("perceptron: empty training set");
    }
    const bool has_pos = std::any_of(rows.begin(), rows.end(), [&](std::size_t r) { return train.labels[r] == positive; });
    const bool has_neg = std::any_of(rows.begin(), rows.end(), [&](std::size_t r) { return train.labels[r] != positive; });
    if (!has_pos || !has_neg) {
        return constant_classifier(f, has_pos ? positive : other_class(positive), positive);
    }

    LinearClassifier clf{std::vector<double>(f, 0.0), 0.0, positive, other_class(positive)};
    std::vector<std::size_t> order(rows.begin(), rows.end());
    std::mt19937_64 rng(seed);
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t mistakes = 0;
        for (const std::size_t r : order) {
            const auto x = train.sample(r);
            const ClassLabel truth = train.labels[r];
            if (clf.predict(x) == truth) {
                continue;
            }
            ++mistakes;
            const double step = params.learning_rate * (truth == positive ? 1.0 : -1.0);
            for (std::size_t j = 0; j < f; ++j) {
                clf.weights[j] += step * x[j];
            }
            clf.bias += step;
        }
        if (mistakes == 0) {
            break;
        }
    }
    return clf;
}

[[nodiscard]] inline LinearClassifier train_perceptron(const Dataset &train, ClassLabel positive, const PerceptronParams &params,
                                                       std::uint64_t seed) {
    std::vector<std::size_t> rows(train.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return train_perceptron(train, rows, positive, params, seed);
}

}  // namespace knora
