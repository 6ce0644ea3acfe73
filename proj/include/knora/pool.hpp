#pragma once

// Bagged pools of perceptrons and the oracle matrix over the validation set.

#include "knora/dataset.hpp"
#include "knora/error.hpp"
#include "knora/perceptron.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace knora {

struct ClassifierPool {
    std::vector<LinearClassifier> classifiers;
    std::vector<std::uint64_t> bag_seeds;

    [[nodiscard]] std::size_t size() const noexcept { return classifiers.size(); }
    [[nodiscard]] const LinearClassifier &operator[](std::size_t i) const { return classifiers[i]; }

    bool operator==(const ClassifierPool &) const = default;
};

/// `n` draws with replacement from [0, n).
[[nodiscard]] inline std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> out(n);
    for (auto &i : out) {
        i = pick(rng);
    }
    return out;
}

/// Classifier i is trained on bootstrap_indices(|train|, seed + i).
[[nodiscard]] inline ClassifierPool bagging_pool(const Dataset &train, std::size_t pool_size, ClassLabel positive,
                                                 const PerceptronParams &params, std::uint64_t seed) {
    if (train.size() == 0) {
        throw data_error("bagging: empty training set");
    }
    if (pool_size == 0) {
        throw config_error("bagging: pool size must be at least 1");
    }
    ClassifierPool pool;
    pool.classifiers.reserve(pool_size);
    pool.bag_seeds.reserve(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) {
        const std::uint64_t bag_seed = seed + i;
        const auto bag = bootstrap_indices(train.size(), bag_seed);
        pool.classifiers.push_back(train_perceptron(train, bag, positive, params, mix_seed(bag_seed)));
        pool.bag_seeds.push_back(bag_seed);
    }
    return pool;
}

/// correct(i, j) is true iff classifier i labels validation sample j correctly.
class OracleMatrix {
  public:
    OracleMatrix() = default;
    OracleMatrix(std::size_t classifiers, std::size_t samples) : rows_{classifiers}, cols_{samples}, bits_(classifiers * samples, 0) {}

    [[nodiscard]] std::size_t pool_size() const noexcept { return rows_; }
    [[nodiscard]] std::size_t validation_size() const noexcept { return cols_; }

    [[nodiscard]] bool correct(std::size_t classifier, std::size_t sample) const { return bits_[classifier * cols_ + sample] != 0; }
    void set(std::size_t classifier, std::size_t sample, bool value) { bits_[classifier * cols_ + sample] = value ? 1 : 0; }

    bool operator==(const OracleMatrix &) const = default;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<std::uint8_t> bits_;
};

[[nodiscard]] inline OracleMatrix build_oracle_matrix(const ClassifierPool &pool, const Dataset &validation) {
    if (validation.size() == 0) {
        throw data_error("oracle matrix: empty validation set");
    }
    OracleMatrix m(pool.size(), validation.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool[i].weights.size() != validation.num_features()) {
            throw data_error("oracle matrix: classifier " + std::to_string(i) + " has " + std::to_string(pool[i].weights.size()) +
                             " weights, validation has " + std::to_string(validation.num_features()) + " features");
        }
        for (std::size_t j = 0; j < validation.size(); ++j) {
            m.set(i, j, pool[i].predict(validation.sample(j)) == validation.labels[j]);
        }
    }
    return m;
}

}  // namespace knora
