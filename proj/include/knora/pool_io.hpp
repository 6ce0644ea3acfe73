#pragma once

// JSON layout for cached pools (format "knora-pool", version 1):
//
// {
//   "format": "knora-pool", "version": 1,
//   "class_names": ["negative", "positive"],
//   "perceptron": {"epochs": 100, "learning_rate": 0.1},
//   "base_seed": 42,
//   "classifiers": [
//     {"weights": [...], "bias": 0.3, "positive_label": 1, "negative_label": 0, "seed": 42}, ...
//   ]
// }

#include "knora/error.hpp"
#include "knora/pool.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <string>

namespace knora {

inline constexpr int pool_format_version = 1;

struct PoolFile {
    ClassifierPool pool;
    std::array<std::string, num_classes> class_names;
    PerceptronParams params;
    std::uint64_t base_seed{0};

    bool operator==(const PoolFile &) const = default;
};

[[nodiscard]] inline nlohmann::json pool_to_json(const PoolFile &f) {
    nlohmann::json classifiers = nlohmann::json::array();
    for (std::size_t i = 0; i < f.pool.size(); ++i) {
        const auto &c = f.pool[i];
        classifiers.push_back({{"weights", c.weights},
                               {"bias", c.bias},
                               {"positive_label", c.positive_label},
                               {"negative_label", c.negative_label},
                               {"seed", f.pool.bag_seeds.at(i)}});
    }
    return {{"format", "knora-pool"},
            {"version", pool_format_version},
            {"class_names", f.class_names},
            {"perceptron", {{"epochs", f.params.epochs}, {"learning_rate", f.params.learning_rate}}},
            {"base_seed", f.base_seed},
            {"classifiers", std::move(classifiers)}};
}

[[nodiscard]] inline PoolFile pool_from_json(const nlohmann::json &j) {
    try {
        if (j.at("format").get<std::string>() != "knora-pool") {
            throw data_error("pool file: unexpected format tag");
        }
        if (j.at("version").get<int>() != pool_format_version) {
            throw data_error("pool file: unsupported version " + std::to_string(j.at("version").get<int>()));
        }
        PoolFile f;
        f.class_names = j.at("class_names").get<std::array<std::string, num_classes>>();
        f.params.epochs = j.at("perceptron").at("epochs").get<std::size_t>();
        f.params.learning_rate = j.at("perceptron").at("learning_rate").get<double>();
        f.base_seed = j.at("base_seed").get<std::uint64_t>();
        for (const auto &c : j.at("classifiers")) {
            LinearClassifier clf;
            clf.weights = c.at("weights").get<std::vector<double>>();
            clf.bias = c.at("bias").get<double>();
            clf.positive_label = c.at("positive_label").get<ClassLabel>();
            clf.negative_label = c.at("negative_label").get<ClassLabel>();
            f.pool.classifiers.push_back(std::move(clf));
            f.pool.bag_seeds.push_back(c.at("seed").get<std::uint64_t>());
        }
        return f;
    } catch (const nlohmann::json::exception &e) {
        throw data_error(std::string("pool file: ") + e.what());
    }
}

inline void save_pool(const std::filesystem::path &path, const PoolFile &f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw data_error("cannot write '" + path.string() + "'");
    }
    out << pool_to_json(f).dump() << '\n';
}

[[nodiscard]] inline PoolFile load_pool(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw data_error("cannot open '" + path.string() + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw data_error("pool file '" + path.string() + "': " + e.what());
    }
    return pool_from_json(j);
}

}  // namespace knora
