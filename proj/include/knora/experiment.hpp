#pragma once

// End-to-end benchmark: nested stratified CV, per-replication pool training,
// dynamic selection of every test sample with every technique, AUC, and the
// aggregate comparisons of the report.
//
// Config files hold one `key = value` per line; '#' starts a comment. Keys:
//
//   dataset        path to a .dat (KEEL) or .csv file; repeat for several
//   label_column   CSV label column name or index           (default: class)
//   techniques     comma list, e.g. KNORA-E, KNORA-BI, FKNORA-B
//   k              region of competence size                (default: 7)
//   pool_size      bagged perceptrons per pool              (default: 100)
//   epochs         perceptron epochs                        (default: 100)
//   learning_rate  perceptron step                          (default: 0.1)
//   seed           master seed                              (default: 42)
//   outer_folds / inner_folds                               (default: 5 / 4)
//   alpha          significance level of the verdicts       (default: 0.05)
//   threads        worker threads, 0 = hardware             (default: 0)
//   out            output directory                         (default: results)
//   cache_dir      reuse trained pools across runs          (default: off)
//   trace          write selection traces as JSON lines     (default: off)
//
// Relative paths are resolved against the config file's directory.

#include "knora/dataset.hpp"
#include "knora/error.hpp"
#include "knora/folds.hpp"
#include "knora/io/csv.hpp"
#include "knora/io/keel.hpp"
#include "knora/pool.hpp"
#include "knora/pool_io.hpp"
#include "knora/region.hpp"
#include "knora/report.hpp"
#include "knora/selection.hpp"
#include "knora/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace knora {

struct ExperimentConfig {
    std::vector<std::filesystem::path> datasets;
    std::string label_column{"class"};
    std::vector<std::string> techniques{"KNORA-U", "KNORA-E", "KNORA-B", "KNORA-BI"};
    std::size_t k{7};
    std::size_t pool_size{100};
    PerceptronParams perceptron{};
    std::uint64_t seed{42};
    std::size_t outer_folds{5};
    std::size_t inner_folds{4};
    double alpha{0.05};
    std::size_t threads{0};
    std::filesystem::path out{"results"};
    std::optional<std::filesystem::path> cache_dir;
    std::optional<std::filesystem::path> trace;
};

inline void validate(const ExperimentConfig &cfg, const SelectorRegistry &registry) {
    if (cfg.k < 1) {
        throw config_error("k must be at least 1");
    }
    if (cfg.pool_size < 1) {
        throw config_error("pool_size must be at least 1");
    }
    if (cfg.techniques.empty()) {
        throw config_error("at least one technique is required");
    }
    for (const auto &t : cfg.techniques) {
        if (!registry.contains(t)) {
            throw config_error("unknown technique '" + t + "'");
        }
    }
    auto sorted = cfg.techniques;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw config_error("techniques are listed more than once");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 0.5)) {
        throw config_error("alpha must lie in (0, 0.5)");
    }
    if (!(cfg.perceptron.learning_rate > 0.0)) {
        throw config_error("learning_rate must be positive");
    }
    if (cfg.outer_folds < 2 || cfg.inner_folds < 2) {
        throw config_error("fold counts must be at least 2");
    }
}

// ---- config parsing -----------------------------------------------------------

namespace detail {

[[nodiscard]] inline std::vector<std::string> split_techniques(std::string_view list) {
    std::vector<std::string> parts;
    while (!list.empty()) {
        const auto comma = list.find(',');
        const auto item = io::detail::trim(list.substr(0, comma));
        if (!item.empty()) {
            parts.emplace_back(item);
        }
        list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
    }
    if (parts.empty()) {
        throw config_error("empty technique list");
    }
    return parts;
}

template <typename T>
[[nodiscard]] T parse_number(const std::string &key, const std::string &value) {
    std::istringstream ss(value);
    T out{};
    ss >> out;
    if (!ss || !(ss >> std::ws).eof()) {
        throw config_error("config: '" + key + "' expects a number, got '" + value + "'");
    }
    if constexpr (std::is_unsigned_v<T>) {
        if (!value.empty() && value.front() == '-') {
            throw config_error("config: '" + key + "' must not be negative");
        }
    }
    return out;
}

}  // namespace detail

/// Applies one `key = value` setting. Unknown keys are config errors.
inline void apply_setting(ExperimentConfig &cfg, const std::string &key, const std::string &value,
                          const std::filesystem::path &base_dir = {}) {
    const auto resolve = [&](const std::string &p) {
        std::filesystem::path path(p);
        return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    if (key == "dataset") {
        cfg.datasets.push_back(resolve(value));
    } else if (key == "label_column") {
        cfg.label_column = value;
    } else if (key == "techniques") {
        cfg.techniques = detail::split_techniques(value);
    } else if (key == "k") {
        cfg.k = detail::parse_number<std::size_t>(key, value);
    } else if (key == "pool_size") {
        cfg.pool_size = detail::parse_number<std::size_t>(key, value);
    } else if (key == "epochs") {
        cfg.perceptron.epochs = detail::parse_number<std::size_t>(key, value);
    } else if (key == "learning_rate") {
        cfg.perceptron.learning_rate = detail::parse_number<double>(key, value);
    } else if (key == "seed") {
        cfg.seed = detail::parse_number<std::uint64_t>(key, value);
    } else if (key == "outer_folds") {
        cfg.outer_folds = detail::parse_number<std::size_t>(key, value);
    } else if (key == "inner_folds") {
        cfg.inner_folds = detail::parse_number<std::size_t>(key, value);
    } else if (key == "alpha") {
        cfg.alpha = detail::parse_number<double>(key, value);
    } else if (key == "threads") {
        cfg.threads = detail::parse_number<std::size_t>(key, value);
    } else if (key == "out") {
        cfg.out = resolve(value);
    } else if (key == "cache_dir") {
        cfg.cache_dir = resolve(value);
    } else if (key == "trace") {
        cfg.trace = resolve(value);
    } else {
        throw config_error("config: unknown key '" + key + "'");
    }
}

[[nodiscard]] inline ExperimentConfig parse_config(std::string_view text, const std::filesystem::path &base_dir = {}) {
    ExperimentConfig cfg;
    bool datasets_seen = false;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto trimmed = io::detail::trim(line);
        if (trimmed.empty()) {
            continue;
        }
        const auto eq = trimmed.find('=');
        if (eq == std::string_view::npos) {
            throw config_error("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(io::detail::trim(trimmed.substr(0, eq)));
        const std::string value(io::detail::trim(trimmed.substr(eq + 1)));
        if (key == "dataset" && !datasets_seen) {
            cfg.datasets.clear();
            datasets_seen = true;
        }
        apply_setting(cfg, key, value, base_dir);
    }
    return cfg;
}

[[nodiscard]] inline ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw config_error("cannot open config '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

/// KEEL for .dat files, CSV otherwise.
[[nodiscard]] inline Dataset load_dataset(const std::filesystem::path &path, const std::string &label_column) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".dat") {
        return io::load_keel(path);
    }
    return io::load_csv(path, label_column);
}

// ---- running --------------------------------------------------------------------

[[nodiscard]] inline std::vector<std::string> decision_notes() {
    return {
        "features min-max scaled to [0,1] with statistics of the training split only",
        "perceptrons start from zero weights; w.x+b = 0 predicts the positive (minority) class",
        "single-class bootstrap bags yield a constant classifier",
        "region of competence: Euclidean KNN, equal distances ordered by validation index",
        "KNORA-U with no competent classifier selects the whole pool with weight 1",
        "vote ties go to the minority class; AUC score = minority vote fraction",
        "F-prefixed techniques use a simplified DFP rule (classifiers correct on both classes of an indecision region), not full FIRE-DES",
        "Wilcoxon signed-rank is one-sided; exact null distribution up to 15 nonzero pairs, normal approximation with tie correction above",
        "pools are retrained in every replication on its training split",
        "replications whose test part lacks a class are skipped and counted",
    };
}

namespace detail {

[[nodiscard]] inline std::uint64_t dataset_seed(std::uint64_t master, std::size_t dataset_index) {
    return mix_seed(master ^ mix_seed(dataset_index + 1));
}

[[nodiscard]] inline std::filesystem::path pool_cache_path(const std::filesystem::path &dir, const std::string &dataset,
                                                           std::size_t replication, std::uint64_t seed, const ExperimentConfig &cfg) {
    std::ostringstream name;
    name << dataset << "_r" << replication << "_s" << seed << "_m" << cfg.pool_size << "_e" << cfg.perceptron.epochs << "_lr"
         << cfg.perceptron.learning_rate << ".json";
    return dir / name.str();
}

[[nodiscard]] inline double mean(const std::vector<double> &v) {
    double s = 0.0;
    for (const double x : v) {
        s += x;
    }
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// Sample standard deviation; 0 for fewer than two values.
[[nodiscard]] inline double stddev(const std::vector<double> &v) {
    if (v.size() < 2) {
        return 0.0;
    }
    const double m = mean(v);
    double s = 0.0;
    for (const double x : v) {
        s += (x - m) * (x - m);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace detail

/// Trains and evaluates one replication. Returns AUC per technique, or a skipped
/// result when the test part lacks a class.
[[nodiscard]] inline ReplicationResult run_replication(const Dataset &data, const Replication &rep, std::size_t index,
                                                       ClassLabel minority, const ExperimentConfig &cfg, const SelectorRegistry &registry,
                                                       std::uint64_t pool_seed, std::vector<SelectionTrace> *traces = nullptr) {
    ReplicationResult result;
    result.index = index;

    const auto test_counts = class_counts(subset(data, rep.test).labels);
    if (test_counts[0] == 0 || test_counts[1] == 0) {
        result.skipped = true;
        result.skip_reason = "test part lacks a class";
        return result;
    }

    const Dataset raw_train = subset(data, rep.train);
    const auto scaler = MinMaxScaler::fit(raw_train.features);
    const Dataset train = scaler.transform(raw_train);
    const Dataset validation = scaler.transform(subset(data, rep.validation));
    const Dataset test = scaler.transform(subset(data, rep.test));

    ClassifierPool pool;
    std::optional<std::filesystem::path> cache_file;
    if (cfg.cache_dir) {
        cache_file = detail::pool_cache_path(*cfg.cache_dir, data.name, index, pool_seed, cfg);
        if (std::filesystem::exists(*cache_file)) {
            pool = load_pool(*cache_file).pool;
        }
    }
    if (pool.size() == 0) {
        pool = bagging_pool(train, cfg.pool_size, minority, cfg.perceptron, pool_seed);
        if (cache_file) {
            std::filesystem::create_directories(cache_file->parent_path());
            save_pool(*cache_file, {pool, data.class_names, cfg.perceptron, pool_seed});
        }
    }
    const OracleMatrix oracle = build_oracle_matrix(pool, validation);
    const SelectionContext ctx{oracle, validation.labels, minority, {}};

    std::vector<SelectorFn> selectors;
    for (const auto &t : cfg.techniques) {
        selectors.push_back(registry.get(t));
    }
    const std::size_t k = std::min(cfg.k, validation.size());

    std::vector<std::vector<double>> scores(selectors.size(), std::vector<double>(test.size()));
    for (std::size_t q = 0; q < test.size(); ++q) {
        const auto query = test.sample(q);
        const auto region = knn_region(query, validation.features, k, rep.test[q]);
        for (std::size_t t = 0; t < selectors.size(); ++t) {
            SelectionTrace trace;
            trace.technique = cfg.techniques[t];
            trace.query_id = rep.test[q];
            const auto ensemble = selectors[t](ctx, region, traces != nullptr ? &trace : nullptr);
            scores[t][q] = combine_votes(ensemble, pool, query, minority).score;
            if (traces != nullptr) {
                traces->push_back(std::move(trace));
            }
        }
    }
    for (const auto &s : scores) {
        result.auc.push_back(stats::auc(s, test.labels, minority));
    }
    return result;
}

namespace detail {

inline void add_comparisons(ExperimentReport &report, double alpha) {
    const auto &techs = report.techniques;
    const std::size_t t = techs.size();
    const bool per_dataset = report.datasets.size() >= 5;

    std::vector<std::vector<double>> columns(t);
    for (const auto &d : report.datasets) {
        if (per_dataset) {
            for (std::size_t j = 0; j < t; ++j) {
                columns[j].push_back(d.mean_auc.at(j));
            }
        } else {
            for (const auto &rep : d.replications) {
                if (!rep.skipped) {
                    for (std::size_t j = 0; j < t; ++j) {
                        columns[j].push_back(rep.auc.at(j));
                    }
                }
            }
        }
    }

    std::vector<std::size_t> refs;
    for (std::size_t j = 0; j < t; ++j) {
        if (techs[j] == "KNORA-B" || techs[j] == "KNORA-BI") {
            refs.push_back(j);
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (refs.empty()) {
        for (std::size_t a = 0; a < t; ++a) {
            for (std::size_t b = a + 1; b < t; ++b) {
                pairs.emplace_back(a, b);
            }
        }
    } else {
        for (const auto a : refs) {
            for (std::size_t b = 0; b < t; ++b) {
                if (b != a) {
                    pairs.emplace_back(a, b);
                }
            }
        }
    }

    for (const auto &[a, b] : pairs) {
        Comparison c;
        c.reference = techs[a];
        c.other = techs[b];
        c.unit = per_dataset ? "dataset-mean" : "replication";
        try {
            c.wilcoxon = stats::wilcoxon_signed_rank(columns[a], columns[b], alpha);
        } catch (const std::invalid_argument &e) {
            report.warnings.push_back("no Wilcoxon test for " + c.reference + " vs " + c.other + ": " + e.what());
        }
        c.win_tie_loss = stats::count_wins(columns[a], columns[b]);
        if (c.win_tie_loss.n_exp() > 0) {
            for (const double level : {0.10, 0.05, 0.01}) {
                c.critical_values.push_back(stats::sign_test_critical(c.win_tie_loss.n_exp(), level));
            }
            c.sign_test = stats::sign_test(c.win_tie_loss, alpha);
        }
        report.comparisons.push_back(std::move(c));
    }
}

}  // namespace detail

/// Runs the full protocol on already loaded datasets. Deterministic for a fixed
/// config regardless of thread count.
[[nodiscard]] inline ExperimentReport run_experiment(const ExperimentConfig &cfg, const std::vector<Dataset> &datasets,
                                                     const SelectorRegistry &registry = SelectorRegistry::builtin()) {
    validate(cfg, registry);

    ExperimentReport report;
    report.techniques = cfg.techniques;
    report.decisions = decision_notes();
    report.config = {{},
                     cfg.techniques,
                     cfg.k,
                     cfg.pool_size,
                     cfg.perceptron.epochs,
                     cfg.perceptron.learning_rate,
                     cfg.seed,
                     cfg.outer_folds,
                     cfg.inner_folds,
                     cfg.alpha};
    for (const auto &d : datasets) {
        report.config.datasets.push_back(d.name);
    }

    struct Job {
        std::size_t dataset;
        std::size_t replication;
    };
    std::vector<FoldPlan> plans;
    std::vector<ImbalanceSummary> imbalance;
    std::vector<Job> jobs;
    for (std::size_t di = 0; di < datasets.size(); ++di) {
        validate(datasets[di]);
        imbalance.push_back(imbalance_summary(datasets[di]));
        plans.push_back(stratified_nested_split(datasets[di], cfg.outer_folds, cfg.inner_folds, detail::dataset_seed(cfg.seed, di)));
        for (std::size_t r = 0; r < plans.back().replications.size(); ++r) {
            jobs.push_back({di, r});
        }
    }

    std::vector<ReplicationResult> results(jobs.size());
    std::vector<std::vector<SelectionTrace>> traces(cfg.trace ? jobs.size() : 0);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr failure;
    const auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            try {
                const auto &job = jobs[j];
                const auto &data = datasets[job.dataset];
                const auto &plan = plans[job.dataset];
                const std::uint64_t pool_seed = mix_seed(plan.seed + job.replication + 1);
                results[j] = run_replication(data, plan.replications[job.replication], job.replication, imbalance[job.dataset].minority,
                                             cfg, registry, pool_seed, cfg.trace ? &traces[j] : nullptr);
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    std::size_t threads = cfg.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : cfg.threads;
    threads = std::min(threads, std::max<std::size_t>(jobs.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 1; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        worker();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    const std::size_t t = cfg.techniques.size();
    std::size_t job = 0;
    std::vector<std::vector<double>> pooled(t);
    for (std::size_t di = 0; di < datasets.size(); ++di) {
        const auto &d = datasets[di];
        DatasetResult dr;
        dr.name = d.name;
        dr.samples = d.size();
        dr.features = d.num_features();
        dr.imbalance_ratio = imbalance[di].ir;
        dr.minority = d.class_names[static_cast<std::size_t>(imbalance[di].minority)];
        std::vector<std::vector<double>> per_technique(t);
        for (std::size_t r = 0; r < plans[di].replications.size(); ++r, ++job) {
            const auto &res = results[job];
            if (!res.skipped) {
                for (std::size_t j = 0; j < t; ++j) {
                    per_technique[j].push_back(res.auc[j]);
                    pooled[j].push_back(res.auc[j]);
                }
            }
            dr.replications.push_back(res);
        }
        if (dr.skipped() > 0) {
            report.warnings.push_back(d.name + ": " + std::to_string(dr.skipped()) + " of " + std::to_string(dr.replications.size()) +
                                      " replications skipped (test part lacks a class)");
        }
        if (std::min(cfg.k, plans[di].replications.front().validation.size()) < cfg.k) {
            report.warnings.push_back(d.name + ": validation part smaller than k; region size clamped");
        }
        for (std::size_t j = 0; j < t; ++j) {
            dr.mean_auc.push_back(detail::mean(per_technique[j]));
            dr.std_auc.push_back(detail::stddev(per_technique[j]));
        }
        report.datasets.push_back(std::move(dr));
    }

    std::vector<std::vector<double>> rank_table;
    for (const auto &d : report.datasets) {
        if (d.skipped() < d.replications.size()) {
            rank_table.push_back(d.mean_auc);
        }
    }
    const auto ranks = stats::average_ranks(rank_table);
    for (std::size_t j = 0; j < t; ++j) {
        report.summary.push_back({cfg.techniques[j], detail::mean(pooled[j]), detail::stddev(pooled[j]), ranks.empty() ? 0.0 : ranks[j]});
    }
    detail::add_comparisons(report, cfg.alpha);

    if (cfg.trace) {
        std::ofstream out(*cfg.trace, std::ios::binary);
        if (!out) {
            throw config_error("cannot write trace file '" + cfg.trace->string() + "'");
        }
        for (const auto &job_traces : traces) {
            for (const auto &tr : job_traces) {
                write_trace_lines(out, tr);
            }
        }
    }
    return report;
}

/// Loads every configured dataset, then runs the protocol.
[[nodiscard]] inline ExperimentReport run_experiment(const ExperimentConfig &cfg,
                                                     const SelectorRegistry &registry = SelectorRegistry::builtin()) {
    validate(cfg, registry);
    if (cfg.datasets.empty()) {
        throw config_error("no datasets configured");
    }
    std::vector<Dataset> data;
    for (const auto &path : cfg.datasets) {
        data.push_back(load_dataset(path, cfg.label_column));
    }
    return run_experiment(cfg, data, registry);
}

}  // namespace knora
