// knora_bench: run KNORA benchmarks, print the divergence scenario, generate data.
//
//   knora_bench run experiment.cfg [--seed N] [--k N] [--pool-size N]
//                   [--techniques A,B] [--out DIR] [--threads N] [--trace FILE]
//   knora_bench scenario [--out FILE]
//   knora_bench gen --ir 9 --n 400 [--format keel|csv] [--out FILE]
//   knora_bench gen --suite --out DIR
//
// Exit status: 0 success, 1 configuration error, 2 data error.

#include "knora/knora.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> k;
    std::optional<std::size_t> pool_size;
    std::optional<std::string> techniques;
    std::optional<std::string> out;
    std::optional<std::size_t> threads;
    std::optional<std::string> trace;
    std::optional<std::string> cache_dir;
};

int run_command(const RunOptions &o) {
    auto cfg = knora::load_config(o.config);
    // flags win over the file; flag paths are relative to the working directory
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    if (o.k) {
        cfg.k = *o.k;
    }
    if (o.pool_size) {
        cfg.pool_size = *o.pool_size;
    }
    if (o.techniques) {
        knora::apply_setting(cfg, "techniques", *o.techniques);
    }
    if (o.out) {
        cfg.out = *o.out;
    }
    if (o.threads) {
        cfg.threads = *o.threads;
    }
    if (o.trace) {
        cfg.trace = fs::path(*o.trace);
    }
    if (o.cache_dir) {
        cfg.cache_dir = fs::path(*o.cache_dir);
    }

    const auto start = std::chrono::steady_clock::now();
    const auto report = knora::run_experiment(cfg);
    knora::emit_report(report, cfg.out);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    knora::write_markdown(std::cout, report);
    for (const auto &w : report.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    std::cerr << "wrote " << (cfg.out / "report.md").string() << ", auc.csv, report.json in " << elapsed.count() << " s\n";
    return 0;
}

void print_trace_summary(std::ostream &out, const knora::SelectionTrace &t, const std::string &label,
                         const std::array<std::string, 5> &names, const knora::RegionOfCompetence &region) {
    const auto name_of = [&](std::size_t validation_index) {
        for (std::size_t p = 0; p < region.size(); ++p) {
            if (region.neighbors[p] == validation_index) {
                return names[p];
            }
        }
        return std::to_string(validation_index);
    };
    out << label << '\n';
    for (std::size_t n = 0; n < t.iterations.size(); ++n) {
        const auto &it = t.iterations[n];
        out << "  " << n + 1 << ": {";
        for (std::size_t p = 0; p < it.region.size(); ++p) {
            out << (p > 0 ? "," : "") << name_of(it.region[p]);
        }
        out << "} selected " << it.selected;
        if (it.removed) {
            out << ", remove " << name_of(*it.removed);
        }
        if (it.fallback) {
            out << " (fallback)";
        }
        out << '\n';
    }
    out << "  ensemble:";
    for (const auto c : t.result.indices()) {
        out << " c" << c + 1;
    }
    out << '\n';
}

int scenario_command(const std::optional<std::string> &out_path) {
    const auto f = knora::scenario_fixture();
    const auto traces = knora::scenario_traces();
    print_trace_summary(std::cout, traces.knora_e, "KNORA-E", f.point_names, f.region);
    print_trace_summary(std::cout, traces.knora_b, "KNORA-B", f.point_names, f.region);
    print_trace_summary(std::cout, traces.knora_bi_circle_minority, "KNORA-BI (circle minority)", f.point_names, f.region);
    print_trace_summary(std::cout, traces.knora_bi_circle_majority, "KNORA-BI (circle majority)", f.point_names, f.region);
    if (out_path) {
        std::ofstream out(*out_path, std::ios::binary);
        if (!out) {
            throw knora::config_error("cannot write '" + *out_path + "'");
        }
        for (const auto *t : {&traces.knora_e, &traces.knora_b, &traces.knora_bi_circle_minority, &traces.knora_bi_circle_majority}) {
            knora::write_trace_lines(out, *t);
        }
    }
    return 0;
}

struct GenOptions {
    knora::SyntheticSpec spec;
    std::string format{"keel"};
    std::optional<std::string> out;
    bool suite{false};
};

void write_dataset(const knora::Dataset &d, const std::string &format, std::ostream &out) {
    if (format == "keel") {
        knora::io::write_keel(out, d);
    } else {
        knora::io::write_csv(out, d);
    }
}

int gen_command(const GenOptions &o) {
    const std::string ext = o.format == "keel" ? ".dat" : ".csv";
    if (o.suite) {
        if (!o.out) {
            throw knora::config_error("gen --suite needs --out DIR");
        }
        fs::create_directories(*o.out);
        for (const auto &spec : knora::bundled_suite(o.spec.seed)) {
            const auto path = fs::path(*o.out) / (spec.name + ext);
            std::ofstream out(path, std::ios::binary);
            if (!out) {
                throw knora::config_error("cannot write '" + path.string() + "'");
            }
            write_dataset(knora::make_blobs(spec), o.format, out);
            std::cerr << path.string() << '\n';
        }
        return 0;
    }
    auto spec = o.spec;
    if (o.out) {
        spec.name = fs::path(*o.out).stem().string();
        std::ofstream out(*o.out, std::ios::binary);
        if (!out) {
            throw knora::config_error("cannot write '" + *o.out + "'");
        }
        write_dataset(knora::make_blobs(spec), o.format, out);
    } else {
        write_dataset(knora::make_blobs(spec), o.format, std::cout);
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Dynamic ensemble selection benchmarks with KNORA-U/E/B/BI"};
    app.require_subcommand(1);

    RunOptions run;
    auto *run_cmd = app.add_subcommand("run", "Run the nested cross-validation benchmark described by a config file");
    run_cmd->add_option("config", run.config, "Config file (key = value lines)")->required();
    run_cmd->add_option("--seed", run.seed, "Master seed");
    run_cmd->add_option("--k", run.k, "Region of competence size");
    run_cmd->add_option("--pool-size", run.pool_size, "Perceptrons per pool");
    run_cmd->add_option("--techniques", run.techniques, "Comma-separated technique names");
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");
    run_cmd->add_option("--trace", run.trace, "Write selection traces (JSON lines) to this file");
    run_cmd->add_option("--cache-dir", run.cache_dir, "Reuse trained pools stored here");

    std::optional<std::string> scenario_out;
    auto *scenario_cmd = app.add_subcommand("scenario", "Show where KNORA-E and KNORA-B/BI diverge on a five-neighbor example");
    scenario_cmd->add_option("--out", scenario_out, "Also write the traces as JSON lines");

    GenOptions gen;
    auto *gen_cmd = app.add_subcommand("gen", "Generate imbalanced Gaussian-blob datasets");
    gen_cmd->add_option("--ir", gen.spec.imbalance_ratio, "Imbalance ratio (majority/minority)")->capture_default_str();
    gen_cmd->add_option("--n", gen.spec.samples, "Number of samples")->capture_default_str();
    gen_cmd->add_option("--dim", gen.spec.dimensions, "Number of features")->capture_default_str();
    gen_cmd->add_option("--clusters", gen.spec.minority_clusters, "Minority clusters")->capture_default_str();
    gen_cmd->add_option("--separation", gen.spec.separation, "Distance of minority clusters from the origin")->capture_default_str();
    gen_cmd->add_option("--seed", gen.spec.seed, "Random seed")->capture_default_str();
    gen_cmd->add_option("--format", gen.format, "keel or csv")->check(CLI::IsMember({"keel", "csv"}))->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output file (directory with --suite); stdout if omitted");
    gen_cmd->add_flag("--suite", gen.suite, "Write the twelve bundled benchmark datasets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) {
            return run_command(run);
        }
        if (*scenario_cmd) {
            return scenario_command(scenario_out);
        }
        return gen_command(gen);
    } catch (const knora::config_error &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const knora::data_error &e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
