#pragma once

// Experiment report: per-replication AUCs, summaries, rank table and pairwise
// tests; emitted as markdown, flat CSV and JSON. Output is byte-stable for a
// given report.

#include "knora/error.hpp"
#include "knora/stats.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace knora {

inline constexpr const char *report_version = "1.0.0";

struct ConfigEcho {
    std::vector<std::string> datasets;
    std::vector<std::string> techniques;
    std::size_t k{7};
    std::size_t pool_size{100};
    std::size_t epochs{100};
    double learning_rate{0.1};
    std::uint64_t seed{0};
    std::size_t outer_folds{5};
    std::size_t inner_folds{4};
    double alpha{0.05};

    bool operator==(const ConfigEcho &) const = default;
};

struct ReplicationResult {
    std::size_t index{0};
    bool skipped{false};
    std::string skip_reason;
    std::vector<double> auc;  // one per technique, empty when skipped

    bool operator==(const ReplicationResult &) const = default;
};

struct DatasetResult {
    std::string name;
    std::size_t samples{0};
    std::size_t features{0};
    double imbalance_ratio{1.0};
    std::string minority;
    std::vector<ReplicationResult> replications;
    std::vector<double> mean_auc;  // per technique
    std::vector<double> std_auc;

    [[nodiscard]] std::size_t skipped() const {
        std::size_t n = 0;
        for (const auto &r : replications) {
            n += r.skipped ? 1 : 0;
        }
        return n;
    }

    bool operator==(const DatasetResult &) const = default;
};

struct TechniqueSummary {
    std::string name;
    double mean_auc{0.0};
    double std_auc{0.0};
    double average_rank{0.0};

    bool operator==(const TechniqueSummary &) const = default;
};

struct Comparison {
    std::string reference;
    std::string other;
    std::string unit;  // "dataset-mean" or "replication"
    std::optional<stats::PairwiseVerdict> wilcoxon;
    stats::WinTieLoss win_tie_loss;
    std::vector<double> critical_values;  // sign test n_c at alpha 0.10, 0.05, 0.01
    stats::PairwiseVerdict sign_test;

    bool operator==(const Comparison &) const = default;
};

struct ExperimentReport {
    std::string version{report_version};
    ConfigEcho config;
    std::vector<std::string> techniques;
    std::vector<DatasetResult> datasets;
    std::vector<TechniqueSummary> summary;
    std::vector<Comparison> comparisons;
    std::vector<std::string> decisions;
    std::vector<std::string> warnings;

    bool operator==(const ExperimentReport &) const = default;
};

// ---- JSON -------------------------------------------------------------------

inline void to_json(nlohmann::json &j, const ConfigEcho &c) {
    j = {{"datasets", c.datasets},       {"techniques", c.techniques},   {"k", c.k},
         {"pool_size", c.pool_size},     {"epochs", c.epochs},           {"learning_rate", c.learning_rate},
         {"seed", c.seed},               {"outer_folds", c.outer_folds}, {"inner_folds", c.inner_folds},
         {"alpha", c.alpha}};
}

inline void from_json(const nlohmann::json &j, ConfigEcho &c) {
    j.at("datasets").get_to(c.datasets);
    j.at("techniques").get_to(c.techniques);
    j.at("k").get_to(c.k);
    j.at("pool_size").get_to(c.pool_size);
    j.at("epochs").get_to(c.epochs);
    j.at("learning_rate").get_to(c.learning_rate);
    j.at("seed").get_to(c.seed);
    j.at("outer_folds").get_to(c.outer_folds);
    j.at("inner_folds").get_to(c.inner_folds);
    j.at("alpha").get_to(c.alpha);
}

}  // namespace knora

namespace knora::stats {

inline void to_json(nlohmann::json &j, const PairwiseVerdict &v) {
    j = {{"p_value", v.p_value},     {"sign", std::string(1, sign_char(v.sign))}, {"alpha", v.alpha},
         {"statistic", v.statistic}, {"n", v.n},                                    {"exact", v.exact}};
}

inline void from_json(const nlohmann::json &j, PairwiseVerdict &v) {
    j.at("p_value").get_to(v.p_value);
    v.sign = sign_from_char(j.at("sign").get<std::string>().at(0));
    j.at("alpha").get_to(v.alpha);
    j.at("statistic").get_to(v.statistic);
    j.at("n").get_to(v.n);
    j.at("exact").get_to(v.exact);
}

inline void to_json(nlohmann::json &j, const WinTieLoss &w) { j = {{"wins", w.wins}, {"ties", w.ties}, {"losses", w.losses}}; }

inline void from_json(const nlohmann::json &j, WinTieLoss &w) {
    j.at("wins").get_to(w.wins);
    j.at("ties").get_to(w.ties);
    j.at("losses").get_to(w.losses);
}

}  // namespace knora::stats

namespace knora {

inline void to_json(nlohmann::json &j, const ReplicationResult &r) {
    j = {{"index", r.index}, {"skipped", r.skipped}, {"skip_reason", r.skip_reason}, {"auc", r.auc}};
}

inline void from_json(const nlohmann::json &j, ReplicationResult &r) {
    j.at("index").get_to(r.index);
    j.at("skipped").get_to(r.skipped);
    j.at("skip_reason").get_to(r.skip_reason);
    j.at("auc").get_to(r.auc);
}

inline void to_json(nlohmann::json &j, const DatasetResult &d) {
    j = {{"name", d.name},
         {"samples", d.samples},
         {"features", d.features},
         {"imbalance_ratio", d.imbalance_ratio},
         {"minority", d.minority},
         {"replications", d.replications},
         {"mean_auc", d.mean_auc},
         {"std_auc", d.std_auc}};
}

inline void from_json(const nlohmann::json &j, DatasetResult &d) {
    j.at("name").get_to(d.name);
    j.at("samples").get_to(d.samples);
    j.at("features").get_to(d.features);
    j.at("imbalance_ratio").get_to(d.imbalance_ratio);
    j.at("minority").get_to(d.minority);
    j.at("replications").get_to(d.replications);
    j.at("mean_auc").get_to(d.mean_auc);
    j.at("std_auc").get_to(d.std_auc);
}

inline void to_json(nlohmann::json &j, const TechniqueSummary &t) {
    j = {{"name", t.name}, {"mean_auc", t.mean_auc}, {"std_auc", t.std_auc}, {"average_rank", t.average_rank}};
}

inline void from_json(const nlohmann::json &j, TechniqueSummary &t) {
    j.at("name").get_to(t.name);
    j.at("mean_auc").get_to(t.mean_auc);
    j.at("std_auc").get_to(t.std_auc);
    j.at("average_rank").get_to(t.average_rank);
}

inline void to_json(nlohmann::json &j, const Comparison &c) {
    j = {{"reference", c.reference},
         {"other", c.other},
         {"unit", c.unit},
         {"wilcoxon", c.wilcoxon ? nlohmann::json(*c.wilcoxon) : nlohmann::json(nullptr)},
         {"win_tie_loss", c.win_tie_loss},
         {"critical_values", c.critical_values},
         {"sign_test", c.sign_test}};
}

inline void from_json(const nlohmann::json &j, Comparison &c) {
    j.at("reference").get_to(c.reference);
    j.at("other").get_to(c.other);
    j.at("unit").get_to(c.unit);
    if (j.at("wilcoxon").is_null()) {
        c.wilcoxon.reset();
    } else {
        c.wilcoxon = j.at("wilcoxon").get<stats::PairwiseVerdict>();
    }
    j.at("win_tie_loss").get_to(c.win_tie_loss);
    j.at("critical_values").get_to(c.critical_values);
    j.at("sign_test").get_to(c.sign_test);
}

inline void to_json(nlohmann::json &j, const ExperimentReport &r) {
    j = {{"version", r.version},   {"config", r.config},           {"techniques", r.techniques}, {"datasets", r.datasets},
         {"summary", r.summary},   {"comparisons", r.comparisons}, {"decisions", r.decisions},   {"warnings", r.warnings}};
}

inline void from_json(const nlohmann::json &j, ExperimentReport &r) {
    j.at("version").get_to(r.version);
    j.at("config").get_to(r.config);
    j.at("techniques").get_to(r.techniques);
    j.at("datasets").get_to(r.datasets);
    j.at("summary").get_to(r.summary);
    j.at("comparisons").get_to(r.comparisons);
    j.at("decisions").get_to(r.decisions);
    j.at("warnings").get_to(r.warnings);
}

// ---- text formats -------------------------------------------------------------

namespace detail {

[[nodiscard]] inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

[[nodiscard]] inline std::string pvalue(double p) {
    char buf[64];
    if (p >= 1e-4) {
        std::snprintf(buf, sizeof(buf), "%.4f", p);
    } else {
        std::snprintf(buf, sizeof(buf), "%.2e", p);
    }
    return buf;
}

[[nodiscard]] inline const Comparison *find_comparison(const ExperimentReport &r, const std::string &ref, const std::string &other) {
    for (const auto &c : r.comparisons) {
        if (c.reference == ref && c.other == other) {
            return &c;
        }
    }
    return nullptr;
}

}  // namespace detail

/// Overall table: one row per technique ordered by average rank, with a p-value and
/// verdict column pair for every reference technique.
inline void write_markdown(std::ostream &out, const ExperimentReport &r) {
    std::vector<std::string> references;
    for (const auto &c : r.comparisons) {
        if (std::find(references.begin(), references.end(), c.reference) == references.end()) {
            references.push_back(c.reference);
        }
    }

    out << "# Experiment report\n\n";
    out << "| Technique | AUC (std) | Rank |";
    for (const auto &ref : references) {
        out << ' ' << ref << " (p-value) | " << ref << " |";
    }
    out << '\n' << "|---|---|---|";
    for (std::size_t i = 0; i < references.size(); ++i) {
        out << "---|---|";
    }
    out << '\n';

    std::vector<TechniqueSummary> rows = r.summary;
    std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
        return a.average_rank != b.average_rank ? a.average_rank < b.average_rank : a.name < b.name;
    });
    for (const auto &t : rows) {
        out << "| " << t.name << " | " << detail::fixed(t.mean_auc, 4) << " (" << detail::fixed(t.std_auc, 4) << ") | "
            << detail::fixed(t.average_rank, 2) << " |";
        for (const auto &ref : references) {
            const auto *c = detail::find_comparison(r, ref, t.name);
            if (c == nullptr || !c->wilcoxon) {
                out << " N/A | |";
            } else {
                out << ' ' << detail::pvalue(c->wilcoxon->p_value) << " | " << stats::sign_char(c->wilcoxon->sign) << " |";
            }
        }
        out << '\n';
    }

    if (!r.comparisons.empty()) {
        out << "\n## Sign test\n\n";
        out << "| Reference | Technique | Wins | Ties | Losses | n_c (0.10 / 0.05 / 0.01) | Result (alpha " << detail::fixed(r.config.alpha, 2)
            << ") |\n";
        out << "|---|---|---|---|---|---|---|\n";
        for (const auto &c : r.comparisons) {
            out << "| " << c.reference << " | " << c.other << " | " << c.win_tie_loss.wins << " | " << c.win_tie_loss.ties << " | "
                << c.win_tie_loss.losses << " | ";
            for (std::size_t i = 0; i < c.critical_values.size(); ++i) {
                out << (i ? " / " : "") << detail::fixed(c.critical_values[i], 2);
            }
            out << " | " << stats::sign_char(c.sign_test.sign) << " |\n";
        }
    }

    out << "\n## Per dataset\n\n| Dataset | IR | Skipped |";
    for (const auto &t : r.techniques) {
        out << ' ' << t << " |";
    }
    out << "\n|---|---|---|";
    for (std::size_t i = 0; i < r.techniques.size(); ++i) {
        out << "---|";
    }
    out << '\n';
    for (const auto &d : r.datasets) {
        out << "| " << d.name << " | " << detail::fixed(d.imbalance_ratio, 2) << " | " << d.skipped() << " |";
        for (std::size_t t = 0; t < r.techniques.size(); ++t) {
            if (t < d.mean_auc.size()) {
                out << ' ' << detail::fixed(d.mean_auc[t], 4) << " (" << detail::fixed(d.std_auc[t], 4) << ") |";
            } else {
                out << " N/A |";
            }
        }
        out << '\n';
    }

    if (!r.warnings.empty()) {
        out << "\n## Warnings\n\n";
        for (const auto &w : r.warnings) {
            out << "- " << w << '\n';
        }
    }
    out << "\n## Decisions\n\n";
    for (const auto &d : r.decisions) {
        out << "- " << d << '\n';
    }
}

/// Flat table: dataset,replication,technique,skipped,auc. Skipped replications keep
/// their rows with an empty auc cell.
inline void write_csv(std::ostream &out, const ExperimentReport &r) {
    out << "dataset,replication,technique,skipped,auc\n";
    for (const auto &d : r.datasets) {
        for (const auto &rep : d.replications) {
            for (std::size_t t = 0; t < r.techniques.size(); ++t) {
                out << d.name << ',' << rep.index << ',' << r.techniques[t] << ',' << (rep.skipped ? 1 : 0) << ',';
                if (!rep.skipped) {
                    out << nlohmann::json(rep.auc.at(t)).dump();
                }
                out << '\n';
            }
        }
    }
}

inline void write_json(std::ostream &out, const ExperimentReport &r) { out << nlohmann::json(r).dump(2) << '\n'; }

[[nodiscard]] inline ExperimentReport report_from_json(const std::string &text) { return nlohmann::json::parse(text).get<ExperimentReport>(); }

enum class ReportFormat { markdown, csv, json };

struct EmittedFiles {
    std::filesystem::path markdown;
    std::filesystem::path csv;
    std::filesystem::path json;
};

inline std::string render(const ExperimentReport &r, ReportFormat format) {
    std::ostringstream ss;
    switch (format) {
        case ReportFormat::markdown:
            write_markdown(ss, r);
            break;
        case ReportFormat::csv:
            write_csv(ss, r);
            break;
        case ReportFormat::json:
            write_json(ss, r);
            break;
    }
    return ss.str();
}

/// Writes report.md, auc.csv and report.json into `dir` (created if needed).
inline EmittedFiles emit_report(const ExperimentReport &r, const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw config_error("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    EmittedFiles files{dir / "report.md", dir / "auc.csv", dir / "report.json"};
    const std::pair<std::filesystem::path, ReportFormat> outputs[] = {
        {files.markdown, ReportFormat::markdown}, {files.csv, ReportFormat::csv}, {files.json, ReportFormat::json}};
    for (const auto &[path, format] : outputs) {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw config_error("cannot write '" + path.string() + "'");
        }
        out << render(r, format);
        if (!out) {
            throw config_error("failed writing '" + path.string() + "'");
        }
    }
    return files;
}

}  // namespace knora
