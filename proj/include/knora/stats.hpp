#pragma once

// AUC and the pairwise comparison statistics used to rank techniques.

#include "knora/dataset.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace knora::stats {

/// Mid-ranks (1-based) of `values` in ascending order; ties share their average rank.
[[nodiscard]] inline std::vector<double> average_ranks_ascending(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] == values[order[i]]) {
            ++j;
        }
        // positions i..j-1 hold ranks i+1..j
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            ranks[order[k]] = mid;
        }
        i = j;
    }
    return ranks;
}

/// Area under the ROC curve via the Mann-Whitney rank sum: the fraction of
/// (positive, negative) pairs where the positive scores higher, ties counting 1/2.
[[nodiscard]] inline double auc(std::span<const double> scores, std::span<const ClassLabel> truth, ClassLabel positive) {
    if (scores.size() != truth.size()) {
        throw std::invalid_argument("auc: scores and labels differ in length");
    }
    const auto ranks = average_ranks_ascending(scores);
    double pos_rank_sum = 0.0;
    double n_pos = 0.0;
    double n_neg = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == positive) {
            pos_rank_sum += ranks[i];
            n_pos += 1.0;
        } else {
            n_neg += 1.0;
        }
    }
    if (n_pos == 0.0 || n_neg == 0.0) {
        throw std::invalid_argument("auc: both classes must be present");
    }
    return (pos_rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

enum class Sign { better, equal, worse };

[[nodiscard]] constexpr char sign_char(Sign s) noexcept {
    switch (s) {
        case Sign::better:
            return '+';
        case Sign::worse:
            return '-';
        default:
            return '=';
    }
}

[[nodiscard]] inline Sign sign_from_char(char c) {
    switch (c) {
        case '+':
            return Sign::better;
        case '-':
            return Sign::worse;
        case '=':
            return Sign::equal;
        default:
            throw std::invalid_argument(std::string("unknown verdict sign '") + c + "'");
    }
}

struct PairwiseVerdict {
    double p_value{1.0};  // one-sided, H1: first argument better
    Sign sign{Sign::equal};
    double alpha{0.05};
    double statistic{0.0};
    std::size_t n{0};
    bool exact{false};

    bool operator==(const PairwiseVerdict &) const = default;
};

inline constexpr std::size_t wilcoxon_exact_limit = 15;

[[nodiscard]] inline double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

/// One-sided Wilcoxon signed-rank test of "a is better (larger) than b".
///
/// Zero differences are dropped and tied |differences| share average ranks. Up to
/// 15 nonzero pairs the null distribution of W+ is computed exactly (conditional
/// on the tie pattern); above that a normal approximation with tie-corrected
/// variance is used. The sign is '+' when p(a > b) < alpha, '-' when
/// p(b > a) < alpha, '=' otherwise.
[[nodiscard]] inline PairwiseVerdict wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, double alpha = 0.05) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("wilcoxon: samples differ in length");
    }
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            diffs.push_back(a[i] - b[i]);
        }
    }
    PairwiseVerdict v;
    v.alpha = alpha;
    v.n = diffs.size();
    if (diffs.empty()) {
        return v;
    }
    if (diffs.size() < 5) {
        throw std::invalid_argument("wilcoxon: need at least 5 nonzero differences, got " + std::to_string(diffs.size()));
    }

    std::vector<double> magnitude(diffs.size());
    std::transform(diffs.begin(), diffs.end(), magnitude.begin(), [](double d) { return std::fabs(d); });
    const auto ranks = average_ranks_ascending(magnitude);
    double w_plus = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i] > 0.0) {
            w_plus += ranks[i];
        }
    }
    v.statistic = w_plus;
    const double n = static_cast<double>(diffs.size());

    double p_greater = 1.0;
    double p_less = 1.0;
    if (diffs.size() <= wilcoxon_exact_limit) {
        // Average ranks are multiples of 1/2, so doubled ranks are integers.
        std::vector<std::size_t> doubled(ranks.size());
        std::transform(ranks.begin(), ranks.end(), doubled.begin(), [](double r) { return static_cast<std::size_t>(std::lround(2.0 * r)); });
        const std::size_t total = std::accumulate(doubled.begin(), doubled.end(), std::size_t{0});
        std::vector<double> ways(total + 1, 0.0);
        ways[0] = 1.0;
        for (const auto r : doubled) {
            for (std::size_t s = total; s >= r; --s) {
                ways[s] += ways[s - r];
                if (s == r) {
                    break;
                }
            }
        }
        const auto observed = static_cast<std::size_t>(std::lround(2.0 * w_plus));
        const double all = std::ldexp(1.0, static_cast<int>(diffs.size()));
        double ge = 0.0;
        double le = 0.0;
        for (std::size_t s = 0; s <= total; ++s) {
            if (s >= observed) {
                ge += ways[s];
            }
            if (s <= observed) {
                le += ways[s];
            }
        }
        p_greater = ge / all;
        p_less = le / all;
        v.exact = true;
    } else {
        double tie_term = 0.0;
        std::vector<double> sorted = magnitude;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i + 1;
            while (j < sorted.size() && sorted[j] == sorted[i]) {
                ++j;
            }
            const double t = static_cast<double>(j - i);
            tie_term += t * t * t - t;
            i = j;
        }
        const double mean = n * (n + 1.0) / 4.0;
        const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
        const double z = (w_plus - mean) / std::sqrt(var);
        p_greater = normal_upper_tail(z);
        p_less = normal_upper_tail(-z);
    }
    v.p_value = std::min(1.0, p_greater);
    if (p_greater < alpha) {
        v.sign = Sign::better;
    } else if (p_less < alpha) {
        v.sign = Sign::worse;
    }
    return v;
}

struct WinTieLoss {
    std::size_t wins{0};
    std::size_t ties{0};
    std::size_t losses{0};

    [[nodiscard]] std::size_t n_exp() const noexcept { return wins + ties + losses; }

    bool operator==(const WinTieLoss &) const = default;
};

/// Counts a[i] > b[i] as a win for a.
[[nodiscard]] inline WinTieLoss count_wins(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("win/tie/loss: samples differ in length");
    }
    WinTieLoss w;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            ++w.wins;
        } else if (a[i] < b[i]) {
            ++w.losses;
        } else {
            ++w.ties;
        }
    }
    return w;
}

/// Standard-normal critical value for a one-sided level. The three conventional
/// levels use the tabulated two-decimal values.
[[nodiscard]] inline double z_critical(double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::invalid_argument("alpha must lie in (0, 0.5)");
    }
    if (alpha == 0.10) {
        return 1.282;
    }
    if (alpha == 0.05) {
        return 1.645;
    }
    if (alpha == 0.01) {
        return 2.33;
    }
    return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<double>{}, alpha));
}

/// Wins (plus half the ties) needed out of n_exp comparisons: n/2 + z * sqrt(n)/2.
[[nodiscard]] inline double sign_test_critical(std::size_t n_exp, double alpha) {
    if (n_exp == 0) {
        throw std::invalid_argument("sign test needs at least one experiment");
    }
    const double n = static_cast<double>(n_exp);
    return n / 2.0 + z_critical(alpha) * std::sqrt(n) / 2.0;
}

/// Rejects "no better" when wins + ties/2 >= the critical count.
[[nodiscard]] inline PairwiseVerdict sign_test(const WinTieLoss &wtl, double alpha) {
    const std::size_t n_exp = wtl.n_exp();
    const double critical = sign_test_critical(n_exp, alpha);
    const double n = static_cast<double>(n_exp);
    const double score = static_cast<double>(wtl.wins) + static_cast<double>(wtl.ties) / 2.0;
    const double against = static_cast<double>(wtl.losses) + static_cast<double>(wtl.ties) / 2.0;

    PairwiseVerdict v;
    v.alpha = alpha;
    v.n = n_exp;
    v.statistic = score;
    v.p_value = normal_upper_tail((score - n / 2.0) / (std::sqrt(n) / 2.0));
    if (score >= critical) {
        v.sign = Sign::better;
    } else if (against >= critical) {
        v.sign = Sign::worse;
    }
    return v;
}

/// Per row (dataset), ranks columns (techniques) by descending value with average
/// ranks for ties; returns the column means.
[[nodiscard]] inline std::vector<double> average_ranks(const std::vector<std::vector<double>> &table) {
    if (table.empty()) {
        return {};
    }
    const std::size_t t = table.front().size();
    std::vector<double> sums(t, 0.0);
    for (const auto &row : table) {
        if (row.size() != t) {
            throw std::invalid_argument("average_ranks: ragged table");
        }
        std::vector<double> negated(t);
        for (std::size_t j = 0; j < t; ++j) {
            if (std::isnan(row[j])) {
                throw std::invalid_argument("average_ranks: NaN entry");
            }
            negated[j] = -row[j];
        }
        const auto r = average_ranks_ascending(negated);
        for (std::size_t j = 0; j < t; ++j) {
            sums[j] += r[j];
        }
    }
    for (auto &s : sums) {
        s /= static_cast<double>(table.size());
    }
    return sums;
}

}  // namespace knora::stats
