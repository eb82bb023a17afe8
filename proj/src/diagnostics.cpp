#include "bpdi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bpdi {

namespace {

struct ColumnSums {
    double sum = 0.0;      // signed sum
    double sum_abs = 0.0;  // unsigned activity
    double sum_sq = 0.0;   // activity scale
    double max_abs = 0.0;

    bool active() const { return sum_abs > 0.0 && sum_sq > 0.0; }
};

ColumnSums column_sums(std::span<const double> a_col) {
    ColumnSums s;
    for (double a : a_col) {
        s.sum += a;
        s.sum_abs += std::abs(a);
        s.sum_sq += a * a;
        s.max_abs = std::max(s.max_abs, std::abs(a));
    }
    return s;
}

[[noreturn]] void throw_zero_column() {
    throw std::invalid_argument("diagnostics are undefined for an all-zero column");
}

} // namespace

double cancellation_ratio(std::span<const double> a_col) {
    const ColumnSums s = column_sums(a_col);
    if (!s.active()) {
        throw_zero_column();
    }
    return std::min(1.0, std::abs(s.sum) / s.sum_abs);
}

double effective_term_count(std::span<const double> a_col) {
    const ColumnSums s = column_sums(a_col);
    if (!s.active()) {
        throw_zero_column();
    }
    return (s.sum_abs * s.sum_abs) / s.sum_sq;
}

double interference_quality(std::span<const double> a_col) {
    const ColumnSums s = column_sums(a_col);
    if (!s.active()) {
        throw_zero_column();
    }
    const double r = std::min(1.0, std::abs(s.sum) / s.sum_abs);
    const double n_eff = (s.sum_abs * s.sum_abs) / s.sum_sq;
    const double combined = r * std::sqrt(n_eff);
    const double direct = std::abs(s.sum) / std::sqrt(s.sum_sq);
    if (std::abs(combined - direct) > 1e-10) {
        throw std::runtime_error("interference-quality forms disagree beyond tolerance");
    }
    return direct;
}

double activity_scale(std::span<const double> a_col) {
    double sum_sq = 0.0;
    for (double a : a_col) {
        sum_sq += a * a;
    }
    return sum_sq;
}

BridgeCheck bridge_check(std::span<const double> a_col) {
    const ColumnSums s = column_sums(a_col);
    BridgeCheck bc;
    bc.lhs = s.sum * s.sum;
    if (s.active()) {
        const double b_eff = std::abs(s.sum) / std::sqrt(s.sum_sq);
        bc.rhs = b_eff * b_eff * s.sum_sq;
    }
    bc.abs_err = std::abs(bc.lhs - bc.rhs);
    return bc;
}

int count_nonzero_entries(std::span<const double> a_col) {
    double max_abs = 0.0;
    for (double a : a_col) {
        max_abs = std::max(max_abs, std::abs(a));
    }
    if (max_abs == 0.0) {
        return 0;
    }
    const double floor = kEntryZeroRelTol * max_abs;
    int count = 0;
    for (double a : a_col) {
        if (std::abs(a) > floor) {
            ++count;
        }
    }
    return count;
}

DiagnosticsRecord diagnose_column(int param_index, std::span<const double> a_col, double g) {
    DiagnosticsRecord rec;
    rec.param_index = param_index;
    rec.g = g;
    const ColumnSums s = column_sums(a_col);
    rec.q = s.sum_sq;
    if (!s.active()) {
        return rec;
    }
    rec.valid = true;
    rec.r = cancellation_ratio(a_col);
    rec.n_eff = effective_term_count(a_col);
    rec.b_eff = interference_quality(a_col);
    return rec;
}

FactorizationStats factorization_stats(std::span<const DiagnosticsRecord> records) {
    FactorizationStats fs;
    double sum_b2 = 0.0;
    double sum_q = 0.0;
    double sum_b2q = 0.0;
    for (const DiagnosticsRecord& rec : records) {
        if (!rec.valid) {
            continue;
        }
        const double b2 = rec.b_eff * rec.b_eff;
        sum_b2 += b2;
        sum_q += rec.q;
        sum_b2q += b2 * rec.q;
        ++fs.n_used;
    }
    if (fs.n_used < 2) {
        throw InsufficientDataError("factorization statistics need at least two valid records");
    }
    const double inv_n = 1.0 / static_cast<double>(fs.n_used);
    fs.e_b2 = sum_b2 * inv_n;
    fs.e_q = sum_q * inv_n;
    fs.e_b2q = sum_b2q * inv_n;
    fs.ratio = fs.e_b2q / (fs.e_b2 * fs.e_q);

    double var_b2 = 0.0;
    double var_q = 0.0;
    double cov = 0.0;
    for (const DiagnosticsRecord& rec : records) {
        if (!rec.valid) {
            continue;
        }
        const double db = rec.b_eff * rec.b_eff - fs.e_b2;
        const double dq = rec.q - fs.e_q;
        var_b2 += db * db;
        var_q += dq * dq;
        cov += db * dq;
    }
    if (var_b2 < 1e-30 || var_q < 1e-30) {
        fs.corr = 0.0;
        fs.corr_degenerate = true;
    } else {
        fs.corr = cov / std::sqrt(var_b2 * var_q);
        fs.corr = std::clamp(fs.corr, -1.0, 1.0);
    }
    return fs;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw std::invalid_argument("percentile of an empty set");
    }
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) {
        return values.back();
    }
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

BiasRatioStats summarize_ratios(std::vector<double> ratios) {
    if (ratios.empty()) {
        throw InsufficientDataError("no bias ratios available");
    }
    BiasRatioStats stats;
    stats.n_ratios = ratios.size();
    double sum = 0.0;
    for (double r : ratios) {
        sum += r;
    }
    stats.mean = sum / static_cast<double>(ratios.size());
    stats.median = percentile(ratios, 0.5);
    stats.p90 = percentile(std::move(ratios), 0.9);
    return stats;
}

namespace {

void check_seed_matrix(const std::vector<std::vector<double>>& per_seed_gradients) {
    if (per_seed_gradients.size() < 2) {
        throw InsufficientDataError("need gradients from at least two seeds");
    }
    const std::size_t n_params = per_seed_gradients.front().size();
    for (const auto& row : per_seed_gradients) {
        if (row.size() != n_params) {
            throw std::invalid_argument("per-seed gradient rows have unequal lengths");
        }
    }
}

} // namespace

BiasRatioStats bias_ratio_stats(const std::vector<std::vector<double>>& per_seed_gradients) {
    check_seed_matrix(per_seed_gradients);
    const std::size_t n_seeds = per_seed_gradients.size();
    const std::size_t n_params = per_seed_gradients.front().size();
    std::vector<double> ratios;
    ratios.reserve(n_params);
    for (std::size_t k = 0; k < n_params; ++k) {
        double mean = 0.0;
        double mean_abs = 0.0;
        for (std::size_t s = 0; s < n_seeds; ++s) {
            mean += per_seed_gradients[s][k];
            mean_abs += std::abs(per_seed_gradients[s][k]);
        }
        mean /= static_cast<double>(n_seeds);
        mean_abs /= static_cast<double>(n_seeds);
        if (mean_abs == 0.0) {
            continue;
        }
        ratios.push_back(std::abs(mean) / mean_abs);
    }
    if (ratios.empty()) {
        throw InsufficientDataError("all bias-ratio denominators are zero");
    }
    return summarize_ratios(std::move(ratios));
}

double gradient_variance(const std::vector<std::vector<double>>& per_seed_gradients) {
    check_seed_matrix(per_seed_gradients);
    const std::size_t n_seeds = per_seed_gradients.size();
    const std::size_t n_params = per_seed_gradients.front().size();
    if (n_params == 0) {
        throw std::invalid_argument("gradient variance of zero parameters");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < n_params; ++k) {
        double mean = 0.0;
        for (std::size_t s = 0; s < n_seeds; ++s) {
            mean += per_seed_gradients[s][k];
        }
        mean /= static_cast<double>(n_seeds);
        double ss = 0.0;
        for (std::size_t s = 0; s < n_seeds; ++s) {
            const double d = per_seed_gradients[s][k] - mean;
            ss += d * d;
        }
        total += ss / static_cast<double>(n_seeds - 1);
    }
    return total / static_cast<double>(n_params);
}

} // namespace bpdi
