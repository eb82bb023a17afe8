#pragma once

#include "bpdi/ansatz.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bpdi {

struct InsufficientDataError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Relative magnitude below which a column entry counts as zero when
// counting participating terms (finite-difference noise floor).
inline constexpr double kEntryZeroRelTol = 1e-14;

// Per-parameter cancellation diagnostics of one termwise-gradient column.
// valid is false when the column carries no activity at all; R, N_eff and
// B_eff are undefined (zero-filled) in that case and the record is excluded
// from pooled statistics.
struct DiagnosticsRecord {
    int param_index = 0;
    double r = 0.0;      // surviving fraction of unsigned activity, in [0, 1]
    double n_eff = 0.0;  // participation-ratio count of contributing terms
    double b_eff = 0.0;  // r * sqrt(n_eff) == |sum a| / sqrt(sum a^2)
    double q = 0.0;      // pre-cancellation activity, sum a^2
    double g = 0.0;      // full-gradient entry for this parameter
    bool valid = false;
};

// |sum a| / sum |a|. Throws on an all-zero column.
double cancellation_ratio(std::span<const double> a_col);

// (sum |a|)^2 / sum a^2, >= 1. Throws on an all-zero column.
double effective_term_count(std::span<const double> a_col);

// Computed both as r*sqrt(n_eff) and as |sum a| / sqrt(sum a^2); the two
// must agree to 1e-10 and the latter (numerically stabler) form is returned.
double interference_quality(std::span<const double> a_col);

// sum a^2; zero columns allowed.
double activity_scale(std::span<const double> a_col);

struct BridgeCheck {
    double lhs = 0.0;  // (sum a)^2
    double rhs = 0.0;  // b_eff^2 * q, zero for an invalid column
    double abs_err = 0.0;
};

// The exact identity (sum a)^2 = B_eff^2 Q, evaluated for testing; a
// violation is a test failure, never a runtime error.
BridgeCheck bridge_check(std::span<const double> a_col);

DiagnosticsRecord diagnose_column(int param_index, std::span<const double> a_col, double g);

int count_nonzero_entries(std::span<const double> a_col);

struct FactorizationStats {
    double e_b2q = 0.0;
    double e_b2 = 0.0;
    double e_q = 0.0;
    double ratio = 0.0;          // e_b2q / (e_b2 * e_q)
    double corr = 0.0;           // Pearson corr of (b_eff^2, q)
    bool corr_degenerate = false;  // a variable was constant; corr reported as 0
    std::size_t n_used = 0;
};

// Plain means over the valid records; throws InsufficientDataError with
// fewer than two of them.
FactorizationStats factorization_stats(std::span<const DiagnosticsRecord> records);

struct BiasRatioStats {
    double median = 0.0;
    double mean = 0.0;
    double p90 = 0.0;
    std::size_t n_ratios = 0;
};

// Per parameter k, |mean_seeds g_k| / mean_seeds |g_k| (skipped when the
// denominator is zero); summary percentiles over parameters use linear
// interpolation between order statistics.
BiasRatioStats bias_ratio_stats(const std::vector<std::vector<double>>& per_seed_gradients);

BiasRatioStats summarize_ratios(std::vector<double> ratios);

// Unbiased across-seed variance per parameter, averaged over parameters.
double gradient_variance(const std::vector<std::vector<double>>& per_seed_gradients);

double percentile(std::vector<double> values, double p);

struct GroupKey {
    ModelKind model = ModelKind::TFIM;
    int n = 0;
    int d = 0;
    AnsatzVariant variant = AnsatzVariant::HEA;

    bool operator==(const GroupKey&) const = default;
};

// Pooled per-(n, d, variant) statistics. std_* are unbiased sample standard
// deviations over pooled (seed, parameter) records; *_seedmeans are taken
// over per-seed means instead, since both poolings are of interest.
// grad_second_moment is the uncentered companion of grad_variance, kept so
// the quality of the near-zero-mean assumption stays visible.
struct GroupSummary {
    GroupKey key;
    std::size_t n_seeds = 0;
    std::size_t n_records = 0;   // valid pooled records
    std::size_t n_skipped = 0;   // all-zero columns excluded from pooling
    double mean_r = 0.0, std_r = 0.0, std_r_seedmeans = 0.0;
    double mean_neff = 0.0, std_neff = 0.0, std_neff_seedmeans = 0.0;
    double mean_beff = 0.0, std_beff = 0.0, std_beff_seedmeans = 0.0;
    double e_b2q = 0.0;
    double e_b2_times_e_q = 0.0;
    double factorization_ratio = 0.0;
    double corr_b2_q = 0.0;
    bool corr_degenerate = false;
    double grad_variance = 0.0;       // mean over k of unbiased across-seed variance
    double grad_second_moment = 0.0;  // mean over k of across-seed mean of g^2
    double bias_median = 0.0, bias_mean = 0.0, bias_p90 = 0.0;
};

} // namespace bpdi
