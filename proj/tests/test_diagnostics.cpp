#include "bpdi/diagnostics.hpp"

#include "bpdi/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace bpdi;

namespace {

DiagnosticsRecord make_record(double b_eff, double q) {
    DiagnosticsRecord rec;
    rec.b_eff = b_eff;
    rec.q = q;
    rec.valid = true;
    return rec;
}

std::vector<double> random_column(CounterRng& rng, std::size_t len) {
    std::vector<double> col(len);
    for (double& v : col) {
        v = rng.uniform(-1.0, 1.0);
        if (rng.next_double() < 0.08) {
            v = 0.0;
        }
    }
    return col;
}

} // namespace

TEST_SUITE_BEGIN("diagnostics");

TEST_CASE("cancellation ratio") {
    CHECK(cancellation_ratio(std::vector<double>{1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(cancellation_ratio(std::vector<double>{1.0, -1.0}) == doctest::Approx(0.0));
    CHECK(cancellation_ratio(std::vector<double>{3.0, -1.0}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(cancellation_ratio(std::vector<double>{0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("effective term count") {
    CHECK(effective_term_count(std::vector<double>{2.5, 2.5, 2.5, 2.5}) ==
          doctest::Approx(4.0));
    CHECK(effective_term_count(std::vector<double>{-0.3, -0.3, -0.3, -0.3}) ==
          doctest::Approx(4.0));
    CHECK(effective_term_count(std::vector<double>{5.0, 0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(effective_term_count(std::vector<double>{3.0, -1.0}) == doctest::Approx(1.6));
    CHECK_THROWS_AS(effective_term_count(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("interference quality") {
    CHECK(interference_quality(std::vector<double>{1.0, 1.0}) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(interference_quality(std::vector<double>{1.0, -1.0}) == doctest::Approx(0.0));
    CHECK(interference_quality(std::vector<double>{3.0, -1.0}) ==
          doctest::Approx(2.0 / std::sqrt(10.0)).epsilon(1e-12));
    // Same value through the R * sqrt(N_eff) route.
    CHECK(interference_quality(std::vector<double>{3.0, -1.0}) ==
          doctest::Approx(0.5 * std::sqrt(1.6)).epsilon(1e-12));
}

TEST_CASE("activity scale") {
    CHECK(activity_scale(std::vector<double>{3.0, -1.0}) == doctest::Approx(10.0));
    CHECK(activity_scale(std::vector<double>{}) == 0.0);
    CHECK(activity_scale(std::vector<double>{1.0, 1.0, 1.0}) == doctest::Approx(3.0));
}

TEST_CASE("bridge identity") {
    const BridgeCheck a = bridge_check(std::vector<double>{3.0, -1.0});
    CHECK(a.lhs == doctest::Approx(4.0));
    CHECK(a.rhs == doctest::Approx(4.0));
    CHECK(a.abs_err < 1e-12);

    const BridgeCheck b = bridge_check(std::vector<double>{1.0, -1.0});
    CHECK(b.lhs == doctest::Approx(0.0));
    CHECK(b.rhs == doctest::Approx(0.0));

    CounterRng rng(CounterRng::derive_key(101, {1}));
    for (int trial = 0; trial < 10000; ++trial) {
        const std::vector<double> col = random_column(rng, 19);
        const BridgeCheck bc = bridge_check(col);
        CHECK(bc.abs_err < 1e-12);
    }
}

TEST_CASE("scale and permutation invariance, bound chain") {
    CounterRng rng(CounterRng::derive_key(102, {2}));
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> col = random_column(rng, 11);
        if (count_nonzero_entries(col) == 0) {
            continue;
        }
        const double r = cancellation_ratio(col);
        const double n_eff = effective_term_count(col);
        const double b = interference_quality(col);

        const double c = trial % 2 == 0 ? rng.uniform(0.1, 5.0) : -rng.uniform(0.1, 5.0);
        std::vector<double> scaled = col;
        for (double& v : scaled) {
            v *= c;
        }
        CHECK(std::abs(cancellation_ratio(scaled) - r) <= 1e-12);
        CHECK(std::abs(effective_term_count(scaled) - n_eff) <= 1e-12 * n_eff);
        CHECK(std::abs(interference_quality(scaled) - b) <= 1e-12 * std::max(1.0, b));

        std::vector<double> perm = col;
        for (std::size_t i = perm.size(); i > 1; --i) {
            std::swap(perm[i - 1], perm[rng.next_u64() % i]);
        }
        CHECK(std::abs(cancellation_ratio(perm) - r) <= 1e-12);
        CHECK(std::abs(effective_term_count(perm) - n_eff) <= 1e-12 * n_eff);

        const int nonzero = count_nonzero_entries(col);
        CHECK(b <= std::sqrt(n_eff) + 1e-12);
        CHECK(n_eff <= static_cast<double>(nonzero) + 1e-9);
    }
}

TEST_CASE("b_eff saturates sqrt(n_eff) exactly when signs align") {
    const std::vector<double> aligned = {0.2, 1.3, 0.5};
    CHECK(interference_quality(aligned) ==
          doctest::Approx(std::sqrt(effective_term_count(aligned))).epsilon(1e-12));
    const std::vector<double> mixed = {0.2, -1.3, 0.5};
    CHECK(interference_quality(mixed) <
          std::sqrt(effective_term_count(mixed)) - 1e-6);
}

TEST_CASE("diagnose_column flags inactive columns") {
    const DiagnosticsRecord rec = diagnose_column(3, std::vector<double>{0.0, 0.0}, 0.0);
    CHECK_FALSE(rec.valid);
    CHECK(rec.param_index == 3);
    CHECK(rec.q == 0.0);

    const DiagnosticsRecord ok = diagnose_column(1, std::vector<double>{3.0, -1.0}, 2.0);
    CHECK(ok.valid);
    CHECK(ok.r == doctest::Approx(0.5));
    CHECK(ok.n_eff == doctest::Approx(1.6));
    CHECK(ok.q == doctest::Approx(10.0));
    CHECK(ok.g == 2.0);
}

TEST_CASE("factorization statistics") {
    // Constant B^2: ratio is exactly 1, correlation degenerates to 0.
    const std::vector<DiagnosticsRecord> constant = {make_record(1.0, 1.0),
                                                     make_record(1.0, 3.0)};
    const FactorizationStats fs = factorization_stats(constant);
    CHECK(fs.ratio == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fs.corr == 0.0);
    CHECK(fs.corr_degenerate);

    // Anti-correlated pair: E[B^2 Q] = 2, E[B^2]E[Q] = 2.25.
    const std::vector<DiagnosticsRecord> anti = {make_record(std::sqrt(2.0), 1.0),
                                                 make_record(1.0, 2.0)};
    const FactorizationStats fa = factorization_stats(anti);
    CHECK(fa.e_b2q == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fa.e_b2 * fa.e_q == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(fa.ratio == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
    CHECK(fa.corr == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_FALSE(fa.corr_degenerate);

    const std::vector<DiagnosticsRecord> lone = {make_record(1.0, 1.0)};
    CHECK_THROWS_AS(factorization_stats(lone), InsufficientDataError);

    std::vector<DiagnosticsRecord> with_invalid = {make_record(1.0, 1.0),
                                                   make_record(2.0, 1.5)};
    with_invalid.push_back({});  // invalid record must be ignored
    CHECK(factorization_stats(with_invalid).n_used == 2);
}

TEST_CASE("bias ratio statistics") {
    // Identical positive gradients across seeds: every ratio is 1.
    const std::vector<std::vector<double>> same = {{0.5, 1.0}, {0.5, 1.0}};
    const BiasRatioStats s1 = bias_ratio_stats(same);
    CHECK(s1.median == doctest::Approx(1.0));
    CHECK(s1.mean == doctest::Approx(1.0));
    CHECK(s1.p90 == doctest::Approx(1.0));

    // Exact sign flip across two seeds: ratio 0.
    const std::vector<std::vector<double>> flip = {{0.7}, {-0.7}};
    CHECK(bias_ratio_stats(flip).mean == doctest::Approx(0.0));

    // Seeds (1, 2, -1): |2/3| / (4/3) = 0.5.
    const std::vector<std::vector<double>> mixed = {{1.0}, {2.0}, {-1.0}};
    CHECK(bias_ratio_stats(mixed).mean == doctest::Approx(0.5).epsilon(1e-12));

    // Zero-denominator parameters are skipped.
    const std::vector<std::vector<double>> partial = {{0.0, 1.0}, {0.0, 1.0}};
    CHECK(bias_ratio_stats(partial).n_ratios == 1);

    const std::vector<std::vector<double>> all_zero = {{0.0}, {0.0}};
    CHECK_THROWS_AS(bias_ratio_stats(all_zero), InsufficientDataError);
    const std::vector<std::vector<double>> one_seed = {{1.0}};
    CHECK_THROWS_AS(bias_ratio_stats(one_seed), InsufficientDataError);
}

TEST_CASE("gradient variance") {
    const std::vector<std::vector<double>> constant = {{0.4, -0.2}, {0.4, -0.2}, {0.4, -0.2}};
    CHECK(gradient_variance(constant) == doctest::Approx(0.0));

    // Two seeds at +-1 for each of two parameters: unbiased variance 2.
    const std::vector<std::vector<double>> pm = {{1.0, 1.0}, {-1.0, -1.0}};
    CHECK(gradient_variance(pm) == doctest::Approx(2.0));

    CounterRng rng(CounterRng::derive_key(103, {3}));
    std::vector<std::vector<double>> data(7, std::vector<double>(5));
    for (auto& row : data) {
        for (double& v : row) {
            v = rng.uniform(-2.0, 2.0);
        }
    }
    // Two-pass reference computation.
    double expected = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
        double mean = 0.0;
        for (const auto& row : data) {
            mean += row[k];
        }
        mean /= 7.0;
        double ss = 0.0;
        for (const auto& row : data) {
            ss += (row[k] - mean) * (row[k] - mean);
        }
        expected += ss / 6.0;
    }
    expected /= 5.0;
    CHECK(gradient_variance(data) == doctest::Approx(expected).epsilon(1e-12));

    const std::vector<std::vector<double>> one = {{1.0}};
    CHECK_THROWS_AS(gradient_variance(one), InsufficientDataError);
}

TEST_CASE("percentiles interpolate linearly") {
    const std::vector<double> vals = {4.0, 1.0, 3.0, 2.0};
    CHECK(percentile(vals, 0.5) == doctest::Approx(2.5));
    CHECK(percentile(vals, 0.0) == doctest::Approx(1.0));
    CHECK(percentile(vals, 1.0) == doctest::Approx(4.0));
    CHECK(percentile(vals, 0.9) == doctest::Approx(3.7).epsilon(1e-12));
}

TEST_SUITE_END();
