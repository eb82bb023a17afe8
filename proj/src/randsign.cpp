#include "bpdi/randsign.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bpdi {

double random_sign_reference() {
    return std::sqrt(2.0 / std::numbers::pi);
}

WeightProfile::WeightProfile(std::vector<double> weights) : w(std::move(weights)) {
    double total = 0.0;
    for (double v : w) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("weights must be finite and non-negative");
        }
        total += v;
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("weight profile needs at least one positive entry");
    }
}

namespace {

double norm_of(const WeightProfile& profile) {
    double sum_sq = 0.0;
    for (double v : profile.w) {
        sum_sq += v * v;
    }
    return std::sqrt(sum_sq);
}

} // namespace

double sample_beff(const WeightProfile& profile, CounterRng& rng) {
    double sum = 0.0;
    for (double v : profile.w) {
        sum += rng.next_sign() * v;
    }
    return std::abs(sum) / norm_of(profile);
}

BaselineEstimate mc_expected_beff(const WeightProfile& profile, std::size_t n_samples,
                                  std::uint64_t seed) {
    if (n_samples < 1) {
        throw std::invalid_argument("Monte-Carlo estimate needs at least one sample");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        CounterRng rng(CounterRng::derive_key(seed, {i}));
        const double b = sample_beff(profile, rng);
        sum += b;
        sum_sq += b * b;
    }
    BaselineEstimate est;
    est.n_samples = n_samples;
    est.mean_beff = sum / static_cast<double>(n_samples);
    if (n_samples > 1) {
        const double var =
            std::max(0.0, (sum_sq - sum * sum / static_cast<double>(n_samples)) /
                              static_cast<double>(n_samples - 1));
        est.std_error = std::sqrt(var / static_cast<double>(n_samples));
    }
    est.reference = random_sign_reference();
    return est;
}

double baseline_rk(double n_eff) {
    if (!(n_eff > 0.0)) {
        throw std::invalid_argument("effective term count must be positive");
    }
    return random_sign_reference() / std::sqrt(n_eff);
}

ExactBeffDistribution exhaustive_beff_distribution(const WeightProfile& profile) {
    const std::size_t m = profile.size();
    if (m > 20) {
        throw std::invalid_argument("exhaustive enumeration is limited to 20 weights");
    }
    const double norm = norm_of(profile);
    const std::size_t patterns = std::size_t{1} << m;
    std::vector<double> values;
    values.reserve(patterns);
    double mean = 0.0;
    for (std::size_t bits = 0; bits < patterns; ++bits) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sum += ((bits >> i) & 1u) ? profile.w[i] : -profile.w[i];
        }
        const double b = std::abs(sum) / norm;
        values.push_back(b);
        mean += b;
    }
    std::sort(values.begin(), values.end());

    ExactBeffDistribution dist;
    dist.mean = mean / static_cast<double>(patterns);
    const double prob = 1.0 / static_cast<double>(patterns);
    for (double v : values) {
        if (!dist.pmf.empty() && dist.pmf.back().first == v) {
            dist.pmf.back().second += prob;
        } else {
            dist.pmf.emplace_back(v, prob);
        }
    }
    return dist;
}

} // namespace bpdi
