#pragma once

#include "bpdi/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace bpdi {

// E[|N(0,1)|] = sqrt(2/pi), the random-sign reference level for B_eff.
double random_sign_reference();

// Non-negative magnitude profile for the random-sign null model; at least
// one weight must be positive.
struct WeightProfile {
    std::vector<double> w;

    explicit WeightProfile(std::vector<double> weights);
    std::size_t size() const { return w.size(); }
};

struct BaselineEstimate {
    double mean_beff = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
    double reference = 0.0;  // sqrt(2/pi)
};

// One draw of B = |sum_a s_a w_a| / sqrt(sum w_a^2) with i.i.d. symmetric
// signs.
double sample_beff(const WeightProfile& profile, CounterRng& rng);

// Monte-Carlo mean of B with its standard error. Sample i draws from the
// stream derived from (seed, i), so the estimate is reproducible under any
// execution order.
BaselineEstimate mc_expected_beff(const WeightProfile& profile, std::size_t n_samples,
                                  std::uint64_t seed);

// Random-sign prediction for the cancellation ratio at a given effective
// term count: sqrt(2/pi) / sqrt(n_eff) for n_eff > 0. Exceeds the R <= 1
// ceiling for n_eff < 2/pi; returned unclamped, callers flag that region.
double baseline_rk(double n_eff);

struct ExactBeffDistribution {
    // (value, probability) pairs sorted by value, probabilities summing to 1.
    std::vector<std::pair<double, double>> pmf;
    double mean = 0.0;
};

// Exact distribution of B over all 2^m sign patterns; m <= 20.
ExactBeffDistribution exhaustive_beff_distribution(const WeightProfile& profile);

} // namespace bpdi
