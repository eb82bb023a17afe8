#include "bpdi/harness.hpp"

#include "bpdi/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bpdi {

namespace {

// Fixed tags for stream derivation, so every random draw in the pipeline is
// addressed by (seed, purpose, condition).
constexpr std::uint64_t kTagTheta = 0x7468657461ull;      // "theta"
constexpr std::uint64_t kTagBootstrap = 0x626f6f74ull;    // "boot"

std::uint64_t variant_tag(AnsatzVariant v) {
    return v == AnsatzVariant::HEA ? 1 : 2;
}

std::uint64_t model_tag(ModelKind m) {
    return m == ModelKind::TFIM ? 1 : 2;
}

} // namespace

const char* init_name(InitDistribution d) {
    return d == InitDistribution::Uniform0To2Pi ? "uniform_0_2pi" : "uniform_pm_pi";
}

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig cfg;
    // 200 seeds keep the pooled B_eff gaps well clear of seed noise; at 50
    // the weakest LFIM depth-8 trend links sit only ~2 sigma above zero.
    cfg.seeds.resize(200);
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        cfg.seeds[i] = i;
    }
    return cfg;
}

void ExperimentConfig::validate() const {
    if (n_list.empty() || d_list.empty() || variants.empty()) {
        throw std::invalid_argument("config needs at least one n, d and variant");
    }
    for (int n : n_list) {
        if (n < 2 || n > 24) {
            throw std::invalid_argument("system sizes must be in [2, 24]");
        }
    }
    for (int d : d_list) {
        if (d < 1) {
            throw std::invalid_argument("depths must be >= 1");
        }
    }
    if (seeds.size() < 2) {
        throw std::invalid_argument("need at least two seeds (variance across seeds)");
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        for (std::size_t j = i + 1; j < seeds.size(); ++j) {
            if (seeds[i] == seeds[j]) {
                throw std::invalid_argument("seed list contains duplicates");
            }
        }
    }
    if (!(fd_epsilon > 0.0)) {
        throw std::invalid_argument("fd epsilon must be positive");
    }
    if (bootstrap_resamples < 1) {
        throw std::invalid_argument("bootstrap resamples must be >= 1");
    }
    if (jobs < 1) {
        throw std::invalid_argument("jobs must be >= 1");
    }
}

RunRecord run_condition(const ExperimentConfig& cfg, ModelKind model, int n, int d,
                        AnsatzVariant variant, std::uint64_t seed) {
    const Hamiltonian h =
        model == ModelKind::TFIM ? build_tfim(n, cfg.h) : build_lfim(n, cfg.hx, cfg.hz);
    const AnsatzSpec spec = variant == AnsatzVariant::HEA
                                ? build_hea(n, d, cfg.hea_entangler)
                                : build_hva(n, d, model);

    CounterRng rng(CounterRng::derive_key(
        seed, {kTagTheta, model_tag(model), static_cast<std::uint64_t>(n),
               static_cast<std::uint64_t>(d), variant_tag(variant)}));
    std::vector<double> theta(static_cast<std::size_t>(spec.n_params));
    for (double& t : theta) {
        t = cfg.init == InitDistribution::Uniform0To2Pi
                ? rng.uniform(0.0, 2.0 * std::numbers::pi)
                : rng.uniform(-std::numbers::pi, std::numbers::pi);
    }

    const GradientMethod method = variant == AnsatzVariant::HEA
                                      ? GradientMethod::parameter_shift()
                                      : GradientMethod::central_fd(cfg.fd_epsilon);

    RunRecord rec;
    rec.key = {model, n, d, variant, seed};
    rec.matrix = grad_termwise(spec, theta, h, method);
    rec.theta = std::move(theta);
    rec.diagnostics.reserve(rec.matrix.n_params);
    for (std::size_t k = 0; k < rec.matrix.n_params; ++k) {
        const std::vector<double> col = rec.matrix.column(k);
        rec.diagnostics.push_back(
            diagnose_column(static_cast<int>(k), col, rec.matrix.g[k]));

        // Persistence gate: the bridge identity must hold on every column.
        const BridgeCheck bc = bridge_check(col);
        const double tol = 1e-10 * std::max(1.0, rec.diagnostics.back().q);
        if (bc.abs_err > tol) {
            std::ostringstream msg;
            msg << "bridge identity violated at " << model_name(model) << " n=" << n
                << " d=" << d << " " << variant_name(variant) << " seed=" << seed
                << " k=" << k << ": lhs=" << bc.lhs << " rhs=" << bc.rhs
                << " err=" << bc.abs_err;
            throw std::runtime_error(msg.str());
        }
    }
    return rec;
}

namespace {

struct PooledMoments {
    double mean = 0.0;
    double std_dev = 0.0;
};

PooledMoments moments(const std::vector<double>& values) {
    PooledMoments m;
    if (values.empty()) {
        return m;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    m.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            const double d = v - m.mean;
            ss += d * d;
        }
        m.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return m;
}

std::vector<const RunRecord*> sorted_by_seed(std::span<const RunRecord> runs) {
    std::vector<const RunRecord*> ordered;
    ordered.reserve(runs.size());
    for (const RunRecord& r : runs) {
        ordered.push_back(&r);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const RunRecord* a, const RunRecord* b) { return a->key.seed < b->key.seed; });
    return ordered;
}

} // namespace

GroupSummary aggregate(const GroupKey& key, std::span<const RunRecord> runs) {
    if (runs.size() < 2) {
        throw InsufficientDataError("aggregation needs at least two seeds");
    }
    for (const RunRecord& r : runs) {
        if (r.key.group() != key) {
            throw std::invalid_argument("run does not belong to the aggregated group");
        }
    }
    const std::vector<const RunRecord*> ordered = sorted_by_seed(runs);

    GroupSummary gs;
    gs.key = key;
    gs.n_seeds = runs.size();

    std::vector<double> rs;
    std::vector<double> neffs;
    std::vector<double> beffs;
    std::vector<double> r_seedmeans;
    std::vector<double> neff_seedmeans;
    std::vector<double> beff_seedmeans;
    std::vector<DiagnosticsRecord> pooled;
    std::vector<std::vector<double>> per_seed_gradients;
    per_seed_gradients.reserve(runs.size());

    for (const RunRecord* run : ordered) {
        double r_sum = 0.0;
        double neff_sum = 0.0;
        double beff_sum = 0.0;
        std::size_t valid_count = 0;
        std::vector<double> g_row;
        g_row.reserve(run->diagnostics.size());
        for (const DiagnosticsRecord& rec : run->diagnostics) {
            g_row.push_back(rec.g);
            if (!rec.valid) {
                ++gs.n_skipped;
                continue;
            }
            pooled.push_back(rec);
            rs.push_back(rec.r);
            neffs.push_back(rec.n_eff);
            beffs.push_back(rec.b_eff);
            r_sum += rec.r;
            neff_sum += rec.n_eff;
            beff_sum += rec.b_eff;
            ++valid_count;
        }
        per_seed_gradients.push_back(std::move(g_row));
        if (valid_count > 0) {
            const double inv = 1.0 / static_cast<double>(valid_count);
            r_seedmeans.push_back(r_sum * inv);
            neff_seedmeans.push_back(neff_sum * inv);
            beff_seedmeans.push_back(beff_sum * inv);
        }
    }

    gs.n_records = pooled.size();
    const PooledMoments mr = moments(rs);
    const PooledMoments mn = moments(neffs);
    const PooledMoments mb = moments(beffs);
    gs.mean_r = mr.mean;
    gs.std_r = mr.std_dev;
    gs.mean_neff = mn.mean;
    gs.std_neff = mn.std_dev;
    gs.mean_beff = mb.mean;
    gs.std_beff = mb.std_dev;
    gs.std_r_seedmeans = moments(r_seedmeans).std_dev;
    gs.std_neff_seedmeans = moments(neff_seedmeans).std_dev;
    gs.std_beff_seedmeans = moments(beff_seedmeans).std_dev;

    const FactorizationStats fs = factorization_stats(pooled);
    gs.e_b2q = fs.e_b2q;
    gs.e_b2_times_e_q = fs.e_b2 * fs.e_q;
    gs.factorization_ratio = fs.ratio;
    gs.corr_b2_q = fs.corr;
    gs.corr_degenerate = fs.corr_degenerate;

    gs.grad_variance = gradient_variance(per_seed_gradients);
    {
        const std::size_t n_params = per_seed_gradients.front().size();
        double total = 0.0;
        for (std::size_t k = 0; k < n_params; ++k) {
            double sum_sq = 0.0;
            for (const auto& row : per_seed_gradients) {
                sum_sq += row[k] * row[k];
            }
            total += sum_sq / static_cast<double>(per_seed_gradients.size());
        }
        gs.grad_second_moment = total / static_cast<double>(n_params);
    }
    const BiasRatioStats bias = bias_ratio_stats(per_seed_gradients);
    gs.bias_median = bias.median;
    gs.bias_mean = bias.mean;
    gs.bias_p90 = bias.p90;
    return gs;
}

namespace {

struct RunBeff {
    double sum = 0.0;
    std::size_t count = 0;
};

std::vector<RunBeff> per_run_beff(std::span<const RunRecord> runs) {
    std::vector<RunBeff> out;
    out.reserve(runs.size());
    for (const RunRecord& r : runs) {
        RunBeff rb;
        for (const DiagnosticsRecord& rec : r.diagnostics) {
            if (rec.valid) {
                rb.sum += rec.b_eff;
                ++rb.count;
            }
        }
        out.push_back(rb);
    }
    return out;
}

double pooled_mean(const std::vector<RunBeff>& runs, std::span<const std::size_t> picks) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i : picks) {
        sum += runs[i].sum;
        count += runs[i].count;
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

double pooled_mean_all(const std::vector<RunBeff>& runs) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const RunBeff& r : runs) {
        sum += r.sum;
        count += r.count;
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

} // namespace

BootstrapResult bootstrap_delta_beff(std::span<const RunRecord> hea_runs,
                                     std::span<const RunRecord> hva_runs,
                                     int n_resamples, std::uint64_t seed) {
    if (hea_runs.empty() || hva_runs.empty()) {
        throw std::invalid_argument("bootstrap needs runs on both sides");
    }
    if (n_resamples < 1) {
        throw std::invalid_argument("bootstrap needs at least one resample");
    }
    const std::vector<RunBeff> hea = per_run_beff(hea_runs);
    const std::vector<RunBeff> hva = per_run_beff(hva_runs);

    BootstrapResult res;
    res.n_resamples = n_resamples;
    res.delta_beff_mean = pooled_mean_all(hva) - pooled_mean_all(hea);

    CounterRng rng(CounterRng::derive_key(seed, {kTagBootstrap}));
    std::vector<double> deltas;
    deltas.reserve(static_cast<std::size_t>(n_resamples));
    std::vector<std::size_t> picks_hea(hea.size());
    std::vector<std::size_t> picks_hva(hva.size());
    for (int b = 0; b < n_resamples; ++b) {
        for (std::size_t& p : picks_hea) {
            p = static_cast<std::size_t>(rng.next_u64() % hea.size());
        }
        for (std::size_t& p : picks_hva) {
            p = static_cast<std::size_t>(rng.next_u64() % hva.size());
        }
        deltas.push_back(pooled_mean(hva, picks_hva) - pooled_mean(hea, picks_hea));
    }
    res.ci_low = percentile(deltas, 0.025);
    res.ci_high = percentile(std::move(deltas), 0.975);
    res.excludes_zero = res.ci_low > 0.0 || res.ci_high < 0.0;
    return res;
}

namespace {

struct Task {
    ModelKind model;
    int n;
    int d;
    AnsatzVariant variant;
    std::uint64_t seed;
};

std::vector<Task> build_tasks(const ExperimentConfig& cfg) {
    std::vector<Task> tasks;
    for (int n : cfg.n_list) {
        for (int d : cfg.d_list) {
            for (AnsatzVariant v : cfg.variants) {
                for (std::uint64_t seed : cfg.seeds) {
                    tasks.push_back({cfg.model, n, d, v, seed});
                }
            }
        }
    }
    return tasks;
}

} // namespace

GridResult run_grid(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<Task> tasks = build_tasks(cfg);

    GridResult grid;
    grid.config = cfg;
    grid.runs.resize(tasks.size());

    // Tasks write into preassigned slots, so the result is identical for any
    // worker count.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) {
                return;
            }
            try {
                const Task& t = tasks[i];
                grid.runs[i] = run_condition(cfg, t.model, t.n, t.d, t.variant, t.seed);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    const int n_workers = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int i = 0; i < n_workers; ++i) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    return reaggregate(cfg, std::move(grid.runs));
}

GridResult reaggregate(const ExperimentConfig& cfg, std::vector<RunRecord> runs) {
    GridResult grid;
    grid.config = cfg;
    grid.runs = std::move(runs);

    std::vector<double> all_bias_ratios;
    for (int n : cfg.n_list) {
        for (int d : cfg.d_list) {
            std::vector<RunRecord> hea;
            std::vector<RunRecord> hva;
            for (AnsatzVariant v : cfg.variants) {
                const GroupKey key{cfg.model, n, d, v};
                std::vector<RunRecord> members;
                for (const RunRecord& r : grid.runs) {
                    if (r.key.group() == key) {
                        members.push_back(r);
                    }
                }
                if (members.empty()) {
                    continue;
                }
                grid.summaries.push_back(aggregate(key, members));

                // Pool per-parameter bias ratios across conditions.
                std::vector<std::vector<double>> per_seed;
                for (const RunRecord* run : sorted_by_seed(members)) {
                    std::vector<double> row;
                    row.reserve(run->diagnostics.size());
                    for (const DiagnosticsRecord& rec : run->diagnostics) {
                        row.push_back(rec.g);
                    }
                    per_seed.push_back(std::move(row));
                }
                const std::size_t n_params = per_seed.front().size();
                for (std::size_t k = 0; k < n_params; ++k) {
                    double mean = 0.0;
                    double mean_abs = 0.0;
                    for (const auto& row : per_seed) {
                        mean += row[k];
                        mean_abs += std::abs(row[k]);
                    }
                    if (mean_abs > 0.0) {
                        all_bias_ratios.push_back(std::abs(mean) / mean_abs);
                    }
                }

                if (v == AnsatzVariant::HEA) {
                    hea = std::move(members);
                } else {
                    hva = std::move(members);
                }
            }
            if (!hea.empty() && !hva.empty()) {
                const std::uint64_t boot_seed = CounterRng::derive_key(
                    0, {model_tag(cfg.model), static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(d)});
                grid.bootstraps.push_back(
                    {n, d, bootstrap_delta_beff(hea, hva, cfg.bootstrap_resamples, boot_seed)});
            }
        }
    }
    if (!all_bias_ratios.empty()) {
        grid.bias_pooled = summarize_ratios(std::move(all_bias_ratios));
    }
    return grid;
}

} // namespace bpdi
