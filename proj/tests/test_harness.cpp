#include "bpdi/harness.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bpdi;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg = ExperimentConfig::defaults();
    cfg.n_list = {2, 3};
    cfg.d_list = {1};
    cfg.seeds = {0, 1, 2};
    cfg.bootstrap_resamples = 200;
    return cfg;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream is(path);
    REQUIRE(is);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

RunRecord synthetic_run(std::uint64_t seed, const std::vector<double>& beffs) {
    RunRecord run;
    run.key = {ModelKind::TFIM, 4, 4, AnsatzVariant::HEA, seed};
    int k = 0;
    for (double b : beffs) {
        DiagnosticsRecord rec;
        rec.param_index = k++;
        rec.valid = true;
        rec.r = 0.5;
        rec.n_eff = 2.0;
        rec.b_eff = b;
        rec.q = 1.0;
        rec.g = b;
        run.diagnostics.push_back(rec);
    }
    return run;
}

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() / ("bpdi_test_" + tag);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("run_condition shapes and determinism") {
    const ExperimentConfig cfg = ExperimentConfig::defaults();
    const RunRecord hea = run_condition(cfg, ModelKind::TFIM, 4, 4, AnsatzVariant::HEA, 0);
    CHECK(hea.diagnostics.size() == 32);
    CHECK(hea.matrix.n_terms == 7);
    CHECK(hea.matrix.n_params == 32);
    CHECK(hea.theta.size() == 32);

    const RunRecord hva = run_condition(cfg, ModelKind::TFIM, 4, 4, AnsatzVariant::HVA, 0);
    CHECK(hva.diagnostics.size() == 8);
    CHECK(hva.matrix.n_terms == 7);
    CHECK(hva.matrix.n_params == 8);

    const RunRecord again = run_condition(cfg, ModelKind::TFIM, 4, 4, AnsatzVariant::HEA, 0);
    CHECK(again.theta == hea.theta);
    CHECK(again.matrix.a == hea.matrix.a);
    CHECK(again.matrix.g == hea.matrix.g);

    // Distinct seeds draw distinct parameter points.
    const RunRecord other = run_condition(cfg, ModelKind::TFIM, 4, 4, AnsatzVariant::HEA, 1);
    CHECK(other.theta != hea.theta);
}

TEST_CASE("angles respect the init distribution") {
    ExperimentConfig cfg = ExperimentConfig::defaults();
    cfg.init = InitDistribution::UniformPmPi;
    const RunRecord run = run_condition(cfg, ModelKind::TFIM, 3, 2, AnsatzVariant::HEA, 5);
    for (double t : run.theta) {
        CHECK(t >= -3.1416);
        CHECK(t <= 3.1416);
    }
    cfg.init = InitDistribution::Uniform0To2Pi;
    const RunRecord run2 = run_condition(cfg, ModelKind::TFIM, 3, 2, AnsatzVariant::HEA, 5);
    for (double t : run2.theta) {
        CHECK(t >= 0.0);
        CHECK(t < 6.2832);
    }
}

TEST_CASE("aggregate pools records and matches hand arithmetic") {
    const GroupKey key{ModelKind::TFIM, 4, 4, AnsatzVariant::HEA};
    std::vector<RunRecord> runs;
    runs.push_back(synthetic_run(0, {1.0, 2.0}));
    runs.push_back(synthetic_run(1, {3.0, 4.0}));
    const GroupSummary gs = aggregate(key, runs);
    CHECK(gs.n_seeds == 2);
    CHECK(gs.n_records == 4);
    CHECK(gs.mean_beff == doctest::Approx(2.5));
    CHECK(gs.mean_r == doctest::Approx(0.5));
    CHECK(gs.mean_neff == doctest::Approx(2.0));
    // Seed means are 1.5 and 3.5: sample std sqrt(2).
    CHECK(gs.std_beff_seedmeans == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    // g rows (1,2) and (3,4): per-parameter unbiased variance 2, mean 2.
    CHECK(gs.grad_variance == doctest::Approx(2.0));
    // All g positive and equal in sign: every bias ratio is 1.
    CHECK(gs.bias_median == doctest::Approx(1.0));

    const std::vector<RunRecord> lone(runs.begin(), runs.begin() + 1);
    CHECK_THROWS_AS(aggregate(key, lone), InsufficientDataError);
}

TEST_CASE("aggregate is order independent") {
    const GroupKey key{ModelKind::TFIM, 4, 4, AnsatzVariant::HEA};
    std::vector<RunRecord> runs;
    runs.push_back(synthetic_run(0, {1.0, 2.0}));
    runs.push_back(synthetic_run(1, {3.0, 4.0}));
    runs.push_back(synthetic_run(2, {-1.0, 0.5}));
    const GroupSummary forward = aggregate(key, runs);
    std::reverse(runs.begin(), runs.end());
    const GroupSummary reversed = aggregate(key, runs);
    CHECK(forward.mean_beff == reversed.mean_beff);
    CHECK(forward.std_beff == reversed.std_beff);
    CHECK(forward.e_b2q == reversed.e_b2q);
    CHECK(forward.grad_variance == reversed.grad_variance);
}

TEST_CASE("group-level variance bridge") {
    const ExperimentConfig cfg = ExperimentConfig::defaults();
    const GroupKey key{ModelKind::TFIM, 3, 2, AnsatzVariant::HEA};
    std::vector<RunRecord> runs;
    for (std::uint64_t s = 0; s < 4; ++s) {
        runs.push_back(run_condition(cfg, ModelKind::TFIM, 3, 2, AnsatzVariant::HEA, s));
    }
    const GroupSummary gs = aggregate(key, runs);

    // The pooled mean of (sum_alpha a)^2 equals E[B^2 Q] through the exact
    // per-column identity.
    double mean_sq = 0.0;
    std::size_t count = 0;
    for (const RunRecord& run : runs) {
        const std::vector<double> sums = run.matrix.column_sums();
        for (std::size_t k = 0; k < sums.size(); ++k) {
            if (run.diagnostics[k].valid) {
                mean_sq += sums[k] * sums[k];
                ++count;
            }
        }
    }
    mean_sq /= static_cast<double>(count);
    CHECK(mean_sq == doctest::Approx(gs.e_b2q).epsilon(1e-10));

    // Centered and uncentered across-seed moments are mutually consistent:
    // second moment minus squared mean is the population variance, which is
    // the unbiased variance rescaled by (S-1)/S.
    const std::size_t n_params = runs.front().diagnostics.size();
    const double n_seeds = static_cast<double>(runs.size());
    double pop_var = 0.0;
    double second = 0.0;
    for (std::size_t k = 0; k < n_params; ++k) {
        double mean = 0.0;
        double sq = 0.0;
        for (const RunRecord& run : runs) {
            mean += run.diagnostics[k].g;
            sq += run.diagnostics[k].g * run.diagnostics[k].g;
        }
        mean /= n_seeds;
        sq /= n_seeds;
        pop_var += sq - mean * mean;
        second += sq;
    }
    pop_var /= static_cast<double>(n_params);
    second /= static_cast<double>(n_params);
    CHECK(second == doctest::Approx(gs.grad_second_moment).epsilon(1e-12));
    CHECK(pop_var ==
          doctest::Approx(gs.grad_variance * (n_seeds - 1.0) / n_seeds).epsilon(1e-10));
}

TEST_CASE("bootstrap straddles zero for identical groups") {
    std::vector<RunRecord> hea;
    std::vector<RunRecord> hva;
    for (std::uint64_t s = 0; s < 6; ++s) {
        hea.push_back(synthetic_run(s, {1.0, 1.2, 0.8}));
        hva.push_back(synthetic_run(s, {1.0, 1.2, 0.8}));
    }
    const BootstrapResult res = bootstrap_delta_beff(hea, hva, 500, 1);
    CHECK(res.delta_beff_mean == doctest::Approx(0.0));
    CHECK(res.ci_low <= res.delta_beff_mean);
    CHECK(res.ci_high >= res.delta_beff_mean);
    CHECK_FALSE(res.excludes_zero);
}

TEST_CASE("bootstrap detects a constant offset") {
    std::vector<RunRecord> hea;
    std::vector<RunRecord> hva;
    for (std::uint64_t s = 0; s < 8; ++s) {
        const double jitter = 0.01 * static_cast<double>(s % 3);
        hea.push_back(synthetic_run(s, {0.8 + jitter, 0.9 + jitter}));
        hva.push_back(synthetic_run(s, {1.8 + jitter, 1.9 + jitter}));
    }
    const BootstrapResult res = bootstrap_delta_beff(hea, hva, 500, 2);
    CHECK(res.delta_beff_mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.excludes_zero);
    CHECK(res.ci_low <= res.delta_beff_mean);
    CHECK(res.ci_high >= res.delta_beff_mean);

    CHECK_THROWS_AS(bootstrap_delta_beff({}, hva, 100, 1), std::invalid_argument);
}

TEST_CASE("grid output is independent of worker count") {
    ExperimentConfig cfg = small_config();
    cfg.jobs = 1;
    const GridResult a = run_grid(cfg);
    cfg.jobs = 4;
    const GridResult b = run_grid(cfg);
    REQUIRE(a.runs.size() == b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        CHECK(a.runs[i].key == b.runs[i].key);
        CHECK(a.runs[i].theta == b.runs[i].theta);
        CHECK(a.runs[i].matrix.a == b.runs[i].matrix.a);
        CHECK(a.runs[i].matrix.g == b.runs[i].matrix.g);
    }
    REQUIRE(a.summaries.size() == b.summaries.size());
    for (std::size_t i = 0; i < a.summaries.size(); ++i) {
        CHECK(a.summaries[i].mean_beff == b.summaries[i].mean_beff);
        CHECK(a.summaries[i].grad_variance == b.summaries[i].grad_variance);
    }
}

TEST_CASE("reports round-trip through manifest and records") {
    TempDir dir("reports");
    ExperimentConfig cfg = small_config();
    cfg.output_dir = (dir.path / "out").string();
    const GridResult grid = run_grid(cfg);
    emit_reports(grid);

    for (const char* name : {"summary.csv", "variance_scaling.csv", "rk_vs_neff.csv",
                             "variance_bridge.csv", "bootstrap.csv", "records.csv",
                             "manifest.json"}) {
        CHECK(std::filesystem::exists(dir.path / "out" / name));
    }

    // summary.csv: header + one row per (n, d).
    const std::string summary = slurp(dir.path / "out" / "summary.csv");
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 3);
    CHECK(summary.rfind("n,d,R_hea,R_hva,", 0) == 0);

    // Rerunning from the manifest reproduces every byte.
    ExperimentConfig reloaded =
        config_from_manifest_file((dir.path / "out" / "manifest.json").string());
    reloaded.output_dir = (dir.path / "out2").string();
    emit_reports(run_grid(reloaded));
    for (const char* name : {"summary.csv", "variance_scaling.csv", "rk_vs_neff.csv",
                             "variance_bridge.csv", "bootstrap.csv", "records.csv"}) {
        CHECK(slurp(dir.path / "out" / name) == slurp(dir.path / "out2" / name));
    }

    // records.csv reloads into runs that re-aggregate to the same summaries.
    const std::vector<RunRecord> loaded =
        load_records_csv((dir.path / "out" / "records.csv").string());
    REQUIRE(loaded.size() == grid.runs.size());
    const GridResult re = reaggregate(grid.config, std::vector<RunRecord>(loaded));
    REQUIRE(re.summaries.size() == grid.summaries.size());
    for (std::size_t i = 0; i < re.summaries.size(); ++i) {
        CHECK(re.summaries[i].mean_beff ==
              doctest::Approx(grid.summaries[i].mean_beff).epsilon(1e-12));
        CHECK(re.summaries[i].factorization_ratio ==
              doctest::Approx(grid.summaries[i].factorization_ratio).epsilon(1e-12));
    }
}

TEST_CASE("key=value config loader") {
    TempDir dir("config");
    const std::filesystem::path path = dir.path / "run.cfg";
    {
        std::ofstream os(path);
        os << "# comment line\n"
           << "model=lfim\n"
           << "n_list=4,6\n"
           << "d_list=2\n"
           << "variants=hva\n"
           << "hz=0.25\n"
           << "seeds=5\n"
           << "jobs=3\n";
    }
    const ExperimentConfig cfg = config_from_key_value_file(path.string());
    CHECK(cfg.model == ModelKind::LFIM);
    CHECK(cfg.n_list == std::vector<int>{4, 6});
    CHECK(cfg.d_list == std::vector<int>{2});
    REQUIRE(cfg.variants.size() == 1);
    CHECK(cfg.variants[0] == AnsatzVariant::HVA);
    CHECK(cfg.hz == 0.25);
    CHECK(cfg.seeds.size() == 5);
    CHECK(cfg.seeds[4] == 4);
    CHECK(cfg.jobs == 3);

    const std::filesystem::path bad = dir.path / "bad.cfg";
    {
        std::ofstream os(bad);
        os << "nonsense=1\n";
    }
    CHECK_THROWS_AS(config_from_key_value_file(bad.string()), std::invalid_argument);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg = ExperimentConfig::defaults();
    cfg.seeds = {3};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig::defaults();
    cfg.n_list = {1};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig::defaults();
    cfg.seeds = {0, 0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_NOTHROW(ExperimentConfig::defaults().validate());
}

TEST_CASE("cli smoke") {
    TempDir dir("cli");

    {
        const std::string out = (dir.path / "cell.txt").string();
        const char* argv[] = {"bpdi",      "condition", "--model", "tfim", "--n",
                              "2",         "--depth",   "1",       "--variant", "hva",
                              "--seed",    "0",         "--dump-matrix", out.c_str()};
        CHECK(cli_main(static_cast<int>(std::size(argv)), const_cast<char**>(argv)) == 0);
        CHECK(std::filesystem::exists(out));
    }
    {
        const char* argv[] = {"bpdi", "baseline", "--weights", "equal:4", "--samples",
                              "2000", "--seed", "1"};
        CHECK(cli_main(static_cast<int>(std::size(argv)), const_cast<char**>(argv)) == 0);
    }
    {
        const char* argv[] = {"bpdi", "run", "--model", "tfim", "--hz", "0.3"};
        CHECK(cli_main(static_cast<int>(std::size(argv)), const_cast<char**>(argv)) != 0);
    }
    {
        const char* argv[] = {"bpdi", "--no-such-flag"};
        CHECK(cli_main(static_cast<int>(std::size(argv)), const_cast<char**>(argv)) != 0);
    }
}

TEST_SUITE_END();
