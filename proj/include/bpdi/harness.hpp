#pragma once

#include "bpdi/diagnostics.hpp"
#include "bpdi/gradient.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bpdi {

inline constexpr const char* kVersion = "0.1.0";

enum class InitDistribution { Uniform0To2Pi, UniformPmPi };

const char* init_name(InitDistribution d);

struct ExperimentConfig {
    ModelKind model = ModelKind::TFIM;
    std::vector<int> n_list = {4, 6, 8, 10};
    std::vector<int> d_list = {4, 6, 8};
    std::vector<AnsatzVariant> variants = {AnsatzVariant::HEA, AnsatzVariant::HVA};
    double h = 1.0;    // TFIM transverse field
    double hx = 1.0;   // LFIM transverse field
    double hz = 0.5;   // LFIM longitudinal field
    std::vector<std::uint64_t> seeds;  // filled with 0..49 by default
    InitDistribution init = InitDistribution::Uniform0To2Pi;
    double fd_epsilon = 1e-5;
    HeaEntangler hea_entangler = HeaEntangler::Ring;
    int bootstrap_resamples = 2000;
    std::string output_dir = "results";
    int jobs = 1;

    static ExperimentConfig defaults();
    void validate() const;
};

struct RunKey {
    ModelKind model = ModelKind::TFIM;
    int n = 0;
    int d = 0;
    AnsatzVariant variant = AnsatzVariant::HEA;
    std::uint64_t seed = 0;

    GroupKey group() const { return {model, n, d, variant}; }
    bool operator==(const RunKey&) const = default;
};

// One (condition, seed) evaluation: the drawn parameter point, the termwise
// matrix with its full gradient, and per-parameter diagnostics. Every
// persisted record has passed the bridge-identity gate.
struct RunRecord {
    RunKey key;
    std::vector<double> theta;
    TermwiseGradientMatrix matrix;
    std::vector<DiagnosticsRecord> diagnostics;
};

struct BootstrapResult {
    double delta_beff_mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int n_resamples = 0;
    bool excludes_zero = false;
};

RunRecord run_condition(const ExperimentConfig& cfg, ModelKind model, int n, int d,
                        AnsatzVariant variant, std::uint64_t seed);

// Pooled summary over the runs of one (model, n, d, variant) group; needs
// at least two seeds. Records are pooled in (seed, parameter) order, so the
// result does not depend on the order runs are passed in.
GroupSummary aggregate(const GroupKey& key, std::span<const RunRecord> runs);

// Seed-level cluster bootstrap of the pooled mean B_eff difference
// (HVA minus HEA): whole runs are resampled with replacement on each side
// and a percentile 95% interval is taken over the recomputed differences.
BootstrapResult bootstrap_delta_beff(std::span<const RunRecord> hea_runs,
                                     std::span<const RunRecord> hva_runs,
                                     int n_resamples, std::uint64_t seed);

struct ConditionBootstrap {
    int n = 0;
    int d = 0;
    BootstrapResult result;
};

struct GridResult {
    ExperimentConfig config;
    std::vector<RunRecord> runs;            // fixed task order
    std::vector<GroupSummary> summaries;    // fixed condition order
    std::vector<ConditionBootstrap> bootstraps;  // one per (n, d), when both variants ran
    BiasRatioStats bias_pooled;             // ratios pooled across all conditions
};

// Executes the full grid. Tasks run on cfg.jobs worker threads; outputs are
// a pure function of the config, independent of scheduling.
GridResult run_grid(const ExperimentConfig& cfg);

// Writes summary.csv, variance_scaling.csv, rk_vs_neff.csv,
// variance_bridge.csv, bootstrap.csv, records.csv and manifest.json into
// cfg.output_dir.
void emit_reports(const GridResult& grid);

std::string manifest_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_manifest_file(const std::string& path);
ExperimentConfig config_from_key_value_file(const std::string& path);

// Rebuilds diagnostics-only run records from a records.csv written by
// emit_reports, for re-aggregation without re-simulation.
std::vector<RunRecord> load_records_csv(const std::string& path);

// Re-aggregates loaded runs: recomputes summaries, bootstraps and pooled
// bias ratios under the given config.
GridResult reaggregate(const ExperimentConfig& cfg, std::vector<RunRecord> runs);

int cli_main(int argc, char** argv);

} // namespace bpdi
