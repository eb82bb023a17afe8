#include "bpdi/harness.hpp"

#include "bpdi/dense_oracle.hpp"
#include "bpdi/randsign.hpp"
#include "bpdi/rng.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

namespace bpdi {

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        seeds.push_back(std::stoull(tok));
    }
    if (seeds.size() == 1) {
        // A single integer is a seed count: seeds 0 .. count-1.
        const std::uint64_t count = seeds[0];
        seeds.clear();
        for (std::uint64_t i = 0; i < count; ++i) {
            seeds.push_back(i);
        }
    }
    return seeds;
}

int jobs_from_env() {
    if (const char* env = std::getenv("BPDI_JOBS")) {
        const int jobs = std::atoi(env);
        if (jobs >= 1) {
            return jobs;
        }
    }
    return 1;
}

struct CommonFlags {
    std::string model = "tfim";
    std::string variant = "both";
    std::string seeds = "200";
    std::string init = "uniform_0_2pi";
    std::string entangler = "ring";
    std::string config_path;
    std::string manifest_path;
    std::vector<int> n_list;
    std::vector<int> d_list;
    double h = 1.0;
    double hx = 1.0;
    double hz = 0.5;
    double fd_eps = 1e-5;
    int resamples = 2000;
    int jobs = 0;
    std::string out = "results";
};

void add_config_flags(CLI::App* cmd, CommonFlags& f) {
    // --h (the transverse field) clashes with the default -h short help flag.
    cmd->set_help_flag("--help", "Print this help message and exit");
    cmd->add_option("--model", f.model, "Target model: tfim or lfim")
        ->check(CLI::IsMember({"tfim", "lfim"}));
    cmd->add_option("--n", f.n_list, "System sizes (default 4 6 8 10)");
    cmd->add_option("--depth", f.d_list, "Circuit depths (default 4 6 8)");
    cmd->add_option("--variant", f.variant, "Ansatz family: hea, hva or both")
        ->check(CLI::IsMember({"hea", "hva", "both"}));
    cmd->add_option("--seeds", f.seeds,
                    "Seed count (default 200), or explicit comma-separated seed list");
    cmd->add_option("--h", f.h, "TFIM transverse field (default 1.0)");
    cmd->add_option("--hx", f.hx, "LFIM transverse field (default 1.0)");
    cmd->add_option("--hz", f.hz, "LFIM longitudinal field (default 0.5)");
    cmd->add_option("--fd-eps", f.fd_eps, "Central-difference step (default 1e-5)");
    cmd->add_option("--hea-entangler", f.entangler, "HEA entangling pattern: ring or line")
        ->check(CLI::IsMember({"ring", "line"}));
    cmd->add_option("--init", f.init, "Angle initialization distribution")
        ->check(CLI::IsMember({"uniform_0_2pi", "uniform_pm_pi"}));
    cmd->add_option("--resamples", f.resamples, "Bootstrap resamples (default 2000)");
    cmd->add_option("--out", f.out, "Output directory (default results)");
    cmd->add_option("--jobs", f.jobs, "Worker threads (default 1; BPDI_JOBS overrides)");
    cmd->add_option("--config", f.config_path, "Load settings from a key=value file");
}

void check_field_flags(const CLI::App* cmd, ModelKind model) {
    if (model == ModelKind::TFIM) {
        if (cmd->count("--hz") > 0) {
            throw CLI::ValidationError("--hz applies to --model lfim only");
        }
        if (cmd->count("--hx") > 0) {
            throw CLI::ValidationError("--hx applies to --model lfim only (use --h)");
        }
    } else if (cmd->count("--h") > 0) {
        throw CLI::ValidationError("--h applies to --model tfim only (use --hx/--hz)");
    }
}

ExperimentConfig config_from_flags(const CLI::App* cmd, const CommonFlags& f) {
    ExperimentConfig cfg =
        f.config_path.empty() ? ExperimentConfig::defaults()
                              : config_from_key_value_file(f.config_path);
    if (cmd->count("--model")) {
        cfg.model = f.model == "tfim" ? ModelKind::TFIM : ModelKind::LFIM;
    }
    check_field_flags(cmd, cfg.model);
    if (!f.n_list.empty()) {
        cfg.n_list = f.n_list;
    }
    if (!f.d_list.empty()) {
        cfg.d_list = f.d_list;
    }
    if (cmd->count("--variant")) {
        if (f.variant == "hea") {
            cfg.variants = {AnsatzVariant::HEA};
        } else if (f.variant == "hva") {
            cfg.variants = {AnsatzVariant::HVA};
        } else {
            cfg.variants = {AnsatzVariant::HEA, AnsatzVariant::HVA};
        }
    }
    if (cmd->count("--seeds")) {
        cfg.seeds = parse_seeds(f.seeds);
    }
    if (cmd->count("--h")) {
        cfg.h = f.h;
    }
    if (cmd->count("--hx")) {
        cfg.hx = f.hx;
    }
    if (cmd->count("--hz")) {
        cfg.hz = f.hz;
    }
    if (cmd->count("--fd-eps")) {
        cfg.fd_epsilon = f.fd_eps;
    }
    if (cmd->count("--hea-entangler")) {
        cfg.hea_entangler = f.entangler == "ring" ? HeaEntangler::Ring : HeaEntangler::Line;
    }
    if (cmd->count("--init")) {
        cfg.init = f.init == "uniform_0_2pi" ? InitDistribution::Uniform0To2Pi
                                             : InitDistribution::UniformPmPi;
    }
    if (cmd->count("--resamples")) {
        cfg.bootstrap_resamples = f.resamples;
    }
    if (cmd->count("--out")) {
        cfg.output_dir = f.out;
    }
    cfg.jobs = cmd->count("--jobs") ? f.jobs : jobs_from_env();
    return cfg;
}

void print_group_table(const GridResult& grid) {
    std::cout << "model n d variant  mean_R  mean_Neff  mean_Beff  grad_var\n";
    for (const GroupSummary& s : grid.summaries) {
        std::cout << model_name(s.key.model) << ' ' << s.key.n << ' ' << s.key.d << ' '
                  << variant_name(s.key.variant) << "  " << s.mean_r << "  " << s.mean_neff
                  << "  " << s.mean_beff << "  " << s.grad_variance << '\n';
    }
    for (const ConditionBootstrap& cb : grid.bootstraps) {
        std::cout << "delta_Beff n=" << cb.n << " d=" << cb.d << ": "
                  << cb.result.delta_beff_mean << " [" << cb.result.ci_low << ", "
                  << cb.result.ci_high << "]"
                  << (cb.result.excludes_zero ? " excludes zero" : " includes zero") << '\n';
    }
    if (grid.bias_pooled.n_ratios > 0) {
        std::cout << "bias ratios pooled: median=" << grid.bias_pooled.median
                  << " mean=" << grid.bias_pooled.mean << " p90=" << grid.bias_pooled.p90
                  << '\n';
    }
}

int cmd_run(const CLI::App* cmd, const CommonFlags& f) {
    ExperimentConfig cfg = f.manifest_path.empty() ? config_from_flags(cmd, f)
                                                   : config_from_manifest_file(f.manifest_path);
    if (!f.manifest_path.empty() && cmd->count("--out")) {
        cfg.output_dir = f.out;
    }
    const GridResult grid = run_grid(cfg);
    emit_reports(grid);
    print_group_table(grid);
    std::cout << "wrote reports to " << cfg.output_dir << '\n';
    return 0;
}

int cmd_condition(const CLI::App* cmd, const CommonFlags& f, int n, int d,
                  std::uint64_t seed, const std::string& matrix_in,
                  const std::string& dump_matrix, const std::string& dump_hamiltonian,
                  const std::string& dump_program, const std::string& dump_state) {
    if (!matrix_in.empty()) {
        // Decoupled mode: diagnostics straight from a stored matrix dump.
        std::ifstream is(matrix_in);
        if (!is) {
            throw std::runtime_error("cannot read matrix dump " + matrix_in);
        }
        const TermwiseGradientMatrix m = TermwiseGradientMatrix::read(is);
        const std::vector<double> sums = m.column_sums();
        std::cout << "k R Neff Beff Q colsum\n";
        for (std::size_t k = 0; k < m.n_params; ++k) {
            const std::vector<double> col = m.column(k);
            const DiagnosticsRecord rec =
                diagnose_column(static_cast<int>(k), col, sums[k]);
            if (rec.valid) {
                std::cout << k << ' ' << rec.r << ' ' << rec.n_eff << ' ' << rec.b_eff << ' '
                          << rec.q << ' ' << rec.g << '\n';
            } else {
                std::cout << k << " - - - " << rec.q << ' ' << rec.g << '\n';
            }
        }
        return 0;
    }

    ExperimentConfig cfg = config_from_flags(cmd, f);
    const AnsatzVariant variant = f.variant == "hva" ? AnsatzVariant::HVA : AnsatzVariant::HEA;
    if (f.variant == "both") {
        throw CLI::ValidationError("condition needs --variant hea or --variant hva");
    }
    const RunRecord rec = run_condition(cfg, cfg.model, n, d, variant, seed);

    if (!dump_hamiltonian.empty()) {
        std::ofstream os(dump_hamiltonian);
        const Hamiltonian h = cfg.model == ModelKind::TFIM ? build_tfim(n, cfg.h)
                                                           : build_lfim(n, cfg.hx, cfg.hz);
        h.write_text(os);
    }
    if (!dump_program.empty()) {
        std::ofstream os(dump_program);
        const AnsatzSpec spec = variant == AnsatzVariant::HEA
                                    ? build_hea(n, d, cfg.hea_entangler)
                                    : build_hva(n, d, cfg.model);
        spec.write_program(os);
    }
    if (!dump_matrix.empty()) {
        std::ofstream os(dump_matrix);
        rec.matrix.write(os);
    }
    if (!dump_state.empty()) {
        std::ofstream os(dump_state);
        const AnsatzSpec spec = variant == AnsatzVariant::HEA
                                    ? build_hea(n, d, cfg.hea_entangler)
                                    : build_hva(n, d, cfg.model);
        prepare_state(spec, rec.theta).write_amplitudes(os);
    }

    std::cout << model_name(cfg.model) << " n=" << n << " d=" << d << " "
              << variant_name(variant) << " seed=" << seed << "\n";
    std::cout << "k R Neff Beff Q g\n";
    for (const DiagnosticsRecord& r : rec.diagnostics) {
        if (r.valid) {
            std::cout << r.param_index << ' ' << r.r << ' ' << r.n_eff << ' ' << r.b_eff << ' '
                      << r.q << ' ' << r.g << '\n';
        } else {
            std::cout << r.param_index << " - - - " << r.q << ' ' << r.g << '\n';
        }
    }
    return 0;
}

WeightProfile parse_weights(const std::string& spec) {
    if (spec.rfind("equal:", 0) == 0) {
        const int m = std::stoi(spec.substr(6));
        if (m < 1) {
            throw std::invalid_argument("equal:<m> needs m >= 1");
        }
        return WeightProfile(std::vector<double>(static_cast<std::size_t>(m), 1.0));
    }
    if (spec.rfind("list:", 0) == 0) {
        std::vector<double> w;
        std::stringstream ss(spec.substr(5));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            w.push_back(std::stod(tok));
        }
        return WeightProfile(std::move(w));
    }
    throw std::invalid_argument("weights spec must be equal:<m> or list:<w1,w2,...>");
}

int cmd_baseline(const std::string& weights, std::size_t samples, std::uint64_t seed,
                 const std::string& out) {
    const WeightProfile profile = parse_weights(weights);
    const BaselineEstimate est = mc_expected_beff(profile, samples, seed);
    std::cout << "weights=" << profile.size() << " samples=" << est.n_samples
              << " mean_Beff=" << est.mean_beff << " std_error=" << est.std_error
              << " reference=" << est.reference << '\n';
    if (profile.size() <= 20) {
        const ExactBeffDistribution exact = exhaustive_beff_distribution(profile);
        std::cout << "exact_mean=" << exact.mean << " (enumeration over "
                  << (std::size_t{1} << profile.size()) << " sign patterns)\n";
    }
    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) {
            throw std::runtime_error("cannot write " + out);
        }
        os << "series,n_eff,value,exceeds_one\n";
        os.precision(17);
        for (int i = 0; i <= 400; ++i) {
            const double n_eff = 1.0 + 19.0 * static_cast<double>(i) / 400.0;
            const double r = baseline_rk(n_eff);
            os << "baseline_rk," << n_eff << ',' << r << ',' << (r > 1.0 ? 1 : 0) << '\n';
        }
        os << "mc_mean_beff," << profile.size() << ',' << est.mean_beff << ",0\n";
        os << "mc_std_error," << profile.size() << ',' << est.std_error << ",0\n";
        std::cout << "wrote " << out << '\n';
    }
    return 0;
}

bool check_line(const char* name, bool ok) {
    std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name << '\n';
    return ok;
}

int cmd_check() {
    int failures = 0;
    CounterRng rng(CounterRng::derive_key(7, {0x636865636bull}));

    // Bridge identity and diagnostic invariances on random columns.
    {
        bool bridge_ok = true;
        bool scale_ok = true;
        bool perm_ok = true;
        bool bound_ok = true;
        for (int trial = 0; trial < 10000; ++trial) {
            std::vector<double> col(19);
            for (double& v : col) {
                v = rng.uniform(-1.0, 1.0);
                if (rng.next_double() < 0.1) {
                    v = 0.0;
                }
            }
            const BridgeCheck bc = bridge_check(col);
            bridge_ok &= bc.abs_err <= 1e-10 * std::max(1.0, activity_scale(col));
            if (count_nonzero_entries(col) == 0) {
                continue;
            }
            const double r = cancellation_ratio(col);
            const double n_eff = effective_term_count(col);
            const double b = interference_quality(col);
            std::vector<double> scaled = col;
            const double c = rng.uniform(0.5, 3.0);
            for (double& v : scaled) {
                v *= c;
            }
            scale_ok &= std::abs(cancellation_ratio(scaled) - r) <= 1e-12 &&
                        std::abs(effective_term_count(scaled) - n_eff) <= 1e-12 * n_eff &&
                        std::abs(interference_quality(scaled) - b) <= 1e-12 * std::max(1.0, b);
            std::vector<double> perm = col;
            for (std::size_t i = perm.size(); i > 1; --i) {
                std::swap(perm[i - 1], perm[rng.next_u64() % i]);
            }
            perm_ok &= std::abs(cancellation_ratio(perm) - r) <= 1e-12 &&
                       std::abs(effective_term_count(perm) - n_eff) <= 1e-12 * n_eff;
            bound_ok &= b <= std::sqrt(n_eff) + 1e-12 &&
                        n_eff <= count_nonzero_entries(col) + 1e-9;
        }
        failures += !check_line("bridge identity (10^4 random columns)", bridge_ok);
        failures += !check_line("diagnostic scale invariance", scale_ok);
        failures += !check_line("diagnostic permutation invariance", perm_ok);
        failures += !check_line("bound chain B <= sqrt(Neff) <= sqrt(#nonzero)", bound_ok);
    }

    // Parameter-shift vs central differences on HEA.
    {
        const Hamiltonian h = build_tfim(4, 1.0);
        const AnsatzSpec spec = build_hea(4, 4);
        bool ok = true;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> theta(static_cast<std::size_t>(spec.n_params));
            for (double& t : theta) {
                t = rng.uniform(0.0, 2.0 * std::numbers::pi);
            }
            const std::vector<double> ps =
                grad_full(spec, theta, h, GradientMethod::parameter_shift());
            const std::vector<double> fd =
                grad_full(spec, theta, h, GradientMethod::central_fd(1e-5));
            for (std::size_t k = 0; k < ps.size(); ++k) {
                ok &= std::abs(ps[k] - fd[k]) <= 1e-6;
            }
        }
        failures += !check_line("parameter-shift vs central differences (HEA 4x4)", ok);
    }

    // Dense-matrix oracle equivalence at n = 3.
    {
        bool ok = true;
        for (ModelKind model : {ModelKind::TFIM, ModelKind::LFIM}) {
            const Hamiltonian h =
                model == ModelKind::TFIM ? build_tfim(3, 1.0) : build_lfim(3, 1.0, 0.5);
            for (AnsatzVariant variant : {AnsatzVariant::HEA, AnsatzVariant::HVA}) {
                const AnsatzSpec spec =
                    variant == AnsatzVariant::HEA ? build_hea(3, 2) : build_hva(3, 2, model);
                std::vector<double> theta(static_cast<std::size_t>(spec.n_params));
                for (double& t : theta) {
                    t = rng.uniform(0.0, 2.0 * std::numbers::pi);
                }
                const GradientMethod method = variant == AnsatzVariant::HEA
                                                  ? GradientMethod::parameter_shift()
                                                  : GradientMethod::central_fd(1e-5);
                const TermwiseGradientMatrix m = grad_termwise(spec, theta, h, method);
                const std::vector<std::vector<double>> ref =
                    oracle::grad_termwise_fd(spec, theta, h, 1e-6);
                for (std::size_t alpha = 0; alpha < m.n_terms; ++alpha) {
                    for (std::size_t k = 0; k < m.n_params; ++k) {
                        ok &= std::abs(m.at(alpha, k) - ref[alpha][k]) <= 1e-6;
                    }
                }
            }
        }
        failures += !check_line("dense-matrix termwise oracle (n=3, both families)", ok);
    }

    // Reconstruction and norm preservation through the simulation stack.
    {
        bool ok = true;
        for (ModelKind model : {ModelKind::TFIM, ModelKind::LFIM}) {
            ExperimentConfig cfg = ExperimentConfig::defaults();
            cfg.model = model;
            for (AnsatzVariant v : {AnsatzVariant::HEA, AnsatzVariant::HVA}) {
                const RunRecord rec = run_condition(cfg, model, 4, 4, v, 0);
                const std::vector<double> sums = rec.matrix.column_sums();
                for (std::size_t k = 0; k < sums.size(); ++k) {
                    ok &= std::abs(sums[k] - rec.matrix.g[k]) <=
                          1e-8 * std::max(1.0, std::abs(rec.matrix.g[k]));
                }
            }
        }
        failures += !check_line("termwise reconstruction (n=4 d=4, both models)", ok);

        bool norm_ok = true;
        for (int trial = 0; trial < 20; ++trial) {
            Statevector state(4);
            for (int i = 0; i < 100; ++i) {
                const int pick = static_cast<int>(rng.next_u64() % 5);
                const int q0 = static_cast<int>(rng.next_u64() % 4);
                int q1 = static_cast<int>(rng.next_u64() % 4);
                if (q1 == q0) {
                    q1 = (q1 + 1) % 4;
                }
                const double angle = rng.uniform(-std::numbers::pi, std::numbers::pi);
                switch (pick) {
                    case 0: state.apply(Gate::rx(q0, angle)); break;
                    case 1: state.apply(Gate::ry(q0, angle)); break;
                    case 2: state.apply(Gate::rz(q0, angle)); break;
                    case 3: state.apply(Gate::rzz(q0, q1, angle)); break;
                    default: state.apply(Gate::cnot(q0, q1)); break;
                }
            }
            norm_ok &= std::abs(state.norm_sq() - 1.0) < 1e-9;
        }
        failures += !check_line("norm preservation (100-gate random programs)", norm_ok);
    }

    // Scheduling determinism: byte-identical diagnostics for 1 vs 4 workers.
    {
        ExperimentConfig cfg = ExperimentConfig::defaults();
        cfg.n_list = {4};
        cfg.d_list = {4};
        cfg.seeds = {0, 1, 2};
        cfg.bootstrap_resamples = 100;
        cfg.jobs = 1;
        const GridResult a = run_grid(cfg);
        cfg.jobs = 4;
        const GridResult b = run_grid(cfg);
        bool ok = a.runs.size() == b.runs.size();
        for (std::size_t i = 0; ok && i < a.runs.size(); ++i) {
            ok &= a.runs[i].theta == b.runs[i].theta && a.runs[i].matrix.a == b.runs[i].matrix.a &&
                  a.runs[i].matrix.g == b.runs[i].matrix.g;
        }
        failures += !check_line("grid determinism across --jobs", ok);
    }

    // Random-sign machinery: enumeration against Monte Carlo.
    {
        const WeightProfile equal10(std::vector<double>(10, 1.0));
        const ExactBeffDistribution exact = exhaustive_beff_distribution(equal10);
        const BaselineEstimate mc = mc_expected_beff(equal10, 20000, 11);
        const bool ok = std::abs(mc.mean_beff - exact.mean) <= 4.0 * mc.std_error;
        failures += !check_line("random-sign Monte Carlo vs enumeration", ok);
    }

    std::cout << (failures == 0 ? "all checks passed" : "some checks FAILED") << '\n';
    return failures == 0 ? 0 : 1;
}

int cmd_report(const std::string& dir) {
    const ExperimentConfig cfg = config_from_manifest_file(dir + "/manifest.json");
    std::vector<RunRecord> runs = load_records_csv(dir + "/records.csv");
    GridResult grid = reaggregate(cfg, std::move(runs));
    grid.config.output_dir = dir;
    emit_reports(grid);
    print_group_table(grid);
    std::cout << "re-aggregated reports in " << dir << '\n';
    return 0;
}

} // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Termwise gradient-cancellation diagnostics for variational circuits"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "Run the full (n, d, variant, seed) grid");
    add_config_flags(run, run_flags);
    run->add_option("--manifest", run_flags.manifest_path,
                    "Reproduce a previous run from its manifest.json");

    CommonFlags cond_flags;
    int cond_n = 4;
    int cond_d = 4;
    std::uint64_t cond_seed = 0;
    std::string matrix_in;
    std::string dump_matrix;
    std::string dump_hamiltonian;
    std::string dump_program;
    std::string dump_state;
    CLI::App* cond = app.add_subcommand("condition", "Run and print a single grid cell");
    add_config_flags(cond, cond_flags);
    cond->get_option("--n")->expected(1);
    cond->get_option("--depth")->expected(1);
    cond->add_option("--seed", cond_seed, "Seed for this cell (default 0)");
    cond->add_option("--matrix-in", matrix_in,
                     "Skip simulation; diagnose a stored matrix dump");
    cond->add_option("--dump-matrix", dump_matrix, "Write the termwise matrix dump");
    cond->add_option("--dump-hamiltonian", dump_hamiltonian, "Write the Hamiltonian terms");
    cond->add_option("--dump-program", dump_program, "Write the gate program");
    cond->add_option("--dump-state", dump_state, "Write the prepared amplitudes");

    std::string weights = "equal:64";
    std::size_t samples = 100000;
    std::uint64_t baseline_seed = 0;
    std::string baseline_out;
    CLI::App* baseline =
        app.add_subcommand("baseline", "Random-sign Monte-Carlo baseline estimates");
    baseline->add_option("--weights", weights, "equal:<m> or list:<w1,w2,...>");
    baseline->add_option("--samples", samples, "Monte-Carlo samples (default 100000)");
    baseline->add_option("--seed", baseline_seed, "Stream seed (default 0)");
    baseline->add_option("--out", baseline_out, "Optional CSV of the reference curve");

    CLI::App* check = app.add_subcommand("check", "Run the invariant suite");

    std::string report_dir = "results";
    CLI::App* report =
        app.add_subcommand("report", "Re-aggregate reports from stored records");
    report->add_option("--out", report_dir, "Directory holding records.csv + manifest.json");

    try {
        app.parse(argc, argv);
        if (run->parsed()) {
            return cmd_run(run, run_flags);
        }
        if (cond->parsed()) {
            const int n = cond_flags.n_list.empty() ? cond_n : cond_flags.n_list.front();
            const int d = cond_flags.d_list.empty() ? cond_d : cond_flags.d_list.front();
            return cmd_condition(cond, cond_flags, n, d, cond_seed, matrix_in, dump_matrix,
                                 dump_hamiltonian, dump_program, dump_state);
        }
        if (baseline->parsed()) {
            return cmd_baseline(weights, samples, baseline_seed, baseline_out);
        }
        if (check->parsed()) {
            return cmd_check();
        }
        if (report->parsed()) {
            return cmd_report(report_dir);
        }
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace bpdi
