#include "bpdi/harness.hpp"

#include "bpdi/randsign.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

namespace bpdi {

namespace {

using nlohmann::json;

// Shortest round-trip decimal form, so report bytes are stable across runs.
std::string fmt(double v) {
    char buf[32];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return os;
}

const GroupSummary* find_summary(const GridResult& grid, const GroupKey& key) {
    for (const GroupSummary& s : grid.summaries) {
        if (s.key == key) {
            return &s;
        }
    }
    return nullptr;
}

void write_summary_csv(const GridResult& grid, const std::filesystem::path& dir) {
    std::ofstream os = open_out(dir / "summary.csv");
    os << "n,d,R_hea,R_hva,Neff_hea,Neff_hva,Beff_hea,Beff_hva,delta_Beff\n";
    for (int n : grid.config.n_list) {
        for (int d : grid.config.d_list) {
            const GroupSummary* hea =
                find_summary(grid, {grid.config.model, n, d, AnsatzVariant::HEA});
            const GroupSummary* hva =
                find_summary(grid, {grid.config.model, n, d, AnsatzVariant::HVA});
            os << n << ',' << d << ',';
            os << (hea ? fmt(hea->mean_r) : "") << ',' << (hva ? fmt(hva->mean_r) : "") << ',';
            os << (hea ? fmt(hea->mean_neff) : "") << ',' << (hva ? fmt(hva->mean_neff) : "")
               << ',';
            os << (hea ? fmt(hea->mean_beff) : "") << ',' << (hva ? fmt(hva->mean_beff) : "")
               << ',';
            os << (hea && hva ? fmt(hva->mean_beff - hea->mean_beff) : "") << '\n';
        }
    }
}

void write_variance_scaling_csv(const GridResult& grid, const std::filesystem::path& dir) {
    std::ofstream os = open_out(dir / "variance_scaling.csv");
    os << "model,n,d,variant,grad_variance,grad_second_moment,n_seeds\n";
    for (const GroupSummary& s : grid.summaries) {
        os << model_name(s.key.model) << ',' << s.key.n << ',' << s.key.d << ','
           << variant_name(s.key.variant) << ',' << fmt(s.grad_variance) << ','
           << fmt(s.grad_second_moment) << ',' << s.n_seeds << '\n';
    }
}

void write_rk_vs_neff_csv(const GridResult& grid, const std::filesystem::path& dir) {
    std::ofstream os = open_out(dir / "rk_vs_neff.csv");
    os << "series,model,n,d,variant,seed,k,neff,inv_sqrt_neff,r,baseline_exceeds_one\n";
    double max_neff = 1.0;
    for (const RunRecord& run : grid.runs) {
        for (const DiagnosticsRecord& rec : run.diagnostics) {
            if (!rec.valid) {
                continue;
            }
            max_neff = std::max(max_neff, rec.n_eff);
            os << "point," << model_name(run.key.model) << ',' << run.key.n << ','
               << run.key.d << ',' << variant_name(run.key.variant) << ',' << run.key.seed
               << ',' << rec.param_index << ',' << fmt(rec.n_eff) << ','
               << fmt(1.0 / std::sqrt(rec.n_eff)) << ',' << fmt(rec.r) << ",\n";
        }
    }
    // Reference curve sqrt(2/pi)/sqrt(n_eff), left unclamped; the flag marks
    // where it exceeds the R <= 1 ceiling.
    const int samples = 200;
    for (int i = 0; i <= samples; ++i) {
        const double n_eff =
            1.0 + (max_neff - 1.0) * static_cast<double>(i) / static_cast<double>(samples);
        const double r = baseline_rk(n_eff);
        os << "baseline,,,,,,," << fmt(n_eff) << ',' << fmt(1.0 / std::sqrt(n_eff)) << ','
           << fmt(r) << ',' << (r > 1.0 ? 1 : 0) << '\n';
    }
}

void write_variance_bridge_csv(const GridResult& grid, const std::filesystem::path& dir) {
    std::ofstream os = open_out(dir / "variance_bridge.csv");
    os << "model,n,d,variant,e_b2q,e_b2_times_e_q,factorization_ratio,corr_b2_q,"
          "corr_degenerate,n_records\n";
    for (const GroupSummary& s : grid.summaries) {
        os << model_name(s.key.model) << ',' << s.key.n << ',' << s.key.d << ','
           << variant_name(s.key.variant) << ',' << fmt(s.e_b2q) << ','
           << fmt(s.e_b2_times_e_q) << ',' << fmt(s.factorization_ratio) << ','
           << fmt(s.corr_b2_q) << ',' << (s.corr_degenerate ? 1 : 0) << ',' << s.n_records
           << '\n';
    }
}

void write_bootstrap_csv(const GridResult& grid, const std::filesystem::path& dir) {
    std::ofstream os = open_out(dir / "bootstrap.csv");
    os << "model,n,d,delta_beff_mean,ci_low,ci_high,n_resamples,excludes_zero\n";
    for (const ConditionBootstrap& cb : grid.bootstraps) {
        os << model_name(grid.config.model) << ',' << cb.n << ',' << cb.d << ','
           << fmt(cb.result.delta_beff_mean) << ',' << fmt(cb.result.ci_low) << ','
           << fmt(cb.result.ci_high) << ',' << cb.result.n_resamples << ','
           << (cb.result.excludes_zero ? 1 : 0) << '\n';
    }
}

void write_records_csv(const GridResult& grid, const std::filesystem::path& dir) {
    std::ofstream os = open_out(dir / "records.csv");
    os << "n,d,variant,model,seed,k,R,Neff,Beff,Q,g,valid\n";
    for (const RunRecord& run : grid.runs) {
        for (const DiagnosticsRecord& rec : run.diagnostics) {
            os << run.key.n << ',' << run.key.d << ',' << variant_name(run.key.variant) << ','
               << model_name(run.key.model) << ',' << run.key.seed << ',' << rec.param_index
               << ',';
            if (rec.valid) {
                os << fmt(rec.r) << ',' << fmt(rec.n_eff) << ',' << fmt(rec.b_eff);
            } else {
                os << ",,";
            }
            os << ',' << fmt(rec.q) << ',' << fmt(rec.g) << ',' << (rec.valid ? 1 : 0) << '\n';
        }
    }
}

} // namespace

std::string manifest_json(const ExperimentConfig& cfg) {
    json j;
    j["generator"] = "bpdi";
    j["version"] = kVersion;
    j["config"]["model"] = model_name(cfg.model);
    j["config"]["n_list"] = cfg.n_list;
    j["config"]["d_list"] = cfg.d_list;
    std::vector<std::string> variants;
    for (AnsatzVariant v : cfg.variants) {
        variants.emplace_back(variant_name(v));
    }
    j["config"]["variants"] = variants;
    j["config"]["h"] = cfg.h;
    j["config"]["hx"] = cfg.hx;
    j["config"]["hz"] = cfg.hz;
    j["config"]["seeds"] = cfg.seeds;
    j["config"]["init"] = init_name(cfg.init);
    j["config"]["fd_epsilon"] = cfg.fd_epsilon;
    j["config"]["hea_entangler"] = entangler_name(cfg.hea_entangler);
    j["config"]["bootstrap_resamples"] = cfg.bootstrap_resamples;
    j["config"]["output_dir"] = cfg.output_dir;
    j["config"]["jobs"] = cfg.jobs;
    return j.dump(2) + "\n";
}

namespace {

ModelKind parse_model(const std::string& s) {
    if (s == "tfim") {
        return ModelKind::TFIM;
    }
    if (s == "lfim") {
        return ModelKind::LFIM;
    }
    throw std::invalid_argument("unknown model '" + s + "' (expected tfim or lfim)");
}

AnsatzVariant parse_variant(const std::string& s) {
    if (s == "hea") {
        return AnsatzVariant::HEA;
    }
    if (s == "hva") {
        return AnsatzVariant::HVA;
    }
    throw std::invalid_argument("unknown variant '" + s + "' (expected hea or hva)");
}

InitDistribution parse_init(const std::string& s) {
    if (s == "uniform_0_2pi") {
        return InitDistribution::Uniform0To2Pi;
    }
    if (s == "uniform_pm_pi") {
        return InitDistribution::UniformPmPi;
    }
    throw std::invalid_argument("unknown init distribution '" + s + "'");
}

HeaEntangler parse_entangler(const std::string& s) {
    if (s == "ring") {
        return HeaEntangler::Ring;
    }
    if (s == "line") {
        return HeaEntangler::Line;
    }
    throw std::invalid_argument("unknown entangler '" + s + "' (expected ring or line)");
}

} // namespace

ExperimentConfig config_from_manifest_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot read manifest " + path);
    }
    const json j = json::parse(is);
    const json& c = j.at("config");
    ExperimentConfig cfg;
    cfg.model = parse_model(c.at("model").get<std::string>());
    cfg.n_list = c.at("n_list").get<std::vector<int>>();
    cfg.d_list = c.at("d_list").get<std::vector<int>>();
    cfg.variants.clear();
    for (const auto& v : c.at("variants")) {
        cfg.variants.push_back(parse_variant(v.get<std::string>()));
    }
    cfg.h = c.at("h").get<double>();
    cfg.hx = c.at("hx").get<double>();
    cfg.hz = c.at("hz").get<double>();
    cfg.seeds = c.at("seeds").get<std::vector<std::uint64_t>>();
    cfg.init = parse_init(c.at("init").get<std::string>());
    cfg.fd_epsilon = c.at("fd_epsilon").get<double>();
    cfg.hea_entangler = parse_entangler(c.at("hea_entangler").get<std::string>());
    cfg.bootstrap_resamples = c.at("bootstrap_resamples").get<int>();
    cfg.output_dir = c.at("output_dir").get<std::string>();
    cfg.jobs = c.at("jobs").get<int>();
    return cfg;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<int> parse_int_list(const std::string& value) {
    std::vector<int> out;
    for (const std::string& tok : split(value, ',')) {
        out.push_back(std::stoi(tok));
    }
    return out;
}

} // namespace

ExperimentConfig config_from_key_value_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot read config " + path);
    }
    ExperimentConfig cfg = ExperimentConfig::defaults();
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "model") {
            cfg.model = parse_model(value);
        } else if (key == "n_list") {
            cfg.n_list = parse_int_list(value);
        } else if (key == "d_list") {
            cfg.d_list = parse_int_list(value);
        } else if (key == "variants") {
            cfg.variants.clear();
            for (const std::string& tok : split(value, ',')) {
                cfg.variants.push_back(parse_variant(tok));
            }
        } else if (key == "h") {
            cfg.h = std::stod(value);
        } else if (key == "hx") {
            cfg.hx = std::stod(value);
        } else if (key == "hz") {
            cfg.hz = std::stod(value);
        } else if (key == "seeds") {
            cfg.seeds.clear();
            for (const std::string& tok : split(value, ',')) {
                cfg.seeds.push_back(std::stoull(tok));
            }
            if (cfg.seeds.size() == 1) {
                const std::uint64_t count = cfg.seeds[0];
                cfg.seeds.clear();
                for (std::uint64_t i = 0; i < count; ++i) {
                    cfg.seeds.push_back(i);
                }
            }
        } else if (key == "init") {
            cfg.init = parse_init(value);
        } else if (key == "fd_epsilon") {
            cfg.fd_epsilon = std::stod(value);
        } else if (key == "hea_entangler") {
            cfg.hea_entangler = parse_entangler(value);
        } else if (key == "bootstrap_resamples") {
            cfg.bootstrap_resamples = std::stoi(value);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "jobs") {
            cfg.jobs = std::stoi(value);
        } else {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

void emit_reports(const GridResult& grid) {
    const std::filesystem::path dir(grid.config.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir.string());
    }
    write_summary_csv(grid, dir);
    write_variance_scaling_csv(grid, dir);
    write_rk_vs_neff_csv(grid, dir);
    write_variance_bridge_csv(grid, dir);
    write_bootstrap_csv(grid, dir);
    write_records_csv(grid, dir);
    open_out(dir / "manifest.json") << manifest_json(grid.config);
}

std::vector<RunRecord> load_records_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot read records " + path);
    }
    std::string line;
    if (!std::getline(is, line) ||
        line != "n,d,variant,model,seed,k,R,Neff,Beff,Q,g,valid") {
        throw std::invalid_argument("records csv: unexpected header");
    }

    // Preserve first-appearance order of runs; the key identifies a run.
    std::vector<RunRecord> runs;
    std::map<std::tuple<int, int, int, int, std::uint64_t>, std::size_t> index;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> cells = split(line, ',');
        if (cells.size() != 12) {
            throw std::invalid_argument("records csv: malformed line " +
                                        std::to_string(line_no));
        }
        RunKey key;
        key.n = std::stoi(cells[0]);
        key.d = std::stoi(cells[1]);
        key.variant = parse_variant(cells[2]);
        key.model = parse_model(cells[3]);
        key.seed = std::stoull(cells[4]);

        DiagnosticsRecord rec;
        rec.param_index = std::stoi(cells[5]);
        rec.valid = cells[11] == "1";
        if (rec.valid) {
            rec.r = std::stod(cells[6]);
            rec.n_eff = std::stod(cells[7]);
            rec.b_eff = std::stod(cells[8]);
        }
        rec.q = std::stod(cells[9]);
        rec.g = std::stod(cells[10]);

        const auto map_key = std::make_tuple(key.n, key.d, static_cast<int>(key.variant),
                                             static_cast<int>(key.model), key.seed);
        auto it = index.find(map_key);
        if (it == index.end()) {
            it = index.emplace(map_key, runs.size()).first;
            runs.push_back(RunRecord{key, {}, {}, {}});
        }
        runs[it->second].diagnostics.push_back(rec);
    }
    return runs;
}

} // namespace bpdi
