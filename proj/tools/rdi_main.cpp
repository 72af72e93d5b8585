// rdi: rate-distortion-information-leakage regions, binning-lemma
// verification and scheme simulation from JSON run configs.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdi/binning.hpp"
#include "rdi/channels.hpp"
#include "rdi/curve.hpp"
#include "rdi/info.hpp"
#include "rdi/rd_solvers.hpp"
#include "rdi/regions.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

std::string now_iso8601() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Single writer for all outputs: temp file in the target directory, then an
// atomic rename.
void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw rdi::UsageError("cannot open output file " + tmp.string());
        os << content;
        if (!os) throw rdi::UsageError("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string curve_csv_string(const rdi::RDICurve& curve) {
    std::ostringstream os;
    rdi::write_curve_csv(curve, os);
    return os.str();
}

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw rdi::UsageError("cannot read config file " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw rdi::UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    return j;
}

rdi::RDSolverConfig solver_from_json(const json& j) {
    rdi::RDSolverConfig cfg;
    if (!j.contains("solver")) return cfg;
    const json& s = j.at("solver");
    cfg.max_iterations = s.value("max_iterations", cfg.max_iterations);
    cfg.convergence_tol = s.value("convergence_tol", cfg.convergence_tol);
    cfg.restarts = s.value("restarts", cfg.restarts);
    cfg.rng_seed = s.value("seed", cfg.rng_seed);
    cfg.equality_tol = s.value("equality_tol", cfg.equality_tol);
    cfg.validate();
    return cfg;
}

rdi::DistortionSpec distortion_from_json(const json& j, int source_size) {
    if (!j.contains("distortion")) throw rdi::UsageError("config needs a distortion block");
    const json& d = j.at("distortion");
    const std::string kind = d.at("kind").get<std::string>();
    if (kind == "hamming") return rdi::DistortionSpec::hamming(source_size);
    if (kind == "log-loss") return rdi::DistortionSpec::log_loss();
    if (kind == "matrix")
        return rdi::DistortionSpec::general(d.at("matrix").get<std::vector<std::vector<double>>>());
    throw rdi::UsageError("unknown distortion kind " + kind);
}

std::vector<double> grid_from_json(const json& g) {
    std::vector<double> out;
    if (g.is_array()) {
        out = g.get<std::vector<double>>();
    } else {
        const double start = g.at("start").get<double>();
        const double stop = g.at("stop").get<double>();
        const int count = g.at("count").get<int>();
        if (count < 2) throw rdi::UsageError("grid count must be >= 2");
        for (int i = 0; i < count; ++i)
            out.push_back(start + (stop - start) * i / (count - 1));
    }
    if (out.empty()) throw rdi::UsageError("grid must be non-empty");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) throw rdi::UsageError("grid must be strictly increasing");
    return out;
}

struct CaseSpec {
    bool corollary = false;
    rdi::CorollaryCase coro{};
    std::string name;
};

CaseSpec parse_case(const std::string& name) {
    using CC = rdi::CorollaryCase;
    static const std::pair<const char*, CC> table[] = {
        {"erased-y-hamming", CC::erased_y_hamming},
        {"logloss-open", CC::logloss_open},
        {"erased-z-hamming", CC::erased_z_hamming},
        {"double-erasure-hamming", CC::double_erasure_hamming},
        {"logloss-closed", CC::logloss_closed},
        {"helper-erased-hamming", CC::helper_erased_hamming},
        {"helper-logloss", CC::helper_logloss},
    };
    for (const auto& [key, val] : table)
        if (name == key) return CaseSpec{true, val, name};
    if (name == "open-markov" || name == "closed" || name == "helper-degraded" ||
        name == "helper-logloss-region")
        return CaseSpec{false, CC::erased_y_hamming, name};
    throw rdi::UsageError("unknown case " + name);
}

rdi::CorollaryParams corollary_params_from_json(const json& p) {
    rdi::CorollaryParams out;
    auto get = [&](const char* key) -> std::optional<double> {
        if (p.contains(key)) return p.at(key).get<double>();
        return std::nullopt;
    };
    out.p_e = get("p_e");
    out.z_bias = get("z_bias");
    out.y_bias = get("y_bias");
    out.p_ey = get("p_ey");
    out.p_ez = get("p_ez");
    out.p_w = get("p_w");
    return out;
}

void require_one_source_form(const json& cfg) {
    int forms = 0;
    forms += cfg.contains("params") ? 1 : 0;
    forms += cfg.contains("source") ? 1 : 0;
    forms += cfg.contains("gaussian") ? 1 : 0;
    if (forms != 1)
        throw rdi::UsageError("config must contain exactly one of params / source / gaussian");
}

rdi::RDIPoint evaluate_case(const json& cfg, const CaseSpec& spec, double d,
                            std::optional<double> r_h, const rdi::RDSolverConfig& solver) {
    if (spec.corollary) {
        if (!cfg.contains("params")) throw rdi::UsageError("corollary cases need a params block");
        return rdi::corollary_region(spec.coro, corollary_params_from_json(cfg.at("params")), d,
                                     r_h);
    }
    if (!cfg.contains("source"))
        throw rdi::UsageError("solver-backed cases need an inline source");
    rdi::JointPMF source = rdi::JointPMF::from_json(cfg.at("source").dump());
    const int nx = source.alphabet_of("X").size();
    if (spec.name == "open-markov")
        return rdi::region_open_markov(source, distortion_from_json(cfg, nx), d, solver);
    if (spec.name == "closed")
        return rdi::region_closed(source, distortion_from_json(cfg, nx), d, solver);
    if (spec.name == "helper-degraded") {
        if (!r_h) throw rdi::UsageError("helper cases need r_h");
        return rdi::region_helper_degraded(source, distortion_from_json(cfg, nx), *r_h, d, solver);
    }
    if (!r_h) throw rdi::UsageError("helper cases need r_h");
    return rdi::region_helper_logloss(source, *r_h, d, solver);
}

json point_to_json(const rdi::RDIPoint& p) {
    json j{{"d", p.d}, {"r", p.r}, {"delta", p.delta}};
    if (p.r_h) j["r_h"] = *p.r_h;
    return j;
}

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
};

json resolve_config(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    if (args.seed_override) cfg["seed"] = *args.seed_override;
    if (args.out_override) cfg["out"] = *args.out_override;
    return cfg;
}

fs::path out_dir(const json& cfg) { return fs::path(cfg.value("out", std::string("."))); }

void emit_report(const json& cfg, const std::string& command, const json& results) {
    json report{{"command", command},
                {"tool_version", kToolVersion},
                {"timestamp", now_iso8601()},
                {"resolved_config", cfg},
                {"results", results}};
    write_file_atomic(out_dir(cfg) / "report.json", report.dump(2) + "\n");
}

rdi::RDICurve make_curve(const json& cfg, const std::string& case_id,
                         std::vector<rdi::RDIPoint> points, bool by_rh) {
    rdi::RDICurve curve;
    curve.meta.case_id = case_id;
    curve.meta.params_json = cfg.contains("params") ? cfg.at("params").dump() : "{}";
    curve.meta.timestamp = now_iso8601();
    curve.meta.tool_version = kToolVersion;
    curve.meta.seed = cfg.value("seed", 0ULL);
    curve.points = std::move(points);
    curve.swept_by_rh = by_rh;
    curve.validate_sorted();
    return curve;
}

// ---------------------------------------------------------------- commands

int cmd_region(const CommonArgs& args) {
    json cfg = resolve_config(args);
    require_one_source_form(cfg);
    const CaseSpec spec = parse_case(cfg.at("case").get<std::string>());
    const rdi::RDSolverConfig solver = solver_from_json(cfg);
    const double d = cfg.at("d").get<double>();
    std::optional<double> r_h;
    if (cfg.contains("r_h")) r_h = cfg.at("r_h").get<double>();

    rdi::RDIPoint p = evaluate_case(cfg, spec, d, r_h, solver);
    rdi::RDICurve curve = make_curve(cfg, spec.name, {p}, false);
    write_file_atomic(out_dir(cfg) / "curve.csv", curve_csv_string(curve));
    emit_report(cfg, "region", point_to_json(p));
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args) {
    json cfg = resolve_config(args);
    require_one_source_form(cfg);
    const CaseSpec spec = parse_case(cfg.at("case").get<std::string>());
    const rdi::RDSolverConfig solver = solver_from_json(cfg);
    std::optional<double> r_h;
    if (cfg.contains("r_h")) r_h = cfg.at("r_h").get<double>();

    // Grid points are independent pure evaluations; fan them out.
    std::vector<rdi::RDIPoint> points;
    bool by_rh = false;
    std::vector<std::future<rdi::RDIPoint>> futures;
    if (cfg.contains("rh_grid")) {
        by_rh = true;
        const double d = cfg.at("d").get<double>();
        for (double rh : grid_from_json(cfg.at("rh_grid")))
            futures.push_back(std::async(std::launch::async, [&, d, rh] {
                return evaluate_case(cfg, spec, d, rh, solver);
            }));
    } else {
        for (double d : grid_from_json(cfg.at("d_grid")))
            futures.push_back(std::async(std::launch::async, [&, d] {
                return evaluate_case(cfg, spec, d, r_h, solver);
            }));
    }
    points.reserve(futures.size());
    for (auto& f : futures) points.push_back(f.get());
    rdi::RDICurve curve = make_curve(cfg, spec.name, std::move(points), by_rh);
    write_file_atomic(out_dir(cfg) / "curve.csv", curve_csv_string(curve));
    write_file_atomic(out_dir(cfg) / "curve.json", curve.to_json() + "\n");
    json pts = json::array();
    for (const auto& p : curve.points) pts.push_back(point_to_json(p));
    emit_report(cfg, "sweep", pts);
    return kExitOk;
}

int cmd_gaussian(const CommonArgs& args) {
    json cfg = resolve_config(args);
    require_one_source_form(cfg);
    const json& g = cfg.at("gaussian");
    rdi::GaussianChainParams params;
    const std::string ordering = g.at("ordering").get<std::string>();
    if (ordering == "w-z-x-y")
        params.ordering = rdi::GaussianChainParams::Ordering::w_z_x_y;
    else if (ordering == "x-z-w-y")
        params.ordering = rdi::GaussianChainParams::Ordering::x_z_w_y;
    else
        throw rdi::UsageError("gaussian ordering must be w-z-x-y or x-z-w-y");
    params.var_head = g.value("var_head", 1.0);
    params.var_a = g.value("var_a", 1.0);
    params.var_b = g.value("var_b", 1.0);
    params.var_c = g.value("var_c", 1.0);

    std::vector<rdi::RDIPoint> points;
    json extras = json::array();
    const double r_h = cfg.at("r_h").get<double>();
    std::vector<double> ds = cfg.contains("d_grid") ? grid_from_json(cfg.at("d_grid"))
                                                    : std::vector<double>{cfg.at("d").get<double>()};
    for (double d : ds) {
        rdi::GaussianRegion reg = rdi::gaussian_region(params, r_h, d);
        points.push_back(reg.point);
        json e = point_to_json(reg.point);
        e["rate_saturated"] = reg.rate_saturated;
        e["delta_at_floor"] = reg.delta_at_floor;
        extras.push_back(e);
    }
    rdi::RDICurve curve = make_curve(cfg, "gaussian-" + ordering, std::move(points), false);
    write_file_atomic(out_dir(cfg) / "curve.csv", curve_csv_string(curve));
    emit_report(cfg, "gaussian", extras);
    return kExitOk;
}

rdi::AuxChannelSet aux_from_json(const json& sim, const rdi::JointPMF& source) {
    rdi::AuxChannelSet aux{
        rdi::ConditionalPMF({}, {rdi::Axis{"tmp", rdi::Alphabet(1)}}, {1.0}), {}, {}};
    if (sim.contains("aux") && sim.at("aux").contains("uv")) {
        aux.uv = rdi::ConditionalPMF::from_json(sim.at("aux").at("uv").dump());
    } else if (sim.contains("v_bsc")) {
        rdi::ConditionalPMF v = rdi::lift_channel(
            rdi::make_bsc(sim.at("v_bsc").get<double>(), "X", "V"),
            {rdi::Axis{"Y", source.alphabet_of("Y")}});
        rdi::ConditionalPMF u = rdi::make_constant_channel(v.given_axes(), "U");
        aux.uv = rdi::product_channel(u, v);
    } else {
        throw rdi::UsageError("simulate needs aux.uv or v_bsc");
    }
    if (sim.contains("reconstruction")) {
        const json& r = sim.at("reconstruction");
        rdi::Reconstruction rec;
        rec.inputs = r.at("inputs").get<std::vector<std::string>>();
        rec.table = r.at("table").get<std::vector<int>>();
        rec.xhat_size = r.at("xhat_size").get<int>();
        aux.reconstruction = rec;
    }
    return aux;
}

int cmd_simulate(const CommonArgs& args) {
    json cfg = resolve_config(args);
    if (!cfg.contains("seed")) throw rdi::UsageError("simulate requires a seed");
    const json& sim = cfg.at("simulate");
    rdi::JointPMF source = rdi::JointPMF::from_json(sim.at("source").dump());
    rdi::SchemeConfig sc;
    sc.n = sim.value("n", 4);
    sc.epsilon = sim.value("epsilon", 0.15);
    sc.trials = sim.value("trials", 100000ULL);
    sc.seed = cfg.at("seed").get<std::uint64_t>();
    rdi::AuxChannelSet aux = aux_from_json(sim, source);
    rdi::DistortionSpec dist =
        distortion_from_json(sim.contains("distortion") ? sim : cfg,
                             source.alphabet_of("X").size());

    rdi::SchemeSimResult res = rdi::simulate_scheme_open(source, aux, dist, sc);
    const json rj = json::parse(res.report.to_json());
    std::ostringstream csv;
    csv << "metric,value\n";
    for (const auto& [key, value] : rj.items())
        if (value.is_number())
            csv << key << ',' << rdi::format_sig(value.get<double>()) << '\n';
    write_file_atomic(out_dir(cfg) / "sim_metrics.csv", csv.str());
    emit_report(cfg, "simulate", rj);
    return kExitOk;
}

int cmd_verify_lemma(const CommonArgs& args) {
    json cfg = resolve_config(args);
    if (!cfg.contains("seed")) throw rdi::UsageError("verify-lemma requires a seed");
    const json& lm = cfg.at("lemma");
    const std::string which = lm.at("which").get<std::string>();
    const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();

    auto joint_from = [&](const json& block) {
        if (block.contains("source")) return rdi::JointPMF::from_json(block.at("source").dump());
        if (block.contains("bsc")) {
            rdi::JointPMF y = rdi::JointPMF::marginal_source("Y", rdi::Alphabet(2), {0.5, 0.5});
            return rdi::extend(y, rdi::make_bsc(block.at("bsc").get<double>(), "Y", "W"));
        }
        throw rdi::UsageError("lemma block needs source or bsc");
    };

    std::ostringstream csv;
    json results = json::array();
    if (which == "appendix-c") {
        rdi::JointPMF joint = joint_from(lm);
        const int n = lm.value("n", 8);
        csv << "r_k,entropy_bits,bound_bits,slack_per_symbol\n";
        for (double rk : grid_from_json(lm.at("r_k_grid"))) {
            rdi::BinningExperiment exp{n, rk, seed, joint};
            rdi::BinningEntropyReport rep = rdi::exact_binning_entropy(exp);
            csv << rdi::format_sig(rk) << ',' << rdi::format_sig(rep.entropy_bits) << ','
                << rdi::format_sig(rep.bound_bits) << ','
                << rdi::format_sig(rep.slack_per_symbol) << '\n';
            results.push_back(json::parse(rep.to_json()));
        }
    } else if (which == "appendix-f") {
        rdi::JointPMF joint = joint_from(lm);
        const int n = lm.value("n", 8);
        csv << "r_k,entropy_bits,bound_bits,slack_per_symbol\n";
        for (double rk : grid_from_json(lm.at("r_k_grid"))) {
            rdi::CodewordBinningConfig cc{n, lm.at("r_codebook").get<double>(), rk,
                                          lm.value("epsilon", 0.15), seed, joint};
            rdi::CodewordBinningReport rep = rdi::codeword_binning_entropy(cc);
            csv << rdi::format_sig(rk) << ',' << rdi::format_sig(rep.entropy_bits) << ','
                << rdi::format_sig(rep.bound_bits) << ','
                << rdi::format_sig(rep.slack_per_symbol) << '\n';
            results.push_back(json::parse(rep.to_json()));
        }
    } else {
        throw rdi::UsageError("lemma.which must be appendix-c or appendix-f");
    }
    write_file_atomic(out_dir(cfg) / "lemma.csv", csv.str());
    emit_report(cfg, "verify-lemma", results);
    return kExitOk;
}

int cmd_reproduce(const CommonArgs& args) {
    json cfg = resolve_config(args);
    const std::string figure = cfg.at("figure").get<std::string>();
    const fs::path dir = out_dir(cfg);

    auto sweep_corollary = [&](rdi::CorollaryCase c, const rdi::CorollaryParams& p,
                               const std::string& file, const char* case_id) {
        std::vector<rdi::RDIPoint> points;
        for (int i = 0; i <= 100; ++i)
            points.push_back(rdi::corollary_region(c, p, 0.5 * i / 100.0));
        rdi::RDICurve curve = make_curve(cfg, case_id, std::move(points), false);
        write_file_atomic(dir / file, curve_csv_string(curve));
    };

    std::vector<std::string> files;
    if (figure == "fig3") {
        rdi::CorollaryParams p;
        p.p_e = 0.8;
        p.z_bias = 0.5;
        sweep_corollary(rdi::CorollaryCase::erased_y_hamming, p, "fig3_erased_y_hamming.csv",
                        "erased-y-hamming");
        sweep_corollary(rdi::CorollaryCase::logloss_open, p, "fig3_logloss_open.csv",
                        "logloss-open");
        files = {"fig3_erased_y_hamming.csv", "fig3_logloss_open.csv"};
    } else if (figure == "fig4") {
        rdi::CorollaryParams p3;
        p3.p_e = 0.8;
        p3.y_bias = 0.9;
        sweep_corollary(rdi::CorollaryCase::erased_z_hamming, p3, "fig4_erased_z_hamming.csv",
                        "erased-z-hamming");
        rdi::CorollaryParams p45;
        p45.p_ey = 0.9;
        p45.p_ez = 0.8;
        sweep_corollary(rdi::CorollaryCase::double_erasure_hamming, p45,
                        "fig4_double_erasure_hamming.csv", "double-erasure-hamming");
        sweep_corollary(rdi::CorollaryCase::logloss_closed, p45, "fig4_logloss_closed.csv",
                        "logloss-closed");
        files = {"fig4_erased_z_hamming.csv", "fig4_double_erasure_hamming.csv",
                 "fig4_logloss_closed.csv"};
    } else {
        throw rdi::UsageError("figure must be fig3 or fig4");
    }

    std::ostringstream plot;
    plot << "#!/usr/bin/env python3\n"
         << "# Renders the leakage/distortion tradeoff curves emitted next to this script.\n"
         << "import csv\n"
         << "import matplotlib.pyplot as plt\n\n"
         << "files = " << json(files).dump() << "\n"
         << "for name in files:\n"
         << "    with open(name) as fh:\n"
         << "        rows = list(csv.DictReader(fh))\n"
         << "    d = [float(r['D']) for r in rows]\n"
         << "    delta = [float(r['Delta']) for r in rows]\n"
         << "    plt.plot(d, delta, marker='.', label=name.rsplit('.', 1)[0])\n"
         << "plt.xlabel('D')\n"
         << "plt.ylabel('Delta')\n"
         << "plt.legend()\n"
         << "plt.savefig('" << figure << ".png', dpi=150)\n";
    write_file_atomic(dir / ("plot_" + figure + ".py"), plot.str());
    emit_report(cfg, "reproduce", json{{"figure", figure}, {"files", files}});
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate-distortion-information-leakage region toolkit"};
    app.require_subcommand(1);

    CommonArgs args;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "JSON run configuration")->required();
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { args.seed_override = v; },
            "override the config seed");
        sub->add_option_function<std::string>(
            "--out", [&](const std::string& v) { args.out_override = v; },
            "override the output directory");
    };

    CLI::App* region = app.add_subcommand("region", "evaluate one region point");
    CLI::App* sweep = app.add_subcommand("sweep", "sweep a region over a grid");
    CLI::App* simulate = app.add_subcommand("simulate", "run the binning scheme simulator");
    CLI::App* verify = app.add_subcommand("verify-lemma", "exact binning lemma verification");
    CLI::App* gaussian = app.add_subcommand("gaussian", "quadratic Gaussian closed forms");
    CLI::App* reproduce = app.add_subcommand("reproduce", "emit the reference figure curves");
    for (CLI::App* sub : {region, sweep, simulate, verify, gaussian, reproduce}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (region->parsed()) return cmd_region(args);
        if (sweep->parsed()) return cmd_sweep(args);
        if (simulate->parsed()) return cmd_simulate(args);
        if (verify->parsed()) return cmd_verify_lemma(args);
        if (gaussian->parsed()) return cmd_gaussian(args);
        if (reproduce->parsed()) return cmd_reproduce(args);
    } catch (const rdi::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << " (D_min = " << e.d_min << ")\n";
        return kExitInfeasible;
    } catch (const rdi::UsageError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitValidation;
    } catch (const rdi::PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return kExitValidation;
    } catch (const rdi::CapacityError& e) {
        std::cerr << "capacity exceeded: " << e.what() << "\n";
        return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
