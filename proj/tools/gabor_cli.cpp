#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gabor/asymptotics.hpp"
#include "gabor/config.hpp"
#include "gabor/errors.hpp"
#include "gabor/frame.hpp"
#include "gabor/growth.hpp"
#include "gabor/io.hpp"
#include "gabor/parallel.hpp"
#include "gabor/stft.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gabor;

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    unsigned threads = 0;
    std::uint64_t seed = 1;
    bool force = false;
};

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitInconclusive = 10;
constexpr int kExitRejected = 11;

ExperimentConfig load_config(const GlobalArgs& g, const std::string& command) {
    ExperimentConfig cfg = parse_config_text(io::read_text(g.config_path), command);
    if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
    return cfg;
}

QuadratureSpec point_quad(const ExperimentConfig& cfg) {
    QuadratureSpec q = QuadratureSpec::for_window(*cfg.window, cfg.tolerances.tail_tol);
    return q;
}

QuadratureSpec grid_quad(const ExperimentConfig& cfg) {
    QuadratureSpec q = point_quad(cfg);
    q.max_halvings = cfg.tolerances.grid_max_halvings;
    return q;
}

json lattice_json(const Lattice& lat) {
    json j;
    j["alpha"] = lat.alpha;
    j["beta"] = lat.beta;
    j["k_range"] = {lat.k_min, lat.k_max};
    j["n_range"] = {lat.n_min, lat.n_max};
    return j;
}

json bounds_json(const FrameBounds& b) {
    json j;
    j["A"] = b.A;
    j["B"] = b.B;
    j["method"] = b.method;
    j["truncation"] = lattice_json(b.truncation);
    return j;
}

void write_json(const fs::path& path, const json& j) {
    io::atomic_write_text(path, j.dump(2) + "\n");
}

std::string dual_csv(const DualWindow& d) {
    std::string out = "t,gamma_re,gamma_im\n";
    for (std::size_t i = 0; i < d.gamma.size(); ++i) {
        out += io::format17(d.t0 + d.step * static_cast<double>(i));
        out += ',';
        out += io::format17(d.gamma[i]);
        out += ",0\n";
    }
    return out;
}

DualWindow load_dual(const GridRef& ref) {
    auto rows3 = io::read_text(ref.csv);
    DualWindow d;
    // CSV: t,gamma_re,gamma_im with one header line
    std::vector<double> ts, re;
    std::size_t line_no = 0, start = 0;
    while (start < rows3.size()) {
        std::size_t end = rows3.find('\n', start);
        if (end == std::string::npos) end = rows3.size();
        std::string line = rows3.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line_no == 1 || line.empty()) continue;
        double t, gr, gi;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &gr, &gi) != 3)
            throw ConfigError("dual CSV line " + std::to_string(line_no) + ": expected t,re,im");
        ts.push_back(t);
        re.push_back(gr);
    }
    if (ts.size() < 4) throw ConfigError("dual CSV: too few samples");
    json meta = json::parse(io::read_text(ref.sidecar));
    d.base_name = "loaded";
    d.alpha = meta.at("alpha").get<double>();
    d.beta = meta.at("beta").get<double>();
    d.t0 = ts.front();
    d.step = ts[1] - ts[0];
    d.gamma = std::move(re);
    d.residual = meta.value("residual", 0.0);
    d.iterations = meta.value("iterations", 0);
    if (meta.contains("bounds")) {
        d.bounds.A = meta.at("bounds").value("A", 0.0);
        d.bounds.B = meta.at("bounds").value("B", 0.0);
    }
    return d;
}

json report_json(const AsymptoticReport& rep) {
    json j;
    j["verdict"] = to_string(rep.verdict);
    j["C"] = {{"re", rep.C.real()}, {"im", rep.C.imag()}};
    j["b"] = rep.b;
    j["tau"] = rep.tau;
    j["theorem"] = rep.theorem;
    json an = json::array();
    for (const auto& [n, e] : rep.a_n) {
        json entry;
        entry["n"] = n;
        entry["re"] = e.a.real();
        entry["im"] = e.a.imag();
        entry["residual"] = e.residual;
        entry["converged"] = e.converged;
        an.push_back(entry);
    }
    j["a_n"] = an;
    json diag;
    diag["route_agreement"] = rep.route.agreement;
    diag["route_ran"] = rep.route.ran;
    diag["net_converged"] = rep.route.net_converged;
    diag["solve_residual"] = rep.solve_residual;
    diag["max_extrapolation_residual"] = rep.max_extrapolation_residual;
    if (rep.route.limit_match_rel_err >= 0.0)
        diag["limit_match_rel_err"] = rep.route.limit_match_rel_err;
    for (const auto& [k, v] : rep.diagnostics) diag[k] = v;
    j["diagnostics"] = diag;
    if (!rep.reason.empty()) j["reason"] = rep.reason;
    return j;
}

std::string trajectories_csv(const AsymptoticReport& rep) {
    std::string out = "x,n,re,im\n";
    for (std::size_t j = 0; j < rep.xs.size(); ++j)
        for (std::size_t ni = 0; ni < rep.ns.size(); ++ni) {
            if (j >= rep.trajectories.size()) break;
            const cplx& v = rep.trajectories[j][ni];
            out += io::format17(rep.xs[j]);
            out += ',';
            out += std::to_string(rep.ns[ni]);
            out += ',';
            out += io::format17(v.real());
            out += ',';
            out += io::format17(v.imag());
            out += '\n';
        }
    return out;
}

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::SAsymptotic: return kExitOk;
        case Verdict::Inconclusive: return kExitInconclusive;
        case Verdict::Rejected: return kExitRejected;
    }
    return kExitInconclusive;
}

// --- commands ---------------------------------------------------------------

int cmd_stft(const GlobalArgs& g) {
    ExperimentConfig cfg = load_config(g, "stft");
    CoefficientGrid grid = gabor_coefficients(*cfg.signal, *cfg.window, *cfg.lattice,
                                              grid_quad(cfg));
    fs::path out(cfg.output_dir);
    io::write_grid_csv(out / "coefficients.csv", grid);
    io::write_grid_sidecar(out / "coefficients.json", grid);
    std::cout << "wrote " << (out / "coefficients.csv").string() << " ("
              << grid.lattice.k_count() << "x" << grid.lattice.n_count() << " nodes)\n";
    return kExitOk;
}

int cmd_dual(const GlobalArgs& g) {
    ExperimentConfig cfg = load_config(g, "dual");
    const Window& psi = *cfg.window;
    const Lattice& lat = *cfg.lattice;
    auto validation = validate_lattice(psi, lat);
    if (!validation.usable() && !g.force)
        throw PreconditionError("dual: " + validation.reason + " (use --force to demonstrate)");

    QuadratureSpec q = grid_quad(cfg);
    FrameBounds bounds = estimate_frame_bounds(psi, lat, 32, q, g.seed, g.force);
    fs::path out(cfg.output_dir);
    try {
        DualWindow dual = compute_dual_window(psi, lat, bounds, cfg.tolerances.dual_tol,
                                              cfg.tolerances.max_iterations, g.force);
        io::atomic_write_text(out / "dual.csv", dual_csv(dual));
        json meta;
        meta["alpha"] = dual.alpha;
        meta["beta"] = dual.beta;
        meta["residual"] = dual.residual;
        meta["iterations"] = dual.iterations;
        meta["bounds"] = {{"A", bounds.A}, {"B", bounds.B}};
        write_json(out / "dual.json", meta);
        std::cout << "dual converged in " << dual.iterations
                  << " iterations, residual " << dual.residual << "\n";
        return kExitOk;
    } catch (const NumericError& e) {
        json meta;
        meta["error"] = e.what();
        meta["bounds"] = {{"A", bounds.A}, {"B", bounds.B}};
        meta["residual_history"] = e.residual_history;
        write_json(out / "dual.json", meta);
        std::cerr << "dual: " << e.what() << "\n";
        return kExitNumeric;
    }
}

int cmd_frame_bounds(const GlobalArgs& g) {
    ExperimentConfig cfg = load_config(g, "frame-bounds");
    FrameBounds b = estimate_frame_bounds(*cfg.window, *cfg.lattice, cfg.probes,
                                          grid_quad(cfg), g.seed, g.force);
    write_json(fs::path(cfg.output_dir) / "bounds.json", bounds_json(b));
    std::cout << "A=" << b.A << " B=" << b.B << "\n";
    return kExitOk;
}

int cmd_reconstruct(const GlobalArgs& g) {
    ExperimentConfig cfg = load_config(g, "reconstruct");
    const Window& psi = *cfg.window;
    const Lattice& lat = *cfg.lattice;
    QuadratureSpec q = grid_quad(cfg);

    DualWindow dual;
    if (cfg.dual_ref) {
        dual = load_dual(*cfg.dual_ref);
        if (dual.alpha != lat.alpha || dual.beta != lat.beta)
            throw ConfigError("reconstruct: loaded dual has mismatched lattice parameters");
    } else {
        auto validation = validate_lattice(psi, lat);
        if (!validation.usable() && !g.force)
            throw PreconditionError("reconstruct: " + validation.reason);
        FrameBounds bounds = estimate_frame_bounds(psi, lat, 32, q, g.seed, g.force);
        dual = compute_dual_window(psi, lat, bounds, cfg.tolerances.dual_tol,
                                   cfg.tolerances.max_iterations, g.force);
    }

    EvalPointsSpec spec = cfg.eval_points.value_or(EvalPointsSpec{});
    auto pts = spec.points();
    ReconstructionResult res = reconstruct(*cfg.signal, psi, dual, lat, pts, q);

    std::string csv = "t,f_re,f_im,recon_re,recon_im\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        csv += io::format17(pts[i]);
        csv += ',';
        csv += io::format17(res.direct[i].real());
        csv += ',';
        csv += io::format17(res.direct[i].imag());
        csv += ',';
        csv += io::format17(res.values[i].real());
        csv += ',';
        csv += io::format17(res.values[i].imag());
        csv += '\n';
    }
    fs::path out(cfg.output_dir);
    io::atomic_write_text(out / "reconstruction.csv", csv);
    json j;
    j["relative_sup_error"] = res.relative_sup_error;
    j["tail_sup"] = res.tail_sup;
    j["dual_residual"] = dual.residual;
    write_json(out / "reconstruction.json", j);
    std::cout << "relative sup error " << res.relative_sup_error << "\n";
    return kExitOk;
}

int cmd_classify(const GlobalArgs& g) {
    ExperimentConfig cfg = load_config(g, "classify");
    CoefficientGrid grid = io::read_grid(cfg.grid_ref->csv, cfg.grid_ref->sidecar);
    GrowthEstimate est = classify_grid_growth(grid);
    json j;
    switch (est.cls) {
        case GrowthClass::ExpPol: j["class"] = "exp-pol"; break;
        case GrowthClass::Polynomial: j["class"] = "polynomial"; break;
        case GrowthClass::RapidlyDecreasingExp: j["class"] = "rapidly-decreasing-exp"; break;
        case GrowthClass::RapidlyDecreasing: j["class"] = "rapidly-decreasing"; break;
        case GrowthClass::Unclassified: j["class"] = "unclassified"; break;
    }
    j["tau"] = est.tau;
    j["residual"] = est.residual;
    j["k_slope"] = est.k_slope;
    j["n_slope"] = est.n_slope;
    j["joint_slope"] = est.joint_slope;
    write_json(fs::path(cfg.output_dir) / "growth.json", j);
    std::cout << j["class"].get<std::string>() << " tau=" << est.tau << "\n";
    return kExitOk;
}

int cmd_net_converge(const GlobalArgs& g) {
    ExperimentConfig cfg = load_config(g, "net-converge");
    std::vector<NetEntry> net;
    for (const auto& [lambda, ref] : cfg.net->entries)
        net.push_back({lambda, io::read_grid(ref.csv, ref.sidecar)});
    ConvergenceReport rep = detect_net_convergence(net, cfg.net->mode,
                                                   {cfg.tolerances.node_tol, 10.0});
    fs::path out(cfg.output_dir);
    io::write_grid_csv(out / "limit_grid.csv", rep.limit_grid);
    io::write_grid_sidecar(out / "limit_grid.json", rep.limit_grid);
    json j;
    j["converged"] = rep.converged;
    j["tau"] = rep.uniform_tau;
    j["lambda0"] = rep.lambda0;
    j["limit_grid_ref"] = (out / "limit_grid.csv").string();
    j["worst_node"] = {rep.worst_k, rep.worst_n};
    j["max_tail_delta"] = rep.max_tail_delta;
    if (!rep.diagnostic.empty()) j["diagnostic"] = rep.diagnostic;
    write_json(out / "convergence.json", j);
    std::cout << (rep.converged ? "converged" : "not converged") << "\n";
    return rep.converged ? kExitOk : kExitInconclusive;
}

int cmd_analyze(const GlobalArgs& g) {
    ExperimentConfig cfg = load_config(g, "analyze");
    const Window& psi = *cfg.window;
    const Lattice& lat = *cfg.lattice;
    const ComparisonFunction& c = *cfg.comparison;

    auto validation = validate_lattice(psi, lat);
    if (!validation.usable() && !g.force)
        throw PreconditionError("analyze: " + validation.reason);

    AnalysisOptions opts;
    opts.x_schedule = cfg.x_schedule;
    opts.solve_tol = cfg.tolerances.solve_tol;
    opts.point_quad = point_quad(cfg);
    opts.grid_quad = grid_quad(cfg);

    std::string theorem = cfg.theorem;
    if (theorem == "auto")
        theorem = wiener_condition_check(psi, c.b).holds ? "t43" : "t41";

    AsymptoticReport rep;
    if (theorem == "t41") {
        rep = verify_sasymptotics(*cfg.signal, psi, lat, c, opts);
    } else if (theorem == "t42") {
        rep = monotone_tauberian(*cfg.signal, psi, c, cfg.n_extent, opts);
    } else {
        double tau_ext = c.negative_tau.value_or(1.0);
        rep = wiener_tauberian(*cfg.signal, psi, lat, c, tau_ext, opts);
    }

    fs::path out(cfg.output_dir);
    write_json(out / "report.json", report_json(rep));
    io::atomic_write_text(out / "trajectories.csv", trajectories_csv(rep));
    std::cout << to_string(rep.verdict);
    if (rep.verdict == Verdict::SAsymptotic)
        std::cout << " C=(" << rep.C.real() << "," << rep.C.imag() << ") b=" << rep.b;
    if (!rep.reason.empty()) std::cout << " (" << rep.reason << ")";
    std::cout << "\n";
    return verdict_exit(rep.verdict);
}

int cmd_wiener_check(const GlobalArgs& g) {
    ExperimentConfig cfg = load_config(g, "wiener-check");
    WienerCheck wc = wiener_condition_check(*cfg.window, *cfg.wiener_b);
    json j;
    j["holds"] = wc.holds;
    j["min_ratio"] = wc.min_ratio;
    if (!wc.holds) j["witness_xi"] = wc.witness_xi;
    write_json(fs::path(cfg.output_dir) / "wiener.json", j);
    std::cout << (wc.holds ? "holds" : "fails") << " (min ratio " << wc.min_ratio << ")\n";
    return wc.holds ? kExitOk : kExitRejected;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gabor-frame toolkit: STFT grids, frame bounds, dual windows, "
                 "growth classification and S-asymptotic analysis"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "experiment config JSON")->required();
    app.add_option("--out", g.out_dir, "output directory (overrides config)");
    app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
    app.add_option("--seed", g.seed, "probe-generation seed");
    app.add_flag("--force", g.force, "override rejected-density refusals");

    auto* stft_cmd = app.add_subcommand("stft", "sample the STFT on the lattice");
    auto* dual_cmd = app.add_subcommand("dual", "compute the canonical dual window");
    auto* bounds_cmd = app.add_subcommand("frame-bounds", "estimate frame bounds");
    auto* recon_cmd = app.add_subcommand("reconstruct", "frame-expansion roundtrip");
    auto* classify_cmd = app.add_subcommand("classify", "classify coefficient-grid growth");
    auto* net_cmd = app.add_subcommand("net-converge", "net convergence detector");
    auto* analyze_cmd = app.add_subcommand("analyze", "S-asymptotics analysis");
    auto* wiener_cmd = app.add_subcommand("wiener-check", "Wiener-type kernel check");

    CLI11_PARSE(app, argc, argv);
    set_thread_count(g.threads);

    try {
        if (stft_cmd->parsed()) return cmd_stft(g);
        if (dual_cmd->parsed()) return cmd_dual(g);
        if (bounds_cmd->parsed()) return cmd_frame_bounds(g);
        if (recon_cmd->parsed()) return cmd_reconstruct(g);
        if (classify_cmd->parsed()) return cmd_classify(g);
        if (net_cmd->parsed()) return cmd_net_converge(g);
        if (analyze_cmd->parsed()) return cmd_analyze(g);
        if (wiener_cmd->parsed()) return cmd_wiener_check(g);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const CapabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitConfig;
}
