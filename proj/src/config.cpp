#include "gabor/config.hpp"

#include <set>

#include <json.hpp>

#include "gabor/errors.hpp"
#include "gabor/io.hpp"

namespace gabor {

using nlohmann::json;

std::vector<double> EvalPointsSpec::points() const {
    std::vector<double> pts;
    if (count < 2) {
        pts.push_back(from);
        return pts;
    }
    for (int i = 0; i < count; ++i)
        pts.push_back(from + (to - from) * static_cast<double>(i) / (count - 1));
    return pts;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config: " + where + ": " + what);
}

void reject_unknown(const json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(where, "unknown key '" + it.key() + "'");
}

double need_number(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key)) fail(where, "missing field '" + key + "'");
    if (!j.at(key).is_number()) fail(where, "field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

double opt_number(const json& j, const std::string& where, const std::string& key,
                  double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) fail(where, "field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

std::string need_string(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key)) fail(where, "missing field '" + key + "'");
    if (!j.at(key).is_string()) fail(where, "field '" + key + "' must be a string");
    return j.at(key).get<std::string>();
}

std::pair<int, int> need_int_pair(const json& j, const std::string& where,
                                  const std::string& key) {
    if (!j.contains(key)) fail(where, "missing field '" + key + "'");
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() ||
        !a[1].is_number_integer())
        fail(where, "field '" + key + "' must be a pair of integers");
    return {a[0].get<int>(), a[1].get<int>()};
}

SignalModel parse_signal(const json& j, const std::string& where);

SignalModel parse_catalog_signal(const json& j, const std::string& where) {
    const std::string name = need_string(j, where, "name");
    if (name == "zero") return signals::zero();
    if (name == "constant") {
        cplx v(opt_number(j, where, "re", 1.0), opt_number(j, where, "im", 0.0));
        return signals::constant(v);
    }
    if (name == "gaussian") return signals::gaussian();
    if (name == "heaviside") return signals::heaviside();
    if (name == "exp_step") return signals::exp_step(need_number(j, where, "b"));
    if (name == "staircase") return signals::staircase();
    if (name == "poly_log") return signals::poly_log(need_number(j, where, "nu"));
    if (name == "sin_exp") return signals::sin_exp();
    if (name == "sin_step") return signals::sin_step();
    fail(where, "unknown catalog signal '" + name + "'");
}

SignalModel parse_signal(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    const std::string kind =
        j.contains("kind") ? need_string(j, where, "kind") : std::string("catalog");

    SignalModel s = signals::zero();
    if (kind == "catalog") {
        reject_unknown(j, where,
                       {"kind", "name", "b", "nu", "re", "im", "shift", "modulation", "scale"});
        s = parse_catalog_signal(j, where);
    } else if (kind == "sum") {
        reject_unknown(j, where, {"kind", "terms", "shift", "modulation", "scale"});
        if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty())
            fail(where, "sum needs a non-empty 'terms' array");
        bool first = true;
        for (std::size_t i = 0; i < j.at("terms").size(); ++i) {
            SignalModel term =
                parse_signal(j.at("terms")[i], where + ".terms[" + std::to_string(i) + "]");
            s = first ? term : add(s, term);
            first = false;
        }
    } else if (kind == "sampled") {
        reject_unknown(j, where, {"kind", "path", "extension", "shift", "modulation", "scale"});
        const std::string path = need_string(j, where, "path");
        TableExtension ext = TableExtension::Zero;
        if (j.contains("extension")) {
            const std::string e = need_string(j, where, "extension");
            if (e == "zero")
                ext = TableExtension::Zero;
            else if (e == "hold")
                ext = TableExtension::HoldLast;
            else
                fail(where, "extension must be 'zero' or 'hold'");
        }
        auto rows = io::read_two_column_csv(path);
        std::vector<double> ts;
        std::vector<cplx> vs;
        for (const auto& [t, v] : rows) {
            ts.push_back(t);
            vs.push_back(cplx(v, 0.0));
        }
        s = signals::sampled(path, std::move(ts), std::move(vs), ext);
    } else if (kind == "point_masses") {
        reject_unknown(j, where, {"kind", "masses", "shift", "modulation", "scale"});
        if (!j.contains("masses") || !j.at("masses").is_array())
            fail(where, "point_masses needs a 'masses' array");
        std::vector<PointMass> masses;
        for (const auto& m : j.at("masses")) {
            if (!m.is_array() || m.size() < 2 || m.size() > 3)
                fail(where, "each mass must be [location, re] or [location, re, im]");
            PointMass pm;
            pm.location = m[0].get<double>();
            pm.weight = cplx(m[1].get<double>(), m.size() == 3 ? m[2].get<double>() : 0.0);
            masses.push_back(pm);
        }
        s = signals::point_masses(std::move(masses));
    } else {
        fail(where, "unknown signal kind '" + kind + "'");
    }

    if (j.contains("scale")) {
        const json& c = j.at("scale");
        if (c.is_number())
            s = scale(s, cplx(c.get<double>(), 0.0));
        else if (c.is_array() && c.size() == 2)
            s = scale(s, cplx(c[0].get<double>(), c[1].get<double>()));
        else
            fail(where, "'scale' must be a number or [re, im]");
    }
    if (j.contains("shift")) s = translate(s, need_number(j, where, "shift"));
    if (j.contains("modulation")) s = modulate(s, need_number(j, where, "modulation"));
    return s;
}

Window parse_window(const json& j, const std::string& where) {
    reject_unknown(j, where, {"name"});
    return windows::by_name(need_string(j, where, "name"));
}

Lattice parse_lattice(const json& j, const std::string& where) {
    reject_unknown(j, where, {"alpha", "beta", "k_range", "n_range"});
    auto [kmin, kmax] = need_int_pair(j, where, "k_range");
    auto [nmin, nmax] = need_int_pair(j, where, "n_range");
    return Lattice(need_number(j, where, "alpha"), need_number(j, where, "beta"), kmin, kmax,
                   nmin, nmax);
}

ComparisonFunction parse_comparison(const json& j, const std::string& where) {
    reject_unknown(j, where, {"regime", "b", "nu", "L", "extension_tau"});
    SlowlyVarying L;
    if (j.contains("L")) L = SlowlyVarying::parse(need_string(j, where, "L"));
    const std::string regime =
        j.contains("regime") ? need_string(j, where, "regime") : std::string("exponential");
    ComparisonFunction c;
    if (regime == "exponential") {
        c = ComparisonFunction::exponential(opt_number(j, where, "b", 0.0), L);
    } else if (regime == "polynomial") {
        c = ComparisonFunction::polynomial(need_number(j, where, "nu"), L);
    } else {
        fail(where, "regime must be 'exponential' or 'polynomial'");
    }
    if (j.contains("extension_tau"))
        c = c.with_negative_extension(need_number(j, where, "extension_tau"));
    return c;
}

GridRef parse_grid_ref(const json& j, const std::string& where) {
    reject_unknown(j, where, {"csv", "sidecar"});
    return {need_string(j, where, "csv"), need_string(j, where, "sidecar")};
}

ToleranceSet parse_tolerances(const json& j, const std::string& where) {
    reject_unknown(j, where,
                   {"tail_tol", "node_tol", "dual_tol", "solve_tol", "reconstruction_tol",
                    "max_iterations", "grid_max_halvings"});
    ToleranceSet t;
    t.tail_tol = opt_number(j, where, "tail_tol", t.tail_tol);
    t.node_tol = opt_number(j, where, "node_tol", t.node_tol);
    t.dual_tol = opt_number(j, where, "dual_tol", t.dual_tol);
    t.solve_tol = opt_number(j, where, "solve_tol", t.solve_tol);
    t.reconstruction_tol = opt_number(j, where, "reconstruction_tol", t.reconstruction_tol);
    t.max_iterations = static_cast<int>(opt_number(j, where, "max_iterations", t.max_iterations));
    t.grid_max_halvings =
        static_cast<int>(opt_number(j, where, "grid_max_halvings", t.grid_max_halvings));
    return t;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& json_text, const std::string& command) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    std::set<std::string> allowed = {"tolerances", "output_dir"};
    const bool needs_signal = command == "stft" || command == "reconstruct" ||
                              command == "analyze";
    const bool needs_window = command == "stft" || command == "dual" ||
                              command == "frame-bounds" || command == "reconstruct" ||
                              command == "analyze" || command == "wiener-check";
    const bool needs_lattice = command == "stft" || command == "dual" ||
                               command == "frame-bounds" || command == "reconstruct" ||
                               command == "analyze";
    if (needs_signal) allowed.insert("signal");
    if (needs_window) allowed.insert("window");
    if (needs_lattice) allowed.insert("lattice");
    if (command == "analyze") {
        allowed.insert("comparison");
        allowed.insert("theorem");
        allowed.insert("x_schedule");
        allowed.insert("n_extent");
    }
    if (command == "frame-bounds") allowed.insert("probes");
    if (command == "reconstruct") {
        allowed.insert("eval_points");
        allowed.insert("dual");
    }
    if (command == "classify") allowed.insert("grid");
    if (command == "net-converge") allowed.insert("net");
    if (command == "wiener-check") allowed.insert("wiener");

    reject_unknown(j, "top level", allowed);

    ExperimentConfig cfg;
    if (j.contains("tolerances")) cfg.tolerances = parse_tolerances(j.at("tolerances"), "tolerances");
    if (j.contains("output_dir")) cfg.output_dir = need_string(j, "top level", "output_dir");

    if (j.contains("signal")) cfg.signal = parse_signal(j.at("signal"), "signal");
    if (needs_signal && !cfg.signal)
        throw ConfigError("config: missing required section 'signal'");

    if (j.contains("window")) cfg.window = parse_window(j.at("window"), "window");
    if (needs_window && !cfg.window)
        throw ConfigError("config: missing required section 'window'");

    if (j.contains("lattice")) cfg.lattice = parse_lattice(j.at("lattice"), "lattice");
    if (needs_lattice && !cfg.lattice)
        throw ConfigError("config: missing required section 'lattice'");

    if (j.contains("comparison"))
        cfg.comparison = parse_comparison(j.at("comparison"), "comparison");
    if (command == "analyze" && !cfg.comparison)
        throw ConfigError("config: missing required section 'comparison'");

    if (j.contains("probes")) {
        cfg.probes = static_cast<int>(need_number(j, "top level", "probes"));
        if (cfg.probes < 1) throw ConfigError("config: probes must be >= 1");
    }
    if (j.contains("theorem")) {
        cfg.theorem = need_string(j, "top level", "theorem");
        if (cfg.theorem != "auto" && cfg.theorem != "t41" && cfg.theorem != "t42" &&
            cfg.theorem != "t43")
            throw ConfigError("config: theorem must be one of auto, t41, t42, t43");
    }
    if (j.contains("x_schedule")) {
        if (!j.at("x_schedule").is_array())
            throw ConfigError("config: x_schedule must be an array of numbers");
        for (const auto& v : j.at("x_schedule")) {
            if (!v.is_number()) throw ConfigError("config: x_schedule must contain numbers");
            cfg.x_schedule.push_back(v.get<double>());
        }
        for (std::size_t i = 1; i < cfg.x_schedule.size(); ++i)
            if (!(cfg.x_schedule[i] > cfg.x_schedule[i - 1]))
                throw ConfigError("config: x_schedule must be strictly increasing");
    }
    if (j.contains("n_extent")) {
        cfg.n_extent = static_cast<int>(need_number(j, "top level", "n_extent"));
        if (cfg.n_extent < 0) throw ConfigError("config: n_extent must be >= 0");
    }
    if (j.contains("eval_points")) {
        const json& e = j.at("eval_points");
        reject_unknown(e, "eval_points", {"from", "to", "count"});
        EvalPointsSpec spec;
        spec.from = opt_number(e, "eval_points", "from", spec.from);
        spec.to = opt_number(e, "eval_points", "to", spec.to);
        spec.count = static_cast<int>(opt_number(e, "eval_points", "count", spec.count));
        cfg.eval_points = spec;
    }
    if (j.contains("grid")) cfg.grid_ref = parse_grid_ref(j.at("grid"), "grid");
    if (command == "classify" && !cfg.grid_ref)
        throw ConfigError("config: classify needs a 'grid' section");
    if (j.contains("dual")) cfg.dual_ref = parse_grid_ref(j.at("dual"), "dual");
    if (j.contains("net")) {
        const json& n = j.at("net");
        reject_unknown(n, "net", {"mode", "entries"});
        NetRef net;
        const std::string mode = need_string(n, "net", "mode");
        if (mode == "exp-pol")
            net.mode = DualClassMode::ExpPol;
        else if (mode == "polynomial")
            net.mode = DualClassMode::Polynomial;
        else
            throw ConfigError("config: net.mode must be 'exp-pol' or 'polynomial'");
        if (!n.contains("entries") || !n.at("entries").is_array())
            throw ConfigError("config: net.entries must be an array");
        for (const auto& e : n.at("entries")) {
            reject_unknown(e, "net.entries[]", {"lambda", "csv", "sidecar"});
            net.entries.emplace_back(need_number(e, "net.entries[]", "lambda"),
                                     parse_grid_ref(e, "net.entries[]"));
        }
        cfg.net = net;
    }
    if (command == "net-converge" && !cfg.net)
        throw ConfigError("config: net-converge needs a 'net' section");
    if (j.contains("wiener")) {
        const json& w = j.at("wiener");
        reject_unknown(w, "wiener", {"b"});
        cfg.wiener_b = need_number(w, "wiener", "b");
    }
    if (command == "wiener-check" && !cfg.wiener_b)
        throw ConfigError("config: wiener-check needs a 'wiener' section with field 'b'");
    return cfg;
}

}  // namespace gabor
