#include "gabor/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "gabor/parallel.hpp"
#include "gabor/stft.hpp"

namespace gabor {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::SAsymptotic: return "s-asymptotic";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::Rejected: return "rejected";
    }
    return "inconclusive";
}

std::vector<double> default_x_schedule(const ComparisonFunction& c) {
    const double x0 = 2.0, ratio = 1.3;
    double x_max = c.regime == ComparisonRegime::Exponential
                       ? std::min(40.0, 690.0 / std::max(std::abs(c.b), 0.1))
                       : 2500.0;
    std::vector<double> xs;
    for (double x = x0; x <= x_max; x *= ratio) xs.push_back(x);
    if (xs.size() < 8)
        for (double x = xs.empty() ? x0 : xs.back() * ratio; xs.size() < 8; x *= ratio)
            xs.push_back(x);
    return xs;
}

namespace {

SignalModel net_element(const SignalModel& f, const ComparisonFunction& c, double h,
                        bool use_extension) {
    const double logc = use_extension ? c.extended_log_eval(h) : c.log_eval(h);
    SignalModel out;
    out.kind = f.kind;
    out.id = f.id + "@h=" + std::to_string(h);
    if (f.is_point_masses()) {
        out.masses = f.masses;
        const double scale = std::exp(-logc);
        for (auto& m : out.masses) {
            m.location -= h;
            m.weight *= scale;
        }
        out.kind = SignalKind::PointMassCombination;
        out.support = f.support.shifted(-h);
        out.growth = f.growth;
        out.growth.amp *= scale;
        return out;
    }
    auto base = f;
    out.eval_fn = [base, h, logc](double t) { return base.scaled_eval(t + h, logc); };
    out.scaled_eval_fn = [base, h, logc](double t, double d) {
        return base.scaled_eval(t + h, logc + d);
    };
    out.support = f.support.shifted(-h);
    out.osc_rate = f.osc_rate;
    if (f.breakpoints_fn) {
        auto bp = f.breakpoints_fn;
        out.breakpoints_fn = [bp, h](double a, double b, std::vector<double>& v) {
            std::vector<double> inner;
            bp(a + h, b + h, inner);
            for (double t : inner) v.push_back(t - h);
        };
    }
    out.growth = f.growth;
    if (f.growth.hint == GrowthHint::ExpType)
        out.growth.amp =
            f.growth.amp * std::exp(std::min(690.0, f.growth.exp_rate * std::abs(h) - logc));
    else
        out.growth.amp = f.growth.amp * std::exp(std::min(690.0, -std::min(logc, 690.0)));
    return out;
}

// Tail averaging over the last quarter with Cauchy acceptance on successive
// window means; the scale floor keeps all-but-vanishing trajectories from
// being judged by their own roundoff.
LimitEntry tail_extrapolate(std::span<const cplx> vals) {
    LimitEntry e;
    const std::size_t m = vals.size();
    if (m < 4) {
        e.note = "schedule too short";
        return e;
    }
    double vmax = 0.0;
    bool finite = true;
    for (const auto& v : vals) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) finite = false;
        else vmax = std::max(vmax, std::abs(v));
    }
    if (!finite) {
        e.note = "non-finite trajectory";
        return e;
    }
    std::size_t window = std::max<std::size_t>(2, (m + 7) / 8);
    if (2 * window > m) window = m / 2;
    cplx m1(0, 0), m2(0, 0);
    for (std::size_t j = m - window; j < m; ++j) m2 += vals[j];
    for (std::size_t j = m - 2 * window; j < m - window; ++j) m1 += vals[j];
    m1 /= static_cast<double>(window);
    m2 /= static_cast<double>(window);

    cplx a(0, 0);
    for (std::size_t j = m - 2 * window; j < m; ++j) a += vals[j];
    a /= static_cast<double>(2 * window);

    double dev = 0.0;
    for (std::size_t j = m - 2 * window; j < m; ++j) dev = std::max(dev, std::abs(vals[j] - a));

    const double rtol = 1e-3;
    const double scale = std::max(std::abs(m2), 1e-3 * vmax) + 1e-300;
    e.a = a;
    e.residual = dev;
    e.converged = std::abs(m1 - m2) <= rtol * scale;
    if (!e.converged) e.note = "tail means not Cauchy";
    return e;
}

}  // namespace

std::vector<NetSignalEntry> translation_net(const SignalModel& f, const ComparisonFunction& c,
                                            std::span<const double> h_schedule) {
    std::vector<NetSignalEntry> net;
    net.reserve(h_schedule.size());
    for (double h : h_schedule) net.push_back({h, net_element(f, c, h, false)});
    return net;
}

std::vector<NetEntry> net_coefficient_grids(const std::vector<NetSignalEntry>& net,
                                            const Window& psi, const Lattice& lat,
                                            const QuadratureSpec& q) {
    std::vector<NetEntry> out;
    out.reserve(net.size());
    for (const auto& e : net) out.push_back({e.h, gabor_coefficients(e.f_h, psi, lat, q)});
    return out;
}

CoefficientLimitData compute_coefficient_limits(const SignalModel& f, const Window& psi,
                                                double beta, int n_lo, int n_hi,
                                                const ComparisonFunction& c,
                                                std::span<const double> x_schedule,
                                                const QuadratureSpec& q) {
    CoefficientLimitData data;
    data.xs.assign(x_schedule.begin(), x_schedule.end());
    for (int n = n_lo; n <= n_hi; ++n) data.ns.push_back(n);
    data.rows.assign(data.xs.size(), std::vector<cplx>(data.ns.size(), cplx(0, 0)));

    // g_n(x) = e^{2 pi i beta n x} V_psi f(x, beta n) / c(x) is exactly the
    // k = 0 coefficient row of the net element T_{-x} f / c(x).
    const Lattice row_lattice(1.0, beta, 0, 0, n_lo, n_hi);
    std::vector<std::string> failures(data.xs.size());
    parallel_for(data.xs.size(), [&](std::size_t j) {
        SignalModel fx = net_element(f, c, data.xs[j], false);
        try {
            CoefficientGrid g = gabor_coefficients(fx, psi, row_lattice, q);
            for (std::size_t ni = 0; ni < data.ns.size(); ++ni)
                data.rows[j][ni] = g.at(0, data.ns[ni]);
        } catch (const NumericError& err) {
            failures[j] = err.what();
        }
    });
    for (std::size_t j = 0; j < failures.size(); ++j)
        if (!failures[j].empty()) {
            data.quadrature_failed = true;
            data.failure_note =
                "quadrature failure at x=" + std::to_string(data.xs[j]) + ": " + failures[j];
            break;
        }

    for (std::size_t ni = 0; ni < data.ns.size(); ++ni) {
        LimitEntry entry;
        if (data.quadrature_failed) {
            entry.note = data.failure_note;
        } else {
            std::vector<cplx> traj(data.xs.size());
            for (std::size_t j = 0; j < data.xs.size(); ++j) traj[j] = data.rows[j][ni];
            entry = tail_extrapolate(traj);
        }
        data.limits[data.ns[ni]] = entry;
    }
    return data;
}

LimitMap sasymp_coefficient_limits(const SignalModel& f, const Window& psi, const Lattice& lat,
                                   const ComparisonFunction& c,
                                   std::span<const double> x_schedule,
                                   const QuadratureSpec& q) {
    return compute_coefficient_limits(f, psi, lat.beta, lat.n_min, lat.n_max, c, x_schedule, q)
        .limits;
}

TauberianCheck tauberian_bound_check(const SignalModel& f, const Window& psi,
                                     const Lattice& lat, const ComparisonFunction& c,
                                     double x_max, const QuadratureSpec& q) {
    std::vector<double> xs = {0.0, 0.5, 1.0, 1.5, 2.0};
    for (double x = 2.0 * 1.3; x <= x_max; x *= 1.3) xs.push_back(x);
    {
        std::vector<double> neg;
        for (double x : xs)
            if (x > 0) neg.push_back(-x);
        xs.insert(xs.end(), neg.begin(), neg.end());
    }
    std::sort(xs.begin(), xs.end());

    const Lattice row_lattice(1.0, lat.beta, 0, 0, lat.n_min, lat.n_max);
    const std::size_t n_count = static_cast<std::size_t>(row_lattice.n_count());
    std::vector<std::vector<double>> ratio(xs.size(), std::vector<double>(n_count, 0.0));
    parallel_for(xs.size(), [&](std::size_t j) {
        SignalModel fx = net_element(f, c, xs[j], true);
        CoefficientGrid g = gabor_coefficients(fx, psi, row_lattice, q);
        for (std::size_t ni = 0; ni < n_count; ++ni)
            ratio[j][ni] = std::abs(g.at(0, lat.n_min + static_cast<int>(ni)));
    });

    // fitted tau from the per-frequency sups over the base (|x| <= x_max/2)
    std::vector<double> fit_x, fit_y;
    std::vector<double> sup_base(n_count, 0.0), sup_all(n_count, 0.0);
    for (std::size_t j = 0; j < xs.size(); ++j)
        for (std::size_t ni = 0; ni < n_count; ++ni) {
            sup_all[ni] = std::max(sup_all[ni], ratio[j][ni]);
            if (std::abs(xs[j]) <= 0.5 * x_max)
                sup_base[ni] = std::max(sup_base[ni], ratio[j][ni]);
        }
    for (std::size_t ni = 0; ni < n_count; ++ni) {
        int n = lat.n_min + static_cast<int>(ni);
        if (sup_base[ni] > 0.0 && std::log(sup_base[ni]) > -690.0) {
            fit_x.push_back(std::log(1.0 + std::abs(n)));
            fit_y.push_back(std::log(sup_base[ni]));
        }
    }
    double tau0 = 0.0;
    if (fit_x.size() >= 3) {
        double n = static_cast<double>(fit_x.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < fit_x.size(); ++i) {
            sx += fit_x[i];
            sy += fit_y[i];
            sxx += fit_x[i] * fit_x[i];
            sxy += fit_x[i] * fit_y[i];
        }
        double den = n * sxx - sx * sx;
        if (den > 0) tau0 = std::max(0.0, (n * sxy - sx * sy) / den);
    }

    const double tau_cap = 10.0;
    for (double tau = tau0; tau <= tau_cap; tau += 0.5) {
        double mb = 0.0, me = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j)
            for (std::size_t ni = 0; ni < n_count; ++ni) {
                int n = lat.n_min + static_cast<int>(ni);
                double v = ratio[j][ni] / std::pow(1.0 + std::abs(n), tau);
                me = std::max(me, v);
                if (std::abs(xs[j]) <= 0.5 * x_max) mb = std::max(mb, v);
            }
        if (me <= 1.1 * mb && mb > 0.0) {
            TauberianCheck ok;
            ok.holds = true;
            ok.tau = tau;
            ok.sup_ratio = me;
            return ok;
        }
        if (mb == 0.0) break;  // identically zero: bounded with tau = tau0
    }

    bool all_zero = true;
    for (std::size_t ni = 0; ni < n_count && all_zero; ++ni) all_zero = sup_all[ni] == 0.0;
    if (all_zero) return {true, 0.0, 0.0, 0.0, 0};

    TauberianCheck bad;
    bad.holds = false;
    bad.tau = tau_cap;
    double worst = -1.0;
    for (std::size_t j = 0; j < xs.size(); ++j)
        for (std::size_t ni = 0; ni < n_count; ++ni) {
            int n = lat.n_min + static_cast<int>(ni);
            double v = ratio[j][ni] / std::pow(1.0 + std::abs(n), tau_cap);
            if (v > worst) {
                worst = v;
                bad.witness_x = xs[j];
                bad.witness_n = n;
            }
        }
    bad.sup_ratio = worst;
    return bad;
}

cplx window_ft_complex(const Window& psi, double xi, double b, const QuadratureSpec& q) {
    if (psi.has_complex_ft()) return psi.complex_ft(cplx(xi, b / kTwoPi));

    if (std::abs(b) >= psi.envelope.exp_budget())
        throw CapabilityError("window_ft_complex: psi e^{bt} not integrable for window '" +
                              psi.name + "' at b=" + std::to_string(b));
    double r = psi.envelope.radius_for(q.tail_tol * 1e-2);
    while (r < 80.0 && psi.envelope.value(r) * std::exp(std::abs(b) * r) > q.tail_tol * 1e-2)
        r += 0.5;
    const double cap = std::min(q.panel_width, 1.0 / (4.0 * (1.0 + std::abs(xi))));
    auto edges = panel_edges(-r, r, cap, {});
    auto integrand = [&psi, b, xi](double t) {
        return psi.eval(t) * std::exp(b * t) * cplx(std::cos(kTwoPi * xi * t), -std::sin(kTwoPi * xi * t));
    };
    return integrate_refining(integrand, std::move(edges), q).value;
}

ConstantsFit solve_asymptote_constants(const LimitMap& a_n, const Window& psi, double beta,
                                       const QuadratureSpec& q, double b_max) {
    std::vector<std::pair<int, cplx>> entries;
    double amax = 0.0;
    for (const auto& [n, e] : a_n)
        if (e.converged) {
            entries.emplace_back(n, e.a);
            amax = std::max(amax, std::abs(e.a));
        }
    if (amax <= 1e-12) return {cplx(0.0, 0.0), 0.0, 0.0};

    auto it0 = a_n.find(0);
    if (it0 == a_n.end() || !it0->second.converged)
        throw ConfigError("solve_asymptote_constants: a_0 limit required");
    if (entries.size() < 2)
        throw ConfigError("solve_asymptote_constants: need >= 2 convergent limits");
    const cplx a0 = it0->second.a;
    if (std::abs(a0) <= 1e-9 * amax)
        throw NumericError(
            "solve_asymptote_constants: a_0 vanishes while other a_n do not; the "
            "constants equations cannot hold",
            a0, cplx(amax, 0.0));

    double norm2 = 0.0;
    for (const auto& [n, a] : entries) norm2 += std::norm(a);

    auto model = [&](double b, int n) {
        return std::conj(window_ft_complex(psi, -beta * n, b, q));
    };
    auto resid = [&](double b) {
        cplx C = a0 / model(b, 0);
        double s = 0.0;
        for (const auto& [n, a] : entries) s += std::norm(a - C * model(b, n));
        return s / norm2;
    };

    const int coarse = 81;
    double best_b = 0.0, best_r = kInf;
    for (int i = 0; i < coarse; ++i) {
        double b = -b_max + 2.0 * b_max * static_cast<double>(i) / (coarse - 1);
        double r = resid(b);
        if (r < best_r) {
            best_r = r;
            best_b = b;
        }
    }
    double lo = std::max(-b_max, best_b - 2.0 * b_max / (coarse - 1));
    double hi = std::min(b_max, best_b + 2.0 * b_max / (coarse - 1));
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = resid(x1), f2 = resid(x2);
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = resid(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = resid(x2);
        }
    }
    double b_star = 0.5 * (lo + hi);
    ConstantsFit fit;
    fit.b = b_star;
    fit.C = a0 / model(b_star, 0);
    fit.residual = resid(b_star);
    return fit;
}

namespace {

void attach_trajectories(AsymptoticReport& rep, CoefficientLimitData&& data) {
    rep.xs = std::move(data.xs);
    rep.ns = std::move(data.ns);
    rep.trajectories = std::move(data.rows);
    rep.a_n = std::move(data.limits);
    rep.max_extrapolation_residual = 0.0;
    for (const auto& [n, e] : rep.a_n)
        if (e.converged)
            rep.max_extrapolation_residual = std::max(rep.max_extrapolation_residual, e.residual);
}

bool all_limits_converged(const LimitMap& m) {
    for (const auto& [n, e] : m)
        if (!e.converged) return false;
    return true;
}

}  // namespace

AsymptoticReport verify_sasymptotics(const SignalModel& f, const Window& psi,
                                     const Lattice& lat, const ComparisonFunction& c,
                                     const AnalysisOptions& opts) {
    AsymptoticReport rep;
    rep.theorem = 41;
    std::vector<double> xs = opts.x_schedule.empty() ? default_x_schedule(c) : opts.x_schedule;

    CoefficientLimitData data =
        compute_coefficient_limits(f, psi, lat.beta, lat.n_min, lat.n_max, c, xs, opts.point_quad);
    const bool limits_ok = !data.quadrature_failed && all_limits_converged(data.limits);
    std::string limit_note = data.failure_note;
    if (!limits_ok && limit_note.empty()) {
        for (const auto& [n, e] : data.limits)
            if (!e.converged) {
                limit_note = "limit extrapolation failed at n=" + std::to_string(n) +
                             (e.note.empty() ? "" : " (" + e.note + ")");
                break;
            }
    }
    attach_trajectories(rep, std::move(data));

    bool bound_holds = false;
    bool bound_known = false;
    TauberianCheck tb;
    try {
        tb = tauberian_bound_check(f, psi, lat, c, xs.back(), opts.point_quad);
        bound_known = true;
        bound_holds = tb.holds;
        rep.tau = tb.tau;
    } catch (const NumericError& e) {
        rep.reason = std::string("growth bound check: ") + e.what();
    }

    if (bound_known && !bound_holds) {
        rep.verdict = Verdict::Rejected;
        rep.reason = "growth bound violated at (x=" + std::to_string(tb.witness_x) +
                     ", n=" + std::to_string(tb.witness_n) + ")";
        rep.diagnostics["witness_x"] = tb.witness_x;
        rep.diagnostics["witness_n"] = tb.witness_n;
    } else if (!limits_ok) {
        rep.verdict = Verdict::Inconclusive;
        if (rep.reason.empty()) rep.reason = limit_note;
    } else if (!bound_known) {
        rep.verdict = Verdict::Inconclusive;
    } else {
        try {
            ConstantsFit fit =
                solve_asymptote_constants(rep.a_n, psi, lat.beta, opts.point_quad, opts.b_max);
            rep.C = fit.C;
            rep.b = fit.b;
            rep.solve_residual = fit.residual;
            if (fit.residual <= opts.solve_tol) {
                rep.verdict = Verdict::SAsymptotic;
            } else {
                rep.verdict = Verdict::Inconclusive;
                rep.reason = "constants solve residual " + std::to_string(fit.residual) +
                             " above tolerance";
            }
        } catch (const NumericError& e) {
            rep.verdict = Verdict::Rejected;
            rep.reason = e.what();
        } catch (const ConfigError& e) {
            rep.verdict = Verdict::Inconclusive;
            rep.reason = e.what();
        }
    }

    if (opts.run_net_route) {
        rep.route.ran = true;
        try {
            auto net = translation_net(f, c, xs);
            auto grids = net_coefficient_grids(net, psi, lat, opts.grid_quad);
            DualClassMode mode = c.regime == ComparisonRegime::Exponential
                                     ? DualClassMode::ExpPol
                                     : DualClassMode::Polynomial;
            ConvergenceReport net_rep = detect_net_convergence(grids, mode);
            rep.route.net_converged = net_rep.converged;
            rep.route.note = net_rep.diagnostic;
            if (net_rep.converged && rep.verdict == Verdict::SAsymptotic && opts.dual) {
                std::vector<double> pts;
                for (double x = -2.0; x <= 2.0 + 1e-9; x += 0.5) pts.push_back(x);
                Window gamma = opts.dual->as_window();
                SynthesisResult sl = synthesize(net_rep.limit_grid, gamma, lat, pts);
                double sup_g = 0.0, sup_err = 0.0;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    cplx target = rep.C * std::exp(rep.b * pts[i]);
                    sup_g = std::max(sup_g, std::abs(target));
                    sup_err = std::max(sup_err, std::abs(sl.values[i] - target));
                }
                rep.route.limit_match_rel_err = sup_g > 0 ? sup_err / sup_g : sup_err;
            }
        } catch (const NumericError& e) {
            rep.route.net_converged = false;
            rep.route.note = std::string("net grids: ") + e.what();
        }
        const bool positive = rep.verdict == Verdict::SAsymptotic;
        rep.route.agreement = positive == rep.route.net_converged;
        if (!rep.route.agreement) {
            rep.verdict = Verdict::Inconclusive;
            rep.reason = "route disagreement: frequency-wise verdict " +
                         std::string(positive ? "positive" : "negative") +
                         " vs net convergence " +
                         (rep.route.net_converged ? "positive" : "negative");
        }
    }
    return rep;
}

AsymptoticReport monotone_tauberian(const SignalModel& f, const Window& psi,
                                    const ComparisonFunction& c, int n_extent,
                                    const AnalysisOptions& opts) {
    AsymptoticReport rep;
    rep.theorem = 42;
    if (c.regime != ComparisonRegime::Exponential)
        throw ConfigError("monotone_tauberian: comparison must be of exponential regime");
    if (c.b < 0.0) {
        rep.verdict = Verdict::Rejected;
        rep.reason = "b >= 0 is forced for non-decreasing f";
        return rep;
    }

    const double probe_r = psi.envelope.radius_for(1e-12);
    for (double t = -probe_r; t <= probe_r; t += 0.05)
        if (psi.eval(t) < -1e-12)
            throw PreconditionError("monotone_tauberian: window must be nonnegative; psi(" +
                                    std::to_string(t) + ") < 0");

    std::vector<double> xs = opts.x_schedule.empty() ? default_x_schedule(c) : opts.x_schedule;

    // monotonicity spot check on [0, min(x_max, 50)]
    {
        double prev = -kInf;
        double hi = std::min(xs.back(), 50.0);
        for (double t = 0.0; t <= hi; t += 0.25) {
            cplx v = f.eval(t);
            if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v)))
                throw PreconditionError("monotone_tauberian: f must be real-valued");
            if (v.real() < prev - 1e-9 * (1.0 + std::abs(prev)))
                throw PreconditionError("monotone_tauberian: f not non-decreasing near t=" +
                                        std::to_string(t));
            prev = v.real();
        }
    }

    // integer frequencies; integral over [0, inf) is enforced by support
    SignalModel f_pos = f;
    if (f.support.lo < 0.0) {
        auto base = f;
        f_pos.eval_fn = [base](double t) { return t >= 0.0 ? base.eval(t) : cplx(0.0, 0.0); };
        f_pos.scaled_eval_fn = [base](double t, double d) {
            return t >= 0.0 ? base.scaled_eval(t, d) : cplx(0.0, 0.0);
        };
        f_pos.support = f.support.intersect({0.0, kInf});
    }
    CoefficientLimitData data = compute_coefficient_limits(f_pos, psi, 1.0, -n_extent, n_extent,
                                                           c, xs, opts.point_quad);

    // direct ratio f(x) / c(x) along the same schedule
    std::vector<cplx> ratio(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j)
        ratio[j] = f.scaled_eval(xs[j], c.log_eval(xs[j]));
    LimitEntry direct = tail_extrapolate(ratio);

    const bool limits_ok = !data.quadrature_failed && all_limits_converged(data.limits);
    cplx a0 = data.limits.count(0) ? data.limits[0].a : cplx(0, 0);
    attach_trajectories(rep, std::move(data));

    cplx denom = window_ft_complex(psi, 0.0, c.b, opts.point_quad);
    cplx predicted = a0 / denom;
    rep.C = predicted;
    rep.b = c.b;
    rep.diagnostics["predicted_limit_re"] = predicted.real();
    rep.diagnostics["predicted_limit_im"] = predicted.imag();
    rep.diagnostics["direct_ratio_re"] = direct.a.real();
    rep.diagnostics["direct_ratio_im"] = direct.a.imag();
    rep.diagnostics["direct_converged"] = direct.converged ? 1.0 : 0.0;
    rep.diagnostics["ratio_gap"] =
        std::abs(predicted - direct.a) / std::max(std::abs(predicted), 1e-12);

    if (limits_ok) {
        rep.verdict = Verdict::SAsymptotic;
    } else {
        rep.verdict = Verdict::Inconclusive;
        rep.reason = "frequency-wise limit extrapolation failed";
    }
    return rep;
}

WienerCheck wiener_condition_check(const Window& psi, double b,
                                   std::span<const double> xi_grid) {
    QuadratureSpec q = QuadratureSpec::for_window(psi);
    auto m = [&](double xi) { return std::abs(window_ft_complex(psi, xi, b, q)); };

    std::vector<double> grid(xi_grid.begin(), xi_grid.end());
    if (grid.empty()) {
        const double m0 = m(0.0) + 1e-300;
        double X = 1.0;
        while (X < 25.0 && m(X) > 1e-12 * m0) X += 0.5;
        for (double xi = -X; xi <= X + 1e-12; xi += 0.01) grid.push_back(xi);
    }
    std::sort(grid.begin(), grid.end());

    std::vector<double> mv(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { mv[i] = m(grid[i]); });

    // decay envelope fitted on the outer third: log E = e0 + e1 |xi| + e2 xi^2
    const double X = std::max(std::abs(grid.front()), std::abs(grid.back()));
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, y0 = 0, y1 = 0, y2 = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double a = std::abs(grid[i]);
        if (a < 2.0 * X / 3.0 || !(mv[i] > 1e-280)) continue;
        double ly = std::log(mv[i]);
        double a2 = a * a;
        s0 += 1;
        s1 += a;
        s2 += a2;
        s3 += a2 * a;
        s4 += a2 * a2;
        y0 += ly;
        y1 += ly * a;
        y2 += ly * a2;
    }
    auto det3 = [](double a, double bb, double cc, double d, double e, double ff, double g,
                   double h, double i) {
        return a * (e * i - ff * h) - bb * (d * i - ff * g) + cc * (d * h - e * g);
    };
    double D = det3(s0, s1, s2, s1, s2, s3, s2, s3, s4);
    double e0, e1, e2;
    if (std::abs(D) > 1e-250 && s0 >= 3) {
        e0 = det3(y0, s1, s2, y1, s2, s3, y2, s3, s4) / D;
        e1 = det3(s0, y0, s2, s1, y1, s3, s2, y2, s4) / D;
        e2 = det3(s0, s1, y0, s1, s2, y1, s2, s3, y2) / D;
    } else {
        e0 = std::log(*std::max_element(mv.begin(), mv.end()) + 1e-300);
        e1 = e2 = 0.0;
    }
    auto envelope = [e0, e1, e2](double xi) {
        double a = std::abs(xi);
        return std::exp(e0 + e1 * a + e2 * a * a);
    };

    auto ratio = [&](double xi) { return m(xi) / envelope(xi); };
    WienerCheck out;
    out.min_ratio = kInf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double r = mv[i] / envelope(grid[i]);
        if (r < out.min_ratio) {
            out.min_ratio = r;
            out.witness_xi = grid[i];
        }
    }
    // refine interior local minima of the ratio; grid steps are far coarser
    // than the width of a genuine zero crossing
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        double r_prev = mv[i - 1] / envelope(grid[i - 1]);
        double r_here = mv[i] / envelope(grid[i]);
        double r_next = mv[i + 1] / envelope(grid[i + 1]);
        if (!(r_here <= r_prev && r_here <= r_next)) continue;
        double lo = grid[i - 1], hi = grid[i + 1];
        for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
            double x1 = lo + (hi - lo) / 3.0, x2 = hi - (hi - lo) / 3.0;
            if (ratio(x1) < ratio(x2))
                hi = x2;
            else
                lo = x1;
        }
        double xm = 0.5 * (lo + hi);
        double rm = ratio(xm);
        if (rm < out.min_ratio) {
            out.min_ratio = rm;
            out.witness_xi = xm;
        }
    }
    out.holds = out.min_ratio >= 1e-6;
    return out;
}

AsymptoticReport wiener_tauberian(const SignalModel& f, const Window& psi, const Lattice& lat,
                                  const ComparisonFunction& c, double tau_extension,
                                  const AnalysisOptions& opts) {
    AsymptoticReport rep;
    rep.theorem = 43;

    WienerCheck wc = wiener_condition_check(psi, c.b);
    rep.diagnostics["wiener_min_ratio"] = wc.min_ratio;
    if (!wc.holds) {
        rep.verdict = Verdict::Rejected;
        rep.reason = "window fails the Wiener-type condition (witness xi=" +
                     std::to_string(wc.witness_xi) + ")";
        rep.diagnostics["witness_xi"] = wc.witness_xi;
        return rep;
    }

    std::vector<double> xs = opts.x_schedule.empty() ? default_x_schedule(c) : opts.x_schedule;
    CoefficientLimitData data =
        compute_coefficient_limits(f, psi, lat.beta, 0, 0, c, xs, opts.point_quad);
    const bool limits_ok = !data.quadrature_failed && all_limits_converged(data.limits);
    cplx a0 = data.limits.count(0) ? data.limits[0].a : cplx(0, 0);
    std::string note = data.failure_note;
    attach_trajectories(rep, std::move(data));

    ComparisonFunction c_ext = c.with_negative_extension(tau_extension);
    bool bound_holds = false;
    TauberianCheck tb;
    try {
        tb = tauberian_bound_check(f, psi, lat, c_ext, xs.back(), opts.point_quad);
        bound_holds = tb.holds;
        rep.tau = tb.tau;
    } catch (const NumericError& e) {
        rep.verdict = Verdict::Inconclusive;
        rep.reason = std::string("growth bound check: ") + e.what();
        return rep;
    }

    if (!bound_holds) {
        rep.verdict = Verdict::Rejected;
        rep.reason = "growth bound with negative-axis extension violated at (x=" +
                     std::to_string(tb.witness_x) + ", n=" + std::to_string(tb.witness_n) + ")";
        return rep;
    }
    if (!limits_ok) {
        rep.verdict = Verdict::Inconclusive;
        rep.reason = note.empty() ? "a_0 extrapolation did not converge" : note;
        return rep;
    }

    cplx denom = window_ft_complex(psi, 0.0, c.b, opts.point_quad);
    rep.C = a0 / denom;
    rep.b = c.b;
    rep.verdict = Verdict::SAsymptotic;
    if (psi.name == "gaussian") {
        cplx closed = a0 * std::exp(-c.b * c.b / (4.0 * kPi));
        rep.diagnostics["gaussian_closed_form_C_re"] = closed.real();
        rep.diagnostics["gaussian_closed_form_C_im"] = closed.imag();
        rep.diagnostics["gaussian_closed_form_gap"] =
            std::abs(closed - rep.C) / std::max(std::abs(closed), 1e-300);
    }
    return rep;
}

}  // namespace gabor
