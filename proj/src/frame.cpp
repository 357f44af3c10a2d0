#include "gabor/frame.hpp"

#include <algorithm>
#include <cmath>

#include "gabor/parallel.hpp"

namespace gabor {

namespace {

constexpr double kRowSkipEnvelope = 1e-30;

Lattice rows_meeting_support(const Lattice& lat, const Window& psi, const Interval& support) {
    // Rows whose window copy is below double underflow on the support
    // contribute exactly zero in double precision; skip them.
    const double radius = psi.envelope.radius_for(kRowSkipEnvelope);
    int k_lo = lat.k_max, k_hi = lat.k_min;
    for (int k = lat.k_min; k <= lat.k_max; ++k) {
        double xk = lat.time(k);
        if (xk + radius >= support.lo && xk - radius <= support.hi) {
            k_lo = std::min(k_lo, k);
            k_hi = std::max(k_hi, k);
        }
    }
    if (k_lo > k_hi) return lat;
    return Lattice(lat.alpha, lat.beta, k_lo, k_hi, lat.n_min, lat.n_max);
}

}  // namespace

LatticeValidation validate_lattice(const Window& psi, const Lattice& lat) {
    const double density = lat.density_product();
    if (psi.name == "gaussian") {
        if (density < 1.0) return {LatticeVerdict::Ok, "gaussian frame criterion: alpha*beta < 1"};
        return {LatticeVerdict::Rejected,
                "gaussian generates a frame iff alpha*beta < 1; got alpha*beta = " +
                    std::to_string(density)};
    }
    if (density >= 1.0)
        return {LatticeVerdict::Rejected,
                "alpha*beta >= 1 excluded for smooth decaying windows (density criterion); got " +
                    std::to_string(density)};
    return {LatticeVerdict::OkWithWarning,
            "alpha*beta < 1 is necessary but not sufficient for this window; "
            "frame-bound estimation is the arbiter"};
}

std::vector<cplx> frame_operator_apply(const Window& psi, const Lattice& lat,
                                       const SignalModel& f, const QuadratureSpec& q,
                                       std::span<const double> eval_points) {
    auto validation = validate_lattice(psi, lat);
    if (!validation.usable())
        throw PreconditionError("frame_operator_apply: " + validation.reason);
    CoefficientGrid grid = gabor_coefficients(f, psi, lat, q);
    return synthesize(grid, psi, lat, eval_points).values;
}

namespace {

// --- tabulated functions on a uniform grid --------------------------------

struct Table {
    double t0 = 0.0, step = 0.0;
    std::vector<cplx> v;

    std::size_t size() const { return v.size(); }
    double t_at(std::size_t i) const { return t0 + step * static_cast<double>(i); }
    std::vector<double> abscissae() const {
        std::vector<double> t(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) t[i] = t_at(i);
        return t;
    }
};

double table_norm2(const Table& g) {
    // trapezoid weights; consistent across all inner products below
    double acc = 0.0;
    for (std::size_t i = 0; i < g.v.size(); ++i) {
        double w = (i == 0 || i + 1 == g.v.size()) ? 0.5 : 1.0;
        acc += w * std::norm(g.v[i]);
    }
    return acc * g.step;
}

cplx table_inner(const Table& a, const Table& b) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        double w = (i == 0 || i + 1 == a.v.size()) ? 0.5 : 1.0;
        acc += w * a.v[i] * std::conj(b.v[i]);
    }
    return acc * a.step;
}

// One application of the truncated frame operator to a tabulated function.
Table apply_frame_operator(const Window& psi, const Lattice& lat, const Table& g,
                           const QuadratureSpec& q) {
    SignalModel sig = signals::uniform_table("frameop", g.t0, g.step, g.v);
    Lattice rows = rows_meeting_support(lat, psi, sig.support);
    CoefficientGrid grid = gabor_coefficients(sig, psi, rows, q);
    auto pts = g.abscissae();
    SynthesisResult s = synthesize(grid, psi, rows, pts);
    Table out;
    out.t0 = g.t0;
    out.step = g.step;
    out.v = std::move(s.values);
    return out;
}

}  // namespace

SignalModel random_probe(std::mt19937_64& rng, double time_lo, double time_hi,
                         double freq_span) {
    std::uniform_real_distribution<double> uc(time_lo, time_hi);
    std::uniform_real_distribution<double> un(-freq_span, freq_span);
    std::uniform_real_distribution<double> uw(0.7, 1.6);
    std::uniform_real_distribution<double> ua(0.5, 1.0);
    std::uniform_real_distribution<double> uph(0.0, kTwoPi);
    std::uniform_int_distribution<int> ucount(1, 3);

    const int bumps = ucount(rng);
    SignalModel probe = signals::zero();
    double max_osc = 0.0;
    for (int m = 0; m < bumps; ++m) {
        const double tc = uc(rng);
        const double nu = un(rng);
        const double w = uw(rng);
        const cplx amp = ua(rng) * std::exp(cplx(0.0, uph(rng)));
        SignalModel bump;
        bump.kind = SignalKind::CatalogExpression;
        bump.id = "bump";
        bump.eval_fn = [tc, nu, w, amp](double t) {
            double u = (t - tc) / w;
            return amp * std::exp(-kPi * u * u) * std::exp(cplx(0.0, kTwoPi * nu * t));
        };
        // a bump is below 1e-80 eight widths out; declaring compact support
        // keeps wide-lattice coefficient grids from scanning empty territory
        bump.support = {tc - 8.0 * w, tc + 8.0 * w};
        bump.growth = {GrowthHint::CompactSupport, std::abs(amp), 0.0, 0.0};
        bump.osc_rate = std::abs(nu);
        probe = m == 0 ? bump : add(probe, bump);
        max_osc = std::max(max_osc, std::abs(nu));
    }
    probe.osc_rate = max_osc;
    probe.id = "probe";
    return probe;
}

double signal_norm_squared(const SignalModel& f, const QuadratureSpec& q) {
    if (f.is_point_masses())
        throw CapabilityError("signal_norm_squared: undefined for point masses");
    double radius = 0.0;
    // envelope radius of |f|^2 below tolerance
    while (radius < 60.0 && f.growth.bound(radius) > q.tail_tol) radius += 0.5;
    Interval dom = Interval{-radius - 1.0, radius + 1.0}.intersect(f.support);
    if (dom.empty()) return 0.0;
    const double cap = std::min(q.panel_width, 1.0 / (4.0 * (1.0 + 2.0 * f.osc_rate)));
    auto edges = panel_edges(dom.lo, dom.hi, cap, f.breakpoints_in(dom.lo, dom.hi));
    auto integrand = [&f](double t) { return cplx(std::norm(f.eval(t)), 0.0); };
    return integrate_refining(integrand, std::move(edges), q).value.real();
}

namespace {

// Hermitian Cholesky with a diagonal jitter; a is row-major m x m.
bool cholesky_in_place(std::vector<cplx>& a, std::size_t m, double jitter) {
    for (std::size_t i = 0; i < m; ++i) a[i * m + i] += jitter;
    for (std::size_t j = 0; j < m; ++j) {
        double d = a[j * m + j].real();
        for (std::size_t p = 0; p < j; ++p) d -= std::norm(a[j * m + p]);
        if (d <= 0.0) return false;
        double l = std::sqrt(d);
        a[j * m + j] = l;
        for (std::size_t i = j + 1; i < m; ++i) {
            cplx s = a[i * m + j];
            for (std::size_t p = 0; p < j; ++p)
                s -= a[i * m + p] * std::conj(a[j * m + p]);
            a[i * m + j] = s / l;
        }
    }
    return true;
}

void cholesky_solve(const std::vector<cplx>& l, std::size_t m, std::vector<cplx>& y) {
    for (std::size_t i = 0; i < m; ++i) {
        cplx s = y[i];
        for (std::size_t p = 0; p < i; ++p) s -= l[i * m + p] * y[p];
        y[i] = s / l[i * m + i].real();
    }
    for (std::size_t ii = m; ii-- > 0;) {
        cplx s = y[ii];
        for (std::size_t p = ii + 1; p < m; ++p) s -= std::conj(l[p * m + ii]) * y[p];
        y[ii] = s / l[ii * m + ii].real();
    }
}

}  // namespace

FrameBounds estimate_frame_bounds(const Window& psi, const Lattice& lat, int probes,
                                  const QuadratureSpec& q, std::uint64_t seed, bool force) {
    auto validation = validate_lattice(psi, lat);
    if (!validation.usable() && !force)
        throw PreconditionError("estimate_frame_bounds: " + validation.reason);
    if (probes < 1) throw ConfigError("estimate_frame_bounds: need at least one probe");

    // Quotients of functions reaching past the node range see one-sided or
    // missing coverage and say nothing about the frame itself; probes are
    // confined to the fully covered region.
    const double t_lo = lat.time(lat.k_min), t_hi = lat.time(lat.k_max);
    const double r_psi = psi.envelope.radius_for(1e-10);
    double cov_lo = t_lo + r_psi, cov_hi = t_hi - r_psi;
    if (cov_lo >= cov_hi) {  // degenerate truncation: no fully covered zone
        cov_lo = t_lo - 1.0;
        cov_hi = t_hi + 1.0;
    }
    double probe_lo = cov_lo + 2.0, probe_hi = cov_hi - 2.0;
    if (probe_lo >= probe_hi) {
        probe_lo = 0.5 * (cov_lo + cov_hi) - 0.1;
        probe_hi = probe_lo + 0.2;
    }
    const double f_hi = lat.frequency(lat.n_max), f_lo = lat.frequency(lat.n_min);
    const double freq_span = std::max(0.5, 0.5 * std::min(std::abs(f_hi), std::abs(f_lo)));

    std::mt19937_64 rng(seed);
    std::vector<SignalModel> pool;
    std::vector<CoefficientGrid> grids;
    std::vector<double> norms;
    for (int i = 0; i < probes; ++i) {
        SignalModel f = random_probe(rng, probe_lo, probe_hi, freq_span);
        double n2 = signal_norm_squared(f, q);
        if (n2 < 1e-12) continue;
        grids.push_back(gabor_coefficients(f, psi, lat, q));
        norms.push_back(n2);
        pool.push_back(std::move(f));
    }
    const std::size_t m = pool.size();
    if (m == 0)
        throw ConfigError("estimate_frame_bounds: all probes numerically degenerate");

    double a_est = kInf, b_est = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (const auto& c : grids[i].values) s += std::norm(c);
        double quotient = s / norms[i];
        a_est = std::min(a_est, quotient);
        b_est = std::max(b_est, quotient);
    }

    // Power iteration on S and on (B~ I - S), carried out inside the span of
    // the probes: the pencil (H, M) with H_ij = <S f_j, f_i>, M_ij = <f_j, f_i>
    // represents both operators there, and the restriction keeps the
    // iteration band-limited (the tabulated free-space iteration drifts into
    // high-frequency modes the truncated lattice cannot see at all).
    if (m >= 2) {
        std::vector<cplx> H(m * m), M(m * m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                cplx h(0.0, 0.0);
                for (std::size_t idx = 0; idx < grids[i].values.size(); ++idx)
                    h += grids[j].values[idx] * std::conj(grids[i].values[idx]);
                H[i * m + j] = h;
                H[j * m + i] = std::conj(h);
            }
        // probe inner products on one shared node grid
        {
            const double pad = 14.0;
            const double cap = 1.0 / (4.0 * (1.0 + 2.0 * freq_span));
            auto edges = panel_edges(probe_lo - pad, probe_hi + pad, cap, {});
            NodeSet ns = nodes_from_edges(edges);
            std::vector<std::vector<cplx>> ev(m, std::vector<cplx>(ns.t.size()));
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t qi = 0; qi < ns.t.size(); ++qi)
                    ev[i][qi] = pool[i].eval(ns.t[qi]);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j <= i; ++j) {
                    cplx s(0.0, 0.0);
                    for (std::size_t qi = 0; qi < ns.t.size(); ++qi)
                        s += ns.w[qi] * ev[j][qi] * std::conj(ev[i][qi]);
                    M[i * m + j] = s;
                    M[j * m + i] = std::conj(s);
                }
        }
        double trace = 0.0;
        for (std::size_t i = 0; i < m; ++i) trace += M[i * m + i].real();
        std::vector<cplx> L = M;
        if (cholesky_in_place(L, m, 1e-12 * trace / static_cast<double>(m))) {
            auto mat_vec = [m](const std::vector<cplx>& a, const std::vector<cplx>& y) {
                std::vector<cplx> z(m, cplx(0, 0));
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < m; ++j) z[i] += a[i * m + j] * y[j];
                return z;
            };
            auto quotient = [&](const std::vector<cplx>& y) {
                std::vector<cplx> hy = mat_vec(H, y), my = mat_vec(M, y);
                cplx num(0, 0), den(0, 0);
                for (std::size_t i = 0; i < m; ++i) {
                    num += std::conj(y[i]) * hy[i];
                    den += std::conj(y[i]) * my[i];
                }
                return den.real() > 0 ? num.real() / den.real() : 0.0;
            };
            const int pi_steps = 40;
            // top of the pencil spectrum
            std::vector<cplx> y(m, cplx(1.0, 0.0));
            for (int it = 0; it < pi_steps; ++it) {
                std::vector<cplx> z = mat_vec(H, y);
                cholesky_solve(L, m, z);
                double nrm = 0.0;
                for (const auto& v : z) nrm += std::norm(v);
                if (!(nrm > 0.0)) break;
                for (auto& v : z) v /= std::sqrt(nrm);
                y = std::move(z);
            }
            b_est = std::max(b_est, quotient(y));
            // bottom via the shifted pencil
            const double shift = 1.3 * b_est;
            std::vector<cplx> w(m, cplx(1.0, 0.0));
            for (int it = 0; it < pi_steps; ++it) {
                std::vector<cplx> hy = mat_vec(H, w), my = mat_vec(M, w);
                std::vector<cplx> z(m);
                for (std::size_t i = 0; i < m; ++i) z[i] = shift * my[i] - hy[i];
                cholesky_solve(L, m, z);
                double nrm = 0.0;
                for (const auto& v : z) nrm += std::norm(v);
                if (!(nrm > 0.0)) break;
                for (auto& v : z) v /= std::sqrt(nrm);
                w = std::move(z);
            }
            a_est = std::min(a_est, quotient(w));
        }
    }

    FrameBounds out;
    out.A = std::max(a_est, 1e-300);
    out.B = std::max(b_est, out.A);
    out.truncation = lat;
    out.method = "probe+power-iteration";
    return out;
}

DualWindow compute_dual_window(const Window& psi, const Lattice& lat,
                               const FrameBounds& bounds, double tol, int max_iterations,
                               bool force) {
    auto validation = validate_lattice(psi, lat);
    if (!validation.usable() && !force)
        throw PreconditionError("compute_dual_window: " + validation.reason);
    if (!(bounds.A > 0.0) || !(bounds.B >= bounds.A))
        throw ConfigError("compute_dual_window: invalid frame bounds");
    if (!(tol > 0.0)) throw ConfigError("compute_dual_window: tolerance must be positive");

    QuadratureSpec q = QuadratureSpec::for_window(psi);
    const double rho = 2.0 / (bounds.A + bounds.B);
    const double step = lat.alpha / 16.0;

    double extent = std::max(6.0, psi.envelope.radius_for(1e-13) + 3.0);
    for (int attempt = 0; attempt < 3; ++attempt) {
        const std::size_t half = static_cast<std::size_t>(std::ceil(extent / step));
        Table gamma;
        gamma.t0 = -static_cast<double>(half) * step;
        gamma.step = step;
        gamma.v.resize(2 * half + 1);

        std::vector<double> psi_samples(gamma.v.size());
        for (std::size_t i = 0; i < gamma.v.size(); ++i) psi_samples[i] = psi.eval(gamma.t_at(i));
        for (std::size_t i = 0; i < gamma.v.size(); ++i) gamma.v[i] = rho * psi_samples[i];

        std::vector<double> history;
        double residual = kInf;
        double max_imag = 0.0;
        int iterations = 0;
        for (int m = 0; m < max_iterations; ++m) {
            Table s_gamma = apply_frame_operator(psi, lat, gamma, q);
            residual = 0.0;
            for (std::size_t i = 0; i < gamma.v.size(); ++i) {
                double r = psi_samples[i] - s_gamma.v[i].real();
                residual = std::max(residual, std::hypot(r, s_gamma.v[i].imag()));
                max_imag = std::max(max_imag, std::abs(s_gamma.v[i].imag()));
                gamma.v[i] += rho * cplx(r, -s_gamma.v[i].imag());
            }
            history.push_back(residual);
            iterations = m + 1;
            if (residual <= tol) break;
        }
        if (residual > tol)
            throw NumericError(
                "compute_dual_window: no convergence after " + std::to_string(iterations) +
                    " iterations (residual " + std::to_string(residual) +
                    "); bad bounds or no frame at this density",
                std::move(history));

        double peak = 0.0;
        for (const auto& v : gamma.v) peak = std::max(peak, std::abs(v));
        const double edge =
            std::max(std::abs(gamma.v.front()), std::abs(gamma.v.back()));
        if (edge > 1e-10 * peak && attempt + 1 < 3) {
            extent += 2.0;  // tails not yet buried; widen and redo
            continue;
        }

        DualWindow dual;
        dual.base_name = psi.name;
        dual.alpha = lat.alpha;
        dual.beta = lat.beta;
        dual.t0 = gamma.t0;
        dual.step = gamma.step;
        dual.gamma.resize(gamma.v.size());
        for (std::size_t i = 0; i < gamma.v.size(); ++i) dual.gamma[i] = gamma.v[i].real();
        dual.max_imag = max_imag;
        dual.iterations = iterations;
        dual.residual = residual;
        dual.residual_history = std::move(history);
        dual.bounds = bounds;
        return dual;
    }
    throw NumericError("compute_dual_window: dual support did not fit the table extent",
                       cplx(0, 0), cplx(0, 0));
}

Window DualWindow::as_window() const {
    Window w = windows::from_samples("dual_of_" + base_name, t0, step, gamma,
                                     DecayClass::K1Exponential);
    return w;
}

ReconstructionResult reconstruct(const SignalModel& f, const Window& psi,
                                 const DualWindow& dual, const Lattice& lat,
                                 std::span<const double> eval_points,
                                 const QuadratureSpec& q) {
    if (dual.alpha != lat.alpha || dual.beta != lat.beta)
        throw UsageError("reconstruct: dual window was computed on a different lattice");
    CoefficientGrid grid = gabor_coefficients(f, psi, lat, q);
    Window gamma = dual.as_window();
    SynthesisResult synth = synthesize(grid, gamma, lat, eval_points);

    ReconstructionResult res;
    res.values = std::move(synth.values);
    res.tail_sup = synth.tail_sup;
    res.direct.resize(eval_points.size());
    for (std::size_t i = 0; i < eval_points.size(); ++i) res.direct[i] = f.eval(eval_points[i]);

    double sup_f = 0.0, sup_err = 0.0;
    for (std::size_t i = 0; i < eval_points.size(); ++i) {
        sup_f = std::max(sup_f, std::abs(res.direct[i]));
        sup_err = std::max(sup_err, std::abs(res.values[i] - res.direct[i]));
    }
    res.relative_sup_error = sup_f > 0.0 ? sup_err / sup_f : (sup_err > 0.0 ? kInf : 0.0);
    return res;
}

DecayFit verify_dual_decay(const DualWindow& dual) {
    DecayFit fit;
    const std::size_t n = dual.gamma.size();
    if (n < 8) return fit;

    double peak = 0.0;
    for (double v : dual.gamma) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) return fit;

    const double t_hi = std::max(std::abs(dual.t0), std::abs(dual.extent()));
    double min_outer = kInf;
    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < n; ++i) {
        double t = std::abs(dual.t0 + dual.step * static_cast<double>(i));
        double a = std::abs(dual.gamma[i]);
        if (t < 0.5 * t_hi) continue;
        min_outer = std::min(min_outer, a);
        if (a > 1e-280) {
            ts.push_back(t);
            logs.push_back(std::log(a));
        }
    }
    if (ts.size() < 6) return fit;
    if (min_outer > 1e-6 * peak) return fit;  // insufficient dynamic range

    // quadratic LS fit: log|gamma| ~ c0 + c1 t + c2 t^2
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, y0 = 0, y1 = 0, y2 = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double t = ts[i], y = logs[i];
        double t2 = t * t;
        s0 += 1;
        s1 += t;
        s2 += t2;
        s3 += t2 * t;
        s4 += t2 * t2;
        y0 += y;
        y1 += y * t;
        y2 += y * t2;
    }
    // Cramer on the 3x3 normal system
    auto det3 = [](double a, double b, double c, double d, double e, double f, double g,
                   double h, double i) {
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    };
    double D = det3(s0, s1, s2, s1, s2, s3, s2, s3, s4);
    if (std::abs(D) < 1e-300) return fit;
    double c1 = det3(s0, y0, s2, s1, y1, s3, s2, y2, s4) / D;
    double c2 = det3(s0, s1, y0, s1, s2, y1, s2, s3, y2) / D;

    // plain linear fit for the reported rate
    double lin_den = s0 * s2 - s1 * s1;
    double lin_slope = lin_den != 0.0 ? (s0 * y1 - s1 * y0) / lin_den : 0.0;

    // log-log slope for the polynomial diagnosis
    double u0 = 0, u1 = 0, u2 = 0, v1 = 0, w0 = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double u = std::log(1.0 + ts[i]);
        u0 += 1;
        u1 += u;
        u2 += u * u;
        v1 += logs[i] * u;
        w0 += logs[i];
    }
    double ll_den = u0 * u2 - u1 * u1;
    double ll_slope = ll_den != 0.0 ? (u0 * v1 - u1 * w0) / ll_den : 0.0;

    double ss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double pred = (y0 - c1 * s1 - c2 * s2) / s0 + c1 * ts[i] + c2 * ts[i] * ts[i];
        ss += (logs[i] - pred) * (logs[i] - pred);
    }

    fit.rate = -lin_slope;
    fit.curvature = -c2;
    fit.loglog_slope = ll_slope;
    fit.fit_residual = std::sqrt(ss / static_cast<double>(ts.size()));
    if (fit.curvature > 0.05)
        fit.kind = DecayFit::Kind::SuperExponential;
    else if (fit.rate > 0.2)
        fit.kind = DecayFit::Kind::Exponential;
    else if (ll_slope <= -1.5)
        fit.kind = DecayFit::Kind::PolynomialOnly;
    else
        fit.kind = DecayFit::Kind::Inconclusive;
    return fit;
}

}  // namespace gabor
