#include "gabor/stft.hpp"

#include <algorithm>
#include <cmath>

#include "gabor/parallel.hpp"

namespace gabor {

namespace {

cplx unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

cplx point_mass_stft(const SignalModel& f, const Window& psi, double x, double xi) {
    cplx acc(0.0, 0.0);
    for (const auto& m : f.masses)
        acc += m.weight * psi.eval(m.location - x) * unit_phase(-kTwoPi * xi * m.location);
    return acc;
}

cplx integrate_stft(const SignalModel& f, const Window& psi, double x, double xi,
                    double log_denom, const QuadratureSpec& q) {
    const double radius = effective_cutoff(f, psi, x, q);
    Interval dom = Interval{x - radius, x + radius}.intersect(f.support);
    if (dom.empty()) return {0.0, 0.0};

    const double cap =
        std::min(q.panel_width, 1.0 / (4.0 * (1.0 + std::abs(xi) + f.osc_rate)));
    auto edges = panel_edges(dom.lo, dom.hi, cap, f.breakpoints_in(dom.lo, dom.hi));

    auto integrand = [&](double t) {
        return f.scaled_eval(t, log_denom) * psi.eval(t - x) * unit_phase(-kTwoPi * xi * t);
    };
    return integrate_refining(integrand, std::move(edges), q).value;
}

}  // namespace

cplx stft_point(const SignalModel& f, const Window& psi, double x, double xi,
                const QuadratureSpec& q) {
    if (f.is_point_masses()) return point_mass_stft(f, psi, x, xi);
    return integrate_stft(f, psi, x, xi, 0.0, q);
}

cplx stft_point_scaled(const SignalModel& f, const Window& psi, double x, double xi,
                       double log_denom, const QuadratureSpec& q) {
    if (f.is_point_masses())
        return point_mass_stft(f, psi, x, xi) * std::exp(-log_denom);
    return integrate_stft(f, psi, x, xi, log_denom, q);
}

namespace {

// One full-lattice evaluation over a fixed panel decomposition. Rows are
// independent; node values, per-frequency phase bases and steps are shared.
std::vector<cplx> grid_pass(const SignalModel& f, const Window& psi, const Lattice& lat,
                            const std::vector<double>& edges,
                            const std::vector<double>& row_radius) {
    const NodeSet ns = nodes_from_edges(edges);
    const std::size_t nq = ns.t.size();
    const int n_count = lat.n_count();

    std::vector<cplx> wf(nq);   // w_q * f(t_q)
    std::vector<cplx> base(nq); // e^{-2 pi i beta n_min t_q}
    std::vector<cplx> step(nq); // e^{-2 pi i beta t_q}
    for (std::size_t qi = 0; qi < nq; ++qi) {
        wf[qi] = ns.w[qi] * f.eval(ns.t[qi]);
        base[qi] = unit_phase(-kTwoPi * lat.beta * lat.n_min * ns.t[qi]);
        step[qi] = unit_phase(-kTwoPi * lat.beta * ns.t[qi]);
    }

    std::vector<cplx> values(lat.node_count(), cplx(0.0, 0.0));
    parallel_for(static_cast<std::size_t>(lat.k_count()), [&](std::size_t ki) {
        const int k = lat.k_min + static_cast<int>(ki);
        const double xk = lat.time(k);
        const double radius = row_radius[ki];
        const auto lo = std::lower_bound(ns.t.begin(), ns.t.end(), xk - radius);
        const auto hi = std::upper_bound(ns.t.begin(), ns.t.end(), xk + radius);
        std::vector<cplx> acc(static_cast<std::size_t>(n_count), cplx(0.0, 0.0));
        for (auto it = lo; it != hi; ++it) {
            const std::size_t qi = static_cast<std::size_t>(it - ns.t.begin());
            const cplx d = wf[qi] * psi.eval(ns.t[qi] - xk);
            cplx p = base[qi];
            for (int m = 0; m < n_count; ++m) {
                acc[static_cast<std::size_t>(m)] += d * p;
                p *= step[qi];
            }
        }
        std::copy(acc.begin(), acc.end(),
                  values.begin() + static_cast<std::ptrdiff_t>(ki) * n_count);
    });
    return values;
}

}  // namespace

CoefficientGrid gabor_coefficients(const SignalModel& f, const Window& psi,
                                   const Lattice& lat, const QuadratureSpec& q) {
    CoefficientGrid grid(lat, f.id, psi.name);

    if (f.is_point_masses()) {
        for (int k = lat.k_min; k <= lat.k_max; ++k)
            for (int n = lat.n_min; n <= lat.n_max; ++n)
                grid.at(k, n) = point_mass_stft(f, psi, lat.time(k), lat.frequency(n));
        return grid;
    }

    std::vector<double> row_radius(static_cast<std::size_t>(lat.k_count()));
    double lo = kInf, hi = -kInf;
    for (int k = lat.k_min; k <= lat.k_max; ++k) {
        double r = effective_cutoff(f, psi, lat.time(k), q);
        row_radius[static_cast<std::size_t>(k - lat.k_min)] = r;
        lo = std::min(lo, lat.time(k) - r);
        hi = std::max(hi, lat.time(k) + r);
    }
    Interval dom = Interval{lo, hi}.intersect(f.support);
    if (dom.empty()) return grid;  // window never meets the support

    const double beta_extreme =
        std::max(std::abs(lat.frequency(lat.n_min)), std::abs(lat.frequency(lat.n_max)));
    const double cap = std::min(q.panel_width, 1.0 / (4.0 * (1.0 + beta_extreme + f.osc_rate)));
    auto edges = panel_edges(dom.lo, dom.hi, cap, f.breakpoints_in(dom.lo, dom.hi));

    std::vector<cplx> prev = grid_pass(f, psi, lat, edges, row_radius);
    std::size_t worst_idx = 0;
    cplx worst_cur(0, 0), worst_prev(0, 0);
    for (int level = 1; level <= q.max_halvings; ++level) {
        edges = halve_edges(edges);
        std::vector<cplx> cur = grid_pass(f, psi, lat, edges, row_radius);
        double worst = 0.0;
        worst_idx = 0;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            double d = std::abs(cur[i] - prev[i]) / std::max(1.0, std::abs(cur[i]));
            if (d > worst) {
                worst = d;
                worst_idx = i;
            }
        }
        if (worst <= q.tail_tol) {
            grid.values = std::move(cur);
            return grid;
        }
        worst_cur = cur[worst_idx];
        worst_prev = prev[worst_idx];
        prev = std::move(cur);
    }
    const int k = lat.k_min + static_cast<int>(worst_idx / static_cast<std::size_t>(lat.n_count()));
    const int n = lat.n_min + static_cast<int>(worst_idx % static_cast<std::size_t>(lat.n_count()));
    throw NumericError("gabor_coefficients: quadrature did not stabilize at node (k=" +
                           std::to_string(k) + ", n=" + std::to_string(n) + ")",
                       worst_cur, worst_prev);
}

SynthesisResult synthesize(const CoefficientGrid& grid, const Window& gamma,
                           const Lattice& lat, std::span<const double> eval_points) {
    if (!grid.lattice.same_geometry(lat))
        throw UsageError("synthesize: grid lattice does not match the declared lattice");
    if (!grid.all_finite())
        throw NumericError("synthesize: grid contains non-finite coefficients",
                           cplx(0, 0), cplx(0, 0));

    const int n_count = lat.n_count();
    std::vector<double> row_max(static_cast<std::size_t>(lat.k_count()), 0.0);
    for (int k = lat.k_min; k <= lat.k_max; ++k) {
        double m = 0.0;
        for (int n = lat.n_min; n <= lat.n_max; ++n) m = std::max(m, std::abs(grid.at(k, n)));
        row_max[static_cast<std::size_t>(k - lat.k_min)] = m;
    }
    double scale = 0.0;
    for (double m : row_max) scale = std::max(scale, m);
    const double skip_below = scale * 1e-18;

    SynthesisResult res;
    res.values.assign(eval_points.size(), cplx(0.0, 0.0));
    res.boundary.assign(eval_points.size(), cplx(0.0, 0.0));

    parallel_for(eval_points.size(), [&](std::size_t pi) {
        const double t = eval_points[pi];
        cplx full(0.0, 0.0), shell(0.0, 0.0);
        const cplx estep = unit_phase(kTwoPi * lat.beta * t);
        const cplx ebase = unit_phase(kTwoPi * lat.beta * lat.n_min * t);
        for (int k = lat.k_min; k <= lat.k_max; ++k) {
            const double dist = t - lat.time(k);
            const double g = gamma.eval(dist);
            if (g == 0.0) continue;
            const double rm = row_max[static_cast<std::size_t>(k - lat.k_min)];
            if (rm * std::abs(g) < skip_below) continue;
            cplx inner(0.0, 0.0), inner_shell(0.0, 0.0);
            cplx p = ebase;
            for (int m = 0; m < n_count; ++m) {
                const cplx term = grid.at(k, lat.n_min + m) * p;
                inner += term;
                if (m == 0 || m == n_count - 1) inner_shell += term;
                p *= estep;
            }
            full += inner * g;
            if (k == lat.k_min || k == lat.k_max)
                shell += inner * g;
            else
                shell += inner_shell * g;
        }
        res.values[pi] = full;
        res.boundary[pi] = shell;
    });
    for (const auto& s : res.boundary) res.tail_sup = std::max(res.tail_sup, std::abs(s));
    return res;
}

cplx dual_pairing(const CoefficientGrid& grid_f, const CoefficientGrid& grid_phi) {
    const Lattice& lat = grid_f.lattice;
    if (!lat.same_geometry(grid_phi.lattice))
        throw UsageError("dual_pairing: grids live on different lattices");
    if (lat.n_min != -lat.n_max)
        throw UsageError("dual_pairing: frequency range must be symmetric for reflection");
    cplx acc(0.0, 0.0);
    for (int k = lat.k_min; k <= lat.k_max; ++k)
        for (int n = lat.n_min; n <= lat.n_max; ++n)
            acc += grid_f.at(k, n) * grid_phi.at(k, -n);
    return acc;
}

}  // namespace gabor
