#include "gabor/growth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gabor/errors.hpp"

namespace gabor {

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double rms = 0.0;
    std::size_t points = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    LineFit f;
    f.points = x.size();
    if (x.size() < 2) return f;
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double den = n * sxx - sx * sx;
    if (den <= 0) return f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    if (x.size() > 2) f.slope_se = std::sqrt(ss / (n - 2.0) / (sxx - sx * sx / n));
    return f;
}

constexpr double kLogFloor = -690.0;  // exclude underflowed magnitudes from fits

// log of per-shell maxima; shells with no nonzero entry are dropped.
LineFit fit_shell_envelope(const std::vector<double>& shell_max,
                           bool log_abscissa) {
    std::vector<double> xs, ys;
    for (std::size_t s = 0; s < shell_max.size(); ++s) {
        if (!(shell_max[s] > 0.0)) continue;
        double ly = std::log(shell_max[s]);
        if (ly < kLogFloor) continue;
        xs.push_back(log_abscissa ? std::log(1.0 + static_cast<double>(s))
                                  : static_cast<double>(s));
        ys.push_back(ly);
    }
    return fit_line(xs, ys);
}

struct ShellData {
    std::vector<double> row_max;    // by |k|
    std::vector<double> col_max;    // by |n|
    std::vector<double> l1_max;     // by |k|+|n|
    double grid_max = 0.0;
};

ShellData shell_maxima(const CoefficientGrid& g) {
    const Lattice& lat = g.lattice;
    ShellData d;
    d.row_max.assign(static_cast<std::size_t>(std::max(std::abs(lat.k_min), std::abs(lat.k_max))) + 1, 0.0);
    d.col_max.assign(static_cast<std::size_t>(std::max(std::abs(lat.n_min), std::abs(lat.n_max))) + 1, 0.0);
    d.l1_max.assign(d.row_max.size() + d.col_max.size() - 1, 0.0);
    for (int k = lat.k_min; k <= lat.k_max; ++k)
        for (int n = lat.n_min; n <= lat.n_max; ++n) {
            double a = std::abs(g.at(k, n));
            auto sk = static_cast<std::size_t>(std::abs(k));
            auto sn = static_cast<std::size_t>(std::abs(n));
            d.row_max[sk] = std::max(d.row_max[sk], a);
            d.col_max[sn] = std::max(d.col_max[sn], a);
            d.l1_max[sk + sn] = std::max(d.l1_max[sk + sn], a);
            d.grid_max = std::max(d.grid_max, a);
        }
    return d;
}

int distinct_shells(int lo, int hi) {
    int smin = (lo <= 0 && hi >= 0) ? 0 : std::min(std::abs(lo), std::abs(hi));
    int smax = std::max(std::abs(lo), std::abs(hi));
    return smax - smin + 1;
}

double envelope_weight(DualClassMode mode, double tau, int k, int n) {
    if (mode == DualClassMode::ExpPol)
        return std::exp(std::min(690.0, tau * std::abs(k))) *
               std::pow(1.0 + std::abs(n), tau);
    return std::pow(1.0 + std::abs(k) + std::abs(n), tau);
}

}  // namespace

double k1_seminorm(const Window& phi, int p, std::span<const double> grid) {
    if (p < 0) throw ConfigError("k1_seminorm: order must be >= 0");
    if (p > phi.max_derivative_order())
        throw CapabilityError("k1_seminorm: window '" + phi.name + "' has derivatives up to order " +
                              std::to_string(phi.max_derivative_order()) + ", requested " +
                              std::to_string(p));
    double best = 0.0;
    for (double x : grid) {
        double w = std::exp(p * std::abs(x));
        for (int j = 0; j <= p; ++j)
            best = std::max(best, w * std::abs(phi.derivative(j, x)));
    }
    return best;
}

double k1_seminorm(const SignalModel& phi, int p, std::span<const double> grid) {
    if (p < 0) throw ConfigError("k1_seminorm: order must be >= 0");
    if (phi.is_point_masses())
        throw CapabilityError("k1_seminorm: point-mass combinations have no derivatives");
    const double h = 1e-3;
    // stacked central differences up to order p
    std::function<cplx(double, int)> deriv = [&](double x, int order) -> cplx {
        if (order == 0) return phi.eval(x);
        return (deriv(x + h, order - 1) - deriv(x - h, order - 1)) / (2.0 * h);
    };
    double best = 0.0;
    for (double x : grid) {
        double w = std::exp(p * std::abs(x));
        for (int j = 0; j <= p; ++j) best = std::max(best, w * std::abs(deriv(x, j)));
    }
    return best;
}

GrowthEstimate classify_grid_growth(const CoefficientGrid& grid, double tau_cap) {
    const Lattice& lat = grid.lattice;
    if (distinct_shells(lat.k_min, lat.k_max) < 8 || distinct_shells(lat.n_min, lat.n_max) < 8)
        throw ConfigError("classify_grid_growth: ranges too small for fitting "
                          "(need >= 8 shells in each index)");

    ShellData d = shell_maxima(grid);
    GrowthEstimate est;
    if (d.grid_max == 0.0) {
        est.cls = GrowthClass::RapidlyDecreasing;
        return est;  // all-zero grid: decays trivially, tau = 0
    }

    LineFit fk = fit_shell_envelope(d.row_max, false);
    LineFit fn = fit_shell_envelope(d.col_max, true);
    LineFit fj = fit_shell_envelope(d.l1_max, true);
    est.k_slope = fk.points >= 3 ? fk.slope : 0.0;
    est.n_slope = fn.points >= 3 ? fn.slope : 0.0;
    est.joint_slope = fj.points >= 3 ? fj.slope : 0.0;

    const double tested_order = 4.0;
    if (fk.points >= 3 && fn.points >= 3 && est.k_slope < -tested_order &&
        est.n_slope < -tested_order) {
        est.cls = GrowthClass::RapidlyDecreasingExp;
        est.tau = est.joint_slope;
        est.residual = std::max(fk.rms, fn.rms);
        return est;
    }
    if (fj.points >= 3 && est.joint_slope < -tested_order) {
        est.cls = GrowthClass::RapidlyDecreasing;
        est.tau = est.joint_slope;
        est.residual = fj.rms;
        return est;
    }
    // polynomial: log max grows at most logarithmically in 1+|k|+|n| and the
    // log-log fit is actually linear (exponential grids show up as strong
    // convexity here)
    if (fj.points >= 3 && est.joint_slope + fj.slope_se <= tau_cap && fj.rms <= 0.5) {
        est.cls = GrowthClass::Polynomial;
        est.tau = est.joint_slope + fj.slope_se;
        est.residual = fj.rms;
        return est;
    }
    double tau_k = fk.points >= 3 ? fk.slope + fk.slope_se : 0.0;
    double tau_n = fn.points >= 3 ? fn.slope + fn.slope_se : 0.0;
    if (tau_k <= tau_cap && tau_n <= tau_cap) {
        est.cls = GrowthClass::ExpPol;
        est.tau = std::max(tau_k, tau_n);
        est.residual = std::max(fk.rms, fn.rms);
        return est;
    }
    est.cls = GrowthClass::Unclassified;
    est.tau = std::max(tau_k, tau_n);
    est.residual = std::max(fk.rms, fn.rms);
    return est;
}

BoundedFamilyResult check_bounded_family(std::span<const CoefficientGrid> grids,
                                         DualClassMode mode, double tau_cap) {
    BoundedFamilyResult res;
    if (grids.empty()) {
        res.bounded = true;  // vacuous
        return res;
    }
    const Lattice& lat = grids.front().lattice;
    for (const auto& g : grids)
        if (!g.lattice.same_geometry(lat))
            throw UsageError("check_bounded_family: grids live on different lattices");

    CoefficientGrid max_grid(lat, "family-max", grids.front().window_id);
    for (const auto& g : grids)
        for (std::size_t i = 0; i < g.values.size(); ++i)
            max_grid.values[i] =
                std::max(std::abs(max_grid.values[i]), std::abs(g.values[i]));

    res.max_grid_estimate = classify_grid_growth(max_grid, tau_cap);
    const GrowthClass c = res.max_grid_estimate.cls;
    if (mode == DualClassMode::ExpPol)
        res.bounded = c != GrowthClass::Unclassified;
    else
        res.bounded = c == GrowthClass::Polynomial || c == GrowthClass::RapidlyDecreasing ||
                      c == GrowthClass::RapidlyDecreasingExp;
    if (res.bounded) {
        res.tau = std::max(res.max_grid_estimate.tau, 0.0);
        return res;
    }
    EnvelopeWitness w;
    for (std::size_t gi = 0; gi < grids.size(); ++gi) {
        const auto& g = grids[gi];
        for (int k = lat.k_min; k <= lat.k_max; ++k)
            for (int n = lat.n_min; n <= lat.n_max; ++n) {
                double weighted = std::abs(g.at(k, n)) / envelope_weight(mode, tau_cap, k, n);
                if (weighted > w.weighted_value) w = {k, n, gi, weighted};
            }
    }
    res.witness = w;
    return res;
}

ConvergenceReport detect_net_convergence(const std::vector<NetEntry>& net,
                                         DualClassMode mode, const NetOptions& opts) {
    if (net.size() < 4)
        throw UsageError("detect_net_convergence: need at least 4 net entries");
    for (std::size_t i = 1; i < net.size(); ++i)
        if (!(net[i].lambda > net[i - 1].lambda))
            throw UsageError("detect_net_convergence: lambda values must be strictly increasing");
    const Lattice& lat = net.front().grid.lattice;
    for (const auto& e : net)
        if (!e.grid.lattice.same_geometry(lat))
            throw UsageError("detect_net_convergence: grids live on different lattices");

    ConvergenceReport rep;
    const std::size_t m = net.size();
    const std::size_t tail_start = m / 2;
    const std::size_t quarter_start = m - std::max<std::size_t>(2, (m + 3) / 4);

    bool finite = true;
    for (const auto& e : net) finite = finite && e.grid.all_finite();

    double grid_scale = finite ? net.back().grid.max_abs() : 0.0;
    const double floor = 1e-3 * grid_scale + 1e-300;

    rep.limit_grid = CoefficientGrid(lat, "net-limit", net.back().grid.window_id);
    rep.node_tail_histories.resize(lat.node_count());

    bool cauchy = finite;
    double worst_delta = 0.0;
    std::size_t worst_idx = 0;
    for (std::size_t idx = 0; idx < lat.node_count(); ++idx) {
        auto& hist = rep.node_tail_histories[idx];
        for (std::size_t j = tail_start; j < m; ++j) hist.push_back(net[j].grid.values[idx]);
        double node_delta = 0.0;
        for (std::size_t j = 1; j < hist.size(); ++j) {
            double scale = std::max(std::abs(hist[j]), floor);
            node_delta = std::max(node_delta, std::abs(hist[j] - hist[j - 1]) / scale);
        }
        cplx acc(0.0, 0.0);
        std::size_t cnt = 0;
        for (std::size_t j = quarter_start; j < m; ++j) {
            acc += net[j].grid.values[idx];
            ++cnt;
        }
        rep.limit_grid.values[idx] = cnt ? acc / static_cast<double>(cnt) : cplx(0, 0);
        if (node_delta > worst_delta) {
            worst_delta = node_delta;
            worst_idx = idx;
        }
        if (node_delta > opts.node_tol) cauchy = false;
    }
    rep.max_tail_delta = worst_delta;
    rep.worst_k = lat.k_min + static_cast<int>(worst_idx / static_cast<std::size_t>(lat.n_count()));
    rep.worst_n = lat.n_min + static_cast<int>(worst_idx % static_cast<std::size_t>(lat.n_count()));

    // uniform bound over the tail (the lambda >= lambda0 requirement)
    bool uniform_ok = false;
    if (finite) {
        std::vector<CoefficientGrid> tail_grids;
        for (std::size_t j = tail_start; j < m; ++j) tail_grids.push_back(net[j].grid);
        BoundedFamilyResult fam = check_bounded_family(tail_grids, mode, opts.tau_cap);
        uniform_ok = fam.bounded;
        rep.uniform_tau = fam.tau;
        rep.lambda0 = net[tail_start].lambda;
    }

    // informational: does the grid maximum sit on the index boundary?
    if (finite && grid_scale > 0.0) {
        double best = -1.0;
        int bk = lat.k_min, bn = lat.n_min;
        for (int k = lat.k_min; k <= lat.k_max; ++k)
            for (int n = lat.n_min; n <= lat.n_max; ++n) {
                double a = std::abs(net.back().grid.at(k, n));
                if (a > best) {
                    best = a;
                    bk = k;
                    bn = n;
                }
            }
        rep.boundary_mass = bk == lat.k_min || bk == lat.k_max || bn == lat.n_min || bn == lat.n_max;
    }

    rep.converged = cauchy && uniform_ok;
    if (!finite)
        rep.diagnostic = "net contains non-finite coefficients";
    else if (!cauchy)
        rep.diagnostic = "per-node Cauchy criterion failed on the tail";
    else if (!uniform_ok)
        rep.diagnostic = "uniform growth bound failed on the tail";
    else if (rep.boundary_mass)
        rep.diagnostic = "converged; grid maximum sits on the truncation boundary";
    return rep;
}

namespace {

// position of the envelope-weighted maximum, as a max-norm shell index
bool weighted_max_in_inner_half(const CoefficientGrid& grid,
                                const std::function<double(int, int)>& weight) {
    const Lattice& lat = grid.lattice;
    double best = -1.0;
    int bs = 0;
    int smax = 0;
    for (int k = lat.k_min; k <= lat.k_max; ++k)
        for (int n = lat.n_min; n <= lat.n_max; ++n) {
            int shell = std::max(std::abs(k), std::abs(n));
            smax = std::max(smax, shell);
            double v = std::abs(grid.at(k, n)) * weight(k, n);
            if (v > best) {
                best = v;
                bs = shell;
            }
        }
    if (best <= 0.0) return true;  // zero grid passes trivially
    return bs <= smax / 2;
}

}  // namespace

bool passes_rapid_exp_envelope(const CoefficientGrid& grid, int p) {
    return weighted_max_in_inner_half(grid, [p](int k, int n) {
        return std::exp(std::min(690.0, static_cast<double>(p) * std::abs(k))) *
               std::pow(1.0 + std::abs(n), p);
    });
}

bool passes_rapid_envelope(const CoefficientGrid& grid, int p) {
    return weighted_max_in_inner_half(grid, [p](int k, int n) {
        return std::pow(1.0 + std::abs(k) + std::abs(n), p);
    });
}

bool within_exp_pol_envelope(const CoefficientGrid& grid, double tau) {
    return weighted_max_in_inner_half(grid, [tau](int k, int n) {
        return 1.0 / (std::exp(std::min(690.0, tau * std::abs(k))) *
                      std::pow(1.0 + std::abs(n), tau));
    });
}

bool within_polynomial_envelope(const CoefficientGrid& grid, double tau) {
    return weighted_max_in_inner_half(grid, [tau](int k, int n) {
        return 1.0 / std::pow(1.0 + std::abs(k) + std::abs(n), tau);
    });
}

}  // namespace gabor
