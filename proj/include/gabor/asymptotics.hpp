#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gabor/comparison.hpp"
#include "gabor/frame.hpp"
#include "gabor/growth.hpp"
#include "gabor/lattice.hpp"
#include "gabor/quadrature.hpp"
#include "gabor/signal.hpp"
#include "gabor/types.hpp"
#include "gabor/window.hpp"

namespace gabor {

enum class Verdict { SAsymptotic, Inconclusive, Rejected };

std::string to_string(Verdict v);

/// Geometric probe schedule x_j = x0 * ratio^j, capped where the comparison
/// function leaves floating-point range (exponential regime) or at a fixed
/// horizon sized for the slower algebraic convergence (polynomial regime).
std::vector<double> default_x_schedule(const ComparisonFunction& c);

struct NetSignalEntry {
    double h = 0.0;
    SignalModel f_h;  // f(. + h) / c(h), evaluated in scaled form
};

/// The translation net f_h = T_{-h} f / c(h).
std::vector<NetSignalEntry> translation_net(const SignalModel& f, const ComparisonFunction& c,
                                            std::span<const double> h_schedule);

/// Coefficient grids of a translation net, ready for the net-convergence
/// detector.
std::vector<NetEntry> net_coefficient_grids(const std::vector<NetSignalEntry>& net,
                                            const Window& psi, const Lattice& lat,
                                            const QuadratureSpec& q);

struct LimitEntry {
    cplx a{0.0, 0.0};
    double residual = 0.0;
    bool converged = false;
    std::string note;
};
using LimitMap = std::map<int, LimitEntry>;

/// Frequency-wise normalized trajectories g_n(x) = e^{2 pi i b n x}
/// V_psi f(x, beta n) / c(x) along the schedule, with their tail limits.
struct CoefficientLimitData {
    std::vector<double> xs;
    std::vector<int> ns;
    std::vector<std::vector<cplx>> rows;  // rows[j][ni] = g_{ns[ni]}(xs[j])
    LimitMap limits;
    bool quadrature_failed = false;
    std::string failure_note;
};

CoefficientLimitData compute_coefficient_limits(const SignalModel& f, const Window& psi,
                                                double beta, int n_lo, int n_hi,
                                                const ComparisonFunction& c,
                                                std::span<const double> x_schedule,
                                                const QuadratureSpec& q);

/// Tail-averaged limits a_n for every n in the lattice frequency range.
LimitMap sasymp_coefficient_limits(const SignalModel& f, const Window& psi,
                                   const Lattice& lat, const ComparisonFunction& c,
                                   std::span<const double> x_schedule,
                                   const QuadratureSpec& q);

struct TauberianCheck {
    bool holds = false;
    double tau = 0.0;
    double sup_ratio = 0.0;
    double witness_x = 0.0;
    int witness_n = 0;
};

/// Growth bound sup |V_psi f(x, beta n)| / (c(x) (1+|n|)^tau): returns the
/// smallest fitted tau whose sup is stable (+-10%) under doubling of the
/// probe range, else the violating (x, n).
TauberianCheck tauberian_bound_check(const SignalModel& f, const Window& psi,
                                     const Lattice& lat, const ComparisonFunction& c,
                                     double x_max, const QuadratureSpec& q);

/// psi-hat(xi + i b / (2 pi)) = integral psi(t) e^{b t} e^{-2 pi i xi t} dt;
/// closed form when the window has one, quadrature otherwise.
cplx window_ft_complex(const Window& psi, double xi, double b, const QuadratureSpec& q);

struct ConstantsFit {
    cplx C{0.0, 0.0};
    double b = 0.0;
    double residual = 0.0;
};

/// Fits (C, b) to a_n = C conj(psi-hat(-beta n + i b/(2 pi))) by bracketed
/// golden-section search on b with C(b) pinned by the n = 0 equation.
ConstantsFit solve_asymptote_constants(const LimitMap& a_n, const Window& psi, double beta,
                                       const QuadratureSpec& q, double b_max = 8.0);

struct RouteDiagnostics {
    bool ran = false;
    bool net_converged = false;
    bool agreement = true;
    double limit_match_rel_err = -1.0;  // synthesized net limit vs C e^{bx}; -1 = not evaluated
    std::string note;
};

struct AsymptoticReport {
    Verdict verdict = Verdict::Inconclusive;
    cplx C{0.0, 0.0};
    double b = 0.0;
    double tau = 0.0;
    int theorem = 41;
    LimitMap a_n;
    double solve_residual = 0.0;
    double max_extrapolation_residual = 0.0;
    RouteDiagnostics route;
    std::string reason;
    // trajectory data for report emission
    std::vector<double> xs;
    std::vector<int> ns;
    std::vector<std::vector<cplx>> trajectories;
    std::map<std::string, double> diagnostics;
};

struct AnalysisOptions {
    std::vector<double> x_schedule;  // empty = default for the comparison
    double solve_tol = 1e-3;
    double b_max = 8.0;
    bool run_net_route = true;
    QuadratureSpec point_quad{};         // per-point evaluations
    QuadratureSpec grid_quad{.max_halvings = 4};  // net grids fail fast
    const DualWindow* dual = nullptr;    // enables the synthesized-limit check
};

/// Frequency-wise limits + growth bound; on joint success solves (C, b) and
/// sets the verdict, cross-validated against the net-convergence route.
AsymptoticReport verify_sasymptotics(const SignalModel& f, const Window& psi,
                                     const Lattice& lat, const ComparisonFunction& c,
                                     const AnalysisOptions& opts = {});

/// Tauberian theorem for positive non-decreasing f on [0, inf) against
/// c(x) = e^{b x} L(e^x) with a nonnegative window: the n-wise limits force
/// lim f(x)/c(x) = a_0 / integral(psi e^{bt}). The directly measured ratio
/// and its gap to the prediction are reported as diagnostics.
AsymptoticReport monotone_tauberian(const SignalModel& f, const Window& psi,
                                    const ComparisonFunction& c, int n_extent,
                                    const AnalysisOptions& opts = {});

struct WienerCheck {
    bool holds = false;
    double witness_xi = 0.0;
    double min_ratio = 0.0;  // min over xi of |psi-hat| relative to its decay envelope
};

/// Pointwise nonvanishing of psi-hat(xi + i b/(2 pi)) on the line,
/// operationalized as envelope-relative positivity with local minima
/// refined by ternary search.
WienerCheck wiener_condition_check(const Window& psi, double b,
                                   std::span<const double> xi_grid = {});

/// Single-frequency Tauberian route: needs only the n = 0 limit plus the
/// growth bound with c extended as e^{-tau x} on the negative axis, and a
/// window passing the Wiener check.
AsymptoticReport wiener_tauberian(const SignalModel& f, const Window& psi,
                                  const Lattice& lat, const ComparisonFunction& c,
                                  double tau_extension, const AnalysisOptions& opts = {});

}  // namespace gabor
