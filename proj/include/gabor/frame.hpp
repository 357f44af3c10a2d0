#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gabor/grid.hpp"
#include "gabor/lattice.hpp"
#include "gabor/quadrature.hpp"
#include "gabor/signal.hpp"
#include "gabor/stft.hpp"
#include "gabor/types.hpp"
#include "gabor/window.hpp"

namespace gabor {

enum class LatticeVerdict { Ok, OkWithWarning, Rejected };

struct LatticeValidation {
    LatticeVerdict verdict = LatticeVerdict::Ok;
    std::string reason;
    bool usable() const { return verdict != LatticeVerdict::Rejected; }
};

/// Heuristic two-sided frame-bound estimates over a finite truncation.
struct FrameBounds {
    double A = 0.0;
    double B = 0.0;
    Lattice truncation;
    std::string method;
};

/// Canonical dual window gamma = S^{-1} psi, tabulated on a uniform grid.
struct DualWindow {
    std::string base_name;
    double alpha = 0.0, beta = 0.0;
    double t0 = 0.0, step = 0.0;
    std::vector<double> gamma;  // real part; imaginary residue tracked below
    double max_imag = 0.0;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
    FrameBounds bounds;

    double extent() const { return t0 + step * static_cast<double>(gamma.size() - 1); }
    Window as_window() const;
};

struct ReconstructionResult {
    std::vector<cplx> values;  // D_gamma(C_psi f) at the eval points
    std::vector<cplx> direct;  // f at the eval points
    double relative_sup_error = 0.0;
    double tail_sup = 0.0;
};

struct DecayFit {
    enum class Kind { Exponential, SuperExponential, PolynomialOnly, Inconclusive };
    Kind kind = Kind::Inconclusive;
    double rate = 0.0;       // linear-fit decay rate of log|gamma| vs |t| (positive = decay)
    double curvature = 0.0;  // quadratic term of the same fit (positive = faster than e^{-rt})
    double loglog_slope = 0.0;
    double fit_residual = 0.0;
};

/// Density-product admissibility. The Gaussian window generates a frame
/// exactly when alpha*beta < 1; other smooth decaying windows are rejected
/// at alpha*beta >= 1 (necessary condition) and pass with a warning below
/// it, where bound estimation is the arbiter.
LatticeValidation validate_lattice(const Window& psi, const Lattice& lat);

/// Truncated frame operator S f = sum V_psi f(ak, bn) M_{bn} T_{ak} psi,
/// sampled at the eval points.
std::vector<cplx> frame_operator_apply(const Window& psi, const Lattice& lat,
                                       const SignalModel& f, const QuadratureSpec& q,
                                       std::span<const double> eval_points);

/// Rayleigh-quotient extremes over random band- and time-limited probes,
/// tightened by power iteration on S and on (B~ I - S). Heuristic
/// estimates, not certificates.
FrameBounds estimate_frame_bounds(const Window& psi, const Lattice& lat, int probes,
                                  const QuadratureSpec& q, std::uint64_t seed = 1,
                                  bool force = false);

/// Richardson iteration gamma_{m+1} = gamma_m + 2/(A+B) (psi - S gamma_m)
/// from gamma_0 = 2/(A+B) psi, run until the sup-norm residual of
/// (psi - S gamma) on the sample grid drops below tol.
DualWindow compute_dual_window(const Window& psi, const Lattice& lat,
                               const FrameBounds& bounds, double tol,
                               int max_iterations = 200, bool force = false);

/// D_gamma(C_psi f) against direct evaluation of f.
ReconstructionResult reconstruct(const SignalModel& f, const Window& psi,
                                 const DualWindow& dual, const Lattice& lat,
                                 std::span<const double> eval_points,
                                 const QuadratureSpec& q);

/// Least-squares decay diagnostics of |gamma| over the outer half of its
/// support.
DecayFit verify_dual_decay(const DualWindow& dual);

/// Random band-limited, time-limited bump used as a frame probe.
SignalModel random_probe(std::mt19937_64& rng, double time_lo, double time_hi,
                         double freq_span);

/// L2-ish norm squared of a function-like signal, by quadrature.
double signal_norm_squared(const SignalModel& f, const QuadratureSpec& q);

}  // namespace gabor
