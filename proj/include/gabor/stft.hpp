#pragma once

#include <span>
#include <vector>

#include "gabor/grid.hpp"
#include "gabor/lattice.hpp"
#include "gabor/quadrature.hpp"
#include "gabor/signal.hpp"
#include "gabor/types.hpp"
#include "gabor/window.hpp"

namespace gabor {

/// V_psi f(x, xi) = integral of f(t) conj(psi(t-x)) e^{-2 pi i xi t} dt.
/// Point-mass combinations use the sifting formula exactly; everything
/// else goes through adaptive composite Gauss-Legendre quadrature.
cplx stft_point(const SignalModel& f, const Window& psi, double x, double xi,
                const QuadratureSpec& q);

/// V_psi f(x, xi) * e^{-log_denom}, with the scaling folded into the
/// integrand so exponential-type signals never overflow.
cplx stft_point_scaled(const SignalModel& f, const Window& psi, double x, double xi,
                       double log_denom, const QuadratureSpec& q);

/// Samples the STFT on the lattice: values[k][n] = V_psi f(alpha k, beta n).
/// Lattice rows share one quadrature decomposition, refined globally until
/// every coefficient stabilizes.
CoefficientGrid gabor_coefficients(const SignalModel& f, const Window& psi,
                                   const Lattice& lat, const QuadratureSpec& q);

struct SynthesisResult {
    std::vector<cplx> values;    // sum over the full index rectangle
    std::vector<cplx> boundary;  // contribution of the outermost index shell
    double tail_sup = 0.0;       // sup over eval points of |boundary|
};

/// Evaluates sum_{k,n} c_{k,n} e^{2 pi i beta n t} gamma(t - alpha k) at the
/// given points. The outermost index shell (k or n on the rectangle edge) is
/// accumulated separately as a conservative truncation-tail estimate.
SynthesisResult synthesize(const CoefficientGrid& grid, const Window& gamma,
                           const Lattice& lat, std::span<const double> eval_points);

/// Truncated pairing sum_{k,n} grid_f[k,n] * grid_phi[k,-n]. Both grids must
/// share one lattice with a reflection-symmetric frequency range; grid_phi is
/// expected to hold coefficients against the conjugate dual window.
cplx dual_pairing(const CoefficientGrid& grid_f, const CoefficientGrid& grid_phi);

}  // namespace gabor
