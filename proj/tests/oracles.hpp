#pragma once

// Test-side oracles, deliberately independent of the library's composite
// Gauss-Legendre path: high-precision Gauss-Kronrod in long double for
// integrals, closed forms for Gaussian identities, and a dense eigensolve
// for frame-bound cross-checks.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <complex>
#include <functional>

#include "gabor/lattice.hpp"
#include "gabor/types.hpp"
#include "gabor/window.hpp"

namespace oracle {

using gabor::cplx;
using std::complex;

inline double integrate_real(const std::function<long double(long double)>& f, long double a,
                             long double b) {
    using quad = boost::math::quadrature::gauss_kronrod<long double, 61>;
    return static_cast<double>(quad::integrate(f, a, b, 12, 1e-15L));
}

inline cplx integrate(const std::function<complex<long double>(long double)>& f, long double a,
                      long double b) {
    double re = integrate_real([&](long double t) { return f(t).real(); }, a, b);
    double im = integrate_real([&](long double t) { return f(t).imag(); }, a, b);
    return {re, im};
}

/// V_psi f(x, xi) by high-precision quadrature over [lo, hi].
inline cplx stft(const std::function<complex<long double>(long double)>& f,
                 const std::function<long double(long double)>& psi, double x, double xi,
                 double lo, double hi) {
    const long double twopi = 2.0L * 3.14159265358979323846264338327950288L;
    return integrate(
        [&](long double t) {
            complex<long double> phase(std::cos(-twopi * xi * t), std::sin(-twopi * xi * t));
            return f(t) * psi(t - x) * phase;
        },
        lo, hi);
}

/// Closed-form Gaussian self-STFT: 2^{-1/2} e^{-pi (x^2+xi^2)/2} e^{-i pi x xi}.
inline cplx gaussian_self_stft(double x, double xi) {
    double mag = std::exp(-gabor::kPi * (x * x + xi * xi) / 2.0) / std::sqrt(2.0);
    return mag * std::exp(cplx(0.0, -gabor::kPi * x * xi));
}

/// Closed-form Gaussian transform at complex argument: e^{-pi z^2}.
inline cplx gaussian_ft(cplx z) { return std::exp(-gabor::kPi * z * z); }

inline long double gaussian_ld(long double t) {
    return std::exp(-3.14159265358979323846264338327950288L * t * t);
}

}  // namespace oracle
