#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gabor/signal.hpp"
#include "gabor/types.hpp"

namespace gabor {

enum class DecayClass { K1Exponential, SPolynomial, NumericOnly };

/// Pointwise decay majorant of a window, |psi(t)| <= value(|t|).
struct WindowEnvelope {
    enum class Kind { Gaussian, Exponential, Compact } kind = Kind::Gaussian;
    double amp = 1.0;
    double rate = 1.0;    // Gaussian: amp e^{-pi rate t^2}; Exponential: amp e^{-rate |t|}
    double radius = 0.0;  // Compact support radius

    double value(double r) const;
    /// Smallest r with value(r) <= tol (capped for compact supports).
    double radius_for(double tol) const;
    /// Largest growth rate b such that integral of psi(t) e^{b t} converges.
    double exp_budget() const;
};

/// A window function with evaluable derivatives, decay metadata and an
/// optional closed-form Fourier transform valid at complex arguments.
struct Window {
    std::string name = "window";
    std::function<double(double)> eval;
    std::vector<std::function<double(double)>> derivatives;  // orders 1..p_max
    DecayClass decay_class = DecayClass::NumericOnly;
    WindowEnvelope envelope;
    std::function<cplx(cplx)> complex_ft;  // null when no closed form exists

    int max_derivative_order() const { return static_cast<int>(derivatives.size()); }
    bool has_complex_ft() const { return static_cast<bool>(complex_ft); }

    /// psi^{(order)}(t); order 0 is the window itself.
    double derivative(int order, double t) const;

    /// View of the window as a (real-valued) signal.
    SignalModel as_signal() const;
};

namespace windows {

/// e^{-pi t^2}; closed-form transform e^{-pi z^2}; derivatives to order 4.
Window gaussian();

/// e^{-pi t^2} - (1/2) e^{-2 pi t^2}; its transform has real zeros, which
/// makes it the stock counterexample for Wiener-type kernel checks.
Window gauss_diff();

/// Real-valued window tabulated on a uniform grid (cubic interpolation,
/// zero outside). Derivatives are central finite differences of step 1e-3.
Window from_samples(std::string name, double t0, double step,
                    std::vector<double> values,
                    DecayClass decay_class = DecayClass::NumericOnly);

Window by_name(const std::string& name);

}  // namespace windows

}  // namespace gabor
