#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gabor/errors.hpp"
#include "gabor/types.hpp"

namespace gabor {

enum class SignalKind { CatalogExpression, SampledTable, PointMassCombination };

enum class GrowthHint { ExpType, PolynomialType, CompactSupport, Unknown };

enum class TableExtension { Zero, HoldLast };

struct PointMass {
    double location = 0.0;
    cplx weight{1.0, 0.0};
};

/// Growth envelope |f(t)| <= bound(|t|), used to size quadrature domains.
struct GrowthEnvelope {
    GrowthHint hint = GrowthHint::Unknown;
    double amp = 1.0;
    double exp_rate = 0.0;     // ExpType: amp * e^{exp_rate * r}
    double poly_degree = 0.0;  // PolynomialType: amp * (1+r)^{poly_degree}

    double bound(double r) const;
};

/// A pointwise-evaluable signal: catalog expression, sampled table, or a
/// finite combination of point masses. Immutable after construction.
///
/// Evaluation comes in two flavors: eval(t) and scaled_eval(t, d) which
/// computes f(t) * e^{-d} without forming either factor. The scaled form
/// keeps translation nets f(.+h)/c(h) inside floating-point range for
/// signals of exponential type.
struct SignalModel {
    SignalKind kind = SignalKind::CatalogExpression;
    std::string id = "signal";

    std::function<cplx(double)> eval_fn;                 // null for point masses
    std::function<cplx(double, double)> scaled_eval_fn;  // (t, log_denom)
    std::vector<PointMass> masses;

    GrowthEnvelope growth;
    Interval support = whole_line();
    double osc_rate = 0.0;  // max internal modulation frequency (Hz)

    // Appends discontinuities/kinks of f inside (a,b) to out.
    std::function<void(double, double, std::vector<double>&)> breakpoints_fn;

    bool is_point_masses() const { return kind == SignalKind::PointMassCombination; }

    cplx eval(double t) const;
    cplx scaled_eval(double t, double log_denom) const;
    std::vector<double> breakpoints_in(double a, double b) const;
};

// --- operators on signals -------------------------------------------------

/// (T_x f)(t) = f(t - x); point masses shift by +x.
SignalModel translate(const SignalModel& f, double x);

/// (M_xi f)(t) = e^{2 pi i xi t} f(t).
SignalModel modulate(const SignalModel& f, double xi);

SignalModel scale(const SignalModel& f, cplx c);

/// Pointwise sum. Point-mass combinations may be added to each other;
/// mixing point masses with function-like signals is rejected.
SignalModel add(const SignalModel& f, const SignalModel& g);

// --- catalog ---------------------------------------------------------------

namespace signals {

SignalModel zero();
SignalModel constant(cplx value);
SignalModel gaussian();               // e^{-pi t^2}
SignalModel heaviside();              // H(t)
SignalModel exp_step(double b);       // e^{b t} H(t)
SignalModel staircase();              // floor(t) H(t)
SignalModel poly_log(double nu);      // t^nu log(t) H(t-1)
SignalModel sin_exp();                // sin(e^t)
SignalModel sin_step();               // sin(t) H(t)
SignalModel point_masses(std::vector<PointMass> masses);

/// Sampled table with strictly increasing abscissae, linear interpolation
/// between samples and the declared out-of-range extension.
SignalModel sampled(std::string id, std::vector<double> abscissae,
                    std::vector<cplx> values,
                    TableExtension extension = TableExtension::Zero);

/// Uniformly sampled table with cubic (Catmull-Rom) interpolation and
/// zero extension; used for internally tabulated functions.
SignalModel uniform_table(std::string id, double t0, double step,
                          std::vector<cplx> values);

}  // namespace signals

}  // namespace gabor
