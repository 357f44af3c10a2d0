#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gabor/errors.hpp"
#include "gabor/signal.hpp"
#include "gabor/types.hpp"
#include "gabor/window.hpp"

namespace gabor {

/// Composite Gauss-Legendre quadrature policy. Panels never exceed
/// panel_width (further capped by the integrand's oscillation rate), are
/// split at declared integrand breakpoints, and all panels are halved
/// until two successive refinements agree to tail_tol; failing that after
/// max_halvings raises NumericError carrying the last two estimates.
///
/// tail_tol acts absolutely for values of order one and relatively above
/// that: |I_m - I_{m-1}| <= tail_tol * max(1, |I_m|).
struct QuadratureSpec {
    double panel_width = 0.25;
    double support_cutoff = 6.5;  // base window truncation radius
    double tail_tol = 1e-10;
    int max_halvings = 10;

    /// Cutoff sized so the window envelope integrates below tail_tol
    /// outside [-R, R].
    static QuadratureSpec for_window(const Window& psi, double tail_tol = 1e-10);
};

/// Panel edges covering [a,b]: every breakpoint in (a,b) is an edge and no
/// panel is wider than width_cap.
std::vector<double> panel_edges(double a, double b, double width_cap,
                                std::span<const double> breakpoints);

/// Splits every panel in half.
std::vector<double> halve_edges(const std::vector<double>& edges);

/// Flattened 10-point Gauss-Legendre nodes/weights for a set of panels.
struct NodeSet {
    std::vector<double> t;
    std::vector<double> w;
};
NodeSet nodes_from_edges(const std::vector<double>& edges);

struct QuadratureResult {
    cplx value{0.0, 0.0};
    double error = 0.0;  // last inter-refinement difference
    int refinements = 0;
};

/// Adaptive driver over a fixed domain decomposition.
QuadratureResult integrate_refining(const std::function<cplx(double)>& f,
                                    std::vector<double> edges,
                                    const QuadratureSpec& spec);

/// Integration radius around `center` for the integrand f * T_center(psi):
/// extends the window cutoff until the product envelope's tail is below
/// tail_tol.
double effective_cutoff(const SignalModel& f, const Window& psi, double center,
                        const QuadratureSpec& spec);

}  // namespace gabor
