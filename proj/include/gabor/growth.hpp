#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gabor/grid.hpp"
#include "gabor/signal.hpp"
#include "gabor/types.hpp"
#include "gabor/window.hpp"

namespace gabor {

/// Growth classes for coefficient grids, strongest decay first. The two
/// "dual" classes describe growth (exponential in k / polynomial overall),
/// the two rapidly-decreasing classes describe decay beyond every tested
/// order.
enum class GrowthClass {
    RapidlyDecreasingExp,
    RapidlyDecreasing,
    Polynomial,
    ExpPol,
    Unclassified,
};

enum class DualClassMode { ExpPol, Polynomial };

struct GrowthEstimate {
    GrowthClass cls = GrowthClass::Unclassified;
    double tau = 0.0;       // fitted exponent (dual classes)
    double residual = 0.0;  // rms residual of the decisive fit (log units)
    // diagnostics: fitted log-envelope slopes
    double k_slope = 0.0;   // log row-max vs |k|
    double n_slope = 0.0;   // log col-max vs log(1+|n|)
    double joint_slope = 0.0;  // log l1-shell-max vs log(1+s)
};

struct EnvelopeWitness {
    int k = 0, n = 0;
    std::size_t grid_index = 0;
    double weighted_value = 0.0;
};

struct BoundedFamilyResult {
    bool bounded = false;
    double tau = 0.0;
    GrowthEstimate max_grid_estimate;
    std::optional<EnvelopeWitness> witness;
};

struct NetEntry {
    double lambda = 0.0;
    CoefficientGrid grid;
};

struct NetOptions {
    double node_tol = 1e-6;  // relative Cauchy tolerance per node
    double tau_cap = 10.0;
};

struct ConvergenceReport {
    bool converged = false;
    CoefficientGrid limit_grid;
    std::vector<std::vector<cplx>> node_tail_histories;  // node-major, tail values
    double uniform_tau = 0.0;
    double lambda0 = 0.0;  // start of the tail window the uniform bound held on
    int worst_k = 0, worst_n = 0;
    double max_tail_delta = 0.0;
    bool boundary_mass = false;  // informational: last argmax on the index boundary
    std::string diagnostic;
};

/// Seminorm estimate max over grid x and orders j<=p of e^{p|x|} |phi^(j)(x)|.
/// A lower bound for the true supremum; divergence with growing grid extent
/// flags non-membership in the exponentially-decreasing class.
double k1_seminorm(const Window& phi, int p, std::span<const double> grid);
double k1_seminorm(const SignalModel& phi, int p, std::span<const double> grid);

/// Shell/row/column log-envelope fits with the decision rule documented in
/// the implementation. Requires >= 8 index shells in each direction.
GrowthEstimate classify_grid_growth(const CoefficientGrid& grid, double tau_cap = 10.0);

/// Pointwise-max grid of the family, classified against the requested dual
/// class; on failure returns the node (and grid index) with the largest
/// envelope-weighted value as witness.
BoundedFamilyResult check_bounded_family(std::span<const CoefficientGrid> grids,
                                         DualClassMode mode, double tau_cap = 10.0);

/// Per-node Cauchy test over the last half of the net plus the uniform
/// growth bound on the tail; limits are tail averages over the last quarter.
ConvergenceReport detect_net_convergence(const std::vector<NetEntry>& net,
                                         DualClassMode mode, const NetOptions& opts = {});

// Envelope predicates at fixed order/exponent. "Passing" means the weighted
// grid attains its maximum well inside the index rectangle, i.e. the
// envelope dominates toward the truncation edge.
bool passes_rapid_exp_envelope(const CoefficientGrid& grid, int p);
bool passes_rapid_envelope(const CoefficientGrid& grid, int p);
bool within_exp_pol_envelope(const CoefficientGrid& grid, double tau);
bool within_polynomial_envelope(const CoefficientGrid& grid, double tau);

}  // namespace gabor
