#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gabor/comparison.hpp"
#include "gabor/growth.hpp"
#include "gabor/lattice.hpp"
#include "gabor/signal.hpp"
#include "gabor/window.hpp"

namespace gabor {

struct ToleranceSet {
    double tail_tol = 1e-10;
    double node_tol = 1e-6;
    double dual_tol = 1e-8;
    double solve_tol = 1e-3;
    double reconstruction_tol = 1e-4;
    int max_iterations = 200;
    int grid_max_halvings = 4;
};

struct EvalPointsSpec {
    double from = -3.0;
    double to = 3.0;
    int count = 41;
    std::vector<double> points() const;
};

struct GridRef {
    std::string csv;
    std::string sidecar;
};

struct NetRef {
    DualClassMode mode = DualClassMode::ExpPol;
    std::vector<std::pair<double, GridRef>> entries;
};

/// Parsed experiment configuration. Schema-validated: unknown keys are
/// rejected, command-specific sections are only admitted for their command.
struct ExperimentConfig {
    std::optional<SignalModel> signal;
    std::optional<Window> window;
    std::optional<Lattice> lattice;
    std::optional<ComparisonFunction> comparison;
    ToleranceSet tolerances;
    std::string output_dir = "out";

    int probes = 50;
    std::string theorem = "auto";
    std::vector<double> x_schedule;
    int n_extent = 2;
    std::optional<EvalPointsSpec> eval_points;
    std::optional<GridRef> grid_ref;
    std::optional<GridRef> dual_ref;
    std::optional<NetRef> net;
    std::optional<double> wiener_b;
};

/// Parses and validates the JSON text for the given command
/// (stft, dual, frame-bounds, reconstruct, classify, net-converge,
/// analyze, wiener-check). Throws ConfigError naming the offending field.
ExperimentConfig parse_config_text(const std::string& json_text, const std::string& command);

}  // namespace gabor
