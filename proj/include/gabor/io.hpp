#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gabor/grid.hpp"
#include "gabor/types.hpp"

namespace gabor::io {

/// Shortest-roundtrip-independent fixed formatting: 17 significant digits.
std::string format17(double v);

/// Writes via a temp file in the same directory, then renames.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

/// Coefficient CSV, header "k,n,re,im", rows k-major then n.
std::string grid_to_csv(const CoefficientGrid& grid);
void write_grid_csv(const std::filesystem::path& path, const CoefficientGrid& grid);

/// Sidecar JSON {alpha, beta, k_range, n_range, signal_id, window_id}.
std::string grid_sidecar_json(const CoefficientGrid& grid);
void write_grid_sidecar(const std::filesystem::path& path, const CoefficientGrid& grid);

/// Reads a coefficient CSV plus its sidecar back into a grid. Malformed
/// rows raise ConfigError naming the line number.
CoefficientGrid read_grid(const std::filesystem::path& csv_path,
                          const std::filesystem::path& sidecar_path);

/// Two-column "t,value" CSV with one header line, for sampled-table signals.
std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path);

}  // namespace gabor::io
