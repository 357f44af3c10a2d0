#pragma once

#include <string>
#include <vector>

#include "gabor/errors.hpp"
#include "gabor/lattice.hpp"
#include "gabor/types.hpp"

namespace gabor {

/// Dense grid of Gabor coefficients c_{k,n} over a lattice, with the
/// provenance of the signal/window pair that produced it.
struct CoefficientGrid {
    Lattice lattice;
    std::vector<cplx> values;  // k-major, n within
    std::string signal_id;
    std::string window_id;

    CoefficientGrid() = default;
    explicit CoefficientGrid(const Lattice& lat, std::string sig = "", std::string win = "")
        : lattice(lat), values(lat.node_count(), cplx(0.0, 0.0)),
          signal_id(std::move(sig)), window_id(std::move(win)) {}

    cplx& at(int k, int n) { return values[lattice.index(k, n)]; }
    const cplx& at(int k, int n) const { return values[lattice.index(k, n)]; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        for (const auto& v : values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }
};

}  // namespace gabor
