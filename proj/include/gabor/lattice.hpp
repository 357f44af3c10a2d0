#pragma once

#include <cstddef>

#include "gabor/errors.hpp"

namespace gabor {

/// Separable time-frequency lattice alpha*Z x beta*Z restricted to the
/// finite index rectangle [k_min,k_max] x [n_min,n_max].
struct Lattice {
    double alpha = 1.0;
    double beta = 1.0;
    int k_min = 0, k_max = 0;
    int n_min = 0, n_max = 0;

    Lattice() = default;
    Lattice(double a, double b, int kmin, int kmax, int nmin, int nmax)
        : alpha(a), beta(b), k_min(kmin), k_max(kmax), n_min(nmin), n_max(nmax) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw ConfigError("lattice: alpha and beta must be positive");
        if (k_min > k_max || n_min > n_max)
            throw ConfigError("lattice: empty index range");
    }

    /// Symmetric ranges [-k,k] x [-n,n].
    static Lattice symmetric(double a, double b, int k, int n) {
        return Lattice(a, b, -k, k, -n, n);
    }

    double density_product() const { return alpha * beta; }

    int k_count() const { return k_max - k_min + 1; }
    int n_count() const { return n_max - n_min + 1; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(k_count()) * static_cast<std::size_t>(n_count());
    }

    double time(int k) const { return alpha * k; }
    double frequency(int n) const { return beta * n; }

    std::size_t index(int k, int n) const {
        return static_cast<std::size_t>(k - k_min) * static_cast<std::size_t>(n_count()) +
               static_cast<std::size_t>(n - n_min);
    }

    bool same_geometry(const Lattice& o) const {
        return alpha == o.alpha && beta == o.beta && k_min == o.k_min &&
               k_max == o.k_max && n_min == o.n_min && n_max == o.n_max;
    }
};

}  // namespace gabor
