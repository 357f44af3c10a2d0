#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gabor/stft.hpp"
#include "oracles.hpp"

using namespace gabor;

namespace {

QuadratureSpec default_quad() { return QuadratureSpec::for_window(windows::gaussian()); }

cplx oracle_gaussian_stft(double x, double xi) {
    return oracle::stft([](long double t) { return std::complex<long double>(oracle::gaussian_ld(t), 0.0L); },
                        oracle::gaussian_ld, x, xi, -10.0, 10.0);
}

}  // namespace

TEST_CASE("stft_point: Gaussian self-transform at the origin") {
    // oracle first: high-precision quadrature agrees with the closed form
    cplx want = oracle_gaussian_stft(0.0, 0.0);
    CHECK(std::abs(want - cplx(1.0 / std::sqrt(2.0), 0.0)) <= 1e-14);

    cplx got = stft_point(signals::gaussian(), windows::gaussian(), 0.0, 0.0, default_quad());
    CHECK(std::abs(got - want) <= 1e-12);
}

TEST_CASE("stft_point: point masses use the sifting formula exactly") {
    SignalModel delta = signals::point_masses({{0.0, cplx(1.0, 0.0)}});
    // a spec that would be hopeless for quadrature must not matter here
    QuadratureSpec crippled;
    crippled.tail_tol = 1e-300;
    crippled.max_halvings = 0;
    cplx got = stft_point(delta, windows::gaussian(), 0.0, 0.0, crippled);
    CHECK(got == cplx(1.0, 0.0));

    // V_psi delta_a(x, xi) = conj(psi(a-x)) e^{-2 pi i xi a}
    SignalModel d2 = signals::point_masses({{0.7, cplx(2.0, 1.0)}});
    cplx v = stft_point(d2, windows::gaussian(), 0.2, 1.3, crippled);
    cplx expect = cplx(2.0, 1.0) * windows::gaussian().eval(0.5) *
                  std::exp(cplx(0.0, -kTwoPi * 1.3 * 0.7));
    CHECK(std::abs(v - expect) <= 1e-15);
}

TEST_CASE("stft_point: Gaussian self-transform off the origin") {
    cplx got = stft_point(signals::gaussian(), windows::gaussian(), 1.0, 0.0, default_quad());
    double want_mag = std::exp(-kPi / 2.0) / std::sqrt(2.0);
    CHECK(std::abs(got) == doctest::Approx(want_mag).epsilon(1e-10));
    CHECK(std::abs(got - oracle_gaussian_stft(1.0, 0.0)) <= 1e-12);

    // and at a genuinely complex-valued spot
    cplx got2 = stft_point(signals::gaussian(), windows::gaussian(), 0.8, -1.1, default_quad());
    CHECK(std::abs(got2 - oracle::gaussian_self_stft(0.8, -1.1)) <= 1e-11);
}

TEST_CASE("gabor_coefficients matches stft_point on the lattice") {
    Lattice lat(1.0, 1.0, -3, 3, -3, 3);
    CoefficientGrid grid =
        gabor_coefficients(signals::gaussian(), windows::gaussian(), lat, default_quad());
    CHECK(grid.signal_id == "gaussian");
    CHECK(grid.window_id == "gaussian");
    CHECK(std::abs(grid.at(0, 0) - cplx(1.0 / std::sqrt(2.0), 0.0)) <= 1e-10);
    for (int k : {-2, 0, 1, 3})
        for (int n : {-3, -1, 0, 2}) {
            cplx direct = stft_point(signals::gaussian(), windows::gaussian(), lat.time(k),
                                     lat.frequency(n), default_quad());
            CHECK(std::abs(grid.at(k, n) - direct) <= 1e-10);
        }
}

TEST_CASE("gabor_coefficients: zero signal gives the zero grid") {
    Lattice lat(0.5, 0.5, -8, 8, -8, 8);
    CoefficientGrid grid = gabor_coefficients(signals::zero(), windows::gaussian(), lat,
                                              default_quad());
    CHECK(grid.max_abs() == 0.0);
}

TEST_CASE("gabor_coefficients: covariance identity on the lattice") {
    // V_psi(T_a f)(x, xi) = e^{-2 pi i a xi} V_psi f(x-a, xi) with a = alpha
    const double alpha = 0.5;
    Lattice lat(alpha, 1.0, -6, 6, -4, 4);
    QuadratureSpec q = default_quad();
    CoefficientGrid base = gabor_coefficients(signals::gaussian(), windows::gaussian(), lat, q);
    CoefficientGrid moved =
        gabor_coefficients(translate(signals::gaussian(), alpha), windows::gaussian(), lat, q);
    for (int k = -5; k <= 6; ++k)
        for (int n = -4; n <= 4; ++n) {
            cplx phase = std::exp(cplx(0.0, -kTwoPi * alpha * lat.frequency(n)));
            CHECK(std::abs(moved.at(k, n) - phase * base.at(k - 1, n)) <= 1e-8);
        }
    CHECK(std::abs(moved.at(1, 0) - base.at(0, 0)) <= 1e-10);
}

TEST_CASE("synthesize: single coefficient reproduces the window") {
    Lattice lat(0.5, 0.5, -4, 4, -4, 4);
    CoefficientGrid grid(lat, "unit", "gaussian");
    grid.at(0, 0) = cplx(1.0, 0.0);
    std::vector<double> pts = {-1.0, -0.3, 0.0, 0.4, 1.2};
    SynthesisResult s = synthesize(grid, windows::gaussian(), lat, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(std::abs(s.values[i] - cplx(windows::gaussian().eval(pts[i]), 0.0)) <= 1e-14);
    CHECK(s.tail_sup == 0.0);  // the only coefficient sits strictly inside
}

TEST_CASE("synthesize: k-shell contributions decay geometrically") {
    // c_{k,n} = e^{-3|k|} (1+|n|)^{-4}: the sum added by widening the k-range
    // by one shell shrinks by at least e^3 each time (direct-summation
    // oracle: the shells are compared by differencing full truncations)
    std::vector<double> pts = {-0.4, 0.0, 0.7};
    auto synth_at = [&pts](int K) {
        Lattice lat(0.5, 0.5, -K, K, -4, 4);
        CoefficientGrid grid(lat, "synthetic", "gaussian");
        for (int k = -K; k <= K; ++k)
            for (int n = -4; n <= 4; ++n)
                grid.at(k, n) =
                    std::exp(-3.0 * std::abs(k)) * std::pow(1.0 + std::abs(n), -4.0);
        return synthesize(grid, windows::gaussian(), lat, pts).values;
    };
    std::vector<std::vector<cplx>> vals;
    for (int K = 2; K <= 6; ++K) vals.push_back(synth_at(K));
    double prev_shell = -1.0;
    for (std::size_t j = 1; j < vals.size(); ++j) {
        double shell = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            shell = std::max(shell, std::abs(vals[j][i] - vals[j - 1][i]));
        if (prev_shell > 0.0) CHECK(prev_shell / shell >= std::exp(3.0));
        prev_shell = shell;
    }
    // the reported boundary estimate covers the differenced shell
    Lattice lat(0.5, 0.5, -4, 4, -4, 4);
    CoefficientGrid grid(lat, "synthetic", "gaussian");
    for (int k = -4; k <= 4; ++k)
        for (int n = -4; n <= 4; ++n)
            grid.at(k, n) = std::exp(-3.0 * std::abs(k)) * std::pow(1.0 + std::abs(n), -4.0);
    SynthesisResult s = synthesize(grid, windows::gaussian(), lat, pts);
    double shell_4 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        shell_4 = std::max(shell_4, std::abs(vals[2][i] - vals[1][i]));
    CHECK(s.tail_sup >= shell_4);
}

TEST_CASE("synthesize input validation") {
    Lattice lat(0.5, 0.5, -2, 2, -2, 2);
    CoefficientGrid grid(lat);
    Lattice other(0.5, 0.5, -3, 3, -2, 2);
    std::vector<double> pts = {0.0};
    CHECK_THROWS_AS(synthesize(grid, windows::gaussian(), other, pts), UsageError);
    grid.at(0, 0) = cplx(kInf, 0.0);
    CHECK_THROWS_AS(synthesize(grid, windows::gaussian(), lat, pts), NumericError);
}

TEST_CASE("dual_pairing: zero signal and lattice mismatch") {
    Lattice lat(0.5, 0.5, -4, 4, -4, 4);
    QuadratureSpec q = default_quad();
    CoefficientGrid zf = gabor_coefficients(signals::zero(), windows::gaussian(), lat, q);
    CoefficientGrid gg = gabor_coefficients(signals::gaussian(), windows::gaussian(), lat, q);
    CHECK(std::abs(dual_pairing(zf, gg)) == 0.0);

    Lattice other(0.5, 0.5, -5, 5, -4, 4);
    CoefficientGrid g2 = gabor_coefficients(signals::gaussian(), windows::gaussian(), other, q);
    CHECK_THROWS_AS(dual_pairing(gg, g2), UsageError);

    Lattice asym(0.5, 0.5, -4, 4, -3, 4);
    CoefficientGrid g3 = gabor_coefficients(signals::gaussian(), windows::gaussian(), asym, q);
    CHECK_THROWS_AS(dual_pairing(g3, g3), UsageError);
}

TEST_CASE("Cauchy-Schwarz bound |V| <= |f|_2 |psi|_2 on catalog signals") {
    QuadratureSpec q = default_quad();
    const double psi_norm = std::pow(2.0, -0.25);  // sqrt(integral e^{-2 pi t^2})
    struct Case {
        SignalModel f;
        double norm;
    };
    SignalModel mix = add(signals::gaussian(), scale(translate(signals::gaussian(), 1.1),
                                                     cplx(0.5, 0.0)));
    double mix_norm = std::sqrt(
        oracle::integrate_real(
            [](long double t) {
                long double v = oracle::gaussian_ld(t) + 0.5L * oracle::gaussian_ld(t - 1.1L);
                return v * v;
            },
            -12.0L, 12.0L));
    std::vector<Case> cases = {
        {signals::gaussian(), std::pow(2.0, -0.25)},
        {mix, mix_norm},
        {modulate(signals::gaussian(), 0.8), std::pow(2.0, -0.25)},
    };
    for (const auto& [f, norm] : cases)
        for (double x : {-1.0, 0.0, 0.6, 2.0})
            for (double xi : {-2.0, 0.0, 1.3}) {
                cplx v = stft_point(f, windows::gaussian(), x, xi, q);
                CHECK(std::abs(v) <= norm * psi_norm + 1e-9);
            }
}

TEST_CASE("STFT decay of the Gaussian pair is super-polynomial in both variables") {
    QuadratureSpec q = default_quad();
    std::vector<double> lx, ly;
    for (double x = 1.0; x <= 4.0; x += 0.5) {
        double v = std::abs(stft_point(signals::gaussian(), windows::gaussian(), x, 0.0, q));
        lx.push_back(x);
        ly.push_back(std::log(v));
    }
    // least-squares slope of log|V(x,0)| vs x
    auto slope = [](const std::vector<double>& xs, const std::vector<double>& ys) {
        double n = xs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    CHECK(slope(lx, ly) < -4.0);

    std::vector<double> lxi, lyi;
    for (double xi = 1.0; xi <= 6.0; xi += 1.0) {
        double v = std::abs(stft_point(signals::gaussian(), windows::gaussian(), 0.0, xi, q));
        lxi.push_back(std::log(1.0 + xi));
        lyi.push_back(std::log(v));
    }
    CHECK(slope(lxi, lyi) < -4.0);
}

TEST_CASE("stft_point against the oracle on a discontinuous signal") {
    // Heaviside forces the breakpoint path
    QuadratureSpec q = default_quad();
    for (double x : {-0.5, 0.0, 0.8})
        for (double xi : {0.0, 1.5}) {
            cplx got = stft_point(signals::heaviside(), windows::gaussian(), x, xi, q);
            cplx want = oracle::stft(
                [](long double t) {
                    return std::complex<long double>(t >= 0.0L ? 1.0L : 0.0L, 0.0L);
                },
                oracle::gaussian_ld, x, xi, 0.0, 12.0);
            CHECK(std::abs(got - want) <= 1e-10);
        }
}

TEST_CASE("scaled stft keeps exponential signals finite") {
    QuadratureSpec q = default_quad();
    SignalModel f = signals::exp_step(1.0);
    const double x = 200.0;
    cplx scaled = stft_point_scaled(f, windows::gaussian(), x, 0.0, x, q);
    // V e^{-x} -> integral e^{u} psi(u) du = e^{1/(4 pi)} as x -> infinity
    CHECK(std::abs(scaled) == doctest::Approx(std::exp(1.0 / (4.0 * kPi))).epsilon(1e-9));
}
