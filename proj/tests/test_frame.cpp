#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "gabor/frame.hpp"
#include "oracles.hpp"

using namespace gabor;

namespace {

QuadratureSpec quad() { return QuadratureSpec::for_window(windows::gaussian()); }

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> pts(count);
    for (int i = 0; i < count; ++i)
        pts[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    return pts;
}

// trapezoid inner product of sampled functions
cplx sampled_inner(const std::vector<cplx>& a, const std::vector<cplx>& b, double h) {
    cplx acc(0, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        double w = (i == 0 || i + 1 == a.size()) ? 0.5 : 1.0;
        acc += w * a[i] * std::conj(b[i]);
    }
    return acc * h;
}

// Dense discretization of the truncated frame operator on [t_lo, t_hi]:
// eigen-extremes of h * Phi Phi^H where columns of Phi sample the frame
// elements. Oracle only; independent of the probe/power-iteration estimator.
std::pair<double, double> dense_frame_extremes(const Window& psi, const Lattice& lat,
                                               double t_lo, double t_hi, double h) {
    const int nt = static_cast<int>(std::round((t_hi - t_lo) / h)) + 1;
    const int nkn = lat.k_count() * lat.n_count();
    Eigen::MatrixXcd phi(nt, nkn);
    int col = 0;
    for (int k = lat.k_min; k <= lat.k_max; ++k)
        for (int n = lat.n_min; n <= lat.n_max; ++n, ++col)
            for (int i = 0; i < nt; ++i) {
                double t = t_lo + h * i;
                phi(i, col) = psi.eval(t - lat.time(k)) *
                              std::exp(cplx(0.0, kTwoPi * lat.frequency(n) * t));
            }
    Eigen::MatrixXcd gram = h * (phi * phi.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace

TEST_CASE("validate_lattice: Gaussian density criterion") {
    Window psi = windows::gaussian();
    CHECK(validate_lattice(psi, Lattice::symmetric(0.7, 0.7, 4, 4)).verdict ==
          LatticeVerdict::Ok);
    CHECK(validate_lattice(psi, Lattice::symmetric(1.0, 1.0, 4, 4)).verdict ==
          LatticeVerdict::Rejected);
    CHECK(validate_lattice(psi, Lattice::symmetric(2.0, 0.49, 4, 4)).verdict ==
          LatticeVerdict::Ok);

    Window other = windows::gauss_diff();
    CHECK(validate_lattice(other, Lattice::symmetric(0.7, 0.7, 4, 4)).verdict ==
          LatticeVerdict::OkWithWarning);
    CHECK(validate_lattice(other, Lattice::symmetric(1.1, 1.0, 4, 4)).verdict ==
          LatticeVerdict::Rejected);
}

TEST_CASE("frame_operator_apply: zero signal, quadratic form, linearity") {
    Window psi = windows::gaussian();
    Lattice lat = Lattice::symmetric(0.5, 0.5, 16, 8);
    QuadratureSpec q = quad();
    auto pts = linspace(-4.0, 4.0, 161);

    auto zero_out = frame_operator_apply(psi, lat, signals::zero(), q, pts);
    for (const auto& v : zero_out) CHECK(std::abs(v) == 0.0);

    // <Sf, f> equals the frame sum of |V_psi f|^2 (direct-summation oracle)
    SignalModel f = signals::gaussian();
    auto sf = frame_operator_apply(psi, lat, f, q, pts);
    std::vector<cplx> fv(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) fv[i] = f.eval(pts[i]);
    cplx qform = sampled_inner(sf, fv, pts[1] - pts[0]);

    CoefficientGrid grid = gabor_coefficients(f, psi, lat, q);
    double frame_sum = 0.0;
    for (const auto& c : grid.values) frame_sum += std::norm(c);

    CHECK(std::abs(qform.imag()) <= 1e-8);
    CHECK(qform.real() > 0.0);
    CHECK(qform.real() == doctest::Approx(frame_sum).epsilon(1e-5));

    // S(c f) = c S(f)
    cplx c(2.0, 1.0);
    auto scaled = frame_operator_apply(psi, lat, scale(f, c), q, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(std::abs(scaled[i] - c * sf[i]) <= 1e-9);
}

TEST_CASE("frame operator is self-adjoint on probe pairs") {
    Window psi = windows::gaussian();
    Lattice lat = Lattice::symmetric(0.5, 0.5, 16, 8);
    QuadratureSpec q = quad();
    auto pts = linspace(-5.0, 5.0, 201);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 3; ++trial) {
        SignalModel f = random_probe(rng, -2.0, 2.0, 1.5);
        SignalModel g = random_probe(rng, -2.0, 2.0, 1.5);
        auto sf = frame_operator_apply(psi, lat, f, q, pts);
        auto sg = frame_operator_apply(psi, lat, g, q, pts);
        std::vector<cplx> fv(pts.size()), gv(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            fv[i] = f.eval(pts[i]);
            gv[i] = g.eval(pts[i]);
        }
        double h = pts[1] - pts[0];
        cplx lhs = sampled_inner(sf, gv, h);
        cplx rhs = std::conj(sampled_inner(sg, fv, h));
        double scale = std::sqrt(signal_norm_squared(f, q) * signal_norm_squared(g, q));
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(scale, 1.0));
    }
}

TEST_CASE("estimate_frame_bounds: flagship lattice against the dense oracle") {
    Window psi = windows::gaussian();
    Lattice lat = Lattice::symmetric(0.5, 0.5, 24, 10);
    QuadratureSpec q = quad();
    FrameBounds fb = estimate_frame_bounds(psi, lat, 24, q, 3);
    CHECK(fb.A > 0.0);
    CHECK(fb.B >= fb.A);
    CHECK(fb.B / fb.A < 10.0);

    // frame inequality on fresh probes
    std::mt19937_64 rng(101);
    for (int i = 0; i < 12; ++i) {
        SignalModel f = random_probe(rng, -6.0, 6.0, 2.0);
        double n2 = signal_norm_squared(f, q);
        CoefficientGrid grid = gabor_coefficients(f, psi, lat, q);
        double s = 0.0;
        for (const auto& c : grid.values) s += std::norm(c);
        CHECK(s >= fb.A * n2 - 1e-6);
        CHECK(s <= fb.B * n2 + 1e-6);
    }

    // stability under probe doubling (+-5%)
    FrameBounds fb2 = estimate_frame_bounds(psi, lat, 48, q, 3);
    CHECK(std::abs(fb2.A - fb.A) <= 0.05 * fb.A);
    CHECK(std::abs(fb2.B - fb.B) <= 0.05 * fb.B);

    // dense-eigensolve oracle over the same covered region the estimator
    // works in
    const double r_psi = psi.envelope.radius_for(1e-10);
    auto [dmin, dmax] = dense_frame_extremes(psi, lat, lat.time(lat.k_min) + r_psi,
                                             lat.time(lat.k_max) - r_psi, 0.05);
    CHECK(fb.B == doctest::Approx(dmax).epsilon(0.10));
    CHECK(fb.A <= dmin * 1.10);
    CHECK(fb.A >= dmin * 0.50);
}

TEST_CASE("estimate_frame_bounds: conditioning degrades toward critical density") {
    Window psi = windows::gaussian();
    QuadratureSpec q = quad();
    FrameBounds good =
        estimate_frame_bounds(psi, Lattice::symmetric(0.5, 0.5, 16, 8), 16, q, 5);
    FrameBounds tight =
        estimate_frame_bounds(psi, Lattice(0.99, 1.0, -8, 8, -4, 4), 16, q, 5);
    CHECK(tight.A / tight.B < good.A / good.B);
}

TEST_CASE("estimate_frame_bounds: single-node lattice bounds every quotient") {
    Window psi = windows::gaussian();
    Lattice node(0.5, 0.5, 0, 0, 0, 0);
    QuadratureSpec q = quad();
    FrameBounds fb = estimate_frame_bounds(psi, node, 8, q, 9, /*force=*/true);
    std::mt19937_64 rng(77);
    for (int i = 0; i < 8; ++i) {
        SignalModel f = random_probe(rng, -0.5, 0.5, 0.5);
        double n2 = signal_norm_squared(f, q);
        cplx v = stft_point(f, psi, 0.0, 0.0, q);
        CHECK(fb.A <= std::norm(v) / n2 + 1e-9);
    }
    CHECK_THROWS_AS(estimate_frame_bounds(psi, node, 0, q, 1, true), ConfigError);
}

TEST_CASE("bound estimates are monotone under range widening, within slack") {
    Window psi = windows::gaussian();
    QuadratureSpec q = quad();
    FrameBounds narrow =
        estimate_frame_bounds(psi, Lattice::symmetric(0.5, 0.5, 16, 8), 16, q, 13);
    FrameBounds wide =
        estimate_frame_bounds(psi, Lattice::symmetric(0.5, 0.5, 20, 10), 16, q, 13);
    CHECK(wide.B >= narrow.B - 0.05 * narrow.B);
    CHECK(wide.A <= narrow.A + 0.05 * narrow.A);
}

TEST_CASE("compute_dual_window: heavily oversampled lattice is near-tight") {
    // alpha*beta = 1/16: S is close to a multiple of the identity, so the
    // iteration collapses immediately and gamma is psi rescaled
    Window psi = windows::gaussian();
    Lattice lat = Lattice::symmetric(0.25, 0.25, 24, 24);
    QuadratureSpec q = quad();
    FrameBounds fb = estimate_frame_bounds(psi, lat, 12, q, 21);
    CHECK(fb.B / fb.A < 1.001);
    DualWindow dual = compute_dual_window(psi, lat, fb, 1e-8, 50);
    CHECK(dual.iterations <= 3);
    double mid = 0.5 * (fb.A + fb.B);
    for (std::size_t i = 0; i < dual.gamma.size(); ++i) {
        double t = dual.t0 + dual.step * static_cast<double>(i);
        CHECK(std::abs(dual.gamma[i] - psi.eval(t) / mid) <= 1e-6);
    }
}

TEST_CASE("compute_dual_window: flagship lattice (residual, decay, roundtrip)") {
    Window psi = windows::gaussian();
    Lattice lat = Lattice::symmetric(0.5, 0.5, 24, 10);
    QuadratureSpec q = quad();
    FrameBounds fb = estimate_frame_bounds(psi, lat, 24, q, 3);
    DualWindow dual = compute_dual_window(psi, lat, fb, 1e-8);
    CHECK(dual.residual <= 1e-8);
    CHECK(dual.max_imag <= 1e-9);

    // contraction factor per step <= (B-A)/(B+A) plus numerical slack
    double contraction = (fb.B - fb.A) / (fb.B + fb.A);
    for (std::size_t i = 1; i < dual.residual_history.size(); ++i) {
        double ratio = dual.residual_history[i] / dual.residual_history[i - 1];
        CHECK(ratio <= contraction + 0.05);
    }

    // the dual of the Gaussian decays: positive fitted rate
    DecayFit fit = verify_dual_decay(dual);
    CHECK(fit.rate > 0.0);
    CHECK((fit.kind == DecayFit::Kind::Exponential ||
           fit.kind == DecayFit::Kind::SuperExponential));

    std::vector<double> pts = linspace(-3.0, 3.0, 61);
    ReconstructionResult rec = reconstruct(signals::gaussian(), psi, dual, lat, pts, q);
    CHECK(rec.relative_sup_error <= 1e-4);

    SynthesisResult at0 = synthesize(gabor_coefficients(signals::gaussian(), psi, lat, q),
                                     dual.as_window(), lat, std::vector<double>{0.0});
    CHECK(std::abs(at0.values[0] - cplx(1.0, 0.0)) <= 1e-4);

    ReconstructionResult zero = reconstruct(signals::zero(), psi, dual, lat, pts, q);
    CHECK(zero.relative_sup_error == 0.0);
    for (const auto& v : zero.values) CHECK(std::abs(v) == 0.0);

    SignalModel mix = add(scale(signals::gaussian(), cplx(0.8, 0.0)),
                          scale(translate(signals::gaussian(), 1.1), cplx(0.5, 0.0)));
    ReconstructionResult rec_mix = reconstruct(mix, psi, dual, lat, pts, q);
    CHECK(rec_mix.relative_sup_error <= 1e-3);

    // mixed expansions: analysis/synthesis windows swapped agree to 10x tol
    Window gamma = dual.as_window();
    CoefficientGrid grid_gamma = gabor_coefficients(signals::gaussian(), gamma, lat, q);
    SynthesisResult swapped = synthesize(grid_gamma, psi, lat, pts);
    double sup = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        sup = std::max(sup, std::abs(swapped.values[i] - rec.values[i]));
    CHECK(sup <= 10.0 * 1e-4);

    // pairing: f = phi = gaussian, analysis psi against conj-dual reflected,
    // target integral of f^2 = 2^{-1/2}
    CoefficientGrid grid_f = gabor_coefficients(signals::gaussian(), psi, lat, q);
    cplx pairing = dual_pairing(grid_f, grid_gamma);
    CHECK(std::abs(pairing - cplx(1.0 / std::sqrt(2.0), 0.0)) <= 1e-4);

    // sifting: f = delta_0 against phi = gaussian gives phi(0) = 1
    SignalModel delta = signals::point_masses({{0.0, cplx(1.0, 0.0)}});
    CoefficientGrid grid_delta = gabor_coefficients(delta, psi, lat, q);
    cplx sift = dual_pairing(grid_delta, grid_gamma);
    CHECK(std::abs(sift - cplx(1.0, 0.0)) <= 1e-3);
}

TEST_CASE("compute_dual_window: critical density stalls under force") {
    Window psi = windows::gaussian();
    Lattice lat = Lattice::symmetric(1.0, 1.0, 12, 6);
    QuadratureSpec q = quad();
    CHECK_THROWS_AS(estimate_frame_bounds(psi, lat, 8, q, 2), PreconditionError);
    FrameBounds fb = estimate_frame_bounds(psi, lat, 8, q, 2, /*force=*/true);
    CHECK_THROWS_AS(compute_dual_window(psi, lat, fb, 1e-8, 40), PreconditionError);
    try {
        compute_dual_window(psi, lat, fb, 1e-8, 40, /*force=*/true);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        REQUIRE(e.residual_history.size() >= 10);
        // residual plateaus: the late contraction ratio approaches one
        double late = e.residual_history.back() /
                      e.residual_history[e.residual_history.size() - 6];
        CHECK(std::pow(late, 1.0 / 5.0) > 0.85);
    }
}

TEST_CASE("verify_dual_decay: synthetic tables classify as documented") {
    // 1/(1+t^2) on a wide grid: exponential rate ~ 0, log-log slope -2
    DualWindow synth;
    synth.base_name = "synthetic";
    synth.alpha = synth.beta = 0.5;
    synth.t0 = -1000.0;
    synth.step = 1.0;
    synth.gamma.resize(2001);
    for (std::size_t i = 0; i < synth.gamma.size(); ++i) {
        double t = synth.t0 + synth.step * static_cast<double>(i);
        synth.gamma[i] = 1.0 / (1.0 + t * t);
    }
    DecayFit poly = verify_dual_decay(synth);
    CHECK(poly.kind == DecayFit::Kind::PolynomialOnly);
    CHECK(std::abs(poly.rate) < 0.05);

    // the Gaussian itself: dominated by the -pi t^2 term
    DualWindow gauss;
    gauss.base_name = "gaussian-as-table";
    gauss.alpha = gauss.beta = 0.5;
    gauss.t0 = -6.0;
    gauss.step = 1.0 / 32.0;
    gauss.gamma.resize(385);
    for (std::size_t i = 0; i < gauss.gamma.size(); ++i) {
        double t = gauss.t0 + gauss.step * static_cast<double>(i);
        gauss.gamma[i] = std::exp(-kPi * t * t);
    }
    DecayFit sup = verify_dual_decay(gauss);
    CHECK(sup.kind == DecayFit::Kind::SuperExponential);
    CHECK(sup.curvature > 0.05);

    // insufficient dynamic range: |gamma| never below 1e-6 of its peak
    DualWindow shallow;
    shallow.base_name = "shallow";
    shallow.alpha = shallow.beta = 0.5;
    shallow.t0 = -20.0;
    shallow.step = 1.0;
    shallow.gamma.assign(41, 0.0);
    for (std::size_t i = 0; i < shallow.gamma.size(); ++i) {
        double t = shallow.t0 + 1.0 * static_cast<double>(i);
        shallow.gamma[i] = 1.0 / (1.0 + t * t);
    }
    CHECK(verify_dual_decay(shallow).kind == DecayFit::Kind::Inconclusive);
}
