#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gabor/quadrature.hpp"
#include "gabor/signal.hpp"
#include "gabor/window.hpp"

using namespace gabor;

TEST_CASE("panel edges honor the width cap and breakpoints") {
    std::vector<double> bps = {0.3, 0.7};
    auto edges = panel_edges(0.0, 1.0, 0.25, bps);
    REQUIRE(edges.size() >= 3);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        CHECK(edges[i + 1] - edges[i] <= 0.25 + 1e-12);
        CHECK(edges[i + 1] > edges[i]);
    }
    CHECK(std::count(edges.begin(), edges.end(), 0.3) == 1);
    CHECK(std::count(edges.begin(), edges.end(), 0.7) == 1);

    auto halved = halve_edges(edges);
    CHECK(halved.size() == 2 * edges.size() - 1);
}

TEST_CASE("node sets are sorted ascending") {
    auto edges = panel_edges(-1.0, 1.0, 0.4, {});
    NodeSet ns = nodes_from_edges(edges);
    REQUIRE(!ns.t.empty());
    CHECK(ns.t.size() == ns.w.size());
    for (std::size_t i = 1; i < ns.t.size(); ++i) CHECK(ns.t[i] > ns.t[i - 1]);
    double total = 0.0;
    for (double w : ns.w) total += w;
    CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("smooth integrand converges to tight tolerance") {
    QuadratureSpec q;
    auto edges = panel_edges(0.0, 1.0, q.panel_width, {});
    auto res = integrate_refining([](double t) { return cplx(std::exp(t), 0.0); }, edges, q);
    CHECK(res.value.real() == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    CHECK(std::abs(res.value.imag()) <= 1e-15);
}

TEST_CASE("ten-point panels integrate degree-19 polynomials exactly") {
    QuadratureSpec q;
    q.panel_width = 1.0;
    auto edges = panel_edges(0.0, 1.0, q.panel_width, {});
    auto res = integrate_refining(
        [](double t) { return cplx(std::pow(t, 19), 0.0); }, edges, q);
    CHECK(res.value.real() == doctest::Approx(1.0 / 20.0).epsilon(1e-14));
    CHECK(res.refinements == 1);  // first verification halving already agrees
}

TEST_CASE("oscillatory integrand under the frequency-capped panel width") {
    const double xi = 8.0;
    QuadratureSpec q;
    double cap = std::min(q.panel_width, 1.0 / (4.0 * (1.0 + xi)));
    auto edges = panel_edges(-1.0, 1.0, cap, {});
    auto res = integrate_refining(
        [xi](double t) {
            return cplx(std::cos(kTwoPi * xi * t), -std::sin(kTwoPi * xi * t));
        },
        edges, q);
    // integral of e^{-2 pi i xi t} over [-1,1] = sin(2 pi xi)/(pi xi) = 0 at integer xi
    CHECK(std::abs(res.value) <= 1e-12);
}

TEST_CASE("jump at a declared breakpoint integrates cleanly") {
    QuadratureSpec q;
    auto edges = panel_edges(-1.0, 1.0, q.panel_width, std::vector<double>{0.0});
    auto res = integrate_refining(
        [](double t) { return cplx(t >= 0.0 ? 1.0 : 0.0, 0.0); }, edges, q);
    CHECK(res.value.real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("non-convergence raises NumericError carrying the last two estimates") {
    QuadratureSpec q;
    q.max_halvings = 2;
    auto edges = panel_edges(0.0, 1.0, q.panel_width, {});
    try {
        integrate_refining(
            [](double t) { return cplx(std::sin(5e4 * t), 0.0); }, edges, q);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::isfinite(e.last_estimate.real()));
        CHECK(std::isfinite(e.previous_estimate.real()));
        CHECK(e.last_estimate != e.previous_estimate);
    }
}

TEST_CASE("effective cutoff widens with signal growth and center distance") {
    Window psi = windows::gaussian();
    QuadratureSpec q = QuadratureSpec::for_window(psi);
    SignalModel flat = signals::gaussian();
    SignalModel growing = signals::exp_step(1.5);
    double r_flat = effective_cutoff(flat, psi, 0.0, q);
    double r_grow0 = effective_cutoff(growing, psi, 0.0, q);
    double r_grow10 = effective_cutoff(growing, psi, 10.0, q);
    CHECK(r_grow0 >= r_flat);
    CHECK(r_grow10 > r_grow0);
    // the window envelope actually buries the product at the chosen radius
    CHECK(psi.envelope.value(r_grow10) * growing.growth.bound(10.0 + r_grow10) <=
          q.tail_tol);
}

TEST_CASE("for_window sizes the base cutoff from the decay envelope") {
    Window psi = windows::gaussian();
    QuadratureSpec q = QuadratureSpec::for_window(psi, 1e-10);
    CHECK(psi.envelope.value(q.support_cutoff) <= 1e-12);
}
