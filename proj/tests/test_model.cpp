#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gabor/comparison.hpp"
#include "gabor/signal.hpp"
#include "gabor/window.hpp"
#include "oracles.hpp"

using namespace gabor;

namespace {
std::vector<double> test_grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (double t = lo; t <= hi + 1e-12; t += step) g.push_back(t);
    return g;
}
}  // namespace

TEST_CASE("translate: identity, point masses, shifted evaluation") {
    SignalModel g = signals::gaussian();
    SignalModel same = translate(g, 0.0);
    for (double t : test_grid(-3, 3, 0.25))
        CHECK(std::abs(same.eval(t) - g.eval(t)) <= 1e-15);

    SignalModel delta = signals::point_masses({{0.0, cplx(1.0, 0.0)}});
    SignalModel shifted = translate(delta, 2.0);
    REQUIRE(shifted.masses.size() == 1);
    CHECK(shifted.masses[0].location == doctest::Approx(2.0));

    // (T_1 gaussian)(1) = gaussian(0) = 1
    CHECK(translate(g, 1.0).eval(1.0).real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("modulate: identity, commutation phase, direct evaluation") {
    SignalModel g = signals::gaussian();
    SignalModel same = modulate(g, 0.0);
    for (double t : test_grid(-3, 3, 0.25))
        CHECK(std::abs(same.eval(t) - g.eval(t)) <= 1e-15);

    // M_1 T_1 = e^{2 pi i} T_1 M_1 (the phase equals one here)
    SignalModel lhs = modulate(translate(g, 1.0), 1.0);
    SignalModel rhs = translate(modulate(g, 1.0), 1.0);
    for (double t : test_grid(-2, 2, 0.1))
        CHECK(std::abs(lhs.eval(t) - rhs.eval(t)) <= 1e-12 * (1.0 + std::abs(g.eval(t - 1.0))));

    SignalModel one = signals::constant(cplx(1.0, 0.0));
    cplx v = modulate(one, 0.5).eval(1.0);
    CHECK(v.real() == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(std::abs(v.imag()) <= 1e-13);
}

TEST_CASE("commutation identity holds across signals and parameters") {
    for (const SignalModel& f : {signals::gaussian(), signals::exp_step(0.5)}) {
        for (double x : {-1.5, 0.3, 2.0})
            for (double xi : {-2.0, 0.7, 1.25}) {
                SignalModel lhs = modulate(translate(f, x), xi);
                SignalModel rhs = scale(translate(modulate(f, xi), x),
                                        std::exp(cplx(0.0, kTwoPi * x * xi)));
                for (double t : test_grid(-2, 4, 0.5)) {
                    double slack = 1e-12 * (1.0 + std::abs(f.eval(t - x)));
                    CHECK(std::abs(lhs.eval(t) - rhs.eval(t)) <= slack);
                }
            }
    }
}

TEST_CASE("comparison_eval: catalog values") {
    ComparisonFunction c0 = ComparisonFunction::exponential(0.0);
    CHECK(c0.eval(5.0) == doctest::Approx(1.0).epsilon(1e-14));

    ComparisonFunction c1 = ComparisonFunction::exponential(1.0);
    CHECK(c1.eval(2.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-13));

    // e^3 log(e + e^3), checked against long-double arithmetic
    ComparisonFunction clog =
        ComparisonFunction::exponential(1.0, SlowlyVarying::parse("logpow:1"));
    long double expected = std::exp(3.0L) * std::log(std::exp(1.0L) + std::exp(3.0L));
    CHECK(clog.eval(3.0) == doctest::Approx(static_cast<double>(expected)).epsilon(1e-13));

    CHECK_THROWS_AS(SlowlyVarying::parse("mystery:3"), ConfigError);
    CHECK_THROWS_AS(SlowlyVarying::parse("const:-1"), ConfigError);
}

TEST_CASE("comparison ratio converges to e^{bx}") {
    // catalog instances with closed-form ratio limits; the 1% gate at h=80
    // needs L to vary slowly enough, so the logpow exponent is kept small
    // here and logpow:1 gets the longer runway below
    struct Case {
        ComparisonFunction c;
        double b;
    };
    std::vector<Case> cases = {
        {ComparisonFunction::exponential(0.0), 0.0},
        {ComparisonFunction::exponential(1.0), 1.0},
        {ComparisonFunction::exponential(0.5, SlowlyVarying::parse("iterlog")), 0.5},
        {ComparisonFunction::exponential(1.0, SlowlyVarying::parse("logpow:0.3")), 1.0},
    };
    for (const auto& [c, b] : cases) {
        for (double x : {-2.0, -1.0, 1.0, 2.0}) {
            double target = std::exp(b * x);
            double prev_dev = -1.0;
            for (double h : {10.0, 20.0, 40.0, 80.0}) {
                double ratio = std::exp(c.log_eval(x + h) - c.log_eval(h));
                double dev = std::abs(ratio - target) / target;
                if (prev_dev >= 0.0) CHECK(dev <= prev_dev + 1e-12);
                prev_dev = dev;
                if (h == 80.0) CHECK(dev < 0.01);
            }
        }
    }
    // logpow:1 deviates by a*|x|/h, so the 1% level arrives around h ~ 200|x|
    ComparisonFunction slow =
        ComparisonFunction::exponential(1.0, SlowlyVarying::parse("logpow:1"));
    for (double x : {-2.0, -1.0, 1.0, 2.0}) {
        double target = std::exp(1.0 * x);
        double dev_last = 0.0;
        for (double h : {80.0, 160.0, 320.0, 640.0, 1280.0}) {
            double ratio = std::exp(slow.log_eval(x + h) - slow.log_eval(h));
            dev_last = std::abs(ratio - target) / target;
        }
        CHECK(dev_last < 0.01);
    }
}

TEST_CASE("comparison envelope c(x+h)/c(h) <= A e^{r|x|}") {
    std::vector<ComparisonFunction> cases = {
        ComparisonFunction::exponential(1.0),
        ComparisonFunction::exponential(-0.5, SlowlyVarying::parse("logpow:2")),
        ComparisonFunction::exponential(2.0, SlowlyVarying::parse("iterlog")),
        ComparisonFunction::polynomial(2.0, SlowlyVarying::parse("logpow:1")),
        ComparisonFunction::polynomial(-1.0),
    };
    for (const auto& c : cases) {
        for (double x = -10.0; x <= 10.0; x += 0.5)
            for (double h = 1.0; h <= 100.0; h += 2.5) {
                double ratio = std::exp(c.log_eval(x + h) - c.log_eval(h));
                double bound = c.envelope_amp * std::exp(c.envelope_rate * std::abs(x));
                CHECK(ratio <= bound * (1.0 + 1e-12));
            }
    }
}

TEST_CASE("comparison negative-side extension and positivity") {
    ComparisonFunction c = ComparisonFunction::exponential(1.0).with_negative_extension(2.0);
    CHECK(c.extended_eval(-3.0) == doctest::Approx(std::exp(6.0)).epsilon(1e-13));
    CHECK(c.extended_eval(3.0) == doctest::Approx(std::exp(3.0)).epsilon(1e-13));
    ComparisonFunction p = ComparisonFunction::polynomial(2.0);
    for (double h : {-50.0, -1.0, 0.0, 1e-9, 0.5, 3.0, 1000.0}) {
        CHECK(c.eval(h) > 0.0);
        CHECK(p.eval(h) > 0.0);
    }
}

TEST_CASE("signal catalog: invariants of the declared kinds") {
    CHECK_THROWS_AS(signals::point_masses({}), ConfigError);
    SignalModel delta = signals::point_masses({{1.0, cplx(2.0, 0.0)}});
    CHECK(delta.is_point_masses());
    CHECK_THROWS_AS(delta.eval(0.0), CapabilityError);

    CHECK_THROWS_AS(
        signals::sampled("bad", {0.0, 0.0, 1.0}, {cplx(1), cplx(2), cplx(3)}),
        ConfigError);

    SignalModel table = signals::sampled("t", {0.0, 1.0, 2.0}, {cplx(1), cplx(3), cplx(5)});
    CHECK(table.eval(0.5).real() == doctest::Approx(2.0));
    CHECK(table.eval(5.0) == cplx(0.0, 0.0));  // zero extension is the default

    SignalModel held =
        signals::sampled("h", {0.0, 1.0}, {cplx(1), cplx(3)}, TableExtension::HoldLast);
    CHECK(held.eval(10.0).real() == doctest::Approx(3.0));
    CHECK(held.eval(-10.0).real() == doctest::Approx(1.0));

    SignalModel st = signals::staircase();
    auto bps = st.breakpoints_in(0.5, 4.5);
    CHECK(bps == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(st.eval(3.7).real() == doctest::Approx(3.0));
    CHECK(st.eval(-1.0) == cplx(0.0, 0.0));
}

TEST_CASE("scaled evaluation stays in range for exponential-type signals") {
    SignalModel f = signals::exp_step(1.0);
    // f(300)/e^{300} = 1 even though both factors overflow double range
    CHECK(f.scaled_eval(300.0, 300.0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.scaled_eval(-1.0, 300.0) == cplx(0.0, 0.0));
    SignalModel sum = add(signals::exp_step(1.0), scale(signals::heaviside(), cplx(0.5, 0.0)));
    CHECK(sum.scaled_eval(300.0, 300.0).real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("window catalog: derivatives match finite differences") {
    for (const Window& w : {windows::gaussian(), windows::gauss_diff()}) {
        CHECK(w.max_derivative_order() == 4);
        const double h = 1e-4;
        for (double t : test_grid(-2, 2, 0.37)) {
            for (int order = 1; order <= 2; ++order) {
                double fd = (w.derivative(order - 1, t + h) -
                             w.derivative(order - 1, t - h)) /
                            (2.0 * h);
                CHECK(w.derivative(order, t) == doctest::Approx(fd).epsilon(1e-6));
            }
        }
        CHECK_THROWS_AS(w.derivative(5, 0.0), CapabilityError);
    }
}

TEST_CASE("window closed-form transform agrees with quadrature at real frequencies") {
    for (const Window& w : {windows::gaussian(), windows::gauss_diff()}) {
        REQUIRE(w.has_complex_ft());
        for (double xi : {0.0, 0.5, -1.0, 2.0}) {
            cplx closed = w.complex_ft(cplx(xi, 0.0));
            cplx numeric = oracle::integrate(
                [&](long double t) {
                    const long double twopi = 2.0L * 3.141592653589793238462643L;
                    return std::complex<long double>(w.eval(static_cast<double>(t)), 0.0L) *
                           std::complex<long double>(std::cos(-twopi * xi * t),
                                                     std::sin(-twopi * xi * t));
                },
                -8.0L, 8.0L);
            CHECK(std::abs(closed - numeric) <= 1e-10);
        }
    }
}

TEST_CASE("window envelope radius and zero-window rejection") {
    Window g = windows::gaussian();
    double r = g.envelope.radius_for(1e-12);
    CHECK(g.eval(r) <= 1e-12);
    CHECK(g.envelope.exp_budget() == kInf);

    CHECK_THROWS_AS(windows::from_samples("null", 0.0, 0.1, std::vector<double>(16, 0.0)),
                    ConfigError);
    CHECK_THROWS_AS(windows::by_name("nonexistent"), ConfigError);
}

TEST_CASE("lattice invariants") {
    CHECK_THROWS_AS(Lattice(0.0, 1.0, -1, 1, -1, 1), ConfigError);
    CHECK_THROWS_AS(Lattice(1.0, 1.0, 2, 1, -1, 1), ConfigError);
    Lattice lat(0.5, 1.0, -40, 40, -16, 16);
    CHECK(lat.density_product() == doctest::Approx(0.5));
    CHECK(lat.node_count() == 81u * 33u);
    CHECK(lat.index(-40, -16) == 0u);
    CHECK(lat.index(-40, -15) == 1u);
}
