#include "gabor/window.hpp"

#include <cmath>
#include <memory>

#include "gabor/errors.hpp"

namespace gabor {

double WindowEnvelope::value(double r) const {
    switch (kind) {
        case Kind::Gaussian:
            return amp * std::exp(-kPi * rate * r * r);
        case Kind::Exponential:
            return amp * std::exp(-rate * std::abs(r));
        case Kind::Compact:
            return std::abs(r) <= radius ? amp : 0.0;
    }
    return amp;
}

double WindowEnvelope::radius_for(double tol) const {
    if (!(tol > 0.0)) tol = 1e-14;
    switch (kind) {
        case Kind::Gaussian: {
            double q = std::log(std::max(amp / tol, 1.0)) / (kPi * rate);
            return std::sqrt(q) + 0.5;
        }
        case Kind::Exponential:
            return std::log(std::max(amp / tol, 1.0)) / rate + 0.5;
        case Kind::Compact:
            return radius;
    }
    return radius;
}

double WindowEnvelope::exp_budget() const {
    switch (kind) {
        case Kind::Gaussian:
            return kInf;
        case Kind::Exponential:
            return rate;
        case Kind::Compact:
            return kInf;
    }
    return 0.0;
}

double Window::derivative(int order, double t) const {
    if (order == 0) return eval(t);
    if (order < 0 || order > max_derivative_order())
        throw CapabilityError("window '" + name + "': derivative of order " +
                              std::to_string(order) + " unavailable (max " +
                              std::to_string(max_derivative_order()) + ")");
    return derivatives[static_cast<std::size_t>(order - 1)](t);
}

SignalModel Window::as_signal() const {
    SignalModel s;
    s.kind = SignalKind::CatalogExpression;
    s.id = "window:" + name;
    auto f = eval;
    s.eval_fn = [f](double t) { return cplx(f(t), 0.0); };
    s.growth = {GrowthHint::PolynomialType, envelope.amp, 0.0, 0.0};
    if (envelope.kind == WindowEnvelope::Kind::Compact) {
        s.support = {-envelope.radius, envelope.radius};
        s.growth.hint = GrowthHint::CompactSupport;
    }
    return s;
}

namespace windows {

namespace {

// derivatives of e^{-a t^2}
std::vector<std::function<double(double)>> exp_sq_derivatives(double a, double coeff) {
    std::vector<std::function<double(double)>> d;
    d.push_back([a, coeff](double t) { return coeff * (-2 * a * t) * std::exp(-a * t * t); });
    d.push_back([a, coeff](double t) {
        return coeff * (4 * a * a * t * t - 2 * a) * std::exp(-a * t * t);
    });
    d.push_back([a, coeff](double t) {
        return coeff * (-8 * a * a * a * t * t * t + 12 * a * a * t) * std::exp(-a * t * t);
    });
    d.push_back([a, coeff](double t) {
        double a2 = a * a;
        return coeff * (16 * a2 * a2 * t * t * t * t - 48 * a2 * a * t * t + 12 * a2) *
               std::exp(-a * t * t);
    });
    return d;
}

}  // namespace

Window gaussian() {
    Window w;
    w.name = "gaussian";
    w.eval = [](double t) { return std::exp(-kPi * t * t); };
    w.derivatives = exp_sq_derivatives(kPi, 1.0);
    w.decay_class = DecayClass::K1Exponential;
    w.envelope = {WindowEnvelope::Kind::Gaussian, 1.0, 1.0, 0.0};
    w.complex_ft = [](cplx z) { return std::exp(-kPi * z * z); };
    return w;
}

Window gauss_diff() {
    Window w;
    w.name = "gauss_diff";
    w.eval = [](double t) {
        return std::exp(-kPi * t * t) - 0.5 * std::exp(-2.0 * kPi * t * t);
    };
    auto d1 = exp_sq_derivatives(kPi, 1.0);
    auto d2 = exp_sq_derivatives(2.0 * kPi, -0.5);
    for (std::size_t i = 0; i < d1.size(); ++i) {
        auto f = d1[i], g = d2[i];
        w.derivatives.push_back([f, g](double t) { return f(t) + g(t); });
    }
    w.decay_class = DecayClass::K1Exponential;
    w.envelope = {WindowEnvelope::Kind::Gaussian, 1.0, 1.0, 0.0};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    w.complex_ft = [inv_sqrt2](cplx z) {
        return std::exp(-kPi * z * z) - 0.5 * inv_sqrt2 * std::exp(-kPi * z * z / 2.0);
    };
    return w;
}

Window from_samples(std::string name, double t0, double step, std::vector<double> values,
                    DecayClass decay_class) {
    double amp = 0.0;
    for (double v : values) amp = std::max(amp, std::abs(v));
    if (!(amp > 0.0))
        throw ConfigError("window '" + name + "': evaluator is identically zero");

    std::vector<cplx> cvals(values.begin(), values.end());
    SignalModel table = signals::uniform_table(name, t0, step, std::move(cvals));
    auto base = std::make_shared<SignalModel>(std::move(table));

    Window w;
    w.name = std::move(name);
    w.eval = [base](double t) { return base->eval(t).real(); };
    const double h = 1e-3;
    auto e = w.eval;
    // central differences, recursively stacked per order
    std::function<double(double)> prev = e;
    for (int order = 1; order <= 4; ++order) {
        auto p = prev;
        std::function<double(double)> d = [p, h](double t) {
            return (p(t + h) - p(t - h)) / (2.0 * h);
        };
        w.derivatives.push_back(d);
        prev = d;
    }
    w.decay_class = decay_class;
    double radius = std::max(std::abs(t0), std::abs(t0 + step * double(values.size() - 1)));
    w.envelope = {WindowEnvelope::Kind::Compact, amp, 1.0, radius};
    return w;
}

Window by_name(const std::string& name) {
    if (name == "gaussian") return gaussian();
    if (name == "gauss_diff") return gauss_diff();
    throw ConfigError("unknown window '" + name + "' (catalog: gaussian, gauss_diff)");
}

}  // namespace windows

}  // namespace gabor
