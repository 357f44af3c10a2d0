#include "gabor/signal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace gabor {

double GrowthEnvelope::bound(double r) const {
    switch (hint) {
        case GrowthHint::ExpType:
            return amp * std::exp(std::min(700.0, exp_rate * r));
        case GrowthHint::PolynomialType:
            return amp * std::pow(1.0 + r, poly_degree);
        case GrowthHint::CompactSupport:
            return amp;
        case GrowthHint::Unknown:
            return amp * std::pow(1.0 + r, 8.0);
    }
    return amp;
}

cplx SignalModel::eval(double t) const {
    if (!eval_fn)
        throw CapabilityError("signal '" + id + "': no pointwise evaluator (point-mass combination)");
    return eval_fn(t);
}

cplx SignalModel::scaled_eval(double t, double log_denom) const {
    if (scaled_eval_fn) return scaled_eval_fn(t, log_denom);
    return eval(t) * std::exp(-log_denom);
}

std::vector<double> SignalModel::breakpoints_in(double a, double b) const {
    std::vector<double> out;
    if (breakpoints_fn) breakpoints_fn(a, b, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

SignalModel make_expression(std::string id, std::function<cplx(double)> f,
                            GrowthEnvelope growth, Interval support = whole_line()) {
    SignalModel s;
    s.kind = SignalKind::CatalogExpression;
    s.id = std::move(id);
    s.eval_fn = std::move(f);
    s.growth = growth;
    s.support = support;
    return s;
}

void check_function_like(const SignalModel& s, const char* op) {
    if (s.is_point_masses())
        throw UsageError(std::string(op) + ": operand '" + s.id + "' is a point-mass combination");
}

}  // namespace

SignalModel translate(const SignalModel& f, double x) {
    SignalModel out = f;
    out.id = f.id + (x >= 0 ? "+T" : "-T") + std::to_string(std::abs(x));
    if (f.is_point_masses()) {
        for (auto& m : out.masses) m.location += x;
        return out;
    }
    auto base = f;  // capture by value; SignalModel is immutable
    out.eval_fn = [base, x](double t) { return base.eval(t - x); };
    if (f.scaled_eval_fn)
        out.scaled_eval_fn = [base, x](double t, double d) { return base.scaled_eval(t - x, d); };
    out.support = f.support.shifted(x);
    if (f.breakpoints_fn) {
        auto bp = f.breakpoints_fn;
        out.breakpoints_fn = [bp, x](double a, double b, std::vector<double>& v) {
            std::vector<double> inner;
            bp(a - x, b - x, inner);
            for (double t : inner) v.push_back(t + x);
        };
    }
    // |f(t-x)| <= amp * env(|t| + |x|): fold the shift into the amplitude.
    if (f.growth.hint == GrowthHint::ExpType)
        out.growth.amp = f.growth.amp * std::exp(std::min(700.0, f.growth.exp_rate * std::abs(x)));
    else if (f.growth.hint == GrowthHint::PolynomialType || f.growth.hint == GrowthHint::Unknown)
        out.growth.amp = f.growth.amp * std::pow(1.0 + std::abs(x), f.growth.hint == GrowthHint::Unknown ? 8.0 : f.growth.poly_degree);
    return out;
}

SignalModel modulate(const SignalModel& f, double xi) {
    SignalModel out = f;
    out.id = f.id + "*M" + std::to_string(xi);
    if (f.is_point_masses()) {
        for (auto& m : out.masses)
            m.weight *= std::exp(cplx(0.0, kTwoPi * xi * m.location));
        return out;
    }
    auto base = f;
    out.eval_fn = [base, xi](double t) {
        return base.eval(t) * std::exp(cplx(0.0, kTwoPi * xi * t));
    };
    if (f.scaled_eval_fn)
        out.scaled_eval_fn = [base, xi](double t, double d) {
            return base.scaled_eval(t, d) * std::exp(cplx(0.0, kTwoPi * xi * t));
        };
    out.osc_rate = f.osc_rate + std::abs(xi);
    return out;
}

SignalModel scale(const SignalModel& f, cplx c) {
    SignalModel out = f;
    out.id = "scaled(" + f.id + ")";
    if (f.is_point_masses()) {
        for (auto& m : out.masses) m.weight *= c;
        return out;
    }
    auto base = f;
    out.eval_fn = [base, c](double t) { return c * base.eval(t); };
    if (f.scaled_eval_fn)
        out.scaled_eval_fn = [base, c](double t, double d) { return c * base.scaled_eval(t, d); };
    out.growth.amp = f.growth.amp * std::abs(c);
    return out;
}

SignalModel add(const SignalModel& f, const SignalModel& g) {
    if (f.is_point_masses() != g.is_point_masses())
        throw UsageError("add: cannot mix point masses with function-like signals");
    SignalModel out;
    out.id = f.id + "+" + g.id;
    if (f.is_point_masses()) {
        out.kind = SignalKind::PointMassCombination;
        out.masses = f.masses;
        out.masses.insert(out.masses.end(), g.masses.begin(), g.masses.end());
        return out;
    }
    check_function_like(f, "add");
    auto lhs = f, rhs = g;
    out.kind = SignalKind::CatalogExpression;
    out.eval_fn = [lhs, rhs](double t) { return lhs.eval(t) + rhs.eval(t); };
    out.scaled_eval_fn = [lhs, rhs](double t, double d) {
        return lhs.scaled_eval(t, d) + rhs.scaled_eval(t, d);
    };
    out.support = {std::min(f.support.lo, g.support.lo), std::max(f.support.hi, g.support.hi)};
    out.osc_rate = std::max(f.osc_rate, g.osc_rate);
    auto bf = f.breakpoints_fn, bg = g.breakpoints_fn;
    // interior support edges of either term become kinks of the sum
    double ef_lo = f.support.lo, ef_hi = f.support.hi;
    double eg_lo = g.support.lo, eg_hi = g.support.hi;
    out.breakpoints_fn = [bf, bg, ef_lo, ef_hi, eg_lo, eg_hi](double a, double b, std::vector<double>& v) {
        if (bf) bf(a, b, v);
        if (bg) bg(a, b, v);
        for (double e : {ef_lo, ef_hi, eg_lo, eg_hi})
            if (std::isfinite(e) && e > a && e < b) v.push_back(e);
    };
    // envelope: take the wider hint, sum amplitudes
    const auto rank = [](GrowthHint h) {
        switch (h) {
            case GrowthHint::CompactSupport: return 0;
            case GrowthHint::PolynomialType: return 1;
            case GrowthHint::Unknown: return 2;
            case GrowthHint::ExpType: return 3;
        }
        return 2;
    };
    out.growth = rank(f.growth.hint) >= rank(g.growth.hint) ? f.growth : g.growth;
    out.growth.amp = f.growth.amp + g.growth.amp;
    out.growth.exp_rate = std::max(f.growth.exp_rate, g.growth.exp_rate);
    out.growth.poly_degree = std::max(f.growth.poly_degree, g.growth.poly_degree);
    return out;
}

namespace signals {

SignalModel zero() {
    auto s = make_expression("zero", [](double) { return cplx(0.0, 0.0); },
                             {GrowthHint::CompactSupport, 0.0, 0.0, 0.0}, {0.0, 0.0});
    s.scaled_eval_fn = [](double, double) { return cplx(0.0, 0.0); };
    return s;
}

SignalModel constant(cplx value) {
    return make_expression("constant", [value](double) { return value; },
                           {GrowthHint::PolynomialType, std::abs(value), 0.0, 0.0});
}

SignalModel gaussian() {
    return make_expression("gaussian",
                           [](double t) { return cplx(std::exp(-kPi * t * t), 0.0); },
                           {GrowthHint::PolynomialType, 1.0, 0.0, 0.0});
}

SignalModel heaviside() {
    auto s = make_expression("heaviside",
                             [](double t) { return cplx(t >= 0.0 ? 1.0 : 0.0, 0.0); },
                             {GrowthHint::PolynomialType, 1.0, 0.0, 0.0},
                             {0.0, kInf});
    s.breakpoints_fn = [](double a, double b, std::vector<double>& v) {
        if (0.0 > a && 0.0 < b) v.push_back(0.0);
    };
    return s;
}

SignalModel exp_step(double b) {
    GrowthEnvelope g;
    if (b > 0) {
        g = {GrowthHint::ExpType, 1.0, b, 0.0};
    } else {
        g = {GrowthHint::PolynomialType, 1.0, 0.0, 0.0};
    }
    auto s = make_expression("exp_step(b=" + std::to_string(b) + ")",
                             [b](double t) {
                                 return cplx(t >= 0.0 ? std::exp(b * t) : 0.0, 0.0);
                             },
                             g, {0.0, kInf});
    s.scaled_eval_fn = [b](double t, double d) {
        if (t < 0.0) return cplx(0.0, 0.0);
        return cplx(std::exp(b * t - d), 0.0);
    };
    s.breakpoints_fn = [](double a, double bb, std::vector<double>& v) {
        if (0.0 > a && 0.0 < bb) v.push_back(0.0);
    };
    return s;
}

SignalModel staircase() {
    auto s = make_expression("staircase",
                             [](double t) {
                                 return cplx(t >= 0.0 ? std::floor(t) : 0.0, 0.0);
                             },
                             {GrowthHint::PolynomialType, 1.0, 0.0, 1.0},
                             {0.0, kInf});
    s.breakpoints_fn = [](double a, double b, std::vector<double>& v) {
        double first = std::max(1.0, std::ceil(a));
        for (double m = first; m < b; m += 1.0) v.push_back(m);
    };
    return s;
}

SignalModel poly_log(double nu) {
    auto s = make_expression("poly_log(nu=" + std::to_string(nu) + ")",
                             [nu](double t) {
                                 if (t <= 1.0) return cplx(0.0, 0.0);
                                 return cplx(std::pow(t, nu) * std::log(t), 0.0);
                             },
                             {GrowthHint::PolynomialType, 1.0, 0.0, nu + 1.0},
                             {1.0, kInf});
    s.scaled_eval_fn = [nu](double t, double d) {
        if (t <= 1.0) return cplx(0.0, 0.0);
        double lt = std::log(t);
        return cplx(std::exp(nu * lt + std::log(lt) - d), 0.0);
    };
    s.breakpoints_fn = [](double a, double b, std::vector<double>& v) {
        if (1.0 > a && 1.0 < b) v.push_back(1.0);
    };
    return s;
}

SignalModel sin_exp() {
    return make_expression("sin_exp", [](double t) { return cplx(std::sin(std::exp(t)), 0.0); },
                           {GrowthHint::PolynomialType, 1.0, 0.0, 0.0});
}

SignalModel sin_step() {
    auto s = make_expression("sin_step",
                             [](double t) { return cplx(t >= 0.0 ? std::sin(t) : 0.0, 0.0); },
                             {GrowthHint::PolynomialType, 1.0, 0.0, 0.0},
                             {0.0, kInf});
    s.osc_rate = 1.0 / kTwoPi;
    s.breakpoints_fn = [](double a, double b, std::vector<double>& v) {
        if (0.0 > a && 0.0 < b) v.push_back(0.0);
    };
    return s;
}

SignalModel point_masses(std::vector<PointMass> masses) {
    if (masses.empty())
        throw ConfigError("point_masses: at least one mass required");
    SignalModel s;
    s.kind = SignalKind::PointMassCombination;
    s.id = "point_masses(" + std::to_string(masses.size()) + ")";
    s.masses = std::move(masses);
    double lo = kInf, hi = -kInf, amp = 0.0;
    for (const auto& m : s.masses) {
        lo = std::min(lo, m.location);
        hi = std::max(hi, m.location);
        amp += std::abs(m.weight);
    }
    s.support = {lo, hi};
    s.growth = {GrowthHint::CompactSupport, amp, 0.0, 0.0};
    return s;
}

SignalModel sampled(std::string id, std::vector<double> abscissae,
                    std::vector<cplx> values, TableExtension extension) {
    if (abscissae.size() != values.size() || abscissae.size() < 2)
        throw ConfigError("sampled: need >= 2 samples with matching abscissae");
    for (std::size_t i = 1; i < abscissae.size(); ++i)
        if (!(abscissae[i] > abscissae[i - 1]))
            throw ConfigError("sampled: abscissae must be strictly increasing");

    auto xs = std::make_shared<std::vector<double>>(std::move(abscissae));
    auto vs = std::make_shared<std::vector<cplx>>(std::move(values));
    double amp = 0.0;
    for (const auto& v : *vs) amp = std::max(amp, std::abs(v));

    SignalModel s;
    s.kind = SignalKind::SampledTable;
    s.id = std::move(id);
    s.eval_fn = [xs, vs, extension](double t) -> cplx {
        const auto& x = *xs;
        const auto& v = *vs;
        if (t <= x.front())
            return extension == TableExtension::Zero ? (t < x.front() ? cplx(0) : v.front())
                                                     : v.front();
        if (t >= x.back())
            return extension == TableExtension::Zero ? (t > x.back() ? cplx(0) : v.back())
                                                     : v.back();
        auto it = std::upper_bound(x.begin(), x.end(), t);
        std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        double u = (t - x[i]) / (x[i + 1] - x[i]);
        return v[i] * (1.0 - u) + v[i + 1] * u;
    };
    if (extension == TableExtension::Zero) {
        s.support = {xs->front(), xs->back()};
        s.growth = {GrowthHint::CompactSupport, amp, 0.0, 0.0};
    } else {
        s.support = whole_line();
        s.growth = {GrowthHint::PolynomialType, amp, 0.0, 0.0};
    }
    s.breakpoints_fn = [xs](double a, double b, std::vector<double>& out) {
        auto lo = std::lower_bound(xs->begin(), xs->end(), a);
        auto hi = std::upper_bound(xs->begin(), xs->end(), b);
        for (auto it = lo; it != hi; ++it) out.push_back(*it);
    };
    return s;
}

SignalModel uniform_table(std::string id, double t0, double step, std::vector<cplx> values) {
    if (values.size() < 4 || !(step > 0.0))
        throw ConfigError("uniform_table: need >= 4 samples and positive step");
    auto vs = std::make_shared<std::vector<cplx>>(std::move(values));
    const std::size_t n = vs->size();
    double amp = 0.0;
    for (const auto& v : *vs) amp = std::max(amp, std::abs(v));
    double t_end = t0 + step * static_cast<double>(n - 1);

    SignalModel s;
    s.kind = SignalKind::SampledTable;
    s.id = std::move(id);
    s.eval_fn = [vs, t0, step, n, t_end](double t) -> cplx {
        if (t < t0 || t > t_end) return cplx(0.0, 0.0);
        double u = (t - t0) / step;
        auto i = static_cast<std::ptrdiff_t>(std::floor(u));
        if (i < 0) i = 0;
        if (i > static_cast<std::ptrdiff_t>(n) - 2) i = static_cast<std::ptrdiff_t>(n) - 2;
        double x = u - static_cast<double>(i);
        const auto& v = *vs;
        // Catmull-Rom with clamped end slopes
        cplx p0 = v[static_cast<std::size_t>(i > 0 ? i - 1 : 0)];
        cplx p1 = v[static_cast<std::size_t>(i)];
        cplx p2 = v[static_cast<std::size_t>(i + 1)];
        cplx p3 = v[static_cast<std::size_t>(i + 2 < static_cast<std::ptrdiff_t>(n) ? i + 2
                                                                                    : i + 1)];
        cplx m1 = 0.5 * (p2 - p0);
        cplx m2 = 0.5 * (p3 - p1);
        double x2 = x * x, x3 = x2 * x;
        return (2 * x3 - 3 * x2 + 1) * p1 + (x3 - 2 * x2 + x) * m1 +
               (-2 * x3 + 3 * x2) * p2 + (x3 - x2) * m2;
    };
    s.support = {t0, t_end};
    s.growth = {GrowthHint::CompactSupport, amp, 0.0, 0.0};
    s.breakpoints_fn = [t0, step, n](double a, double b, std::vector<double>& out) {
        double first = std::ceil((a - t0) / step);
        for (double j = std::max(first, 0.0); j < static_cast<double>(n); j += 1.0) {
            double t = t0 + j * step;
            if (t >= b) break;
            if (t > a) out.push_back(t);
        }
    };
    return s;
}

}  // namespace signals

}  // namespace gabor
