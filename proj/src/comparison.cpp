#include "gabor/comparison.hpp"

#include <cmath>

#include "gabor/errors.hpp"

namespace gabor {

namespace {
// log(e + e^u) without overflow
double log_e_plus_exp(double u) {
    if (u > 1.0) return u + std::log1p(std::exp(1.0 - u));
    return std::log(std::numbers::e + std::exp(u));
}
}  // namespace

double SlowlyVarying::value(double lambda) const {
    switch (kind) {
        case Kind::Constant:
            return c0;
        case Kind::LogPower:
            return std::pow(std::log(std::numbers::e + lambda), a);
        case Kind::IteratedLog:
            return std::log(std::numbers::e + std::log(std::numbers::e + lambda));
    }
    return 1.0;
}

double SlowlyVarying::log_value(double lambda) const {
    switch (kind) {
        case Kind::Constant:
            return std::log(c0);
        case Kind::LogPower:
            return a * std::log(std::log(std::numbers::e + lambda));
        case Kind::IteratedLog:
            return std::log(std::log(std::numbers::e + std::log(std::numbers::e + lambda)));
    }
    return 0.0;
}

double SlowlyVarying::log_value_at_exp(double u) const {
    switch (kind) {
        case Kind::Constant:
            return std::log(c0);
        case Kind::LogPower:
            return a * std::log(log_e_plus_exp(u));
        case Kind::IteratedLog:
            return std::log(std::numbers::e + log_e_plus_exp(u)) > 0
                       ? std::log(std::log(std::numbers::e + log_e_plus_exp(u)))
                       : 0.0;
    }
    return 0.0;
}

std::string SlowlyVarying::spec_string() const {
    switch (kind) {
        case Kind::Constant:
            return "const:" + std::to_string(c0);
        case Kind::LogPower:
            return "logpow:" + std::to_string(a);
        case Kind::IteratedLog:
            return "iterlog";
    }
    return "const:1";
}

SlowlyVarying SlowlyVarying::parse(const std::string& spec) {
    SlowlyVarying L;
    auto colon = spec.find(':');
    std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (head == "const") {
            L.kind = Kind::Constant;
            L.c0 = arg.empty() ? 1.0 : std::stod(arg);
            if (!(L.c0 > 0.0)) throw ConfigError("slowly varying spec: const needs c0 > 0");
            return L;
        }
        if (head == "logpow") {
            L.kind = Kind::LogPower;
            L.a = arg.empty() ? 1.0 : std::stod(arg);
            return L;
        }
        if (head == "iterlog") {
            L.kind = Kind::IteratedLog;
            return L;
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("slowly varying spec '" + spec + "': bad numeric argument");
    }
    throw ConfigError("unsupported slowly varying spec '" + spec +
                      "' (expected const:<c0>, logpow:<a>, iterlog)");
}

double ComparisonFunction::log_eval(double h) const {
    if (regime == ComparisonRegime::Exponential)
        return b * h + L.log_value_at_exp(std::abs(h));
    double s = std::max(std::abs(h), std::numbers::e);
    return nu * std::log(s) + L.log_value(s);
}

double ComparisonFunction::eval(double h) const { return std::exp(log_eval(h)); }

double ComparisonFunction::extended_log_eval(double x) const {
    if (negative_tau && x <= 0.0) return -(*negative_tau) * x;
    return log_eval(x);
}

double ComparisonFunction::extended_eval(double x) const {
    return std::exp(extended_log_eval(x));
}

namespace {
double slack_of(const SlowlyVarying& L) {
    switch (L.kind) {
        case SlowlyVarying::Kind::Constant:
            return 0.0;
        case SlowlyVarying::Kind::LogPower:
            return std::abs(L.a);
        case SlowlyVarying::Kind::IteratedLog:
            return 1.0;
    }
    return 1.0;
}
}  // namespace

ComparisonFunction ComparisonFunction::exponential(double b, SlowlyVarying L) {
    ComparisonFunction c;
    c.regime = ComparisonRegime::Exponential;
    c.b = b;
    c.L = L;
    c.envelope_rate = std::abs(b) + slack_of(L);
    c.envelope_amp = 1.0;
    return c;
}

ComparisonFunction ComparisonFunction::polynomial(double nu, SlowlyVarying L) {
    ComparisonFunction c;
    c.regime = ComparisonRegime::Polynomial;
    c.nu = nu;
    c.L = L;
    c.envelope_rate = std::abs(nu) + slack_of(L);
    c.envelope_amp = 1.0;
    return c;
}

ComparisonFunction ComparisonFunction::with_negative_extension(double tau) const {
    ComparisonFunction c = *this;
    c.negative_tau = tau;
    return c;
}

}  // namespace gabor
