#pragma once

#include <optional>
#include <string>

#include "gabor/types.hpp"

namespace gabor {

/// Karamata slowly varying factor L: L(a*lambda)/L(lambda) -> 1 for each a>0.
/// Catalog: constants, powers of log(e+x), the iterated logarithm.
struct SlowlyVarying {
    enum class Kind { Constant, LogPower, IteratedLog };
    Kind kind = Kind::Constant;
    double c0 = 1.0;  // Constant value
    double a = 1.0;   // LogPower exponent

    double value(double lambda) const;
    double log_value(double lambda) const;
    /// log L(e^u), computed without forming e^u.
    double log_value_at_exp(double u) const;

    std::string spec_string() const;
    /// Parses "const:<c0>", "logpow:<a>", "iterlog". Unknown specs are a
    /// configuration error.
    static SlowlyVarying parse(const std::string& spec);
};

enum class ComparisonRegime { Exponential, Polynomial };

/// Comparison function c for S-asymptotics.
///   Exponential regime: c(h) = e^{b h} L(e^{|h|})
///   Polynomial regime:  c(h) = s^nu L(s), s = max(|h|, e)
/// Both are strictly positive on the whole line. The stored (r, A) satisfy
/// c(x+h)/c(h) <= A e^{r |x|}.
struct ComparisonFunction {
    ComparisonRegime regime = ComparisonRegime::Exponential;
    double b = 0.0;   // exponential rate
    double nu = 0.0;  // polynomial exponent
    SlowlyVarying L;
    std::optional<double> negative_tau;  // extension rate: c(x)=e^{-tau x}, x<=0

    double envelope_rate = 0.0;  // r
    double envelope_amp = 1.0;   // A

    double eval(double h) const;
    double log_eval(double h) const;

    /// With negative_tau set, x<=0 evaluates as e^{-tau x}; otherwise the
    /// regime formula applies on the whole line.
    double extended_eval(double x) const;
    double extended_log_eval(double x) const;

    static ComparisonFunction exponential(double b, SlowlyVarying L = {});
    static ComparisonFunction polynomial(double nu, SlowlyVarying L = {});
    ComparisonFunction with_negative_extension(double tau) const;
};

}  // namespace gabor
