#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace tauber {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
// ln(1e300): above this the log-value is the only trustworthy representation
inline constexpr double kLogBig = 690.7755278982137;

struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ln(e^a + e^b) without overflow
inline double log_add(double a, double b)
{
    if (a < b) std::swap(a, b);
    if (b == -kInf) return a;
    return a + std::log1p(std::exp(b - a));
}

// ln(e^a - e^b), a >= b
inline double log_sub(double a, double b)
{
    if (b == -kInf) return a;
    return a + std::log1p(-std::exp(b - a));
}

inline double wrap_phase(double p)
{
    p = std::remainder(p, 2.0 * kPi);
    return p;
}

// complex number as (log-modulus, phase); products never overflow
struct LogPolar {
    double logmod = -kInf;
    double phase = 0.0;

    static LogPolar from(cplx z) { return {std::log(std::abs(z)), std::arg(z)}; }
    cplx value() const { return std::polar(std::exp(logmod), phase); }
    LogPolar operator*(const LogPolar& o) const { return {logmod + o.logmod, phase + o.phase}; }
    LogPolar operator/(const LogPolar& o) const { return {logmod - o.logmod, phase - o.phase}; }
};

// (value, log_value) pair; log_value is authoritative once value leaves double range
struct LogEval {
    double value;
    double log_value;

    static LogEval of(double v) { return {v, std::log(v)}; }
};

inline void require(bool cond, const std::string& msg)
{
    if (!cond) throw validation_error(msg);
}

}  // namespace tauber
