#pragma once

// Monotone rate functions M, K on [0, inf): an expression tree evaluated in
// (value, log-value) form, the M_K / K_m transforms, the right inverse and
// grid checks of the growth hypotheses.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"

namespace tauber {

enum class RateKind {
    constant,        // [c]
    power,           // [a, c]      c * s^a
    log_power,       // [a]         log(e v s)^a
    exp,             // [c, a]      exp(c * s^a)
    double_exp,      // [c, a]      exp(exp(c * s^a))
    product,         // children multiplied
    max,             // pointwise max of children
    max_with_1,      // max(1, child)
    compose,         // [scale, shift]  outer(scale * inner(s) + shift), argument clamped at 0
    running_sup,     // sup_{s' <= s} child(s')
    piecewise_linear // [x0, y0, x1, y1, ...], constant left of x0, last slope right of the end
};

struct RateSpec {
    RateKind kind = RateKind::constant;
    std::vector<double> params;
    std::vector<RateSpec> children;

    bool operator==(const RateSpec&) const = default;
};

inline const char* kind_name(RateKind k)
{
    switch (k) {
    case RateKind::constant: return "constant";
    case RateKind::power: return "power";
    case RateKind::log_power: return "log_power";
    case RateKind::exp: return "exp";
    case RateKind::double_exp: return "double_exp";
    case RateKind::product: return "product";
    case RateKind::max: return "max";
    case RateKind::max_with_1: return "max_with_1";
    case RateKind::compose: return "compose";
    case RateKind::running_sup: return "running_sup";
    case RateKind::piecewise_linear: return "piecewise_linear";
    }
    return "?";
}

inline RateKind kind_from_name(const std::string& s)
{
    for (int i = 0; i <= static_cast<int>(RateKind::piecewise_linear); ++i) {
        auto k = static_cast<RateKind>(i);
        if (s == kind_name(k)) return k;
    }
    throw validation_error("unknown rate node kind '" + s + "'");
}

// ---- constructors ---------------------------------------------------------

namespace rate {

inline RateSpec constant(double c) { return {RateKind::constant, {c}, {}}; }
inline RateSpec power(double a, double c = 1.0) { return {RateKind::power, {a, c}, {}}; }
inline RateSpec identity() { return power(1.0); }
inline RateSpec log_power(double a) { return {RateKind::log_power, {a}, {}}; }
inline RateSpec exp(double c, double a) { return {RateKind::exp, {c, a}, {}}; }
inline RateSpec double_exp(double c, double a) { return {RateKind::double_exp, {c, a}, {}}; }
inline RateSpec product(std::vector<RateSpec> ch) { return {RateKind::product, {}, std::move(ch)}; }
inline RateSpec max(std::vector<RateSpec> ch) { return {RateKind::max, {}, std::move(ch)}; }
inline RateSpec max1(RateSpec ch) { return {RateKind::max_with_1, {}, {std::move(ch)}}; }
inline RateSpec compose(RateSpec outer, RateSpec inner, double scale = 1.0, double shift = 0.0)
{
    return {RateKind::compose, {scale, shift}, {std::move(outer), std::move(inner)}};
}
inline RateSpec running_sup(RateSpec ch) { return {RateKind::running_sup, {}, {std::move(ch)}}; }
inline RateSpec piecewise_linear(const std::vector<double>& xs, const std::vector<double>& ys)
{
    RateSpec r{RateKind::piecewise_linear, {}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        r.params.push_back(xs[i]);
        r.params.push_back(ys.at(i));
    }
    return r;
}
// 1 v s^a
inline RateSpec max1_power(double a) { return max1(power(a)); }
// F(s) = s on [0,1], 1 on [1,2], s-1 beyond
inline RateSpec flat_preset() { return piecewise_linear({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 1.0, 2.0}); }

}  // namespace rate

// ---- validation -----------------------------------------------------------

inline bool is_monotone(const RateSpec& r)
{
    const auto& p = r.params;
    switch (r.kind) {
    case RateKind::constant: return true;
    case RateKind::power: return p[0] >= 0 && p[1] >= 0;
    case RateKind::log_power: return p[0] >= 0;
    case RateKind::exp:
    case RateKind::double_exp: return p[0] >= 0 && p[1] >= 0;
    case RateKind::product:
    case RateKind::max:
        return std::all_of(r.children.begin(), r.children.end(), is_monotone);
    case RateKind::max_with_1: return is_monotone(r.children[0]);
    case RateKind::compose:
        if (r.children[1].kind == RateKind::constant) return true;
        return p[0] >= 0 && is_monotone(r.children[0]) && is_monotone(r.children[1]);
    case RateKind::running_sup: return true;
    case RateKind::piecewise_linear:
        for (std::size_t i = 3; i < p.size(); i += 2)
            if (p[i] < p[i - 2]) return false;
        return true;
    }
    return false;
}

// Structural checks; with require_monotone, also rejects trees whose static
// monotonicity cannot be established (negative powers outside a running sup).
inline void validate(const RateSpec& r, bool require_monotone = true)
{
    const auto& p = r.params;
    auto nparams = [&](std::size_t n) {
        require(p.size() == n, std::string(kind_name(r.kind)) + ": expected " + std::to_string(n) + " params");
    };
    auto nchildren = [&](std::size_t lo, std::size_t hi) {
        require(r.children.size() >= lo && r.children.size() <= hi,
                std::string(kind_name(r.kind)) + ": wrong number of children");
    };
    for (double v : p) require(std::isfinite(v), std::string(kind_name(r.kind)) + ": non-finite parameter");
    switch (r.kind) {
    case RateKind::constant:
        nparams(1), nchildren(0, 0);
        require(p[0] > 0, "constant must be positive");
        break;
    case RateKind::power:
        nparams(2), nchildren(0, 0);
        require(p[1] > 0, "power: coefficient must be positive");
        break;
    case RateKind::log_power: nparams(1), nchildren(0, 0); break;
    case RateKind::exp:
    case RateKind::double_exp:
        nparams(2), nchildren(0, 0);
        require(p[1] >= 0, std::string(kind_name(r.kind)) + ": negative exponent");
        break;
    case RateKind::product:
    case RateKind::max: nparams(0), nchildren(1, 1u << 20); break;
    case RateKind::max_with_1:
    case RateKind::running_sup: nparams(0), nchildren(1, 1); break;
    case RateKind::compose:
        nparams(2), nchildren(2, 2);
        require(p[0] > 0, "compose: scale must be positive");
        break;
    case RateKind::piecewise_linear:
        require(p.size() >= 4 && p.size() % 2 == 0, "piecewise_linear: need at least two (x, y) knots");
        for (std::size_t i = 2; i < p.size(); i += 2) require(p[i] > p[i - 2], "piecewise_linear: knots must increase");
        for (std::size_t i = 1; i < p.size(); i += 2) require(p[i] >= 0, "piecewise_linear: negative value");
        break;
    }
    if (r.kind == RateKind::running_sup) {
        validate(r.children[0], false);
        return;
    }
    for (const auto& c : r.children) validate(c, require_monotone);
    if (require_monotone && !is_monotone(r))
        throw validation_error(std::string(kind_name(r.kind)) + ": non-monotone composition");
}

// ---- evaluation -----------------------------------------------------------

namespace detail {

// x^a for x given as (value, log_value)
inline double pow_arg(const LogEval& x, double a)
{
    if (a == 0.0) return 1.0;
    if (std::isfinite(x.value)) return std::pow(x.value, a);
    return std::exp(a * x.log_value);
}

inline LogEval finish(double v, double lv)
{
    if (!std::isfinite(v) && std::isfinite(lv) && lv < 709.0) v = std::exp(lv);
    if (std::isfinite(lv) && lv > 709.78) v = kInf;
    return {v, lv};
}

LogEval eval_at(const RateSpec& r, const LogEval& x);

inline LogEval arg_from_log(double ls)
{
    return {ls < 709.0 ? std::exp(ls) : kInf, ls};
}

inline void collect_breakpoints(const RateSpec& r, std::vector<double>& out)
{
    if (r.kind == RateKind::piecewise_linear)
        for (std::size_t i = 0; i < r.params.size(); i += 2) out.push_back(r.params[i]);
    for (const auto& c : r.children) collect_breakpoints(c, out);
}

// Sampled sup over [0, s]. Breakpoints of piecewise-linear nodes are always
// candidates, which makes the result exact (and monotone) for such children. Sample points are s times a fixed fraction, formed
// in log space so arguments beyond double range work too.
inline LogEval eval_running_sup(const RateSpec& child, const LogEval& x)
{
    if (is_monotone(child)) return eval_at(child, x);
    LogEval best = eval_at(child, x);
    auto consider = [&](const LogEval& u) {
        LogEval e = eval_at(child, u);
        if (e.log_value > best.log_value) best = e;
    };
    consider({0.0, -kInf});
    std::vector<double> bps;
    collect_breakpoints(child, bps);
    for (double b : bps)
        if (b > 0 && std::log(b) <= x.log_value) consider(LogEval::of(b));
    if (x.log_value > -kInf) {
        // geometric sweep catches features near 0, linear sweep the bulk
        const int ng = 240, nl = 160;
        for (int i = 0; i < ng; ++i) consider(arg_from_log(x.log_value + std::log(1e-8) * (1.0 - double(i) / ng)));
        for (int i = 1; i < nl; ++i) consider(arg_from_log(x.log_value + std::log(double(i) / nl)));
    }
    return best;
}

inline LogEval eval_at(const RateSpec& r, const LogEval& x)
{
    const auto& p = r.params;
    switch (r.kind) {
    case RateKind::constant: return {p[0], std::log(p[0])};
    case RateKind::power: {
        const double a = p[0], c = p[1];
        if (a == 0.0) return {c, std::log(c)};
        double v = std::isfinite(x.value) ? c * std::pow(x.value, a) : kInf;
        return finish(v, std::log(c) + a * x.log_value);
    }
    case RateKind::log_power: {
        const double L = std::max(1.0, x.log_value);
        return finish(std::pow(L, p[0]), p[0] * std::log(L));
    }
    case RateKind::exp: {
        const double y = p[0] * pow_arg(x, p[1]);
        return finish(std::exp(y), y);
    }
    case RateKind::double_exp: {
        const double y = p[0] * pow_arg(x, p[1]);
        const double lv = std::exp(y);
        return finish(std::exp(lv), lv);
    }
    case RateKind::product: {
        double v = 1.0, lv = 0.0;
        for (const auto& c : r.children) {
            LogEval e = eval_at(c, x);
            v *= e.value;
            lv += e.log_value;
        }
        return finish(v, lv);
    }
    case RateKind::max: {
        LogEval best = eval_at(r.children[0], x);
        for (std::size_t i = 1; i < r.children.size(); ++i) {
            LogEval e = eval_at(r.children[i], x);
            bool bigger = (std::isfinite(e.value) && std::isfinite(best.value)) ? e.value > best.value
                                                                                  : e.log_value > best.log_value;
            if (bigger) best = e;
        }
        return best;
    }
    case RateKind::max_with_1: {
        LogEval e = eval_at(r.children[0], x);
        if (e.log_value <= 0.0) return {1.0, 0.0};
        return e;
    }
    case RateKind::compose: {
        const double scale = p[0], shift = p[1];
        LogEval in = eval_at(r.children[1], x);
        LogEval arg;
        if (std::isfinite(in.value)) {
            double v = std::max(0.0, scale * in.value + shift);
            arg = {v, std::log(v)};
            if (shift == 0.0) arg.log_value = std::log(scale) + in.log_value;
        } else {
            arg = {kInf, std::log(scale) + in.log_value};
        }
        return eval_at(r.children[0], arg);
    }
    case RateKind::running_sup: return eval_running_sup(r.children[0], x);
    case RateKind::piecewise_linear: {
        const double s = x.value;
        const std::size_t n = p.size() / 2;
        double v;
        if (s <= p[0]) {
            v = p[1];
        } else {
            std::size_t i = 1;
            while (i < n - 1 && s > p[2 * i]) ++i;
            const double x0 = p[2 * i - 2], y0 = p[2 * i - 1], x1 = p[2 * i], y1 = p[2 * i + 1];
            v = y0 + (y1 - y0) * (s - x0) / (x1 - x0);
        }
        return {v, std::log(v)};
    }
    }
    throw validation_error("bad rate node");
}

}  // namespace detail

inline LogEval eval(const RateSpec& r, double s)
{
    require(s >= 0.0, "eval: negative argument");
    return detail::eval_at(r, LogEval::of(s));
}

inline double value(const RateSpec& r, double s) { return eval(r, s).value; }
inline double log_value(const RateSpec& r, double s) { return eval(r, s).log_value; }

// evaluation at s = e^{ls}; ls may exceed the double range of s itself
inline LogEval eval_log_arg(const RateSpec& r, double ls) { return detail::eval_at(r, detail::arg_from_log(ls)); }

// ---- transforms -----------------------------------------------------------

// s^m K(s), or s^m log(e v s) K(s)
inline RateSpec k_m_transform(const RateSpec& K, int m, bool with_log)
{
    require(m >= 1, "k_m_transform: m must be positive");
    std::vector<RateSpec> f{rate::power(m), K};
    if (with_log) f.insert(f.begin() + 1, rate::log_power(1.0));
    return rate::product(std::move(f));
}

// M(s) * log(e v K(s)); log(e v .) reads K's log-value, so double exponentials are fine
inline RateSpec m_sub_k(const RateSpec& M, const RateSpec& K)
{
    return rate::product({M, rate::compose(rate::log_power(1.0), K)});
}

// M(s) * log(e v s M(s))
inline RateSpec m_log(const RateSpec& M) { return m_sub_k(M, rate::product({rate::identity(), M})); }

// ---- right inverse --------------------------------------------------------

struct InverseResult {
    double s = 0.0;
    bool below_range = false;  // F(0) > t, no admissible s
};

struct unbounded_search : numeric_error {
    using numeric_error::numeric_error;
};

namespace detail {

inline bool at_most(const RateSpec& F, double s, double t)
{
    LogEval e = eval(F, s);
    if (std::isfinite(e.value) && e.value < 1e300 && t < 1e300) return e.value <= t;
    return e.log_value <= std::log(t);
}

}  // namespace detail

// sup{s >= 0 : F(s) <= t}. After bracketing by doubling, the search bisects the
// ordered bit patterns of doubles, so it ends on adjacent doubles (at most 64
// steps) and returns flat-region endpoints exactly; rel_tol is always met.
inline InverseResult right_inverse(const RateSpec& F, double t, double rel_tol = 1e-9)
{
    require(t >= 0.0 && !std::isnan(t), "right_inverse: t must be nonnegative");
    require(rel_tol > 0.0 && rel_tol <= 1e-3, "right_inverse: rel_tol must lie in (0, 1e-3]");
    if (!detail::at_most(F, 0.0, t)) return {0.0, true};
    double lo = 0.0, hi = 1.0;
    int doublings = 0;
    while (detail::at_most(F, hi, t)) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 1000 || !std::isfinite(hi))
            throw unbounded_search("right_inverse: bracket did not close within 1000 doublings");
    }
    auto blo = std::bit_cast<std::uint64_t>(lo), bhi = std::bit_cast<std::uint64_t>(hi);
    while (bhi - blo > 1) {
        std::uint64_t bm = blo + (bhi - blo) / 2;
        if (detail::at_most(F, std::bit_cast<double>(bm), t))
            blo = bm;
        else
            bhi = bm;
    }
    return {std::bit_cast<double>(blo), false};
}

inline double inverse(const RateSpec& F, double t, double rel_tol = 1e-9) { return right_inverse(F, t, rel_tol).s; }

// ln of sup{s : F(s) <= t} for inverses beyond double range; bisection in ln s.
// F must be non-decreasing and satisfy F(1) <= t.
inline double right_inverse_log(const RateSpec& F, double t, double abs_tol = 1e-12)
{
    require(t > 0 && std::isfinite(t), "right_inverse_log: t must be positive");
    const double lt = std::log(t);
    auto ok = [&](double u) { return eval_log_arg(F, u).log_value <= lt; };
    require(ok(0.0), "right_inverse_log: F(1) exceeds t");
    double lo = 0.0, hi = 1.0;
    int doublings = 0;
    while (ok(hi)) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 60) throw unbounded_search("right_inverse_log: bracket did not close");
    }
    while (hi - lo > abs_tol * std::max(1.0, hi)) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

// ---- positive increase ----------------------------------------------------

struct PositiveIncreaseWitness {
    double a = 0.0;
    double C_a = 1.0;
    double s_a = 0.0;
};

namespace detail {

// C_a on the grid: max over s <= R of exp(g(s) - g(R)), g = ln K - a ln s
inline double pi_constant(const std::vector<double>& ls, const std::vector<double>& lk, double a)
{
    double run = -kInf, worst = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        double g = lk[i] - a * ls[i];
        run = std::max(run, g);
        worst = std::max(worst, run - g);
    }
    return std::exp(worst);
}

}  // namespace detail

// Largest index a (resolution 0.01) with s^-a K(s) <= C_a R^-a K(R) on all grid
// pairs, s_a pinned to the first grid point and C_a allowed only roundoff slack
// above 1 (c_max). The asymptotic property is thereby read off as the smallest
// log-log secant slope of K across the grid.
inline PositiveIncreaseWitness positive_increase_estimate(const RateSpec& K, const std::vector<double>& grid,
                                                          double c_max = 1.0 + 1e-9)
{
    require(grid.size() >= 16, "positive_increase_estimate: grid needs at least 16 points");
    require(grid.front() > 0 && grid.back() / grid.front() >= 1e4 * (1 - 1e-12),
            "positive_increase_estimate: grid must be positive and span 4 decades");
    std::vector<double> ls, lk;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require(i == 0 || grid[i] > grid[i - 1], "positive_increase_estimate: grid must increase");
        ls.push_back(std::log(grid[i]));
        lk.push_back(log_value(K, grid[i]));
    }
    // C_a is non-decreasing in a; bisect over hundredths
    long lo = 0, hi = 1;
    while (detail::pi_constant(ls, lk, hi * 0.01) <= c_max) {
        lo = hi;
        hi *= 2;
        if (hi > (1L << 30)) break;
    }
    while (hi - lo > 1) {
        long mid = (lo + hi) / 2;
        (detail::pi_constant(ls, lk, mid * 0.01) <= c_max ? lo : hi) = mid;
    }
    PositiveIncreaseWitness w;
    w.a = lo * 0.01;
    w.C_a = std::max(1.0, detail::pi_constant(ls, lk, w.a));
    w.s_a = grid.front();
    return w;
}

// ---- iterated logarithms --------------------------------------------------

// L_j(s) = log o ... o log (1 + j + s), j times
inline double iterated_log(int j, double s)
{
    require(j >= 1 && s >= 0, "iterated_log: need j >= 1, s >= 0");
    double x = 1.0 + j + s;
    for (int i = 0; i < j; ++i) {
        if (!(x > 0)) throw std::domain_error("iterated_log: intermediate argument not positive");
        x = std::log(x);
    }
    return x;
}

// L_1 ... L_{N-1} * L_N^{1+eps}
inline double l_tilde(int N, double eps, double s)
{
    require(N >= 1 && eps > 0, "l_tilde: need N >= 1, eps > 0");
    double r = 1.0;
    for (int j = 1; j < N; ++j) r *= iterated_log(j, s);
    return r * std::pow(iterated_log(N, s), 1.0 + eps);
}

inline double c_alpha_beta(double alpha, double beta)
{
    require(alpha > 0, "c_alpha_beta: alpha must be positive");
    require(beta > 0.5, "c_alpha_beta: beta must exceed 1/2");
    double a = 0.5 + std::sqrt(0.25 + 1.0 / alpha);
    double b = std::isinf(beta) ? 1.0 : 2.0 * beta / (2.0 * beta - 1.0);
    return std::max(a, b);
}

// ---- hypothesis checks ----------------------------------------------------

struct HypothesisProfile {
    double eps = 0.5;
    double C_eps = 1.0;
    double r1 = 1.0;
    double C_hat = 1.0;
    int m = 1;
    int n = 1;
    double r = 1.0;
};

inline void validate(const HypothesisProfile& h)
{
    require(h.eps > 0 && h.eps < 1, "profile: eps must lie in (0,1)");
    require(h.C_eps > 0 && h.r1 > 0 && h.C_hat > 0 && h.r > 0, "profile: constants and radii must be positive");
    require(h.m >= 1 && h.n >= 1, "profile: m, n must be positive");
}

struct CheckEntry {
    std::string name;
    bool passed = false;
    double worst_margin = 0.0;  // log-space; negative means violated
    double worst_at = 0.0;
    std::string note;
};

struct HypothesisReport {
    std::vector<CheckEntry> checks;
    std::vector<std::pair<double, double>> fitted_N;  // (s', N(s'))
    PositiveIncreaseWitness h2_witness;

    bool all_passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const CheckEntry& c) { return c.passed; });
    }
    const CheckEntry& get(const std::string& name) const
    {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw std::out_of_range("no check named " + name);
    }
};

// N(s') = max over grid s of M(s + s') / M(s)
inline double fit_N(const RateSpec& M, const std::vector<double>& grid, double shift)
{
    double best = -kInf;
    for (double s : grid) best = std::max(best, log_value(M, s + shift) - log_value(M, s));
    return std::exp(best);
}

// relaxed_N is the depth of the iterated-log relaxation in check (ii).
inline HypothesisReport check_hypotheses(const RateSpec& M, const RateSpec& K, const HypothesisProfile& prof,
                                         const std::vector<double>& grid, int relaxed_N = 2)
{
    require(prof.eps >= 0 && prof.eps < 1, "profile: eps must lie in [0,1)");
    require(grid.size() >= 16, "check_hypotheses: grid needs at least 16 points");
    HypothesisReport rep;
    const double lC = std::log(prof.C_eps);

    // (i) ln K(s) <= ln C_eps + exp((s M(s))^{1-eps}) for s >= r1
    {
        CheckEntry e{"K_vs_M", true, kInf, 0.0, ""};
        for (double s : grid) {
            if (s < prof.r1) continue;
            double x = s * value(M, s);
            double margin = lC + std::exp(std::pow(x, 1.0 - prof.eps)) - log_value(K, s);
            if (margin < e.worst_margin) e.worst_margin = margin, e.worst_at = s;
        }
        e.passed = e.worst_margin >= 0;
        if (prof.eps == 0.0) {
            e.passed = false;
            e.note = "eps = 0 is not admissible for the theorem; flagged as failing";
        }
        rep.checks.push_back(e);
    }
    // (ii) ln K(s) <= ln C_eps + exp(x / L~_{N,eps}(x)), x = s M(s)
    {
        CheckEntry e{"K_vs_M_relaxed", true, kInf, 0.0, "N=" + std::to_string(relaxed_N)};
        const double eps = prof.eps > 0 ? prof.eps : 1e-3;
        for (double s : grid) {
            if (s < prof.r1) continue;
            double x = s * value(M, s);
            double lt;
            try {
                lt = l_tilde(relaxed_N, eps, x);
            } catch (const std::domain_error&) {
                continue;
            }
            if (!(lt > 0)) continue;
            double margin = lC + std::exp(x / lt) - log_value(K, s);
            if (margin < e.worst_margin) e.worst_margin = margin, e.worst_at = s;
        }
        e.passed = e.worst_margin >= 0;
        rep.checks.push_back(e);
    }
    // (iii) (H1): M(s+s')/M(s) must not grow toward the end of the grid
    {
        CheckEntry e{"H1", true, kInf, 0.0, ""};
        const std::size_t cut = grid.size() * 3 / 4;
        std::vector<double> head(grid.begin(), grid.begin() + cut), tail(grid.begin() + cut, grid.end());
        for (double sh : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            rep.fitted_N.emplace_back(sh, fit_N(M, grid, sh));
            if (sh == 0.0) continue;
            double margin = std::log(fit_N(M, head, sh)) - std::log(fit_N(M, tail, sh)) + 1e-9;
            if (margin < e.worst_margin) e.worst_margin = margin, e.worst_at = sh;
        }
        e.passed = e.worst_margin >= 0;
        rep.checks.push_back(e);
        CheckEntry e1{"H1_prime", true, 0.0, 1e-6, ""};
        double n0 = fit_N(M, grid, 1e-6);
        e1.worst_margin = 1e-3 - std::log(n0);
        e1.passed = e.passed && e1.worst_margin >= 0;
        e1.note = "N(0+) = " + std::to_string(n0);
        rep.checks.push_back(e1);
    }
    // (iv) (H2): M^{-1/2} K has positive increase
    {
        RateSpec g = rate::product({rate::compose(rate::power(-0.5), M), K});
        CheckEntry e{"H2", false, 0.0, grid.front(), ""};
        try {
            rep.h2_witness = positive_increase_estimate(g, grid);
            e.passed = rep.h2_witness.a > 0;
            e.worst_margin = rep.h2_witness.a;
            e.note = "index a=" + std::to_string(rep.h2_witness.a);
        } catch (const validation_error& err) {
            e.note = std::string("not evaluated: ") + err.what();
        }
        rep.checks.push_back(e);
    }
    return rep;
}

inline std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
    if (n > 1) g.back() = hi;
    return g;
}

}  // namespace tauber
