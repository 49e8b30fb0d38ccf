#pragma once

// Roots-of-unity measures mu = tau R^{-m} sum_j q^j delta_{w + q^j/A}, their
// Laplace transform (a function of t) and Cauchy transform (a function of z),
// the bound checks for a single measure, and the counterexample f = sum L mu_n.
//
// Positions use long double: R_n grows like exp(t_n) and leaves double range
// after a handful of terms. Magnitudes are carried as LogPolar throughout.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rate_algebra.hpp"

namespace tauber {

using lcplx = std::complex<long double>;

inline constexpr long double kTwoPiL = 6.283185307179586476925286766559L;

inline double l_of(double s) { return 2.0 * std::log(std::max(std::exp(1.0), s)); }

struct LemmaParams {
    double delta = 1.0;
    int k = 1;
    int m = 1;
    long double R = 1.0L;
    double log_R = 0.0;
    double A = 2.0;
    double log_tau = 0.0;
    double l_k = 2.0;
    bool delta_warning = false;
    std::string delta_note;

    lcplx w() const { return {static_cast<long double>(-delta), R}; }
    cplx q() const { return std::polar(1.0, 2.0 * kPi / (k + 1)); }
    double t_peak() const { return k / delta; }
    double window_lo() const { return k / (2.0 * delta); }
    double window_hi() const { return 2.0 * k / delta; }
};

inline LemmaParams make_lemma_params(double delta, int k, int m, double log_R)
{
    require(delta > 0 && std::isfinite(delta), "lemma: delta must be positive");
    require(k >= 1 && m >= 1, "lemma: k and m must be positive");
    LemmaParams p;
    p.delta = delta, p.k = k, p.m = m;
    p.log_R = log_R;
    p.R = std::exp(static_cast<long double>(log_R));
    p.l_k = l_of(k);
    p.A = k * p.l_k / delta;
    p.log_tau = -0.5 * std::log(double(k)) + k * std::log(delta * p.A);
    return p;
}

struct Atom {
    LogPolar weight;
    lcplx loc;
};

struct AtomicMeasure {
    std::vector<Atom> atoms;
};

inline AtomicMeasure atoms_of(const LemmaParams& p)
{
    AtomicMeasure mu;
    const lcplx w = p.w();
    for (int j = 0; j <= p.k; ++j) {
        long double ph = kTwoPiL * j / (p.k + 1);
        mu.atoms.push_back({{p.log_tau - p.m * p.log_R, static_cast<double>(ph)}, w + std::polar(1.0L / p.A, ph)});
    }
    return mu;
}

// ---- delta selection ------------------------------------------------------

struct DeltaChoice {
    double delta = 1.0;
    double delta0 = 0.0;
    bool M_bounded = false;
    std::string note;
};

inline bool rate_bounded(const RateSpec& M) { return log_value(M, 1e12) - log_value(M, 1e6) <= 1e-9; }

// smallest x in (0,1) with -ln(1-x)/x >= g (the ratio increases from 1 at x = 0)
inline double log_ratio_root(double g)
{
    double lo = 0, hi = 1;
    for (int i = 0; i < 200; ++i) {
        double x = 0.5 * (lo + hi);
        (-std::log1p(-x) / x < g ? lo : hi) = x;
    }
    return lo;
}

// delta0 = 4 sup_tail ln s / M_K~(s); bounded M needs delta above it, unbounded M below.
// With gamma > 1 and bounded M, delta is also raised until 1 - x >= e^{-gamma1 x},
// gamma1 = (1 + gamma)/2, holds at x = 1/(delta M(infinity)); the band bound needs it.
inline DeltaChoice select_delta(const RateSpec& M, const RateSpec& K_tilde, double gamma = 0)
{
    RateSpec F = m_sub_k(M, K_tilde);
    DeltaChoice d;
    for (double s : log_grid(1e3, 1e12, 64)) d.delta0 = std::max(d.delta0, 4.0 * std::log(s) / value(F, s));
    d.M_bounded = rate_bounded(M);
    if (d.M_bounded) {
        d.delta = 2.0 * std::max(d.delta0, 1.0);
        d.note = "M bounded: delta = 2 max(delta0, 1)";
        if (gamma > 1) {
            double dg = 1.0 / (log_ratio_root(0.5 * (1 + gamma)) * value(M, 1e12));
            if (dg > d.delta) {
                d.delta = dg;
                d.note += ", raised to " + std::to_string(dg) + " for gamma1 = (1+gamma)/2";
            }
        }
    } else {
        d.delta = std::min(1.0, std::max(d.delta0, 1e-3));
        d.note = "M unbounded: delta = min(1, delta0), floored at 1e-3";
    }
    return d;
}

// R = M_K~^{-1}(k/delta), weights in log-polar form
inline std::pair<AtomicMeasure, LemmaParams> build_measure(const RateSpec& M, const RateSpec& K_tilde, double delta, int k,
                                                           int m = 1)
{
    require(delta > 0 && k >= 1 && m >= 1, "build_measure: need delta > 0, k >= 1, m >= 1");
    RateSpec F = m_sub_k(M, K_tilde);
    const double t = k / delta;
    double log_R;
    if (value(F, 1.0) <= t)
        log_R = right_inverse_log(F, t);
    else
        log_R = std::log(right_inverse(F, t).s);
    LemmaParams p = make_lemma_params(delta, k, m, log_R);
    DeltaChoice dc = select_delta(M, K_tilde);
    if (dc.M_bounded && delta <= dc.delta0) {
        p.delta_warning = true;
        p.delta_note = "delta <= delta0 = " + std::to_string(dc.delta0) + " with bounded M";
    }
    return {atoms_of(p), p};
}

// ---- transforms -----------------------------------------------------------

inline LogPolar logpolar_sum(const std::vector<LogPolar>& xs)
{
    double top = -kInf;
    for (const auto& x : xs) top = std::max(top, x.logmod);
    if (top == -kInf) return {};
    int live = 0;
    for (const auto& x : xs) live += x.logmod > -kInf;
    if (live == 1)
        for (const auto& x : xs)
            if (x.logmod > -kInf) return x;
    cplx s = 0;
    for (const auto& x : xs)
        if (x.logmod > -kInf) s += std::polar(std::exp(x.logmod - top), x.phase);
    if (s == cplx(0)) return {};
    return {top + std::log(std::abs(s)), std::arg(s)};
}

// L mu(t) for order 0, its t-derivative for order 1, via the factored series
inline LogPolar laplace_log(const LemmaParams& p, double t, int order = 0)
{
    require(t >= 0 && std::isfinite(t), "laplace: t must be nonnegative");
    require(order == 0 || order == 1, "laplace: order must be 0 or 1");
    const int k = p.k;
    const double base = p.log_tau - p.m * p.log_R;
    if (t == 0) {
        // order 1 at t = 0 is (tau/R^m)/A * sum q^{2j}, nonzero only when q = -1
        if (order == 1 && k == 1) return {base + std::log(2.0) - std::log(p.A), 0.0};
        return {};
    }
    const double lr = std::log(t / p.A), lgk = std::lgamma(k + 1.0);
    double logS1 = -kInf, logS2 = -kInf, prev = -kInf;
    for (int n = 1; n <= 10000; ++n) {
        const double N = double(n) * (k + 1) - 1;
        const double term = lgk - std::lgamma(N + 1) + (n - 1.0) * (k + 1) * lr;
        logS1 = log_add(logS1, term);
        if (order == 1) logS2 = log_add(logS2, term + std::log(N));
        if (term < prev && term < logS1 - 46.1) break;
        prev = term;
    }
    const double lpref = base - p.delta * t + std::log(k + 1.0) + k * lr - lgk;
    const double phase = static_cast<double>(std::fmod(static_cast<long double>(t) * p.R, kTwoPiL));
    if (order == 0) return {lpref + logS1, phase};
    // w S1 + S2/t = S1 ((rho - delta) + iR), rho = S2/(t S1)
    const long double rho = std::exp(static_cast<long double>(logS2 - logS1 - std::log(t)));
    const long double re = rho - p.delta;
    return {lpref + logS1 + static_cast<double>(std::log(std::hypot(re, p.R))), phase + static_cast<double>(std::atan2(p.R, re))};
}

inline cplx laplace_of_measure(const LemmaParams& p, double t, int order = 0) { return laplace_log(p, t, order).value(); }

// z = x + i(anchor + eta); anchoring keeps z - w exact near huge R
struct ZPoint {
    long double anchor = 0;
    double x = 0;
    double eta = 0;

    long double im() const { return anchor + eta; }
    double log_abs() const { return static_cast<double>(std::log(std::hypot(static_cast<long double>(x), im()))); }
    static ZPoint of(cplx z) { return {0, z.real(), z.imag()}; }
};

struct pole_error : numeric_error {
    using numeric_error::numeric_error;
};

// (tau/R^m)(k+1)A / ((A(z-w))^{k+1} - 1)
inline LogPolar cauchy_log(const LemmaParams& p, const ZPoint& z)
{
    const lcplx zw(static_cast<long double>(z.x) + p.delta, (z.anchor - p.R) + z.eta);
    const lcplx u = static_cast<long double>(p.A) * zw;
    const long double lu = std::log(std::abs(u));
    const long double re = (p.k + 1) * lu, im = (p.k + 1) * std::arg(u);
    LogPolar den;
    if (re > 40) {
        // u^{k+1} - 1 = u^{k+1} (1 - u^{-(k+1)})
        lcplx corr = std::log(1.0L - std::exp(lcplx(-re, -im)));
        den = {static_cast<double>(re + corr.real()), static_cast<double>(im + corr.imag())};
    } else if (re < -40) {
        lcplx corr = std::log(1.0L - std::exp(lcplx(re, im)));
        den = {static_cast<double>(corr.real()), static_cast<double>(kPi + corr.imag())};
    } else {
        if (std::abs(lu) < 1.0L)
            for (int j = 0; j <= p.k; ++j)
                if (std::abs(u - std::polar(1.0L, kTwoPiL * j / (p.k + 1))) < 1e-12L * p.A)
                    throw pole_error("cauchy: z is within 1e-12 of an atom");
        // expm1 of a complex argument without cancellation near |u|^{k+1} = 1
        const long double em = std::expm1(re), s = std::sin(im / 2);
        const lcplx d(em * std::cos(im) - 2 * s * s, std::exp(re) * std::sin(im));
        den = {static_cast<double>(std::log(std::abs(d))), static_cast<double>(std::arg(d))};
    }
    LogPolar num{p.log_tau - p.m * p.log_R + std::log((p.k + 1) * p.A), 0.0};
    return num / den;
}

inline cplx cauchy_of_measure(const LemmaParams& p, cplx z) { return cauchy_log(p, ZPoint::of(z)).value(); }

// ---- single-measure bounds ------------------------------------------------

struct LemmaBoundEntry {
    std::string display;
    bool passed = false;
    double constant = 0;      // measured C (upper displays) or c (lower displays)
    double outside = 0;       // largest value that must stay below eps (upper displays)
    double outside_at = 0;
    std::string note;
};

struct LemmaBoundReport {
    LemmaParams params;
    double eps = 0, gamma = 0;
    std::vector<LemmaBoundEntry> entries;

    bool all_passed() const
    {
        return std::all_of(entries.begin(), entries.end(), [](const LemmaBoundEntry& e) { return e.passed; });
    }
    const LemmaBoundEntry& get(const std::string& d) const
    {
        for (const auto& e : entries)
            if (e.display == d) return e;
        throw std::out_of_range("no display " + d);
    }
};

inline double log_M_at(const RateSpec& M, long double y)
{
    return eval_log_arg(M, static_cast<double>(std::log(std::max(y, 1e-300L)))).log_value;
}

// Omega_M points: band-relative rows around R plus a global sweep of Im z
inline std::vector<ZPoint> default_lemma_z_grid(const LemmaParams& p, const RateSpec& M, int n_band = 241, int n_global = 120)
{
    std::vector<ZPoint> g;
    auto add_row = [&](long double anchor, double eta) {
        double inv_m = std::exp(-log_M_at(M, anchor + eta));
        for (double f : {0.0, 0.5, 1.0 - 1e-6}) g.push_back({anchor, -f * inv_m, eta});
    };
    for (int i = 0; i < n_band; ++i) add_row(p.R, -6 * p.delta + 12 * p.delta * i / (n_band - 1));
    const double top = static_cast<double>(std::min(10.0L * p.R, 1e300L));
    for (double y : log_grid(1e-3, top, n_global)) add_row(0, y);
    return g;
}

inline std::vector<double> default_lemma_t_grid(const LemmaParams& p, int n_lin = 240, int n_tail = 40)
{
    std::vector<double> g;
    const double hi = 4.0 * p.k / p.delta;
    for (int i = 1; i <= n_lin; ++i) g.push_back(hi * i / n_lin);
    for (double t : log_grid(hi, 25 * hi, n_tail + 1)) if (t > hi) g.push_back(t);
    return g;
}

// gamma: exponent on K~(R) in the band bound
inline LemmaBoundReport verify_lemma_bounds(const LemmaParams& p, const RateSpec& M, const RateSpec& K_tilde, double eps,
                                            const std::vector<ZPoint>& z_grid, const std::vector<double>& t_grid,
                                            double gamma = 1.25)
{
    require(eps > 0, "lemma bounds: eps must be positive");
    require(gamma > 1, "lemma bounds: gamma must exceed 1");
    LemmaBoundReport rep;
    rep.params = p, rep.eps = eps, rep.gamma = gamma;
    const double le = std::log(eps), lR = p.m * p.log_R, d = p.delta;
    const double lK = eval_log_arg(K_tilde, p.log_R).log_value;
    const double lscale = -0.5 * std::log(d) + 0.5 * std::log(p.k / d);  // delta^{-1/2} (k/delta)^{1/2}
    const RateSpec F = m_sub_k(M, K_tilde);

    {
        LemmaBoundEntry e{"4.1", true, 0.0, 0.0, 0.0, ""};
        double in = -kInf, out = -kInf;
        for (const auto& z : z_grid) {
            double lc = cauchy_log(p, z).logmod;
            if (std::abs(z.im() - p.R) <= 2 * d)
                in = std::max(in, lc + lR - lscale - gamma * lK);
            else if (lc > out)
                out = lc, e.outside_at = static_cast<double>(z.im());
        }
        e.constant = std::exp(in), e.outside = std::exp(out);
        e.passed = std::isfinite(in) && out <= le;
        rep.entries.push_back(e);
    }
    {
        LemmaBoundEntry e{"4.2", true, 0.0, 0.0, 0.0, "z = iR - 1/M(R)"};
        ZPoint z{p.R, -std::exp(-log_M_at(M, p.R)), 0.0};
        double lc = cauchy_log(p, z).logmod + lR - lscale - lK;
        e.constant = std::exp(lc);
        e.passed = std::isfinite(lc) && e.constant > 0;
        rep.entries.push_back(e);
    }
    const double wlo = p.window_lo(), whi = p.window_hi();
    {
        LemmaBoundEntry e3{"4.3", true, 0.0, 0.0, 0.0, ""}, e4{"4.4", true, 0.0, 0.0, 0.0, ""};
        double in3 = -kInf, out3 = -kInf, in4 = -kInf, out4 = -kInf;
        for (double t : t_grid) {
            double l1 = laplace_log(p, t, 1).logmod, l0 = laplace_log(p, t, 0).logmod;
            if (t >= wlo && t <= whi) {
                in3 = std::max(in3, l1);
                in4 = std::max(in4, l0 + lR);
            } else {
                if (l1 > out3) out3 = l1, e3.outside_at = t;
                double tail = std::max(p.log_R, value(F, 1.0) <= t ? right_inverse_log(F, t) : std::log(inverse(F, t)));
                double v = l0 + p.m * tail;
                if (v > out4) out4 = v, e4.outside_at = t;
            }
        }
        e3.constant = std::exp(in3), e3.outside = std::exp(out3);
        e3.passed = std::isfinite(in3) && out3 <= le;
        e4.constant = std::exp(in4), e4.outside = std::exp(out4);
        e4.passed = std::isfinite(in4) && out4 <= le;
        e4.note = "outside value weighted by max(R, M_K~^{-1}(t))^m";
        rep.entries.push_back(e3);
        rep.entries.push_back(e4);
    }
    {
        LemmaBoundEntry e{"4.5", true, 0.0, 0.0, 0.0, "t = k/delta"};
        e.constant = std::exp(laplace_log(p, p.t_peak(), 0).logmod + lR);
        e.passed = e.constant > 0 && std::isfinite(e.constant);
        rep.entries.push_back(e);
    }
    return rep;
}

inline LemmaBoundReport verify_lemma_bounds(const LemmaParams& p, const RateSpec& M, const RateSpec& K_tilde, double eps,
                                            double gamma = 1.25)
{
    return verify_lemma_bounds(p, M, K_tilde, eps, default_lemma_z_grid(p, M), default_lemma_t_grid(p), gamma);
}

// ---- counterexample assembly ----------------------------------------------

// s -> sup_{s' <= s} (M(s')^{-1/2} K(s'))^{1/gamma}
inline RateSpec k_tilde_doubleprime(const RateSpec& M, const RateSpec& K, double gamma)
{
    require(gamma > 1, "k_tilde_doubleprime: gamma must exceed 1");
    RateSpec g = rate::product({rate::compose(rate::power(-0.5), M), K});
    return rate::running_sup(rate::compose(rate::power(1.0 / gamma), g));
}

// max over the grid of ln(K~''(s) / integrand(s)); bounded when the integrand has positive increase
inline double k_tilde_doubleprime_excess(const RateSpec& M, const RateSpec& K, double gamma, const std::vector<double>& grid)
{
    RateSpec kk = k_tilde_doubleprime(M, K, gamma);
    RateSpec g = rate::compose(rate::power(1.0 / gamma), rate::product({rate::compose(rate::power(-0.5), M), K}));
    double worst = 0;
    for (double s : grid) worst = std::max(worst, log_value(kk, s) - log_value(g, s));
    return worst;
}

struct AlphaBetaFit {
    double alpha = 0, beta = 0, c = 0;
};

// (alpha, beta) with liminf s^{-alpha} M^{-beta} K = infinity read off a tail grid,
// chosen to minimise c_{alpha,beta}; alpha keeps a 1% margin below the fitted index
inline AlphaBetaFit fit_alpha_beta(const RateSpec& M, const RateSpec& K)
{
    const auto tail = log_grid(1e4, 1e12, 48);
    auto alpha_for = [&](double beta) {
        double a = kInf;
        for (double s : tail) {
            double lm = std::isinf(beta) ? 0.0 : beta * log_value(M, s);
            a = std::min(a, (log_value(K, s) - lm) / std::log(s));
        }
        return 0.99 * a;
    };
    std::vector<double> betas;
    if (rate_bounded(M)) betas.push_back(kInf);
    else betas = {0.55, 0.6, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0, 50.0};
    AlphaBetaFit best{0, 0, kInf};
    for (double b : betas) {
        double a = alpha_for(b);
        if (!(a > 0)) continue;
        double c = c_alpha_beta(a, b);
        if (c < best.c) best = {a, b, c};
    }
    require(std::isfinite(best.c), "assemble: no (alpha, beta) satisfies the liminf condition on the tail grid");
    return best;
}

struct threshold_error : validation_error {
    double c_ab;
    threshold_error(const std::string& msg, double c) : validation_error(msg), c_ab(c) {}
};

struct CounterexampleFunction {
    RateSpec M, K, K_dd, K_used, F;  // K_used = K~'' shifted by 2 delta; F = M_{K_used}
    double delta = 1, gamma = 1, c1 = 1, eps0 = 0.5;
    AlphaBetaFit fit;
    DeltaChoice delta_choice;
    std::vector<LemmaParams> terms;
    std::vector<double> eps;  // eps_n = 2^{-n} eps0
    std::vector<double> t_n;

    LogPolar f_log(double t) const
    {
        std::vector<LogPolar> v;
        for (const auto& p : terms) v.push_back(laplace_log(p, t, 0));
        return logpolar_sum(v);
    }
    cplx f(double t) const { return f_log(t).value(); }
    LogPolar fhat_log(const ZPoint& z) const
    {
        std::vector<LogPolar> v;
        for (const auto& p : terms) v.push_back(cauchy_log(p, z));
        return logpolar_sum(v);
    }
    cplx fhat(cplx z) const { return fhat_log(ZPoint::of(z)).value(); }
};

struct AssembleOptions {
    bool shift = true;       // apply the lemma to K~''(0 v (s - 2 delta))
    int k_max = 1 << 20;
    bool check_hypotheses = true;
};

inline bool lemma_eps_parts_pass(const LemmaBoundReport& r)
{
    return r.get("4.1").passed && r.get("4.3").passed && r.get("4.4").passed;
}

inline CounterexampleFunction assemble_f(const RateSpec& M, const RateSpec& K, double c1, double eps0, int N_terms,
                                         const AssembleOptions& opt = {})
{
    require(eps0 > 0 && eps0 < 1, "assemble: eps0 must lie in (0,1)");
    require(N_terms >= 1, "assemble: N_terms must be positive");
    validate(M), validate(K);
    if (opt.check_hypotheses) {
        HypothesisReport h = check_hypotheses(M, K, HypothesisProfile{}, log_grid(1.0, 1e8, 64));
        require(h.get("H1_prime").passed, "assemble: (H1') fails for M");
        require(h.get("H2").passed, "assemble: (H2) fails: M^{-1/2} K lacks positive increase");
    }
    CounterexampleFunction f;
    f.M = M, f.K = K, f.c1 = c1, f.eps0 = eps0;
    f.fit = fit_alpha_beta(M, K);
    if (!(c1 > f.fit.c))
        throw threshold_error("c1 = " + std::to_string(c1) + " does not exceed c_{alpha,beta} = " + std::to_string(f.fit.c) +
                                  " (alpha = " + std::to_string(f.fit.alpha) + ", beta = " + std::to_string(f.fit.beta) + ")",
                              f.fit.c);
    f.gamma = 0.5 * (1 + c1 / f.fit.c);
    f.K_dd = k_tilde_doubleprime(M, K, f.gamma);
    f.delta_choice = select_delta(M, f.K_dd, f.gamma);
    f.delta = f.delta_choice.delta;
    f.K_used = opt.shift ? rate::compose(f.K_dd, rate::identity(), 1.0, -2 * f.delta) : f.K_dd;
    f.F = m_sub_k(M, f.K_used);

    const double d = f.delta;
    auto params_for = [&](int k) { return build_measure(M, f.K_used, d, k).second; };
    int k = 1;
    for (int n = 1; n <= N_terms; ++n) {
        const double en = std::ldexp(eps0, -n);
        LemmaParams p = params_for(k);
        while (!lemma_eps_parts_pass(verify_lemma_bounds(p, M, f.K_used, en, f.gamma))) {
            require(k < opt.k_max, "assemble: no admissible k below k_max");
            p = params_for(++k);
        }
        if (!f.terms.empty()) {
            const LemmaParams& prev = f.terms.back();
            auto disjoint = [&](const LemmaParams& q) {
                return q.window_lo() > prev.window_hi() && q.R - 2 * d > prev.R + 2 * d;
            };
            while (!disjoint(p)) {
                require(k < opt.k_max, "assemble: disjointness needs k beyond k_max");
                k *= 2;
                p = params_for(k);
            }
        }
        f.terms.push_back(p);
        f.eps.push_back(en);
        f.t_n.push_back(p.t_peak());
        ++k;
    }
    return f;
}

// ---- optimality check -----------------------------------------------------

struct OptimalityRow {
    int n = 0, k = 0;
    double t = 0, log_R = 0;
    double log_abs_f = 0;
    double value = 0;          // M_{K1}^{-1}(c1 t_n) |f(t_n)|
    double chain_lower = 0;    // same with |f| replaced by |L mu_n| - sum_{j != n} |L mu_j|
};

struct ProbeRow {
    int n = 0;
    double log_R = 0, log_abs_zf = 0, log_bound = 0, ratio = 0;
};

struct Probe {
    RateSpec M_tilde;
    double theta = 0;
};

struct OptimalityReport {
    double C_hat = 0;
    ZPoint C_hat_at;
    std::vector<OptimalityRow> rows;
    double c_min = 0, c_mean = 0, spread = 0;  // spread = max |value/mean - 1|
    std::vector<ProbeRow> probe_rows;
    double probe_c = 0;
    std::vector<CheckEntry> checks;

    bool check_passed(const std::string& name) const
    {
        for (const auto& c : checks)
            if (c.name == name) return c.passed;
        return false;
    }
};

inline std::vector<ZPoint> default_omega_grid(const CounterexampleFunction& f, int n_points = 10000)
{
    std::vector<ZPoint> g;
    const int N = static_cast<int>(f.terms.size());
    const int rows = n_points / 3;
    const int per_band = rows / 2 / N, n_global = rows - per_band * N;
    auto add_row = [&](long double anchor, double eta) {
        double inv_m = std::exp(-log_M_at(f.M, anchor + eta));
        for (double s : {0.0, 0.5, 1.0 - 1e-6}) g.push_back({anchor, -s * inv_m, eta});
    };
    for (const auto& p : f.terms)
        for (int i = 0; i < per_band; ++i) add_row(p.R, -3 * f.delta + 6 * f.delta * i / std::max(1, per_band - 1));
    const double top = static_cast<double>(std::min(4.0L * f.terms.back().R, 1e300L));
    for (double y : log_grid(1e-3, top, n_global)) add_row(0, y);
    return g;
}

inline OptimalityReport verify_optimality(const CounterexampleFunction& f, double c1, const std::vector<ZPoint>& z_grid,
                                          const std::optional<Probe>& probe = std::nullopt, double stable_tol = 0.3)
{
    OptimalityReport rep;
    // (i) sup |z fhat(z)| / K(|Im z|)
    double worst = -kInf;
    for (const auto& z : z_grid) {
        long double y = std::abs(z.im());
        double lk = y > 0 ? eval_log_arg(f.K, static_cast<double>(std::log(y))).log_value : log_value(f.K, 0.0);
        double v = z.log_abs() + f.fhat_log(z).logmod - lk;
        if (v > worst) worst = v, rep.C_hat_at = z;
    }
    rep.C_hat = std::exp(worst);
    rep.checks.push_back({"C_hat_finite", std::isfinite(worst), worst, static_cast<double>(rep.C_hat_at.im()),
                          "ln C_hat = " + std::to_string(worst)});

    // (ii) M_{K1}^{-1}(c1 t_n) |f(t_n)|
    const RateSpec K1 = k_m_transform(f.K, 1, false), FK1 = m_sub_k(f.M, K1);
    double log_sum = 0;
    std::vector<double> logs;
    for (std::size_t n = 0; n < f.terms.size(); ++n) {
        const double t = f.t_n[n];
        double linv = value(FK1, 1.0) <= c1 * t ? right_inverse_log(FK1, c1 * t) : std::log(inverse(FK1, c1 * t));
        OptimalityRow r;
        r.n = int(n) + 1, r.k = f.terms[n].k, r.t = t, r.log_R = f.terms[n].log_R;
        r.log_abs_f = f.f_log(t).logmod;
        double own = laplace_log(f.terms[n], t).logmod, cross = -kInf;
        for (std::size_t j = 0; j < f.terms.size(); ++j)
            if (j != n) cross = log_add(cross, laplace_log(f.terms[j], t).logmod);
        r.value = std::exp(linv + r.log_abs_f);
        r.chain_lower = cross < own ? std::exp(linv + log_sub(own, cross)) : 0.0;
        logs.push_back(std::log(r.value));
        log_sum += r.value;
        rep.rows.push_back(r);
    }
    rep.c_min = kInf;
    for (const auto& r : rep.rows) rep.c_min = std::min(rep.c_min, r.value);
    rep.c_mean = log_sum / rep.rows.size();
    for (const auto& r : rep.rows) rep.spread = std::max(rep.spread, std::abs(r.value / rep.c_mean - 1));
    rep.checks.push_back({"lower_bound_positive", rep.c_min > 0, rep.c_min, 0, "min over n"});
    rep.checks.push_back({"lower_bound_stable", rep.spread <= stable_tol, stable_tol - rep.spread, 0,
                          "max relative deviation from the mean across n"});

    // (iii) z_n = iR_n + theta / M~(R_n)
    if (probe) {
        double lo = kInf;
        for (std::size_t n = 0; n < f.terms.size(); ++n) {
            const LemmaParams& p = f.terms[n];
            double lMt = eval_log_arg(probe->M_tilde, p.log_R).log_value;
            double lM = eval_log_arg(f.M, p.log_R).log_value;
            ZPoint z{p.R, probe->theta * std::exp(-lMt), 0.0};
            ProbeRow pr;
            pr.n = int(n) + 1, pr.log_R = p.log_R;
            pr.log_abs_zf = z.log_abs() + f.fhat_log(z).logmod;
            double lmk1 = eval_log_arg(FK1, p.log_R).log_value, lk1 = eval_log_arg(K1, p.log_R).log_value;
            pr.log_bound = 0.5 * lmk1 + probe->theta * std::exp(lM - lMt) / c1 * lk1;
            pr.ratio = std::exp(pr.log_abs_zf - pr.log_bound);
            lo = std::min(lo, pr.ratio);
            rep.probe_rows.push_back(pr);
        }
        rep.probe_c = lo;
        rep.checks.push_back({"probe_lower_bound", lo > 0 && std::isfinite(lo), lo, probe->theta, "min |z_n fhat(z_n)| / bound"});
    }
    return rep;
}

inline OptimalityReport verify_optimality(const CounterexampleFunction& f, double c1,
                                          const std::optional<Probe>& probe = std::nullopt)
{
    return verify_optimality(f, c1, default_omega_grid(f), probe);
}

}  // namespace tauber
