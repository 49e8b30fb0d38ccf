#pragma once

// Fudge factor psi, the contour family around the imaginary axis, numerical
// reconstruction f(t) = I1 + I2 + I3, and the Taylor correction for a
// logarithmic singularity of the transform at 0.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "counterexample.hpp"
#include "rate_algebra.hpp"

namespace tauber {

struct singularity_error : numeric_error {
    using numeric_error::numeric_error;
};

struct refinement_failure : numeric_error {
    double worst_a, worst_b;
    refinement_failure(const std::string& msg, double a, double b) : numeric_error(msg), worst_a(a), worst_b(b) {}
};

// ---- fudge factor -----------------------------------------------------------

// psi(z) = c exp(-exp((p/(1+z^p))^k)), ln ln c = p^k; p = 2 for m = 1, else 4m+2
struct FudgeFactor {
    int k = 3;
    int m = 1;
    bool force_m_form = false;  // use 4m+2 even for m = 1

    int p() const { return (m == 1 && !force_m_form) ? 2 : 4 * m + 2; }
    double log_log_c() const { return std::pow(double(p()), k); }
};

namespace detail {

inline cplx ipow(cplx z, int n)
{
    cplx r = 1;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

// u = (p/(1+z^p))^k
inline cplx fudge_inner(const FudgeFactor& ff, cplx z)
{
    const cplx d = 1.0 + ipow(z, ff.p());
    if (std::abs(d) < 1e-14) throw singularity_error("fudge factor: z at a pole of the inner map");
    return ipow(double(ff.p()) / d, ff.k);
}

}  // namespace detail

// ln|psi| = e^a - e^{Re u} cos(Im u), a = p^k, formed as e^a (2 e^{b-a} sin^2(c/2) - expm1(b-a))
inline LogPolar fudge_factor(const FudgeFactor& ff, cplx z)
{
    require(ff.k >= 1 && ff.m >= 1, "fudge factor: k, m must be positive");
    const cplx u = detail::fudge_inner(ff, z);
    const double a = ff.log_log_c(), b = u.real(), c = u.imag();
    if (b - a > 700) {
        // the double exponential dominates; |psi| is 0 or overflows
        const double cc = std::cos(c);
        return {cc > 0 ? -kInf : (cc < 0 ? kInf : std::exp(a)), 0.0};
    }
    const double s = std::sin(c / 2);
    const double factor = 2 * std::exp(b - a) * s * s - std::expm1(b - a);
    double lm;
    if (factor == 0)
        lm = 0;
    else
        lm = (factor > 0 ? 1 : -1) * std::exp(a + std::log(std::abs(factor)));
    double ph = 0;
    if (b < 700) ph = wrap_phase(-std::exp(b) * std::sin(c));
    return {lm, ph};
}

inline LogPolar fudge_factor(cplx z, int k, int m = 1) { return fudge_factor(FudgeFactor{k, m}, z); }

inline int default_fudge_k(double eps)
{
    require(eps > 0 && eps < 1, "fudge: eps must lie in (0,1)");
    return std::max(3, static_cast<int>(std::ceil(4 / eps - 2 - 1e-12)));
}

// sign * exp(lg); sign 0 is the value 0
struct SignedLog {
    int sign = 0;
    double lg = -kInf;

    double value() const { return sign == 0 ? 0.0 : sign * (lg > 709 ? kInf : std::exp(lg)); }
    friend bool operator<(const SignedLog& a, const SignedLog& b)
    {
        if (a.sign != b.sign) return a.sign < b.sign;
        return a.sign > 0 ? a.lg < b.lg : (a.sign < 0 ? a.lg > b.lg : false);
    }
};

namespace detail {

// e^{la} - e^{lb} cos(c) + e^{le} without overflow
inline SignedLog signed_exp_sum(double la, double lb, double c, double le)
{
    struct T {
        double sign, lg;
    };
    const double cc = std::cos(c);
    const T ts[3] = {{1, la}, {cc > 0 ? -1.0 : 1.0, lb + std::log(std::abs(cc))}, {1, le}};
    double top = -kInf;
    for (const auto& t : ts) top = std::max(top, t.lg);
    double acc = 0;
    for (const auto& t : ts) acc += t.sign * std::exp(t.lg - top);
    if (acc == 0) return {};
    return {acc > 0 ? 1 : -1, top + std::log(std::abs(acc))};
}

}  // namespace detail

// ln|psi(z)| + exp(|x|^{-(1-eps)}) in signed-log form
inline SignedLog fudge_lemma_quantity(const FudgeFactor& ff, cplx z, double eps)
{
    const cplx u = detail::fudge_inner(ff, z);
    return detail::signed_exp_sum(ff.log_log_c(), u.real(), u.imag(), std::pow(std::abs(z.real()), -(1 - eps)));
}

struct FudgeLemmaRow {
    double y, x, log_modulus;
    SignedLog measured;
};

// The measured ln C can exceed double range (|psi| reaches exp(e^{Re u}) where
// Im u crosses pi/2 before the asymptotic regime), so it is kept as a signed log:
// ln C = log_C.sign * exp(log_C.lg).
struct FudgeLemmaReport {
    int k = 0;
    double eps = 0;
    SignedLog log_C{-1, kInf};
    double argmax_y = 0;
    bool finite = false, away_from_pole = false, tail_decreasing = false;
    std::vector<FudgeLemmaRow> rows;  // upper branch, x > 0
    bool passed() const { return finite && away_from_pole && tail_decreasing; }
};

inline FudgeLemmaReport verify_fudge_lemma(int k, double eps, const std::vector<double>& y_grid, int m = 1)
{
    require(eps > 0 && eps < 1, "fudge lemma: eps must lie in (0,1)");
    require(k > 2 / eps - 2, "fudge lemma: need k > 2/eps - 2");
    require(!y_grid.empty(), "fudge lemma: empty y grid");
    for (double y : y_grid) require(y > 0 && y < 1, "fudge lemma: y grid must lie in (0,1)");
    FudgeFactor ff{k, m};
    FudgeLemmaReport rep;
    rep.k = k, rep.eps = eps;
    std::vector<double> ys = y_grid;
    std::sort(ys.begin(), ys.end());
    for (double y : ys) {
        const double x = std::pow(y, k + 2);
        for (double sx : {1.0, -1.0})
            for (double sy : {1.0, -1.0}) {
                cplx z(sx * x, sy * (1 - y));
                SignedLog v = fudge_lemma_quantity(ff, z, eps);
                if (rep.log_C < v) rep.log_C = v, rep.argmax_y = y;
                if (sx > 0 && sy > 0) rep.rows.push_back({y, x, fudge_factor(ff, z).logmod, v});
            }
    }
    rep.finite = rep.log_C.sign <= 0 || std::isfinite(rep.log_C.lg);
    rep.away_from_pole = rep.argmax_y > ys.front();
    // ln(-ln|psi|) = ln(e^{Re u} cos(Im u) - e^a) must increase as y decreases through the tail
    std::vector<double> ll;
    const std::size_t tail = std::max<std::size_t>(2, ys.size() / 4);
    for (std::size_t i = 0; i < tail; ++i) {
        cplx u = detail::fudge_inner(ff, cplx(std::pow(ys[i], k + 2), 1 - ys[i]));
        double cc = std::cos(u.imag());
        double lb = u.real() + std::log(std::max(cc, 1e-300));
        ll.push_back(lb > ff.log_log_c() ? log_sub(lb, ff.log_log_c()) : -kInf);
    }
    rep.tail_decreasing = true;
    for (std::size_t i = 1; i < ll.size(); ++i)
        if (!(ll[i - 1] > ll[i])) rep.tail_decreasing = false;
    return rep;
}

// ---- quadrature -------------------------------------------------------------

namespace detail {

inline const double* gk15_nodes()
{
    static const double x[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                0.207784955007898467600689403773245, 0.0};
    return x;
}

inline const double* gk15_kweights()
{
    static const double w[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    return w;
}

inline const double* g7_weights()
{
    // weights for nodes x[1], x[3], x[5], x[7]
    static const double w[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    return w;
}

inline std::pair<cplx, double> gk15(const std::function<cplx(double)>& f, double a, double b)
{
    const double* x = gk15_nodes();
    const double* wk = gk15_kweights();
    const double* wg = g7_weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx k = wk[7] * fc, g = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        cplx s = f(c - h * x[i]) + f(c + h * x[i]);
        k += wk[i] * s;
        if (i % 2 == 1) g += wg[i / 2] * s;
    }
    return {k * h, std::abs((k - g) * h)};
}

}  // namespace detail

// adaptive Gauss-Kronrod on [a, b], n0 initial panels, absolute tolerance
inline cplx integrate(const std::function<cplx(double)>& f, double a, double b, double tol, int n0 = 1, int max_panels = 20000)
{
    struct Panel {
        double a, b;
        cplx v;
        double err;
    };
    std::vector<Panel> ps;
    for (int i = 0; i < n0; ++i) {
        double pa = a + (b - a) * i / n0, pb = a + (b - a) * (i + 1) / n0;
        auto [v, e] = detail::gk15(f, pa, pb);
        ps.push_back({pa, pb, v, e});
    }
    for (;;) {
        double total = 0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            total += ps[i].err;
            if (ps[i].err > ps[worst].err) worst = i;
        }
        if (!std::isfinite(total)) throw numeric_error("quadrature: non-finite integrand");
        if (total <= tol) break;
        if (static_cast<int>(ps.size()) >= max_panels || ps[worst].b - ps[worst].a < 1e-14 * std::max(1.0, std::abs(b - a)))
            throw refinement_failure("quadrature did not reach tolerance", ps[worst].a, ps[worst].b);
        Panel p = ps[worst];
        double mid = 0.5 * (p.a + p.b);
        auto [v1, e1] = detail::gk15(f, p.a, mid);
        auto [v2, e2] = detail::gk15(f, mid, p.b);
        ps[worst] = {p.a, mid, v1, e1};
        ps.push_back({mid, p.b, v2, e2});
    }
    // fixed order so the sum is bit-stable
    std::sort(ps.begin(), ps.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    cplx s = 0;
    for (const auto& p : ps) s += p.v;
    return s;
}

// ---- contours ---------------------------------------------------------------

struct ContourPath {
    std::string name;
    int group = 1;          // 1, 2 or 3
    double v0 = 0, v1 = 1;  // clustered parameter range
    std::function<cplx(double)> z, dz;

    cplx start() const { return z(v0); }
    cplx end() const { return z(v1); }
};

enum class ContourVariant { with_singularity, analytic_at_zero };

struct ContourSet {
    double R = 0, y_R = 0, r1 = 0, delta = 0, inv_MR = 0;
    int k = 1;
    ContourVariant variant = ContourVariant::analytic_at_zero;
    std::vector<ContourPath> paths;

    std::vector<const ContourPath*> group(int g) const
    {
        std::vector<const ContourPath*> out;
        for (const auto& p : paths)
            if (p.group == g) out.push_back(&p);
        return out;
    }
    // summed |end_i - start_{i+1}| around gamma1 + gamma3 (closed) and gamma1 + gamma2
    double closure_defect() const
    {
        auto chain = [&](int g) {
            std::vector<const ContourPath*> seq = group(1);
            for (auto* p : group(g)) seq.push_back(p);
            double d = 0;
            for (std::size_t i = 0; i < seq.size(); ++i) d += std::abs(seq[i]->end() - seq[(i + 1) % seq.size()]->start());
            return d;
        };
        return chain(2) + chain(3);
    }
};

inline double y_R_of(const RateSpec& M, double R, int k) { return R - R * std::pow(R * value(M, R), -1.0 / (k + 2)); }

struct contour_error : validation_error {
    double R0;
    contour_error(const std::string& msg, double r0) : validation_error(msg), R0(r0) {}
};

// The arcs are parametrised by v = x^{1/(k+2)} (or (1-x)^{1/(k+2)}), which makes
// z(v) polynomial and clusters nodes toward +-iR.
inline ContourSet build_contours(const RateSpec& M, double R, double r1, int k,
                                 ContourVariant variant = ContourVariant::analytic_at_zero, double delta = -1)
{
    require(R > 0 && r1 > 0 && k >= 1, "contours: need R > 0, r1 > 0, k >= 1");
    ContourSet cs;
    cs.R = R, cs.r1 = r1, cs.k = k, cs.variant = variant;
    cs.y_R = y_R_of(M, R, k);
    if (!(cs.y_R > r1)) {
        double R0 = R;
        while (!(y_R_of(M, R0, k) > r1) && R0 < 1e300) R0 *= 2;
        throw contour_error("contours: y_R = " + std::to_string(cs.y_R) + " <= r1; need R >= about " + std::to_string(R0), R0);
    }
    cs.delta = delta > 0 ? delta : 1e-3 * r1;
    const double mR = 1.0 / value(M, R), mr1 = 1.0 / value(M, r1), d = cs.delta;
    cs.inv_MR = mR;
    const int q = k + 2;
    const double vcut = std::pow(R * value(M, R), -1.0 / q);
    const cplx I(0, 1);
    // arc pieces: s1 = +-1 mirror, s2 = +-1 vertical direction
    auto arc = [&](std::string name, int g, double s1, double s2, double a, double b) {
        ContourPath p;
        p.name = std::move(name), p.group = g, p.v0 = a, p.v1 = b;
        p.z = [=](double v) { return s1 * R * (std::pow(v, q) + s2 * I * (1 - v)); };
        p.dz = [=](double v) { return s1 * R * (q * std::pow(v, q - 1) - s2 * I); };
        return p;
    };
    auto segment = [&](std::string name, int g, cplx a, cplx b) {
        ContourPath p;
        p.name = std::move(name), p.group = g;
        p.z = [=](double th) { return (1 - th) * a + th * b; };
        p.dz = [=](double) { return b - a; };
        return p;
    };
    cs.paths.push_back(arc("gamma11", 1, 1, -1, 0, 1));
    cs.paths.push_back(arc("gamma12", 1, 1, 1, 1, 0));
    cs.paths.push_back(arc("gamma21", 2, -1, -1, 0, 1));
    cs.paths.push_back(arc("gamma22", 2, -1, 1, 1, 0));
    cs.paths.push_back(arc("gamma31", 3, -1, -1, 0, vcut));
    const cplx top(-mR, cs.y_R), bottom(-mR, -cs.y_R);
    if (variant == ContourVariant::analytic_at_zero) {
        cs.paths.push_back(segment("gamma32_36", 3, top, bottom));
    } else {
        cs.paths.push_back(segment("gamma32", 3, top, cplx(-mR, r1)));
        cs.paths.push_back(segment("gamma33", 3, cplx(-mR, r1), cplx(-mr1, d)));
        cs.paths.push_back(segment("gamma34a", 3, cplx(-mr1, d), cplx(0, d)));
        ContourPath semi;
        semi.name = "gamma34b", semi.group = 3, semi.v0 = 0, semi.v1 = kPi;
        semi.z = [=](double ph) { return d * std::exp(I * (kPi / 2 - ph)); };
        semi.dz = [=](double ph) { return -I * d * std::exp(I * (kPi / 2 - ph)); };
        cs.paths.push_back(semi);
        cs.paths.push_back(segment("gamma34c", 3, cplx(0, -d), cplx(-mr1, -d)));
        cs.paths.push_back(segment("gamma35", 3, cplx(-mr1, -d), cplx(-mR, -r1)));
        cs.paths.push_back(segment("gamma36", 3, cplx(-mR, -r1), bottom));
    }
    cs.paths.push_back(arc("gamma37", 3, -1, 1, vcut, 0));
    return cs;
}

// ---- reconstruction ----------------------------------------------------------

struct TestCase {
    std::string name;
    std::function<cplx(double)> f;      // f(t)
    std::function<cplx(double)> g;      // -f'(t)
    std::function<cplx(cplx)> fhat;     // Laplace transform, analytic at 0 for reconstruction
    cplx f0 = 0;                        // f(0)
    std::function<double(double)> log_abs_f;  // optional; defaults to ln|f|
    std::optional<std::vector<cplx>> sing;    // Taylor coefficients of f~ at 0, if log-singular
    double sing_r = 1.0;
    double sing_sup = 0.0;  // sup of |f~^{(n)}| on (-r, 0)
};

struct Reconstruction {
    cplx value, I1, I2, I3;
    double abs_mass = 0;           // integral of |integrand|, sums over all paths
    double cancellation_digits = 0;  // log10(abs_mass / |value|)
    double max_log_psi = -kInf;     // over evaluated nodes
    long evaluations = 0;
};

struct ContourNode {
    std::string path;
    double param;
    cplx z;
    double log_psi, integrand_abs;
};

inline Reconstruction reconstruct(const TestCase& tc, double t, double R, const RateSpec& M, int k, double quad_tol = 1e-7,
                                  double r1 = 1.0, std::vector<ContourNode>* trace = nullptr)
{
    require(t > 0, "reconstruct: t must be positive");
    require(quad_tol > 0, "reconstruct: quad_tol must be positive");
    ContourSet cs = build_contours(M, R, r1, k, ContourVariant::analytic_at_zero);
    FudgeFactor ff{k, 1};
    Reconstruction out;
    const double inner_tol = 1e-3 * quad_tol;
    const double skip = std::log(1e-3 * quad_tol) - 40;  // psi below this cannot matter
    const cplx two_pi_i(0, 2 * kPi);

    auto psi = [&](cplx z) {
        LogPolar l = fudge_factor(ff, z / R);
        out.max_log_psi = std::max(out.max_log_psi, l.logmod);
        return l;
    };
    // e^{zt} h_t(z) = int_0^inf e^{-zu} g(t+u) du on Re z > 0
    auto tail_transform = [&](cplx z) {
        const double U = (std::log(1.0 / inner_tol) + 10) / z.real();
        const int n0 = std::max(1, static_cast<int>(U * std::abs(z) / 4));
        return integrate([&](double u) { ++out.evaluations; return std::exp(-z * u) * tc.g(t + u); }, 0.0, U, inner_tol, n0);
    };
    // e^{zt} int_0^t e^{-zs} g(s) ds, Re z <= 0
    auto head_transform = [&](cplx z) {
        const int n0 = std::max(1, static_cast<int>(t * std::abs(z) / 4));
        return integrate([&](double s) { ++out.evaluations; return std::exp(z * (t - s)) * tc.g(s); }, 0.0, t, inner_tol, n0);
    };
    auto path_integral = [&](const ContourPath& p, const std::function<cplx(cplx)>& H, double& mass) {
        auto integrand = [&](double v) -> cplx {
            cplx z = p.z(v);
            LogPolar l = psi(z);
            if (l.logmod < skip) return 0;
            return l.value() * H(z) * p.dz(v) / (z * two_pi_i);
        };
        auto traced = [&](double v) -> cplx {
            cplx val = integrand(v);
            trace->push_back({p.name, v, p.z(v), fudge_factor(ff, p.z(v) / R).logmod, std::abs(val)});
            return val;
        };
        const double a = std::min(p.v0, p.v1), b = std::max(p.v0, p.v1), sgn = p.v1 >= p.v0 ? 1 : -1;
        const int n0 = std::max(4, static_cast<int>(std::abs(b - a) * std::abs(p.dz(0.5 * (a + b))) * t / 4));
        cplx v = trace ? integrate(traced, a, b, quad_tol / 8, n0) : integrate(integrand, a, b, quad_tol / 8, n0);
        mass += std::abs(integrate([&](double x) { return cplx(std::abs(integrand(x))); }, a, b, quad_tol, n0));
        return sgn * v;
    };

    double mass = 0;
    for (const auto* p : cs.group(1))
        out.I1 += path_integral(*p, [&](cplx z) { return z.real() > 0 ? tail_transform(z) : cplx(0); }, mass);
    for (const auto* p : cs.group(2)) out.I2 += path_integral(*p, [&](cplx z) { return -head_transform(z); }, mass);
    for (const auto* p : cs.group(3))
        out.I3 += path_integral(*p, [&](cplx z) { return (-z * tc.fhat(z) + tc.f0) * std::exp(z * t); }, mass);
    out.value = out.I1 + out.I2 + out.I3;
    out.abs_mass = mass;
    out.cancellation_digits = std::log10(mass / std::max(std::abs(out.value), 1e-300));
    return out;
}

// ---- logarithmic singularity ----------------------------------------------

struct LogSingularity {
    std::vector<cplx> a;  // Taylor coefficients of f~ at 0
    double r = 1.0;
    double sup_deriv = 0.0;
};

// sum_{j<n} a_j j! (-1)^j t^{-j-1}, i.e. f~_{n-1}(d/dt) applied to 1/t
inline cplx taylor_correction(const LogSingularity& s, int n, double t)
{
    require(n >= 1 && n <= static_cast<int>(s.a.size()), "taylor_correction: n out of range");
    if (t == 0) throw std::domain_error("taylor_correction: t must be nonzero");
    require(t > 0, "taylor_correction: t must be positive");
    cplx sum = 0;
    double fact = 1;  // j! (-1)^j t^{-j-1}
    double coef = 1 / t;
    for (int j = 0; j < n; ++j) {
        if (j > 0) fact *= j, coef *= -1 / t;
        sum += s.a[j] * fact * coef;
    }
    return sum;
}

// ---- decay envelope -----------------------------------------------------------

struct DecayEstimate {
    bool used_log_variant = false;
    double positive_increase_index = 0;
    double log_C = -kInf;  // ln sup |f + correction| * envelope
    double worst_t = 0;
    std::vector<std::pair<double, double>> rows;  // (t, ln(|residual| * envelope))
    bool passed() const { return std::isfinite(log_C); }
};

inline DecayEstimate decay_estimate_check(const TestCase& tc, const RateSpec& M, const RateSpec& K, const HypothesisProfile& prof,
                                        const std::vector<double>& t_grid)
{
    validate(prof);
    DecayEstimate rep;
    const auto grid = log_grid(1.0, 1e8, 64);
    PositiveIncreaseWitness w = positive_increase_estimate(K, grid);
    rep.positive_increase_index = w.a;
    rep.used_log_variant = !(w.a > 0);
    const RateSpec Kt = k_m_transform(K, prof.m, rep.used_log_variant);
    const RateSpec F = m_sub_k(M, Kt);
    LogSingularity ls;
    if (tc.sing) ls = {*tc.sing, tc.sing_r, tc.sing_sup};
    const int n = tc.sing ? std::min<int>(prof.n, static_cast<int>(ls.a.size())) : 0;
    for (double t : t_grid) {
        double lf;
        if (n > 0)
            lf = std::log(std::abs(tc.f(t) + taylor_correction(ls, n, t)));
        else
            lf = tc.log_abs_f ? tc.log_abs_f(t) : std::log(std::abs(tc.f(t)));
        double linv = value(F, 1.0) <= t ? right_inverse_log(F, t) : std::log(inverse(F, t));
        double env = prof.m * linv;
        if (n > 0) env = std::min(env, (n + 1) * std::log(t));
        double v = lf + env;
        rep.rows.emplace_back(t, v);
        if (v > rep.log_C) rep.log_C = v, rep.worst_t = t;
    }
    return rep;
}

// ---- preset test cases ---------------------------------------------------------

inline TestCase testcase_exp()
{
    TestCase tc;
    tc.name = "exp";
    tc.f = [](double t) { return cplx(std::exp(-t)); };
    tc.g = [](double t) { return cplx(std::exp(-t)); };
    tc.fhat = [](cplx z) { return 1.0 / (1.0 + z); };
    tc.f0 = 1;
    tc.log_abs_f = [](double t) { return -t; };
    return tc;
}

// (1 - e^{-t})/t with transform log(1 + 1/z) = f~(z) log z + analytic, f~ = -1
inline TestCase testcase_log_singular()
{
    TestCase tc;
    tc.name = "log_singular";
    tc.f = [](double t) { return cplx(-std::expm1(-t) / t); };
    tc.g = [](double t) {
        // -f'(t) = (1 - e^{-t} - t e^{-t}) / t^2
        if (t < 1e-4) return cplx(0.5 - t / 3);
        return cplx((-std::expm1(-t) - t * std::exp(-t)) / (t * t));
    };
    tc.fhat = [](cplx z) { return std::log(1.0 + 1.0 / z); };
    tc.f0 = 1;
    tc.sing = std::vector<cplx>{-1.0};
    tc.sing_r = 1.0;
    tc.sing_sup = 0.0;
    return tc;
}

inline TestCase testcase_measure(const LemmaParams& p)
{
    TestCase tc;
    tc.name = "measure_k" + std::to_string(p.k);
    tc.f = [p](double t) { return laplace_of_measure(p, t, 0); };
    tc.g = [p](double t) { return -laplace_of_measure(p, t, 1); };
    tc.fhat = [p](cplx z) { return cauchy_of_measure(p, z); };
    tc.f0 = 0;
    tc.log_abs_f = [p](double t) { return laplace_log(p, t, 0).logmod; };
    return tc;
}

inline TestCase testcase_counterexample(const CounterexampleFunction& cf)
{
    TestCase tc;
    tc.name = "counterexample";
    tc.f = [cf](double t) { return cf.f(t); };
    tc.g = [cf](double t) {
        std::vector<LogPolar> v;
        for (const auto& p : cf.terms) {
            LogPolar l = laplace_log(p, t, 1);
            v.push_back({l.logmod, l.phase + kPi});
        }
        return logpolar_sum(v).value();
    };
    tc.fhat = [cf](cplx z) { return cf.fhat(z); };
    tc.f0 = 0;
    tc.log_abs_f = [cf](double t) { return cf.f_log(t).logmod; };
    return tc;
}

}  // namespace tauber
