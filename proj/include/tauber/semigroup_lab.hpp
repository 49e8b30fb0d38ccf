#pragma once

// Scalar generator models (vertical line, normal curve, Jordan blocks) and the
// measured orbit decay against the M_log^{-1}(ct) prediction.

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rate_algebra.hpp"

namespace tauber {

struct pole_error_sg : numeric_error {
    using numeric_error::numeric_error;
};

enum class SpectrumKind { atomic, line, curve, jordan };

struct JordanBlock {
    cplx lambda;
    int dim = 1;
};

struct SpectrumModel {
    std::string name;
    SpectrumKind kind = SpectrumKind::atomic;
    std::vector<cplx> eigenvalues;  // atomic
    double delta = 1.0;             // line: Re lambda = -delta
    RateSpec M;                     // curve: lambda(s) = -1/M(|s|) + is
    std::vector<JordanBlock> blocks;
    bool qualitative = false;

    double growth_bound() const
    {
        switch (kind) {
        case SpectrumKind::atomic: {
            double w = -kInf;
            for (cplx l : eigenvalues) w = std::max(w, l.real());
            return w;
        }
        case SpectrumKind::line: return -delta;
        case SpectrumKind::curve: return 0.0;  // approached as s grows when M is unbounded
        case SpectrumKind::jordan: {
            double w = -kInf;
            for (const auto& b : blocks) w = std::max(w, b.lambda.real());
            return w;
        }
        }
        return 0.0;
    }
};

inline void validate(const SpectrumModel& m)
{
    switch (m.kind) {
    case SpectrumKind::atomic:
        require(!m.eigenvalues.empty(), "spectrum: empty eigenvalue list");
        for (cplx l : m.eigenvalues) require(l.real() < 0, "spectrum: eigenvalue with Re >= 0");
        break;
    case SpectrumKind::line: require(m.delta > 0, "spectrum: line needs delta > 0"); break;
    case SpectrumKind::curve:
        validate(m.M);
        require(value(m.M, 0.0) > 0, "spectrum: curve needs M(0) > 0");
        break;
    case SpectrumKind::jordan:
        require(!m.blocks.empty(), "spectrum: no Jordan blocks");
        for (const auto& b : m.blocks) require(b.lambda.real() < 0 && b.dim >= 1, "spectrum: Jordan block must be stable");
        break;
    }
}

// ---- presets -----------------------------------------------------------------

inline SpectrumModel normal_line(double delta)
{
    SpectrumModel m;
    m.name = "normal_line", m.kind = SpectrumKind::line, m.delta = delta;
    validate(m);
    return m;
}

inline SpectrumModel curve_log_alpha(double alpha)
{
    require(alpha > 0, "curve_log_alpha: alpha must be positive");
    SpectrumModel m;
    m.name = "curve_log_alpha", m.kind = SpectrumKind::curve, m.M = rate::log_power(alpha);
    return m;
}

// blocks at -1 + i 2^n of dimension n, n = 1..levels; a qualitative stand-in
inline SpectrumModel jordan_dyadic(int levels)
{
    require(levels >= 1 && levels <= 30, "jordan_dyadic: levels must lie in [1, 30]");
    SpectrumModel m;
    m.name = "jordan_dyadic", m.kind = SpectrumKind::jordan, m.qualitative = true;
    for (int n = 1; n <= levels; ++n) m.blocks.push_back({cplx(-1.0, std::ldexp(1.0, n)), n});
    return m;
}

inline SpectrumModel preset(const std::string& name, double param)
{
    if (name == "normal_line") return normal_line(param);
    if (name == "curve_log_alpha") return curve_log_alpha(param);
    if (name == "jordan_dyadic") return jordan_dyadic(static_cast<int>(param));
    throw validation_error("preset: unknown model '" + name + "'");
}

// ---- Jordan block algebra ------------------------------------------------------

using CMat = Eigen::MatrixXcd;

inline CMat jordan_matrix(const JordanBlock& b)
{
    CMat J = CMat::Zero(b.dim, b.dim);
    for (int i = 0; i < b.dim; ++i) {
        J(i, i) = b.lambda;
        if (i + 1 < b.dim) J(i, i + 1) = 1.0;
    }
    return J;
}

// e^{tJ} = e^{lambda t} sum_j t^j N^j / j!
inline CMat jordan_exp(const JordanBlock& b, double t)
{
    CMat E = CMat::Zero(b.dim, b.dim);
    const cplx el = std::exp(b.lambda * t);
    double c = 1;
    for (int j = 0; j < b.dim; ++j) {
        if (j > 0) c *= t / j;
        for (int i = 0; i + j < b.dim; ++i) E(i, i + j) = el * c;
    }
    return E;
}

// (z - J)^{-1} = sum_j N^j / (z - lambda)^{j+1}
inline CMat jordan_resolvent(const JordanBlock& b, cplx z)
{
    const cplx w = z - b.lambda;
    if (std::abs(w) < 1e-12) throw pole_error_sg("resolvent: z on the spectrum");
    CMat Rz = CMat::Zero(b.dim, b.dim);
    cplx p = 1.0 / w;
    for (int j = 0; j < b.dim; ++j) {
        for (int i = 0; i + j < b.dim; ++i) Rz(i, i + j) = p;
        p /= w;
    }
    return Rz;
}

inline double spectral_norm(const CMat& A)
{
    Eigen::JacobiSVD<CMat> svd(A);
    return svd.singularValues()(0);
}

// ---- curve helpers ----------------------------------------------------------

namespace detail {

inline cplx curve_point(const RateSpec& M, double s) { return {-1.0 / value(M, std::abs(s)), s}; }

inline double curve_dist(const RateSpec& M, cplx z)
{
    const double y = z.imag();
    const double L = std::abs(z - curve_point(M, y));
    // any nearer point has |s - y| <= L
    const int n = 400;
    double best = L, best_s = y;
    for (int i = 0; i <= n; ++i) {
        double s = y - L + 2 * L * i / n;
        double d = std::abs(z - curve_point(M, s));
        if (d < best) best = d, best_s = s;
    }
    const double h = 2 * L / n;
    auto r = boost::math::tools::brent_find_minima([&](double s) { return std::abs(z - curve_point(M, s)); }, best_s - h,
                                                   best_s + h, 52);
    return std::min(best, r.second);
}

// ln of e^{t Re lambda} / |lambda|^m at s = e^u
inline double curve_orbit_log_u(const RateSpec& M, double t, int m, double u)
{
    const double lm = eval_log_arg(M, u).log_value;
    return -t * std::exp(-lm) - m * 0.5 * log_add(2 * u, -2 * lm);
}

inline double curve_orbit_log_s(const RateSpec& M, double t, int m, double s)
{
    const double lm = log_value(M, s);
    return -t * std::exp(-lm) - m * 0.5 * std::log(s * s + std::exp(-2 * lm));
}

}  // namespace detail

// ---- resolvent and orbit -------------------------------------------------------

inline double resolvent_norm(const SpectrumModel& model, cplx z)
{
    double d = kInf;
    switch (model.kind) {
    case SpectrumKind::atomic:
        for (cplx l : model.eigenvalues) d = std::min(d, std::abs(z - l));
        break;
    case SpectrumKind::line: d = std::abs(z.real() + model.delta); break;
    case SpectrumKind::curve: d = detail::curve_dist(model.M, z); break;
    case SpectrumKind::jordan: {
        double nrm = 0;
        for (const auto& b : model.blocks) nrm = std::max(nrm, spectral_norm(jordan_resolvent(b, z)));
        return nrm;
    }
    }
    if (d < 1e-12) throw pole_error_sg("resolvent: z within 1e-12 of the spectrum");
    return 1.0 / d;
}

// ln ||T(t) A^{-m}||
inline double log_orbit_norm(const SpectrumModel& model, double t, int m)
{
    require(t >= 0 && m >= 0, "orbit_norm: need t >= 0, m >= 0");
    switch (model.kind) {
    case SpectrumKind::atomic: {
        double best = -kInf;
        for (cplx l : model.eigenvalues) best = std::max(best, t * l.real() - m * std::log(std::abs(l)));
        return best;
    }
    case SpectrumKind::line: return -model.delta * t - m * std::log(model.delta);
    case SpectrumKind::curve: {
        const RateSpec& M = model.M;
        if (m == 0) return -t * std::exp(-eval_log_arg(M, 1e300).log_value);  // sup approached as s grows
        double best = -kInf;
        for (int i = 0; i <= 200; ++i) best = std::max(best, detail::curve_orbit_log_s(M, t, m, i / 200.0));
        // s >= 1 via u = ln s; value <= -m u bounds the useful range
        const double v0 = best;
        const double u_hi = std::max(10.0, -v0 / m + 1);
        const int n = 4000;
        double bu = 0, bv = -kInf;
        std::vector<double> us;
        for (int i = 0; i <= n; ++i) us.push_back(1e-6 * std::pow(u_hi / 1e-6, double(i) / n));
        for (std::size_t i = 0; i < us.size(); ++i) {
            double v = detail::curve_orbit_log_u(M, t, m, us[i]);
            if (v > bv) bv = v, bu = static_cast<double>(i);
        }
        const std::size_t i = static_cast<std::size_t>(bu);
        const double lo = us[i == 0 ? 0 : i - 1], hi = us[std::min(i + 1, us.size() - 1)];
        auto r = boost::math::tools::brent_find_minima([&](double u) { return -detail::curve_orbit_log_u(M, t, m, u); }, lo,
                                                       hi, 52);
        return std::max({best, bv, -r.second});
    }
    case SpectrumKind::jordan: {
        double best = 0;
        for (const auto& b : model.blocks) {
            CMat J = jordan_matrix(b);
            CMat Jinv = J.inverse();
            CMat P = CMat::Identity(b.dim, b.dim);
            for (int j = 0; j < m; ++j) P = P * Jinv;
            best = std::max(best, spectral_norm(jordan_exp(b, t) * P));
        }
        return std::log(best);
    }
    }
    return 0.0;
}

inline double orbit_norm(const SpectrumModel& model, double t, int m) { return std::exp(log_orbit_norm(model, t, m)); }

// ---- resolvent majorant ----------------------------------------------------

struct MajorantFit {
    std::vector<double> s, M_emp;
    std::string shape;  // constant | log_power | power
    double C = 1, a = 0, rss = 0;
    RateSpec fitted;
    std::vector<std::pair<std::string, double>> candidates;  // shape, rss
};

inline MajorantFit fit_resolvent_majorant(const SpectrumModel& model, const std::vector<double>& s_grid)
{
    require(s_grid.size() >= 4, "fit_resolvent_majorant: need at least 4 grid points");
    MajorantFit out;
    out.s = s_grid;
    std::sort(out.s.begin(), out.s.end());
    double run = 0;
    for (double s : out.s) {
        run = std::max({run, resolvent_norm(model, cplx(0, s)), resolvent_norm(model, cplx(0, -s))});
        out.M_emp.push_back(run);
    }
    // least squares ln M = c + a x over the points with x defined
    auto line_fit = [&](auto xfun, double& c, double& a) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t i = 0; i < out.s.size(); ++i) {
            double x = xfun(out.s[i]), y = std::log(out.M_emp[i]);
            sx += x, sy += y, sxx += x * x, sxy += x * y, ++n;
        }
        double den = n * sxx - sx * sx;
        a = std::abs(den) > 1e-300 ? (n * sxy - sx * sy) / den : 0.0;
        c = (sy - a * sx) / n;
        double rss = 0;
        for (std::size_t i = 0; i < out.s.size(); ++i) {
            double e = std::log(out.M_emp[i]) - c - a * xfun(out.s[i]);
            rss += e * e;
        }
        return rss / n;
    };
    double c0 = 0, a0 = 0;
    double mean = 0;
    for (double v : out.M_emp) mean += std::log(v);
    mean /= out.M_emp.size();
    double rss0 = 0;
    for (double v : out.M_emp) rss0 += (std::log(v) - mean) * (std::log(v) - mean);
    rss0 /= out.M_emp.size();
    c0 = mean;
    double c1, a1, c2, a2;
    double rss1 = line_fit([](double s) { return std::log(std::max(1.0, std::log(std::max(s, 1e-300)))); }, c1, a1);
    double rss2 = line_fit([](double s) { return std::log(std::max(1.0, s)); }, c2, a2);
    out.candidates = {{"constant", rss0}, {"log_power", rss1}, {"power", rss2}};
    // prefer fewer parameters unless the fit improves materially
    if (rss0 <= 1e-6 || (rss0 <= 1.5 * rss1 && rss0 <= 1.5 * rss2)) {
        out.shape = "constant", out.C = std::exp(c0), out.a = 0, out.rss = rss0;
        out.fitted = rate::constant(out.C);
    } else if (rss1 <= rss2) {
        out.shape = "log_power", out.C = std::exp(c1), out.a = a1, out.rss = rss1;
        out.fitted = rate::product({rate::constant(out.C), rate::log_power(std::max(a1, 0.0))});
    } else {
        out.shape = "power", out.C = std::exp(c2), out.a = a2, out.rss = rss2;
        out.fitted = rate::product({rate::constant(out.C), rate::max1_power(std::max(a2, 0.0))});
    }
    (void)a0;
    return out;
}

// M for a model: the defining rate where one exists, otherwise the fitted majorant
inline RateSpec model_rate(const SpectrumModel& model, const std::vector<double>& s_grid = log_grid(1, 1e4, 200))
{
    switch (model.kind) {
    case SpectrumKind::line: return rate::constant(1.0 / model.delta);
    case SpectrumKind::curve: return model.M;
    default: {
        // sampled running max, made a rate via a monotone piecewise-linear interpolant
        MajorantFit fit = fit_resolvent_majorant(model, s_grid);
        std::vector<double> xs{0.0}, ys{std::max(fit.M_emp.front(), resolvent_norm(model, cplx(0, 0)))};
        for (std::size_t i = 0; i < fit.s.size(); ++i)
            if (fit.s[i] > xs.back()) xs.push_back(fit.s[i]), ys.push_back(std::max(ys.back(), fit.M_emp[i]));
        return rate::piecewise_linear(xs, ys);
    }
    }
}

// ---- corollary check -------------------------------------------------------

// boundary constant for M = log(e v s)^alpha: alpha^{-alpha} (1+alpha)^{1+alpha}
inline double c_alpha(double alpha)
{
    require(alpha > 0, "c_alpha: alpha must be positive");
    return std::pow(alpha, -alpha) * std::pow(1 + alpha, 1 + alpha);
}

struct DecayRow {
    double t, log_orbit;
    std::vector<double> log_predicted, log_ratio;  // per c
};

struct CVerdict {
    double c;
    bool bounded;
    double log_sup_ratio;  // measured ln C'_1
    double argmax_t;
};

struct DecayReport {
    std::string model;
    int m = 1;
    std::vector<double> c_grid;
    std::vector<DecayRow> rows;
    std::vector<CVerdict> verdicts;
    double c_star = 0;  // largest c with every c' <= c bounded
    bool monotone = true;

    const CVerdict& at(double c) const
    {
        for (const auto& v : verdicts)
            if (std::abs(v.c - c) < 1e-12) return v;
        throw validation_error("decay report: c not in grid");
    }
};

// growing = ratio non-decreasing over the last decade of the grid and maximal at its end
inline bool growing_last_decade(const std::vector<double>& t, const std::vector<double>& lr)
{
    const double t_end = t.back();
    std::size_t i0 = 0;
    while (i0 < t.size() && t[i0] < t_end / 10) ++i0;
    double prior = -kInf;
    for (std::size_t i = 0; i < i0; ++i) prior = std::max(prior, lr[i]);
    for (std::size_t i = i0 + 1; i < t.size(); ++i)
        if (lr[i] < lr[i - 1]) return false;
    return lr.back() > prior && lr.back() > lr[i0];
}

inline DecayReport corollary_check(const SpectrumModel& model, int m, const std::vector<double>& c_grid, const std::vector<double>& t_grid,
                                   const std::optional<RateSpec>& M_given = std::nullopt)
{
    require(m >= 1, "corollary_check: m must be positive");
    require(!c_grid.empty(), "corollary_check: empty c grid");
    require(t_grid.size() >= 4, "corollary_check: t grid too short");
    std::vector<double> ts = t_grid;
    std::sort(ts.begin(), ts.end());
    require(ts.front() > 0 && ts.back() / ts.front() >= 1e3 * (1 - 1e-12), "corollary_check: t grid must span 3 decades");
    for (double c : c_grid) require(c > 0, "corollary_check: c must be positive");
    const RateSpec M = M_given ? *M_given : model_rate(model);
    const RateSpec Mlog = m_log(M);
    const double F1 = value(Mlog, 1.0);

    DecayReport rep;
    rep.model = model.name, rep.m = m, rep.c_grid = c_grid;
    std::sort(rep.c_grid.begin(), rep.c_grid.end());
    std::vector<std::vector<double>> lr(rep.c_grid.size());
    double prev = kInf;
    for (double t : ts) {
        DecayRow row{t, log_orbit_norm(model, t, m), {}, {}};
        if (row.log_orbit > prev + 1e-12) rep.monotone = false;
        prev = row.log_orbit;
        for (std::size_t j = 0; j < rep.c_grid.size(); ++j) {
            const double ct = rep.c_grid[j] * t;
            double linv = ct >= F1 ? right_inverse_log(Mlog, ct) : std::log(inverse(Mlog, ct));
            row.log_predicted.push_back(-m * linv);
            row.log_ratio.push_back(m * linv + row.log_orbit);
            lr[j].push_back(row.log_ratio.back());
        }
        rep.rows.push_back(std::move(row));
    }
    bool all_bounded = true;
    for (std::size_t j = 0; j < rep.c_grid.size(); ++j) {
        CVerdict v{rep.c_grid[j], !growing_last_decade(ts, lr[j]), -kInf, 0};
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (lr[j][i] > v.log_sup_ratio) v.log_sup_ratio = lr[j][i], v.argmax_t = ts[i];
        if (v.bounded && all_bounded) rep.c_star = v.c;
        all_bounded = all_bounded && v.bounded;
        rep.verdicts.push_back(v);
    }
    return rep;
}

}  // namespace tauber
