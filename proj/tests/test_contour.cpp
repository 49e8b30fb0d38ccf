#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <random>

#include <tauber/contour_engine.hpp>

using namespace tauber;

namespace {

const RateSpec kTwo = rate::constant(2.0);

// Taylor coefficient j of psi at 0 from an N-point trapezoid on |z| = rho
cplx taylor_coefficient(const FudgeFactor& ff, int j, double rho, int N = 1024)
{
    cplx s = 0;
    for (int i = 0; i < N; ++i) {
        cplx z = std::polar(rho, 2 * kPi * i / N);
        s += fudge_factor(ff, z).value() / std::pow(z, j);
    }
    return s / double(N);
}

}  // namespace

TEST(Fudge, ValueAtZero)
{
    for (int k : {1, 3, 6})
        for (int m : {1, 2, 3}) {
            LogPolar l = fudge_factor(cplx(0, 0), k, m);
            EXPECT_EQ(l.logmod, 0.0);
            EXPECT_EQ(l.phase, 0.0);
        }
}

TEST(Fudge, RealAxis)
{
    for (double x : {0.1, 0.4, 0.8, 0.95}) {
        LogPolar l = fudge_factor(cplx(x, 0), 3);
        EXPECT_EQ(l.phase, 0.0);
        // 2/(1+x^2) < 2 on the real axis, so |psi| >= 1 there
        EXPECT_GE(l.logmod, 0.0);
    }
    for (double y : {0.1, 0.5, 0.9}) EXPECT_LE(fudge_factor(cplx(0, y), 3).logmod, 0.0);
}

TEST(Fudge, Symmetry)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    int done = 0;
    while (done < 100) {
        cplx z(u(rng), u(rng));
        if (std::abs(std::abs(z.imag()) - 1) < 0.05 && std::abs(z.real()) < 0.05) continue;
        for (int k : {1, 3}) {
            LogPolar a = fudge_factor(z, k), b = fudge_factor(-z, k), c = fudge_factor(std::conj(z), k);
            if (!std::isfinite(a.logmod) || std::abs(a.logmod) > 600) continue;
            double scale = std::max(1.0, std::abs(a.logmod));
            EXPECT_NEAR(a.logmod, b.logmod, 1e-12 * scale);
            EXPECT_NEAR(std::abs(wrap_phase(a.phase - b.phase)), 0.0, 1e-12 * scale);
            EXPECT_NEAR(a.logmod, c.logmod, 1e-12 * scale);
            EXPECT_NEAR(std::abs(wrap_phase(a.phase + c.phase)), 0.0, 1e-12 * scale);
        }
        ++done;
    }
}

TEST(Fudge, PoleIsError)
{
    EXPECT_THROW(fudge_factor(cplx(0, 1), 3), singularity_error);
    EXPECT_THROW(fudge_factor(cplx(0, -1), 3), singularity_error);
}

// The 4m+2 form depends on z only through z^{4m+2}, so Taylor coefficients
// 1..4m+1 vanish; a trapezoid rule on a circle resolves them exactly.
TEST(Fudge, FlatnessOfHigherVariant)
{
    for (int m : {1, 2}) {
        FudgeFactor ff{1, m, true};
        // radius where the first surviving term k p^k e^{p^k} z^p is of order one
        const int p = 4 * m + 2;
        const double rho = std::pow(1.0 / (p * std::exp(double(p))), 1.0 / p);
        const double c0 = std::abs(taylor_coefficient(ff, 0, rho));
        // ln|psi| carries absolute roundoff of order e^{p^k} ulp
        const double floor = 1e-15 * std::exp(ff.log_log_c()) * c0;
        for (int j = 1; j <= 4 * m + 1; ++j) EXPECT_LE(std::abs(taylor_coefficient(ff, j, rho)) * std::pow(rho, j), floor) << m << " " << j;
        EXPECT_GT(std::abs(taylor_coefficient(ff, 4 * m + 2, rho)) * std::pow(rho, p), 0.5);
    }
}

// Central differences at step 1e-2, where the first non-zero Taylor term is
// still small enough for the estimate to resolve the vanishing derivatives.
TEST(Fudge, FlatnessFiniteDifferences)
{
    FudgeFactor ff{1, 2};
    auto psi = [&](double x) { return fudge_factor(ff, cplx(x, 0)).value().real(); };
    const double h = 1e-2;
    EXPECT_LE(std::abs((psi(h) - psi(-h)) / (2 * h)), 1e-6);
    EXPECT_LE(std::abs((psi(h) - 2 * psi(0) + psi(-h)) / (h * h)), 1e-6);
    EXPECT_LE(std::abs((psi(2 * h) - 2 * psi(h) + 2 * psi(-h) - psi(-2 * h)) / (2 * h * h * h)), 1e-6);
    EXPECT_LE(std::abs((psi(2 * h) - 4 * psi(h) + 6 * psi(0) - 4 * psi(-h) + psi(-2 * h)) / std::pow(h, 4)), 1e-6);
}

TEST(FudgeLemma, KSixHalf)
{
    auto rep = verify_fudge_lemma(6, 0.5, log_grid(1e-3, 0.9, 200));
    EXPECT_TRUE(rep.finite);
    EXPECT_TRUE(rep.away_from_pole);
    EXPECT_TRUE(rep.tail_decreasing);
    EXPECT_EQ(rep.log_C.sign, 1);
    EXPECT_GT(rep.argmax_y, 0.1);
    // the example point y = 0.05 sits below log C - exp(x^{-1/2})
    const double y = 0.05, x = std::pow(y, 8);
    EXPECT_LT(fudge_lemma_quantity(FudgeFactor{6, 1}, cplx(x, 1 - y), 0.5), rep.log_C);
    EXPECT_EQ(fudge_factor(cplx(x, 1 - y), 6).logmod, -kInf);
}

TEST(FudgeLemma, HypothesisBoundary)
{
    EXPECT_THROW(verify_fudge_lemma(2, 0.5, {0.1, 0.5}), validation_error);
    EXPECT_NO_THROW(verify_fudge_lemma(3, 0.5, {0.1, 0.5}));
}

TEST(Contours, EndpointsAndYR)
{
    auto cs = build_contours(rate::constant(1.0), 16, 1, 1);
    EXPECT_NEAR(cs.y_R, 16 - std::pow(16.0, 2.0 / 3), 1e-12);
    const auto& g11 = cs.paths.front();
    EXPECT_EQ(g11.name, "gamma11");
    EXPECT_NEAR(std::abs(g11.start() - cplx(0, -16)), 0, 1e-12);
    EXPECT_NEAR(std::abs(g11.end() - cplx(16, 0)), 0, 1e-12);
    EXPECT_LT(cs.closure_defect(), 1e-12);
    for (int k : {1, 3, 6}) {
        EXPECT_LT(build_contours(kTwo, 40, 1, k, ContourVariant::with_singularity).closure_defect(), 1e-12);
        EXPECT_LT(build_contours(kTwo, 40, 1, k, ContourVariant::analytic_at_zero).closure_defect(), 1e-12);
    }
}

TEST(Contours, RTooSmall)
{
    try {
        build_contours(kTwo, 1.5, 1, 1);
        FAIL();
    } catch (const contour_error& e) {
        EXPECT_GT(e.R0, 1.5);
        EXPECT_GT(y_R_of(kTwo, e.R0, 1), 1.0);
    }
}

TEST(Reconstruct, ExpAllGrid)
{
    const double tol = 1e-7;
    for (double t : {1.0, 5.0, 10.0}) {
        std::vector<double> vals;
        for (double R : {10.0, 20.0, 40.0}) {
            auto r = reconstruct(testcase_exp(), t, R, kTwo, 1, tol);
            EXPECT_LE(std::abs(r.value - std::exp(-t)), 2 * tol) << t << " " << R;
            EXPECT_NEAR(std::abs(r.value - (r.I1 + r.I2 + r.I3)), 0, 1e-15);
            vals.push_back(r.value.real());
        }
        EXPECT_LE(*std::max_element(vals.begin(), vals.end()) - *std::min_element(vals.begin(), vals.end()), 2 * tol);
    }
}

TEST(Reconstruct, MeasureCrossModule)
{
    auto p = make_lemma_params(1.0, 6, 1, std::log(5.0));
    auto tc = testcase_measure(p);
    for (double t : {1.0, 5.0}) {
        auto r = reconstruct(tc, t, 20, kTwo, 1);
        EXPECT_LE(std::abs(r.value - tc.f(t)), 1e-5 * std::abs(tc.f(t))) << t;
    }
}

// psi(+-1) = exp(e^{2^k} - e): the arc integrals cancel beyond double range for k >= 2
TEST(Reconstruct, LargeKCancellationIsReported)
{
    EXPECT_THROW(reconstruct(testcase_exp(), 5, 20, kTwo, 3), numeric_error);
}

TEST(Reconstruct, FudgeBoundedOnContours)
{
    auto rep = verify_fudge_lemma(1, 0.7, log_grid(1e-3, 0.9, 200));
    for (double R : {10.0, 20.0, 40.0}) {
        auto r = reconstruct(testcase_exp(), 1, R, kTwo, 1);
        EXPECT_LE(r.max_log_psi, rep.log_C.value());
    }
}

TEST(Taylor, Examples)
{
    EXPECT_NEAR(taylor_correction({{-1.0}}, 1, 10).real(), -0.1, 1e-16);
    EXPECT_NEAR(taylor_correction({{0.0, 1.0}}, 2, 2).real(), -0.25, 1e-16);
    EXPECT_THROW(taylor_correction({{1.0}}, 1, 0), std::domain_error);
    EXPECT_THROW(taylor_correction({{1.0}}, 2, 1), validation_error);
}

TEST(Taylor, GammaIntegralOracle)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2), ut(0.5, 20);
    for (int trial = 0; trial < 50; ++trial) {
        int len = 1 + trial % 5;
        LogSingularity s;
        for (int j = 0; j < len; ++j) s.a.emplace_back(u(rng), u(rng));
        double t = ut(rng);
        auto integrand = [&](double x) {
            cplx p = 0;
            for (int j = len - 1; j >= 0; --j) p = p * (-x) + s.a[j];
            return std::exp(-x * t) * p;
        };
        using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
        double re = GK::integrate([&](double x) { return integrand(x).real(); }, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
        double im = GK::integrate([&](double x) { return integrand(x).imag(); }, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
        EXPECT_LE(std::abs(taylor_correction(s, len, t) - cplx(re, im)), 1e-8);
    }
}

TEST(Taylor, WorkedPair)
{
    auto tc = testcase_log_singular();
    LogSingularity s{*tc.sing, 1.0, 0.0};
    for (double t : {0.5, 1.0, 3.0, 10.0, 30.0}) {
        cplx resid = tc.f(t) + taylor_correction(s, 1, t);
        EXPECT_NEAR(resid.real(), -std::exp(-t) / t, 1e-12);
    }
}

TEST(Decay, Presets)
{
    HypothesisProfile prof;
    auto grid = log_grid(1, 200, 60);
    auto e = decay_estimate_check(testcase_exp(), kTwo, kTwo, prof, grid);
    EXPECT_TRUE(e.passed());
    EXPECT_LT(e.log_C, 1.0);

    auto ls = decay_estimate_check(testcase_log_singular(), kTwo, kTwo, prof, grid);
    EXPECT_TRUE(ls.passed());
    EXPECT_LT(ls.log_C, 2.0);
}

TEST(Decay, CounterexampleSandwich)
{
    auto f = assemble_f(rate::constant(1.0), rate::max1_power(2.0), 1.5, 0.5, 4);
    HypothesisProfile prof;
    std::vector<double> ts;
    for (double t : f.t_n) ts.push_back(t);
    for (double t : log_grid(1, f.t_n.back(), 80)) ts.push_back(t);
    auto rep = decay_estimate_check(testcase_counterexample(f), rate::constant(1.0), rate::max1_power(2.0), prof, ts);
    EXPECT_TRUE(rep.passed());
    auto opt = verify_optimality(f, 1.5, default_omega_grid(f, 2000), Probe{rate::constant(1.0), 0.0});
    EXPECT_GT(opt.c_min, 0);
}
