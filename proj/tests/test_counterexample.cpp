#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"

using namespace tauber;

namespace {

const RateSpec kOne = rate::constant(1.0);
const RateSpec kSq = rate::max1_power(2.0);

LemmaParams lemma_for(int k)
{
    double d = select_delta(kOne, kSq).delta;
    return build_measure(kOne, kSq, d, k).second;
}

}  // namespace

TEST(Measure, KOneDeltaOne)
{
    auto [mu, p] = build_measure(kOne, kSq, 1.0, 1);
    EXPECT_NEAR(p.q().real(), -1.0, 1e-15);
    EXPECT_NEAR(p.q().imag(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(p.A, 2.0);
    EXPECT_NEAR(p.log_tau, std::log(2.0), 1e-15);
    // M_K~(s) = log(e v s^2) = 1 at s <= sqrt(e): right endpoint sqrt(e)
    EXPECT_NEAR(p.log_R, 0.5, 1e-12);
    ASSERT_EQ(mu.atoms.size(), 2u);
    const long double R = p.R;
    EXPECT_NEAR(static_cast<double>(mu.atoms[0].loc.real()), -1.0 + 0.5, 1e-15);
    EXPECT_NEAR(static_cast<double>(mu.atoms[1].loc.real()), -1.0 - 0.5, 1e-15);
    EXPECT_NEAR(static_cast<double>(mu.atoms[0].loc.imag() - R), 0.0, 1e-15);
    cplx w0 = mu.atoms[0].weight.value(), w1 = mu.atoms[1].weight.value();
    const double tau_over_R = 2.0 / std::exp(0.5);
    EXPECT_NEAR(w0.real(), tau_over_R, 1e-14);
    EXPECT_NEAR(w1.real(), -tau_over_R, 1e-14);
}

TEST(Measure, ParameterIdentities)
{
    for (int k = 1; k <= 60; ++k) {
        for (double d : {0.01, 0.3, 4.0, 21.5}) {
            LemmaParams p = make_lemma_params(d, k, 1, 3.0);
            EXPECT_NEAR(d * p.A / (k * 2 * std::log(std::max(std::exp(1.0), double(k)))), 1.0, 1e-12);
            EXPECT_NEAR(p.log_tau, -0.5 * std::log(double(k)) + k * std::log(d * p.A), 1e-12 * std::abs(p.log_tau));
            cplx q = p.q();
            EXPECT_NEAR(std::abs(q), 1.0, 1e-12);
            EXPECT_NEAR(std::abs(std::pow(q, k + 1) - cplx(1)), 0.0, 1e-12);
            EXPECT_DOUBLE_EQ(static_cast<double>(p.w().real()), -d);
            EXPECT_EQ(p.w().imag(), p.R);
        }
    }
}

TEST(Measure, WeightSumVanishesAndAtomsLeftOfAxis)
{
    for (int k = 1; k <= 40; ++k) {
        AtomicMeasure mu = atoms_of(make_lemma_params(0.7, k, 1, 2.0));
        cplx s = 0;
        double scale = 0;
        for (const auto& a : mu.atoms) {
            s += a.weight.value();
            scale += std::abs(a.weight.value());
            EXPECT_LT(a.loc.real(), 0.0L);
        }
        EXPECT_LT(std::abs(s), 1e-10 * scale) << "k=" << k;
    }
}

TEST(Measure, HigherOrderWeightsCarryRPower)
{
    LemmaParams p1 = make_lemma_params(1.0, 3, 1, 2.0), p2 = make_lemma_params(1.0, 3, 2, 2.0);
    auto a1 = atoms_of(p1), a2 = atoms_of(p2);
    for (std::size_t j = 0; j < a1.atoms.size(); ++j) EXPECT_NEAR(a1.atoms[j].weight.logmod - a2.atoms[j].weight.logmod, 2.0, 1e-14);
}

TEST(Measure, DeltaHeuristic)
{
    DeltaChoice d = select_delta(kOne, kSq);
    EXPECT_TRUE(d.M_bounded);
    EXPECT_NEAR(d.delta0, 2.0, 1e-12);  // ln s / log(s^2) = 1/2
    EXPECT_NEAR(d.delta, 4.0, 1e-12);
    // raising for gamma: -ln(1 - 1/delta) * delta = gamma1
    DeltaChoice dg = select_delta(kOne, kSq, 1.1);
    double x = 1 / dg.delta;
    EXPECT_NEAR(-std::log1p(-x) / x, 1.05, 1e-9);
    EXPECT_TRUE(build_measure(kOne, kSq, 1.5, 5).second.delta_warning);
    EXPECT_FALSE(build_measure(kOne, kSq, 4.0, 5).second.delta_warning);
    DeltaChoice du = select_delta(rate::max1_power(1.0), kSq);
    EXPECT_FALSE(du.M_bounded);
    EXPECT_LE(du.delta, 1.0);
}

TEST(Laplace, KOneSinhForm)
{
    LemmaParams p = make_lemma_params(0.8, 1, 1, std::log(37.0));
    const double tau = std::exp(p.log_tau), R = static_cast<double>(p.R);
    for (double t : {0.0, 0.1, 1.0, 3.0, 7.5, 20.0}) {
        cplx expect = 2 * tau / R * std::exp(cplx(-p.delta, R) * t) * std::sinh(t / p.A);
        cplx got = laplace_of_measure(p, t);
        EXPECT_LE(std::abs(got - expect), 1e-12 * std::max(1e-300, std::abs(expect))) << t;
    }
}

TEST(Laplace, DerivativeAtZero)
{
    LemmaParams p = make_lemma_params(1.3, 1, 1, std::log(11.0));
    cplx v = laplace_of_measure(p, 0.0, 1);
    EXPECT_NEAR(v.real(), 2 * std::exp(p.log_tau) / (11.0 * p.A), 1e-12);
    EXPECT_NEAR(v.imag(), 0.0, 1e-14);
    for (int k = 2; k <= 6; ++k) EXPECT_EQ(laplace_of_measure(make_lemma_params(1.3, k, 1, 2.0), 0.0, 1), cplx(0));
    EXPECT_EQ(laplace_of_measure(p, 0.0, 0), cplx(0));
}

TEST(Laplace, MatchesHighPrecisionAtPeakK8)
{
    LemmaParams p = lemma_for(8);
    oracle::DirectSum ds(p);
    double t = p.t_peak();
    EXPECT_LT(oracle::rel_err(laplace_of_measure(p, t, 0), ds.laplace(t, 0)), 1e-8);
    EXPECT_LT(oracle::rel_err(laplace_of_measure(p, t, 1), ds.laplace(t, 1)), 1e-8);
}

TEST(Laplace, OracleEquivalenceRandom)
{
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> kd(1, 10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst0 = 0, worst1 = 0;
    for (int i = 0; i < 100; ++i) {
        int k = kd(rng);
        double d = 0.25 + 4 * u(rng);
        LemmaParams p = make_lemma_params(d, k, 1 + (i % 2), std::log(5.0) + 6 * u(rng));
        oracle::DirectSum ds(p);
        double t = 4 * p.t_peak() * u(rng) + 1e-3;
        worst0 = std::max(worst0, oracle::rel_err(laplace_of_measure(p, t, 0), ds.laplace(t, 0)));
        worst1 = std::max(worst1, oracle::rel_err(laplace_of_measure(p, t, 1), ds.laplace(t, 1)));
    }
    EXPECT_LT(worst0, 1e-8);
    EXPECT_LT(worst1, 1e-8);
}

TEST(Cauchy, KOneHandValue)
{
    LemmaParams p = make_lemma_params(1.0, 1, 1, std::log(9.0));
    // A(z - w) = 2
    lcplx z = p.w() + static_cast<long double>(2.0 / p.A);
    cplx got = cauchy_log(p, {0, static_cast<double>(z.real()), static_cast<double>(z.imag())}).value();
    double expect = std::exp(p.log_tau) / 9.0 * 2 * p.A / 3;
    EXPECT_NEAR(got.real(), expect, 1e-13 * expect);
    EXPECT_NEAR(got.imag(), 0.0, 1e-13 * expect);
}

TEST(Cauchy, OracleEquivalenceOnImaginaryAxis)
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> kd(1, 10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        int k = kd(rng);
        double d = 0.25 + 4 * u(rng);
        LemmaParams p = make_lemma_params(d, k, 1, std::log(20.0) + 6 * u(rng));
        oracle::DirectSum ds(p);
        double eta = (u(rng) - 0.5) * 20 * d;
        cplx got = cauchy_log(p, {p.R, 0.0, eta}).value();
        worst = std::max(worst, oracle::rel_err(got, ds.cauchy(0.0, p.R + eta)));
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(Cauchy, NearUnitDenominator)
{
    // |A(z - w)|^{k+1} close to 1 but off the atoms
    LemmaParams p = make_lemma_params(2.0, 4, 1, std::log(50.0));
    oracle::DirectSum ds(p);
    for (double r : {0.9, 0.99, 1.001, 1.05}) {
        lcplx u = std::polar(static_cast<long double>(r), kTwoPiL / 10);
        lcplx zw = u / static_cast<long double>(p.A);
        double x = static_cast<double>(zw.real()) - p.delta, eta = static_cast<double>(zw.imag());
        cplx got = cauchy_log(p, {p.R, x, eta}).value();
        EXPECT_LT(oracle::rel_err(got, ds.cauchy(x, p.R + eta)), 1e-10) << r;
    }
}

TEST(Cauchy, MomentCancellationOnPositiveReals)
{
    for (int k : {1, 3, 8}) {
        LemmaParams p = make_lemma_params(1.0, k, 1, std::log(30.0));
        double first = 0, hi = 0;
        for (double x : log_grid(1e3, 1e9, 40)) {
            double v = std::exp(cauchy_log(p, {0, x, 0.0}).logmod) * x * x;
            ASSERT_TRUE(std::isfinite(v));
            if (first == 0) first = v;
            hi = std::max(hi, v);
        }
        EXPECT_LE(hi, 1.01 * first) << k;
    }
}

TEST(Cauchy, PoleRaises)
{
    LemmaParams p = make_lemma_params(1.0, 3, 1, std::log(10.0));
    lcplx a = atoms_of(p).atoms[2].loc;
    ZPoint z{p.R, static_cast<double>(a.real()), static_cast<double>(a.imag() - p.R)};
    EXPECT_THROW(cauchy_log(p, z), pole_error);
}

TEST(Cauchy, LaplaceQuadratureConsistency)
{
    for (int k : {2, 5, 9}) {
        LemmaParams p = make_lemma_params(1.0, k, 1, std::log(40.0));
        const double xr = p.delta / 2;
        for (double eta : {0.0, 1.5}) {
            ZPoint z{p.R, xr, eta};
            // e^{-(Re z + delta - 1/A) T} below 1e-9 relative
            const double T = 40.0 / (xr + p.delta - 1 / p.A);
            const int n = 40000;
            const double h = T / n;
            auto g = [&](double t) {
                cplx e = std::exp(cplx(-xr * t, 0)) * std::polar(1.0, -static_cast<double>(std::fmod((p.R + eta) * t, kTwoPiL)));
                return laplace_of_measure(p, t) * e;
            };
            cplx s = g(0) + g(T);
            for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(i * h);
            s *= h / 3;
            cplx c = cauchy_log(p, z).value();
            EXPECT_LT(std::abs(s - c) / std::abs(c), 1e-4) << "k=" << k << " eta=" << eta;
        }
    }
}

TEST(LemmaBounds, SquareRatePasses)
{
    std::vector<double> c45;
    for (int k : {20, 40, 80}) {
        LemmaParams p = lemma_for(k);
        LemmaBoundReport r = verify_lemma_bounds(p, kOne, kSq, 0.05);
        EXPECT_TRUE(r.all_passed()) << "k=" << k;
        c45.push_back(r.get("4.5").constant);
        // outside the band the Cauchy transform is below eps
        EXPECT_LE(r.get("4.1").outside, 0.05);
    }
    double mean = (c45[0] + c45[1] + c45[2]) / 3;
    for (double c : c45) EXPECT_NEAR(c / mean, 1.0, 0.2);
}

TEST(LemmaBounds, QuarterPeakSmallness)
{
    for (int k : {60, 80, 120}) {
        LemmaParams p = lemma_for(k);
        double t = k / (4 * p.delta);
        double v = std::exp(laplace_log(p, t).logmod + p.log_R);
        EXPECT_LE(v, std::pow(std::exp(1.0) / 4, k / 2.0)) << k;
    }
}

TEST(KTildeDoublePrime, Examples)
{
    RateSpec a = k_tilde_doubleprime(kOne, kSq, 2.0);
    for (double s : {0.0, 0.5, 1.0, 3.0, 1e4}) EXPECT_NEAR(value(a, s), std::max(1.0, s), 1e-12 * std::max(1.0, s));
    RateSpec b = k_tilde_doubleprime(rate::max1_power(1.0), kSq, 1.5);
    for (double s : {1.0, 2.0, 10.0, 1e5}) EXPECT_NEAR(value(b, s), s, 1e-9 * s);
    // K with a dip: 1 v s^2 outside [2, 3], 1 inside
    RateSpec dip = rate::piecewise_linear({0, 1, 2, 2.5, 3, 4, 1e9}, {1, 1, 4, 1, 9, 16, 1e18});
    RateSpec c = k_tilde_doubleprime(kOne, dip, 1.2);
    double prev = 0;
    for (double s = 0; s <= 6; s += 0.01) {
        double v = value(c, s);
        EXPECT_GE(v, prev - 1e-12) << s;
        prev = v;
    }
    EXPECT_LE(k_tilde_doubleprime_excess(kOne, kSq, 1.3, log_grid(1, 1e6, 30)), 1e-12);
}

TEST(Assemble, ThresholdAndFit)
{
    AlphaBetaFit fit = fit_alpha_beta(kOne, kSq);
    EXPECT_TRUE(std::isinf(fit.beta));
    EXPECT_NEAR(fit.alpha, 1.98, 1e-9);
    EXPECT_LT(fit.c, 1.5);
    EXPECT_NEAR(fit.c, c_alpha_beta(1.98, kInf), 1e-12);
    try {
        assemble_f(kOne, kSq, 1.2, 0.5, 2);
        FAIL() << "expected threshold error";
    } catch (const threshold_error& e) {
        EXPECT_NE(std::string(e.what()).find(std::to_string(fit.c)), std::string::npos);
        EXPECT_DOUBLE_EQ(e.c_ab, fit.c);
    }
}

TEST(Assemble, SingleTermIsOneMeasure)
{
    CounterexampleFunction f = assemble_f(kOne, kSq, 1.5, 0.5, 1);
    ASSERT_EQ(f.terms.size(), 1u);
    const LemmaParams& p = f.terms[0];
    for (double t : {0.5, p.t_peak(), 3 * p.t_peak()}) EXPECT_EQ(f.f(t), laplace_of_measure(p, t));
    ZPoint z{p.R, -0.01, 0.7};
    EXPECT_EQ(f.fhat_log(z).value(), cauchy_log(p, z).value());
}

TEST(Assemble, DisjointBandsAndWindows)
{
    CounterexampleFunction f = assemble_f(kOne, kSq, 1.5, 0.5, 5);
    ASSERT_EQ(f.terms.size(), 5u);
    for (std::size_t n = 0; n + 1 < f.terms.size(); ++n) {
        const auto &a = f.terms[n], &b = f.terms[n + 1];
        EXPECT_GT(b.R - 2 * f.delta, a.R + 2 * f.delta);
        EXPECT_GT(b.window_lo(), a.window_hi());
        EXPECT_DOUBLE_EQ(f.eps[n], std::ldexp(0.5, -int(n) - 1));
        EXPECT_DOUBLE_EQ(f.t_n[n], a.k / f.delta);
    }
    EXPECT_NEAR(f.gamma, 0.5 * (1 + 1.5 / f.fit.c), 1e-15);
}

TEST(Optimality, UpperFiniteLowerPositive)
{
    CounterexampleFunction f = assemble_f(kOne, kSq, 1.5, 0.5, 4);
    OptimalityReport r = verify_optimality(f, 1.5, default_omega_grid(f, 3000), Probe{kOne, 0.0});
    EXPECT_TRUE(r.check_passed("C_hat_finite"));
    EXPECT_TRUE(r.check_passed("lower_bound_positive"));
    EXPECT_TRUE(r.check_passed("probe_lower_bound"));
    for (const auto& row : r.rows) {
        EXPECT_GE(row.value, r.c_min * (1 - f.eps0));
        // proof chain: cross terms stay below eps0 of the own term
        EXPECT_GE(row.chain_lower, (1 - f.eps0) * row.value);
    }
    // theta = 0 probe: ratio to sqrt(M_K1(R_n)) settles to a constant
    ASSERT_EQ(r.probe_rows.size(), 4u);
    EXPECT_NEAR(r.probe_rows[3].ratio / r.probe_rows[2].ratio, 1.0, 0.05);
}

TEST(Optimality, ProbeWithPolynomialMtilde)
{
    CounterexampleFunction f = assemble_f(kOne, kSq, 1.5, 0.5, 3);
    OptimalityReport r = verify_optimality(f, 1.5, default_omega_grid(f, 600), Probe{rate::max1_power(1.0), 1.0});
    EXPECT_TRUE(r.check_passed("probe_lower_bound"));
    EXPECT_GT(r.probe_c, 0.0);
}
