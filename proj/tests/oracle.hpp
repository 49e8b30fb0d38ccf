#pragma once

// High-precision direct atom sums: the independent route for the factored
// Laplace series and the closed-form Cauchy transform.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <tauber/counterexample.hpp>

namespace oracle {

using mpf = boost::multiprecision::cpp_bin_float_100;
using mpc = boost::multiprecision::cpp_complex_100;

struct DirectSum {
    std::vector<mpc> weight, loc;

    explicit DirectSum(const tauber::LemmaParams& p)
    {
        const mpf pi = boost::math::constants::pi<mpf>();
        const mpf d = p.delta, A = p.A, R = mpf(p.R);
        const mpf tau = exp(-log(mpf(p.k)) / 2 + p.k * log(d * A));
        const mpf scale = tau / pow(R, p.m);
        for (int j = 0; j <= p.k; ++j) {
            mpf th = 2 * pi * j / (p.k + 1);
            mpc qj(cos(th), sin(th));
            weight.push_back(scale * qj);
            loc.push_back(mpc(-d, R) + qj / A);
        }
    }

    std::complex<double> laplace(double t, int order) const
    {
        mpc s = 0;
        for (std::size_t j = 0; j < loc.size(); ++j) {
            mpc term = weight[j] * exp(mpf(t) * loc[j]);
            s += order == 1 ? term * loc[j] : term;
        }
        return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
    }

    std::complex<double> cauchy(double x, long double y) const
    {
        mpc z{mpf(x), mpf(y)}, s = 0;
        for (std::size_t j = 0; j < loc.size(); ++j) s += weight[j] / (z - loc[j]);
        return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
    }
};

inline double rel_err(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) / std::abs(b); }

}  // namespace oracle
