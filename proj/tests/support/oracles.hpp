#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "entlab/theory.hpp"

namespace entlab::testing {

// 1F1 by direct power series in 120-digit arithmetic (no transforms). The
// precision covers the ~55 digits of cancellation at mu = 1000, x2 = 4.
inline double hyp1f1_oracle(double a, double b, double x)
{
    using mp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<120>>;
    mp sum = 1, term = 1;
    const mp ma = a, mb = b, mx = x;
    for (int k = 0; k < 200000; ++k) {
        term *= (ma + k) * mx / ((mb + k) * (k + 1));
        sum += term;
        if (term == 0) break;
        if (k > std::abs(x) + std::abs(a) + std::abs(b) && abs(term) < mp("1e-60") * abs(sum)) break;
    }
    return static_cast<double>(sum);
}

// Richardson-extrapolated central differences (O(h^4)).
inline double d1(const std::function<double(double)>& f, double x, double h)
{
    auto c = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
    return (4.0 * c(h / 2) - c(h)) / 3.0;
}

inline double d2(const std::function<double(double)>& f, double x, double h)
{
    double f0 = f(x);
    auto c = [&](double s) { return (f(x + s) - 2.0 * f0 + f(x - s)) / (s * s); };
    return (4.0 * c(h / 2) - c(h)) / 3.0;
}

// Residual |lhs - rhs| divided by the sum of term magnitudes.
struct Residual {
    double scaled = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

// dPsi/dY = 2 omega Psi_xx + 4 omega x Psi_x + c Psi, Lambda = rate (Y - Y0).
inline Residual purity_pde_residual(const TheoryContext& ctx, double x, double Lambda)
{
    const double rate = ctx.purity_rate();
    auto in_x = [&](double xx) { return purity_psi(ctx, xx, Lambda); };
    auto in_L = [&](double L) { return purity_psi(ctx, x, L); };
    double hL = 1e-3 * std::max(Lambda, 1e-2);
    double dY = rate * d1(in_L, Lambda, hL);
    double hx = 1e-3;
    double t2 = 2.0 * ctx.omega * d2(in_x, x, hx);
    double t1 = ctx.purity_eta() * x * d1(in_x, x, hx);
    double t0 = ctx.purity_pde_constant() * in_x(x);
    Residual r;
    r.lhs = dY;
    r.rhs = t2 + t1 + t0;
    r.scaled = std::abs(r.lhs - r.rhs) / (std::abs(dY) + std::abs(t2) + std::abs(t1) + std::abs(t0));
    return r;
}

// df/dY = (t - 2R1) f'' + (a1 R1 + b1) f' + d0 f, f = 2 omega Psi_v(x(R1)).
inline Residual vn_pde_residual(const TheoryContext& ctx, double R1, double Lambda)
{
    const double rate = ctx.vn_rate();
    auto in_R = [&](double r) { return vn_density(ctx, r, Lambda); };
    auto in_L = [&](double L) { return vn_density(ctx, R1, L); };
    double hL = 1e-3 * std::max(Lambda, 1e-2);
    double dY = rate * d1(in_L, Lambda, hL);
    double hR = 2e-3 / (2.0 * ctx.omega);
    double t2 = (ctx.t - 2.0 * R1) * d2(in_R, R1, hR);
    double t1 = (ctx.vn_a1() * R1 + ctx.vn_b1()) * d1(in_R, R1, hR);
    double t0 = ctx.vn_d0() * in_R(R1);
    Residual r;
    r.lhs = dY;
    r.rhs = t2 + t1 + t0;
    r.scaled = std::abs(r.lhs - r.rhs) / (std::abs(dY) + std::abs(t2) + std::abs(t1) + std::abs(t0));
    return r;
}

// Small random contexts where the series bases are evaluable.
inline TheoryContext random_context(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    TheoryContext c;
    c.N = 2 + static_cast<int>(u(rng) * 2.0);
    c.N_nu = c.N + static_cast<int>(u(rng) * 2.0);
    c.beta = u(rng) < 0.5 ? 1 : 2;
    c.gamma = 0.1 + 0.3 * u(rng);
    c.omega = 4.0 * c.N * c.N * (1.0 + 0.5 * u(rng));
    c.S3_mean = 0.3 + 0.5 * u(rng);
    c.t = 1.2 + 0.8 * u(rng);
    c.R0_mean = 1.0 + 2.0 * u(rng);
    const int m_max = 4;
    for (int m = 0; m < m_max; ++m) {
        c.purity_coeffs.push_back((0.5 + u(rng)) * std::pow(0.5, m));
        c.vn_coeffs.push_back((0.5 + u(rng)) * std::pow(0.5, m));
    }
    c.validate();
    return c;
}

}  // namespace entlab::testing
