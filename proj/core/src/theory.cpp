#include "entlab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "entlab/errors.hpp"
#include "entlab/kummer.hpp"
#include "entlab/numeric.hpp"

namespace entlab {
namespace {

constexpr double kBasisTolerance = 1e-7;

}  // namespace

void TheoryContext::validate() const
{
    if (N < 1 || N_nu < N) throw InvalidArgument("context requires 1 <= N <= N_nu");
    if (beta != 1 && beta != 2) throw InvalidArgument("beta must be 1 or 2");
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    if (!(omega > 0.5 * beta * N * N_nu))
        throw InvalidArgument("omega must exceed beta N N_nu / 2");
    if (!(S3_mean > 0.0)) throw InvalidArgument("<S3> must be positive");
    if (!(t > 0.0)) throw InvalidArgument("t must be positive");
    if (!std::isfinite(R0_mean)) throw InvalidArgument("<R0> must be finite");
}

double TheoryContext::mu0() const
{
    return (2.0 * omega - static_cast<double>(beta) * N * N_nu) / 16.0;
}

double TheoryContext::purity_scale() const
{
    return std::sqrt(omega / (2.0 * S3_mean));
}

double TheoryContext::vn_b1() const
{
    return beta * (N_nu - nu()) * N - 0.5 * beta * N_nu * R0_mean + N + 2.0 * omega
           - 2.0 * gamma - 4.0;
}

double TheoryContext::vn_d0() const
{
    return 0.5 * beta * omega * N * N_nu + omega * omega + (2.0 - 2.0 * gamma) * omega
           - 2.0 * gamma;
}

double TheoryContext::vn_rate() const
{
    return std::abs(vn_d0());
}

TheoryContext make_theory_context(int N, int N_nu, int beta, double gamma, double S3_mean,
                                  double t, double R0_mean, double omega)
{
    TheoryContext c;
    c.N = N;
    c.N_nu = N_nu;
    c.beta = beta;
    c.gamma = gamma;
    c.S3_mean = S3_mean;
    c.t = t;
    c.R0_mean = R0_mean;
    c.omega = omega > 0.0 ? omega : 4.0 * N * N;
    c.validate();
    return c;
}

double purity_basis(double mu, double x)
{
    // e^{-x^2} 1F1(-mu; 1/2; x^2) = 1F1(mu + 1/2; 1/2; -x^2), bounded by ~1.
    KummerSeries r;
    try {
        r = kummer_1f1_series(mu + 0.5, 0.5, -x * x);
    } catch (const ConvergenceError& e) {
        throw OutOfRegime(std::string("purity basis: ") + e.what());
    }
    if (r.abs_error > kBasisTolerance)
        throw OutOfRegime("purity basis not evaluable in double precision at this mu, x");
    return r.value;
}

namespace {

void check_lambda(double Lambda)
{
    if (!(Lambda >= 0.0)) throw InvalidArgument("Lambda must be non-negative");
}

// Sum c_m e^{-m Lambda} basis(m), stopping once the remaining coefficient
// weight cannot change the partial sum by more than 1e-12 relative
// (basis magnitudes are taken as bounded by one).
template <class Basis>
double truncated_series(const std::vector<double>& coeffs, double Lambda, Basis basis)
{
    if (coeffs.empty()) throw InvalidArgument("coefficient list is empty");
    const std::size_t n = coeffs.size();
    std::vector<double> tail(n + 1, 0.0);
    for (std::size_t m = n; m-- > 0;)
        tail[m] = tail[m + 1] + std::abs(coeffs[m]) * std::exp(-static_cast<double>(m) * Lambda);
    CompensatedSum<double> sum;
    for (std::size_t m = 0; m < n; ++m) {
        if (m > 0 && tail[m] < 1e-12 * std::abs(sum.value())) break;
        double w = coeffs[m] * std::exp(-static_cast<double>(m) * Lambda);
        if (w == 0.0) continue;
        sum.add(w * basis(static_cast<int>(m)));
    }
    return sum.value();
}

double trapezoid(std::span<const double> x, std::span<const double> y)
{
    CompensatedSum<double> s;
    for (std::size_t i = 1; i < x.size(); ++i) s.add(0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]));
    return s.value();
}

std::vector<double> clip_normalize(std::span<const double> grid, std::vector<double> v)
{
    for (double& d : v)
        if (!(d > 0.0)) d = 0.0;
    double mass = trapezoid(grid, v);
    if (!(mass > 0.0)) throw DegenerateInput("density has no positive mass on the grid");
    for (double& d : v) d /= mass;
    return v;
}

void check_grid(std::span<const double> x)
{
    if (x.size() < 2) throw InvalidArgument("grid needs at least two points");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw InvalidArgument("grid must be strictly increasing");
}

Calibration project(std::span<const double> x, std::span<const double> psi, int m_max,
                    const std::function<double(int, double)>& basis)
{
    check_grid(x);
    if (psi.size() != x.size()) throw InvalidArgument("grid and density sizes differ");
    if (m_max < 1) throw InvalidArgument("m_max must be positive");
    const auto n = static_cast<Eigen::Index>(x.size());
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        double h = 0.5 * (x[i] - x[i - 1]);
        w[i - 1] += h;
        w[i] += h;
    }
    Eigen::MatrixXd A(n, m_max);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double sw = std::sqrt(w[static_cast<std::size_t>(i)]);
        for (int m = 0; m < m_max; ++m) A(i, m) = sw * basis(m, x[static_cast<std::size_t>(i)]);
        rhs(i) = sw * psi[static_cast<std::size_t>(i)];
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    cod.setThreshold(1e-13);
    Eigen::VectorXd c = cod.solve(rhs);
    Calibration out;
    out.coeffs.assign(c.data(), c.data() + c.size());
    double denom = rhs.norm();
    out.relative_residual = denom > 0.0 ? (A * c - rhs).norm() / denom : 0.0;
    return out;
}

}  // namespace

double purity_x(const TheoryContext& ctx, double S2)
{
    return ctx.purity_scale() * S2;
}

double purity_psi(const TheoryContext& ctx, double x, double Lambda)
{
    ctx.validate();
    check_lambda(Lambda);
    const double mu0 = ctx.mu0();
    return truncated_series(ctx.purity_coeffs, Lambda,
                            [&](int m) { return purity_basis(mu0 * (m + 1), x); });
}

double purity_density(const TheoryContext& ctx, double S2, double Lambda)
{
    return purity_psi(ctx, purity_x(ctx, S2), Lambda) * ctx.purity_scale();
}

std::vector<double> purity_density_table(const TheoryContext& ctx, std::span<const double> S2,
                                         double Lambda)
{
    check_grid(S2);
    std::vector<double> v;
    v.reserve(S2.size());
    for (double s : S2) v.push_back(purity_density(ctx, s, Lambda));
    return clip_normalize(S2, std::move(v));
}

double vn_x(const TheoryContext& ctx, double R1)
{
    return -ctx.omega * (ctx.t - 2.0 * R1);
}

double vn_basis(const TheoryContext& ctx, int m, double x)
{
    const double alpha = ctx.vn_alpha();
    const double a1 = ctx.vn_a1();
    const double dm = ctx.vn_d0() * (m + 1);
    const double z = a1 * x / (4.0 * ctx.omega);
    double ax = std::abs(x);
    if (ax == 0.0) return alpha > 0.0 ? 0.0 : 1.0 / (2.0 * ctx.omega);
    double pref = std::exp(alpha * std::log(4.0 * ax / ctx.omega)) / (2.0 * ctx.omega);
    KummerSeries r;
    try {
        r = kummer_1f1_series(alpha + dm / a1, alpha + 1.0, z);
    } catch (const ConvergenceError& e) {
        throw OutOfRegime(std::string("von Neumann basis: ") + e.what());
    }
    if (r.abs_error > kBasisTolerance * std::max(1.0, std::abs(r.value)))
        throw OutOfRegime("von Neumann basis not evaluable in double precision");
    return pref * r.value;
}

double vn_psi(const TheoryContext& ctx, double x, double Lambda)
{
    ctx.validate();
    check_lambda(Lambda);
    return truncated_series(ctx.vn_coeffs, Lambda, [&](int m) { return vn_basis(ctx, m, x); });
}

double vn_density(const TheoryContext& ctx, double R1, double Lambda)
{
    // dx/dR1 = 2 omega.
    return vn_psi(ctx, vn_x(ctx, R1), Lambda) * 2.0 * ctx.omega;
}

std::vector<double> vn_density_table(const TheoryContext& ctx, std::span<const double> R1,
                                     double Lambda)
{
    check_grid(R1);
    std::vector<double> v;
    v.reserve(R1.size());
    for (double r : R1) v.push_back(vn_density(ctx, r, Lambda));
    return clip_normalize(R1, std::move(v));
}

double vn_psi_large_omega(const TheoryContext& ctx, double x, double Lambda)
{
    ctx.validate();
    check_lambda(Lambda);
    if (ctx.vn_coeffs.empty()) throw InvalidArgument("coefficient list is empty");
    const double alpha = ctx.vn_alpha();
    double ax = std::abs(x);
    double log_pref = ax > 0.0 ? alpha * std::log(4.0 * ax / ctx.omega)
                               : -std::numeric_limits<double>::infinity();
    double base = std::exp(log_pref + x + x / ctx.t) / (2.0 * ctx.omega);
    return truncated_series(ctx.vn_coeffs, Lambda, [&](int m) {
               return std::exp(m * x / ctx.t);
           }) * base;
}

Calibration calibrate_purity(const TheoryContext& ctx, std::span<const double> x,
                             std::span<const double> psi, int m_max)
{
    ctx.validate();
    const double mu0 = ctx.mu0();
    return project(x, psi, m_max, [mu0](int m, double xi) { return purity_basis(mu0 * (m + 1), xi); });
}

Calibration calibrate_vn(const TheoryContext& ctx, std::span<const double> x,
                         std::span<const double> psi, int m_max)
{
    ctx.validate();
    return project(x, psi, m_max, [&ctx](int m, double xi) { return vn_basis(ctx, m, xi); });
}

double stationary_logdensity(std::span<const double> lambdas, int beta, double nu, double gamma)
{
    if (lambdas.empty()) throw InvalidArgument("empty spectrum");
    std::vector<double> l(lambdas.begin(), lambdas.end());
    // Sorting makes the result exactly permutation invariant.
    std::sort(l.begin(), l.end());
    for (double v : l)
        if (!(v > 0.0)) throw InvalidArgument("stationary density needs positive eigenvalues");
    CompensatedSum<double> s;
    for (std::size_t i = 0; i < l.size(); ++i) {
        for (std::size_t j = i + 1; j < l.size(); ++j) {
            double d = l[j] - l[i];
            if (d == 0.0) return -std::numeric_limits<double>::infinity();
            s.add(beta * std::log(d));
        }
        s.add((beta * nu - 1.0) * std::log(l[i]));
        s.add(-2.0 * gamma * l[i]);
    }
    return s.value();
}

namespace {

void check_time_grid(std::span<const double> Y)
{
    if (Y.empty()) throw InvalidArgument("empty Y grid");
    for (std::size_t i = 1; i < Y.size(); ++i)
        if (Y[i] < Y[i - 1]) throw InvalidArgument("Y grid must be non-decreasing");
}

// Solution of u' = r (u_inf - u), u(Y0) = init.
std::vector<double> relax(std::span<const double> Y, double init, double u_inf, double r)
{
    check_time_grid(Y);
    std::vector<double> out;
    out.reserve(Y.size());
    const double A = u_inf - init;
    for (double y : Y) out.push_back(u_inf - A * std::exp(-r * (y - Y.front())));
    return out;
}

}  // namespace

std::vector<double> moment_ode_s2(std::span<const double> Y_grid, double init, double b_coef,
                                  double eta)
{
    if (!(eta > 0.0)) throw InvalidArgument("eta must be positive");
    return relax(Y_grid, init, -b_coef / eta, eta);
}

std::vector<double> variance_ode_s2(std::span<const double> Y_grid, double init, double a_coef,
                                    double eta)
{
    if (!(eta > 0.0)) throw InvalidArgument("eta must be positive");
    return relax(Y_grid, init, a_coef / eta, 2.0 * eta);
}

std::vector<double> variance_ode_r1(std::span<const double> Y_grid, double init, double a_coef)
{
    if (!(a_coef > 0.0)) throw InvalidArgument("a must be positive");
    return relax(Y_grid, init, 1.0 / a_coef, 2.0 * a_coef);
}

}  // namespace entlab
