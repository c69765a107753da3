#pragma once

#include <span>
#include <vector>

namespace entlab {

// Parameters of the purity and von Neumann diffusion solutions. omega is
// the width of the trace filter; S3_mean, t = 1 + <T_1> and R0_mean are
// slow ensemble averages supplied from samples.
struct TheoryContext {
    int N = 2;
    int N_nu = 2;
    int beta = 1;
    double gamma = 0.25;
    double omega = 16.0;
    double S3_mean = 0.5;
    double t = 1.5;
    double R0_mean = 2.0;
    std::vector<double> purity_coeffs;
    std::vector<double> vn_coeffs;

    void validate() const;

    double nu() const { return 0.5 * (N_nu - N + 1); }
    double mu0() const;
    // Purity: Psi solves dPsi/dY = 2 omega Psi'' + eta x Psi' + purity_pde_constant() Psi
    // with eta = 4 omega; Lambda = purity_rate() * (Y - Y0).
    double purity_eta() const { return 4.0 * omega; }
    double purity_rate() const { return 8.0 * omega * mu0(); }
    double purity_pde_constant() const { return purity_rate() + purity_eta(); }
    double purity_scale() const;  // dx/dS2

    // von Neumann: f solves df/dY = (t - 2R1) f'' + (a1 R1 + b1) f' + d0 f.
    double vn_a1() const { return 2.0 * gamma + 2.0 * omega; }
    double vn_b1() const;
    double vn_d0() const;
    double vn_alpha() const { return 0.25 * (vn_a1() * t + 2.0 * vn_b1() + 4.0); }
    double vn_rate() const;  // Lambda = vn_rate() * (Y - Y0)
};

// Default omega = 4 N^2.
TheoryContext make_theory_context(int N, int N_nu, int beta, double gamma, double S3_mean,
                                  double t, double R0_mean, double omega = 0.0);

// Purity basis e^{-x^2} 1F1(-mu; 1/2; x^2).
double purity_basis(double mu, double x);

double purity_x(const TheoryContext& ctx, double S2);
double purity_psi(const TheoryContext& ctx, double x, double Lambda);
double purity_density(const TheoryContext& ctx, double S2, double Lambda);

// Density on a grid of S2 values with negatives clipped and unit trapezoid mass.
std::vector<double> purity_density_table(const TheoryContext& ctx, std::span<const double> S2,
                                         double Lambda);

// Rescaled entropy x = -omega (t - 2 R1).
double vn_x(const TheoryContext& ctx, double R1);
double vn_basis(const TheoryContext& ctx, int m, double x);
double vn_psi(const TheoryContext& ctx, double x, double Lambda);
double vn_density(const TheoryContext& ctx, double R1, double Lambda);
std::vector<double> vn_density_table(const TheoryContext& ctx, std::span<const double> R1,
                                     double Lambda);

// Large-omega reduced form with 1F1 replaced by e^{(m+1) x / t}.
double vn_psi_large_omega(const TheoryContext& ctx, double x, double Lambda);

// Least-squares projection of a density given on a grid of rescaled
// variables onto the first m_max basis functions (trapezoid weights).
struct Calibration {
    std::vector<double> coeffs;
    double relative_residual = 0.0;
};
Calibration calibrate_purity(const TheoryContext& ctx, std::span<const double> x,
                             std::span<const double> psi, int m_max = 32);
Calibration calibrate_vn(const TheoryContext& ctx, std::span<const double> x,
                         std::span<const double> psi, int m_max = 32);

// Unnormalized log density of the zero-flux steady state of the eigenvalue
// flow on the unit-trace simplex: sum beta ln|l_m - l_n| + (beta nu - 1) sum ln l
// - 2 gamma sum l. Returns -inf for coincident eigenvalues.
double stationary_logdensity(std::span<const double> lambdas, int beta, double nu, double gamma);

// Exponential relaxation solutions, with Y0 = Y_grid.front():
//   <S2>' = -b - eta <S2>,  (sigma^2 S2)' = 2a - 2 eta sigma^2,  (sigma^2 R1)' = 2 - 2a sigma^2.
std::vector<double> moment_ode_s2(std::span<const double> Y_grid, double init, double b_coef,
                                  double eta);
std::vector<double> variance_ode_s2(std::span<const double> Y_grid, double init, double a_coef,
                                    double eta);
std::vector<double> variance_ode_r1(std::span<const double> Y_grid, double init, double a_coef);

}  // namespace entlab
