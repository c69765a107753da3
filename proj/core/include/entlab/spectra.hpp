#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "entlab/ensembles.hpp"
#include "entlab/rng.hpp"

namespace entlab {

// Normalized Schmidt eigenvalues, sorted in decreasing order, summing to one.
struct SchmidtSpectrum {
    std::vector<double> lambdas;
    double nu = 0.5;

    int N() const { return static_cast<int>(lambdas.size()); }
    void check(double tol = 1e-12) const;
};

// Normalizes and sorts arbitrary non-negative weights.
SchmidtSpectrum make_spectrum(std::vector<double> weights, double nu);

// Squared singular values divided by their sum. Never forms C C^dagger.
SchmidtSpectrum schmidt_spectrum(const StateMatrix& m);

// The fully separable state (1, 0, ..., 0).
SchmidtSpectrum separable_spectrum(int N, double nu);

struct SdeParams {
    double gamma = 0.25;
    int beta = 1;
    double dY = 0.0;               // 0 selects 1e-4 / N^2
    double record_interval = 0.0;  // 0 records only the endpoints
    double eps = 1e-10;            // clip for |lambda_n - lambda_m|
    int max_redraws = 10;
};

struct SdeStats {
    std::uint64_t steps = 0;
    std::uint64_t attempts = 0;
    std::uint64_t rejected = 0;
    std::uint64_t regularized = 0;
    std::uint64_t shrunk = 0;

    double rejection_rate() const
    {
        return attempts ? static_cast<double>(rejected) / static_cast<double>(attempts) : 0.0;
    }
};

struct SpectrumTrajectory {
    std::vector<double> Y;
    std::vector<SchmidtSpectrum> states;
    SdeStats stats;
};

// Euler-Maruyama integration of the eigenvalue flow
//   d lambda_n = 4 [sum_{m != n} beta lambda_n / (lambda_n - lambda_m)
//                   + beta nu - 2 gamma lambda_n] dY + sqrt(8 lambda_n) dW_n
// projected back onto the unit-trace simplex after every step.
SpectrumTrajectory sde_evolve(const SchmidtSpectrum& init, double Y_start, double Y_end,
                              const SdeParams& params, Engine& rng);

void write_trajectory_csv(std::ostream& os, const SpectrumTrajectory& traj);

}  // namespace entlab
