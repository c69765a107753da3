#pragma once

#include <vector>

#include "entlab/spectra.hpp"

namespace entlab {

// S_k = sum lambda^k for k = 1..k_max (index 0 holds S_1).
std::vector<double> moments(const SchmidtSpectrum& s, int k_max);

// Renyi entropy ln(S_alpha) / (1 - alpha), alpha > 0, alpha != 1.
double renyi(const SchmidtSpectrum& s, double alpha);

// -sum lambda ln lambda with 0 ln 0 = 0.
double von_neumann(const SchmidtSpectrum& s);

// Eigenvalues below this threshold are treated as zero by log_moments.
inline constexpr double kLogMomentFloor = 1e-300;

struct LogMoments {
    double R0 = 0.0;          // -sum ln lambda over included eigenvalues
    std::vector<double> T;    // T_k = sum lambda^k (ln lambda)^(k+1), index 0 holds T_1
    int excluded = 0;
};

LogMoments log_moments(const SchmidtSpectrum& s, int k_max);

struct EntropyRecord {
    std::vector<double> S;    // S_1..S_k_max
    double R1 = 0.0;
    double R2 = 0.0;
    double R0 = 0.0;
    std::vector<double> T;
    int excluded = 0;
};

EntropyRecord entropy_record(const SchmidtSpectrum& s, int k_max = 3);

}  // namespace entlab
