#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>

#include <Eigen/Dense>

#include "entlab/rng.hpp"

namespace entlab {

enum class Family { BE, PE, EE, Custom };

std::string family_name(Family f);
Family parse_family(const std::string& name);

// Family parameters: BE uses mu, PE and EE use a and b.
struct FamilyParams {
    double mu = 0.0;
    double a = 0.0;
    double b = 0.0;
};

// Gaussian ensemble of N x N_nu state matrices. h holds the per-entry
// variances of the real (and, for beta = 2, the imaginary) part; bmean the
// means of the real part.
struct EnsembleSpec {
    int N = 0;
    int N_nu = 0;
    int beta = 1;
    Eigen::MatrixXd h;
    Eigen::MatrixXd bmean;
    Family family = Family::Custom;
    FamilyParams params;

    void validate() const;
    bool has_zero_variance_columns() const;
    double nu() const { return 0.5 * (N_nu - N + 1); }
    std::string id() const;
};

EnsembleSpec build_family(Family family, const FamilyParams& params, int N, int N_nu,
                          int beta = 1);

EnsembleSpec make_custom(Eigen::MatrixXd h, Eigen::MatrixXd bmean, int beta = 1);

// Ergodic limit: every variance equal to one.
EnsembleSpec uniform_spec(int N, int N_nu, int beta = 1);

struct StateMatrix {
    std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> entries;
    std::string spec_id;

    int rows() const;
    int cols() const;
    bool is_complex() const { return entries.index() == 1; }
};

StateMatrix sample_state_matrix(const EnsembleSpec& spec, Engine& rng);

// Two-mode channel: alpha' = a alpha + b gamma, gamma' = c alpha + d gamma
// with independent zero-mean Gaussian a, b, c, d.
struct ChannelSigmas {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double d = 1.0;
};

std::pair<double, double> channel_demo_sample(double alpha, double gamma,
                                              const ChannelSigmas& sig, Engine& rng);

// Exact marginal density of alpha' (Gaussian, variance alpha^2 sa^2 + gamma^2 sb^2).
double channel_marginal_density(double value, double alpha, double gamma,
                                const ChannelSigmas& sig);
double channel_marginal_variance(double alpha, double gamma, const ChannelSigmas& sig);

// Declarative text block: family, params, N, N_nu, beta, seed.
std::string to_config_block(const EnsembleSpec& spec, std::uint64_t seed);
EnsembleSpec spec_from_config_block(const std::string& text, std::uint64_t* seed = nullptr);

void write_matrix_csv(std::ostream& os, const StateMatrix& m);
void write_matrix_binary(std::ostream& os, const StateMatrix& m);

}  // namespace entlab
