#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "entlab/complexity.hpp"
#include "entlab/ensembles.hpp"
#include "entlab/spectra.hpp"
#include "entlab/statistics.hpp"

namespace entlab {

// Steady-state cross-check of the eigenvalue flow against direct sampling of
// the ergodic ensemble, using moments of the largest eigenvalue.
struct SdeCheckConfig {
    int N = 8;
    int N_nu = 8;
    int beta = 1;
    double gamma = 0.25;
    double dY = 0.0;  // 0 selects 1e-4 / N^2
    int trajectories = 4;
    double horizon = 5.0;
    double burn_in = 0.5;
    double sample_every = 0.02;
    int batches = 20;
    int direct_samples = 200000;
    int moments = 3;
    std::uint64_t seed = 1;
};

SdeCheckConfig parse_sde_check_config(const std::string& text);

struct SdeCheckResult {
    std::vector<double> sde_mean, sde_se, direct_mean, direct_se, z;
    SdeStats stats;
    std::size_t sde_samples = 0;

    bool pass(double z_max = 3.0) const;
};

SdeCheckResult run_sde_check(const SdeCheckConfig& cfg);

// Sweep over ensemble families and target complexities. Read from plain
// "key = value" text; see README for the keys.
struct SweepConfig {
    std::vector<Family> families{Family::BE, Family::PE, Family::EE};
    int N = 64;
    int N_nu = 64;
    int beta = 1;
    double gamma = 0.25;
    std::vector<double> y_targets;  // targets for Y - Y0, ascending
    int samples = 2000;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double omega = 0.0;  // 0 selects 4 N^2
    double ee_ratio = 1.0;
    bool fit = true;
    bool theory = false;
    bool sde_check = false;
    int threads = 0;  // 0 uses hardware concurrency
    std::string out_dir = "results";
    std::string profile = "desk";
    std::vector<std::string> warnings;

    void validate();
};

SweepConfig parse_sweep_config(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);

// desk: N = 64, 2000 samples, 6 Y points; paper: N = 1024, 1e5 samples,
// the six complexities of the published table.
void apply_profile(SweepConfig& cfg, const std::string& profile);

// Normalized key = value rendering; the manifest hash is computed over it.
std::string canonical_config(const SweepConfig& cfg);
std::uint64_t fnv1a64(const std::string& s);

struct TheoryOverlay {
    double S3_mean = 0.0;
    double t = 0.0;
    double R0_mean = 0.0;
    double omega = 0.0;
    double stationary_var_S2 = 0.0;  // <S3> / omega
    double stationary_var_R1 = 0.0;  // 1 / (2 gamma + 2 omega)
    std::vector<double> grid_S2, density_S2;
    std::vector<double> grid_R1, density_R1;
    std::string note;
};

struct CellResult {
    Family family = Family::BE;
    int y_index = 0;
    double target = 0.0;
    FamilyParams params;
    ComplexityPoint complexity;
    std::string spec_id;
    std::vector<double> S2, S3, R1, R2, R0, T1;
    int excluded = 0;
    std::optional<EmpiricalDistribution> dist_S2, dist_R1;
    std::optional<FitSelection> fit_S2, fit_R1;
    std::optional<TheoryOverlay> theory;
    std::vector<std::string> errors;

    double realized() const { return complexity.excess(); }
};

struct CurveResult {
    Family family = Family::BE;
    std::optional<SigmaCurve> S2, R1;
    std::string error;
};

struct ResultSet {
    SweepConfig config;
    std::vector<CellResult> cells;
    std::vector<CurveResult> curves;
    std::vector<std::string> warnings;
    std::optional<SdeCheckResult> sde;  // set when sde_check is on

    bool has_errors() const;
};

ResultSet run_sweep(const SweepConfig& config);

enum class OutputFormat { Csv, Svg };

struct OutputManifest {
    std::string directory;
    std::vector<std::string> files;
};

// Writes samples.csv, fits.csv, candidates.csv, curve.csv, histograms.csv,
// theory.csv, sde_check.csv (csv) and sigma_curve.svg plus one overlay plot
// per cell (svg), then manifest.json. With no formats nothing is written.
OutputManifest emit_outputs(const ResultSet& rs, const std::vector<OutputFormat>& formats,
                            const std::string& dir);

// Runs fn(i) for i in [0, n) on up to `threads` workers (0: hardware concurrency).
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace entlab
