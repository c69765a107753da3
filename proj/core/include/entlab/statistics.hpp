#pragma once

#include <span>
#include <string>
#include <vector>

namespace entlab {

enum class Measure { S2, R1, R2, R0, Other };

std::string measure_name(Measure m);
Measure parse_measure(const std::string& name);

struct BinningRule {
    enum class Kind { FreedmanDiaconis, Sturges, Fixed };
    Kind kind = Kind::FreedmanDiaconis;
    int bins = 0;        // used by Fixed
    int max_bins = 1000;
};

// Histogram of a sample with its moments. When centered, samples have their
// mean subtracted (shift holds the subtracted value).
struct EmpiricalDistribution {
    Measure measure = Measure::Other;
    bool centered = false;
    double shift = 0.0;
    std::vector<double> samples;
    std::vector<double> edges;
    std::vector<long> counts;
    long n = 0;
    double mean = 0.0;
    double std = 0.0;      // sample standard deviation (n - 1)
    double skewness = 0.0;

    std::vector<double> centers() const;
    std::vector<double> density() const;  // counts / (n * width)
};

// Requires at least 100 samples.
EmpiricalDistribution empirical_distribution(std::span<const double> samples, Measure measure,
                                             bool center = false, BinningRule rule = {});

// Candidate families in scipy.stats conventions (loc, scale, shapes).
enum class FitFamily { LogGamma, Gamma, Beta, Normal };

std::string fit_family_name(FitFamily f);
FitFamily parse_fit_family(const std::string& name);
inline constexpr FitFamily kAllFamilies[] = {FitFamily::LogGamma, FitFamily::Gamma,
                                             FitFamily::Beta, FitFamily::Normal};

struct FitResult {
    FitFamily family = FitFamily::Normal;
    double loc = 0.0;
    double scale = 1.0;
    double shape1 = 0.0;  // loggamma c, gamma a, beta a
    double shape2 = 0.0;  // beta b
    double rss = 0.0;     // sum over bins of (pdf(center) - density)^2
    double loglik = 0.0;
    int n_bins = 0;
    long n = 0;

    int shape_count() const;
    double pdf(double x) const;
};

// Maximum-likelihood fit of one family to the samples; rss against the histogram.
FitResult fit_family(const EmpiricalDistribution& dist, FitFamily family);

// Candidates whose RSS agrees to rounding level count as tied.
inline constexpr double kRssTieRelative = 1e-9;

struct FitSelection {
    FitResult best;
    std::vector<FitResult> candidates;
    std::vector<std::string> failures;
};

// Minimum RSS; ties go to the family with fewer shape parameters.
FitSelection select_best_fit(const EmpiricalDistribution& dist,
                             std::span<const FitFamily> families = kAllFamilies);

struct SigmaInput {
    double Y = 0.0;
    std::vector<double> values;
};

struct SigmaCurve {
    std::vector<double> Y;
    std::vector<double> sigma;
    std::vector<double> normalized;  // sigma / max sigma
};

// Needs at least five distinct Y values spanning two decades.
SigmaCurve sigma_curve(std::span<const SigmaInput> runs);

double sample_mean(std::span<const double> x);
double sample_std(std::span<const double> x);
double quantile(std::vector<double> sorted_or_not, double q);

}  // namespace entlab
