#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "entlab/errors.hpp"
#include "entlab/rng.hpp"
#include "entlab/statistics.hpp"

using namespace entlab;

namespace {

template <class Dist>
std::vector<double> draw(Dist dist, int n, std::uint64_t seed)
{
    Engine rng = make_stream(seed, {});
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = dist(rng);
    return v;
}

std::vector<double> beta_draws(double a, double b, int n, std::uint64_t seed)
{
    Engine rng = make_stream(seed, {});
    std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
    std::vector<double> v;
    for (int i = 0; i < n; ++i) {
        double x = ga(rng), y = gb(rng);
        v.push_back(x / (x + y));
    }
    return v;
}

}  // namespace

TEST(Empirical, MomentsAndHistogram)
{
    auto x = draw(std::normal_distribution<double>(3.0, 2.0), 20000, 1);
    EmpiricalDistribution d = empirical_distribution(x, Measure::S2);
    EXPECT_NEAR(d.mean, 3.0, 0.05);
    EXPECT_NEAR(d.std, 2.0, 0.05);
    EXPECT_NEAR(d.skewness, 0.0, 0.1);
    long total = 0;
    for (long c : d.counts) total += c;
    EXPECT_EQ(total, d.n);
    EXPECT_EQ(d.edges.size(), d.counts.size() + 1);
    EXPECT_EQ(d.centers().size(), d.counts.size());

    EmpiricalDistribution c = empirical_distribution(x, Measure::S2, true);
    EXPECT_NEAR(c.mean, 0.0, 1e-12);
    EXPECT_NEAR(c.shift, d.mean, 1e-12);

    BinningRule fixed{BinningRule::Kind::Fixed, 17};
    EXPECT_EQ(empirical_distribution(x, Measure::R1, false, fixed).counts.size(), 17u);
}

TEST(Empirical, Errors)
{
    std::vector<double> few(99, 1.0);
    EXPECT_THROW(empirical_distribution(few, Measure::S2), InsufficientData);
    std::vector<double> same(500, 0.25);
    EmpiricalDistribution d = empirical_distribution(same, Measure::S2);
    EXPECT_THROW(fit_family(d, FitFamily::Normal), DegenerateData);
    EXPECT_THROW(select_best_fit(d), DegenerateData);
}

TEST(Fit, NormalIsClosedForm)
{
    auto x = draw(std::normal_distribution<double>(-1.0, 0.3), 5000, 2);
    FitResult r = fit_family(empirical_distribution(x, Measure::S2), FitFamily::Normal);
    double m = sample_mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    EXPECT_NEAR(r.loc, m, 1e-12);
    EXPECT_NEAR(r.scale, std::sqrt(ss / x.size()), 1e-12);
    EXPECT_EQ(r.shape_count(), 0);
}

TEST(Fit, GammaRecovery)
{
    auto x = draw(std::gamma_distribution<double>(3.0, 2.0), 20000, 3);
    for (double& v : x) v += 1.0;
    FitResult r = fit_family(empirical_distribution(x, Measure::R1), FitFamily::Gamma);
    EXPECT_NEAR(r.shape1, 3.0, 0.4);
    EXPECT_NEAR(r.scale, 2.0, 0.25);
    EXPECT_NEAR(r.loc, 1.0, 0.3);
}

TEST(Fit, LogGammaRecovery)
{
    // If G ~ Gamma(c, 1) then ln G ~ loggamma(c).
    auto g = draw(std::gamma_distribution<double>(2.0, 1.0), 20000, 4);
    std::vector<double> x;
    for (double v : g) x.push_back(0.5 + 0.1 * std::log(v));
    FitResult r = fit_family(empirical_distribution(x, Measure::S2), FitFamily::LogGamma);
    EXPECT_NEAR(r.shape1, 2.0, 0.3);
    EXPECT_NEAR(r.scale, 0.1, 0.01);
    EXPECT_NEAR(r.loc, 0.5, 0.02);
}

TEST(Fit, BetaDescribesSkewedBoundedData)
{
    auto x = beta_draws(2.0, 5.0, 20000, 5);
    EmpiricalDistribution d = empirical_distribution(x, Measure::S2);
    FitResult b = fit_family(d, FitFamily::Beta);
    FitResult n = fit_family(d, FitFamily::Normal);
    EXPECT_LT(b.rss, 0.25 * n.rss);
    double fitted_mean = b.loc + b.scale * b.shape1 / (b.shape1 + b.shape2);
    EXPECT_NEAR(fitted_mean, d.mean, 0.01);
    EXPECT_EQ(b.shape_count(), 2);
}

TEST(Select, BestHasMinimalRss)
{
    for (std::uint64_t seed : {6u, 7u, 8u}) {
        auto x = draw(std::gamma_distribution<double>(1.5, 1.0), 3000, seed);
        FitSelection s = select_best_fit(empirical_distribution(x, Measure::R1));
        EXPECT_EQ(s.candidates.size() + s.failures.size(), 4u);
        for (const auto& c : s.candidates) EXPECT_LE(s.best.rss, c.rss * (1.0 + kRssTieRelative));
    }
}

TEST(Select, SkewedSamplesAreNotNormal)
{
    auto x = draw(std::gamma_distribution<double>(1.2, 1.0), 5000, 9);
    FitSelection s = select_best_fit(empirical_distribution(x, Measure::R1));
    EXPECT_NE(s.best.family, FitFamily::Normal);
}

TEST(Select, TiesGoToFewerShapes)
{
    auto x = draw(std::normal_distribution<double>(0.0, 1.0), 2000, 10);
    EmpiricalDistribution d = empirical_distribution(x, Measure::S2);
    const FitFamily both[] = {FitFamily::Normal, FitFamily::Normal};
    FitSelection s = select_best_fit(d, both);
    EXPECT_EQ(s.best.family, FitFamily::Normal);
}

TEST(Fit, AffineEquivariance)
{
    auto x = draw(std::gamma_distribution<double>(4.0, 1.0), 10000, 11);
    std::vector<double> y;
    for (double v : x) y.push_back(5.0 + 3.0 * v);
    EmpiricalDistribution dx = empirical_distribution(x, Measure::R1);
    EmpiricalDistribution dy = empirical_distribution(y, Measure::R1);
    FitResult nx = fit_family(dx, FitFamily::Normal), ny = fit_family(dy, FitFamily::Normal);
    EXPECT_NEAR(ny.loc, 5.0 + 3.0 * nx.loc, 1e-10);
    EXPECT_NEAR(ny.scale, 3.0 * nx.scale, 1e-10);
    FitResult gx = fit_family(dx, FitFamily::Gamma), gy = fit_family(dy, FitFamily::Gamma);
    EXPECT_NEAR(gy.shape1 / gx.shape1, 1.0, 1e-3);
    EXPECT_NEAR(gy.scale / (3.0 * gx.scale), 1.0, 1e-3);
    EXPECT_NEAR(gy.loc, 5.0 + 3.0 * gx.loc, 1e-2);
    EXPECT_NEAR(gy.rss * 9.0, gx.rss, 1e-3 * gx.rss);
}

TEST(Fit, NamesRoundTrip)
{
    for (FitFamily f : kAllFamilies) EXPECT_EQ(parse_fit_family(fit_family_name(f)), f);
    for (Measure m : {Measure::S2, Measure::R1, Measure::R2, Measure::R0})
        EXPECT_EQ(parse_measure(measure_name(m)), m);
    EXPECT_THROW(parse_fit_family("Cauchy"), InvalidArgument);
}

TEST(Sigma, CurveAndInvariance)
{
    std::vector<SigmaInput> runs;
    const double ys[] = {1e-4, 1e-3, 1e-2, 1e-1, 1.0};
    for (int i = 0; i < 5; ++i)
        runs.push_back({ys[i], draw(std::normal_distribution<double>(0.0, 1.0 + i), 500, 20 + i)});
    SigmaCurve c = sigma_curve(runs);
    ASSERT_EQ(c.Y.size(), 5u);
    EXPECT_EQ(*std::max_element(c.normalized.begin(), c.normalized.end()), 1.0);
    EXPECT_NEAR(c.sigma[0], sample_std(runs[0].values), 1e-14);

    // Reordering runs or their samples changes nothing.
    std::vector<SigmaInput> shuffled(runs.rbegin(), runs.rend());
    for (auto& r : shuffled) std::reverse(r.values.begin(), r.values.end());
    SigmaCurve d = sigma_curve(shuffled);
    EXPECT_EQ(c.sigma, d.sigma);
    EXPECT_EQ(c.Y, d.Y);

    // Shifting all values leaves sigma unchanged; scaling leaves the normalized curve unchanged.
    std::vector<SigmaInput> scaled = runs;
    for (auto& r : scaled)
        for (double& v : r.values) v = 7.0 * v + 2.0;
    SigmaCurve e = sigma_curve(scaled);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(e.normalized[i], c.normalized[i], 1e-12);
}

TEST(Sigma, Errors)
{
    std::vector<SigmaInput> four;
    for (double y : {1e-3, 1e-2, 1e-1, 1.0}) four.push_back({y, {1.0, 2.0, 3.0}});
    EXPECT_THROW(sigma_curve(four), InsufficientData);
    std::vector<SigmaInput> narrow;
    for (double y : {1.0, 2.0, 3.0, 4.0, 5.0}) narrow.push_back({y, {1.0, 2.0, 3.0}});
    EXPECT_THROW(sigma_curve(narrow), InsufficientData);
}

TEST(Helpers, Quantile)
{
    EXPECT_DOUBLE_EQ(quantile({3.0, 1.0, 2.0}, 0.5), 2.0);
    EXPECT_THROW(sample_mean(std::vector<double>{}), InsufficientData);
}
