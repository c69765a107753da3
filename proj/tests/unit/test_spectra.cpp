#include <cmath>
#include <algorithm>
#include <complex>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "entlab/errors.hpp"
#include "entlab/spectra.hpp"

using namespace entlab;

namespace {

StateMatrix real_matrix(Eigen::MatrixXd m)
{
    StateMatrix s;
    s.entries = std::move(m);
    return s;
}

}  // namespace

TEST(Schmidt, FrozenTwoByTwo)
{
    Eigen::MatrixXd c(2, 2);
    c << 1, 1, 0, 1;
    SchmidtSpectrum s = schmidt_spectrum(real_matrix(c));
    ASSERT_EQ(s.N(), 2);
    EXPECT_NEAR(s.lambdas[0], (3.0 + std::sqrt(5.0)) / 6.0, 1e-15);
    EXPECT_NEAR(s.lambdas[1], (3.0 - std::sqrt(5.0)) / 6.0, 1e-15);
    EXPECT_DOUBLE_EQ(s.nu, 0.5);
}

TEST(Schmidt, ComplexMatrixSameSpectrum)
{
    Eigen::MatrixXcd c(2, 2);
    c << 1.0, std::complex<double>(0, 1), 0.0, 1.0;
    StateMatrix m;
    m.entries = c;
    SchmidtSpectrum s = schmidt_spectrum(m);
    EXPECT_NEAR(s.lambdas[0], (3.0 + std::sqrt(5.0)) / 6.0, 1e-15);
    EXPECT_NEAR(s.lambdas[1], (3.0 - std::sqrt(5.0)) / 6.0, 1e-15);
}

TEST(Schmidt, RectangularMatrixAndNu)
{
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 4);
    c(0, 0) = 2.0;
    c(1, 3) = 1.0;
    SchmidtSpectrum s = schmidt_spectrum(real_matrix(c));
    EXPECT_NEAR(s.lambdas[0], 0.8, 1e-15);
    EXPECT_NEAR(s.lambdas[1], 0.2, 1e-15);
    EXPECT_DOUBLE_EQ(s.nu, 1.5);
}

TEST(Schmidt, ZeroMatrixIsDegenerate)
{
    EXPECT_THROW(schmidt_spectrum(real_matrix(Eigen::MatrixXd::Zero(3, 3))), DegenerateInput);
}

TEST(Schmidt, RandomSpectraAreNormalizedAndSorted)
{
    Engine rng = make_stream(2, {});
    EnsembleSpec spec = build_family(Family::PE, {.a = 3.0, .b = 3.0}, 16, 20, 2);
    for (int r = 0; r < 20; ++r) {
        SchmidtSpectrum s = schmidt_spectrum(sample_state_matrix(spec, rng));
        EXPECT_NO_THROW(s.check(1e-12));
        EXPECT_EQ(s.N(), 16);
    }
}

TEST(Spectrum, MakeAndSeparable)
{
    SchmidtSpectrum s = make_spectrum({1.0, 3.0, 0.0}, 0.5);
    EXPECT_EQ(s.lambdas, (std::vector<double>{0.75, 0.25, 0.0}));
    EXPECT_THROW(make_spectrum({0.0, 0.0}, 0.5), DegenerateInput);
    EXPECT_THROW(make_spectrum({1.0, -1.0, 1.0}, 0.5), InvalidArgument);
    SchmidtSpectrum sep = separable_spectrum(4, 0.5);
    EXPECT_EQ(sep.lambdas, (std::vector<double>{1.0, 0.0, 0.0, 0.0}));
}

TEST(Sde, PreservesSimplexInvariants)
{
    SdeParams p;
    p.record_interval = 0.01;
    Engine rng = make_stream(3, {});
    SpectrumTrajectory t = sde_evolve(separable_spectrum(6, 0.5), 0.0, 0.2, p, rng);
    ASSERT_GE(t.states.size(), 20u);
    EXPECT_DOUBLE_EQ(t.Y.front(), 0.0);
    EXPECT_NEAR(t.Y.back(), 0.2, 1e-12);
    for (const auto& s : t.states) EXPECT_NO_THROW(s.check(1e-12));
    EXPECT_LT(t.stats.rejection_rate(), 0.5);
    // From the separable start the spectrum must spread out.
    EXPECT_LT(t.states.back().lambdas[0], 0.9);
}

TEST(Sde, Deterministic)
{
    SdeParams p;
    p.dY = 1e-4;
    Engine a = make_stream(9, {1});
    Engine b = make_stream(9, {1});
    SchmidtSpectrum init = make_spectrum({0.4, 0.3, 0.2, 0.1}, 0.5);
    auto ta = sde_evolve(init, 0.0, 0.05, p, a);
    auto tb = sde_evolve(init, 0.0, 0.05, p, b);
    EXPECT_EQ(ta.states.back().lambdas, tb.states.back().lambdas);
}

TEST(Sde, StationaryMeanPurity)
{
    // The flow relaxes towards an equilibrium that does not depend on the
    // start; two very different starts must agree in the long-time average.
    SdeParams p;
    p.dY = 2e-4;
    p.record_interval = 0.01;
    auto mean_s2 = [&](const SchmidtSpectrum& init, std::uint64_t seed) {
        Engine rng = make_stream(seed, {});
        auto t = sde_evolve(init, 0.0, 100.0, p, rng);
        double acc = 0.0;
        int n = 0;
        for (std::size_t i = t.states.size() / 4; i < t.states.size(); ++i, ++n)
            for (double l : t.states[i].lambdas) acc += l * l;
        return acc / n;
    };
    double a = mean_s2(separable_spectrum(3, 0.5), 1);
    double b = mean_s2(make_spectrum({1.0, 1.0, 1.0}, 0.5), 2);
    EXPECT_NEAR(a, b, 0.03);
}

TEST(Sde, RejectsBadArguments)
{
    SdeParams p;
    Engine rng = make_stream(1, {});
    SchmidtSpectrum bad{{0.5, 0.6}, 0.5};
    EXPECT_THROW(sde_evolve(bad, 0.0, 1.0, p, rng), InvalidArgument);
    EXPECT_THROW(sde_evolve(separable_spectrum(2, 0.5), 1.0, 0.0, p, rng), InvalidArgument);
}

TEST(Sde, TrajectoryCsv)
{
    SdeParams p;
    p.dY = 1e-3;
    Engine rng = make_stream(4, {});
    auto t = sde_evolve(separable_spectrum(2, 0.5), 0.0, 0.01, p, rng);
    std::ostringstream os;
    write_trajectory_csv(os, t);
    const std::string text = os.str();
    EXPECT_EQ(text.substr(0, 18), "Y,lambda1,lambda2\n");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}
