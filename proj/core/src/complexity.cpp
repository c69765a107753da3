#include "entlab/complexity.hpp"

#include <cmath>
#include <functional>

#include "entlab/errors.hpp"
#include "entlab/numeric.hpp"

namespace entlab {
namespace {

double log_factor(double gamma, double h)
{
    double f = 1.0 - 2.0 * gamma * h;
    if (f == 0.0)
        throw SingularParameter("variance equals 1/(2 gamma); complexity is singular");
    return std::log(std::abs(f));
}

void check_gamma(double gamma)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidArgument("gamma must be positive");
}

// Sum over l >= 1 of ln(1 - 2 gamma h) for the BE/PE/EE variance profiles.
double family_column_sum(Family family, const FamilyParams& p, int N, int N_nu, double gamma)
{
    CompensatedSum<double> s;
    switch (family) {
    case Family::BE: {
        if (!(p.mu > 0.0)) throw InvalidArgument("BE requires mu > 0");
        double h = 1.0 / (1.0 + p.mu);
        return static_cast<double>(N) * (N_nu - 1) * log_factor(gamma, h);
    }
    case Family::PE:
    case Family::EE: {
        double ab = p.a * p.b;
        if (!(p.a > 0.0) || !(p.b > 0.0)) throw InvalidArgument("PE/EE require a, b > 0");
        for (int k = 0; k < N; ++k)
            for (int l = 1; l < N_nu; ++l) {
                double r = static_cast<double>(k + 1) * l / ab;
                double h = family == Family::PE ? 1.0 / (1.0 + r) : std::exp(-r);
                s.add(log_factor(gamma, h));
            }
        return s.value();
    }
    default:
        throw InvalidArgument("closed form exists only for BE, PE, EE");
    }
}

}  // namespace

ComplexityPoint complexity_from_spec(const EnsembleSpec& spec, double gamma, double c0)
{
    check_gamma(gamma);
    spec.validate();
    CompensatedSum<double> total;
    CompensatedSum<double> first;
    double nonzero_b = 0.0;
    for (int k = 0; k < spec.N; ++k) {
        for (int l = 0; l < spec.N_nu; ++l) {
            double lf = spec.beta * log_factor(gamma, spec.h(k, l));
            total.add(lf);
            if (l == 0) first.add(lf);
            double b = spec.bmean(k, l);
            if (b != 0.0) {
                total.add(std::log(b * b));
                nonzero_b += 1.0;
            }
        }
    }
    ComplexityPoint p;
    p.gamma = gamma;
    p.c0 = c0;
    p.M = static_cast<double>(spec.beta) * spec.N * spec.N_nu + nonzero_b;
    p.Y = -total.value() / (2.0 * p.M * gamma) + c0;
    p.Y0 = -first.value() / (2.0 * p.M * gamma) + c0;
    return p;
}

ComplexityPoint complexity_closed_form(Family family, const FamilyParams& params, int N,
                                       int N_nu, double gamma, double c0, int beta)
{
    check_gamma(gamma);
    if (!(gamma < 0.5)) throw InvalidArgument("closed forms require gamma in (0, 1/2)");
    if (N < 1 || N_nu < N) throw InvalidArgument("requires 1 <= N <= N_nu");
    if (beta != 1 && beta != 2) throw InvalidArgument("beta must be 1 or 2");
    ComplexityPoint p;
    p.gamma = gamma;
    p.c0 = c0;
    p.M = static_cast<double>(beta) * N * N_nu;
    double first = beta * static_cast<double>(N) * std::log1p(-2.0 * gamma);
    double rest = beta * family_column_sum(family, params, N, N_nu, gamma);
    p.Y0 = -first / (2.0 * p.M * gamma) + c0;
    p.Y = p.Y0 - rest / (2.0 * p.M * gamma);
    return p;
}

double max_reachable_excess(int N, int N_nu, double gamma, int beta)
{
    check_gamma(gamma);
    double M = static_cast<double>(beta) * N * N_nu;
    return -beta * static_cast<double>(N) * (N_nu - 1) * std::log1p(-2.0 * gamma) / (2.0 * M * gamma);
}

FamilyParams invert_to_parameter(Family family, double target_excess, int N, int N_nu,
                                 double gamma, int beta, double ee_ratio)
{
    if (family == Family::Custom) throw InvalidArgument("cannot invert a custom ensemble");
    if (!(ee_ratio > 0.0)) throw InvalidArgument("ee_ratio must be positive");
    double hi_y = max_reachable_excess(N, N_nu, gamma, beta);
    if (!(target_excess > 0.0) || !(target_excess < hi_y))
        throw RangeError("target complexity outside the reachable interval", 0.0, hi_y);

    auto params_of = [&](double logp) {
        FamilyParams fp;
        double p = std::exp(logp);
        if (family == Family::BE) {
            fp.mu = p;
        } else {
            double r = family == Family::EE ? ee_ratio : 1.0;
            fp.a = std::sqrt(p * r);
            fp.b = std::sqrt(p / r);
        }
        return fp;
    };
    auto excess_at = [&](double logp) {
        return complexity_closed_form(family, params_of(logp), N, N_nu, gamma, 0.0, beta).excess();
    };
    // BE excess decreases in mu; PE and EE excess increases in a*b.
    double sign = family == Family::BE ? -1.0 : 1.0;
    auto g = [&](double logp) { return sign * (excess_at(logp) - target_excess); };

    double lo = -1.0;
    double hi = 1.0;
    int guard = 0;
    while (g(lo) > 0.0) {
        lo -= 4.0;
        if (++guard > 200) throw ConvergenceError("failed to bracket target complexity");
    }
    guard = 0;
    while (g(hi) < 0.0) {
        hi += 4.0;
        if (++guard > 200) throw ConvergenceError("failed to bracket target complexity");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return params_of(0.5 * (lo + hi));
}

}  // namespace entlab
