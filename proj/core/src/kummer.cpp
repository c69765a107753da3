#include "entlab/kummer.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "entlab/errors.hpp"
#include "entlab/numeric.hpp"

namespace entlab {
namespace {

bool is_nonpositive_integer(double v)
{
    return v <= 0.0 && v == std::floor(v);
}

constexpr long kMaxTerms = 1000000;

KummerSeries direct_series(double a, double b, double x)
{
    using ld = long double;
    CompensatedSum<ld> sum;
    ld term = 1.0L;
    sum.add(term);
    ld max_term = 1.0L;
    const bool terminates = is_nonpositive_integer(a);
    const double a_stop = terminates ? -a : 0.0;
    long k = 0;
    int small_run = 0;
    for (; k < kMaxTerms; ++k) {
        ld num = (static_cast<ld>(a) + k) * x;
        if (num == 0.0L) break;
        term *= num / ((static_cast<ld>(b) + k) * (k + 1));
        sum.add(term);
        ld at = std::abs(term);
        if (at > max_term) max_term = at;
        if (!std::isfinite(static_cast<double>(term)))
            throw ConvergenceError("1F1 series overflow");
        if (terminates && k + 1 >= a_stop) break;
        // Past the largest parameters the term ratio decreases monotonically.
        bool tail = (k + 1) > std::abs(x) && (k + 1) > -a && (k + 1) > -b;
        if (tail && at <= 1e-14L * std::abs(sum.value())) {
            if (++small_run >= 2) break;
        } else {
            small_run = 0;
        }
    }
    if (k >= kMaxTerms) throw ConvergenceError("1F1 series did not converge in 1e6 terms");
    KummerSeries r;
    ld s = sum.value();
    r.value = static_cast<double>(s);
    r.terms = static_cast<int>(k + 1);
    r.abs_error = static_cast<double>(std::numeric_limits<ld>::epsilon() * max_term);
    r.error_estimate = s == 0.0L ? std::numeric_limits<double>::infinity()
                                 : static_cast<double>(std::numeric_limits<ld>::epsilon() * max_term / std::abs(s));
    return r;
}

}  // namespace

KummerSeries kummer_1f1_series(double a, double b, double x)
{
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(x))
        throw InvalidArgument("1F1 arguments must be finite");
    if (is_nonpositive_integer(b)) throw PoleError("1F1 has a pole at non-positive integer b");
    if (x == 0.0) return {1.0, 1, 0.0};
    if (x < 0.0 && !is_nonpositive_integer(a)) {
        KummerSeries r = direct_series(b - a, b, -x);
        double ex = std::exp(x);
        r.value *= ex;
        r.abs_error *= ex;
        return r;
    }
    return direct_series(a, b, x);
}

double kummer_1f1(double a, double b, double x)
{
    return kummer_1f1_series(a, b, x).value;
}

double large_order_envelope(double mu, double x2)
{
    return std::exp(0.5 * x2 + std::lgamma(1.0 + mu) - std::lgamma(mu + 0.5) - 0.5 * std::log(mu));
}

double kummer_1f1_leading_cosine(double mu, double x2)
{
    if (!(mu >= 10.0)) throw OutOfRegime("large-order expansion requires mu >= 10");
    if (x2 < 0.0) throw InvalidArgument("x2 must be non-negative");
    return large_order_envelope(mu, x2) * std::cos(2.0 * std::sqrt(mu * x2));
}

double kummer_1f1_large_order(double mu, double x2)
{
    if (!(mu >= 10.0)) throw OutOfRegime("large-order expansion requires mu >= 10");
    if (x2 < 0.0) throw InvalidArgument("x2 must be non-negative");
    constexpr int S = 2;
    constexpr double b = 0.5;
    // Bernoulli numbers B_0..B_8 with B_1 = -1/2.
    static constexpr std::array<double, 9> bern = {1.0, -0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0,
                                                   0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0};
    const double z = x2;
    std::array<double, 2 * S + 2> c{};
    c[0] = 1.0;
    double fact[10] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880};
    for (int k = 0; k + 1 < static_cast<int>(c.size()); ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j)
            s += (b * bern[j + 1] / fact[j + 1] + z * (j + 1) * bern[j + 2] / fact[j + 2]) * c[k - j];
        c[k + 1] = -s / (k + 1);
    }
    auto poch = [](double v, int n) {
        double r = 1.0;
        for (int i = 0; i < n; ++i) r *= v + i;
        return r;
    };
    auto binom = [&](int n, int k) { return fact[n] / (fact[k] * fact[n - k]); };
    double P = 0.0;
    double Q = 0.0;
    for (int k = 0; k <= S; ++k) {
        double pk = 0.0;
        double qk = 0.0;
        for (int s = 0; s <= k; ++s) {
            pk += binom(k, s) * poch(1.0 - b, k - s) * std::pow(z, s) * c[k + s];
            qk += binom(k, s) * poch(2.0 - b, k - s) * std::pow(z, s) * c[k + s + 1];
        }
        double scale = std::pow(-mu, k);
        P += pk / scale;
        Q += qk / scale;
    }
    double y = 2.0 * std::sqrt(mu * z);
    return large_order_envelope(mu, z) * (P * std::cos(y) - std::sqrt(z / mu) * Q * std::sin(y));
}

}  // namespace entlab
