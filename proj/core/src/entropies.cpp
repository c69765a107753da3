#include "entlab/entropies.hpp"

#include <cmath>

#include "entlab/errors.hpp"
#include "entlab/numeric.hpp"

namespace entlab {

std::vector<double> moments(const SchmidtSpectrum& s, int k_max)
{
    if (k_max < 1) throw InvalidArgument("k_max must be >= 1");
    std::vector<CompensatedSum<double>> acc(static_cast<std::size_t>(k_max));
    for (double l : s.lambdas) {
        double p = l;
        for (int k = 0; k < k_max; ++k) {
            acc[k].add(p);
            p *= l;
        }
    }
    std::vector<double> out;
    out.reserve(acc.size());
    for (const auto& a : acc) out.push_back(a.value());
    return out;
}

double renyi(const SchmidtSpectrum& s, double alpha)
{
    if (!(alpha > 0.0)) throw InvalidArgument("Renyi order must be positive");
    if (alpha == 1.0) throw InvalidArgument("alpha = 1 is the von Neumann entropy");
    CompensatedSum<double> acc;
    for (double l : s.lambdas)
        if (l > 0.0) acc.add(std::pow(l, alpha));
    return std::log(acc.value()) / (1.0 - alpha);
}

double von_neumann(const SchmidtSpectrum& s)
{
    CompensatedSum<double> acc;
    for (double l : s.lambdas)
        if (l > 0.0) acc.add(-l * std::log(l));
    return acc.value();
}

LogMoments log_moments(const SchmidtSpectrum& s, int k_max)
{
    if (k_max < 0) throw InvalidArgument("k_max must be >= 0");
    LogMoments out;
    CompensatedSum<double> r0;
    std::vector<CompensatedSum<double>> t(static_cast<std::size_t>(k_max));
    for (double l : s.lambdas) {
        if (l < kLogMomentFloor) {
            ++out.excluded;
            continue;
        }
        double lg = std::log(l);
        r0.add(-lg);
        double p = l * lg * lg;  // lambda^k (ln lambda)^(k+1) for k = 1
        for (int k = 0; k < k_max; ++k) {
            t[k].add(p);
            p *= l * lg;
        }
    }
    out.R0 = r0.value();
    for (const auto& a : t) out.T.push_back(a.value());
    return out;
}

EntropyRecord entropy_record(const SchmidtSpectrum& s, int k_max)
{
    EntropyRecord r;
    r.S = moments(s, std::max(k_max, 2));
    r.R1 = von_neumann(s);
    r.R2 = -std::log(r.S[1]);
    LogMoments lm = log_moments(s, k_max);
    r.R0 = lm.R0;
    r.T = std::move(lm.T);
    r.excluded = lm.excluded;
    if (static_cast<int>(r.S.size()) > k_max) r.S.resize(static_cast<std::size_t>(k_max));
    return r;
}

}  // namespace entlab
