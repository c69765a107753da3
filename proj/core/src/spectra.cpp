#include "entlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include <Eigen/SVD>

#include "entlab/errors.hpp"
#include "entlab/numeric.hpp"

namespace entlab {

void SchmidtSpectrum::check(double tol) const
{
    if (lambdas.empty()) throw InvalidArgument("empty spectrum");
    CompensatedSum<double> s;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] >= 0.0)) throw InvalidArgument("negative or NaN Schmidt eigenvalue");
        if (i && lambdas[i] > lambdas[i - 1]) throw InvalidArgument("spectrum not sorted");
        s.add(lambdas[i]);
    }
    if (std::abs(s.value() - 1.0) > tol) throw InvalidArgument("spectrum trace differs from one");
}

SchmidtSpectrum make_spectrum(std::vector<double> weights, double nu)
{
    if (weights.empty()) throw InvalidArgument("empty spectrum");
    CompensatedSum<double> s;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("weights must be finite and >= 0");
        s.add(w);
    }
    double total = s.value();
    if (!(total > 0.0)) throw DegenerateInput("all Schmidt weights vanish");
    for (double& w : weights) w /= total;
    std::sort(weights.begin(), weights.end(), std::greater<>());
    return {std::move(weights), nu};
}

SchmidtSpectrum schmidt_spectrum(const StateMatrix& m)
{
    std::vector<double> sq;
    std::visit(
        [&sq](const auto& mat) {
            using Mat = std::decay_t<decltype(mat)>;
            Eigen::BDCSVD<Mat> svd(mat);  // singular values only
            const auto& s = svd.singularValues();
            sq.resize(static_cast<std::size_t>(s.size()));
            for (Eigen::Index i = 0; i < s.size(); ++i) sq[i] = s[i] * s[i];
        },
        m.entries);
    int n = std::min(m.rows(), m.cols());
    int nn = std::max(m.rows(), m.cols());
    double nu = 0.5 * (nn - n + 1);
    try {
        return make_spectrum(std::move(sq), nu);
    } catch (const DegenerateInput&) {
        throw DegenerateInput("state matrix is identically zero");
    }
}

SchmidtSpectrum separable_spectrum(int N, double nu)
{
    if (N < 1) throw InvalidArgument("N must be positive");
    std::vector<double> l(static_cast<std::size_t>(N), 0.0);
    l[0] = 1.0;
    return {std::move(l), nu};
}

namespace {

struct Integrator {
    const SdeParams& p;
    double nu;
    Engine& rng;
    SdeStats& stats;
    std::normal_distribution<double> gauss{0.0, 1.0};
    std::vector<double> drift;
    std::vector<double> proposal;
    std::vector<double> noise;

    void compute_drift(const std::vector<double>& lam)
    {
        const std::size_t n = lam.size();
        drift.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                double d = lam[i] - lam[j];
                // Exact ties contribute nothing by symmetry; noise separates them.
                if (d == 0.0) continue;
                if (std::abs(d) < p.eps) {
                    d = d > 0.0 ? p.eps : -p.eps;
                    ++stats.regularized;
                }
                acc += lam[i] / d;
            }
            drift[i] = 4.0 * (p.beta * acc + p.beta * nu - 2.0 * p.gamma * lam[i]);
        }
    }

    // Advances lam by dt; returns after a successful (possibly subdivided) step.
    void step(std::vector<double>& lam, double dt, int depth)
    {
        const std::size_t n = lam.size();
        compute_drift(lam);
        proposal.resize(n);
        noise.resize(n);
        for (int attempt = 0; attempt < p.max_redraws; ++attempt) {
            ++stats.attempts;
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                double x = lam[i] + drift[i] * dt + std::sqrt(8.0 * lam[i] * dt) * gauss(rng);
                proposal[i] = x;
                if (x < 0.0) ok = false;
            }
            if (ok) {
                CompensatedSum<double> s;
                for (double x : proposal) s.add(x);
                double total = s.value();
                for (std::size_t i = 0; i < n; ++i) lam[i] = proposal[i] / total;
                return;
            }
            ++stats.rejected;
        }
        if (depth >= 20)
            throw IntegrationFailure("eigenvalue step rejected after repeated step shrinking");
        ++stats.shrunk;
        step(lam, 0.5 * dt, depth + 1);
        step(lam, 0.5 * dt, depth + 1);
    }
};

SchmidtSpectrum snapshot(const std::vector<double>& lam, double nu)
{
    std::vector<double> s = lam;
    std::sort(s.begin(), s.end(), std::greater<>());
    return {std::move(s), nu};
}

}  // namespace

SpectrumTrajectory sde_evolve(const SchmidtSpectrum& init, double Y_start, double Y_end,
                              const SdeParams& params, Engine& rng)
{
    init.check(1e-10);
    if (!(Y_end >= Y_start)) throw InvalidArgument("Y_end must not precede Y_start");
    if (params.beta != 1 && params.beta != 2) throw InvalidArgument("beta must be 1 or 2");
    if (!(params.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    const int N = init.N();
    double dY = params.dY > 0.0 ? params.dY : 1e-4 / (static_cast<double>(N) * N);

    SpectrumTrajectory traj;
    std::vector<double> lam = init.lambdas;
    traj.Y.push_back(Y_start);
    traj.states.push_back(snapshot(lam, init.nu));

    double span = Y_end - Y_start;
    auto nsteps = static_cast<std::uint64_t>(std::ceil(span / dY - 1e-9));
    if (nsteps == 0) return traj;
    double dt = span / static_cast<double>(nsteps);

    Integrator integ{params, init.nu, rng, traj.stats, {}, {}, {}, {}};
    double next_record = params.record_interval > 0.0 ? Y_start + params.record_interval : Y_end;
    for (std::uint64_t s = 1; s <= nsteps; ++s) {
        integ.step(lam, dt, 0);
        ++traj.stats.steps;
        double y = Y_start + static_cast<double>(s) * dt;
        bool last = s == nsteps;
        if (params.record_interval > 0.0 && y >= next_record - 1e-12 * std::abs(next_record) && !last) {
            traj.Y.push_back(y);
            traj.states.push_back(snapshot(lam, init.nu));
            while (next_record <= y) next_record += params.record_interval;
        }
        if (last) {
            traj.Y.push_back(y);
            traj.states.push_back(snapshot(lam, init.nu));
        }
    }
    if (traj.stats.attempts >= 100 && traj.stats.rejection_rate() > 0.5)
        throw IntegrationFailure("step rejection rate above 50%; reduce dY");
    return traj;
}

void write_trajectory_csv(std::ostream& os, const SpectrumTrajectory& traj)
{
    if (traj.states.empty()) return;
    os << "Y";
    for (int i = 0; i < traj.states.front().N(); ++i) os << ",lambda" << (i + 1);
    os << '\n';
    char buf[64];
    for (std::size_t r = 0; r < traj.states.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.Y[r]);
        os << buf;
        for (double l : traj.states[r].lambdas) {
            std::snprintf(buf, sizeof buf, "%.17g", l);
            os << ',' << buf;
        }
        os << '\n';
    }
}

}  // namespace entlab
