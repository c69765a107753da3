#include "entlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "entlab/config.hpp"
#include "entlab/entropies.hpp"
#include "entlab/errors.hpp"
#include "entlab/numeric.hpp"
#include "entlab/theory.hpp"

namespace entlab {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn)
{
    if (n == 0) return;
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : hw;
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    next.store(n);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> log_grid(double lo, double hi, int count)
{
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw ConfigError("y_log needs 0 < lo < hi and count >= 2");
    std::vector<double> out;
    double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < count; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
    out.front() = lo;
    out.back() = hi;
    return out;
}

const std::set<std::string> kSweepKeys = {
    "families", "N", "N_nu", "beta", "gamma", "y_targets", "y_log", "samples", "seed",
    "omega", "ee_ratio", "fit", "theory", "sde_check", "threads", "out", "profile"};

}  // namespace

void SweepConfig::validate()
{
    if (!seed_set) throw ConfigError("seed is mandatory");
    if (families.empty()) throw ConfigError("no ensemble families");
    for (Family f : families)
        if (f == Family::Custom) throw ConfigError("sweeps support BE, PE, EE only");
    if (N < 1 || N_nu < N) throw ConfigError("requires 1 <= N <= N_nu");
    if (beta != 1 && beta != 2) throw ConfigError("beta must be 1 or 2");
    if (!(gamma > 0.0 && gamma < 0.5)) throw ConfigError("gamma must lie in (0, 1/2)");
    if (y_targets.empty()) throw ConfigError("empty target-Y grid");
    for (std::size_t i = 0; i < y_targets.size(); ++i) {
        if (!(y_targets[i] > 0.0)) throw ConfigError("target Y values must be positive");
        if (i && !(y_targets[i] > y_targets[i - 1]))
            throw ConfigError("target-Y grid must be sorted ascending");
    }
    if (samples < 1) throw ConfigError("samples must be positive");
    if (!(ee_ratio > 0.0)) throw ConfigError("ee_ratio must be positive");
    if (omega < 0.0) throw ConfigError("omega must be non-negative");
    warnings.clear();
    if (fit && samples < 500)
        warnings.push_back("samples < 500: fitted shapes are unreliable at this size");
}

void apply_profile(SweepConfig& cfg, const std::string& profile)
{
    if (profile == "desk") {
        cfg.N = 64;
        cfg.N_nu = 64;
        cfg.samples = 2000;
        cfg.y_targets = log_grid(1e-5, 1.0, 6);
    } else if (profile == "paper") {
        cfg.N = 1024;
        cfg.N_nu = 1024;
        cfg.samples = 100000;
        cfg.y_targets = log_grid(1e-5, 1.0, 6);
    } else {
        throw ConfigError("unknown profile '" + profile + "' (expected desk or paper)");
    }
    cfg.profile = profile;
}

SweepConfig parse_sweep_config(const std::string& text)
{
    KeyValues kv = parse_key_values(text);
    for (const auto& k : kv.order)
        if (!kSweepKeys.count(k)) throw ConfigError("unknown config key '" + k + "'");
    SweepConfig c;
    apply_profile(c, kv.get("profile", "desk"));
    if (kv.has("families")) {
        c.families.clear();
        for (const auto& f : kv.get_list("families")) c.families.push_back(parse_family(f));
    }
    c.N = kv.get_int("N", c.N);
    c.N_nu = kv.get_int("N_nu", kv.has("N") ? c.N : c.N_nu);
    c.beta = kv.get_int("beta", c.beta);
    c.gamma = kv.get_double("gamma", c.gamma);
    if (kv.has("y_targets") && kv.has("y_log")) throw ConfigError("give y_targets or y_log, not both");
    if (kv.has("y_targets")) c.y_targets = kv.get_doubles("y_targets");
    if (kv.has("y_log")) {
        auto parts = split(kv.require("y_log"), ':');
        if (parts.size() != 3) throw ConfigError("y_log must be lo:hi:count");
        c.y_targets = log_grid(parse_double(parts[0]), parse_double(parts[1]),
                               static_cast<int>(parse_double(parts[2])));
    }
    c.samples = kv.get_int("samples", c.samples);
    if (kv.has("seed")) {
        c.seed = kv.get_uint64("seed");
        c.seed_set = true;
    }
    c.omega = kv.get_double("omega", c.omega);
    c.ee_ratio = kv.get_double("ee_ratio", c.ee_ratio);
    c.fit = kv.get_bool("fit", c.fit);
    c.theory = kv.get_bool("theory", c.theory);
    c.sde_check = kv.get_bool("sde_check", c.sde_check);
    c.threads = kv.get_int("threads", c.threads);
    c.out_dir = kv.get("out", c.out_dir);
    return c;
}

SweepConfig load_sweep_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sweep_config(ss.str());
}

std::string canonical_config(const SweepConfig& c)
{
    std::ostringstream os;
    os << "profile = " << c.profile << '\n';
    os << "families = ";
    for (std::size_t i = 0; i < c.families.size(); ++i) os << (i ? "," : "") << family_name(c.families[i]);
    os << '\n';
    os << "N = " << c.N << "\nN_nu = " << c.N_nu << "\nbeta = " << c.beta << '\n';
    os << "gamma = " << fmt(c.gamma) << '\n';
    os << "y_targets = ";
    for (std::size_t i = 0; i < c.y_targets.size(); ++i) os << (i ? "," : "") << fmt(c.y_targets[i]);
    os << '\n';
    os << "samples = " << c.samples << "\nseed = " << c.seed << '\n';
    os << "omega = " << fmt(c.omega) << "\nee_ratio = " << fmt(c.ee_ratio) << '\n';
    os << "fit = " << (c.fit ? "true" : "false") << '\n';
    os << "theory = " << (c.theory ? "true" : "false") << '\n';
    os << "sde_check = " << (c.sde_check ? "true" : "false") << '\n';
    return os.str();
}

std::uint64_t fnv1a64(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool ResultSet::has_errors() const
{
    for (const auto& c : cells)
        if (!c.errors.empty()) return true;
    return false;
}

namespace {

void sample_cell(const SweepConfig& cfg, const EnsembleSpec& spec, CellResult& cell)
{
    const auto n = static_cast<std::size_t>(cfg.samples);
    cell.S2.assign(n, 0.0);
    cell.S3.assign(n, 0.0);
    cell.R1.assign(n, 0.0);
    cell.R2.assign(n, 0.0);
    cell.R0.assign(n, 0.0);
    cell.T1.assign(n, 0.0);
    std::vector<int> excluded(n, 0);
    const auto fam = static_cast<std::uint64_t>(cell.family);
    const auto yi = static_cast<std::uint64_t>(cell.y_index);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        Engine rng = make_stream(cfg.seed, {fam, yi, static_cast<std::uint64_t>(i)});
        StateMatrix m = sample_state_matrix(spec, rng);
        EntropyRecord r = entropy_record(schmidt_spectrum(m), 3);
        cell.S2[i] = r.S[1];
        cell.S3[i] = r.S[2];
        cell.R1[i] = r.R1;
        cell.R2[i] = r.R2;
        cell.R0[i] = r.R0;
        cell.T1[i] = r.T[0];
        excluded[i] = r.excluded;
    });
    for (int e : excluded) cell.excluded += e;
}

void fit_cell(const SweepConfig& cfg, CellResult& cell)
{
    cell.dist_S2 = empirical_distribution(cell.S2, Measure::S2);
    cell.dist_R1 = empirical_distribution(cell.R1, Measure::R1);
    std::optional<FitSelection> sel[2];
    std::string errs[2];
    parallel_for(2, cfg.threads, [&](std::size_t k) {
        try {
            sel[k] = select_best_fit(k == 0 ? *cell.dist_S2 : *cell.dist_R1);
        } catch (const Error& e) {
            errs[k] = std::string(k == 0 ? "S2" : "R1") + " fit: " + e.what();
        }
    });
    cell.fit_S2 = sel[0];
    cell.fit_R1 = sel[1];
    for (const auto& e : errs)
        if (!e.empty()) cell.errors.push_back(e);
}

double mean_of(const std::vector<double>& v)
{
    return sample_mean(v);
}

TheoryContext context_for(const SweepConfig& cfg, const CellResult& cell)
{
    return make_theory_context(cfg.N, cfg.N_nu, cfg.beta, cfg.gamma, mean_of(cell.S3),
                               1.0 + mean_of(cell.T1), mean_of(cell.R0), cfg.omega);
}

// Stationary variance predictions, plus density overlays propagated from the
// first cell of the family when the basis is evaluable.
void theory_for_family(const SweepConfig& cfg, std::vector<CellResult*>& cells)
{
    CellResult* first = nullptr;
    for (auto* c : cells)
        if (c->errors.empty() && c->dist_S2) {
            first = c;
            break;
        }
    for (auto* c : cells) {
        if (c->S3.empty() || !c->errors.empty()) continue;
        try {
            TheoryContext ctx = context_for(cfg, *c);
            TheoryOverlay o;
            o.S3_mean = ctx.S3_mean;
            o.t = ctx.t;
            o.R0_mean = ctx.R0_mean;
            o.omega = ctx.omega;
            o.stationary_var_S2 = ctx.S3_mean / ctx.omega;
            o.stationary_var_R1 = 1.0 / ctx.vn_a1();
            c->theory = o;
        } catch (const Error& e) {
            c->errors.push_back(std::string("theory: ") + e.what());
        }
    }
    if (!first || !first->theory) return;
    try {
        TheoryContext ctx = context_for(cfg, *first);
        const EmpiricalDistribution& d0 = *first->dist_S2;
        std::vector<double> xs, psi;
        double sc = ctx.purity_scale();
        auto cen = d0.centers();
        auto den = d0.density();
        for (std::size_t i = 0; i < cen.size(); ++i) {
            xs.push_back(sc * cen[i]);
            psi.push_back(den[i] / sc);
        }
        int m_max = std::min<int>(32, static_cast<int>(xs.size()));
        ctx.purity_coeffs = calibrate_purity(ctx, xs, psi, m_max).coeffs;
        for (auto* c : cells) {
            if (!c->theory || !c->dist_S2) continue;
            double Lambda = ctx.purity_rate() * std::max(0.0, c->realized() - first->realized());
            auto grid = c->dist_S2->centers();
            c->theory->grid_S2 = grid;
            c->theory->density_S2 = purity_density_table(ctx, grid, Lambda);
        }
    } catch (const Error& e) {
        for (auto* c : cells)
            if (c->theory) c->theory->note = std::string("density overlay skipped: ") + e.what();
    }
}

}  // namespace

ResultSet run_sweep(const SweepConfig& config)
{
    SweepConfig cfg = config;
    cfg.validate();
    ResultSet rs;
    rs.config = cfg;
    rs.warnings = cfg.warnings;

    for (Family f : cfg.families) {
        for (std::size_t yi = 0; yi < cfg.y_targets.size(); ++yi) {
            CellResult cell;
            cell.family = f;
            cell.y_index = static_cast<int>(yi);
            cell.target = cfg.y_targets[yi];
            try {
                cell.params = invert_to_parameter(f, cell.target, cfg.N, cfg.N_nu, cfg.gamma,
                                                  cfg.beta, cfg.ee_ratio);
                EnsembleSpec spec = build_family(f, cell.params, cfg.N, cfg.N_nu, cfg.beta);
                cell.spec_id = spec.id();
                cell.complexity = complexity_from_spec(spec, cfg.gamma);
                sample_cell(cfg, spec, cell);
                if (cfg.fit) fit_cell(cfg, cell);
            } catch (const RangeError& e) {
                cell.errors.push_back(std::string(e.what()) + " (reachable (" + fmt(e.lo()) + ", "
                                      + fmt(e.hi()) + "))");
            } catch (const Error& e) {
                cell.errors.push_back(e.what());
            }
            rs.cells.push_back(std::move(cell));
        }
    }

    for (Family f : cfg.families) {
        std::vector<CellResult*> fam;
        for (auto& c : rs.cells)
            if (c.family == f) fam.push_back(&c);
        if (cfg.theory) theory_for_family(cfg, fam);

        CurveResult cr;
        cr.family = f;
        std::vector<SigmaInput> s2, r1;
        for (auto* c : fam) {
            if (c->S2.size() < 2) continue;
            s2.push_back({c->realized(), c->S2});
            r1.push_back({c->realized(), c->R1});
        }
        try {
            cr.S2 = sigma_curve(s2);
            cr.R1 = sigma_curve(r1);
        } catch (const Error& e) {
            cr.error = e.what();
            rs.warnings.push_back(family_name(f) + " sigma curve: " + e.what());
        }
        rs.curves.push_back(std::move(cr));
    }

    if (cfg.sde_check) {
        SdeCheckConfig sc;
        sc.beta = cfg.beta;
        sc.gamma = cfg.gamma;
        sc.seed = make_stream(cfg.seed, {0x5de})();
        try {
            rs.sde = run_sde_check(sc);
            if (!rs.sde->pass()) rs.warnings.push_back("sde check: moments disagree beyond 3 standard errors");
        } catch (const Error& e) {
            rs.warnings.push_back(std::string("sde check: ") + e.what());
        }
    }
    return rs;
}

SdeCheckConfig parse_sde_check_config(const std::string& text)
{
    static const std::set<std::string> keys = {"N", "N_nu", "beta", "gamma", "dY", "trajectories",
                                               "horizon", "burn_in", "sample_every", "batches",
                                               "direct_samples", "moments", "seed"};
    KeyValues kv = parse_key_values(text);
    for (const auto& k : kv.order)
        if (!keys.count(k)) throw ConfigError("unknown sde-check key '" + k + "'");
    SdeCheckConfig c;
    c.N = kv.get_int("N", c.N);
    c.N_nu = kv.get_int("N_nu", c.N);
    c.beta = kv.get_int("beta", c.beta);
    c.gamma = kv.get_double("gamma", c.gamma);
    c.dY = kv.get_double("dY", c.dY);
    c.trajectories = kv.get_int("trajectories", c.trajectories);
    c.horizon = kv.get_double("horizon", c.horizon);
    c.burn_in = kv.get_double("burn_in", c.burn_in);
    c.sample_every = kv.get_double("sample_every", c.sample_every);
    c.batches = kv.get_int("batches", c.batches);
    c.direct_samples = kv.get_int("direct_samples", c.direct_samples);
    c.moments = kv.get_int("moments", c.moments);
    if (kv.has("seed")) c.seed = kv.get_uint64("seed");
    return c;
}

bool SdeCheckResult::pass(double z_max) const
{
    if (z.empty()) return false;
    for (double v : z)
        if (!(v <= z_max)) return false;
    return true;
}

SdeCheckResult run_sde_check(const SdeCheckConfig& cfg)
{
    if (cfg.N < 2 || cfg.N_nu < cfg.N) throw InvalidArgument("sde check needs 2 <= N <= N_nu");
    if (cfg.trajectories < 1 || cfg.batches < 2 || cfg.moments < 1 || cfg.direct_samples < 2)
        throw InvalidArgument("sde check needs trajectories >= 1, batches >= 2, moments >= 1");
    if (!(cfg.horizon > cfg.burn_in) || !(cfg.sample_every > 0.0))
        throw InvalidArgument("sde check needs horizon > burn_in and sample_every > 0");
    const double nu = 0.5 * (cfg.N_nu - cfg.N + 1);
    const auto T = static_cast<std::size_t>(cfg.trajectories);
    std::vector<std::vector<double>> lmax(T);
    std::vector<SdeStats> stats(T);
    parallel_for(T, 0, [&](std::size_t i) {
        Engine rng = make_stream(cfg.seed, {0x5de, static_cast<std::uint64_t>(i)});
        SdeParams p;
        p.gamma = cfg.gamma;
        p.beta = cfg.beta;
        p.dY = cfg.dY;
        p.record_interval = cfg.sample_every;
        SpectrumTrajectory tr = sde_evolve(separable_spectrum(cfg.N, nu), 0.0, cfg.horizon, p, rng);
        for (std::size_t k = 0; k < tr.states.size(); ++k)
            if (tr.Y[k] >= cfg.burn_in) lmax[i].push_back(tr.states[k].lambdas.front());
        stats[i] = tr.stats;
    });

    SdeCheckResult res;
    std::vector<double> pooled;
    for (std::size_t i = 0; i < T; ++i) {
        pooled.insert(pooled.end(), lmax[i].begin(), lmax[i].end());
        res.stats.steps += stats[i].steps;
        res.stats.attempts += stats[i].attempts;
        res.stats.rejected += stats[i].rejected;
        res.stats.regularized += stats[i].regularized;
        res.stats.shrunk += stats[i].shrunk;
    }
    res.sde_samples = pooled.size();
    const auto B = static_cast<std::size_t>(cfg.batches);
    if (pooled.size() < 2 * B) throw InsufficientData("too few SDE samples for batch means");

    EnsembleSpec spec = uniform_spec(cfg.N, cfg.N_nu, cfg.beta);
    std::vector<double> direct(static_cast<std::size_t>(cfg.direct_samples));
    parallel_for(direct.size(), 0, [&](std::size_t i) {
        Engine rng = make_stream(cfg.seed, {0xd17ec7, static_cast<std::uint64_t>(i)});
        direct[i] = schmidt_spectrum(sample_state_matrix(spec, rng)).lambdas.front();
    });

    for (int p = 1; p <= cfg.moments; ++p) {
        std::vector<double> batch_means;
        std::size_t per = pooled.size() / B;
        for (std::size_t b = 0; b < B; ++b) {
            CompensatedSum<double> s;
            for (std::size_t k = b * per; k < (b + 1) * per; ++k) s.add(std::pow(pooled[k], p));
            batch_means.push_back(s.value() / static_cast<double>(per));
        }
        double m = sample_mean(batch_means);
        double se = sample_std(batch_means) / std::sqrt(static_cast<double>(B));
        std::vector<double> dp;
        dp.reserve(direct.size());
        for (double v : direct) dp.push_back(std::pow(v, p));
        double dm = sample_mean(dp);
        double dse = sample_std(dp) / std::sqrt(static_cast<double>(dp.size()));
        res.sde_mean.push_back(m);
        res.sde_se.push_back(se);
        res.direct_mean.push_back(dm);
        res.direct_se.push_back(dse);
        res.z.push_back(std::abs(m - dm) / std::sqrt(se * se + dse * dse));
    }
    return res;
}

}  // namespace entlab
