// entlab command line: sweeps, complexity evaluation, theory tables, fits
// and the SDE cross-check.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entlab/complexity.hpp"
#include "entlab/config.hpp"
#include "entlab/errors.hpp"
#include "entlab/experiments.hpp"
#include "entlab/statistics.hpp"
#include "entlab/theory.hpp"

using namespace entlab;

namespace {

struct Globals {
    std::string seed;
    std::string out;
    std::string profile;
};

std::string read_text(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_sweep(const Globals& g, const std::string& path)
{
    // Later keys override earlier ones, so command line values win.
    std::string text = read_text(path);
    if (!g.profile.empty()) text += "\nprofile = " + g.profile + "\n";
    if (!g.seed.empty()) text += "\nseed = " + g.seed + "\n";
    SweepConfig cfg = parse_sweep_config(text);
    if (!g.out.empty()) cfg.out_dir = g.out;
    cfg.validate();

    ResultSet rs = run_sweep(cfg);
    OutputManifest m = emit_outputs(rs, {OutputFormat::Csv, OutputFormat::Svg}, cfg.out_dir);
    for (const auto& c : rs.cells) {
        std::printf("%-3s target %-10.4g realized %-12.6g", family_name(c.family).c_str(), c.target,
                    c.realized());
        if (c.fit_S2) std::printf(" S2:%-8s", fit_family_name(c.fit_S2->best.family).c_str());
        if (c.fit_R1) std::printf(" R1:%-8s", fit_family_name(c.fit_R1->best.family).c_str());
        for (const auto& e : c.errors) std::printf(" error: %s", e.c_str());
        std::printf("\n");
    }
    if (rs.sde) std::printf("sde check %s\n", rs.sde->pass() ? "PASS" : "FAIL");
    for (const auto& w : rs.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("%zu files written to %s\n", m.files.size(), m.directory.c_str());
    return rs.has_errors() ? 1 : 0;
}

struct ComplexityArgs {
    std::string family = "BE";
    double mu = 1.0;
    double a = 1.0;
    double b = 1.0;
    int N = 64;
    int N_nu = 0;
    int beta = 1;
    double gamma = 0.25;
    double c0 = 0.0;
    double target = -1.0;
    double ee_ratio = 1.0;
};

int cmd_complexity(const ComplexityArgs& a)
{
    Family f = parse_family(a.family);
    int N_nu = a.N_nu > 0 ? a.N_nu : a.N;
    FamilyParams p{.mu = a.mu, .a = a.a, .b = a.b};
    if (a.target > 0.0) p = invert_to_parameter(f, a.target, a.N, N_nu, a.gamma, a.beta, a.ee_ratio);
    EnsembleSpec spec = build_family(f, p, a.N, N_nu, a.beta);
    ComplexityPoint c = complexity_from_spec(spec, a.gamma, a.c0);
    std::printf("spec   %s\n", spec.id().c_str());
    std::printf("Y      %.17g\nY0     %.17g\nY-Y0   %.17g\nM      %.17g\n", c.Y, c.Y0, c.excess(), c.M);
    std::printf("max Y-Y0 reachable %.17g\n", max_reachable_excess(a.N, N_nu, a.gamma, a.beta));
    return 0;
}

struct TheoryArgs {
    std::string measure = "S2";
    int N = 4;
    int N_nu = 0;
    int beta = 1;
    double gamma = 0.25;
    double S3 = 0.1;
    double t = 1.5;
    double R0 = 5.0;
    double omega = 0.0;
    double Lambda = 0.1;
    std::vector<double> coeffs{1.0};
    std::string grid = "0:1:101";
};

int cmd_theory(const Globals& g, const TheoryArgs& a)
{
    TheoryContext ctx = make_theory_context(a.N, a.N_nu > 0 ? a.N_nu : a.N, a.beta, a.gamma, a.S3,
                                            a.t, a.R0, a.omega);
    ctx.purity_coeffs = a.coeffs;
    ctx.vn_coeffs = a.coeffs;
    auto parts = split(a.grid, ':');
    if (parts.size() != 3) throw InvalidArgument("grid must be lo:hi:count");
    double lo = parse_double(parts[0]), hi = parse_double(parts[1]);
    int n = static_cast<int>(parse_double(parts[2]));
    if (n < 2 || !(hi > lo)) throw InvalidArgument("grid needs hi > lo and count >= 2");
    std::vector<double> grid;
    for (int i = 0; i < n; ++i) grid.push_back(lo + (hi - lo) * i / (n - 1));

    Measure m = parse_measure(a.measure);
    std::vector<double> raw, table;
    if (m == Measure::S2) {
        for (double s : grid) raw.push_back(purity_density(ctx, s, a.Lambda));
        table = purity_density_table(ctx, grid, a.Lambda);
    } else if (m == Measure::R1) {
        for (double r : grid) raw.push_back(vn_density(ctx, r, a.Lambda));
        table = vn_density_table(ctx, grid, a.Lambda);
    } else {
        throw InvalidArgument("theory-eval supports S2 and R1");
    }
    std::ofstream file;
    if (!g.out.empty()) {
        file.open(g.out);
        if (!file) throw IoError("cannot write '" + g.out + "'");
    }
    std::ostream& os = g.out.empty() ? std::cout : file;
    os << measure_name(m) << ",density_raw,density_normalized\n";
    char buf[128];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid[i], raw[i], table[i]);
        os << buf;
    }
    return 0;
}

std::vector<double> read_column(const std::string& path, const std::string& column)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    std::vector<double> out;
    int col = -1;
    bool header_checked = false;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cells = split(line, ',');
        if (!header_checked) {
            header_checked = true;
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (trim(cells[i]) == column) col = static_cast<int>(i);
            if (col >= 0) continue;
            if (!column.empty() && column != "0") {
                try {
                    col = std::stoi(column);
                } catch (const std::exception&) {
                    throw InvalidArgument("column '" + column + "' not found in header");
                }
            } else {
                col = 0;
            }
            try {
                parse_double(cells.at(static_cast<std::size_t>(col)));
            } catch (const std::exception&) {
                continue;  // non-numeric header line
            }
        }
        if (static_cast<std::size_t>(col) >= cells.size()) throw InvalidArgument("short row in " + path);
        out.push_back(parse_double(cells[static_cast<std::size_t>(col)]));
    }
    return out;
}

int cmd_fit(const Globals& g, const std::string& path, const std::string& column, bool center)
{
    std::vector<double> x = read_column(path, column);
    EmpiricalDistribution d = empirical_distribution(x, Measure::Other, center);
    FitSelection s = select_best_fit(d);
    std::ofstream file;
    if (!g.out.empty()) {
        file.open(g.out);
        if (!file) throw IoError("cannot write '" + g.out + "'");
    }
    std::ostream& os = g.out.empty() ? std::cout : file;
    os << "family,loc,scale,shape1,shape2,rss,n_bins,n,selected\n";
    char buf[256];
    for (const auto& c : s.candidates) {
        std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%ld,%d\n",
                      fit_family_name(c.family).c_str(), c.loc, c.scale, c.shape1, c.shape2, c.rss,
                      c.n_bins, c.n, c.family == s.best.family ? 1 : 0);
        os << buf;
    }
    for (const auto& f : s.failures) std::fprintf(stderr, "warning: %s\n", f.c_str());
    std::fprintf(stderr, "selected %s (n = %ld, mean %.6g, std %.6g, skewness %.4g)\n",
                 fit_family_name(s.best.family).c_str(), d.n, d.mean + d.shift, d.std, d.skewness);
    return 0;
}

int cmd_sde_check(const Globals& g, const std::string& path)
{
    std::string text = path.empty() ? std::string() : read_text(path);
    if (!g.seed.empty()) text += "\nseed = " + g.seed + "\n";
    SdeCheckResult r = run_sde_check(parse_sde_check_config(text));
    std::printf("moment,sde_mean,sde_se,direct_mean,direct_se,z\n");
    for (std::size_t k = 0; k < r.z.size(); ++k)
        std::printf("%zu,%.10g,%.4g,%.10g,%.4g,%.3f\n", k + 1, r.sde_mean[k], r.sde_se[k],
                    r.direct_mean[k], r.direct_se[k], r.z[k]);
    std::printf("# samples %zu, steps %llu, rejection rate %.4g, shrunk %llu, regularized %llu\n",
                r.sde_samples, static_cast<unsigned long long>(r.stats.steps),
                r.stats.rejection_rate(), static_cast<unsigned long long>(r.stats.shrunk),
                static_cast<unsigned long long>(r.stats.regularized));
    std::printf("%s\n", r.pass(3.0) ? "PASS" : "FAIL");
    return r.pass(3.0) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Entanglement statistics of structured Gaussian pure-state ensembles"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Master seed (overrides the config)");
    app.add_option("--out", g.out, "Output directory (sweep) or file (theory-eval, fit)");
    app.add_option("--profile", g.profile, "Size profile: desk or paper")
        ->check(CLI::IsMember({"desk", "paper"}));

    std::string sweep_cfg;
    auto* sweep = app.add_subcommand("sweep", "Sample, fit and summarize a complexity sweep");
    sweep->add_option("config", sweep_cfg, "key = value config file")->required();
    sweep->fallthrough();

    ComplexityArgs ca;
    auto* cx = app.add_subcommand("complexity", "Evaluate or invert the complexity parameter");
    cx->add_option("--family", ca.family, "BE, PE or EE");
    cx->add_option("--mu", ca.mu, "BE parameter");
    cx->add_option("--a", ca.a, "PE/EE parameter a");
    cx->add_option("--b", ca.b, "PE/EE parameter b");
    cx->add_option("--N", ca.N, "Rows of the state matrix");
    cx->add_option("--N-nu", ca.N_nu, "Columns (default N)");
    cx->add_option("--beta", ca.beta, "1 real, 2 complex");
    cx->add_option("--gamma", ca.gamma, "Confinement gamma");
    cx->add_option("--c0", ca.c0, "Additive constant");
    cx->add_option("--target", ca.target, "Invert: find parameters with this Y - Y0");
    cx->add_option("--ee-ratio", ca.ee_ratio, "a / b kept fixed when inverting EE");
    cx->fallthrough();

    TheoryArgs ta;
    auto* th = app.add_subcommand("theory-eval", "Tabulate a theoretical density");
    th->add_option("--measure", ta.measure, "S2 or R1");
    th->add_option("--N", ta.N);
    th->add_option("--N-nu", ta.N_nu);
    th->add_option("--beta", ta.beta);
    th->add_option("--gamma", ta.gamma);
    th->add_option("--S3", ta.S3, "Ensemble mean of S3");
    th->add_option("--t", ta.t, "1 + <T1>");
    th->add_option("--R0", ta.R0, "Ensemble mean of R0");
    th->add_option("--omega", ta.omega, "Trace filter width (default 4 N^2)");
    th->add_option("--Lambda", ta.Lambda, "Rescaled complexity distance");
    th->add_option("--coeffs", ta.coeffs, "Basis coefficients")->delimiter(',');
    th->add_option("--grid", ta.grid, "lo:hi:count");
    th->fallthrough();

    std::string fit_csv, fit_column;
    bool fit_center = false;
    auto* fit = app.add_subcommand("fit", "Fit the candidate families to one CSV column");
    fit->add_option("csv", fit_csv, "CSV file")->required();
    fit->add_option("--column", fit_column, "Header name or zero-based index");
    fit->add_flag("--center", fit_center, "Subtract the sample mean first");
    fit->fallthrough();

    std::string sde_cfg;
    auto* sde = app.add_subcommand("sde-check", "Compare the eigenvalue flow with direct sampling");
    sde->add_option("config", sde_cfg, "key = value config file (optional)");
    sde->fallthrough();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*sweep) return cmd_sweep(g, sweep_cfg);
        if (*cx) return cmd_complexity(ca);
        if (*th) return cmd_theory(g, ta);
        if (*fit) return cmd_fit(g, fit_csv, fit_column, fit_center);
        if (*sde) return cmd_sde_check(g, sde_cfg);
    } catch (const RangeError& e) {
        std::fprintf(stderr, "error: %s (reachable interval (%g, %g))\n", e.what(), e.lo(), e.hi());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
