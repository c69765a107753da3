#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entlab/errors.hpp"
#include "entlab/experiments.hpp"
#include "entlab/svg.hpp"

namespace entlab {
namespace {

namespace fs = std::filesystem;

std::string g(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

class Writer {
public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& content)
    {
        fs::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw IoError("cannot write '" + p.string() + "'");
        out << content;
        out.close();
        if (!out) throw IoError("failed writing '" + p.string() + "'");
        files_.push_back(name);
    }

    const std::vector<std::string>& files() const { return files_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

void fit_rows(std::ostringstream& os, const SweepConfig& cfg, const CellResult& c,
              const char* measure, const FitResult& f)
{
    os << family_name(c.family) << ',' << cfg.N << ',' << g(c.realized()) << ',' << measure << ','
       << fit_family_name(f.family) << ',' << g(f.loc) << ',' << g(f.scale) << ','
       << (f.shape_count() >= 1 ? g(f.shape1) : "") << ',' << (f.shape_count() >= 2 ? g(f.shape2) : "")
       << ',' << g(f.rss) << ',' << f.n << '\n';
}

std::string samples_csv(const ResultSet& rs)
{
    std::ostringstream os;
    os << "ensemble,Y,sample_id,S2,R1,R2,R0\n";
    for (const auto& c : rs.cells) {
        std::string prefix = family_name(c.family) + ',' + g(c.realized()) + ',';
        for (std::size_t i = 0; i < c.S2.size(); ++i)
            os << prefix << i << ',' << g(c.S2[i]) << ',' << g(c.R1[i]) << ',' << g(c.R2[i]) << ','
               << g(c.R0[i]) << '\n';
    }
    return os.str();
}

std::string fits_csv(const ResultSet& rs, bool all)
{
    std::ostringstream os;
    os << "ensemble,N,Y,measure,family,loc,scale,shape1,shape2,rss,n\n";
    for (const auto& c : rs.cells) {
        const std::pair<const char*, const std::optional<FitSelection>*> sels[] = {{"S2", &c.fit_S2},
                                                                                  {"R1", &c.fit_R1}};
        for (const auto& [m, s] : sels) {
            if (!*s) continue;
            if (all)
                for (const auto& f : (*s)->candidates) fit_rows(os, rs.config, c, m, f);
            else
                fit_rows(os, rs.config, c, m, (*s)->best);
        }
    }
    return os.str();
}

std::string curve_csv(const ResultSet& rs)
{
    std::ostringstream os;
    os << "ensemble,Y,sigma_S2,sigma_R1,sigma_over_max_S2,sigma_over_max_R1\n";
    for (const auto& cr : rs.curves) {
        if (!cr.S2 || !cr.R1) continue;
        for (std::size_t i = 0; i < cr.S2->Y.size(); ++i)
            os << family_name(cr.family) << ',' << g(cr.S2->Y[i]) << ',' << g(cr.S2->sigma[i]) << ','
               << g(cr.R1->sigma[i]) << ',' << g(cr.S2->normalized[i]) << ','
               << g(cr.R1->normalized[i]) << '\n';
    }
    return os.str();
}

std::string histograms_csv(const ResultSet& rs)
{
    std::ostringstream os;
    os << "ensemble,Y,measure,bin_lo,bin_hi,count,density,fit_pdf\n";
    for (const auto& c : rs.cells) {
        const std::tuple<const char*, const std::optional<EmpiricalDistribution>*,
                         const std::optional<FitSelection>*>
            items[] = {{"S2", &c.dist_S2, &c.fit_S2}, {"R1", &c.dist_R1, &c.fit_R1}};
        for (const auto& [m, d, s] : items) {
            if (!*d) continue;
            auto den = (*d)->density();
            auto cen = (*d)->centers();
            for (std::size_t i = 0; i < den.size(); ++i) {
                os << family_name(c.family) << ',' << g(c.realized()) << ',' << m << ','
                   << g((*d)->edges[i]) << ',' << g((*d)->edges[i + 1]) << ',' << (*d)->counts[i] << ','
                   << g(den[i]) << ',' << (*s ? g((*s)->best.pdf(cen[i])) : "") << '\n';
            }
        }
    }
    return os.str();
}

std::string sde_check_csv(const SdeCheckResult& r)
{
    std::ostringstream os;
    os << "moment,sde_mean,sde_se,direct_mean,direct_se,z\n";
    for (std::size_t k = 0; k < r.z.size(); ++k)
        os << k + 1 << ',' << g(r.sde_mean[k]) << ',' << g(r.sde_se[k]) << ','
           << g(r.direct_mean[k]) << ',' << g(r.direct_se[k]) << ',' << g(r.z[k]) << '\n';
    return os.str();
}

std::string theory_csv(const ResultSet& rs)
{
    std::ostringstream os;
    os << "ensemble,Y,quantity,x,value\n";
    for (const auto& c : rs.cells) {
        if (!c.theory) continue;
        const TheoryOverlay& t = *c.theory;
        std::string p = family_name(c.family) + ',' + g(c.realized()) + ',';
        double var_s2 = 0.0, var_r1 = 0.0;
        if (c.S2.size() > 1) {
            var_s2 = std::pow(sample_std(c.S2), 2);
            var_r1 = std::pow(sample_std(c.R1), 2);
        }
        os << p << "S3_mean,," << g(t.S3_mean) << '\n';
        os << p << "t,," << g(t.t) << '\n';
        os << p << "R0_mean,," << g(t.R0_mean) << '\n';
        os << p << "omega,," << g(t.omega) << '\n';
        os << p << "stationary_var_S2,," << g(t.stationary_var_S2) << '\n';
        os << p << "empirical_var_S2,," << g(var_s2) << '\n';
        os << p << "stationary_var_R1,," << g(t.stationary_var_R1) << '\n';
        os << p << "empirical_var_R1,," << g(var_r1) << '\n';
        for (std::size_t i = 0; i < t.grid_S2.size(); ++i)
            os << p << "density_S2," << g(t.grid_S2[i]) << ',' << g(t.density_S2[i]) << '\n';
    }
    return os.str();
}

std::string sigma_svg(const ResultSet& rs)
{
    PlotPanel s2{"sigma(S2) / max", "Y", "sigma / sigma_max", true, false, 1.0, {}};
    PlotPanel r1{"sigma(R1) / max", "Y", "sigma / sigma_max", true, false, 1.0, {}};
    int k = 0;
    for (const auto& cr : rs.curves) {
        if (!cr.S2 || !cr.R1) continue;
        std::string col = kColors[k++ % 5];
        s2.series.push_back({family_name(cr.family), cr.S2->Y, cr.S2->normalized, col, true, false});
        r1.series.push_back({family_name(cr.family), cr.R1->Y, cr.R1->normalized, col, true, false});
    }
    return render_svg({s2, r1});
}

PlotPanel overlay_panel(const char* measure, const EmpiricalDistribution& d,
                        const std::optional<FitSelection>& fit, double Y)
{
    // Centered histogram with the fitted pdf, symmetric-log density axis.
    PlotPanel p;
    p.title = std::string(measure) + " at Y = " + g(Y);
    p.xlabel = std::string(measure) + " - mean";
    p.ylabel = "density";
    p.symlog_y = true;
    auto den = d.density();
    PlotSeries h{"histogram", {}, {}, "#555555", false, true};
    for (std::size_t i = 0; i < den.size(); ++i) {
        h.x.push_back(d.edges[i] - d.mean);
        h.y.push_back(den[i]);
    }
    if (!den.empty()) {
        h.x.push_back(d.edges.back() - d.mean);
        h.y.push_back(den.back());
    }
    p.series.push_back(std::move(h));
    if (fit) {
        PlotSeries f{fit_family_name(fit->best.family), {}, {}, "#d62728", false, false};
        const int n = 200;
        double lo = d.edges.front(), hi = d.edges.back();
        for (int i = 0; i <= n; ++i) {
            double x = lo + (hi - lo) * i / n;
            f.x.push_back(x - d.mean);
            f.y.push_back(fit->best.pdf(x));
        }
        p.series.push_back(std::move(f));
    }
    return p;
}

}  // namespace

OutputManifest emit_outputs(const ResultSet& rs, const std::vector<OutputFormat>& formats,
                            const std::string& dir)
{
    OutputManifest man;
    man.directory = dir;
    if (formats.empty()) return man;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    Writer w(dir);
    bool csv = std::find(formats.begin(), formats.end(), OutputFormat::Csv) != formats.end();
    bool svg = std::find(formats.begin(), formats.end(), OutputFormat::Svg) != formats.end();
    if (csv) {
        w.write("samples.csv", samples_csv(rs));
        w.write("fits.csv", fits_csv(rs, false));
        w.write("candidates.csv", fits_csv(rs, true));
        w.write("curve.csv", curve_csv(rs));
        w.write("histograms.csv", histograms_csv(rs));
        if (rs.config.theory) w.write("theory.csv", theory_csv(rs));
        if (rs.sde) w.write("sde_check.csv", sde_check_csv(*rs.sde));
    }
    if (svg) {
        w.write("sigma_curve.svg", sigma_svg(rs));
        for (const auto& c : rs.cells) {
            if (!c.fit_S2 && !c.fit_R1) continue;
            std::vector<PlotPanel> panels;
            if (c.dist_S2) panels.push_back(overlay_panel("S2", *c.dist_S2, c.fit_S2, c.realized()));
            if (c.dist_R1) panels.push_back(overlay_panel("R1", *c.dist_R1, c.fit_R1, c.realized()));
            w.write("cell_" + family_name(c.family) + "_y" + std::to_string(c.y_index) + ".svg",
                    render_svg(panels));
        }
    }

    nlohmann::ordered_json j;
    std::string canon = canonical_config(rs.config);
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(canon)));
    j["tool"] = "entlab";
    j["config_hash_fnv1a64"] = hash;
    j["seed"] = rs.config.seed;
    j["profile"] = rs.config.profile;
    j["config"] = canon;
    j["files"] = w.files();
    j["warnings"] = rs.warnings;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& c : rs.cells) {
        nlohmann::ordered_json e;
        e["ensemble"] = family_name(c.family);
        e["y_index"] = c.y_index;
        e["target"] = c.target;
        e["realized"] = c.realized();
        e["spec"] = c.spec_id;
        e["excluded_eigenvalues"] = c.excluded;
        if (c.fit_S2) e["fit_S2"] = fit_family_name(c.fit_S2->best.family);
        if (c.fit_R1) e["fit_R1"] = fit_family_name(c.fit_R1->best.family);
        if (c.theory && !c.theory->note.empty()) e["theory_note"] = c.theory->note;
        e["errors"] = c.errors;
        cells.push_back(e);
    }
    j["cells"] = cells;
    if (rs.sde) j["sde_check_pass"] = rs.sde->pass();
    w.write("manifest.json", j.dump(2) + "\n");
    man.files = w.files();
    return man;
}

}  // namespace entlab
