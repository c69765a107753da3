#include "entlab/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "entlab/errors.hpp"
#include "entlab/numeric.hpp"

namespace entlab {

std::string measure_name(Measure m)
{
    switch (m) {
    case Measure::S2: return "S2";
    case Measure::R1: return "R1";
    case Measure::R2: return "R2";
    case Measure::R0: return "R0";
    case Measure::Other: return "other";
    }
    return "other";
}

Measure parse_measure(const std::string& name)
{
    if (name == "S2") return Measure::S2;
    if (name == "R1") return Measure::R1;
    if (name == "R2") return Measure::R2;
    if (name == "R0") return Measure::R0;
    return Measure::Other;
}

std::string fit_family_name(FitFamily f)
{
    switch (f) {
    case FitFamily::LogGamma: return "loggamma";
    case FitFamily::Gamma: return "gamma";
    case FitFamily::Beta: return "beta";
    case FitFamily::Normal: return "normal";
    }
    return "normal";
}

FitFamily parse_fit_family(const std::string& name)
{
    if (name == "loggamma") return FitFamily::LogGamma;
    if (name == "gamma") return FitFamily::Gamma;
    if (name == "beta") return FitFamily::Beta;
    if (name == "normal") return FitFamily::Normal;
    throw InvalidArgument("unknown fit family '" + name + "'");
}

double sample_mean(std::span<const double> x)
{
    if (x.empty()) throw InsufficientData("mean of an empty sample");
    CompensatedSum<double> s;
    for (double v : x) s.add(v);
    return s.value() / static_cast<double>(x.size());
}

double sample_std(std::span<const double> x)
{
    if (x.size() < 2) throw InsufficientData("standard deviation needs two samples");
    double m = sample_mean(x);
    CompensatedSum<double> s;
    for (double v : x) s.add((v - m) * (v - m));
    return std::sqrt(s.value() / static_cast<double>(x.size() - 1));
}

double quantile(std::vector<double> x, double q)
{
    if (x.empty()) throw InsufficientData("quantile of an empty sample");
    std::sort(x.begin(), x.end());
    double pos = q * static_cast<double>(x.size() - 1);
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= x.size()) return x.back();
    double f = pos - static_cast<double>(i);
    return x[i] + f * (x[i + 1] - x[i]);
}

std::vector<double> EmpiricalDistribution::centers() const
{
    std::vector<double> c;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) c.push_back(0.5 * (edges[i] + edges[i + 1]));
    return c;
}

std::vector<double> EmpiricalDistribution::density() const
{
    std::vector<double> d;
    for (std::size_t i = 0; i < counts.size(); ++i)
        d.push_back(static_cast<double>(counts[i]) / (static_cast<double>(n) * (edges[i + 1] - edges[i])));
    return d;
}

EmpiricalDistribution empirical_distribution(std::span<const double> samples, Measure measure,
                                             bool center, BinningRule rule)
{
    if (samples.size() < 100)
        throw InsufficientData("empirical distribution needs at least 100 samples, got "
                               + std::to_string(samples.size()));
    for (double v : samples)
        if (!std::isfinite(v)) throw InvalidArgument("non-finite sample");
    EmpiricalDistribution d;
    d.measure = measure;
    d.centered = center;
    d.n = static_cast<long>(samples.size());
    double m = sample_mean(samples);
    d.shift = center ? m : 0.0;
    d.samples.reserve(samples.size());
    for (double v : samples) d.samples.push_back(v - d.shift);
    d.mean = m - d.shift;
    d.std = sample_std(d.samples);
    CompensatedSum<double> m2, m3;
    for (double v : d.samples) {
        double c = v - d.mean;
        m2.add(c * c);
        m3.add(c * c * c);
    }
    double n = static_cast<double>(d.n);
    d.skewness = m2.value() > 0.0 ? (m3.value() / n) / std::pow(m2.value() / n, 1.5) : 0.0;

    auto [lo_it, hi_it] = std::minmax_element(d.samples.begin(), d.samples.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (hi == lo) {
        double half = 0.5 * std::max(std::abs(lo), 1.0) * 1e-9;
        d.edges = {lo - half, lo + half};
        d.counts = {d.n};
        return d;
    }
    int bins = 0;
    double iqr = quantile(d.samples, 0.75) - quantile(d.samples, 0.25);
    auto sturges = [&] { return static_cast<int>(std::ceil(std::log2(n))) + 1; };
    switch (rule.kind) {
    case BinningRule::Kind::Fixed:
        if (rule.bins < 1) throw InvalidArgument("fixed binning needs bins >= 1");
        bins = rule.bins;
        break;
    case BinningRule::Kind::Sturges:
        bins = sturges();
        break;
    case BinningRule::Kind::FreedmanDiaconis:
        if (iqr > 0.0) {
            double width = 2.0 * iqr / std::cbrt(n);
            bins = static_cast<int>(std::ceil((hi - lo) / width));
        } else {
            bins = sturges();
        }
        break;
    }
    bins = std::clamp(bins, 1, std::max(1, rule.max_bins));
    d.edges.resize(static_cast<std::size_t>(bins) + 1);
    double w = (hi - lo) / bins;
    for (int i = 0; i <= bins; ++i) d.edges[i] = lo + w * i;
    d.edges.back() = hi;
    d.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : d.samples) {
        auto i = static_cast<long>((v - lo) / w);
        i = std::clamp(i, 0L, static_cast<long>(bins) - 1);
        ++d.counts[static_cast<std::size_t>(i)];
    }
    return d;
}

int FitResult::shape_count() const
{
    switch (family) {
    case FitFamily::Normal: return 0;
    case FitFamily::Gamma: return 1;
    case FitFamily::LogGamma: return 1;
    case FitFamily::Beta: return 2;
    }
    return 0;
}

double FitResult::pdf(double x) const
{
    double y = (x - loc) / scale;
    switch (family) {
    case FitFamily::Normal:
        return std::exp(-0.5 * y * y) / (scale * std::sqrt(2.0 * M_PI));
    case FitFamily::Gamma:
        if (y <= 0.0) return 0.0;
        return std::exp((shape1 - 1.0) * std::log(y) - y - std::lgamma(shape1)) / scale;
    case FitFamily::LogGamma:
        return std::exp(shape1 * y - std::exp(y) - std::lgamma(shape1)) / scale;
    case FitFamily::Beta:
        if (y <= 0.0 || y >= 1.0) return 0.0;
        return std::exp((shape1 - 1.0) * std::log(y) + (shape2 - 1.0) * std::log1p(-y)
                        + std::lgamma(shape1 + shape2) - std::lgamma(shape1) - std::lgamma(shape2))
               / scale;
    }
    return 0.0;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Nelder-Mead minimization of f over R^n (GSL nmsimplex2), restarted once
// from the first optimum.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double step)
{
    struct Ctx {
        const std::function<double(const std::vector<double>&)>* f;
        std::vector<double> buf;
    } ctx{&f, std::vector<double>(x0.size())};
    gsl_multimin_function fn;
    fn.n = x0.size();
    fn.params = &ctx;
    fn.f = [](const gsl_vector* v, void* p) -> double {
        auto* c = static_cast<Ctx*>(p);
        for (std::size_t i = 0; i < c->buf.size(); ++i) c->buf[i] = gsl_vector_get(v, i);
        double r = (*c->f)(c->buf);
        return std::isfinite(r) ? r : std::numeric_limits<double>::max();
    };
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    gsl_vector* x = gsl_vector_alloc(fn.n);
    gsl_vector* ss = gsl_vector_alloc(fn.n);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, fn.n);
    for (int round = 0; round < 2; ++round) {
        for (std::size_t i = 0; i < fn.n; ++i) gsl_vector_set(x, i, x0[i]);
        gsl_vector_set_all(ss, round == 0 ? step : 0.1 * step);
        gsl_multimin_fminimizer_set(s, &fn, x, ss);
        for (int it = 0; it < 4000; ++it) {
            if (gsl_multimin_fminimizer_iterate(s)) break;
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-10) == GSL_SUCCESS) break;
        }
        for (std::size_t i = 0; i < fn.n; ++i) x0[i] = gsl_vector_get(s->x, i);
    }
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(ss);
    gsl_vector_free(x);
    gsl_set_error_handler(old);
    return x0;
}

double rss_of(const FitResult& r, const EmpiricalDistribution& d)
{
    auto c = d.centers();
    auto den = d.density();
    CompensatedSum<double> s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double e = r.pdf(c[i]) - den[i];
        s.add(e * e);
    }
    return s.value();
}

double loglik_of(const FitResult& r, const std::vector<double>& x)
{
    CompensatedSum<double> s;
    for (double v : x) {
        double p = r.pdf(v);
        if (!(p > 0.0)) return kNegInf;
        s.add(std::log(p));
    }
    return s.value();
}

FitResult fit_normal(const EmpiricalDistribution& d)
{
    FitResult r;
    r.family = FitFamily::Normal;
    r.loc = d.mean;
    double n = static_cast<double>(d.n);
    r.scale = d.std * std::sqrt((n - 1.0) / n);
    return r;
}

// Solve ln v - digamma(v) = s for v > 0.
double gamma_shape_from_log_gap(double s)
{
    double v = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int i = 0; i < 50; ++i) {
        double f = std::log(v) - boost::math::digamma(v) - s;
        double fp = 1.0 / v - boost::math::trigamma(v);
        double nv = v - f / fp;
        if (!(nv > 0.0)) nv = 0.5 * v;
        if (std::abs(nv - v) < 1e-14 * v) {
            v = nv;
            break;
        }
        v = nv;
    }
    return v;
}

FitResult fit_gamma(const EmpiricalDistribution& d)
{
    const auto& x = d.samples;
    const double xmin = *std::min_element(x.begin(), x.end());
    const double sd = d.std;
    const double n = static_cast<double>(d.n);

    // For a fixed loc the shape and scale MLE are closed-form up to a 1-D root.
    auto profile = [&](double u, double* shape, double* scale) {
        double loc = xmin - sd * std::exp(u);
        CompensatedSum<double> sy, sl;
        for (double v : x) {
            double y = v - loc;
            sy.add(y);
            sl.add(std::log(y));
        }
        double ybar = sy.value() / n;
        double lbar = sl.value() / n;
        double gap = std::log(ybar) - lbar;
        if (!(gap > 0.0)) return kNegInf;
        double v = gamma_shape_from_log_gap(gap);
        double sc = ybar / v;
        if (shape) *shape = v;
        if (scale) *scale = sc;
        return n * ((v - 1.0) * lbar - v - std::lgamma(v) - v * std::log(sc));
    };

    const double ulo = -14.0;
    const double uhi = 7.0;
    const int grid = 85;
    double best_u = ulo;
    double best_l = kNegInf;
    for (int i = 0; i < grid; ++i) {
        double u = ulo + (uhi - ulo) * i / (grid - 1);
        double l = profile(u, nullptr, nullptr);
        if (l > best_l) {
            best_l = l;
            best_u = u;
        }
    }
    if (!std::isfinite(best_l)) throw FitFailure("gamma profile likelihood is not finite");
    double h = (uhi - ulo) / (grid - 1);
    double a = std::max(ulo, best_u - h);
    double b = std::min(uhi, best_u + h);
    auto res = boost::math::tools::brent_find_minima(
        [&](double u) {
            double l = profile(u, nullptr, nullptr);
            return std::isfinite(l) ? -l : std::numeric_limits<double>::max();
        },
        a, b, 50);
    double u = -res.second > best_l ? res.first : best_u;
    FitResult r;
    r.family = FitFamily::Gamma;
    profile(u, &r.shape1, &r.scale);
    r.loc = xmin - sd * std::exp(u);
    return r;
}

// Skewness of the loggamma distribution for shape c.
double loggamma_skew(double c)
{
    double t1 = boost::math::trigamma(c);
    return boost::math::polygamma(2, c) / std::pow(t1, 1.5);
}

FitResult fit_loggamma(const EmpiricalDistribution& d)
{
    // Moment-matched start: skewness fixes c, then scale and loc.
    double g = d.skewness;
    double lc;
    if (g >= loggamma_skew(std::exp(14.0))) {
        lc = 14.0;
    } else if (g <= loggamma_skew(std::exp(-5.0))) {
        lc = -5.0;
    } else {
        double lo = -5.0, hi = 14.0;
        for (int i = 0; i < 100; ++i) {
            double mid = 0.5 * (lo + hi);
            if (loggamma_skew(std::exp(mid)) < g)
                lo = mid;
            else
                hi = mid;
        }
        lc = 0.5 * (lo + hi);
    }
    const double m0 = d.mean;
    const double s0 = d.std;
    // Parameters: (mean offset in sd units, log sd ratio, log c).
    auto unpack = [&](const std::vector<double>& p) {
        FitResult r;
        r.family = FitFamily::LogGamma;
        double c = std::exp(std::clamp(p[2], -12.0, 25.0));
        double mean = m0 + s0 * p[0];
        double sd = s0 * std::exp(p[1]);
        r.shape1 = c;
        r.scale = sd / std::sqrt(boost::math::trigamma(c));
        r.loc = mean - r.scale * boost::math::digamma(c);
        return r;
    };
    const auto& x = d.samples;
    auto nll = [&](const std::vector<double>& p) {
        FitResult r = unpack(p);
        double c = r.shape1;
        double lgc = std::lgamma(c);
        CompensatedSum<double> s;
        for (double v : x) {
            double y = (v - r.loc) / r.scale;
            s.add(c * y - std::exp(y));
        }
        double l = s.value() - static_cast<double>(x.size()) * (lgc + std::log(r.scale));
        return std::isfinite(l) ? -l : std::numeric_limits<double>::max();
    };
    std::vector<double> p = nelder_mead(nll, {0.0, 0.0, lc}, 0.3);
    return unpack(p);
}

FitResult fit_beta(const EmpiricalDistribution& d)
{
    const auto& x = d.samples;
    auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    double range = *hi_it - *lo_it;
    FitResult base;
    base.family = FitFamily::Beta;
    base.loc = *lo_it - 0.01 * range;
    base.scale = 1.02 * range;
    std::vector<double> ly, l1y;
    ly.reserve(x.size());
    l1y.reserve(x.size());
    CompensatedSum<double> sm, sv;
    for (double v : x) {
        double y = (v - base.loc) / base.scale;
        ly.push_back(std::log(y));
        l1y.push_back(std::log1p(-y));
        sm.add(y);
    }
    double n = static_cast<double>(x.size());
    double m = sm.value() / n;
    for (double v : x) {
        double y = (v - base.loc) / base.scale;
        sv.add((y - m) * (y - m));
    }
    double var = sv.value() / n;
    double common = std::max(m * (1.0 - m) / var - 1.0, 1e-3);
    CompensatedSum<double> sly, sl1y;
    for (std::size_t i = 0; i < ly.size(); ++i) {
        sly.add(ly[i]);
        sl1y.add(l1y[i]);
    }
    double mean_ly = sly.value() / n;
    double mean_l1y = sl1y.value() / n;
    auto nll = [&](const std::vector<double>& p) {
        double a = std::exp(std::clamp(p[0], -20.0, 30.0));
        double b = std::exp(std::clamp(p[1], -20.0, 30.0));
        double lb = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
        return -n * ((a - 1.0) * mean_ly + (b - 1.0) * mean_l1y - lb - std::log(base.scale));
    };
    std::vector<double> p =
        nelder_mead(nll, {std::log(m * common), std::log((1.0 - m) * common)}, 0.5);
    base.shape1 = std::exp(std::clamp(p[0], -20.0, 30.0));
    base.shape2 = std::exp(std::clamp(p[1], -20.0, 30.0));
    return base;
}

}  // namespace

FitResult fit_family(const EmpiricalDistribution& dist, FitFamily family)
{
    if (dist.n < 2 || dist.samples.empty()) throw InsufficientData("no samples to fit");
    if (!(dist.std > 0.0)) throw DegenerateData("all samples are equal; nothing to fit");
    FitResult r;
    switch (family) {
    case FitFamily::Normal: r = fit_normal(dist); break;
    case FitFamily::Gamma: r = fit_gamma(dist); break;
    case FitFamily::LogGamma: r = fit_loggamma(dist); break;
    case FitFamily::Beta: r = fit_beta(dist); break;
    }
    if (!(r.scale > 0.0) || !std::isfinite(r.loc) || !std::isfinite(r.shape1)
        || !std::isfinite(r.shape2))
        throw FitFailure(fit_family_name(family) + " fit produced invalid parameters");
    r.n = dist.n;
    r.n_bins = static_cast<int>(dist.counts.size());
    r.rss = rss_of(r, dist);
    r.loglik = loglik_of(r, dist.samples);
    if (!std::isfinite(r.rss)) throw FitFailure(fit_family_name(family) + " fit has non-finite RSS");
    return r;
}

FitSelection select_best_fit(const EmpiricalDistribution& dist, std::span<const FitFamily> families)
{
    if (families.empty()) throw InvalidArgument("no candidate families");
    FitSelection sel;
    for (FitFamily f : families) {
        try {
            sel.candidates.push_back(fit_family(dist, f));
        } catch (const DegenerateData&) {
            throw;
        } catch (const Error& e) {
            sel.failures.push_back(fit_family_name(f) + ": " + e.what());
        }
    }
    if (sel.candidates.empty()) {
        std::string msg = "all candidate fits failed";
        for (const auto& s : sel.failures) msg += "; " + s;
        throw FitFailure(msg);
    }
    double min_rss = std::numeric_limits<double>::infinity();
    for (const auto& c : sel.candidates) min_rss = std::min(min_rss, c.rss);
    const FitResult* best = nullptr;
    for (const auto& c : sel.candidates) {
        if (c.rss > min_rss * (1.0 + kRssTieRelative)) continue;
        if (!best || c.shape_count() < best->shape_count()
            || (c.shape_count() == best->shape_count() && c.rss < best->rss))
            best = &c;
    }
    sel.best = *best;
    return sel;
}

SigmaCurve sigma_curve(std::span<const SigmaInput> runs)
{
    std::vector<const SigmaInput*> order;
    for (const auto& r : runs) order.push_back(&r);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->Y < b->Y; });
    std::vector<double> distinct;
    for (auto* r : order) {
        if (!(r->Y > 0.0)) throw InvalidArgument("sigma curve needs positive Y values");
        if (distinct.empty() || r->Y != distinct.back()) distinct.push_back(r->Y);
    }
    if (distinct.size() < 5) throw InsufficientData("sigma curve needs at least 5 Y values");
    if (distinct.back() / distinct.front() < 100.0)
        throw InsufficientData("sigma curve Y values must span at least two decades");
    SigmaCurve c;
    for (auto* r : order) {
        std::vector<double> v = r->values;
        std::sort(v.begin(), v.end());  // order-independent summation
        c.Y.push_back(r->Y);
        c.sigma.push_back(sample_std(v));
    }
    double mx = *std::max_element(c.sigma.begin(), c.sigma.end());
    for (double s : c.sigma) c.normalized.push_back(mx > 0.0 ? s / mx : 0.0);
    return c;
}

}  // namespace entlab
