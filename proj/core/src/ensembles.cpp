#include "entlab/ensembles.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "entlab/config.hpp"
#include "entlab/errors.hpp"

namespace entlab {

std::string family_name(Family f)
{
    switch (f) {
    case Family::BE: return "BE";
    case Family::PE: return "PE";
    case Family::EE: return "EE";
    case Family::Custom: return "custom";
    }
    return "custom";
}

Family parse_family(const std::string& name)
{
    if (name == "BE") return Family::BE;
    if (name == "PE") return Family::PE;
    if (name == "EE") return Family::EE;
    if (name == "custom") return Family::Custom;
    throw InvalidArgument("unknown ensemble family '" + name + "'");
}

void EnsembleSpec::validate() const
{
    if (N < 1 || N_nu < N)
        throw InvalidArgument("ensemble requires 1 <= N <= N_nu");
    if (beta != 1 && beta != 2)
        throw InvalidArgument("beta must be 1 or 2");
    if (h.rows() != N || h.cols() != N_nu)
        throw InvalidArgument("variance grid shape does not match N x N_nu");
    if (bmean.rows() != N || bmean.cols() != N_nu)
        throw InvalidArgument("mean grid shape does not match N x N_nu");
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        double v = h.data()[i];
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidArgument("variances must be finite and non-negative");
        if (!std::isfinite(bmean.data()[i]))
            throw InvalidArgument("means must be finite");
    }
}

bool EnsembleSpec::has_zero_variance_columns() const
{
    for (Eigen::Index l = 0; l < h.cols(); ++l)
        if ((h.col(l).array() == 0.0).all()) return true;
    return false;
}

std::string EnsembleSpec::id() const
{
    char buf[160];
    switch (family) {
    case Family::BE:
        std::snprintf(buf, sizeof buf, "BE(mu=%.17g,N=%d,N_nu=%d,beta=%d)", params.mu, N, N_nu, beta);
        break;
    case Family::PE:
    case Family::EE:
        std::snprintf(buf, sizeof buf, "%s(a=%.17g,b=%.17g,N=%d,N_nu=%d,beta=%d)",
                      family_name(family).c_str(), params.a, params.b, N, N_nu, beta);
        break;
    default:
        std::snprintf(buf, sizeof buf, "custom(N=%d,N_nu=%d,beta=%d)", N, N_nu, beta);
    }
    return buf;
}

EnsembleSpec build_family(Family family, const FamilyParams& params, int N, int N_nu, int beta)
{
    if (N < 1 || N_nu < N)
        throw InvalidArgument("ensemble requires 1 <= N <= N_nu");
    EnsembleSpec s;
    s.N = N;
    s.N_nu = N_nu;
    s.beta = beta;
    s.family = family;
    s.params = params;
    s.h.resize(N, N_nu);
    s.bmean = Eigen::MatrixXd::Zero(N, N_nu);

    switch (family) {
    case Family::BE: {
        if (!(params.mu > 0.0) || !std::isfinite(params.mu))
            throw InvalidArgument("BE requires mu > 0");
        double v = 1.0 / (1.0 + params.mu);
        s.h.setConstant(v);
        s.h.col(0).setOnes();
        break;
    }
    case Family::PE:
    case Family::EE: {
        double p = params.a * params.b;
        if (!(params.a > 0.0) || !(params.b > 0.0) || !std::isfinite(p))
            throw InvalidArgument("PE/EE require a > 0 and b > 0");
        for (int k = 0; k < N; ++k)
            for (int l = 0; l < N_nu; ++l) {
                double r = static_cast<double>(k + 1) * l / p;
                s.h(k, l) = family == Family::PE ? 1.0 / (1.0 + r) : std::exp(-r);
            }
        break;
    }
    case Family::Custom:
        throw InvalidArgument("use make_custom for custom ensembles");
    }
    s.validate();
    return s;
}

EnsembleSpec make_custom(Eigen::MatrixXd h, Eigen::MatrixXd bmean, int beta)
{
    EnsembleSpec s;
    s.N = static_cast<int>(h.rows());
    s.N_nu = static_cast<int>(h.cols());
    s.beta = beta;
    s.h = std::move(h);
    s.bmean = std::move(bmean);
    s.family = Family::Custom;
    s.validate();
    return s;
}

EnsembleSpec uniform_spec(int N, int N_nu, int beta)
{
    return make_custom(Eigen::MatrixXd::Ones(N, N_nu), Eigen::MatrixXd::Zero(N, N_nu), beta);
}

int StateMatrix::rows() const
{
    return std::visit([](const auto& m) { return static_cast<int>(m.rows()); }, entries);
}

int StateMatrix::cols() const
{
    return std::visit([](const auto& m) { return static_cast<int>(m.cols()); }, entries);
}

StateMatrix sample_state_matrix(const EnsembleSpec& spec, Engine& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int N = spec.N;
    const int M = spec.N_nu;
    StateMatrix out;
    out.spec_id = spec.id();
    if (spec.beta == 1) {
        Eigen::MatrixXd c(N, M);
        for (int l = 0; l < M; ++l)
            for (int k = 0; k < N; ++k)
                c(k, l) = spec.bmean(k, l) + std::sqrt(spec.h(k, l)) * gauss(rng);
        out.entries = std::move(c);
    } else {
        Eigen::MatrixXcd c(N, M);
        for (int l = 0; l < M; ++l)
            for (int k = 0; k < N; ++k) {
                double sd = std::sqrt(spec.h(k, l));
                double re = spec.bmean(k, l) + sd * gauss(rng);
                double im = sd * gauss(rng);
                c(k, l) = {re, im};
            }
        out.entries = std::move(c);
    }
    return out;
}

std::pair<double, double> channel_demo_sample(double alpha, double gamma,
                                              const ChannelSigmas& sig, Engine& rng)
{
    if (sig.a < 0 || sig.b < 0 || sig.c < 0 || sig.d < 0)
        throw InvalidArgument("channel standard deviations must be non-negative");
    std::normal_distribution<double> gauss(0.0, 1.0);
    double a = sig.a * gauss(rng);
    double b = sig.b * gauss(rng);
    double c = sig.c * gauss(rng);
    double d = sig.d * gauss(rng);
    return {a * alpha + b * gamma, c * alpha + d * gamma};
}

double channel_marginal_variance(double alpha, double gamma, const ChannelSigmas& sig)
{
    return alpha * alpha * sig.a * sig.a + gamma * gamma * sig.b * sig.b;
}

double channel_marginal_density(double value, double alpha, double gamma,
                                const ChannelSigmas& sig)
{
    double var = channel_marginal_variance(alpha, gamma, sig);
    if (!(var > 0.0))
        throw DegenerateInput("channel marginal has zero variance");
    return std::exp(-0.5 * value * value / var) / std::sqrt(2.0 * M_PI * var);
}

std::string to_config_block(const EnsembleSpec& spec, std::uint64_t seed)
{
    if (spec.family == Family::Custom)
        throw InvalidArgument("custom ensembles have no declarative form");
    std::ostringstream os;
    char buf[64];
    os << "family = " << family_name(spec.family) << '\n';
    if (spec.family == Family::BE) {
        std::snprintf(buf, sizeof buf, "%.17g", spec.params.mu);
        os << "mu = " << buf << '\n';
    } else {
        std::snprintf(buf, sizeof buf, "%.17g", spec.params.a);
        os << "a = " << buf << '\n';
        std::snprintf(buf, sizeof buf, "%.17g", spec.params.b);
        os << "b = " << buf << '\n';
    }
    os << "N = " << spec.N << '\n';
    os << "N_nu = " << spec.N_nu << '\n';
    os << "beta = " << spec.beta << '\n';
    os << "seed = " << seed << '\n';
    return os.str();
}

EnsembleSpec spec_from_config_block(const std::string& text, std::uint64_t* seed)
{
    KeyValues kv = parse_key_values(text);
    Family f = parse_family(kv.require("family"));
    FamilyParams p;
    if (f == Family::BE) {
        p.mu = kv.get_double("mu");
    } else {
        p.a = kv.get_double("a");
        p.b = kv.get_double("b");
    }
    int N = kv.get_int("N");
    int N_nu = kv.get_int("N_nu");
    int beta = kv.has("beta") ? kv.get_int("beta") : 1;
    if (seed) *seed = kv.has("seed") ? kv.get_uint64("seed") : 0;
    return build_family(f, p, N, N_nu, beta);
}

void write_matrix_csv(std::ostream& os, const StateMatrix& m)
{
    char buf[64];
    if (const auto* r = std::get_if<Eigen::MatrixXd>(&m.entries)) {
        for (Eigen::Index i = 0; i < r->rows(); ++i) {
            for (Eigen::Index j = 0; j < r->cols(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", (*r)(i, j));
                os << (j ? "," : "") << buf;
            }
            os << '\n';
        }
    } else {
        const auto& c = std::get<Eigen::MatrixXcd>(m.entries);
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
            for (Eigen::Index j = 0; j < c.cols(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g%+.17gi", c(i, j).real(), c(i, j).imag());
                os << (j ? "," : "") << buf;
            }
            os << '\n';
        }
    }
}

void write_matrix_binary(std::ostream& os, const StateMatrix& m)
{
    // Header: rows, cols, complex flag as int32; then column-major doubles.
    std::int32_t hdr[3] = {m.rows(), m.cols(), m.is_complex() ? 1 : 0};
    os.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    std::visit(
        [&os](const auto& mat) {
            os.write(reinterpret_cast<const char*>(mat.data()),
                     static_cast<std::streamsize>(mat.size() * sizeof(*mat.data())));
        },
        m.entries);
    if (!os) throw IoError("failed to write state matrix");
}

}  // namespace entlab
