#include "landauer_lab/states.hpp"

#include "landauer_lab/errors.hpp"
#include "landauer_lab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace landauer_lab::states {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double thermal_ratio(const Thermal& t, double omega)
{
    // nbar / (1 + nbar) = e^{-omega / T}
    return std::exp(-omega / t.temperature);
}

double vector_norm2(std::span<const Complex> v)
{
    double s = 0.0;
    for (const auto& z : v)
        s += std::norm(z);
    return s;
}

double vector_tail(std::span<const Complex> v, std::size_t from)
{
    double s = 0.0;
    for (std::size_t i = from; i < v.size(); ++i)
        s += std::norm(v[i]);
    return s;
}

/// Resizes to n_max and renormalises the kept block.
std::vector<Complex> fit_to_levels(std::span<const Complex> v, std::size_t n_max)
{
    std::vector<Complex> out(n_max, Complex{});
    std::copy_n(v.begin(), std::min(v.size(), n_max), out.begin());
    const double norm = std::sqrt(vector_norm2(out));
    if (norm == 0.0)
        throw StateError("state vector has no weight below the truncation");
    for (auto& z : out)
        z /= norm;
    return out;
}

double coherent_tail(Complex alpha, std::size_t n_max)
{
    const double mean = std::norm(alpha);
    if (mean == 0.0)
        return n_max == 0 ? 1.0 : 0.0;
    const double log_mean = std::log(mean);
    double s = 0.0;
    for (std::size_t k = n_max;; ++k) {
        const double kd = static_cast<double>(k);
        const double term = std::exp(-mean + kd * log_mean - std::lgamma(kd + 1.0));
        s += term;
        if (kd > mean && term < 1e-30 * std::max(s, 1e-300))
            break;
        if (k > n_max + 100000)
            break;
    }
    return std::min(s, 1.0);
}

} // namespace

QubitState::QubitState(double p, double x, bool allow_degenerate) : p_(p), x_(x)
{
    if (!std::isfinite(p) || !std::isfinite(x))
        throw StateError("qubit parameters must be finite");
    const bool interior = p > 0.0 && p < 0.5;
    const bool boundary_ok = allow_degenerate && p >= 0.0 && p <= 0.5;
    if (!interior && !boundary_ok)
        throw StateError("qubit p = " + std::to_string(p) +
                         " outside (0, 1/2); use --allow-degenerate for the endpoints");
    const double bound = max_coherence();
    if (std::abs(x) > bound * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()))
        throw StateError("qubit coherence |x| = " + std::to_string(std::abs(x)) +
                         " exceeds sqrt(p(1-p)) = " + std::to_string(bound));
}

double QubitState::max_coherence() const noexcept
{
    return std::sqrt(p_ * (1.0 - p_));
}

ComplexMatrix QubitState::matrix() const
{
    return ComplexMatrix{{p_, x_}, {x_, 1.0 - p_}};
}

ComplexMatrix build_qubit(double p, double x, bool allow_degenerate)
{
    return QubitState(p, x, allow_degenerate).matrix();
}

std::string CavitySpec::kind_name() const
{
    return std::visit(overloaded{[](const Thermal&) { return std::string("thermal"); },
                                 [](const Fock&) { return std::string("fock"); },
                                 [](const Coherent&) { return std::string("coherent"); },
                                 [](const Ctpq&) { return std::string("ctpq"); },
                                 [](const Mixture&) { return std::string("mixture"); }},
                      kind);
}

std::string CavitySpec::describe() const
{
    std::ostringstream s;
    s.precision(6);
    std::visit(overloaded{[&](const Thermal& t) { s << "thermal(T_R=" << t.temperature << ")"; },
                          [&](const Fock& f) { s << "fock(n=" << f.n << ")"; },
                          [&](const Coherent& c) {
                              s << "coherent(alpha=" << c.alpha.real() << (c.alpha.imag() < 0 ? "" : "+")
                                << c.alpha.imag() << "i)";
                          },
                          [&](const Ctpq& c) {
                              s << "ctpq(beta=" << c.beta << ",seed=" << c.seed
                                << ",levels=" << c.levels << ")";
                          },
                          [&](const Mixture& m) {
                              s << "mixture(" << m.components.size() << " components)";
                          }},
               kind);
    s << "@omega=" << omega;
    return s.str();
}

void CavitySpec::validate() const
{
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw StateError("cavity omega must be positive");
    std::visit(
        overloaded{
            [](const Thermal& t) {
                if (!(t.temperature > 0.0) || !std::isfinite(t.temperature))
                    throw StateError("thermal cavity requires T_R > 0");
            },
            [](const Fock&) {},
            [](const Coherent& c) {
                if (!std::isfinite(c.alpha.real()) || !std::isfinite(c.alpha.imag()))
                    throw StateError("coherent alpha must be finite");
            },
            [](const Ctpq& c) {
                if (!(c.beta > 0.0) || !std::isfinite(c.beta))
                    throw StateError("ctpq cavity requires beta > 0");
                if (c.levels < 2)
                    throw StateError("ctpq cavity requires levels >= 2");
            },
            [](const Mixture& m) {
                if (m.components.empty())
                    throw StateError("mixture needs at least one component");
                double total = 0.0;
                for (const auto& c : m.components) {
                    if (!(c.weight > 0.0))
                        throw StateError("mixture weights must be positive");
                    total += c.weight;
                    const double n2 = vector_norm2(c.amplitudes);
                    if (std::abs(n2 - 1.0) > 1e-9)
                        throw StateError("mixture component is not normalised (|psi|^2 = " +
                                         std::to_string(n2) + ")");
                }
                if (std::abs(total - 1.0) > 1e-10)
                    throw StateError("mixture weights sum to " + std::to_string(total) +
                                     ", expected 1");
            }},
        kind);
}

CavitySpec phase_averaged_coherent(Complex alpha, std::size_t phases, double omega)
{
    if (phases < 2)
        throw StateError("phase averaging needs at least two phases");
    CavitySpec probe{Coherent{alpha}, omega};
    const std::size_t levels = required_levels(probe);
    Mixture mix;
    for (std::size_t k = 0; k < phases; ++k) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(phases);
        mix.components.push_back(
            {1.0 / static_cast<double>(phases),
             coherent_amplitudes(alpha * std::polar(1.0, phi), levels)});
    }
    return CavitySpec{std::move(mix), omega};
}

double bose_einstein(double omega, double temperature)
{
    return 1.0 / std::expm1(omega / temperature);
}

double tail_mass(const CavitySpec& spec, std::size_t n_max)
{
    return std::visit(
        overloaded{
            [&](const Thermal& t) {
                return std::pow(thermal_ratio(t, spec.omega), static_cast<double>(n_max));
            },
            [&](const Fock& f) { return f.n >= n_max ? 1.0 : 0.0; },
            [&](const Coherent& c) { return coherent_tail(c.alpha, n_max); },
            [&](const Ctpq& c) {
                const auto z = ctpq_coefficients(c.seed, c.levels);
                const auto psi = ctpq_state_vector(z, c.beta, spec.omega);
                return vector_tail(psi, n_max);
            },
            [&](const Mixture& m) {
                double s = 0.0;
                for (const auto& comp : m.components)
                    s += comp.weight * vector_tail(comp.amplitudes, n_max) /
                         vector_norm2(comp.amplitudes);
                return s;
            }},
        spec.kind);
}

std::size_t required_levels(const CavitySpec& spec, const NumericPolicy& tol)
{
    spec.validate();
    if (const auto* c = std::get_if<Ctpq>(&spec.kind))
        return c->levels;

    std::size_t populated = 1;
    if (const auto* t = std::get_if<Thermal>(&spec.kind)) {
        const double q = thermal_ratio(*t, spec.omega);
        if (q > 0.0)
            populated = static_cast<std::size_t>(
                std::ceil(std::log(tol.tail_mass) / std::log(q)));
        while (populated > 1 && tail_mass(spec, populated - 1) < tol.tail_mass)
            --populated;
        while (tail_mass(spec, populated) >= tol.tail_mass)
            ++populated;
        // Hot modes: also bound the first-moment tail q^K (K + q / (1 - q)) so the
        // truncated <n> stays within ~tail_mass * nbar of Bose-Einstein.
        auto moment_tail = [&](std::size_t k) {
            const double kd = static_cast<double>(k);
            return std::pow(q, kd) * (kd + q / (1.0 - q));
        };
        while (q > 0.0 && moment_tail(populated) >= tol.tail_mass)
            ++populated;
    } else {
        while (tail_mass(spec, populated) >= tol.tail_mass)
            ++populated;
    }
    return std::max<std::size_t>(2, populated + tol.headroom_levels);
}

std::vector<Complex> coherent_amplitudes(Complex alpha, std::size_t n_max)
{
    std::vector<Complex> c(n_max);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t k = 1; k < n_max; ++k)
        c[k] = c[k - 1] * alpha / std::sqrt(static_cast<double>(k));
    return fit_to_levels(c, n_max);
}

std::vector<Complex> ctpq_coefficients(std::uint64_t seed, std::size_t levels)
{
    GaussianStream stream(seed);
    std::vector<Complex> z(levels);
    for (auto& zi : z)
        zi = stream.complex_normal();
    return z;
}

std::vector<Complex> ctpq_state_vector(std::span<const Complex> z, double beta, double omega)
{
    std::vector<Complex> psi(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        psi[i] = z[i] * std::exp(-0.5 * beta * omega * static_cast<double>(i));
    const double norm = std::sqrt(vector_norm2(psi));
    if (norm == 0.0)
        throw StateError("ctpq coefficients are all zero");
    for (auto& v : psi)
        v /= norm;
    return psi;
}

ComplexMatrix build_cavity(const CavitySpec& spec, std::size_t n_max, const NumericPolicy& tol)
{
    spec.validate();
    if (n_max < 2)
        throw TruncationError("cavity truncation n_max must be >= 2");
    const double tail = tail_mass(spec, n_max);
    if (tail >= tol.tail_mass)
        throw TruncationError("cavity '" + spec.kind_name() + "' leaves mass " +
                              std::to_string(tail) + " above level " +
                              std::to_string(n_max - 1) + " (limit " +
                              std::to_string(tol.tail_mass) + ")");

    ComplexMatrix rho = std::visit(
        overloaded{
            [&](const Thermal& t) {
                const double q = thermal_ratio(t, spec.omega);
                std::vector<double> w(n_max);
                double total = 0.0;
                for (std::size_t n = 0; n < n_max; ++n) {
                    w[n] = (1.0 - q) * std::pow(q, static_cast<double>(n));
                    total += w[n];
                }
                for (auto& v : w)
                    v /= total;
                return ComplexMatrix::diagonal(w);
            },
            [&](const Fock& f) {
                ComplexMatrix m(n_max, n_max);
                m(f.n, f.n) = 1.0;
                return m;
            },
            [&](const Coherent& c) {
                return ComplexMatrix::outer(coherent_amplitudes(c.alpha, n_max));
            },
            [&](const Ctpq& c) {
                const auto z = ctpq_coefficients(c.seed, c.levels);
                return ComplexMatrix::outer(
                    fit_to_levels(ctpq_state_vector(z, c.beta, spec.omega), n_max));
            },
            [&](const Mixture& m) {
                ComplexMatrix out(n_max, n_max);
                for (const auto& comp : m.components)
                    out += ComplexMatrix::outer(fit_to_levels(comp.amplitudes, n_max)) *
                           Complex{comp.weight};
                return out;
            }},
        spec.kind);

    const double trace_err = std::abs(rho.trace() - Complex{1.0});
    if (trace_err > tol.trace)
        throw StateError("constructed cavity state has trace error " + std::to_string(trace_err));
    return rho;
}

ReservoirMoments reservoir_moments(const ComplexMatrix& rho_f, std::size_t n_max)
{
    if (!rho_f.is_square() || rho_f.rows() != n_max)
        throw DimensionError("reservoir_moments: state is " + std::to_string(rho_f.rows()) +
                             "x" + std::to_string(rho_f.cols()) + ", expected n_max " +
                             std::to_string(n_max));
    Complex mean_a{};
    double mean_n = 0.0;
    for (std::size_t j = 0; j < n_max; ++j) {
        mean_n += static_cast<double>(j) * rho_f(j, j).real();
        if (j + 1 < n_max)
            mean_a += rho_f(j + 1, j) * std::sqrt(static_cast<double>(j + 1));
    }
    return {mean_a, mean_n};
}

CtpqSums ctpq_sums(std::span<const Complex> z, double beta, double omega)
{
    CtpqSums s{Complex{}, 0.0, 0.0};
    const double bw = beta * omega;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double id = static_cast<double>(i);
        const double w = std::norm(z[i]) * std::exp(-bw * id);
        s.denominator += w;
        s.n_numerator += w * id;
        if (i + 1 < z.size())
            s.a_numerator += std::conj(z[i]) * z[i + 1] * std::sqrt(id + 1.0) *
                             std::exp(-bw * (2.0 * id + 1.0) / 2.0);
    }
    return s;
}

ReservoirMoments ctpq_analytic_moments(std::span<const Complex> z, double beta, double omega)
{
    const auto s = ctpq_sums(z, beta, omega);
    if (s.denominator == 0.0)
        throw StateError("ctpq coefficients are all zero");
    return {s.a_numerator / s.denominator, s.n_numerator / s.denominator};
}

} // namespace landauer_lab::states
