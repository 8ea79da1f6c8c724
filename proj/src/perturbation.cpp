#include "landauer_lab/perturbation.hpp"

#include "landauer_lab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace landauer_lab::perturbation {

namespace {

constexpr Complex I{0.0, 1.0};

void require_resonance(const CouplingConfig& cfg)
{
    cfg.validate();
    if (!cfg.resonant())
        throw ConfigError("perturbative engine requires resonance omega == Omega (omega = " +
                          std::to_string(cfg.omega) + ", Omega = " + std::to_string(cfg.Omega) +
                          ")");
}

Complex window_integral(Complex amplitude, double detuning, double T)
{
    if (detuning == 0.0)
        return amplitude * T;
    return amplitude * (std::exp(I * (detuning * T)) - 1.0) / (I * detuning);
}

// e^{-i theta} <a> conj(I_-): the combination every first-order entry depends on.
Complex rotated_drive(const ReservoirMoments& m, const CouplingConfig& cfg)
{
    return std::polar(1.0, -cfg.theta) * m.mean_a * std::conj(dyson_amplitude(cfg));
}

} // namespace

void CouplingConfig::validate() const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ConfigError("coupling.lambda must be finite and non-negative");
    if (!(T > 0.0) || !std::isfinite(T))
        throw ConfigError("coupling.T must be positive");
    if (!(Omega > 0.0) || !(omega > 0.0))
        throw ConfigError("coupling.Omega and coupling.omega must be positive");
    if (!std::isfinite(theta))
        throw ConfigError("coupling.theta must be finite");
}

ComplexMatrix QubitCorrection::matrix() const
{
    return ComplexMatrix{{delta_p, -delta_d}, {-std::conj(delta_d), -delta_p}};
}

QubitCorrection& QubitCorrection::operator+=(const QubitCorrection& o)
{
    delta_p += o.delta_p;
    delta_d += o.delta_d;
    order = std::max(order, o.order);
    return *this;
}

Complex resonance_integral(const CouplingConfig& cfg, Sign sign)
{
    const double detuning = cfg.omega + (sign == Sign::plus ? cfg.Omega : -cfg.Omega);
    return window_integral(cfg.u, detuning, cfg.T);
}

Complex dyson_amplitude(const CouplingConfig& cfg)
{
    return window_integral(std::conj(cfg.u), cfg.omega - cfg.Omega, cfg.T);
}

QubitCorrection first_order_qubit(const QubitState& q, const ReservoirMoments& m,
                                  const CouplingConfig& cfg)
{
    require_resonance(cfg);
    const Complex z = rotated_drive(m, cfg);
    QubitCorrection c;
    c.order = Order::first;
    c.delta_p = 2.0 * cfg.lambda * q.x() * z.imag();
    c.delta_d = I * cfg.lambda * (1.0 - 2.0 * q.p()) * z;
    return c;
}

double first_order_heat(const QubitState& q, const ReservoirMoments& m, const CouplingConfig& cfg)
{
    require_resonance(cfg);
    return -2.0 * cfg.lambda * q.x() * cfg.omega * rotated_drive(m, cfg).imag();
}

QubitCorrection second_order_qubit(const QubitState& q, const ReservoirMoments& m,
                                   const CouplingConfig& cfg)
{
    require_resonance(cfg);
    const double strength = cfg.lambda * cfg.lambda * std::norm(dyson_amplitude(cfg));
    QubitCorrection c;
    c.order = Order::second;
    c.delta_p = strength * ((1.0 - 2.0 * q.p()) * m.mean_n - q.p());
    c.delta_d = strength * q.x() * (m.mean_n + 0.5);
    return c;
}

double second_order_heat(const QubitState& q, const ReservoirMoments& m,
                         const CouplingConfig& cfg)
{
    require_resonance(cfg);
    const double strength = cfg.lambda * cfg.lambda * std::norm(dyson_amplitude(cfg));
    return strength * cfg.omega * ((2.0 * q.p() - 1.0) * m.mean_n + q.p());
}

PerturbativeReport perturbative_report(const QubitState& q, const ReservoirMoments& m,
                                       const CouplingConfig& cfg, int order)
{
    if (order < 0 || order > 2)
        throw ConfigError("perturbative order must be 0, 1 or 2, got " + std::to_string(order));
    require_resonance(cfg);
    PerturbativeReport r;
    r.resonance_integral = resonance_integral(cfg, Sign::minus);
    r.correction.order = Order::first;
    if (order >= 1) {
        r.correction += first_order_qubit(q, m, cfg);
        r.delta_Q += first_order_heat(q, m, cfg);
    }
    if (order >= 2) {
        r.correction += second_order_qubit(q, m, cfg);
        r.delta_Q += second_order_heat(q, m, cfg);
    }
    r.delta_E_qubit = cfg.Omega * r.correction.delta_p;
    return r;
}

PerturbativeFinalState perturbative_final_states(const QubitState& q, const ComplexMatrix& cavity,
                                                 const CouplingConfig& cfg, int order,
                                                 const NumericPolicy& tol)
{
    const auto moments = states::reservoir_moments(cavity, cavity.rows());
    auto report = perturbative_report(q, moments, cfg, order);
    ComplexMatrix raw = q.matrix() + report.correction.matrix();

    const double expansion = cfg.lambda * std::abs(dyson_amplitude(cfg));
    if (order > 0 && expansion >= 1.0)
        throw PerturbationBreakdownError("lambda |I| = " + std::to_string(expansion) +
                                         " is not small; the Dyson series does not apply");
    const auto eig = linalg::herm_eig(raw, tol);
    const double breakdown = std::pow(expansion, 3);
    if (eig.eigenvalues.front() < -std::max(breakdown, tol.psd_floor))
        throw PerturbationBreakdownError(
            "perturbative qubit state has eigenvalue " + std::to_string(eig.eigenvalues.front()) +
            ", beyond the (lambda |I|)^3 = " + std::to_string(breakdown) + " allowance");

    ComplexMatrix final_state = raw;
    if (eig.eigenvalues.front() < 0.0) {
        // Clip onto the PSD cone, keeping unit trace.
        std::vector<double> clipped = eig.eigenvalues;
        for (auto& v : clipped)
            v = std::max(v, 0.0);
        const double total = clipped[0] + clipped[1];
        final_state = ComplexMatrix(2, 2);
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t c = 0; c < 2; ++c)
                    final_state(r, c) += clipped[k] / total * eig.eigenvectors(r, k) *
                                         std::conj(eig.eigenvectors(c, k));
    }
    const double heat = report.delta_Q;
    return {std::move(final_state), heat, std::move(report)};
}

} // namespace landauer_lab::perturbation
