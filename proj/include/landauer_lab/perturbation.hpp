#pragma once

#include "landauer_lab/linalg.hpp"
#include "landauer_lab/numeric_policy.hpp"
#include "landauer_lab/states.hpp"

#include <complex>

namespace landauer_lab::perturbation {

using linalg::Complex;
using linalg::ComplexMatrix;
using states::QubitState;
using states::ReservoirMoments;

enum class SwitchingProfile { constant_window };

/// Qubit-mode coupling with monopole mu = cos(theta) sigma_x + sin(theta) sigma_y,
/// switched on for 0 <= tau <= T.
struct CouplingConfig {
    double lambda = 0.01;
    double Omega = 1.0;
    double omega = 1.0;
    Complex u{1.0, 0.0};
    double T = 10.0;
    double theta = 0.0;
    SwitchingProfile chi = SwitchingProfile::constant_window;

    void validate() const;
    bool resonant() const noexcept { return omega == Omega; }
};

enum class Sign { plus, minus };
enum class Order { first = 1, second = 2 };

/// final = initial + [[delta_p, -delta_d], [-conj(delta_d), -delta_p]]
struct QubitCorrection {
    double delta_p = 0.0;
    Complex delta_d{};
    Order order = Order::first;

    ComplexMatrix matrix() const;
    QubitCorrection& operator+=(const QubitCorrection& o);
};

struct PerturbativeReport {
    QubitCorrection correction;
    double delta_Q = 0.0;         // energy handed to the field
    double delta_E_qubit = 0.0;
    Complex resonance_integral{};  // I_-
};

/// I_{+-} = int_0^T e^{i(+-Omega + omega) tau} u d tau for a static qubit.
Complex resonance_integral(const CouplingConfig& cfg, Sign sign);

/// Amplitude multiplying sigma^- a^dagger in U^(1) (up to -i lambda): the
/// resonance integral of conj(u), which coincides with I_- for real u.
Complex dyson_amplitude(const CouplingConfig& cfg);

QubitCorrection first_order_qubit(const QubitState& q, const ReservoirMoments& m,
                                  const CouplingConfig& cfg);
double first_order_heat(const QubitState& q, const ReservoirMoments& m, const CouplingConfig& cfg);

/// Independent of theta. The U1 rho U1^dagger cross term proportional to
/// x <a^2> is not included; it vanishes for phase-invariant reservoirs.
QubitCorrection second_order_qubit(const QubitState& q, const ReservoirMoments& m,
                                   const CouplingConfig& cfg);
double second_order_heat(const QubitState& q, const ReservoirMoments& m,
                         const CouplingConfig& cfg);

/// Corrections and heat summed through `order` (1 or 2).
PerturbativeReport perturbative_report(const QubitState& q, const ReservoirMoments& m,
                                       const CouplingConfig& cfg, int order);

struct PerturbativeFinalState {
    ComplexMatrix qubit_final;
    double field_energy_change;
    PerturbativeReport report;
};

/// Product initial state q (x) cavity; the returned qubit matrix is clipped
/// to the PSD cone, PerturbationBreakdownError if the raw matrix misses it by
/// more than (lambda |I|)^3 or if lambda |I| >= 1.
PerturbativeFinalState perturbative_final_states(const QubitState& q, const ComplexMatrix& cavity,
                                                 const CouplingConfig& cfg, int order,
                                                 const NumericPolicy& tol =
                                                     NumericPolicy::standard());

} // namespace landauer_lab::perturbation
