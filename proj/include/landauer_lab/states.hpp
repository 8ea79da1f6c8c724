#pragma once

#include "landauer_lab/linalg.hpp"
#include "landauer_lab/numeric_policy.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace landauer_lab::states {

using linalg::Complex;
using linalg::ComplexMatrix;

/// Qubit in the (excited, ground) basis: [[p, x], [x, 1 - p]].
///
/// Valid states have 0 < p < 1/2 and |x| <= sqrt(p (1 - p)); the endpoints
/// p = 0 and p = 1/2 are admitted only when `allow_degenerate` is set.
class QubitState {
public:
    QubitState(double p, double x, bool allow_degenerate = false);

    double p() const noexcept { return p_; }
    double x() const noexcept { return x_; }
    double max_coherence() const noexcept;
    ComplexMatrix matrix() const;

private:
    double p_;
    double x_;
};

ComplexMatrix build_qubit(double p, double x, bool allow_degenerate = false);

struct Thermal {
    double temperature;  // T_R, k_B = 1
};
struct Fock {
    std::size_t n;
};
struct Coherent {
    Complex alpha;
};
struct Ctpq {
    double beta;
    std::uint64_t seed;
    std::size_t levels;
};
struct MixtureComponent {
    double weight;
    std::vector<Complex> amplitudes;  // Fock-basis coefficients
};
struct Mixture {
    std::vector<MixtureComponent> components;
};

using CavityKind = std::variant<Thermal, Fock, Coherent, Ctpq, Mixture>;

/// Recipe for the resonant-mode reservoir state.
struct CavitySpec {
    CavityKind kind;
    double omega = 1.0;

    std::string kind_name() const;
    /// Short human-readable label, e.g. "thermal(T_R=1.5)".
    std::string describe() const;
    /// Throws StateError on invalid parameters (weights, temperatures, ...).
    void validate() const;
};

inline constexpr std::string_view valid_cavity_kinds =
    "thermal, fock, coherent, ctpq, mixture, phase_averaged_coherent";

/// Equal-weight mixture of |alpha e^{i 2 pi k / phases}>, k = 0..phases-1.
CavitySpec phase_averaged_coherent(Complex alpha, std::size_t phases, double omega = 1.0);

/// Bose-Einstein occupation 1 / (e^{omega / T} - 1).
double bose_einstein(double omega, double temperature);

/// Smallest n_max meeting the tail-mass and headroom policy for this spec.
std::size_t required_levels(const CavitySpec& spec,
                            const NumericPolicy& tol = NumericPolicy::standard());

/// Population mass the (untruncated) state carries on levels >= n_max.
double tail_mass(const CavitySpec& spec, std::size_t n_max);

ComplexMatrix build_cavity(const CavitySpec& spec, std::size_t n_max,
                           const NumericPolicy& tol = NumericPolicy::standard());

/// Coherent-state amplitudes on n_max levels, renormalised on the kept block.
std::vector<Complex> coherent_amplitudes(Complex alpha, std::size_t n_max);

/// Raw CTPQ coefficients z_i for levels 0..levels-1 from the frozen Gaussian stream.
std::vector<Complex> ctpq_coefficients(std::uint64_t seed, std::size_t levels);

/// Normalised CTPQ vector sum_i z_i e^{-beta omega i / 2} |i>.
std::vector<Complex> ctpq_state_vector(std::span<const Complex> z, double beta, double omega);

struct ReservoirMoments {
    Complex mean_a;  // <a>
    double mean_n;   // <a^dagger a>
};

ReservoirMoments reservoir_moments(const ComplexMatrix& rho_f, std::size_t n_max);

/// Closed-form CTPQ ratios evaluated directly on the z sequence.
ReservoirMoments ctpq_analytic_moments(std::span<const Complex> z, double beta, double omega);

/// Unnormalised CTPQ sums: numerator of <a>, numerator of <n>, shared denominator.
struct CtpqSums {
    Complex a_numerator;
    double n_numerator;
    double denominator;
};
CtpqSums ctpq_sums(std::span<const Complex> z, double beta, double omega);

} // namespace landauer_lab::states
