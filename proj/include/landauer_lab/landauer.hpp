#pragma once

#include "landauer_lab/linalg.hpp"
#include "landauer_lab/numeric_policy.hpp"
#include "landauer_lab/perturbation.hpp"
#include "landauer_lab/states.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace landauer_lab::landauer {

using linalg::Complex;
using linalg::ComplexMatrix;
using perturbation::CouplingConfig;
using perturbation::QubitCorrection;
using states::QubitState;
using states::ReservoirMoments;

/// (p_minus, p_plus)
using EigenPair = std::pair<double, double>;

struct EntropyPair {
    double S_initial = 0.0;
    double S_final = 0.0;
    double delta_S = 0.0;  // S_initial - S_final
};

struct ScanPoint {
    double p = 0.0;
    double x = 0.0;
    double theta = 0.0;
};

/// Rectangular (p, x, theta) grid; x spans [-sqrt(p(1-p)), sqrt(p(1-p))] per p.
struct ScanGrid {
    double p_min = 0.01;
    double p_max = 0.49;
    std::size_t p_points = 49;
    std::size_t x_points = 41;
    std::vector<double> thetas{0.0, 0.78539816339744831, 1.5707963267948966};

    std::vector<double> p_values() const;
    std::vector<double> x_values(double p) const;
    double p_step() const;
    std::size_t size() const { return p_points * x_points * thetas.size(); }
    std::string describe() const;
    void validate() const;
};

struct ScanMeta {
    std::string grid;
    std::size_t points = 0;
    ScanPoint argmin;
    double tolerance = 0.0;
    /// For every p, the second-order Delta S is largest at the x grid point nearest 0.
    bool delta_s_peaks_at_zero_coherence = true;
};

struct LandauerVerdict {
    double delta_Q = 0.0;
    double T_R = 0.0;
    double delta_S = 0.0;
    double entropy_production = 0.0;  // delta_Q - T_R delta_S
    bool holds = true;
    std::optional<ScanPoint> witness;
    ScanMeta scan_meta;
};

EigenPair qubit_eigenvalues(double p, double x);

/// Eigenvalues of [[p, x], [x, 1-p]] + [[dp, -dd], [-conj(dd), -dp]] in closed form.
EigenPair perturbed_eigenvalues(double p, double x, double delta_p, Complex delta_d,
                                const NumericPolicy& tol = NumericPolicy::standard());

/// -sum l ln l over an eigenvalue pair, with 0 ln 0 = 0 and clipping to [0, 1].
double binary_entropy(EigenPair eig);

double von_neumann_entropy(const ComplexMatrix& rho,
                           const NumericPolicy& tol = NumericPolicy::standard());

EntropyPair entropy_change(const QubitState& q, const QubitCorrection& correction,
                           const NumericPolicy& tol = NumericPolicy::standard());

/// Linear-in-correction part of the eigenvalue discriminant, -8x Re(dd) + (8p-4) dp.
double discriminant_linear_term(const QubitState& q, const QubitCorrection& correction);

/// Single-point verdict; `tolerance` is the absolute slack on production.
LandauerVerdict entropy_production(const QubitState& q, const QubitCorrection& correction,
                                   double delta_Q, double T_R, double tolerance = 0.0);

/// Second-order production over the grid. holds <=> min production >=
/// -tol.production * lambda^2 |I|^2.
LandauerVerdict scan_bound(const ReservoirMoments& moments, const CouplingConfig& cfg, double T_R,
                           const ScanGrid& grid,
                           const NumericPolicy& tol = NumericPolicy::standard());

/// lambda^2 |I_-|^2, the scale of every second-order quantity.
double second_order_scale(const CouplingConfig& cfg);

} // namespace landauer_lab::landauer
