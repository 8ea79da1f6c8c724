#pragma once

#include "landauer_lab/linalg.hpp"
#include "landauer_lab/numeric_policy.hpp"
#include "landauer_lab/perturbation.hpp"
#include "landauer_lab/states.hpp"

#include <cstddef>
#include <string_view>

namespace landauer_lab::oracle {

using linalg::ComplexMatrix;
using perturbation::CouplingConfig;
using states::QubitState;

enum class Model { rwa, full };

Model parse_model(std::string_view name);
std::string_view model_name(Model m);

struct JointEvolutionResult {
    ComplexMatrix qubit_final;  // interaction picture
    ComplexMatrix field_final;  // interaction picture
    ComplexMatrix joint_final;  // Schroedinger picture
    double delta_Q_exact = 0.0;
    double unitarity_defect = 0.0;
};

/// Joint qubit (x) mode Hamiltonian on n_max field levels.
ComplexMatrix joint_hamiltonian(const CouplingConfig& cfg, std::size_t n_max, Model model);

/// exp(-i H T) for one (cfg, n_max, model); reusable across initial states.
class JointPropagator {
public:
    JointPropagator(const CouplingConfig& cfg, std::size_t n_max, Model model,
                    const NumericPolicy& tol = NumericPolicy::standard());

    JointEvolutionResult evolve(const QubitState& q, const ComplexMatrix& cavity) const;

    std::size_t n_max() const noexcept { return n_max_; }
    double unitarity_defect() const noexcept { return defect_; }
    const ComplexMatrix& unitary() const noexcept { return unitary_; }

private:
    CouplingConfig cfg_;
    std::size_t n_max_;
    NumericPolicy tol_;
    ComplexMatrix unitary_;
    double defect_ = 0.0;
};

JointEvolutionResult evolve_exact(const QubitState& q, const ComplexMatrix& cavity,
                                  const CouplingConfig& cfg, Model model,
                                  const NumericPolicy& tol = NumericPolicy::standard());

/// omega (Tr[a^dagger a rho_after] - Tr[a^dagger a rho_before])
double heat_exact(const ComplexMatrix& field_before, const ComplexMatrix& field_after,
                  double omega);

/// Throws TruncationError unless the top `headroom` levels are empty.
void check_headroom(const ComplexMatrix& cavity, const NumericPolicy& tol);

} // namespace landauer_lab::oracle
