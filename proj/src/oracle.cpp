#include "landauer_lab/oracle.hpp"

#include "landauer_lab/errors.hpp"

#include <cmath>
#include <string>

namespace landauer_lab::oracle {

using linalg::Complex;

Model parse_model(std::string_view name)
{
    if (name == "rwa")
        return Model::rwa;
    if (name == "full")
        return Model::full;
    throw ConfigError("unknown oracle model '" + std::string(name) + "' (expected rwa|full)");
}

std::string_view model_name(Model m)
{
    return m == Model::rwa ? "rwa" : "full";
}

ComplexMatrix joint_hamiltonian(const CouplingConfig& cfg, std::size_t n_max, Model model)
{
    cfg.validate();
    const ComplexMatrix a = linalg::annihilation_op(n_max);
    const ComplexMatrix ad = a.adjoint();
    const ComplexMatrix number = ad * a;
    const ComplexMatrix id_f = ComplexMatrix::identity(n_max);
    const ComplexMatrix id_q = ComplexMatrix::identity(2);
    // (excited, ground) ordering: sigma^+ = |e><g|
    const ComplexMatrix sz{{1.0, 0.0}, {0.0, -1.0}};
    const Complex rot = std::polar(1.0, -cfg.theta);
    const ComplexMatrix sp{{0.0, rot}, {0.0, 0.0}};  // e^{-i theta} sigma^+
    const ComplexMatrix sm = sp.adjoint();

    NumericPolicy wide;
    wide.max_joint_dimension = 2 * n_max;
    ComplexMatrix h = linalg::kron(sz, id_f, wide) * Complex{0.5 * cfg.Omega};
    h += linalg::kron(id_q, number, wide) * Complex{cfg.omega};
    ComplexMatrix coupling = linalg::kron(sp, a, wide) * cfg.u;
    coupling += linalg::kron(sm, ad, wide) * std::conj(cfg.u);
    if (model == Model::full) {
        coupling += linalg::kron(sp, ad, wide) * std::conj(cfg.u);
        coupling += linalg::kron(sm, a, wide) * cfg.u;
    }
    h += coupling * Complex{cfg.lambda};
    return h;
}

void check_headroom(const ComplexMatrix& cavity, const NumericPolicy& tol)
{
    const std::size_t n = cavity.rows();
    if (n < tol.headroom_levels + 1)
        throw TruncationError("cavity truncation " + std::to_string(n) +
                              " leaves no headroom levels");
    for (std::size_t k = n - tol.headroom_levels; k < n; ++k)
        if (cavity(k, k).real() >= tol.tail_mass)
            throw TruncationError("cavity level " + std::to_string(k) + " carries population " +
                                  std::to_string(cavity(k, k).real()) + "; need " +
                                  std::to_string(tol.headroom_levels) +
                                  " empty top levels before evolution");
}

JointPropagator::JointPropagator(const CouplingConfig& cfg, std::size_t n_max, Model model,
                                 const NumericPolicy& tol)
    : cfg_(cfg), n_max_(n_max), tol_(tol)
{
    if (2 * n_max > tol.max_joint_dimension)
        throw DimensionError("joint dimension " + std::to_string(2 * n_max) +
                             " exceeds the configured maximum " +
                             std::to_string(tol.max_joint_dimension));
    unitary_ = linalg::expm_hermitian_generator(joint_hamiltonian(cfg, n_max, model), cfg.T, tol);
    const ComplexMatrix gram = unitary_.adjoint() * unitary_;
    defect_ = (gram - ComplexMatrix::identity(gram.rows())).max_abs();
    if (defect_ > tol.unitarity)
        throw NumericalError("propagator unitarity defect " + std::to_string(defect_));
}

JointEvolutionResult JointPropagator::evolve(const QubitState& q, const ComplexMatrix& cavity) const
{
    if (cavity.rows() != n_max_ || !cavity.is_square())
        throw DimensionError("cavity state dimension does not match the propagator");
    check_headroom(cavity, tol_);

    NumericPolicy wide = tol_;
    wide.max_joint_dimension = 2 * n_max_;
    const ComplexMatrix rho0 = linalg::kron(q.matrix(), cavity, wide);
    ComplexMatrix rho_t = unitary_ * rho0 * unitary_.adjoint();

    JointEvolutionResult out;
    out.unitarity_defect = defect_;
    ComplexMatrix qubit = linalg::partial_trace(rho_t, 2, n_max_, linalg::Subsystem::A);
    ComplexMatrix field = linalg::partial_trace(rho_t, 2, n_max_, linalg::Subsystem::B);

    const double top = field(n_max_ - 1, n_max_ - 1).real();
    if (top > tol_.top_level_leak)
        throw TruncationError("final top-level occupation " + std::to_string(top) +
                              " exceeds " + std::to_string(tol_.top_level_leak) +
                              "; raise n_max");

    out.delta_Q_exact = heat_exact(cavity, field, cfg_.omega);

    // Undo the free rotation: rho_I = e^{i H0 T} rho e^{-i H0 T}.
    qubit(0, 1) *= std::polar(1.0, cfg_.Omega * cfg_.T);
    qubit(1, 0) *= std::polar(1.0, -cfg_.Omega * cfg_.T);
    for (std::size_t m = 0; m < n_max_; ++m)
        for (std::size_t n = 0; n < n_max_; ++n)
            if (m != n)
                field(m, n) *= std::polar(
                    1.0, cfg_.omega * cfg_.T * (static_cast<double>(m) - static_cast<double>(n)));

    out.qubit_final = std::move(qubit);
    out.field_final = std::move(field);
    out.joint_final = std::move(rho_t);
    return out;
}

JointEvolutionResult evolve_exact(const QubitState& q, const ComplexMatrix& cavity,
                                  const CouplingConfig& cfg, Model model,
                                  const NumericPolicy& tol)
{
    return JointPropagator(cfg, cavity.rows(), model, tol).evolve(q, cavity);
}

double heat_exact(const ComplexMatrix& field_before, const ComplexMatrix& field_after,
                  double omega)
{
    if (field_before.rows() != field_after.rows() || !field_before.is_square() ||
        !field_after.is_square())
        throw DimensionError("heat_exact: field states have different dimensions");
    double dn = 0.0;
    for (std::size_t k = 0; k < field_before.rows(); ++k)
        dn += static_cast<double>(k) * (field_after(k, k).real() - field_before(k, k).real());
    return omega * dn;
}

} // namespace landauer_lab::oracle
