#include "landauer_lab/errors.hpp"
#include "landauer_lab/landauer.hpp"
#include "landauer_lab/oracle.hpp"
#include "landauer_lab/perturbation.hpp"
#include "landauer_lab/states.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace landauer_lab;
using namespace landauer_lab::perturbation;
using states::CavitySpec;
using states::QubitState;
using states::ReservoirMoments;

namespace {

const double pi = std::numbers::pi;

CouplingConfig base(double lambda = 0.01)
{
    CouplingConfig c;
    c.lambda = lambda;
    return c;
}

/// Composite Simpson rule for int_0^T e^{i k tau} u d tau.
Complex simpson(double k, Complex u, double T, int n = 20000)
{
    const double h = T / n;
    Complex s = u * (1.0 + std::exp(Complex(0.0, k * T)));
    for (int i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * u * std::exp(Complex(0.0, k * h * i));
    return s * (h / 3.0);
}

} // namespace

TEST_CASE("resonance integral closed form")
{
    auto c = base();
    CHECK(resonance_integral(c, Sign::minus) == Complex(10.0));

    c.T = 2.0 * pi;
    CHECK(std::abs(resonance_integral(c, Sign::plus)) < 1e-15);

    CouplingConfig off = base();
    off.omega = 1.1;
    CHECK(std::abs(resonance_integral(off, Sign::minus) - simpson(0.1, 1.0, 10.0)) < 1e-10);
    CHECK(std::abs(resonance_integral(off, Sign::plus) - simpson(2.1, 1.0, 10.0)) < 1e-10);

    off.u = Complex(0.3, -0.8);
    off.T = 7.3;
    CHECK(std::abs(resonance_integral(off, Sign::minus) - simpson(0.1, off.u, 7.3)) < 1e-10);
}

TEST_CASE("dyson amplitude is the resonance integral of conj(u)")
{
    auto c = base();
    CHECK(dyson_amplitude(c) == resonance_integral(c, Sign::minus));
    c.u = Complex(0.6, 0.8);
    CHECK(std::abs(dyson_amplitude(c) - Complex(6.0, -8.0)) < 1e-14);
}

TEST_CASE("first order vanishes for a field without mean amplitude")
{
    const QubitState q(0.25, 0.2);
    const ReservoirMoments m{{0.0, 0.0}, 1.0};
    for (double theta : {0.0, 0.3, pi / 2, 2.0}) {
        auto c = base();
        c.theta = theta;
        const auto corr = first_order_qubit(q, m, c);
        CHECK(corr.delta_p == 0.0);
        CHECK(corr.delta_d == Complex(0.0));
        CHECK(first_order_heat(q, m, c) == 0.0);
    }
}

TEST_CASE("first order with x = 0 only touches the coherence")
{
    const double p = 0.3;
    const QubitState q(p, 0.0);
    const ReservoirMoments m{{0.4, -0.7}, 1.0};
    const auto c = base();
    const auto corr = first_order_qubit(q, m, c);
    CHECK(corr.delta_p == 0.0);
    // Off-diagonal of the final matrix: -delta_d = -i lambda (1 - 2p) <a> I*.
    const Complex expected = -Complex(0.0, c.lambda * (1 - 2 * p)) * m.mean_a *
                             std::conj(resonance_integral(c, Sign::minus));
    CHECK(std::abs(-corr.delta_d - expected) < 1e-15);
}

TEST_CASE("first order coherent alpha = i example")
{
    const QubitState q(0.25, 0.1);
    const ReservoirMoments m{{0.0, 1.0}, 1.0};
    const auto c = base();
    const auto corr = first_order_qubit(q, m, c);
    CHECK(corr.delta_p == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(corr.matrix()(0, 0).real() == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(first_order_heat(q, m, c) == doctest::Approx(-0.02).epsilon(1e-14));

    const auto rep = perturbative_report(q, m, c, 1);
    CHECK(rep.delta_E_qubit + rep.delta_Q == doctest::Approx(0.0));
    CHECK(std::abs(rep.delta_E_qubit + rep.delta_Q) < 1e-12);
}

TEST_CASE("first-order heat for aligned real phases is zero at theta = 0")
{
    const QubitState q(0.2, -0.3);
    const ReservoirMoments m{{0.8, 0.0}, 0.64};
    CHECK(first_order_heat(q, m, base()) == 0.0);
}

TEST_CASE("sigma_y heat is 2 lambda x omega Re(<a> I*)")
{
    const QubitState q(0.2, 0.15);
    const ReservoirMoments m{{0.3, 0.5}, 1.0};
    auto c = base();
    c.theta = pi / 2;
    const Complex I = resonance_integral(c, Sign::minus);
    const double expected = 2.0 * c.lambda * q.x() * c.omega * (m.mean_a * std::conj(I)).real();
    CHECK(std::abs(first_order_heat(q, m, c) - expected) < 1e-15);
    c.theta = 0.0;
    const double sx = -2.0 * c.lambda * q.x() * c.omega * (m.mean_a * std::conj(I)).imag();
    CHECK(std::abs(first_order_heat(q, m, c) - sx) < 1e-15);
}

TEST_CASE("first order keeps the discriminant and energy balance")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double p = 0.01 + 0.48 * U(rng);
        const double xm = std::sqrt(p * (1 - p));
        const QubitState q(p, xm * (2 * U(rng) - 1));
        const ReservoirMoments m{{3 * U(rng) - 1.5, 3 * U(rng) - 1.5}, 5.0};
        auto c = base(U(rng) * 0.05);
        c.theta = 2 * pi * U(rng);
        c.u = std::polar(0.5 + U(rng), 2 * pi * U(rng));
        const auto corr = first_order_qubit(q, m, c);
        CHECK(std::abs(landauer::discriminant_linear_term(q, corr)) < 1e-12);
        CHECK(std::abs(c.Omega * corr.delta_p + first_order_heat(q, m, c)) < 1e-12);
    }
}

TEST_CASE("first-order sign agrees with the exact oracle")
{
    // Coherent alpha = i gives delta_p = +2 lambda x Im(<a> I*) > 0.
    const double lambda = 1e-3;
    const QubitState q(0.25, 0.1);
    const CavitySpec coh{states::Coherent{{0.0, 1.0}}, 1.0};
    const std::size_t n = states::required_levels(coh);
    const auto rho = states::build_cavity(coh, n);
    const auto m = states::reservoir_moments(rho, n);
    const auto c = base(lambda);
    const auto pert = perturbative_report(q, m, c, 2);
    const auto exact = oracle::evolve_exact(q, rho, c, oracle::Model::rwa);
    const double dp_exact = exact.qubit_final(0, 0).real() - q.p();
    // Third-order terms survive for a coherent field: residual ~ (lambda |I|)^3.
    const double third = std::pow(lambda * std::abs(dyson_amplitude(c)), 3);
    CHECK(pert.correction.delta_p > 0.0);
    CHECK(dp_exact > 0.0);
    CHECK(std::abs(pert.correction.delta_p - dp_exact) < 10 * third);
    CHECK(std::abs(pert.delta_Q - exact.delta_Q_exact) < 10 * third);
}

TEST_CASE("first-order coherence agrees with the exact oracle for sigma_x and sigma_y")
{
    const double lambda = 1e-4;
    const QubitState q(0.3, 0.05);
    const CavitySpec coh{states::Coherent{{0.6, -0.4}}, 1.0};
    const std::size_t n = states::required_levels(coh);
    const auto rho = states::build_cavity(coh, n);
    const auto m = states::reservoir_moments(rho, n);
    for (double theta : {0.0, pi / 2, 1.1}) {
        auto c = base(lambda);
        c.theta = theta;
        const auto corr = first_order_qubit(q, m, c);
        const auto exact = oracle::evolve_exact(q, rho, c, oracle::Model::rwa);
        const Complex dd_exact = q.x() - exact.qubit_final(0, 1);
        CHECK(std::abs(corr.delta_d - dd_exact) < 1e-5);
        CHECK(std::abs(corr.delta_p - (exact.qubit_final(0, 0).real() - q.p())) < 1e-5);
    }
}

TEST_CASE("second order examples")
{
    auto c = base();  // lambda^2 |I|^2 = 1e-4 * 100 = 0.01
    const double x = 0.2;
    const QubitState q(0.25, x);
    const auto vac = second_order_qubit(q, {{0.0, 0.0}, 0.0}, c);
    CHECK(vac.delta_p == doctest::Approx(-0.0025).epsilon(1e-13));
    CHECK(std::abs(vac.delta_d - Complex(0.005 * x)) < 1e-15);

    const auto heat = second_order_heat(q, {{0.0, 0.0}, 1.0}, c);
    CHECK(heat == doctest::Approx(-0.0025).epsilon(1e-13));

    for (double p : {0.05, 0.2, 0.3, 0.45}) {
        const double nbar = p / (1 - 2 * p);
        const QubitState qp(p, 0.0);
        CHECK(std::abs(second_order_qubit(qp, {{0.0, 0.0}, nbar}, c).delta_p) < 1e-17);
        CHECK(std::abs(second_order_heat(qp, {{0.0, 0.0}, nbar}, c)) < 1e-17);
        CHECK(second_order_qubit(qp, {{0.0, 0.0}, 2.0}, c).delta_d == Complex(0.0));
    }
    CHECK(second_order_heat(QubitState(1e-6, 0.0), {{0.0, 0.0}, 0.5}, c) < 0.0);
}

TEST_CASE("second order is independent of theta and energy-balanced")
{
    const QubitState q(0.17, -0.2);
    const ReservoirMoments m{{0.0, 0.0}, 1.7};
    auto c = base(0.02);
    const auto ref = second_order_qubit(q, m, c);
    for (double theta : {0.5, pi / 2, 3.0}) {
        c.theta = theta;
        const auto s = second_order_qubit(q, m, c);
        CHECK(s.delta_p == ref.delta_p);
        CHECK(s.delta_d == ref.delta_d);
    }
    CHECK(std::abs(second_order_heat(q, m, c) + c.omega * ref.delta_p) < 1e-16);
}

TEST_CASE("non-resonant coupling is rejected by the perturbative engine")
{
    auto c = base();
    c.omega = 1.2;
    const QubitState q(0.25, 0.0);
    const ReservoirMoments m{{0.0, 0.0}, 1.0};
    CHECK_THROWS_AS(first_order_qubit(q, m, c), ConfigError);
    CHECK_THROWS_AS(first_order_heat(q, m, c), ConfigError);
    CHECK_THROWS_AS(second_order_qubit(q, m, c), ConfigError);
    CHECK_THROWS_AS(second_order_heat(q, m, c), ConfigError);
    CHECK_THROWS_AS(perturbative_report(q, m, base(), 3), ConfigError);
}

TEST_CASE("perturbative final states")
{
    const QubitState q(0.25, 0.1);
    const CavitySpec th{states::Thermal{1.0 / std::numbers::ln2}, 1.0};
    const std::size_t n = states::required_levels(th);
    const auto rho = states::build_cavity(th, n);

    const auto zero = perturbative_final_states(q, rho, base(0.0), 2);
    CHECK(test_support::max_diff(zero.qubit_final, q.matrix()) == 0.0);
    CHECK(zero.field_energy_change == 0.0);

    const auto c = base(0.01);
    const auto r = perturbative_final_states(q, rho, c, 2);
    const double expected_dp = 0.01 * ((1 - 2 * 0.25) * 1.0 - 0.25);
    CHECK(std::abs(r.report.correction.delta_p - expected_dp) < 1e-12);
    CHECK(std::abs(r.qubit_final.trace() - Complex(1.0)) < 1e-12);
    CHECK(std::abs(r.field_energy_change - r.report.delta_Q) < 1e-15);

    // lambda |I| = 2: the expansion parameter itself is not small.
    CHECK_THROWS_AS(perturbative_final_states(q, rho, base(0.2), 2), PerturbationBreakdownError);
    CHECK_NOTHROW(perturbative_final_states(q, rho, base(0.2), 0));

    // Near-pure state: the clipped result is still a unit-trace PSD matrix.
    const QubitState edge(0.02, std::sqrt(0.02 * 0.98));
    const auto e = perturbative_final_states(edge, rho, base(0.05), 2);
    CHECK(std::abs(e.qubit_final.trace() - Complex(1.0)) < 1e-12);
    CHECK(linalg::herm_eig(e.qubit_final).eigenvalues.front() >= -1e-12);
}
