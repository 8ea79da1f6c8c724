#include "landauer_lab/landauer.hpp"

#include "landauer_lab/errors.hpp"
#include "landauer_lab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace landauer_lab::landauer {

std::vector<double> ScanGrid::p_values() const
{
    std::vector<double> out(p_points);
    for (std::size_t i = 0; i < p_points; ++i)
        out[i] = p_points == 1 ? p_min
                               : p_min + (p_max - p_min) * static_cast<double>(i) /
                                             static_cast<double>(p_points - 1);
    return out;
}

std::vector<double> ScanGrid::x_values(double p) const
{
    const double bound = std::sqrt(p * (1.0 - p));
    std::vector<double> out(x_points);
    for (std::size_t k = 0; k < x_points; ++k)
        out[k] = x_points == 1 ? 0.0
                               : bound * (2.0 * static_cast<double>(k) /
                                              static_cast<double>(x_points - 1) -
                                          1.0);
    return out;
}

double ScanGrid::p_step() const
{
    return p_points > 1 ? (p_max - p_min) / static_cast<double>(p_points - 1) : 0.0;
}

std::string ScanGrid::describe() const
{
    std::ostringstream s;
    s.precision(17);
    s << "p in [" << p_min << ", " << p_max << "] x " << p_points << "; x over coherence interval x "
      << x_points << "; theta in {";
    for (std::size_t i = 0; i < thetas.size(); ++i)
        s << (i ? ", " : "") << thetas[i];
    s << "}";
    return s.str();
}

void ScanGrid::validate() const
{
    if (p_points == 0 || x_points == 0 || thetas.empty())
        throw ConfigError("scan grid is empty");
    if (!(p_min > 0.0) || !(p_max < 0.5) || p_min > p_max)
        throw ConfigError("scan grid p range must lie inside (0, 1/2)");
}

EigenPair qubit_eigenvalues(double p, double x)
{
    const double root = std::sqrt(std::max(0.0, 4.0 * p * p + 4.0 * x * x - 4.0 * p + 1.0));
    // p_- = (1 - disc) / (2 (1 + sqrt disc)) avoids cancellation near pure states.
    const double det = p * (1.0 - p) - x * x;
    const double minus = 2.0 * det / (1.0 + root);
    return {minus, 1.0 - minus};
}

EigenPair perturbed_eigenvalues(double p, double x, double delta_p, Complex delta_d,
                                const NumericPolicy& tol)
{
    const double disc = 4.0 * p * p + 4.0 * x * x - 4.0 * p + 1.0 -
                        8.0 * x * delta_d.real() + (8.0 * p - 4.0) * delta_p +
                        4.0 * delta_p * delta_p + 4.0 * std::norm(delta_d);
    if (!(disc >= -tol.discriminant_floor))
        throw NumericalError("invalid eigenvalue discriminant " + std::to_string(disc));
    const double root = std::sqrt(std::max(disc, 0.0));
    const double pp = p + delta_p;
    const double det = pp * (1.0 - pp) - std::norm(Complex{x} - delta_d);
    const double minus = 2.0 * det / (1.0 + root);
    return {minus, 1.0 - minus};
}

double binary_entropy(EigenPair eig)
{
    auto term = [](double v) {
        v = std::clamp(v, 0.0, 1.0);
        return v > 0.0 ? -v * std::log(v) : 0.0;
    };
    return term(eig.first) + term(eig.second);
}

double von_neumann_entropy(const ComplexMatrix& rho, const NumericPolicy& tol)
{
    const auto eig = linalg::herm_eig(rho, tol);
    double s = 0.0;
    for (double v : eig.eigenvalues) {
        v = std::clamp(v, 0.0, 1.0);
        if (v > 0.0)
            s -= v * std::log(v);
    }
    return s;
}

EntropyPair entropy_change(const QubitState& q, const QubitCorrection& correction,
                           const NumericPolicy& tol)
{
    EntropyPair e;
    e.S_initial = binary_entropy(qubit_eigenvalues(q.p(), q.x()));
    e.S_final = binary_entropy(
        perturbed_eigenvalues(q.p(), q.x(), correction.delta_p, correction.delta_d, tol));
    e.delta_S = e.S_initial - e.S_final;
    return e;
}

double discriminant_linear_term(const QubitState& q, const QubitCorrection& correction)
{
    return -8.0 * q.x() * correction.delta_d.real() + (8.0 * q.p() - 4.0) * correction.delta_p;
}

LandauerVerdict entropy_production(const QubitState& q, const QubitCorrection& correction,
                                   double delta_Q, double T_R, double tolerance)
{
    if (!(T_R > 0.0))
        throw ConfigError("reservoir temperature T_R must be positive");
    const auto e = entropy_change(q, correction);
    LandauerVerdict v;
    v.delta_Q = delta_Q;
    v.T_R = T_R;
    v.delta_S = e.delta_S;
    v.entropy_production = delta_Q - T_R * e.delta_S;
    v.holds = v.entropy_production >= -tolerance;
    v.scan_meta.grid = "single point";
    v.scan_meta.points = 1;
    v.scan_meta.argmin = {q.p(), q.x(), 0.0};
    v.scan_meta.tolerance = tolerance;
    if (!v.holds)
        v.witness = v.scan_meta.argmin;
    return v;
}

double second_order_scale(const CouplingConfig& cfg)
{
    return cfg.lambda * cfg.lambda * std::norm(perturbation::dyson_amplitude(cfg));
}

namespace {

struct RowResult {
    double min_production = std::numeric_limits<double>::infinity();
    ScanPoint argmin;
    double delta_Q = 0.0;
    double delta_S = 0.0;
    bool peak_at_zero = true;
};

/// Indices of the x grid points nearest x = 0.
std::pair<std::size_t, std::size_t> centre_indices(std::size_t n)
{
    return n % 2 == 1 ? std::pair{n / 2, n / 2} : std::pair{n / 2 - 1, n / 2};
}

} // namespace

LandauerVerdict scan_bound(const ReservoirMoments& moments, const CouplingConfig& cfg, double T_R,
                           const ScanGrid& grid, const NumericPolicy& tol)
{
    grid.validate();
    if (!(T_R > 0.0))
        throw ConfigError("reservoir temperature T_R must be positive");
    cfg.validate();

    const auto ps = grid.p_values();
    std::vector<RowResult> rows(ps.size());
    parallel_for(ps.size(), [&](std::size_t i) {
        const double p = ps[i];
        const auto xs = grid.x_values(p);
        RowResult row;
        std::vector<double> second_order_dS(xs.size());
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const QubitState q(p, xs[k]);
            const auto second = perturbation::second_order_qubit(q, moments, cfg);
            second_order_dS[k] = entropy_change(q, second, tol).delta_S;
            for (double theta : grid.thetas) {
                CouplingConfig c = cfg;
                c.theta = theta;
                const auto report = perturbation::perturbative_report(q, moments, c, 2);
                const double dS = entropy_change(q, report.correction, tol).delta_S;
                const double production = report.delta_Q - T_R * dS;
                if (production < row.min_production) {
                    row.min_production = production;
                    row.argmin = {p, xs[k], theta};
                    row.delta_Q = report.delta_Q;
                    row.delta_S = dS;
                }
            }
        }
        const auto [lo, hi] = centre_indices(xs.size());
        const double peak = std::max(second_order_dS[lo], second_order_dS[hi]);
        const double slack = 4.0 * std::numeric_limits<double>::epsilon() *
                             std::max(1.0, std::abs(peak));
        for (double v : second_order_dS)
            if (v > peak + slack)
                row.peak_at_zero = false;
        rows[i] = row;
    });

    LandauerVerdict v;
    v.T_R = T_R;
    v.entropy_production = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        if (row.min_production < v.entropy_production) {
            v.entropy_production = row.min_production;
            v.delta_Q = row.delta_Q;
            v.delta_S = row.delta_S;
            v.scan_meta.argmin = row.argmin;
        }
        v.scan_meta.delta_s_peaks_at_zero_coherence =
            v.scan_meta.delta_s_peaks_at_zero_coherence && row.peak_at_zero;
    }
    v.scan_meta.grid = grid.describe();
    v.scan_meta.points = grid.size();
    v.scan_meta.tolerance = tol.production * second_order_scale(cfg);
    v.holds = v.entropy_production >= -v.scan_meta.tolerance;
    if (!v.holds)
        v.witness = v.scan_meta.argmin;
    return v;
}

} // namespace landauer_lab::landauer
