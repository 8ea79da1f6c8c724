#include "landauer_lab/theorems.hpp"

#include "landauer_lab/errors.hpp"
#include "landauer_lab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace landauer_lab::theorems {

using perturbation::QubitState;

std::string_view theorem_name(TheoremId id)
{
    switch (id) {
    case TheoremId::T1:
        return "T1";
    case TheoremId::T2:
        return "T2";
    case TheoremId::CTPQ:
        return "CTPQ";
    }
    return "?";
}

void TheoremCertificate::record_counterexample(Counterexample c)
{
    if (!counterexample)
        counterexample = std::move(c);
    passed = false;
}

namespace {

std::string format_value(double v)
{
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

struct FirstOrderSummary {
    double max_discriminant = 0.0;
    double max_energy_imbalance = 0.0;
    double max_abs_heat = 0.0;
    double min_heat = std::numeric_limits<double>::infinity();
    ScanPoint argmin;
};

void fold_point(FirstOrderSummary& s, const QubitState& q, const ReservoirMoments& m,
                const CouplingConfig& cfg)
{
    const auto corr = perturbation::first_order_qubit(q, m, cfg);
    const double heat = perturbation::first_order_heat(q, m, cfg);
    const double energy = cfg.Omega * corr.delta_p;
    s.max_discriminant =
        std::max(s.max_discriminant, std::abs(landauer::discriminant_linear_term(q, corr)));
    s.max_energy_imbalance = std::max(s.max_energy_imbalance, std::abs(energy + heat));
    s.max_abs_heat = std::max(s.max_abs_heat, std::abs(heat));
    if (heat < s.min_heat) {
        s.min_heat = heat;
        s.argmin = {q.p(), q.x(), cfg.theta};
    }
}

} // namespace

TheoremCertificate verify_theorem1(const std::vector<CavitySpec>& reservoirs,
                                   const CouplingConfig& cfg, const ScanGrid& grid,
                                   const NumericPolicy& tol)
{
    grid.validate();
    cfg.validate();
    TheoremCertificate cert;
    cert.theorem_id = TheoremId::T1;
    cert.scope = "first order in lambda; reservoirs listed in evidence; grid " + grid.describe();

    const double first_order_scale = cfg.lambda * std::abs(perturbation::dyson_amplitude(cfg));
    const double heat_tol = 1e-12 * first_order_scale;
    const double identity_tol = 1e-12;
    const auto ps = grid.p_values();

    for (const auto& spec : reservoirs) {
        const std::string label = spec.describe();
        const std::size_t n_max = states::required_levels(spec, tol);
        const auto rho = states::build_cavity(spec, n_max, tol);
        const auto m = states::reservoir_moments(rho, n_max);
        CouplingConfig c = cfg;
        c.omega = spec.omega;

        // Targeted converse probe before the exhaustive pass.
        FirstOrderSummary probe;
        const double p_mid = ps[ps.size() / 2];
        for (double theta : {0.0, 0.5 * 3.14159265358979323846}) {
            c.theta = theta;
            const double half = 0.5 * std::sqrt(p_mid * (1.0 - p_mid));
            for (double x : {half, -half})
                fold_point(probe, QubitState(p_mid, x), m, c);
        }

        FirstOrderSummary s;
        std::vector<FirstOrderSummary> rows(ps.size());
        parallel_for(ps.size(), [&](std::size_t i) {
            CouplingConfig local = c;
            for (double x : grid.x_values(ps[i]))
                for (double theta : grid.thetas) {
                    local.theta = theta;
                    fold_point(rows[i], QubitState(ps[i], x), m, local);
                }
        });
        for (const auto& r : rows) {
            s.max_discriminant = std::max(s.max_discriminant, r.max_discriminant);
            s.max_energy_imbalance = std::max(s.max_energy_imbalance, r.max_energy_imbalance);
            s.max_abs_heat = std::max(s.max_abs_heat, r.max_abs_heat);
            if (r.min_heat < s.min_heat) {
                s.min_heat = r.min_heat;
                s.argmin = r.argmin;
            }
        }
        const FirstOrderSummary& witness = probe.min_heat < -heat_tol ? probe : s;

        cert.evidence.push_back({label, "|<a>|", std::abs(m.mean_a), tol.zero_moment,
                                 tol.zero_moment - std::abs(m.mean_a)});
        cert.evidence.push_back({label, "max |-8x Re(dd) + (8p-4) dp|", s.max_discriminant,
                                 identity_tol, identity_tol - s.max_discriminant});
        cert.evidence.push_back({label, "max |dE_qubit + dQ|", s.max_energy_imbalance,
                                 identity_tol, identity_tol - s.max_energy_imbalance});
        cert.evidence.push_back({label, "max |dQ first order|", s.max_abs_heat, heat_tol,
                                 heat_tol - s.max_abs_heat});
        cert.evidence.push_back({label, "min first-order production", witness.min_heat,
                                 -heat_tol, witness.min_heat + heat_tol});

        if (s.max_discriminant > identity_tol)
            cert.record_counterexample({label, "first-order entropy changes", std::nullopt,
                                        s.max_discriminant});
        if (s.max_energy_imbalance > identity_tol)
            cert.record_counterexample({label, "first-order energy not balanced", std::nullopt,
                                        s.max_energy_imbalance});
        if (witness.min_heat < -heat_tol)
            cert.record_counterexample({label,
                                        "dQ < 0 = T_R dS at first order (<a> = " +
                                            format_value(std::abs(m.mean_a)) + ")",
                                        witness.argmin, witness.min_heat});
        else if (s.max_abs_heat > heat_tol)
            cert.record_counterexample({label, "first-order heat does not vanish", std::nullopt,
                                        s.max_abs_heat});
    }
    return cert;
}

double thermal_crossing(double nbar)
{
    return nbar / (1.0 + 2.0 * nbar);
}

std::vector<LandauerVerdict> theorem2_scans(const std::vector<double>& mean_n_values, double T_R,
                                            const CouplingConfig& cfg, const ScanGrid& grid,
                                            const NumericPolicy& tol)
{
    std::vector<LandauerVerdict> out;
    out.reserve(mean_n_values.size());
    for (double n : mean_n_values) {
        if (!(n >= 0.0))
            throw ConfigError("mean_n must be non-negative");
        out.push_back(landauer::scan_bound({{0.0, 0.0}, n}, cfg, T_R, grid, tol));
    }
    return out;
}

TheoremCertificate verify_theorem2(const std::vector<double>& mean_n_values, double T_R,
                                   const CouplingConfig& cfg, const ScanGrid& grid,
                                   const NumericPolicy& tol)
{
    TheoremCertificate cert;
    cert.theorem_id = TheoremId::T2;
    const double nbar = states::bose_einstein(cfg.omega, T_R);
    cert.scope = "second order in lambda, <a> = 0, T_R = " + format_value(T_R) +
                 " (nbar = " + format_value(nbar) + "); grid " + grid.describe();

    const auto scans = theorem2_scans(mean_n_values, T_R, cfg, grid, tol);
    for (std::size_t i = 0; i < scans.size(); ++i) {
        const auto& v = scans[i];
        const std::string label = "mean_n=" + format_value(mean_n_values[i]);
        const double bound = -v.scan_meta.tolerance;
        cert.evidence.push_back(
            {label, "min entropy production", v.entropy_production, bound,
             v.entropy_production - bound});
        cert.evidence.push_back({label, "argmin p vs thermal crossing p*", v.scan_meta.argmin.p,
                                 thermal_crossing(nbar),
                                 grid.p_step() - std::abs(v.scan_meta.argmin.p -
                                                          thermal_crossing(nbar))});
        cert.evidence.push_back({label, "Delta S peaks at x = 0",
                                 v.scan_meta.delta_s_peaks_at_zero_coherence ? 1.0 : 0.0, 1.0,
                                 v.scan_meta.delta_s_peaks_at_zero_coherence ? 0.0 : -1.0});
        if (!v.holds)
            cert.record_counterexample({label, "dQ < T_R dS at second order", v.witness,
                                        v.entropy_production});
        else if (!v.scan_meta.delta_s_peaks_at_zero_coherence)
            cert.record_counterexample({label, "second-order Delta S not maximal at x = 0",
                                        std::nullopt, 0.0});
    }
    return cert;
}

std::pair<ReservoirMoments, LandauerVerdict> ctpq_single_run(const CavitySpec& spec,
                                                             const CouplingConfig& cfg, double T_R,
                                                             const ScanGrid& grid,
                                                             const NumericPolicy& tol)
{
    const auto* c = std::get_if<states::Ctpq>(&spec.kind);
    if (!c)
        throw ConfigError("ctpq_single_run needs a ctpq cavity, got " + spec.kind_name());
    spec.validate();
    if (std::abs(c->beta * T_R - 1.0) > 1e-12)
        throw ConfigError("ctpq beta = " + format_value(c->beta) +
                          " inconsistent with bound temperature T_R = " + format_value(T_R));
    const auto z = states::ctpq_coefficients(c->seed, c->levels);
    const auto moments = states::ctpq_analytic_moments(z, c->beta, spec.omega);
    CouplingConfig local = cfg;
    local.omega = spec.omega;
    return {moments, landauer::scan_bound(moments, local, T_R, grid, tol)};
}

EnsembleResult ctpq_ensemble(std::uint64_t base_seed, std::size_t M, const CavitySpec& spec,
                             const CouplingConfig& cfg, double T_R, const ScanGrid& grid,
                             const EnsembleOptions& options, const NumericPolicy& tol)
{
    const auto* recipe = std::get_if<states::Ctpq>(&spec.kind);
    if (!recipe)
        throw ConfigError("ctpq_ensemble needs a ctpq cavity, got " + spec.kind_name());
    spec.validate();
    if (M == 0)
        throw ConfigError("ctpq_ensemble needs at least one sample");

    struct Draw {
        states::CtpqSums sums;
        ReservoirMoments moments;
        std::optional<bool> holds;
    };
    std::vector<Draw> draws(M);
    const std::size_t verdicts = std::min(options.verdict_samples, M);
    parallel_for(M, [&](std::size_t i) {
        const auto z = states::ctpq_coefficients(base_seed + i, recipe->levels);
        Draw d;
        d.sums = states::ctpq_sums(z, recipe->beta, spec.omega);
        d.moments = {d.sums.a_numerator / d.sums.denominator,
                     d.sums.n_numerator / d.sums.denominator};
        if (i < verdicts) {
            CavitySpec single = spec;
            std::get<states::Ctpq>(single.kind).seed = base_seed + i;
            d.holds = ctpq_single_run(single, cfg, T_R, grid, tol).second.holds;
        }
        draws[i] = d;
    });

    EnsembleResult out;
    auto& st = out.stats;
    st.samples = M;
    const double Md = static_cast<double>(M);

    std::complex<double> sum_a{};
    double sum_n = 0.0;
    double sum_den = 0.0;
    std::complex<double> sum_a_num{};
    double sum_n_num = 0.0;
    st.min_mean_n = std::numeric_limits<double>::infinity();
    st.max_mean_n = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < M; ++i) {
        const auto& d = draws[i];
        sum_a += d.moments.mean_a;
        sum_n += d.moments.mean_n;
        sum_den += d.sums.denominator;
        sum_a_num += d.sums.a_numerator;
        sum_n_num += d.sums.n_numerator;
        st.min_mean_n = std::min(st.min_mean_n, d.moments.mean_n);
        st.max_mean_n = std::max(st.max_mean_n, d.moments.mean_n);
        st.max_abs_mean_a = std::max(st.max_abs_mean_a, std::abs(d.moments.mean_a));
        if (d.holds) {
            ++st.verdicts_evaluated;
            if (!*d.holds)
                ++st.verdict_failures;
        }
        out.samples.push_back({base_seed + i, d.moments, d.holds});
    }
    st.mean_of_mean_a = sum_a / Md;
    st.mean_of_mean_n = sum_n / Md;
    st.ensemble_mean_a = sum_a_num / sum_den;
    st.ensemble_mean_n = sum_n_num / sum_den;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (M > 1) {
        double var_a = 0.0, var_n = 0.0, var_ea = 0.0, var_en = 0.0;
        const double mean_den = sum_den / Md;
        for (const auto& d : draws) {
            var_a += std::norm(d.moments.mean_a - st.mean_of_mean_a);
            var_n += std::pow(d.moments.mean_n - st.mean_of_mean_n, 2);
            // Residuals of the ratio estimator; they sum to zero by construction.
            var_ea += std::norm(d.sums.a_numerator - st.ensemble_mean_a * d.sums.denominator);
            var_en += std::pow(d.sums.n_numerator - st.ensemble_mean_n * d.sums.denominator, 2);
        }
        const double dof = Md - 1.0;
        st.stderr_a = std::sqrt(var_a / dof / Md);
        st.stderr_n = std::sqrt(var_n / dof / Md);
        st.ensemble_stderr_a = std::sqrt(var_ea / dof / Md) / mean_den;
        st.ensemble_stderr_n = std::sqrt(var_en / dof / Md) / mean_den;
    } else {
        st.stderr_a = st.stderr_n = st.ensemble_stderr_a = st.ensemble_stderr_n = nan;
    }

    auto& cert = out.certificate;
    cert.theorem_id = TheoremId::CTPQ;
    const double nbar = states::bose_einstein(spec.omega, T_R);
    const std::string label = spec.describe() + " x " + std::to_string(M) + " seeds from " +
                              std::to_string(base_seed);
    cert.scope = "ensemble moments (ratio of sample means of unnormalised CTPQ sums) within " +
                 format_value(options.sigma_band) + " standard errors of the thermal moments";

    const double band_a = options.sigma_band * st.ensemble_stderr_a;
    const double band_n = options.sigma_band * st.ensemble_stderr_n;
    const double dev_a = std::abs(st.ensemble_mean_a);
    const double dev_n = std::abs(st.ensemble_mean_n - nbar);
    cert.evidence.push_back({label, "samples", Md, static_cast<double>(options.min_samples),
                             Md - static_cast<double>(options.min_samples)});
    cert.evidence.push_back({label, "|ensemble <a>|", dev_a, band_a, band_a - dev_a});
    cert.evidence.push_back({label, "|ensemble <n> - nbar|", dev_n, band_n, band_n - dev_n});
    cert.evidence.push_back({label, "|mean of per-sample <n> - nbar|",
                             std::abs(st.mean_of_mean_n - nbar),
                             options.sigma_band * st.stderr_n,
                             options.sigma_band * st.stderr_n -
                                 std::abs(st.mean_of_mean_n - nbar)});

    if (M < options.min_samples)
        cert.record_counterexample({label, "too few samples for the statistical claim",
                                    std::nullopt, Md});
    if (!(dev_a <= band_a))
        cert.record_counterexample({label, "ensemble <a> outside the statistical band",
                                    std::nullopt, dev_a});
    if (!(dev_n <= band_n))
        cert.record_counterexample({label, "ensemble <n> outside the statistical band",
                                    std::nullopt, dev_n});
    return out;
}

} // namespace landauer_lab::theorems
