#pragma once

#include "landauer_lab/landauer.hpp"
#include "landauer_lab/numeric_policy.hpp"
#include "landauer_lab/perturbation.hpp"
#include "landauer_lab/states.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace landauer_lab::theorems {

using landauer::LandauerVerdict;
using landauer::ScanGrid;
using landauer::ScanPoint;
using perturbation::CouplingConfig;
using states::CavitySpec;
using states::ReservoirMoments;

enum class TheoremId { T1, T2, CTPQ };
std::string_view theorem_name(TheoremId id);

/// One checked quantity. margin > 0 means the check is satisfied.
struct Evidence {
    std::string scenario;
    std::string quantity;
    double measured = 0.0;
    double bound = 0.0;
    double margin = 0.0;
};

struct Counterexample {
    std::string scenario;
    std::string reason;
    std::optional<ScanPoint> point;
    double value = 0.0;
};

/// passed <=> counterexample is empty.
struct TheoremCertificate {
    TheoremId theorem_id = TheoremId::T1;
    bool passed = true;
    std::vector<Evidence> evidence;
    std::optional<Counterexample> counterexample;
    std::string scope;

    void record_counterexample(Counterexample c);
};

/// First-order checks for each reservoir: entropy invariance through the
/// discriminant identity, energy balance, vanishing heat when <a> = 0, and a
/// violation witness when <a> != 0.
TheoremCertificate verify_theorem1(const std::vector<CavitySpec>& reservoirs,
                                   const CouplingConfig& cfg, const ScanGrid& grid,
                                   const NumericPolicy& tol = NumericPolicy::standard());

/// Second-order Landauer scan for reservoirs with <a> = 0 and the given <n>.
TheoremCertificate verify_theorem2(const std::vector<double>& mean_n_values, double T_R,
                                   const CouplingConfig& cfg, const ScanGrid& grid,
                                   const NumericPolicy& tol = NumericPolicy::standard());

/// Per-value scan results behind verify_theorem2, in input order.
std::vector<LandauerVerdict> theorem2_scans(const std::vector<double>& mean_n_values, double T_R,
                                            const CouplingConfig& cfg, const ScanGrid& grid,
                                            const NumericPolicy& tol = NumericPolicy::standard());

/// p* = nbar / (1 + 2 nbar), where the thermal production touches zero.
double thermal_crossing(double nbar);

std::pair<ReservoirMoments, LandauerVerdict>
ctpq_single_run(const CavitySpec& spec, const CouplingConfig& cfg, double T_R,
                const ScanGrid& grid, const NumericPolicy& tol = NumericPolicy::standard());

struct EnsembleStats {
    std::size_t samples = 0;
    // Averages of the per-sample (normalised) moments; stderr = sample std / sqrt(M).
    std::complex<double> mean_of_mean_a{};
    double mean_of_mean_n = 0.0;
    double stderr_a = 0.0;
    double stderr_n = 0.0;
    // Ensemble moments: ratio of sample means of the unnormalised CTPQ sums,
    // i.e. the moments of the averaged state. Delta-method stderr.
    std::complex<double> ensemble_mean_a{};
    double ensemble_mean_n = 0.0;
    double ensemble_stderr_a = 0.0;
    double ensemble_stderr_n = 0.0;
    double min_mean_n = 0.0;
    double max_mean_n = 0.0;
    double max_abs_mean_a = 0.0;
    std::size_t verdicts_evaluated = 0;
    std::size_t verdict_failures = 0;
};

struct EnsembleSample {
    std::uint64_t seed = 0;
    ReservoirMoments moments;
    std::optional<bool> verdict_holds;
};

struct EnsembleResult {
    EnsembleStats stats;
    TheoremCertificate certificate;
    std::vector<EnsembleSample> samples;
};

struct EnsembleOptions {
    /// Run the single-sample Landauer scan on the first `verdict_samples` seeds.
    std::size_t verdict_samples = 0;
    std::size_t min_samples = 100;
    double sigma_band = 5.0;
};

/// Samples seeds base_seed + i, i < M, of the CTPQ recipe in `spec`.
EnsembleResult ctpq_ensemble(std::uint64_t base_seed, std::size_t M, const CavitySpec& spec,
                             const CouplingConfig& cfg, double T_R, const ScanGrid& grid,
                             const EnsembleOptions& options = {},
                             const NumericPolicy& tol = NumericPolicy::standard());

} // namespace landauer_lab::theorems
