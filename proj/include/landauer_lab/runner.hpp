#pragma once

#include "landauer_lab/numeric_policy.hpp"
#include "landauer_lab/oracle.hpp"
#include "landauer_lab/scenario.hpp"
#include "landauer_lab/theorems.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace landauer_lab::runner {

using scenario::ScenarioDoc;

inline constexpr std::string_view tool_name = "landauer_lab";
inline constexpr std::string_view tool_version = "0.1.0";

/// Exit codes shared by every subcommand.
inline constexpr int exit_pass = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_counterexample = 2;

/// %.17g, so CSV values round-trip exactly.
std::string format_number(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
    std::string csv() const;
};

struct RunOutput {
    std::string subcommand;
    std::string csv_schema;  // "<subcommand>/<version>"; bumped on any column change
    Table table;
    nlohmann::json results;
    int exit_code = exit_pass;
    std::string summary;
    std::optional<std::string> svg;
};

struct PointResult {
    std::string engine;
    double p = 0.0;
    double x = 0.0;
    double theta = 0.0;
    double delta_p = 0.0;
    linalg::Complex delta_d{};
    double delta_Q = 0.0;
    double delta_S = 0.0;
    double production = 0.0;
};

struct ScalingRow {
    double lambda = 0.0;
    double dp_pert = 0.0;
    double dp_exact = 0.0;
    double abs_err = 0.0;
};

/// Second-order perturbative vs exact delta_p along a lambda ladder.
std::vector<ScalingRow> scaling_table(const states::QubitState& q, const states::CavitySpec& cavity,
                                      const perturbation::CouplingConfig& cfg,
                                      const std::vector<double>& lambdas, oracle::Model model,
                                      const NumericPolicy& tol = NumericPolicy::standard());

/// Least-squares slope of log y against log x; pairs with y <= 0 are skipped.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

enum class SweepParam { mean_n, lambda, T_R, T };
SweepParam parse_sweep_param(std::string_view name);
std::string_view sweep_param_name(SweepParam p);

/// "a:b:n" -> n evenly spaced values from a to b inclusive.
std::vector<double> parse_range(std::string_view spec);

RunOutput simulate(const ScenarioDoc& doc, const NumericPolicy& tol);
RunOutput verify(const ScenarioDoc& doc, theorems::TheoremId which, const NumericPolicy& tol);
RunOutput ctpq_ensemble(const ScenarioDoc& doc, std::optional<std::size_t> samples,
                        const NumericPolicy& tol);
RunOutput sweep(const ScenarioDoc& doc, SweepParam param, const std::vector<double>& values,
                const NumericPolicy& tol);
RunOutput scaling(const ScenarioDoc& doc, const NumericPolicy& tol);

struct Timing {
    double wall_seconds = 0.0;
    std::string finished_at;  // ISO 8601 UTC
};

/// Self-describing report: resolved scenario, seeds, results and timing.
nlohmann::json report(const ScenarioDoc& doc, const RunOutput& out, std::string_view profile,
                      const Timing& timing);

} // namespace landauer_lab::runner
