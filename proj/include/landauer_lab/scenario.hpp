#pragma once

#include "landauer_lab/errors.hpp"
#include "landauer_lab/landauer.hpp"
#include "landauer_lab/perturbation.hpp"
#include "landauer_lab/states.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace landauer_lab::scenario {

using landauer::ScanGrid;
using perturbation::CouplingConfig;
using states::CavitySpec;

enum class Engine { perturbative, exact_rwa, exact_full, both };
std::string_view engine_name(Engine e);

/// Every problem found while reading a scenario, one "field: message" per entry.
class ScenarioError : public ConfigError {
public:
    explicit ScenarioError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

struct QubitPoint {
    double p = 0.25;
    double x = 0.0;
};

struct ScenarioDoc {
    std::string name = "scenario";
    CouplingConfig coupling;
    CavitySpec cavity{states::Thermal{1.0}, 1.0};
    std::optional<std::size_t> n_max;
    std::optional<QubitPoint> qubit;  // empty: scan `grid`
    ScanGrid grid;
    double T_R = 1.0;
    Engine engine = Engine::perturbative;
    int order = 2;
    std::vector<std::string> outputs{"csv", "json", "summary"};
    std::uint64_t seed = 0;
    bool allow_degenerate = false;

    std::vector<CavitySpec> theorem1_states;  // empty: just `cavity`
    std::vector<double> theorem2_mean_n;      // empty: the thermal value at T_R
    std::size_t ensemble_samples = 10000;
    std::size_t ensemble_verdict_samples = 200;
    std::vector<double> scaling_lambdas{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

    bool wants(std::string_view output) const;
};

struct ParseOptions {
    bool allow_degenerate = false;
    std::optional<std::uint64_t> seed_override;
};

/// Reads a JSON scenario. Throws ScenarioError with line/column on malformed
/// text and with one entry per invalid field otherwise.
ScenarioDoc parse_scenario(const std::filesystem::path& path, const ParseOptions& options = {});
ScenarioDoc parse_scenario_text(std::string_view text, const ParseOptions& options = {});
ScenarioDoc parse_scenario_json(const nlohmann::json& j, const ParseOptions& options = {});

/// Fully resolved document (defaults applied); parses back to an equal doc.
nlohmann::json to_json(const ScenarioDoc& doc);
nlohmann::json cavity_to_json(const CavitySpec& spec);

} // namespace landauer_lab::scenario
