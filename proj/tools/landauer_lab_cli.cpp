// Command-line front end: landauer_lab <subcommand> <scenario.json> [options]
#include "landauer_lab/errors.hpp"
#include "landauer_lab/numeric_policy.hpp"
#include "landauer_lab/runner.hpp"
#include "landauer_lab/scenario.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
namespace lr = landauer_lab::runner;
namespace ls = landauer_lab::scenario;

namespace {

struct Globals {
    std::string out_dir;
    std::string format = "csv";
    bool allow_degenerate = false;
    std::string profile = "default";
    std::optional<std::uint64_t> seed;
};

std::string utc_now()
{
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw landauer_lab::Error("cannot write " + path.string());
    f << text;
    if (!f)
        throw landauer_lab::Error("failed writing " + path.string());
}

template <class Fn>
int execute(const Globals& g, const std::string& scenario_path, Fn&& fn)
{
    const auto start = std::chrono::steady_clock::now();
    const auto tol = landauer_lab::NumericPolicy::from_profile(g.profile);
    const auto doc = ls::parse_scenario(scenario_path, {g.allow_degenerate, g.seed});
    lr::RunOutput out;
    try {
        out = fn(doc, tol);
    } catch (const landauer_lab::Error& e) {
        throw landauer_lab::Error("scenario '" + doc.name + "' (" + scenario_path +
                                  "): " + e.what());
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto report = lr::report(doc, out, g.profile, {wall, utc_now()});

    if (!g.out_dir.empty()) {
        const fs::path dir(g.out_dir);
        fs::create_directories(dir);
        const std::string stem = doc.name + "." + out.subcommand;
        if (doc.wants("csv"))
            write_file(dir / (stem + ".csv"), out.table.csv());
        if (doc.wants("json"))
            write_file(dir / (stem + ".json"), report.dump(2) + "\n");
        if (doc.wants("svg") && out.svg)
            write_file(dir / (stem + ".svg"), *out.svg);
        if (doc.wants("summary"))
            std::cout << out.summary;
    } else {
        if (g.format == "json")
            std::cout << report.dump(2) << "\n";
        else
            std::cout << out.table.csv();
        if (doc.wants("summary"))
            std::cerr << out.summary;
    }
    return out.exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Landauer-bound simulator for a qubit coupled to a single bosonic mode",
                 "landauer_lab"};
    app.set_version_flag("--version", std::string(lr::tool_version));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--out", g.out_dir, "Write artifacts requested by the scenario into DIR")
        ->option_text("DIR");
    app.add_option("--format", g.format, "Stdout format when --out is not given")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--allow-degenerate", g.allow_degenerate,
                 "Accept the qubit endpoints p = 0 and p = 1/2");
    app.add_option("--tolerance-profile", g.profile, "Numeric tolerance profile")
        ->check(CLI::IsMember({"default", "strict"}));
    app.add_option("--seed", g.seed, "Override every seed in the scenario");

    std::string scenario_path;
    auto add_scenario = [&](CLI::App* sub) {
        sub->add_option("scenario", scenario_path, "Scenario file (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
    };

    auto* simulate = app.add_subcommand("simulate", "Evaluate the scenario with its engine(s)");
    add_scenario(simulate);

    std::string theorem;
    auto* verify = app.add_subcommand("verify", "Certify theorem t1 or t2 over the scenario grid");
    verify->add_option("theorem", theorem, "t1 or t2")
        ->required()
        ->check(CLI::IsMember({"t1", "t2"}));
    add_scenario(verify);

    std::optional<std::size_t> samples;
    auto* ensemble = app.add_subcommand("ctpq-ensemble", "Monte Carlo CTPQ ensemble statistics");
    add_scenario(ensemble);
    ensemble->add_option("--samples", samples, "Number of z sequences M");
    ensemble->add_option("--seed", g.seed, "Base seed; sample i uses seed + i");

    std::string param, range;
    auto* sweep = app.add_subcommand("sweep", "Minimum entropy production along one parameter");
    add_scenario(sweep);
    sweep->add_option("--param", param, "mean_n, lambda, T_R or T")
        ->required()
        ->check(CLI::IsMember({"mean_n", "lambda", "T_R", "T"}));
    sweep->add_option("--range", range, "a:b:n")->required();

    auto* scaling = app.add_subcommand("scaling", "Perturbative vs exact delta_p over the lambda ladder");
    add_scenario(scaling);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lr::exit_error;
    }

    try {
        if (simulate->parsed())
            return execute(g, scenario_path,
                           [](const auto& doc, const auto& tol) { return lr::simulate(doc, tol); });
        if (verify->parsed()) {
            const auto id = theorem == "t1" ? landauer_lab::theorems::TheoremId::T1
                                            : landauer_lab::theorems::TheoremId::T2;
            return execute(g, scenario_path, [&](const auto& doc, const auto& tol) {
                return lr::verify(doc, id, tol);
            });
        }
        if (ensemble->parsed())
            return execute(g, scenario_path, [&](const auto& doc, const auto& tol) {
                return lr::ctpq_ensemble(doc, samples, tol);
            });
        if (sweep->parsed()) {
            const auto p = lr::parse_sweep_param(param);
            const auto values = lr::parse_range(range);
            return execute(g, scenario_path, [&](const auto& doc, const auto& tol) {
                return lr::sweep(doc, p, values, tol);
            });
        }
        if (scaling->parsed())
            return execute(g, scenario_path,
                           [](const auto& doc, const auto& tol) { return lr::scaling(doc, tol); });
    } catch (const ls::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lr::exit_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lr::exit_error;
    }
    return lr::exit_error;
}
