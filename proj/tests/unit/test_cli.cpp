#include "landauer_lab/errors.hpp"
#include "landauer_lab/runner.hpp"
#include "landauer_lab/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

using namespace landauer_lab;
using namespace landauer_lab::scenario;
using namespace landauer_lab::runner;

namespace {

const std::string minimal = R"({
  "name": "mini",
  "cavity": {"kind": "thermal", "temperature": 1.4426950408889634}
})";

std::string all_issues(const ScenarioError& e)
{
    std::string s;
    for (const auto& i : e.issues())
        s += i + "\n";
    return s;
}

std::string parse_failure(const std::string& text)
{
    try {
        parse_scenario_text(text);
    } catch (const ScenarioError& e) {
        return all_issues(e);
    }
    return "";
}

ScenarioDoc small_grid(const std::string& extra = "")
{
    return parse_scenario_text(R"({
      "name": "grid",
      "cavity": {"kind": "thermal", "temperature": 1.4426950408889634},
      "qubit": {"grid": {"p_points": 9, "x_points": 5, "thetas": [0, 1.5707963267948966]}})" +
                               extra + "}");
}

} // namespace

TEST_CASE("minimal thermal scenario gets defaults")
{
    const auto doc = parse_scenario_text(minimal);
    CHECK(doc.name == "mini");
    CHECK(doc.coupling.lambda == 0.01);
    CHECK(doc.coupling.Omega == 1.0);
    CHECK(doc.coupling.omega == 1.0);
    CHECK(doc.coupling.T == 10.0);
    CHECK(doc.engine == Engine::perturbative);
    CHECK(doc.order == 2);
    CHECK(!doc.qubit);
    CHECK(doc.grid.p_points == 49);
    CHECK(doc.T_R == 1.4426950408889634);
    CHECK(doc.wants("csv"));
    CHECK(!doc.wants("svg"));
}

TEST_CASE("omega defaults to Omega and cavity omega to the coupling")
{
    const auto doc = parse_scenario_text(R"({"coupling": {"Omega": 2.0},
        "cavity": {"kind": "fock", "n": 1}, "bound": {"T_R": 1.0}})");
    CHECK(doc.coupling.omega == 2.0);
    CHECK(doc.cavity.omega == 2.0);
}

TEST_CASE("off-resonant perturbative scenario is rejected citing resonance")
{
    const auto msg = parse_failure(R"({"coupling": {"Omega": 1.0, "omega": 1.2},
        "cavity": {"kind": "thermal", "temperature": 1.0}})");
    CHECK(msg.find("coupling.omega") != std::string::npos);
    CHECK(msg.find("resonant") != std::string::npos);
    CHECK_NOTHROW(parse_scenario_text(R"({"coupling": {"Omega": 1.0, "omega": 1.2},
        "engine": "exact-rwa", "cavity": {"kind": "thermal", "temperature": 1.0}})"));
}

TEST_CASE("unknown cavity kind lists the valid kinds")
{
    const auto msg = parse_failure(R"({"cavity": {"kind": "squeezed"}, "bound": {"T_R": 1}})");
    CHECK(msg.find("cavity.kind") != std::string::npos);
    CHECK(msg.find("squeezed") != std::string::npos);
    for (const char* k : {"thermal", "fock", "coherent", "ctpq", "mixture", "phase_averaged_coherent"})
        CHECK(msg.find(k) != std::string::npos);
}

TEST_CASE("syntax errors carry line and column")
{
    const auto msg = parse_failure("{\n  \"name\": \"x\",\n  \"cavity\": {\"kind\": }\n}");
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column 22") != std::string::npos);
}

TEST_CASE("validation errors are aggregated and name their fields")
{
    try {
        parse_scenario_text(R"({"coupling": {"lambda": -1, "T": "long"},
            "cavity": {"kind": "fock"}, "engine": "magic", "order": 3, "qubit": {"p": 0.7},
            "outputs": ["csv", "pdf"], "colour": "blue"})");
        FAIL("expected a ScenarioError");
    } catch (const ScenarioError& e) {
        const auto s = all_issues(e);
        for (const char* field : {"coupling.T", "coupling", "cavity.n", "engine", "order", "qubit",
                                  "outputs", "colour"})
            CHECK(s.find(field) != std::string::npos);
        CHECK(e.issues().size() >= 7);
    }
}

TEST_CASE("cavity kinds and complex numbers parse")
{
    auto doc = parse_scenario_text(R"({"cavity": {"kind": "coherent", "alpha": {"re": 0.5, "im": -0.25}},
        "bound": {"T_R": 1}, "coupling": {"u": [0.6, 0.8]}})");
    const auto& c = std::get<states::Coherent>(doc.cavity.kind);
    CHECK(c.alpha == std::complex<double>(0.5, -0.25));
    CHECK(doc.coupling.u == std::complex<double>(0.6, 0.8));

    doc = parse_scenario_text(R"({"cavity": {"kind": "mixture", "components": [
        {"weight": 0.5, "amplitudes": [1]}, {"weight": 0.5, "amplitudes": [0, [0, 1]]}]},
        "bound": {"T_R": 1}})");
    CHECK(std::get<states::Mixture>(doc.cavity.kind).components.size() == 2);

    CHECK(!parse_failure(R"({"cavity": {"kind": "mixture", "components": [
        {"weight": 0.3, "amplitudes": [1]}]}, "bound": {"T_R": 1}})")
               .empty());

    doc = parse_scenario_text(R"({"cavity": {"kind": "ctpq", "beta": 0.5, "seed": 9, "levels": 16}})");
    CHECK(doc.T_R == 2.0);
    CHECK(doc.seed == 9);

    doc = parse_scenario_text(
        R"({"cavity": {"kind": "phase_averaged_coherent", "alpha": 1, "phases": 4}, "bound": {"T_R": 1}})");
    CHECK(std::get<states::Mixture>(doc.cavity.kind).components.size() == 4);

    CHECK(parse_failure(R"({"cavity": {"kind": "coherent", "alpha": 1}})").find("bound.T_R") !=
          std::string::npos);
}

TEST_CASE("seed override reaches the ctpq cavity")
{
    const auto doc = parse_scenario_text(
        R"({"cavity": {"kind": "ctpq", "beta": 0.5, "seed": 9, "levels": 16}, "seed": 3})",
        {false, 77});
    CHECK(doc.seed == 77);
    CHECK(std::get<states::Ctpq>(doc.cavity.kind).seed == 77);
}

TEST_CASE("degenerate qubits need the flag")
{
    const std::string text = R"({"cavity": {"kind": "fock", "n": 0}, "bound": {"T_R": 1},
        "qubit": {"p": 0.5, "x": 0}})";
    CHECK(parse_failure(text).find("qubit") != std::string::npos);
    CHECK_NOTHROW(parse_scenario_text(text, {true, std::nullopt}));
}

TEST_CASE("resolved scenario round-trips")
{
    const auto doc = small_grid(R"(, "theorem1": {"states": [{"kind": "fock", "n": 2}]},
        "theorem2": {"mean_n": [0.9, 1.1]}, "seed": 5)");
    const auto j = to_json(doc);
    const auto back = parse_scenario_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.theorem1_states.size() == 1);
    CHECK(back.theorem2_mean_n == std::vector<double>{0.9, 1.1});
}

TEST_CASE("number formatting and ranges")
{
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    const auto r = parse_range("0.5:1.5:5");
    REQUIRE(r.size() == 5);
    CHECK(r[0] == 0.5);
    CHECK(r[4] == 1.5);
    CHECK(r[2] == 1.0);
    CHECK(parse_range("2:2:1") == std::vector<double>{2.0});
    CHECK_THROWS_AS(parse_range("1:2"), ConfigError);
    CHECK_THROWS_AS(parse_range("a:2:3"), ConfigError);
    CHECK_THROWS_AS(parse_range("1:2:0"), ConfigError);
    CHECK_THROWS_AS(parse_sweep_param("beta"), ConfigError);
}

TEST_CASE("log-log slope")
{
    std::vector<double> x{1e-3, 1e-2, 1e-1}, y;
    for (double v : x)
        y.push_back(7.0 * v * v * v);
    CHECK(std::abs(loglog_slope(x, y) - 3.0) < 1e-12);
    CHECK(std::isnan(loglog_slope({1.0}, {1.0})));
}

TEST_CASE("simulate emits the fixed schema and is deterministic")
{
    auto doc = small_grid();
    doc.engine = Engine::both;
    const auto a = simulate(doc, NumericPolicy::standard());
    const auto b = simulate(doc, NumericPolicy::standard());
    CHECK(a.table.csv() == b.table.csv());
    CHECK(a.table.header == std::vector<std::string>{"engine", "p", "x", "theta", "delta_p",
                                                     "delta_d_re", "delta_d_im", "delta_Q",
                                                     "delta_S", "production"});
    CHECK(a.table.rows.size() == 2 * 9 * 5 * 2);
    CHECK(a.results.contains("lambda_scaling"));
    CHECK(a.results["lambda_scaling"]["rows"].size() == 5);
    REQUIRE(a.svg);
    CHECK(a.svg->find("<svg") == 0);
    CHECK(a.results["engines"]["perturbative"]["holds"] == true);
    CHECK(a.results["engines"]["exact-rwa"]["holds"] == true);
}

TEST_CASE("verify exit codes")
{
    auto doc = small_grid();
    CHECK(verify(doc, theorems::TheoremId::T2, NumericPolicy::standard()).exit_code == exit_pass);
    doc.theorem2_mean_n = {1.0, 3.0};
    const auto fail = verify(doc, theorems::TheoremId::T2, NumericPolicy::standard());
    CHECK(fail.exit_code == exit_counterexample);
    CHECK(fail.results["certificate"]["counterexample"]["point"]["x"] == 0.0);
    CHECK(fail.table.header ==
          std::vector<std::string>{"scenario", "quantity", "measured", "bound", "margin"});

    doc.theorem1_states = {{states::Coherent{{1.0, 0.0}}, 1.0}};
    CHECK(verify(doc, theorems::TheoremId::T1, NumericPolicy::standard()).exit_code ==
          exit_counterexample);
}

TEST_CASE("sweep schema")
{
    const auto doc = small_grid();
    const auto out = sweep(doc, SweepParam::mean_n, parse_range("0.5:1.5:3"),
                           NumericPolicy::standard());
    CHECK(out.table.header ==
          std::vector<std::string>{"mean_n", "min_production", "witness_p", "witness_x"});
    REQUIRE(out.table.rows.size() == 3);
    CHECK(std::stod(out.table.rows[0][1]) < 0.0);
    CHECK(std::stod(out.table.rows[1][1]) >= 0.0);
    CHECK(std::stod(out.table.rows[2][1]) < 0.0);
    const auto lam = sweep(doc, SweepParam::lambda, {0.01, 0.02}, NumericPolicy::standard());
    CHECK(lam.table.header[0] == "lambda");
}

TEST_CASE("scaling schema and monotone residuals")
{
    auto doc = parse_scenario_text(R"({"cavity": {"kind": "thermal", "temperature": 1.4426950408889634},
        "qubit": {"p": 0.25, "x": 0.1}})");
    const auto out = scaling(doc, NumericPolicy::standard());
    CHECK(out.table.header ==
          std::vector<std::string>{"lambda", "dp_pert", "dp_exact", "abs_err"});
    REQUIRE(out.table.rows.size() == 5);
    for (std::size_t i = 1; i < 5; ++i)
        CHECK(std::stod(out.table.rows[i][3]) < std::stod(out.table.rows[i - 1][3]));
    CHECK(out.results["slope"].get<double>() > 2.0);

    doc.qubit.reset();
    CHECK_THROWS_AS(scaling(doc, NumericPolicy::standard()), ConfigError);
}

TEST_CASE("ctpq-ensemble needs a ctpq cavity and reports per-sample rows")
{
    CHECK_THROWS_AS(ctpq_ensemble(small_grid(), 10, NumericPolicy::standard()), ConfigError);
    auto doc = parse_scenario_text(R"({"cavity": {"kind": "ctpq", "beta": 0.6931471805599453,
        "seed": 42, "levels": 32}, "qubit": {"grid": {"p_points": 5, "x_points": 3}},
        "ensemble": {"samples": 150, "verdict_samples": 10}})");
    const auto out = ctpq_ensemble(doc, std::nullopt, NumericPolicy::standard());
    CHECK(out.table.rows.size() == 150);
    CHECK(out.table.header[0] == "sample");
    CHECK(out.table.rows[3][1] == "45");
    CHECK(out.results["stats"]["verdicts_evaluated"] == 10);
}

TEST_CASE("report embeds the resolved scenario and separates timing")
{
    const auto doc = small_grid();
    const auto out = verify(doc, theorems::TheoremId::T2, NumericPolicy::standard());
    const auto rep = report(doc, out, "default", {1.5, "2026-01-01T00:00:00Z"});
    CHECK(rep["tool"] == "landauer_lab");
    CHECK(rep["csv_schema"] == "verify-t2/1");
    CHECK(rep["scenario"] == to_json(doc));
    CHECK(rep["timing"]["wall_seconds"] == 1.5);
    auto a = rep;
    auto b = report(doc, out, "default", {9.0, "2027-01-01T00:00:00Z"});
    a.erase("timing");
    b.erase("timing");
    CHECK(a == b);
}
