#include "landauer_lab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace landauer_lab::scenario {

using nlohmann::json;
using states::Complex;

std::string_view engine_name(Engine e)
{
    switch (e) {
    case Engine::perturbative:
        return "perturbative";
    case Engine::exact_rwa:
        return "exact-rwa";
    case Engine::exact_full:
        return "exact-full";
    case Engine::both:
        return "both";
    }
    return "?";
}

namespace {

std::string join_issues(const std::vector<std::string>& issues)
{
    std::string out = "invalid scenario";
    for (const auto& i : issues)
        out += "\n  " + i;
    return out;
}

/// Collects field-level problems instead of stopping at the first one.
class Reader {
public:
    std::vector<std::string> issues;

    void fail(const std::string& field, const std::string& msg)
    {
        issues.push_back(field + ": " + msg);
    }

    void allow_keys(const json& obj, const std::string& field, std::set<std::string> keys)
    {
        for (const auto& [k, v] : obj.items())
            if (!keys.count(k)) {
                std::string valid;
                for (const auto& key : keys)
                    valid += (valid.empty() ? "" : ", ") + key;
                fail(join(field, k), "unknown field (expected one of: " + valid + ")");
            }
    }

    static std::string join(const std::string& field, const std::string& key)
    {
        return field.empty() ? key : field + "." + key;
    }

    std::optional<double> number(const json& obj, const std::string& field, const std::string& key)
    {
        if (!obj.contains(key))
            return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            fail(join(field, key), "expected a number");
            return std::nullopt;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            fail(join(field, key), "must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<std::uint64_t> count(const json& obj, const std::string& field,
                                       const std::string& key)
    {
        if (!obj.contains(key))
            return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
            fail(join(field, key), "expected a non-negative integer");
            return std::nullopt;
        }
        return v.get<std::uint64_t>();
    }

    std::optional<std::string> text(const json& obj, const std::string& field,
                                    const std::string& key)
    {
        if (!obj.contains(key))
            return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_string()) {
            fail(join(field, key), "expected a string");
            return std::nullopt;
        }
        return v.get<std::string>();
    }

    /// number | [re, im] | {"re": .., "im": ..}
    std::optional<Complex> complex(const json& v, const std::string& field)
    {
        if (v.is_number())
            return Complex(v.get<double>(), 0.0);
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return Complex(v[0].get<double>(), v[1].get<double>());
        if (v.is_object()) {
            allow_keys(v, field, {"re", "im"});
            const auto re = number(v, field, "re");
            const auto im = number(v, field, "im");
            if (re || im)
                return Complex(re.value_or(0.0), im.value_or(0.0));
        }
        fail(field, "expected a complex number: x, [re, im] or {\"re\": x, \"im\": y}");
        return std::nullopt;
    }

    bool object(const json& j, const std::string& field)
    {
        if (j.is_object())
            return true;
        fail(field, "expected an object");
        return false;
    }

    std::optional<CavitySpec> cavity(const json& j, const std::string& field, double default_omega)
    {
        if (!object(j, field))
            return std::nullopt;
        const auto kind = text(j, field, "kind");
        if (!kind) {
            fail(join(field, "kind"), "required; valid kinds: " + std::string(states::valid_cavity_kinds));
            return std::nullopt;
        }
        const double omega = number(j, field, "omega").value_or(default_omega);
        std::optional<CavitySpec> out;
        const std::size_t before = issues.size();
        if (*kind == "thermal") {
            allow_keys(j, field, {"kind", "omega", "temperature", "n_max"});
            const auto t = number(j, field, "temperature");
            if (!t)
                fail(join(field, "temperature"), "required for a thermal cavity");
            else
                out = CavitySpec{states::Thermal{*t}, omega};
        } else if (*kind == "fock") {
            allow_keys(j, field, {"kind", "omega", "n", "n_max"});
            const auto n = count(j, field, "n");
            if (!n)
                fail(join(field, "n"), "required for a fock cavity");
            else
                out = CavitySpec{states::Fock{static_cast<std::size_t>(*n)}, omega};
        } else if (*kind == "coherent") {
            allow_keys(j, field, {"kind", "omega", "alpha", "n_max"});
            if (!j.contains("alpha"))
                fail(join(field, "alpha"), "required for a coherent cavity");
            else if (auto a = complex(j.at("alpha"), join(field, "alpha")))
                out = CavitySpec{states::Coherent{*a}, omega};
        } else if (*kind == "phase_averaged_coherent") {
            allow_keys(j, field, {"kind", "omega", "alpha", "phases", "n_max"});
            const auto phases = count(j, field, "phases");
            std::optional<Complex> a;
            if (!j.contains("alpha"))
                fail(join(field, "alpha"), "required");
            else
                a = complex(j.at("alpha"), join(field, "alpha"));
            if (!phases || *phases < 1)
                fail(join(field, "phases"), "required positive integer");
            else if (a)
                out = states::phase_averaged_coherent(*a, *phases, omega);
        } else if (*kind == "ctpq") {
            allow_keys(j, field, {"kind", "omega", "beta", "seed", "levels", "n_max"});
            const auto beta = number(j, field, "beta");
            const auto seed = count(j, field, "seed");
            const auto levels = count(j, field, "levels");
            if (!beta)
                fail(join(field, "beta"), "required for a ctpq cavity");
            if (!levels)
                fail(join(field, "levels"), "required for a ctpq cavity");
            if (beta && levels)
                out = CavitySpec{states::Ctpq{*beta, seed.value_or(0),
                                              static_cast<std::size_t>(*levels)},
                                 omega};
        } else if (*kind == "mixture") {
            allow_keys(j, field, {"kind", "omega", "components", "n_max"});
            const std::string cf = join(field, "components");
            if (!j.contains("components") || !j.at("components").is_array() ||
                j.at("components").empty()) {
                fail(cf, "required non-empty list");
            } else {
                states::Mixture mix;
                std::size_t k = 0;
                for (const auto& c : j.at("components")) {
                    const std::string ef = cf + "[" + std::to_string(k++) + "]";
                    if (!object(c, ef))
                        continue;
                    allow_keys(c, ef, {"weight", "amplitudes"});
                    const auto w = number(c, ef, "weight");
                    if (!w)
                        fail(join(ef, "weight"), "required");
                    std::vector<Complex> amps;
                    if (!c.contains("amplitudes") || !c.at("amplitudes").is_array()) {
                        fail(join(ef, "amplitudes"), "required list of complex numbers");
                    } else {
                        std::size_t i = 0;
                        for (const auto& a : c.at("amplitudes"))
                            if (auto v = complex(a, join(ef, "amplitudes") + "[" +
                                                        std::to_string(i++) + "]"))
                                amps.push_back(*v);
                    }
                    if (w)
                        mix.components.push_back({*w, std::move(amps)});
                }
                out = CavitySpec{std::move(mix), omega};
            }
        } else {
            fail(join(field, "kind"), "unknown cavity kind '" + *kind +
                                          "'; valid kinds: " + std::string(states::valid_cavity_kinds));
            return std::nullopt;
        }
        if (out && issues.size() == before) {
            try {
                out->validate();
            } catch (const Error& e) {
                fail(field, e.what());
                return std::nullopt;
            }
        }
        return issues.size() == before ? out : std::nullopt;
    }
};

std::string line_column(std::string_view text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    // nlohmann reports the byte after the offending character.
    return "line " + std::to_string(line) + ", column " + std::to_string(col > 1 ? col - 1 : 1);
}

json complex_to_json(Complex c)
{
    return json::array({c.real(), c.imag()});
}

} // namespace

ScenarioError::ScenarioError(std::vector<std::string> issues)
    : ConfigError(join_issues(issues)), issues_(std::move(issues))
{
}

bool ScenarioDoc::wants(std::string_view output) const
{
    return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

ScenarioDoc parse_scenario(const std::filesystem::path& path, const ParseOptions& options)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ScenarioError({path.string() + ": cannot open scenario file"});
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario_text(buf.str(), options);
    } catch (const ScenarioError& e) {
        std::vector<std::string> issues;
        for (const auto& i : e.issues())
            issues.push_back(path.string() + ": " + i);
        throw ScenarioError(std::move(issues));
    }
}

ScenarioDoc parse_scenario_text(std::string_view text, const ParseOptions& options)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        // Drop the library's own "[json.exception...] parse error at ...: " prefix.
        if (const auto pos = what.find(": ", what.find("parse error")); pos != std::string::npos)
            what = what.substr(pos + 2);
        throw ScenarioError({"syntax error at " + line_column(text, e.byte) + ": " + what});
    }
    return parse_scenario_json(j, options);
}

ScenarioDoc parse_scenario_json(const json& j, const ParseOptions& options)
{
    Reader r;
    ScenarioDoc doc;
    doc.allow_degenerate = options.allow_degenerate;
    if (!r.object(j, "<document>"))
        throw ScenarioError(r.issues);

    r.allow_keys(j, "", {"name", "coupling", "cavity", "qubit", "bound", "engine", "order",
                         "outputs", "seed", "theorem1", "theorem2", "ensemble", "scaling"});

    if (auto name = r.text(j, "", "name"))
        doc.name = *name;
    if (doc.name.empty() || doc.name.find_first_of("/\\") != std::string::npos)
        r.fail("name", "must be a non-empty file-name-safe string");

    if (j.contains("coupling") && r.object(j.at("coupling"), "coupling")) {
        const auto& c = j.at("coupling");
        r.allow_keys(c, "coupling", {"lambda", "Omega", "omega", "u", "T", "theta"});
        auto& cfg = doc.coupling;
        cfg.lambda = r.number(c, "coupling", "lambda").value_or(cfg.lambda);
        cfg.Omega = r.number(c, "coupling", "Omega").value_or(cfg.Omega);
        cfg.omega = r.number(c, "coupling", "omega").value_or(cfg.Omega);
        cfg.T = r.number(c, "coupling", "T").value_or(cfg.T);
        cfg.theta = r.number(c, "coupling", "theta").value_or(cfg.theta);
        if (c.contains("u"))
            if (auto u = r.complex(c.at("u"), "coupling.u"))
                cfg.u = *u;
    }
    const std::size_t coupling_issues = r.issues.size();
    try {
        doc.coupling.validate();
    } catch (const Error& e) {
        r.fail("coupling", e.what());
    }

    if (auto engine = r.text(j, "", "engine")) {
        if (*engine == "perturbative")
            doc.engine = Engine::perturbative;
        else if (*engine == "exact-rwa")
            doc.engine = Engine::exact_rwa;
        else if (*engine == "exact-full")
            doc.engine = Engine::exact_full;
        else if (*engine == "both")
            doc.engine = Engine::both;
        else
            r.fail("engine", "unknown engine '" + *engine +
                                 "'; valid engines: perturbative, exact-rwa, exact-full, both");
    }
    if (doc.engine != Engine::exact_rwa && doc.engine != Engine::exact_full &&
        r.issues.size() == coupling_issues && !doc.coupling.resonant())
        r.fail("coupling.omega", "engine '" + std::string(engine_name(doc.engine)) +
                                     "' needs the resonant mode, omega == Omega");

    if (auto order = r.count(j, "", "order")) {
        if (*order != 1 && *order != 2)
            r.fail("order", "must be 1 or 2");
        else
            doc.order = static_cast<int>(*order);
    }

    if (!j.contains("cavity")) {
        r.fail("cavity", "required; valid kinds: " + std::string(states::valid_cavity_kinds));
    } else if (auto cav = r.cavity(j.at("cavity"), "cavity", doc.coupling.omega)) {
        doc.cavity = std::move(*cav);
        if (auto n = r.count(j.at("cavity"), "cavity", "n_max"))
            doc.n_max = static_cast<std::size_t>(*n);
    }

    if (auto seed = r.count(j, "", "seed"))
        doc.seed = *seed;
    else if (const auto* c = std::get_if<states::Ctpq>(&doc.cavity.kind))
        doc.seed = c->seed;
    if (options.seed_override)
        doc.seed = *options.seed_override;
    if (auto* c = std::get_if<states::Ctpq>(&doc.cavity.kind); c && options.seed_override)
        c->seed = *options.seed_override;

    if (j.contains("qubit") && r.object(j.at("qubit"), "qubit")) {
        const auto& q = j.at("qubit");
        if (q.contains("grid")) {
            r.allow_keys(q, "qubit", {"grid"});
            const auto& g = q.at("grid");
            if (r.object(g, "qubit.grid")) {
                r.allow_keys(g, "qubit.grid", {"p_min", "p_max", "p_points", "x_points", "thetas"});
                auto& grid = doc.grid;
                grid.p_min = r.number(g, "qubit.grid", "p_min").value_or(grid.p_min);
                grid.p_max = r.number(g, "qubit.grid", "p_max").value_or(grid.p_max);
                grid.p_points = r.count(g, "qubit.grid", "p_points").value_or(grid.p_points);
                grid.x_points = r.count(g, "qubit.grid", "x_points").value_or(grid.x_points);
                if (g.contains("thetas")) {
                    grid.thetas.clear();
                    if (!g.at("thetas").is_array())
                        r.fail("qubit.grid.thetas", "expected a list of numbers");
                    else
                        for (const auto& t : g.at("thetas")) {
                            if (t.is_number())
                                grid.thetas.push_back(t.get<double>());
                            else
                                r.fail("qubit.grid.thetas", "expected a list of numbers");
                        }
                }
                try {
                    grid.validate();
                } catch (const Error& e) {
                    r.fail("qubit.grid", e.what());
                }
            }
        } else {
            r.allow_keys(q, "qubit", {"p", "x"});
            QubitPoint pt;
            pt.p = r.number(q, "qubit", "p").value_or(pt.p);
            pt.x = r.number(q, "qubit", "x").value_or(pt.x);
            try {
                states::QubitState(pt.p, pt.x, options.allow_degenerate);
                doc.qubit = pt;
            } catch (const Error& e) {
                r.fail("qubit", e.what());
            }
        }
    }

    std::optional<double> T_R;
    if (j.contains("bound") && r.object(j.at("bound"), "bound")) {
        r.allow_keys(j.at("bound"), "bound", {"T_R"});
        T_R = r.number(j.at("bound"), "bound", "T_R");
    }
    if (!T_R) {
        if (const auto* t = std::get_if<states::Thermal>(&doc.cavity.kind))
            T_R = t->temperature;
        else if (const auto* c = std::get_if<states::Ctpq>(&doc.cavity.kind); c && c->beta > 0)
            T_R = 1.0 / c->beta;
        else
            r.fail("bound.T_R", "required unless the cavity is thermal or ctpq");
    }
    if (T_R) {
        if (!(*T_R > 0.0))
            r.fail("bound.T_R", "must be positive");
        doc.T_R = *T_R;
    }

    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        doc.outputs.clear();
        if (!o.is_array()) {
            r.fail("outputs", "expected a list");
        } else {
            for (const auto& v : o) {
                const std::string s = v.is_string() ? v.get<std::string>() : "";
                if (s != "csv" && s != "json" && s != "summary" && s != "svg")
                    r.fail("outputs", "unknown artifact " + v.dump() +
                                          "; valid artifacts: csv, json, summary, svg");
                else
                    doc.outputs.push_back(s);
            }
        }
    }

    if (j.contains("theorem1") && r.object(j.at("theorem1"), "theorem1")) {
        const auto& t = j.at("theorem1");
        r.allow_keys(t, "theorem1", {"states"});
        if (t.contains("states")) {
            if (!t.at("states").is_array()) {
                r.fail("theorem1.states", "expected a list of cavity objects");
            } else {
                std::size_t k = 0;
                for (const auto& s : t.at("states"))
                    if (auto c = r.cavity(s, "theorem1.states[" + std::to_string(k++) + "]",
                                          doc.coupling.omega))
                        doc.theorem1_states.push_back(std::move(*c));
            }
        }
    }
    if (j.contains("theorem2") && r.object(j.at("theorem2"), "theorem2")) {
        const auto& t = j.at("theorem2");
        r.allow_keys(t, "theorem2", {"mean_n"});
        if (t.contains("mean_n")) {
            if (!t.at("mean_n").is_array())
                r.fail("theorem2.mean_n", "expected a list of numbers");
            else
                for (const auto& v : t.at("mean_n")) {
                    if (v.is_number() && v.get<double>() >= 0.0)
                        doc.theorem2_mean_n.push_back(v.get<double>());
                    else
                        r.fail("theorem2.mean_n", "entries must be non-negative numbers");
                }
        }
    }
    if (j.contains("ensemble") && r.object(j.at("ensemble"), "ensemble")) {
        const auto& e = j.at("ensemble");
        r.allow_keys(e, "ensemble", {"samples", "verdict_samples"});
        doc.ensemble_samples = r.count(e, "ensemble", "samples").value_or(doc.ensemble_samples);
        doc.ensemble_verdict_samples =
            r.count(e, "ensemble", "verdict_samples").value_or(doc.ensemble_verdict_samples);
        if (doc.ensemble_samples == 0)
            r.fail("ensemble.samples", "must be positive");
    }
    if (j.contains("scaling") && r.object(j.at("scaling"), "scaling")) {
        const auto& s = j.at("scaling");
        r.allow_keys(s, "scaling", {"lambdas"});
        if (s.contains("lambdas")) {
            doc.scaling_lambdas.clear();
            if (!s.at("lambdas").is_array())
                r.fail("scaling.lambdas", "expected a list of numbers");
            else
                for (const auto& v : s.at("lambdas")) {
                    if (v.is_number() && v.get<double>() > 0.0)
                        doc.scaling_lambdas.push_back(v.get<double>());
                    else
                        r.fail("scaling.lambdas", "entries must be positive numbers");
                }
            if (doc.scaling_lambdas.size() < 2)
                r.fail("scaling.lambdas", "need at least two values for a slope");
        }
    }

    if (!r.issues.empty())
        throw ScenarioError(r.issues);
    return doc;
}

json cavity_to_json(const CavitySpec& spec)
{
    json j;
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, states::Thermal>) {
                j["kind"] = "thermal";
                j["temperature"] = k.temperature;
            } else if constexpr (std::is_same_v<K, states::Fock>) {
                j["kind"] = "fock";
                j["n"] = k.n;
            } else if constexpr (std::is_same_v<K, states::Coherent>) {
                j["kind"] = "coherent";
                j["alpha"] = complex_to_json(k.alpha);
            } else if constexpr (std::is_same_v<K, states::Ctpq>) {
                j["kind"] = "ctpq";
                j["beta"] = k.beta;
                j["seed"] = k.seed;
                j["levels"] = k.levels;
            } else {
                j["kind"] = "mixture";
                j["components"] = json::array();
                for (const auto& c : k.components) {
                    json amps = json::array();
                    for (const auto& a : c.amplitudes)
                        amps.push_back(complex_to_json(a));
                    j["components"].push_back({{"weight", c.weight}, {"amplitudes", amps}});
                }
            }
        },
        spec.kind);
    j["omega"] = spec.omega;
    return j;
}

json to_json(const ScenarioDoc& doc)
{
    const auto& c = doc.coupling;
    json j;
    j["name"] = doc.name;
    j["coupling"] = {{"lambda", c.lambda}, {"Omega", c.Omega}, {"omega", c.omega},
                     {"u", complex_to_json(c.u)}, {"T", c.T}, {"theta", c.theta}};
    j["cavity"] = cavity_to_json(doc.cavity);
    if (doc.n_max)
        j["cavity"]["n_max"] = *doc.n_max;
    if (doc.qubit)
        j["qubit"] = {{"p", doc.qubit->p}, {"x", doc.qubit->x}};
    else
        j["qubit"] = {{"grid",
                       {{"p_min", doc.grid.p_min},
                        {"p_max", doc.grid.p_max},
                        {"p_points", doc.grid.p_points},
                        {"x_points", doc.grid.x_points},
                        {"thetas", doc.grid.thetas}}}};
    j["bound"] = {{"T_R", doc.T_R}};
    j["engine"] = std::string(engine_name(doc.engine));
    j["order"] = doc.order;
    j["outputs"] = doc.outputs;
    j["seed"] = doc.seed;
    json states = json::array();
    for (const auto& s : doc.theorem1_states)
        states.push_back(cavity_to_json(s));
    j["theorem1"] = {{"states", states}};
    j["theorem2"] = {{"mean_n", doc.theorem2_mean_n}};
    j["ensemble"] = {{"samples", doc.ensemble_samples},
                     {"verdict_samples", doc.ensemble_verdict_samples}};
    j["scaling"] = {{"lambdas", doc.scaling_lambdas}};
    return j;
}

} // namespace landauer_lab::scenario
