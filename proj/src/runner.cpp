#include "landauer_lab/runner.hpp"

#include "landauer_lab/errors.hpp"
#include "landauer_lab/landauer.hpp"
#include "landauer_lab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace landauer_lab::runner {

using nlohmann::json;
using perturbation::CouplingConfig;
using scenario::Engine;
using states::CavitySpec;
using states::QubitState;
using states::ReservoirMoments;

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Table::add(std::vector<std::string> row)
{
    if (row.size() != header.size())
        throw Error("table row has " + std::to_string(row.size()) + " cells, header has " +
                    std::to_string(header.size()));
    rows.push_back(std::move(row));
}

std::string Table::csv() const
{
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows)
        line(r);
    return out;
}

namespace {

const char* verdict_text(bool holds)
{
    return holds ? "holds" : "violated";
}

std::size_t levels_for(const ScenarioDoc& doc, const CavitySpec& spec, const NumericPolicy& tol)
{
    return doc.n_max ? *doc.n_max : states::required_levels(spec, tol);
}

ReservoirMoments moments_of(const ScenarioDoc& doc, const CavitySpec& spec,
                            const NumericPolicy& tol)
{
    const std::size_t n = levels_for(doc, spec, tol);
    return states::reservoir_moments(states::build_cavity(spec, n, tol), n);
}

/// Resonant-mode configuration with the cavity's own frequency.
CouplingConfig coupling_for(const ScenarioDoc& doc)
{
    CouplingConfig cfg = doc.coupling;
    cfg.omega = doc.cavity.omega;
    return cfg;
}

std::vector<landauer::ScanPoint> points_of(const ScenarioDoc& doc)
{
    std::vector<landauer::ScanPoint> pts;
    if (doc.qubit) {
        pts.push_back({doc.qubit->p, doc.qubit->x, doc.coupling.theta});
        return pts;
    }
    for (double p : doc.grid.p_values())
        for (double x : doc.grid.x_values(p))
            for (double theta : doc.grid.thetas)
                pts.push_back({p, x, theta});
    return pts;
}

std::vector<PointResult> perturbative_points(const ScenarioDoc& doc,
                                             const std::vector<landauer::ScanPoint>& pts,
                                             const NumericPolicy& tol)
{
    const auto m = moments_of(doc, doc.cavity, tol);
    std::vector<PointResult> out(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        CouplingConfig cfg = coupling_for(doc);
        cfg.theta = pts[i].theta;
        const QubitState q(pts[i].p, pts[i].x, doc.allow_degenerate);
        const auto rep = perturbation::perturbative_report(q, m, cfg, doc.order);
        const double dS = landauer::entropy_change(q, rep.correction, tol).delta_S;
        out[i] = {"perturbative", q.p(), q.x(), cfg.theta, rep.correction.delta_p,
                  rep.correction.delta_d, rep.delta_Q, dS, rep.delta_Q - doc.T_R * dS};
    });
    return out;
}

std::vector<PointResult> exact_points(const ScenarioDoc& doc,
                                      const std::vector<landauer::ScanPoint>& pts,
                                      oracle::Model model, const NumericPolicy& tol)
{
    const std::size_t n = levels_for(doc, doc.cavity, tol);
    const auto cavity = states::build_cavity(doc.cavity, n, tol);

    // One propagator per distinct theta.
    std::vector<double> thetas;
    for (const auto& pt : pts)
        if (std::find(thetas.begin(), thetas.end(), pt.theta) == thetas.end())
            thetas.push_back(pt.theta);
    std::vector<std::optional<oracle::JointPropagator>> props(thetas.size());
    parallel_for(thetas.size(), [&](std::size_t k) {
        CouplingConfig cfg = coupling_for(doc);
        cfg.theta = thetas[k];
        props[k].emplace(cfg, n, model, tol);
    });

    const std::string engine = model == oracle::Model::rwa ? "exact-rwa" : "exact-full";
    std::vector<PointResult> out(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        const auto k = static_cast<std::size_t>(
            std::find(thetas.begin(), thetas.end(), pts[i].theta) - thetas.begin());
        const QubitState q(pts[i].p, pts[i].x, doc.allow_degenerate);
        const auto res = props[k]->evolve(q, cavity);
        const auto& qf = res.qubit_final;
        const double dS = landauer::von_neumann_entropy(q.matrix(), tol) -
                          landauer::von_neumann_entropy(qf, tol);
        out[i] = {engine,
                  q.p(),
                  q.x(),
                  pts[i].theta,
                  qf(0, 0).real() - q.p(),
                  q.x() - qf(0, 1),
                  res.delta_Q_exact,
                  dS,
                  res.delta_Q_exact - doc.T_R * dS};
    });
    return out;
}

std::string production_svg(const std::vector<PointResult>& rows)
{
    // Minimum production over (x, theta) for each p, one polyline per engine.
    std::map<std::string, std::map<double, double>> curves;
    for (const auto& r : rows) {
        auto& c = curves[r.engine];
        auto it = c.find(r.p);
        if (it == c.end() || r.production < it->second)
            c[r.p] = r.production;
    }
    double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
    double ymin = pmin, ymax = -pmin;
    for (const auto& [_, c] : curves)
        for (const auto& [p, y] : c) {
            pmin = std::min(pmin, p);
            pmax = std::max(pmax, p);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    ymin = std::min(ymin, 0.0);
    ymax = std::max(ymax, 0.0);
    if (pmax <= pmin)
        pmax = pmin + 1.0;
    if (ymax <= ymin)
        ymax = ymin + 1.0;

    const double W = 640, H = 400, L = 70, R = 20, Tp = 20, B = 50;
    auto sx = [&](double p) { return L + (p - pmin) / (pmax - pmin) * (W - L - R); };
    auto sy = [&](double y) { return Tp + (ymax - y) / (ymax - ymin) * (H - Tp - B); };
    const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << sy(0) << "\" x2=\"" << W - R << "\" y2=\"" << sy(0)
      << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    s << "<rect x=\"" << L << "\" y=\"" << Tp << "\" width=\"" << W - L - R << "\" height=\""
      << H - Tp - B << "\" fill=\"none\" stroke=\"black\"/>\n";
    s << "<text x=\"" << (W + L - R) / 2 << "\" y=\"" << H - 15
      << "\" text-anchor=\"middle\">p</text>\n";
    s << "<text x=\"15\" y=\"" << (H - B + Tp) / 2 << "\" transform=\"rotate(-90 15 "
      << (H - B + Tp) / 2 << ")\" text-anchor=\"middle\">min production</text>\n";
    s << "<text x=\"" << L << "\" y=\"" << H - B + 15 << "\">" << format_number(pmin)
      << "</text>\n<text x=\"" << W - R << "\" y=\"" << H - B + 15 << "\" text-anchor=\"end\">"
      << format_number(pmax) << "</text>\n";
    s << "<text x=\"" << L - 5 << "\" y=\"" << Tp + 10 << "\" text-anchor=\"end\">"
      << format_number(ymax) << "</text>\n<text x=\"" << L - 5 << "\" y=\"" << H - B
      << "\" text-anchor=\"end\">" << format_number(ymin) << "</text>\n";
    std::size_t k = 0;
    for (const auto& [engine, c] : curves) {
        const char* colour = colours[k % 4];
        s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [p, y] : c)
            s << sx(p) << ',' << sy(y) << ' ';
        s << "\"/>\n";
        s << "<text x=\"" << W - R - 5 << "\" y=\"" << Tp + 15 + 15 * k << "\" fill=\"" << colour
          << "\" text-anchor=\"end\">" << engine << "</text>\n";
        ++k;
    }
    s << "</svg>\n";
    return s.str();
}

json point_json(const landauer::ScanPoint& pt)
{
    return {{"p", pt.p}, {"x", pt.x}, {"theta", pt.theta}};
}

json certificate_json(const theorems::TheoremCertificate& c)
{
    json ev = json::array();
    for (const auto& e : c.evidence)
        ev.push_back({{"scenario", e.scenario},
                      {"quantity", e.quantity},
                      {"measured", e.measured},
                      {"bound", e.bound},
                      {"margin", e.margin}});
    json j = {{"theorem_id", std::string(theorems::theorem_name(c.theorem_id))},
              {"passed", c.passed},
              {"scope", c.scope},
              {"evidence", ev},
              {"counterexample", nullptr}};
    if (c.counterexample) {
        const auto& ce = *c.counterexample;
        j["counterexample"] = {{"scenario", ce.scenario},
                               {"reason", ce.reason},
                               {"value", ce.value},
                               {"point", ce.point ? point_json(*ce.point) : json(nullptr)}};
    }
    return j;
}

Table evidence_table(const theorems::TheoremCertificate& c)
{
    Table t{{"scenario", "quantity", "measured", "bound", "margin"}, {}};
    for (const auto& e : c.evidence)
        t.add({e.scenario, e.quantity, format_number(e.measured), format_number(e.bound),
               format_number(e.margin)});
    return t;
}

std::string certificate_summary(const theorems::TheoremCertificate& c)
{
    std::string s = std::string(theorems::theorem_name(c.theorem_id)) +
                    (c.passed ? ": passed" : ": counterexample") + " (" + c.scope + ")\n";
    if (c.counterexample) {
        const auto& ce = *c.counterexample;
        s += "  " + ce.scenario + ": " + ce.reason + ", value " + format_number(ce.value);
        if (ce.point)
            s += " at p=" + format_number(ce.point->p) + " x=" + format_number(ce.point->x) +
                 " theta=" + format_number(ce.point->theta);
        s += "\n";
    }
    return s;
}

json verdict_json(const landauer::LandauerVerdict& v)
{
    return {{"delta_Q", v.delta_Q},
            {"T_R", v.T_R},
            {"delta_S", v.delta_S},
            {"entropy_production", v.entropy_production},
            {"holds", v.holds},
            {"witness", v.witness ? point_json(*v.witness) : json(nullptr)},
            {"argmin", point_json(v.scan_meta.argmin)},
            {"grid", v.scan_meta.grid},
            {"points", v.scan_meta.points},
            {"tolerance", v.scan_meta.tolerance},
            {"delta_s_peaks_at_zero_coherence", v.scan_meta.delta_s_peaks_at_zero_coherence}};
}

oracle::Model scaling_model(const ScenarioDoc& doc)
{
    return doc.engine == Engine::exact_full ? oracle::Model::full : oracle::Model::rwa;
}

json scaling_json(const std::vector<ScalingRow>& rows, double slope, oracle::Model model)
{
    json r = json::array();
    for (const auto& row : rows)
        r.push_back({{"lambda", row.lambda},
                     {"dp_pert", row.dp_pert},
                     {"dp_exact", row.dp_exact},
                     {"abs_err", row.abs_err}});
    return {{"oracle", std::string(oracle::model_name(model))}, {"rows", r}, {"slope", slope}};
}

} // namespace

std::vector<ScalingRow> scaling_table(const QubitState& q, const CavitySpec& cavity,
                                      const CouplingConfig& cfg, const std::vector<double>& lambdas,
                                      oracle::Model model, const NumericPolicy& tol)
{
    const std::size_t n = states::required_levels(cavity, tol);
    const auto rho = states::build_cavity(cavity, n, tol);
    const auto m = states::reservoir_moments(rho, n);
    std::vector<ScalingRow> rows(lambdas.size());
    parallel_for(lambdas.size(), [&](std::size_t i) {
        CouplingConfig c = cfg;
        c.lambda = lambdas[i];
        c.omega = cavity.omega;
        const double pert = perturbation::perturbative_report(q, m, c, 2).correction.delta_p;
        const auto res = oracle::evolve_exact(q, rho, c, model, tol);
        const double exact = res.qubit_final(0, 0).real() - q.p();
        rows[i] = {lambdas[i], pert, exact, std::abs(pert - exact)};
    });
    return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    const double den = static_cast<double>(n) * sxx - sx * sx;
    if (n < 2 || den == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return (static_cast<double>(n) * sxy - sx * sy) / den;
}

SweepParam parse_sweep_param(std::string_view name)
{
    if (name == "mean_n")
        return SweepParam::mean_n;
    if (name == "lambda")
        return SweepParam::lambda;
    if (name == "T_R")
        return SweepParam::T_R;
    if (name == "T")
        return SweepParam::T;
    throw ConfigError("unknown sweep parameter '" + std::string(name) +
                      "'; valid parameters: mean_n, lambda, T_R, T");
}

std::string_view sweep_param_name(SweepParam p)
{
    switch (p) {
    case SweepParam::mean_n:
        return "mean_n";
    case SweepParam::lambda:
        return "lambda";
    case SweepParam::T_R:
        return "T_R";
    case SweepParam::T:
        return "T";
    }
    return "?";
}

std::vector<double> parse_range(std::string_view spec)
{
    const std::string s(spec);
    const auto c1 = s.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : s.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw ConfigError("range '" + s + "' must look like a:b:n");
    double a = 0, b = 0;
    long n = 0;
    try {
        std::size_t used = 0;
        a = std::stod(s.substr(0, c1), &used);
        if (used != c1)
            throw ConfigError("");
        const std::string bs = s.substr(c1 + 1, c2 - c1 - 1);
        b = std::stod(bs, &used);
        if (used != bs.size())
            throw ConfigError("");
        const std::string ns = s.substr(c2 + 1);
        n = std::stol(ns, &used);
        if (used != ns.size())
            throw ConfigError("");
    } catch (const std::exception&) {
        throw ConfigError("range '" + s + "' must look like a:b:n with numbers a, b and count n");
    }
    if (n < 1)
        throw ConfigError("range count must be at least 1");
    if (n == 1 && a != b)
        throw ConfigError("range with one point needs a == b");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

RunOutput simulate(const ScenarioDoc& doc, const NumericPolicy& tol)
{
    RunOutput out;
    out.subcommand = "simulate";
    out.csv_schema = "simulate/1";
    out.table.header = {"engine",     "p",          "x",       "theta",   "delta_p",
                        "delta_d_re", "delta_d_im", "delta_Q", "delta_S", "production"};

    const auto pts = points_of(doc);
    std::vector<PointResult> rows;
    auto append = [&](std::vector<PointResult> r) {
        rows.insert(rows.end(), r.begin(), r.end());
    };
    if (doc.engine == Engine::perturbative || doc.engine == Engine::both)
        append(perturbative_points(doc, pts, tol));
    if (doc.engine == Engine::exact_rwa || doc.engine == Engine::both)
        append(exact_points(doc, pts, oracle::Model::rwa, tol));
    if (doc.engine == Engine::exact_full)
        append(exact_points(doc, pts, oracle::Model::full, tol));

    for (const auto& r : rows)
        out.table.add({r.engine, format_number(r.p), format_number(r.x), format_number(r.theta),
                       format_number(r.delta_p), format_number(r.delta_d.real()),
                       format_number(r.delta_d.imag()), format_number(r.delta_Q),
                       format_number(r.delta_S), format_number(r.production)});

    const auto m = moments_of(doc, doc.cavity, tol);
    out.results["reservoir"] = {{"n_max", levels_for(doc, doc.cavity, tol)},
                                {"mean_a", {m.mean_a.real(), m.mean_a.imag()}},
                                {"mean_n", m.mean_n},
                                {"thermal_mean_n", states::bose_einstein(doc.cavity.omega, doc.T_R)}};

    // Per-engine minimum production; perturbative slack scales with the second-order size.
    std::map<std::string, const PointResult*> worst;
    for (const auto& r : rows) {
        auto& w = worst[r.engine];
        if (!w || r.production < w->production)
            w = &r;
    }
    json engines = json::object();
    std::ostringstream summary;
    summary << doc.name << ": " << pts.size() << " qubit point(s), T_R = "
            << format_number(doc.T_R) << "\n";
    for (const auto& [engine, w] : worst) {
        const double slack = engine == "perturbative"
                                 ? tol.production * landauer::second_order_scale(coupling_for(doc))
                                 : tol.production;
        const bool holds = w->production >= -slack;
        engines[engine] = {{"min_production", w->production},
                           {"argmin", {{"p", w->p}, {"x", w->x}, {"theta", w->theta}}},
                           {"tolerance", slack},
                           {"holds", holds}};
        summary << "  " << engine << ": min production " << format_number(w->production)
                << " at p=" << format_number(w->p) << " x=" << format_number(w->x)
                << " theta=" << format_number(w->theta) << ", bound " << verdict_text(holds)
                << "\n";
    }
    out.results["engines"] = engines;

    if (doc.engine == Engine::both) {
        const auto pt = doc.qubit.value_or(scenario::QubitPoint{0.25, 0.1});
        const auto model = oracle::Model::rwa;
        const auto table = scaling_table(QubitState(pt.p, pt.x, doc.allow_degenerate),
                                         doc.cavity, coupling_for(doc), doc.scaling_lambdas, model,
                                         tol);
        std::vector<double> ls, es;
        for (const auto& r : table) {
            ls.push_back(r.lambda);
            es.push_back(r.abs_err);
        }
        const double slope = loglog_slope(ls, es);
        out.results["lambda_scaling"] = scaling_json(table, slope, model);
        out.results["lambda_scaling"]["qubit"] = {{"p", pt.p}, {"x", pt.x}};
        summary << "  lambda scaling of |dp_pert - dp_exact|: slope " << format_number(slope)
                << "\n";
    }
    out.summary = summary.str();
    if (!doc.qubit)
        out.svg = production_svg(rows);
    return out;
}

RunOutput verify(const ScenarioDoc& doc, theorems::TheoremId which, const NumericPolicy& tol)
{
    RunOutput out;
    const CouplingConfig cfg = coupling_for(doc);
    theorems::TheoremCertificate cert;
    if (which == theorems::TheoremId::T1) {
        out.subcommand = "verify-t1";
        auto list = doc.theorem1_states;
        if (list.empty())
            list.push_back(doc.cavity);
        cert = theorems::verify_theorem1(list, cfg, doc.grid, tol);
    } else if (which == theorems::TheoremId::T2) {
        out.subcommand = "verify-t2";
        auto values = doc.theorem2_mean_n;
        if (values.empty())
            values.push_back(states::bose_einstein(cfg.omega, doc.T_R));
        cert = theorems::verify_theorem2(values, doc.T_R, cfg, doc.grid, tol);
        const auto scans = theorems::theorem2_scans(values, doc.T_R, cfg, doc.grid, tol);
        json v = json::array();
        for (std::size_t i = 0; i < scans.size(); ++i) {
            auto j = verdict_json(scans[i]);
            j["mean_n"] = values[i];
            v.push_back(j);
        }
        out.results["scans"] = v;
        out.results["thermal_mean_n"] = states::bose_einstein(cfg.omega, doc.T_R);
        out.results["thermal_crossing_p"] =
            theorems::thermal_crossing(states::bose_einstein(cfg.omega, doc.T_R));
    } else {
        throw ConfigError("verify supports t1 and t2; use ctpq-ensemble for the CTPQ analysis");
    }
    out.csv_schema = out.subcommand + "/1";
    out.table = evidence_table(cert);
    out.results["certificate"] = certificate_json(cert);
    out.exit_code = cert.passed ? exit_pass : exit_counterexample;
    out.summary = doc.name + ": " + certificate_summary(cert);
    return out;
}

RunOutput ctpq_ensemble(const ScenarioDoc& doc, std::optional<std::size_t> samples,
                        const NumericPolicy& tol)
{
    if (!std::holds_alternative<states::Ctpq>(doc.cavity.kind))
        throw ConfigError("cavity.kind: ctpq-ensemble needs a ctpq cavity, got " +
                          doc.cavity.kind_name());
    RunOutput out;
    out.subcommand = "ctpq-ensemble";
    out.csv_schema = "ctpq-ensemble/1";
    const std::size_t M = samples.value_or(doc.ensemble_samples);
    theorems::EnsembleOptions opts;
    opts.verdict_samples = std::min(doc.ensemble_verdict_samples, M);
    const auto res = theorems::ctpq_ensemble(doc.seed, M, doc.cavity, coupling_for(doc), doc.T_R,
                                             doc.grid, opts, tol);

    out.table.header = {"sample", "seed", "mean_a_re", "mean_a_im", "mean_n", "verdict"};
    for (std::size_t i = 0; i < res.samples.size(); ++i) {
        const auto& s = res.samples[i];
        out.table.add({std::to_string(i), std::to_string(s.seed),
                       format_number(s.moments.mean_a.real()),
                       format_number(s.moments.mean_a.imag()), format_number(s.moments.mean_n),
                       s.verdict_holds ? verdict_text(*s.verdict_holds) : ""});
    }
    const auto& st = res.stats;
    const double failure_rate =
        st.verdicts_evaluated
            ? static_cast<double>(st.verdict_failures) / static_cast<double>(st.verdicts_evaluated)
            : std::numeric_limits<double>::quiet_NaN();
    out.results["stats"] = {
        {"samples", st.samples},
        {"base_seed", doc.seed},
        {"thermal_mean_n", states::bose_einstein(doc.cavity.omega, doc.T_R)},
        {"mean_of_mean_a", {st.mean_of_mean_a.real(), st.mean_of_mean_a.imag()}},
        {"mean_of_mean_n", st.mean_of_mean_n},
        {"stderr_a", st.stderr_a},
        {"stderr_n", st.stderr_n},
        {"ensemble_mean_a", {st.ensemble_mean_a.real(), st.ensemble_mean_a.imag()}},
        {"ensemble_mean_n", st.ensemble_mean_n},
        {"ensemble_stderr_a", st.ensemble_stderr_a},
        {"ensemble_stderr_n", st.ensemble_stderr_n},
        {"min_mean_n", st.min_mean_n},
        {"max_mean_n", st.max_mean_n},
        {"max_abs_mean_a", st.max_abs_mean_a},
        {"verdicts_evaluated", st.verdicts_evaluated},
        {"verdict_failures", st.verdict_failures},
        {"verdict_failure_rate", st.verdicts_evaluated ? json(failure_rate) : json(nullptr)}};
    out.results["certificate"] = certificate_json(res.certificate);
    out.exit_code = res.certificate.passed ? exit_pass : exit_counterexample;

    std::ostringstream s;
    s << doc.name << ": " << M << " CTPQ samples from seed " << doc.seed << "\n"
      << "  ensemble <n> = " << format_number(st.ensemble_mean_n) << " +- "
      << format_number(st.ensemble_stderr_n) << ", |ensemble <a>| = "
      << format_number(std::abs(st.ensemble_mean_a)) << " +- "
      << format_number(st.ensemble_stderr_a) << "\n"
      << "  mean of per-sample <n> = " << format_number(st.mean_of_mean_n) << " +- "
      << format_number(st.stderr_n) << "\n";
    if (st.verdicts_evaluated)
        s << "  single-run verdict failures: " << st.verdict_failures << "/"
          << st.verdicts_evaluated << "\n";
    out.summary = s.str() + "  " + certificate_summary(res.certificate);
    return out;
}

RunOutput sweep(const ScenarioDoc& doc, SweepParam param, const std::vector<double>& values,
                const NumericPolicy& tol)
{
    RunOutput out;
    out.subcommand = "sweep";
    out.csv_schema = "sweep/1";
    const std::string name(sweep_param_name(param));
    out.table.header = {name, "min_production", "witness_p", "witness_x"};

    const auto base_moments = moments_of(doc, doc.cavity, tol);
    std::vector<landauer::LandauerVerdict> verdicts;
    for (double v : values) {
        CouplingConfig cfg = coupling_for(doc);
        ReservoirMoments m = base_moments;
        double T_R = doc.T_R;
        switch (param) {
        case SweepParam::mean_n:
            if (!(v >= 0.0))
                throw ConfigError("sweep: mean_n values must be non-negative");
            m = {{0.0, 0.0}, v};
            break;
        case SweepParam::lambda:
            cfg.lambda = v;
            break;
        case SweepParam::T_R:
            T_R = v;
            break;
        case SweepParam::T:
            cfg.T = v;
            break;
        }
        verdicts.push_back(landauer::scan_bound(m, cfg, T_R, doc.grid, tol));
    }

    json rows = json::array();
    std::size_t violations = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& v = verdicts[i];
        // witness columns hold the minimising grid point, a violation witness when production < 0.
        out.table.add({format_number(values[i]), format_number(v.entropy_production),
                       format_number(v.scan_meta.argmin.p), format_number(v.scan_meta.argmin.x)});
        auto j = verdict_json(v);
        j[name] = values[i];
        rows.push_back(j);
        violations += v.holds ? 0 : 1;
    }
    out.results["parameter"] = name;
    out.results["verdicts"] = rows;
    out.summary = doc.name + ": swept " + name + " over " + std::to_string(values.size()) +
                  " values, bound violated at " + std::to_string(violations) + "\n";
    return out;
}

RunOutput scaling(const ScenarioDoc& doc, const NumericPolicy& tol)
{
    if (!doc.qubit)
        throw ConfigError("qubit: scaling needs a single qubit point {p, x}, not a grid");
    RunOutput out;
    out.subcommand = "scaling";
    out.csv_schema = "scaling/1";
    out.table.header = {"lambda", "dp_pert", "dp_exact", "abs_err"};
    const auto model = scaling_model(doc);
    const auto rows =
        scaling_table(QubitState(doc.qubit->p, doc.qubit->x, doc.allow_degenerate), doc.cavity,
                      coupling_for(doc), doc.scaling_lambdas, model, tol);
    std::vector<double> ls, es;
    for (const auto& r : rows) {
        out.table.add({format_number(r.lambda), format_number(r.dp_pert), format_number(r.dp_exact),
                       format_number(r.abs_err)});
        ls.push_back(r.lambda);
        es.push_back(r.abs_err);
    }
    const double slope = loglog_slope(ls, es);
    out.results = scaling_json(rows, slope, model);
    out.summary = doc.name + ": log-log slope of |dp_pert - dp_exact| vs lambda = " +
                  format_number(slope) + " (" + std::string(oracle::model_name(model)) +
                  " oracle)\n";
    return out;
}

json report(const ScenarioDoc& doc, const RunOutput& out, std::string_view profile,
            const Timing& timing)
{
    json seeds = {{"scenario", doc.seed}};
    if (const auto* c = std::get_if<states::Ctpq>(&doc.cavity.kind))
        seeds["cavity"] = c->seed;
    return {{"tool", std::string(tool_name)},
            {"version", std::string(tool_version)},
            {"subcommand", out.subcommand},
            {"scenario", scenario::to_json(doc)},
            {"tolerance_profile", std::string(profile)},
            {"seeds", seeds},
            {"csv_schema", out.csv_schema},
            {"columns", out.table.header},
            {"results", out.results},
            {"exit_code", out.exit_code},
            {"timing", {{"wall_seconds", timing.wall_seconds}, {"finished_at", timing.finished_at}}}};
}

} // namespace landauer_lab::runner
