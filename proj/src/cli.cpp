#include "schw/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "schw/acceptance.hpp"
#include "schw/disk.hpp"
#include "schw/errors.hpp"
#include "schw/harmonic.hpp"
#include "schw/ode.hpp"
#include "schw/parser.hpp"
#include "schw/report.hpp"
#include "schw/schwarzian.hpp"
#include "schw/valence.hpp"

namespace schw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Raised by command handlers for malformed option values.
struct UsageError : Error {
    using Error::Error;
};

/// Option storage shared by every subcommand; each leaf registers the
/// subset it understands, so unknown flags are still rejected per command.
struct RunConfig {
    std::string format = "text";
    bool format_given = false;
    std::string output;
    std::string seed = "0xC0FFEE";

    std::string f, h, q = "0", psi;
    std::string z = "0", w = "0", a = "0", b = "0", center = "0", from, to;
    std::string u0, du0;
    std::string profile = "quadratic", context = "constant", kind = "constant";
    std::optional<double> C;
    std::vector<double> Cs;
    double r = 0.99, radius = 0.99, theta = 0.0;
    double sweep_from = 4.0, sweep_to = 1024.0;
    int points = 0;
    int n = 0, grid = 401, steps = 2000, nodes = 4096, trials = 100, samples = 64;
    int rings = 40, spokes = 64, seeds = 24;
    double seed_radius = 0.95;
    bool no_refine = false;
};

struct ParseFailure {
    std::string text;
    std::string message;
    std::size_t offset;
};

AnalyticExpr expr_arg(const std::string& text) {
    try {
        return parse(text);
    } catch (const ParseError& e) {
        throw ParseFailure{text, e.what(), e.offset()};
    }
}

Complex complex_arg(const std::string& text) {
    try {
        return parse_complex(text);
    } catch (const ParseError& e) {
        throw ParseFailure{text, e.what(), e.offset()};
    }
}

std::uint64_t seed_arg(const std::string& text) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &used, 0);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty() || text[0] == '-') throw UsageError("--seed expects an unsigned 64-bit integer");
    return v;
}

double require_C(const RunConfig& c) {
    if (!c.C) throw UsageError("--C is required");
    return *c.C;
}

Json json_points(const std::vector<Complex>& pts) {
    Json arr = Json::array();
    for (Complex p : pts) arr.push_back(to_json(p));
    return arr;
}

std::string complex_text(Complex z) {
    if (z.imag() == 0.0) return format_double(z.real());
    return format_double(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + format_double(std::abs(z.imag())) + "i";
}

Report make(const std::string& command) {
    Report r;
    r.command = command;
    return r;
}

// ---- schw -------------------------------------------------------------

Report schw_eval(const RunConfig& c) {
    auto r = make("schw eval");
    const auto f = expr_arg(c.f);
    const Complex z = complex_arg(c.z);
    r.inputs = Json{{"f", f.to_string()}, {"z", to_json(z)}};
    const Complex s = schwarzian(f, z);
    r.values = Json{{"schwarzian", to_json(s)}};
    r.headline = complex_text(s);
    return r;
}

Report schw_norm(const RunConfig& c) {
    auto r = make("schw norm");
    const auto f = expr_arg(c.f);
    GridSpec g;
    g.resolution = c.grid;
    g.refine = !c.no_refine;
    r.inputs = Json{{"f", f.to_string()}, {"grid", c.grid}, {"refine", g.refine}};
    const auto e = schwarzian_norm_estimate(f, g);
    r.values = Json{{"lower_bound", e.lower_bound},
                    {"attaining_point", to_json(e.attaining_point)},
                    {"evaluated", e.evaluated},
                    {"skipped", e.skipped}};
    r.headline = format_double(e.lower_bound);
    return r;
}

Report schw_nehari(const RunConfig& c) {
    auto r = make("schw nehari-check");
    const auto f = expr_arg(c.f);
    const auto p = NehariProfile::from_name(c.profile);
    r.inputs = Json{{"f", f.to_string()}, {"profile", p.name()}, {"radius", c.radius}, {"rings", c.rings},
                    {"spokes", c.spokes}};
    const auto samples = disk_samples(c.radius, c.rings, c.spokes);
    const auto rep = nehari_check(f, p, samples);
    r.values = Json{{"worst_ratio", rep.worst_ratio},
                    {"worst_point", to_json(rep.worst_point)},
                    {"evaluated", rep.evaluated},
                    {"failures", rep.failures.size()}};
    r.add_check("|Sf(z)| <= 2p(|z|)", rep.pass, rep.worst_ratio, 1.0, 1e-12);
    r.headline = rep.pass ? "pass" : "fail";
    return r;
}

// ---- geom -------------------------------------------------------------

Report geom_rho(const RunConfig& c) {
    auto r = make("geom rho");
    const Complex a = complex_arg(c.a), b = complex_arg(c.b);
    r.inputs = Json{{"a", to_json(a)}, {"b", to_json(b)}};
    const double p = rho(a, b);
    r.values = Json{{"rho", p}, {"hyp_dist", hyp_dist(a, b)}};
    r.headline = format_double(p);
    return r;
}

Report geom_disk(const RunConfig& c) {
    auto r = make("geom disk");
    const Complex ctr = complex_arg(c.center);
    r.inputs = Json{{"center", to_json(ctr)}, {"r", c.r}, {"samples", c.samples}};
    const auto d = pseudo_disk(ctr, c.r);
    double dev = 0.0;
    for (Complex p : d.boundary_samples(c.samples)) dev = std::max(dev, std::abs(rho(p, ctr) - c.r));
    r.values = Json{{"euclidean_center", to_json(d.euclidean_center)}, {"euclidean_radius", d.euclidean_radius}};
    r.add_check("boundary samples at pseudohyperbolic radius r", dev <= 1e-10, dev, 0.0, 1e-10);
    r.headline = complex_text(d.euclidean_center) + " " + format_double(d.euclidean_radius);
    return r;
}

Report geom_rectangles(const RunConfig& c) {
    auto r = make("geom rectangles");
    const double C = require_C(c);
    r.inputs = Json{{"C", C}};
    const auto g = geodesic_rectangle(C);
    const auto n = rectangle_count(C);
    r.values = Json{{"R", g.R},          {"R1", g.R1}, {"y", g.y}, {"half_angle", g.half_angle},
                    {"tangency_angle", g.tangency_angle}, {"count", n.count}, {"fallback", n.fallback}};
    r.add_check("half_angle >= 1/(5C)", g.half_angle_bound, g.half_angle, 1.0 / (5.0 * C));
    r.headline = std::to_string(n.count);
    return r;
}

// ---- ode --------------------------------------------------------------

Json zero_json(const ZeroRecord& z) {
    return Json{{"zeros", z.zeros}, {"count", z.count}, {"min_gap", std::isfinite(z.min_gap) ? Json(z.min_gap) : Json(nullptr)}};
}

Report ode_segment(const RunConfig& c) {
    auto r = make("ode segment");
    const auto psi = expr_arg(c.psi);
    const SegmentPath path(complex_arg(c.from), complex_arg(c.to));
    const Complex u0 = complex_arg(c.u0.empty() ? "0" : c.u0), du0 = complex_arg(c.du0.empty() ? "1" : c.du0);
    r.inputs = Json{{"psi", psi.to_string()}, {"from", to_json(path.start())}, {"to", to_json(path.end())},
                    {"u0", to_json(u0)}, {"du0", to_json(du0)}, {"steps", c.steps}};
    const auto sol = integrate_segment(psi, path, u0, du0, c.steps);
    const auto zeros = find_zeros(sol);
    r.values = zero_json(zeros);
    r.values["error_estimate"] = sol.error_estimate;
    r.values["u_end"] = to_json(sol.u.back());
    if (c.C) {
        r.inputs["C"] = *c.C;
        const auto sep = zero_separation_check(*c.C, zeros);
        r.add_check("zero gap >= pi sqrt(2/C)", sep.pass, zeros.count > 1 ? sep.min_gap : kNaN, sep.bound, 1e-9);
    }
    r.headline = std::to_string(zeros.count);
    return r;
}

Report ode_lemma1(const RunConfig& c) {
    auto r = make("ode lemma1");
    const auto f = expr_arg(c.f);
    const SegmentPath path(complex_arg(c.from), complex_arg(c.to));
    const Complex u0 = complex_arg(c.u0.empty() ? "1" : c.u0), du0 = complex_arg(c.du0.empty() ? "0" : c.du0);
    r.inputs = Json{{"f", f.to_string()}, {"from", to_json(path.start())}, {"to", to_json(path.end())},
                    {"u0", to_json(u0)}, {"du0", to_json(du0)}, {"steps", c.steps}};
    const ComplexField psi = [&f](Complex z) { return schwarzian(f, z) / 2.0; };
    const auto sol = integrate_segment(psi, path, u0, du0, c.steps);
    const auto rep = lemma1_residual(sol, psi);
    r.values = Json{{"min_residual", rep.min_residual}, {"scale", rep.scale}, {"s_lo", rep.s_lo},
                    {"s_hi", rep.s_hi},           {"shrunk", rep.shrunk}, {"tested", rep.tested}};
    r.add_check("v'' + |psi| v >= -1e-6 scale", rep.pass, rep.min_residual, -1e-6 * rep.scale);
    r.headline = rep.pass ? "pass" : "fail";
    return r;
}

Report ode_legendre(const RunConfig& c) {
    auto r = make("ode legendre");
    r.inputs = Json{{"n", c.n}};
    const auto rec = legendre_lower_bound(c.n);
    const int sign_changes = legendre_ode_sign_changes(c.n);
    r.values = zero_json(rec);
    r.values["ode_sign_changes"] = sign_changes;
    r.add_check("zero count equals n-1", rec.count == c.n - 1, rec.count, c.n - 1);
    r.add_check("ODE sign changes >= n-1", sign_changes >= c.n - 1, sign_changes, c.n - 1);
    r.headline = std::to_string(rec.count);
    return r;
}

Report ode_disconjugacy(const RunConfig& c) {
    auto r = make("ode disconjugacy");
    const auto p = NehariProfile::from_name(c.profile);
    const std::uint64_t seed = seed_arg(c.seed);
    r.inputs = Json{{"profile", p.name()}, {"trials", c.trials}, {"seed", seed}};
    const auto rep = disconjugacy_check(p, c.trials, seed);
    r.values = Json{{"max_zero_count", rep.max_zero_count}, {"worst_base_point", rep.worst_base_point},
                    {"worst_u0", rep.worst_u0},             {"worst_du0", rep.worst_du0},
                    {"reached_lo", rep.reached_lo},         {"reached_hi", rep.reached_hi},
                    {"blew_up", rep.blew_up}};
    r.add_check("at most one zero per solution", rep.pass, rep.max_zero_count, 1.0);
    r.headline = std::to_string(rep.max_zero_count);
    return r;
}

// ---- valence ----------------------------------------------------------

Json valence_json(const ValenceReport& v) {
    Json j{{"count", v.count},
           {"preimages", json_points(v.preimages)},
           {"min_separation", std::isfinite(v.min_separation) ? Json(v.min_separation) : Json(nullptr)}};
    if (v.nodes > 0) {
        j["winding"] = v.winding;
        j["winding_residual"] = v.winding_residual;
        j["nodes"] = v.nodes;
        j["poles"] = json_points(v.poles);
    }
    return j;
}

void add_packing(Report& r, const ValenceReport& v, double C) {
    const auto p = packing_check(v, C);
    r.add_check("separation >= pi sqrt(2/C)", p.vacuous_separation || p.min_separation >= p.separation_bound * (1 - 1e-12),
                v.count > 1 ? p.min_separation : kNaN, p.separation_bound);
    r.add_check("count <= (1 + sqrt(2C)/pi)^2", v.count <= p.valence_bound, v.count, p.valence_bound);
}

Report valence_count(const RunConfig& c) {
    auto r = make("valence count");
    const auto f = expr_arg(c.f);
    const Complex w = complex_arg(c.w);
    r.inputs = Json{{"f", f.to_string()}, {"w", to_json(w)}, {"r", c.r}, {"nodes", c.nodes}};
    const auto v = count_valence(f, w, c.r, c.nodes);
    r.values = valence_json(v);
    r.add_check("winding residual < 0.01", v.winding_residual < 0.01, v.winding_residual, 0.01);
    if (c.C) {
        r.inputs["C"] = *c.C;
        add_packing(r, v, *c.C);
    }
    r.headline = std::to_string(v.count);
    return r;
}

Json breakdown_json(const BoundBreakdown& b) {
    return Json{{"C", b.C},
                {"epsilon", b.epsilon},
                {"r0", b.r0},
                {"m", b.m},
                {"R", b.R},
                {"R1", b.R1},
                {"radii", b.radii},
                {"annulus_counts", b.annulus_counts},
                {"inner_sum", b.inner_sum},
                {"gap_annulus_count", b.gap_annulus_count},
                {"rectangle_count", b.rectangle_count},
                {"rectangle_fallback", b.rectangle_fallback},
                {"total", b.total},
                {"envelope", b.envelope},
                {"total_over_ClogC", b.total_over_ClogC}};
}

Report valence_bound(const RunConfig& c) {
    auto r = make("valence bound");
    const double C = require_C(c);
    r.inputs = Json{{"C", C}, {"context", c.context}};
    if (c.context == "constant") {
        const BoundConfig cfg(C, BoundContext::constant);
        const double v = valence_bound_const(cfg.C);
        const int cap = valence_cap(cfg.C);
        r.values = Json{{"valence_bound", v}, {"valence_cap", cap}, {"separation_bound", separation_bound(C)}};
        r.headline = std::to_string(cap);
    } else if (c.context == "pokornyi") {
        const BoundConfig cfg(C, BoundContext::pokornyi);
        const auto b = theorem2_breakdown(cfg.C);
        r.values = breakdown_json(b);
        r.add_check("inner sum within 1% of the envelope", b.envelope_ok, static_cast<double>(b.inner_sum) + 1.0,
                    1.01 * b.envelope);
        r.headline = std::to_string(b.total);
    } else {
        throw UsageError("--context must be constant or pokornyi");
    }
    return r;
}

Report valence_census(const RunConfig& c) {
    auto r = make("valence tan-census");
    const double C = require_C(c);
    r.inputs = Json{{"C", C}};
    const auto v = tan_zero_census(C);
    r.values = valence_json(v);
    add_packing(r, v, C);
    r.headline = std::to_string(v.count);
    return r;
}

Report valence_breakdown(const RunConfig& c) {
    auto r = make("valence breakdown");
    const double C = require_C(c);
    r.inputs = Json{{"C", C}};
    const auto b = theorem2_breakdown(C);
    r.values = breakdown_json(b);
    const auto est = integral_estimates(C);
    r.values["I1"] = est.I1;
    r.values["I2"] = est.I2;
    r.values["I3"] = est.I3;
    r.add_check("inner sum within 1% of the envelope", b.envelope_ok, static_cast<double>(b.inner_sum) + 1.0,
                1.01 * b.envelope);
    r.add_check("I1 <= (2C/pi^2) log(16C)", est.I1 <= est.I1_bound + 1e-6, est.I1, est.I1_bound, 1e-6);
    r.headline = std::to_string(b.total);
    return r;
}

std::vector<double> sweep_values(const RunConfig& c) {
    if (!c.Cs.empty()) return c.Cs;
    if (c.points < 1) throw UsageError("give --C values or --points with --from/--to");
    if (!(c.sweep_from > 0.0 && c.sweep_to >= c.sweep_from)) throw UsageError("--from/--to must satisfy 0 < from <= to");
    std::vector<double> Cs;
    for (int i = 0; i < c.points; ++i)
        Cs.push_back(c.points == 1 ? c.sweep_from
                                   : c.sweep_from * std::pow(c.sweep_to / c.sweep_from, double(i) / (c.points - 1)));
    return Cs;
}

// ---- harmonic ---------------------------------------------------------

HarmonicMap map_arg(const RunConfig& c) { return HarmonicMap(expr_arg(c.h), expr_arg(c.q)); }

Json map_inputs(const HarmonicMap& f) { return Json{{"h", f.h().to_string()}, {"q", f.q().to_string()}}; }

Report harmonic_schw(const RunConfig& c) {
    auto r = make("harmonic schwarzian");
    const auto f = map_arg(c);
    const Complex z = complex_arg(c.z);
    r.inputs = map_inputs(f);
    r.inputs["z"] = to_json(z);
    const Complex s = harmonic_schwarzian(f, z);
    r.values = Json{{"schwarzian", to_json(s)}};
    r.headline = complex_text(s);
    return r;
}

Report harmonic_norm(const RunConfig& c) {
    auto r = make("harmonic norm");
    const auto f = map_arg(c);
    GridSpec g;
    g.resolution = c.grid;
    g.refine = !c.no_refine;
    r.inputs = map_inputs(f);
    r.inputs["grid"] = c.grid;
    r.inputs["refine"] = g.refine;
    const auto e = harmonic_norm_estimate(f, g);
    r.values = Json{{"lower_bound", e.lower_bound},
                    {"attaining_point", to_json(e.attaining_point)},
                    {"evaluated", e.evaluated},
                    {"skipped", e.skipped}};
    r.headline = format_double(e.lower_bound);
    return r;
}

Report harmonic_shear(const RunConfig& c) {
    auto r = make("harmonic shear");
    const auto f = shear_koebe(c.theta);
    GridSpec g;
    g.resolution = c.grid;
    g.refine = !c.no_refine;
    r.inputs = Json{{"theta", c.theta}, {"grid", c.grid}, {"refine", g.refine}};
    const auto e = harmonic_norm_estimate(f, g);
    r.values = Json{{"h", f.h().to_string()},
                    {"q", f.q().to_string()},
                    {"schwarzian_at_0", to_json(harmonic_schwarzian(f, 0.0))},
                    {"norm", e.lower_bound},
                    {"attaining_point", to_json(e.attaining_point)}};
    if (c.theta == 0.0) r.add_check("norm equals 16", std::abs(e.lower_bound - 16.0) <= 1e-3, e.lower_bound, 16.0, 1e-3);
    r.headline = format_double(e.lower_bound);
    return r;
}

Report harmonic_lift(const RunConfig& c) {
    auto r = make("harmonic lift");
    const auto f = map_arg(c);
    const Complex z = complex_arg(c.z);
    r.inputs = map_inputs(f);
    r.inputs["z"] = to_json(z);
    const auto s = lift(f, z);
    r.values = Json{{"coords", s.coords},
                    {"conformal_factor", s.conformal_factor},
                    {"curvature_density", s.curvature_density},
                    {"conformality_residual", s.conformality_residual}};
    r.add_check("conformality residual <= 1e-6", s.conformality_residual <= 1e-6, s.conformality_residual, 1e-6);
    r.headline = format_double(s.coords[0]) + " " + format_double(s.coords[1]) + " " + format_double(s.coords[2]);
    return r;
}

Report harmonic_criterion(const RunConfig& c) {
    auto r = make("harmonic criterion");
    const auto f = map_arg(c);
    r.inputs = map_inputs(f);
    r.inputs["kind"] = c.kind;
    r.inputs["radius"] = c.radius;
    r.inputs["rings"] = c.rings;
    r.inputs["spokes"] = c.spokes;
    const auto samples = disk_samples(c.radius, c.rings, c.spokes);
    CriterionReport rep;
    std::string name;
    if (c.kind == "constant" || c.kind == "pokornyi") {
        const double C = require_C(c);
        r.inputs["C"] = C;
        rep = c.kind == "constant" ? lift_criterion_check_constant(f, samples, C)
                                   : lift_criterion_check_pokornyi(f, samples, C);
        name = c.kind == "constant" ? "|Sf| + e^{2 sigma}|K| <= C" : "|Sf| + e^{2 sigma}|K| <= 2C/(1-|z|^2)";
    } else if (c.kind == "nehari") {
        const auto p = NehariProfile::from_name(c.profile);
        r.inputs["profile"] = p.name();
        rep = lift_criterion_check_nehari(f, samples, p);
        name = "|Sf| + e^{2 sigma}|K| <= 2p(|z|)";
    } else {
        throw UsageError("--kind must be constant, pokornyi or nehari");
    }
    r.values = Json{{"worst_ratio", rep.worst_ratio},
                    {"worst_value", rep.worst_value},
                    {"worst_point", to_json(rep.worst_point)},
                    {"evaluated", rep.evaluated},
                    {"failures", rep.failures.size()}};
    r.add_check(name, rep.pass, rep.worst_ratio, 1.0, 1e-12);
    r.headline = rep.pass ? "pass" : "fail";
    return r;
}

Report harmonic_preimages_cmd(const RunConfig& c) {
    auto r = make("harmonic preimages");
    const auto f = map_arg(c);
    const Complex w = complex_arg(c.w);
    r.inputs = map_inputs(f);
    r.inputs["w"] = to_json(w);
    r.inputs["seeds"] = c.seeds;
    r.inputs["seed_radius"] = c.seed_radius;
    if (c.C) r.inputs["C"] = *c.C;
    const auto p = harmonic_preimages(f, w, GridSpec{c.seeds, c.seed_radius, false}, c.C);
    r.values = valence_json(p.report);
    r.values["diverged_seeds"] = p.diverged;
    if (p.separation_bound)
        r.add_check("separation >= pi sqrt(2/C)", p.separation_ok,
                    p.report.count > 1 ? p.report.min_separation : kNaN, *p.separation_bound);
    r.headline = std::to_string(p.report.count);
    return r;
}

// ---- output -------------------------------------------------------------

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object() && !(j.size() == 2 && j.contains("re") && j.contains("im"))) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    } else if (j.is_object()) {
        out << prefix << ".re," << format_double(j["re"].get<double>()) << '\n';
        out << prefix << ".im," << format_double(j["im"].get<double>()) << '\n';
    } else if (j.is_number_float()) {
        out << prefix << ',' << format_double(j.get<double>()) << '\n';
    } else if (j.is_string()) {
        out << prefix << ',' << j.get<std::string>() << '\n';
    } else {
        out << prefix << ',' << j.dump() << '\n';
    }
}

void emit(const Report& r, const std::string& format, std::ostream& out) {
    if (format == "json") {
        write_json(out, r);
    } else if (format == "csv") {
        out << "key,value\n";
        flatten(r.values, "", out);
        write_checks_csv(out, r);
    } else {
        write_text(out, r);
    }
}

const std::map<std::string, std::string> kModuleOf{{"schw", "schwarzian-analytic"}, {"geom", "disk-geometry"},
                                                   {"ode", "ode-sturm"},           {"valence", "valence-bounds"},
                                                   {"harmonic", "harmonic-schwarzian"}, {"verify", "acceptance"}};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Schwarzian derivative, valence and harmonic-map toolkit", "schwtool"};
    app.require_subcommand(1);
    // --h names the analytic part of a harmonic map, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    RunConfig cfg;
    std::function<int(std::ostream&)> action;
    std::string group;

    const auto common = [&cfg](CLI::App* s) {
        s->add_option("--format", cfg.format, "Output format")
            ->check(CLI::IsMember({"json", "csv", "text"}))
            ->each([&cfg](const std::string&) { cfg.format_given = true; });
        s->add_option("--output", cfg.output, "Write the report to this file instead of stdout");
    };
    const auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                          std::function<Report(const RunConfig&)> handler) {
        auto* s = parent->add_subcommand(name, help);
        common(s);
        s->callback([&, handler, parent] {
            group = parent->get_name();
            action = [&cfg, handler](std::ostream& o) {
                const Report r = handler(cfg);
                emit(r, cfg.format, o);
                return r.all_pass() ? kExitOk : kExitCheckFailed;
            };
        });
        return s;
    };
    const auto section = [&app](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->require_subcommand(1);
        return s;
    };
    const auto profile_opt = [&cfg](CLI::App* s) {
        s->add_option("--profile", cfg.profile, "Nehari profile: quadratic, constant or pokornyi")->capture_default_str();
    };
    const auto sampling_opts = [&cfg](CLI::App* s) {
        s->add_option("--radius", cfg.radius, "Outer sampling radius")->capture_default_str();
        s->add_option("--rings", cfg.rings, "Sampling rings")->capture_default_str();
        s->add_option("--spokes", cfg.spokes, "Samples per ring")->capture_default_str();
    };
    const auto grid_opts = [&cfg](CLI::App* s) {
        s->add_option("--grid", cfg.grid, "Grid resolution per axis")->capture_default_str()->check(CLI::Range(3, 4001));
        s->add_flag("--no-refine", cfg.no_refine, "Skip local ascent after the grid search");
    };
    const auto map_opts = [&cfg](CLI::App* s) {
        s->add_option("--h", cfg.h, "Analytic part h")->required();
        s->add_option("--q", cfg.q, "Square root q of the dilatation")->capture_default_str();
    };

    auto* schw_s = section("schw", "Schwarzian derivatives of analytic maps");
    auto* s = leaf(schw_s, "eval", "Sf(z)", schw_eval);
    s->add_option("--f", cfg.f, "Function of z")->required();
    s->add_option("--z", cfg.z, "Point")->capture_default_str();
    s = leaf(schw_s, "norm", "Weighted supremum of (1-|z|^2)^2 |Sf|", schw_norm);
    s->add_option("--f", cfg.f, "Function of z")->required();
    grid_opts(s);
    s = leaf(schw_s, "nehari-check", "|Sf(z)| <= 2p(|z|) on polar samples", schw_nehari);
    s->add_option("--f", cfg.f, "Function of z")->required();
    profile_opt(s);
    sampling_opts(s);

    auto* geom_s = section("geom", "Pseudohyperbolic geometry of the disk");
    s = leaf(geom_s, "rho", "Pseudohyperbolic and hyperbolic distance", geom_rho);
    s->add_option("--a", cfg.a, "First point")->required();
    s->add_option("--b", cfg.b, "Second point")->required();
    s = leaf(geom_s, "disk", "Pseudohyperbolic disk as a Euclidean disk", geom_disk);
    s->add_option("--center", cfg.center, "Centre")->required();
    s->add_option("--r", cfg.r, "Pseudohyperbolic radius in (0, 1)")->required();
    s->add_option("--samples", cfg.samples, "Boundary samples")->capture_default_str()->check(CLI::Range(1, 1 << 20));
    s = leaf(geom_s, "rectangles", "Geodesic rectangle and its disk count", geom_rectangles);
    s->add_option("--C", cfg.C, "Level C > 2")->required();

    auto* ode_s = section("ode", "Linear ODEs along segments and on (-1, 1)");
    s = leaf(ode_s, "segment", "Integrate u'' + psi u = 0 along a segment", ode_segment);
    s->add_option("--psi", cfg.psi, "Coefficient psi(z)")->required();
    s->add_option("--from", cfg.from, "Start point")->required();
    s->add_option("--to", cfg.to, "End point")->required();
    s->add_option("--u0", cfg.u0, "u at the start (default 0)");
    s->add_option("--du0", cfg.du0, "du/ds at the start (default 1)");
    s->add_option("--steps", cfg.steps, "RK4 steps")->capture_default_str();
    s->add_option("--C", cfg.C, "Check zero gaps against pi sqrt(2/C)");
    s = leaf(ode_s, "lemma1", "v = |u| satisfies v'' + |psi| v >= 0 with psi = Sf/2", ode_lemma1);
    s->add_option("--f", cfg.f, "Function of z")->required();
    s->add_option("--from", cfg.from, "Start point")->required();
    s->add_option("--to", cfg.to, "End point")->required();
    s->add_option("--u0", cfg.u0, "u at the start (default 1)");
    s->add_option("--du0", cfg.du0, "du/ds at the start (default 0)");
    s->add_option("--steps", cfg.steps, "RK4 steps")->capture_default_str();
    s = leaf(ode_s, "legendre", "Zeros of (1-x^2) P_n'(x)", ode_legendre);
    s->add_option("--n", cfg.n, "Degree, 1..30")->required();
    s = leaf(ode_s, "disconjugacy", "Zero counts for u'' + p u = 0", ode_disconjugacy);
    profile_opt(s);
    s->add_option("--trials", cfg.trials, "Random initial conditions")->capture_default_str()->check(CLI::Range(1, 1000000));
    s->add_option("--seed", cfg.seed, "Random seed (u64)")->capture_default_str();

    auto* val_s = section("valence", "Preimage counting and valence bounds");
    s = leaf(val_s, "count", "Solutions of f(z) = w in |z| < r", valence_count);
    s->add_option("--f", cfg.f, "Function of z")->required();
    s->add_option("--w", cfg.w, "Target value")->capture_default_str();
    s->add_option("--r", cfg.r, "Contour radius")->capture_default_str();
    s->add_option("--nodes", cfg.nodes, "Initial trapezoid nodes")->capture_default_str();
    s->add_option("--C", cfg.C, "Check separation and the constant-context bound");
    s = leaf(val_s, "bound", "Valence bound for a Schwarzian level C", valence_bound);
    s->add_option("--C", cfg.C, "Level C")->required();
    s->add_option("--context", cfg.context, "constant (|Sf| <= C) or pokornyi")
        ->capture_default_str()
        ->check(CLI::IsMember({"constant", "pokornyi"}));
    s = leaf(val_s, "tan-census", "Zeros of tan(sqrt(C/2) z) in the disk", valence_census);
    s->add_option("--C", cfg.C, "Level C")->required();
    s = leaf(val_s, "breakdown", "Annulus, gap and rectangle counts for level C", valence_breakdown);
    s->add_option("--C", cfg.C, "Level C > 2")->required();
    s = leaf(val_s, "sweep", "Breakdowns over many C (CSV by default)", [](const RunConfig&) { return Report{}; });
    s->add_option("--C", cfg.Cs, "Levels C")->delimiter(',');
    s->add_option("--from", cfg.sweep_from, "Smallest C of a geometric sweep")->capture_default_str();
    s->add_option("--to", cfg.sweep_to, "Largest C of a geometric sweep")->capture_default_str();
    s->add_option("--points", cfg.points, "Number of geometric sweep points");
    auto* sweep = s;

    auto* har_s = section("harmonic", "Harmonic maps f = h + conj(g) with dilatation q^2");
    s = leaf(har_s, "schwarzian", "Harmonic Schwarzian at z", harmonic_schw);
    map_opts(s);
    s->add_option("--z", cfg.z, "Point")->capture_default_str();
    s = leaf(har_s, "norm", "Weighted supremum of the harmonic Schwarzian", harmonic_norm);
    map_opts(s);
    grid_opts(s);
    s = leaf(har_s, "shear", "Koebe function sheared with dilatation e^{i theta} z^2", harmonic_shear);
    s->add_option("--theta", cfg.theta, "Shear angle, reduced mod 2 pi")->capture_default_str();
    grid_opts(s);
    s = leaf(har_s, "lift", "Minimal-surface lift at z", harmonic_lift);
    map_opts(s);
    s->add_option("--z", cfg.z, "Point")->capture_default_str();
    s = leaf(har_s, "criterion", "|Sf| + e^{2 sigma}|K| against a bound", harmonic_criterion);
    map_opts(s);
    s->add_option("--kind", cfg.kind, "constant, pokornyi or nehari")
        ->capture_default_str()
        ->check(CLI::IsMember({"constant", "pokornyi", "nehari"}));
    s->add_option("--C", cfg.C, "Level C");
    profile_opt(s);
    sampling_opts(s);
    s = leaf(har_s, "preimages", "Solutions of f(z) = w by planar Newton", harmonic_preimages_cmd);
    map_opts(s);
    s->add_option("--w", cfg.w, "Target value")->capture_default_str();
    s->add_option("--seeds", cfg.seeds, "Seed grid resolution per axis")->capture_default_str()->check(CLI::Range(2, 400));
    s->add_option("--seed-radius", cfg.seed_radius, "Radius of the seed grid")->capture_default_str();
    s->add_option("--C", cfg.C, "Check separation against pi sqrt(2/C)");

    auto* ver_s = section("verify", "Acceptance suite");
    auto* all = ver_s->add_subcommand("all", "Run every acceptance criterion");
    common(all);
    all->add_option("--seed", cfg.seed, "Random seed (u64)")->capture_default_str();
    all->callback([&] {
        group = "verify";
        action = [&cfg](std::ostream& o) {
            const std::uint64_t seed = seed_arg(cfg.seed);
            const auto outcomes = run_acceptance(seed);
            const Report r = acceptance_report(outcomes, seed);
            if (cfg.format == "text")
                write_acceptance_table(o, outcomes);
            else
                emit(r, cfg.format, o);
            return r.all_pass() ? kExitOk : kExitCheckFailed;
        };
    });

    sweep->callback([&] {
        group = "valence";
        action = [&cfg](std::ostream& o) {
            const auto rows = theorem2_sweep(sweep_values(cfg));
            if (!cfg.format_given || cfg.format == "csv") {
                write_sweep_csv(o, rows);
                return kExitOk;
            }
            auto r = make("valence sweep");
            Json Cs = Json::array(), table = Json::array();
            bool ok = true;
            for (const auto& b : rows) {
                Cs.push_back(b.C);
                table.push_back(breakdown_json(b));
                ok = ok && b.envelope_ok;
            }
            r.inputs = Json{{"C", Cs}};
            r.values = Json{{"rows", table}};
            r.add_check("inner sums within 1% of the envelopes", ok);
            r.headline = std::to_string(rows.size()) + " rows";
            emit(r, cfg.format, o);
            return r.all_pass() ? kExitOk : kExitCheckFailed;
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
        return kExitUsage;
    }

    const std::string module = kModuleOf.count(group) ? kModuleOf.at(group) : group;
    try {
        if (cfg.output.empty()) return action(out);
        std::ostringstream buffer;
        const int code = action(buffer);
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << cfg.output << " for writing\n";
            return kExitUsage;
        }
        file << buffer.str();
        return code;
    } catch (const ParseFailure& p) {
        err << "parse error: " << p.message << '\n' << "  " << p.text << '\n'
            << "  " << std::string(std::min(p.offset, p.text.size()), ' ') << "^\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error [" << module << "]: input outside the documented domain: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error [" << module << "]: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}

} // namespace schw
