#include "schw/report.hpp"

#include <charconv>
#include <cmath>

namespace schw {

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

Check& Report::add_check(std::string name, bool pass, double measured, double bound, double tolerance) {
    checks.push_back({std::move(name), pass, measured, bound, tolerance});
    return checks.back();
}

namespace {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_object() && v.size() == 2 && v.contains("re") && v.contains("im")) {
        const double re = v["re"].get<double>(), im = v["im"].get<double>();
        if (im == 0.0) return format_double(re);
        return format_double(re) + (im < 0.0 || std::signbit(im) ? "-" : "+") + format_double(std::abs(im)) + "i";
    }
    if (v.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar_text(v[i]);
        return s + "]";
    }
    return v.dump();
}

} // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// Adding 0.0 folds negative zero into positive zero for stable output.
Json to_json(Complex z) { return Json{{"re", z.real() + 0.0}, {"im", z.imag() + 0.0}}; }

Json to_json(const Check& c) {
    return Json{{"name", c.name},
                {"pass", c.pass},
                {"measured", number(c.measured)},
                {"bound", number(c.bound)},
                {"tolerance", number(c.tolerance)}};
}

Json to_json(const Report& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return Json{{"command", r.command}, {"inputs", r.inputs}, {"values", r.values}, {"checks", checks}};
}

void write_json(std::ostream& out, const Report& r) { out << to_json(r).dump(2) << '\n'; }

void write_text(std::ostream& out, const Report& r) {
    if (!r.headline.empty()) out << r.headline << '\n';
    for (const auto& [key, value] : r.values.items()) out << key << ": " << scalar_text(value) << '\n';
    for (const auto& c : r.checks) {
        out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
        if (std::isfinite(c.measured)) out << "  measured=" << format_double(c.measured);
        if (std::isfinite(c.bound)) out << "  bound=" << format_double(c.bound);
        if (std::isfinite(c.tolerance)) out << "  tol=" << format_double(c.tolerance);
        out << '\n';
    }
}

void write_checks_csv(std::ostream& out, const Report& r) {
    out << "name,pass,measured,bound,tolerance\n";
    const auto cell = [](double x) { return std::isfinite(x) ? format_double(x) : std::string(); };
    for (const auto& c : r.checks)
        out << c.name << ',' << (c.pass ? "true" : "false") << ',' << cell(c.measured) << ',' << cell(c.bound) << ','
            << cell(c.tolerance) << '\n';
}

} // namespace schw
