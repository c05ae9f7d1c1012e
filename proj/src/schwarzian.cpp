#include "schw/schwarzian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "schw/errors.hpp"

namespace schw {

Complex schwarzian_from_jet(const Jet& j) {
    if (j.order() < 3) throw DomainError("Schwarzian needs a jet of order >= 3");
    const Complex d1 = j.derivative(1), d2 = j.derivative(2), d3 = j.derivative(3);
    const double scale = std::max({std::abs(d1), std::abs(d2), std::abs(d3)});
    if (scale == 0.0 || std::abs(d1) < 1e-12 * scale)
        throw CriticalPointError("f' vanishes (critical point)");
    const Complex r = d2 / d1;
    return d3 / d1 - 1.5 * r * r;
}

Complex schwarzian(const AnalyticExpr& f, Complex z) { return schwarzian_from_jet(eval_jet(f, z, 3)); }

double composition_residual(const AnalyticExpr& f, const AnalyticExpr& T, Complex z) {
    const Complex lhs = schwarzian(AnalyticExpr::compose(f, T), z);
    const Jet t = eval_jet(T, z, 1);
    const Complex rhs = schwarzian(f, t[0]) * t[1] * t[1];
    return std::abs(lhs - rhs);
}

NormEstimate schwarzian_norm_estimate(const AnalyticExpr& f, const GridSpec& grid) {
    return estimate_weighted_sup([&f](Complex z) { return schwarzian(f, z); }, grid);
}

double uniform_bound_from_radius(double r) {
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("pseudohyperbolic radius must lie in (0, 1]");
    return 6.0 / (r * r);
}

NehariProfile NehariProfile::from_name(std::string_view name) {
    if (name == "nehari_quadratic" || name == "quadratic") return NehariProfile(NehariKind::quadratic);
    if (name == "nehari_constant" || name == "constant") return NehariProfile(NehariKind::constant);
    if (name == "pokornyi") return NehariProfile(NehariKind::pokornyi);
    throw DomainError("unknown Nehari profile '" + std::string(name) + "'");
}

std::string NehariProfile::name() const {
    switch (kind_) {
    case NehariKind::quadratic:
        return "nehari_quadratic";
    case NehariKind::constant:
        return "nehari_constant";
    case NehariKind::pokornyi:
        return "pokornyi";
    }
    return {};
}

double NehariProfile::operator()(double x) const {
    const double s = 1.0 - x * x;
    switch (kind_) {
    case NehariKind::quadratic:
        return 1.0 / (s * s);
    case NehariKind::constant:
        return std::numbers::pi * std::numbers::pi / 4.0;
    case NehariKind::pokornyi:
        return 2.0 / s;
    }
    return 0.0;
}

bool NehariProfile::weighted_nonincreasing(int samples) const {
    if (samples < 2) throw DomainError("need at least two samples");
    const double top = 1.0 - 1e-6;
    double prev = (*this)(0.0);
    for (int i = 1; i < samples; ++i) {
        const double x = top * i / (samples - 1);
        const double w = 1.0 - x * x;
        const double v = w * w * (*this)(x);
        if (v > prev * (1.0 + 1e-14)) return false;
        prev = v;
    }
    return true;
}

NehariReport nehari_check(const AnalyticExpr& f, const NehariProfile& profile,
                          std::span<const Complex> samples) {
    NehariReport report;
    for (const Complex z : samples) {
        if (!(std::abs(z) < 1.0)) throw DomainError("Nehari samples must lie in the open unit disk");
        try {
            const double ratio = std::abs(schwarzian(f, z)) / (2.0 * profile(std::abs(z)));
            ++report.evaluated;
            if (report.evaluated == 1 || ratio > report.worst_ratio) {
                report.worst_ratio = ratio;
                report.worst_point = z;
            }
        } catch (const Error& e) {
            report.failures.push_back({z, e.what()});
        }
    }
    report.pass = report.evaluated > 0 && report.worst_ratio <= 1.0 + 1e-12;
    return report;
}

std::vector<Complex> disk_samples(double radius, int rings, int spokes) {
    std::vector<Complex> pts{0.0};
    for (int i = 1; i <= rings; ++i) {
        const double r = radius * i / rings;
        for (int k = 0; k < spokes; ++k) pts.push_back(std::polar(r, 2.0 * std::numbers::pi * k / spokes));
    }
    return pts;
}

} // namespace schw
