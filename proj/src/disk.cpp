#include "schw/disk.hpp"

#include <cmath>
#include <numbers>

#include "schw/errors.hpp"

namespace schw {

namespace {

void require_in_disk(Complex z, const char* what) {
    if (!(std::abs(z) < 1.0)) throw DomainError(std::string(what) + " must lie in the open unit disk");
}

} // namespace

MobiusSelfMap::MobiusSelfMap(Complex a, double theta) : a_(a), theta_(theta) {
    require_in_disk(a, "automorphism parameter");
    if (!std::isfinite(theta)) throw DomainError("rotation angle must be finite");
}

Complex MobiusSelfMap::operator()(Complex z) const {
    return std::polar(1.0, theta_) * (z + a_) / (1.0 + std::conj(a_) * z);
}

Complex MobiusSelfMap::derivative(Complex z) const {
    const Complex d = 1.0 + std::conj(a_) * z;
    return std::polar(1.0, theta_) * (1.0 - std::norm(a_)) / (d * d);
}

MobiusSelfMap MobiusSelfMap::inverse() const {
    // w = e^{it}(z+a)/(1+conj(a)z)  =>  z = e^{-it}(w - e^{it}a)/(1 - conj(e^{it}a) w)
    const Complex b = -std::polar(1.0, theta_) * a_;
    return MobiusSelfMap(b, -theta_);
}

AnalyticExpr MobiusSelfMap::to_expr() const { return AnalyticExpr::disk_automorphism(a_, theta_); }

double rho(Complex a, Complex b) {
    require_in_disk(a, "rho argument");
    require_in_disk(b, "rho argument");
    return std::min(std::abs((a - b) / (1.0 - std::conj(a) * b)), std::nextafter(1.0, 0.0));
}

double hyp_dist(Complex a, Complex b) { return std::atanh(rho(a, b)); }

std::vector<Complex> PseudoDisk::boundary_samples(int n) const {
    if (n < 1) throw DomainError("need at least one boundary sample");
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        pts.push_back(euclidean_center + std::polar(euclidean_radius, 2.0 * std::numbers::pi * k / n));
    return pts;
}

bool PseudoDisk::contains(Complex z) const { return std::abs(z) < 1.0 && rho(z, center) < radius; }

PseudoDisk pseudo_disk(Complex center, double radius) {
    require_in_disk(center, "pseudo-disk center");
    if (!(radius > 0.0 && radius < 1.0)) throw DomainError("pseudo-disk radius must lie in (0, 1)");
    const double m = std::abs(center);
    const Complex u = m > 0.0 ? center / m : Complex(1.0);
    // Image of the diameter [-r u, r u] under z -> (z + center)/(1 + conj(center) z).
    const auto move = [center](Complex z) { return (z + center) / (1.0 + std::conj(center) * z); };
    const Complex p = move(radius * u), q = move(-radius * u);
    return {center, radius, 0.5 * (p + q), 0.5 * std::abs(p - q)};
}

GeodesicRectangleSpec geodesic_rectangle(double C) {
    if (!(C > 2.0) || !std::isfinite(C)) throw DomainError("geodesic_rectangle needs C > 2");
    GeodesicRectangleSpec g;
    g.C = C;
    g.R = std::sqrt(1.0 - 1.0 / (4.0 * C));
    g.R1 = std::sqrt(1.0 - 1.0 / (2.0 * C));
    g.y = std::sqrt(2.0 * C / (6.0 * C - 1.0));
    const Complex iy(0.0, g.y);
    g.half_angle = std::arg((iy + g.R1) / (1.0 + g.R1 * iy));
    g.half_angle_bound = g.half_angle >= 1.0 / (5.0 * C);
    return g;
}

RectangleCount rectangle_count(double C) {
    const GeodesicRectangleSpec g = geodesic_rectangle(C);
    if (g.half_angle_bound) return {static_cast<int>(std::floor(5.0 * std::numbers::pi * C)) + 1, false};
    return {static_cast<int>(std::ceil(std::numbers::pi / g.half_angle)), true};
}

double empirical_c_min(double c_lo, double c_hi, int samples) {
    if (!(c_lo > 2.0 && c_hi > c_lo) || samples < 2) throw DomainError("invalid C_min scan range");
    double c_min = c_lo;
    const double ratio = std::log(c_hi / c_lo);
    for (int i = 0; i < samples; ++i) {
        const double C = c_lo * std::exp(ratio * i / (samples - 1));
        if (!geodesic_rectangle(C).half_angle_bound) {
            const double next = c_lo * std::exp(ratio * (i + 1) / (samples - 1));
            c_min = std::min(next, c_hi);
        }
    }
    return c_min;
}

} // namespace schw
