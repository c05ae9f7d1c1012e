#pragma once

#include <vector>

#include "schw/expr.hpp"

namespace schw {

/// z -> e^{i theta} (z + a) / (1 + conj(a) z) with |a| < 1.
class MobiusSelfMap {
public:
    MobiusSelfMap(Complex a, double theta);

    Complex a() const { return a_; }
    double theta() const { return theta_; }
    Complex operator()(Complex z) const;
    Complex derivative(Complex z) const;
    MobiusSelfMap inverse() const;
    AnalyticExpr to_expr() const;

private:
    Complex a_;
    double theta_;
};

/// Pseudohyperbolic distance |(a - b) / (1 - conj(a) b)|.
double rho(Complex a, Complex b);

/// Hyperbolic distance (1/2) log((1 + rho) / (1 - rho)) = atanh(rho).
double hyp_dist(Complex a, Complex b);

/// {z : rho(z, center) < radius}, a Euclidean disk with the stored
/// Euclidean center and radius.
struct PseudoDisk {
    Complex center;
    double radius = 0.0;
    Complex euclidean_center;
    double euclidean_radius = 0.0;

    std::vector<Complex> boundary_samples(int n = 64) const;
    bool contains(Complex z) const;
};

PseudoDisk pseudo_disk(Complex center, double radius);

/// Curvilinear rectangle data for the outer annulus at level C > 2:
///   R^2 = 1 - 1/(4C), R1^2 = 1 - 1/(2C),
///   y^2 = (R^2 - R1^2)/(1 - R^2 R1^2) = 2C/(6C - 1),
///   half_angle = arg T(iy) with T(z) = (z + R1)/(1 + R1 z).
/// The hyperbolic geodesic T(i R) touches |z| = R1 at the point with
/// argument tangency_angle (0 in this normalisation) and crosses |z| = R
/// at arguments +-half_angle.
struct GeodesicRectangleSpec {
    double C = 0.0;
    double R = 0.0;
    double R1 = 0.0;
    double tangency_angle = 0.0;
    double y = 0.0;
    double half_angle = 0.0;
    /// half_angle >= 1/(5C), checked per call.
    bool half_angle_bound = false;
};

GeodesicRectangleSpec geodesic_rectangle(double C);

struct RectangleCount {
    int count = 0;
    /// Set when half_angle < 1/(5C); count is then ceil(pi / half_angle).
    bool fallback = false;
};

/// floor(5 pi C) + 1 when the half-angle bound holds.
RectangleCount rectangle_count(double C);

/// Smallest C on a logarithmic scan of [c_lo, c_hi] above which every
/// scanned point satisfies half_angle >= 1/(5C).
double empirical_c_min(double c_lo = 2.0 + 1e-9, double c_hi = 1e6, int samples = 2000);

} // namespace schw
