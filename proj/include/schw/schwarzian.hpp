#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schw/expr.hpp"
#include "schw/norm.hpp"

namespace schw {

/// Sf = f'''/f' - (3/2)(f''/f')^2 from a jet of order >= 3. Throws
/// CriticalPointError when |f'| < 1e-12 max(|f'|, |f''|, |f'''|).
Complex schwarzian_from_jet(const Jet& j);

Complex schwarzian(const AnalyticExpr& f, Complex z);

/// |S(f o T)(z) - Sf(T(z)) T'(z)^2|.
double composition_residual(const AnalyticExpr& f, const AnalyticExpr& T, Complex z);

NormEstimate schwarzian_norm_estimate(const AnalyticExpr& f, const GridSpec& grid = {});

/// The ||Sf|| <= 6/r^2 bound for maps univalent on every pseudohyperbolic
/// disk of radius r. Requires 0 < r <= 1.
double uniform_bound_from_radius(double r);

enum class NehariKind { quadratic, constant, pokornyi };

/// Catalogued Nehari functions p on [0, 1):
///   quadratic  p(x) = (1-x^2)^-2
///   constant   p(x) = pi^2/4
///   pokornyi   p(x) = 2/(1-x^2)
class NehariProfile {
public:
    explicit NehariProfile(NehariKind kind) : kind_(kind) {}
    static NehariProfile from_name(std::string_view name);

    NehariKind kind() const { return kind_; }
    std::string name() const;
    double operator()(double x) const;
    /// True when (1-x^2)^2 p(x) is nonincreasing on `samples` evenly spaced
    /// points of [0, 1-1e-6].
    bool weighted_nonincreasing(int samples = 10001) const;

private:
    NehariKind kind_;
};

struct PointFailure {
    Complex point;
    std::string reason;
};

struct NehariReport {
    /// max over samples of |Sf(z)| / (2 p(|z|)).
    double worst_ratio = 0.0;
    Complex worst_point{};
    bool pass = true;
    int evaluated = 0;
    std::vector<PointFailure> failures;
};

/// Checks |Sf(z)| <= 2p(|z|) on the samples; pass iff the worst ratio is
/// at most 1 + 1e-12. Samples must lie in the open unit disk.
NehariReport nehari_check(const AnalyticExpr& f, const NehariProfile& profile,
                          std::span<const Complex> samples);

/// Polar sample set: `rings` radii evenly spaced in (0, radius] times
/// `spokes` angles, plus the origin.
std::vector<Complex> disk_samples(double radius, int rings, int spokes);

} // namespace schw
