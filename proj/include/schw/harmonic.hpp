#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "schw/expr.hpp"
#include "schw/norm.hpp"
#include "schw/schwarzian.hpp"
#include "schw/valence.hpp"

namespace schw {

/// Sense-preserving harmonic map f = h + conj(g) with dilatation
/// omega = g'/h' = q^2. g is normalised by g(0) = 0 and recovered by
/// quadrature of q^2 h' along the segment [0, z].
class HarmonicMap {
public:
    HarmonicMap(AnalyticExpr h, AnalyticExpr q);

    const AnalyticExpr& h() const { return h_; }
    const AnalyticExpr& q() const { return q_; }

    Complex h_value(Complex z) const;
    Complex h_prime(Complex z) const;
    Complex omega(Complex z) const;
    Complex g_prime(Complex z) const;
    Complex g(Complex z) const;
    /// f(z) = h(z) + conj(g(z)).
    Complex operator()(Complex z) const;

    /// Throws DomainError when |q(z)| >= 1 and CriticalPointError when h'(z) = 0.
    void require_valid(Complex z) const;
    bool valid_at(Complex z) const;

    /// f o phi, represented by (h o phi, q o phi). The anti-analytic part is
    /// renormalised to vanish at 0, so the result differs from the literal
    /// composition by a constant.
    HarmonicMap compose(const AnalyticExpr& phi) const;

private:
    AnalyticExpr h_, q_;
};

/// sigma = log(|h'| (1 + |q|^2)) and its Wirtinger derivatives
///   sigma_z  = h''/(2h') + conj(q) q'/(1 + |q|^2),
///   sigma_zz = (h''' h' - h''^2)/(2h'^2) + conj(q) q''/(1 + |q|^2)
///              - conj(q)^2 q'^2/(1 + |q|^2)^2.
struct SigmaJet {
    double sigma = 0.0;
    Complex sigma_z;
    Complex sigma_zz;
};

SigmaJet sigma_jet(const HarmonicMap& f, Complex z);

/// Sf = 2 (sigma_zz - sigma_z^2); the classical Schwarzian of h when q = 0.
Complex harmonic_schwarzian(const HarmonicMap& f, Complex z);

/// |S(f o phi)(z) - Sf(phi(z)) phi'(z)^2 - S phi(z)|.
double harmonic_composition_residual(const HarmonicMap& f, const AnalyticExpr& phi, Complex z);

/// Koebe function sheared with dilatation e^{i theta} z^2: h - g = k,
/// h' = k'/(1 - e^{i theta} z^2), q = e^{i theta/2} z. theta is reduced to
/// [0, 2 pi) first.
HarmonicMap shear_koebe(double theta);

NormEstimate harmonic_norm_estimate(const HarmonicMap& f, const GridSpec& grid = {});

/// ||Sh|| + 2 sqrt(1 + ||Sh||/2) + 7.
double pommerenke_bound(double norm_h);

/// Re(1 + z h''(z)/h'(z)).
double convexity_indicator(const AnalyticExpr& h, Complex z);

/// (1 - 2 lambda rho + rho^2)/(1 - rho^2) for 0 <= rho < 1, lambda >= 1.
double convexity_floor(double rho, double lambda);

/// lambda - sqrt(lambda^2 - 1), the smaller root of 1 - 2 lambda rho + rho^2.
double mu(double lambda);

/// 2/mu(lambda)^2: the norm bound for the analytic part of a univalent
/// harmonic map whose second coefficients are bounded by lambda.
double analytic_part_norm_bound(double lambda = 49.0);

/// H''(0) = (1 - |zeta|^2) h''(zeta)/h'(zeta) - 2 conj(zeta).
Complex schwarz_transform_coefficient(const AnalyticExpr& h, Complex zeta);

struct LiftSample {
    Complex z;
    /// (Re f, Im f, 2 Im int_0^z q h').
    std::array<double, 3> coords{};
    /// e^sigma = |h'| (1 + |q|^2) = |h'| + |g'|.
    double conformal_factor = 0.0;
    /// e^{2 sigma} |K| = 4|q'|^2/(1 + |q|^2)^2.
    double curvature_density = 0.0;
    /// max of | |x_u| - e^sigma |/e^sigma, | |x_v| - e^sigma |/e^sigma and
    /// |x_u . x_v|/e^{2 sigma} from the exact partials.
    double conformality_residual = 0.0;
};

/// Weierstrass-Enneper lift of f to a minimal surface. Throws
/// NumericalError when the conformality residual exceeds 1e-6 or the
/// path quadrature fails.
LiftSample lift(const HarmonicMap& f, Complex z);

/// |Sf(z)| + e^{2 sigma}|K| = |Sf(z)| + 4|q'|^2/(1 + |q|^2)^2.
double lift_criterion_value(const HarmonicMap& f, Complex z);

struct CriterionReport {
    /// max over samples of value / bound.
    double worst_ratio = 0.0;
    Complex worst_point;
    double worst_value = 0.0;
    bool pass = false;
    int evaluated = 0;
    std::vector<PointFailure> failures;
};

/// Compares lift_criterion_value against bound(z) on the samples; pass iff
/// every ratio is at most 1 + 1e-12.
CriterionReport lift_criterion_check(const HarmonicMap& f, std::span<const Complex> samples,
                                     const std::function<double(Complex)>& bound);
/// Bound C.
CriterionReport lift_criterion_check_constant(const HarmonicMap& f, std::span<const Complex> samples, double C);
/// Bound 2C/(1 - |z|^2).
CriterionReport lift_criterion_check_pokornyi(const HarmonicMap& f, std::span<const Complex> samples, double C);
/// Bound 2p(|z|).
CriterionReport lift_criterion_check_nehari(const HarmonicMap& f, std::span<const Complex> samples,
                                            const NehariProfile& p);

struct HarmonicPreimages {
    ValenceReport report;
    /// Seeds whose Newton iteration diverged, left the disk or hit a bad point.
    int diverged = 0;
    /// Set when a criterion level C was supplied.
    std::optional<double> separation_bound;
    bool separation_ok = true;
};

/// Solutions of f(z) = w in the unit disk by Newton iteration on the real
/// 2x2 system, seeded from the grid (resolution^2 points, |z| <= max_radius).
HarmonicPreimages harmonic_preimages(const HarmonicMap& f, Complex w, const GridSpec& grid = {24, 0.95, false},
                                     std::optional<double> C = std::nullopt);

} // namespace schw
