#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <vector>

#include "schw/expr.hpp"

namespace schw {

enum class BoundContext { constant, pokornyi };

/// Level C of a Schwarzian bound. The constant context |Sf| <= C needs
/// C >= pi^2/2; the Pokornyi context |Sf(z)| <= 2C/(1-|z|^2) needs C > 2.
struct BoundConfig {
    double C = 0.0;
    BoundContext context = BoundContext::constant;

    BoundConfig(double c, BoundContext ctx);
    /// pi / (2 sqrt C).
    double epsilon() const;
};

/// Minimal distance pi sqrt(2/C) between preimages when |Sf| <= C.
double separation_bound(double C);

/// (1 + sqrt(2C)/pi)^2 for C >= pi^2/2 (a relative slack of 1e-9 admits
/// C = pi^2/2 given in decimal).
double valence_bound_const(double C);

/// Integer cap floor(valence_bound_const(C)), tolerant to 1e-9 relative
/// rounding so that C = pi^2/2 yields exactly 4.
int valence_cap(double C);

struct ValenceReport {
    Complex w;
    double radius = 0.0;
    /// Number of located solutions of f(z) = w in |z| < radius.
    int count = 0;
    std::vector<Complex> preimages;
    /// Smallest pairwise |a - b|; infinite with fewer than two preimages.
    double min_separation = std::numeric_limits<double>::infinity();

    /// Argument-principle data (zero for the closed-form census).
    double winding = 0.0;
    double winding_residual = 0.0;
    int nodes = 0;
    /// Poles located inside the contour; winding = count - poles.
    std::vector<Complex> poles;
};

/// Zeros of tan(sqrt(C/2) z) on (-1, 1): x = k pi sqrt(2/C). Zeros within
/// 1e-9 of the unit circle count as boundary points and are excluded.
ValenceReport tan_zero_census(double C);

/// Solutions of f(z) = w in |z| < r. The winding number of f - w around
/// |z| = r (trapezoidal rule, `nodes` doubled until within 0.01 of an
/// integer) must equal located zeros minus located poles. Throws
/// DomainError for a root within 1e-6 of the contour and NumericalError
/// when the quadrature or the root search does not settle.
ValenceReport count_valence(const AnalyticExpr& f, Complex w, double r, int nodes = 4096);

struct PackingResult {
    bool pass = false;
    bool vacuous_separation = false;
    double min_separation = 0.0;
    double separation_bound = 0.0;
    int count = 0;
    double valence_bound = 0.0;
};

PackingResult packing_check(const ValenceReport& report, double C);

/// floor(2 pi / d) for 0 < d <= 1.
int lemma2_bound(double d);

struct RadiusStep {
    double x = 0.0;
    double d = 0.0;
};

/// Solves x - a = eps sqrt(1 - x^2) for x > a.
RadiusStep next_radius(double a, double eps);

/// 1 / (x - a) for x = next_radius(a, eps).x:
/// (sqrt(1 - a^2 + eps^2) + eps a) / (eps (1 - a^2)).
double phi(double a, double eps);

struct BoundBreakdown {
    double C = 0.0;
    double epsilon = 0.0;
    double r0 = 0.0;
    /// r_0 < r_1 < ... < r_m <= R.
    std::vector<double> radii;
    /// d_k = r_k - r_{k-1}, k = 1..m.
    std::vector<double> gaps;
    std::vector<std::int64_t> annulus_counts;
    int m = 0;
    double R = 0.0;
    double R1 = 0.0;
    int inner_unit = 1;
    std::int64_t inner_sum = 0;
    std::int64_t gap_annulus_count = 0;
    std::int64_t rectangle_count = 0;
    bool rectangle_fallback = false;
    std::int64_t total = 0;
    /// 1 + 2 pi int_0^R phi(x)^2 dx.
    double envelope = 0.0;
    /// 1 + inner_sum <= 1.01 envelope.
    bool envelope_ok = false;
    double total_over_ClogC = 0.0;
};

/// Valence bound pipeline for the Pokornyi-type context, C > 2. Throws
/// NumericalError if the radius recurrence stagnates.
BoundBreakdown theorem2_breakdown(double C);

struct IntegralEstimates {
    double I1 = 0.0, I2 = 0.0, I3 = 0.0;
    /// (2C/pi^2) log(16C).
    double I1_bound = 0.0;
    bool I1_within_bound = false;
    /// I2 <= 2/(1 - R^2).
    bool I2_within_bound = false;
};

/// int_0^R phi(x)^2 dx = I1 + I2 + I3 with
///   I1 = (1/eps^2) int dx/(1-x^2),  I2 = int (1+x^2)/(1-x^2)^2 dx,
///   I3 = (2/eps) int x sqrt(1+eps^2-x^2)/(1-x^2)^2 dx,
/// each by adaptive Simpson (relative tolerance 1e-8) split at R - (1-R)/2.
IntegralEstimates integral_estimates(double C);

/// Breakdowns for each C, computed in parallel, sorted by C.
std::vector<BoundBreakdown> theorem2_sweep(const std::vector<double>& Cs);

/// CSV with header C,r0,m,R,R1,inner_sum,gap_count,rect_count,total,total_over_ClogC.
void write_sweep_csv(std::ostream& out, const std::vector<BoundBreakdown>& rows);

} // namespace schw
