#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "schw/expr.hpp"
#include "schw/schwarzian.hpp"

namespace schw {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

/// Straight segment z(s) = start + s (end - start)/b, s in [0, b], with
/// b = |end - start|. Both endpoints must satisfy |z| <= 1 - 1e-9.
class SegmentPath {
public:
    SegmentPath(Complex start, Complex end);

    Complex start() const { return start_; }
    Complex end() const { return end_; }
    double length() const { return length_; }
    /// Unit tangent z'(s).
    Complex direction() const { return direction_; }
    Complex at(double s) const { return start_ + s * direction_; }

private:
    Complex start_, end_, direction_;
    double length_;
};

/// Samples of u(z(s)) and du/ds on a uniform grid.
struct SegmentSolution {
    SegmentPath path;
    std::vector<double> s;
    std::vector<Complex> u;
    std::vector<Complex> du;
    /// Richardson estimate of the global error against a run at half the step.
    double error_estimate = 0.0;

    std::vector<double> modulus() const;
    double step() const { return s.size() > 1 ? s[1] - s[0] : 0.0; }
};

using ComplexField = std::function<Complex(Complex)>;

/// Classical RK4 for d^2u/ds^2 = -psi(z(s)) z'(s)^2 u along the path, with
/// u(0) = u0 and du/ds(0) = du0. Needs steps >= 100. Throws NumericalError
/// when the Richardson error estimate exceeds 1e-6 max(1, max|u|), and
/// propagates evaluation errors (poles) of psi.
SegmentSolution integrate_segment(const ComplexField& psi, const SegmentPath& path, Complex u0, Complex du0,
                                  int steps);
SegmentSolution integrate_segment(const AnalyticExpr& psi, const SegmentPath& path, Complex u0, Complex du0,
                                  int steps);

struct Lemma1Report {
    /// min over tested interior samples of v'' + |psi| v, v = |u|.
    double min_residual = 0.0;
    /// max over the same samples of |v''| + |psi| v.
    double scale = 0.0;
    bool pass = false;
    /// Tested range [s_lo, s_hi]; shrunk when v dips below 1e-8.
    double s_lo = 0.0, s_hi = 0.0;
    bool shrunk = false;
    int tested = 0;
};

/// Checks v'' + |psi(z(s))| v >= -1e-6 scale with second central differences.
/// Throws DomainError when v stays above 1e-8 on fewer than three
/// consecutive samples.
Lemma1Report lemma1_residual(const SegmentSolution& sol, const ComplexField& psi);
Lemma1Report lemma1_residual(const SegmentSolution& sol, const AnalyticExpr& psi);

struct ZeroRecord {
    std::vector<double> zeros;
    int count = 0;
    double min_gap = std::numeric_limits<double>::infinity();
};

ZeroRecord make_zero_record(std::vector<double> zeros);

/// Zeros of a complex solution: local minima of |u| refined on the cubic
/// Hermite interpolant and accepted when below 1e-8 max|u|.
ZeroRecord find_zeros(const SegmentSolution& sol);

struct SeparationResult {
    bool pass = false;
    /// Fewer than two zeros: passes without testing anything.
    bool vacuous = false;
    double min_gap = std::numeric_limits<double>::infinity();
    double bound = 0.0;
};

/// pass iff the minimal gap is at least pi sqrt(2/C) - 1e-9.
SeparationResult zero_separation_check(double C, const ZeroRecord& record);

/// Zeros in (-1, 1) of y = (1-x^2) P_n'(x) for 1 <= n <= 30. Throws
/// NumericalError if isolation does not find exactly n-1 simple roots or if
/// the ODE cross-check disagrees.
ZeroRecord legendre_lower_bound(int n);

/// Sign changes on (-1+1e-6, 1-1e-6) of the solution of
/// y'' + n(n+1)/(1-x^2) y = 0 started with y = 0, y' = 1 at the left end.
int legendre_ode_sign_changes(int n);

/// Samples of a real solution of u'' + p(x) u = 0 on (-1, 1).
struct RealSolution {
    std::vector<double> x, u, du;
    bool blew_up = false;
    int sign_changes() const;
};

/// Variable-step RK4 from x0 towards x_end (both inside (-1, 1)); the step
/// shrinks in proportion to the distance from the nearest endpoint +-1.
RealSolution integrate_real(const std::function<double(double)>& p, double x0, double u0, double du0, double x_end);

/// Number of zeros on (-1+1e-6, 1-1e-6) of the solution of u'' + p u = 0
/// with u(x0) = u0, u'(x0) = du0. Zero initial data is rejected.
int solution_zero_count(const NehariProfile& profile, double x0, double u0, double du0);

struct DisconjugacyReport {
    int trials = 0;
    int max_zero_count = 0;
    double worst_base_point = 0.0;
    double worst_u0 = 0.0, worst_du0 = 0.0;
    /// Range actually reached; narrower than the full interval on blow-up.
    double reached_lo = -1.0, reached_hi = 1.0;
    bool blew_up = false;
    bool pass = false;
};

/// Falsification harness, not a proof: integrates u'' + p u = 0 for random
/// base points and unit initial vectors and reports the largest zero count.
DisconjugacyReport disconjugacy_check(const NehariProfile& profile, int trials, std::uint64_t seed = kDefaultSeed);

} // namespace schw
