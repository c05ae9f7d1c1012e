#include "schw/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "schw/errors.hpp"
#include "schw/parallel.hpp"
#include "schw/quadrature.hpp"

namespace schw {

namespace {

constexpr double kPi = std::numbers::pi;

struct Derivs {
    Complex h1, h2, h3; // h', h'', h'''
    Complex q0, q1, q2; // q, q', q''
};

Derivs derivs(const HarmonicMap& f, Complex z) {
    const Jet hj = derivative_jet(f.h(), z, 2);
    const Jet qj = eval_jet(f.q(), z, 2);
    Derivs d{hj[0], hj[1], 2.0 * hj[2], qj[0], qj[1], 2.0 * qj[2]};
    const double scale = std::max({std::abs(d.h1), std::abs(d.h2), std::abs(d.h3)});
    if (!std::isfinite(scale) || !std::isfinite(std::abs(d.q0)) || !std::isfinite(std::abs(d.q1)) ||
        !std::isfinite(std::abs(d.q2)))
        throw PoleError("harmonic map is not finite at this point");
    if (scale == 0.0 || std::abs(d.h1) < 1e-12 * scale) throw CriticalPointError("h' vanishes (critical point)");
    if (!(std::abs(d.q0) < 1.0)) throw DomainError("|q| >= 1: map is not sense-preserving");
    return d;
}

Complex path_integral(const std::function<Complex(Complex)>& integrand, Complex z) {
    if (z == Complex{}) return {};
    return line_integral(integrand, 0.0, z).value;
}

} // namespace

HarmonicMap::HarmonicMap(AnalyticExpr h, AnalyticExpr q) : h_(std::move(h)), q_(std::move(q)) {}

Complex HarmonicMap::h_value(Complex z) const { return evaluate(h_, z); }

Complex HarmonicMap::h_prime(Complex z) const { return derivative_jet(h_, z, 0)[0]; }

Complex HarmonicMap::omega(Complex z) const {
    const Complex q = evaluate(q_, z);
    return q * q;
}

Complex HarmonicMap::g_prime(Complex z) const { return omega(z) * h_prime(z); }

Complex HarmonicMap::g(Complex z) const {
    return path_integral([this](Complex t) { return g_prime(t); }, z);
}

Complex HarmonicMap::operator()(Complex z) const { return h_value(z) + std::conj(g(z)); }

void HarmonicMap::require_valid(Complex z) const { derivs(*this, z); }

bool HarmonicMap::valid_at(Complex z) const {
    try {
        derivs(*this, z);
        return true;
    } catch (const Error&) {
        return false;
    }
}

HarmonicMap HarmonicMap::compose(const AnalyticExpr& phi) const {
    return HarmonicMap(AnalyticExpr::compose(h_, phi), AnalyticExpr::compose(q_, phi));
}

SigmaJet sigma_jet(const HarmonicMap& f, Complex z) {
    const Derivs d = derivs(f, z);
    const double w = 1.0 + std::norm(d.q0);
    const Complex qbar = std::conj(d.q0);
    SigmaJet s;
    s.sigma = std::log(std::abs(d.h1) * w);
    s.sigma_z = d.h2 / (2.0 * d.h1) + qbar * d.q1 / w;
    s.sigma_zz = (d.h3 * d.h1 - d.h2 * d.h2) / (2.0 * d.h1 * d.h1) + qbar * d.q2 / w -
                 qbar * qbar * d.q1 * d.q1 / (w * w);
    return s;
}

Complex harmonic_schwarzian(const HarmonicMap& f, Complex z) {
    const SigmaJet s = sigma_jet(f, z);
    return 2.0 * (s.sigma_zz - s.sigma_z * s.sigma_z);
}

double harmonic_composition_residual(const HarmonicMap& f, const AnalyticExpr& phi, Complex z) {
    const Complex lhs = harmonic_schwarzian(f.compose(phi), z);
    const Jet p = eval_jet(phi, z, 1);
    const Complex rhs = harmonic_schwarzian(f, p[0]) * p[1] * p[1] + schwarzian(phi, z);
    return std::abs(lhs - rhs);
}

HarmonicMap shear_koebe(double theta) {
    if (!std::isfinite(theta)) throw DomainError("shear angle must be finite");
    theta = std::fmod(theta, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
    const auto z = AnalyticExpr::var();
    const auto one = AnalyticExpr::constant(1.0);
    if (theta == 0.0) {
        // h = ((1 - z)^{-3} - 1)/3, h' = (1 - z)^{-4}.
        const auto h = (one / AnalyticExpr::power(one - z, 3) - one) / AnalyticExpr::constant(3.0);
        return HarmonicMap(h, z);
    }
    const Complex c = std::polar(1.0, theta);
    const auto kprime = (one + z) / AnalyticExpr::power(one - z, 3);
    const auto hprime = kprime / (one - AnalyticExpr::constant(c) * z * z);
    return HarmonicMap(AnalyticExpr::integral(hprime), AnalyticExpr::constant(std::polar(1.0, theta / 2.0)) * z);
}

NormEstimate harmonic_norm_estimate(const HarmonicMap& f, const GridSpec& grid) {
    return estimate_weighted_sup([&f](Complex z) { return harmonic_schwarzian(f, z); }, grid);
}

double pommerenke_bound(double norm_h) {
    if (!(norm_h >= 0.0) || !std::isfinite(norm_h)) throw DomainError("norm must be finite and nonnegative");
    return norm_h + 2.0 * std::sqrt(1.0 + norm_h / 2.0) + 7.0;
}

double convexity_indicator(const AnalyticExpr& h, Complex z) {
    const Jet j = derivative_jet(h, z, 1);
    if (std::abs(j[0]) < 1e-12 * std::max(std::abs(j[0]), std::abs(j[1])) || j[0] == Complex{})
        throw CriticalPointError("h' vanishes (critical point)");
    return (1.0 + z * j[1] / j[0]).real();
}

double convexity_floor(double rho, double lambda) {
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("radius must lie in [0, 1)");
    if (!(lambda >= 1.0)) throw DomainError("lambda must be at least 1");
    return (1.0 - 2.0 * lambda * rho + rho * rho) / (1.0 - rho * rho);
}

double mu(double lambda) {
    if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and at least 1");
    // 1/(lambda + sqrt(lambda^2 - 1)) avoids cancellation for large lambda.
    return 1.0 / (lambda + std::sqrt(lambda * lambda - 1.0));
}

double analytic_part_norm_bound(double lambda) {
    const double m = mu(lambda);
    return 2.0 / (m * m);
}

Complex schwarz_transform_coefficient(const AnalyticExpr& h, Complex zeta) {
    if (!(std::abs(zeta) < 1.0)) throw DomainError("zeta must lie in the open unit disk");
    const Jet j = derivative_jet(h, zeta, 1);
    if (j[0] == Complex{} || std::abs(j[0]) < 1e-12 * std::abs(j[1]))
        throw CriticalPointError("h' vanishes (critical point)");
    return (1.0 - std::norm(zeta)) * j[1] / j[0] - 2.0 * std::conj(zeta);
}

LiftSample lift(const HarmonicMap& f, Complex z) {
    if (!(std::abs(z) < 1.0)) throw DomainError("lift point must lie in the open unit disk");
    const Derivs d = derivs(f, z);
    LiftSample s;
    s.z = z;
    const Complex fz = f(z);
    const Complex third = path_integral(
        [&f](Complex t) { return evaluate(f.q(), t) * f.h_prime(t); }, z);
    s.coords = {fz.real(), fz.imag(), 2.0 * third.imag()};

    const double w = 1.0 + std::norm(d.q0);
    s.conformal_factor = std::abs(d.h1) * w;
    s.curvature_density = 4.0 * std::norm(d.q1) / (w * w);

    const Complex gp = d.q0 * d.q0 * d.h1;
    const Complex fx = d.h1 + std::conj(gp);
    const Complex fy = Complex(0, 1) * (d.h1 - std::conj(gp));
    const Complex qh = d.q0 * d.h1;
    const std::array<double, 3> u{fx.real(), fx.imag(), 2.0 * qh.imag()};
    const std::array<double, 3> v{fy.real(), fy.imag(), 2.0 * qh.real()};
    const auto norm3 = [](const std::array<double, 3>& a) { return std::hypot(a[0], a[1], a[2]); };
    const double e = s.conformal_factor;
    const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    s.conformality_residual =
        std::max({std::abs(norm3(u) - e) / e, std::abs(norm3(v) - e) / e, std::abs(dot) / (e * e)});
    if (!(s.conformality_residual <= 1e-6)) throw NumericalError("lift is not conformal to tolerance");
    return s;
}

double lift_criterion_value(const HarmonicMap& f, Complex z) {
    const Derivs d = derivs(f, z);
    const double w = 1.0 + std::norm(d.q0);
    return std::abs(harmonic_schwarzian(f, z)) + 4.0 * std::norm(d.q1) / (w * w);
}

CriterionReport lift_criterion_check(const HarmonicMap& f, std::span<const Complex> samples,
                                     const std::function<double(Complex)>& bound) {
    CriterionReport report;
    for (const Complex z : samples) {
        if (!(std::abs(z) < 1.0)) throw DomainError("criterion samples must lie in the open unit disk");
        try {
            const double value = lift_criterion_value(f, z);
            const double ratio = value / bound(z);
            ++report.evaluated;
            if (report.evaluated == 1 || ratio > report.worst_ratio) {
                report.worst_ratio = ratio;
                report.worst_point = z;
                report.worst_value = value;
            }
        } catch (const Error& e) {
            report.failures.push_back({z, e.what()});
        }
    }
    report.pass = report.evaluated > 0 && report.worst_ratio <= 1.0 + 1e-12;
    return report;
}

CriterionReport lift_criterion_check_constant(const HarmonicMap& f, std::span<const Complex> samples, double C) {
    if (!(C > 0.0)) throw DomainError("criterion level must be positive");
    return lift_criterion_check(f, samples, [C](Complex) { return C; });
}

CriterionReport lift_criterion_check_pokornyi(const HarmonicMap& f, std::span<const Complex> samples, double C) {
    if (!(C > 0.0)) throw DomainError("criterion level must be positive");
    return lift_criterion_check(f, samples, [C](Complex z) { return 2.0 * C / (1.0 - std::norm(z)); });
}

CriterionReport lift_criterion_check_nehari(const HarmonicMap& f, std::span<const Complex> samples,
                                            const NehariProfile& p) {
    return lift_criterion_check(f, samples, [&p](Complex z) { return 2.0 * p(std::abs(z)); });
}

namespace {

struct NewtonOutcome {
    bool converged = false;
    Complex z;
};

NewtonOutcome planar_newton(const HarmonicMap& f, Complex w, Complex z) {
    try {
        Complex r = f(z) - w;
        const double tol = 1e-11 * std::max(1.0, std::abs(w));
        for (int it = 0; it < 80; ++it) {
            if (std::abs(r) < tol) return {true, z};
            const Complex a = f.h_prime(z);
            const Complex gp = f.g_prime(z);
            const double jac = std::norm(a) - std::norm(gp);
            if (!(jac > 1e-14 * std::norm(a))) return {};
            // Solve a*delta + conj(g') * conj(delta) = -r.
            const Complex rhs = -r;
            Complex delta = (std::conj(a) * rhs - std::conj(gp) * std::conj(rhs)) / jac;
            bool moved = false;
            for (int halving = 0; halving < 30; ++halving, delta *= 0.5) {
                const Complex cand = z + delta;
                if (!(std::abs(cand) < 1.0)) continue;
                Complex rc;
                try {
                    rc = f(cand) - w;
                } catch (const Error&) {
                    continue;
                }
                if (std::isfinite(std::abs(rc)) && std::abs(rc) < std::abs(r)) {
                    z = cand;
                    r = rc;
                    moved = true;
                    break;
                }
            }
            if (!moved) return {std::abs(r) < tol, z};
        }
        return {std::abs(r) < tol, z};
    } catch (const Error&) {
        return {};
    }
}

} // namespace

HarmonicPreimages harmonic_preimages(const HarmonicMap& f, Complex w, const GridSpec& grid, std::optional<double> C) {
    if (grid.resolution < 2) throw DomainError("seed grid needs resolution >= 2");
    if (!(grid.max_radius > 0.0 && grid.max_radius < 1.0)) throw DomainError("seed radius must lie in (0, 1)");
    std::vector<Complex> seeds;
    const int n = grid.resolution;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Complex s(-grid.max_radius + 2.0 * grid.max_radius * i / (n - 1),
                            -grid.max_radius + 2.0 * grid.max_radius * j / (n - 1));
            if (std::abs(s) <= grid.max_radius && f.valid_at(s)) seeds.push_back(s);
        }

    std::vector<NewtonOutcome> outcomes(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t k) { outcomes[k] = planar_newton(f, w, seeds[k]); }, 16);

    HarmonicPreimages out;
    out.report.w = w;
    out.report.radius = 1.0;
    auto& roots = out.report.preimages;
    for (const auto& o : outcomes) {
        if (!o.converged || !f.valid_at(o.z)) {
            ++out.diverged;
            continue;
        }
        const bool seen =
            std::any_of(roots.begin(), roots.end(), [&](Complex r) { return std::abs(r - o.z) < 1e-7; });
        if (!seen) roots.push_back(o.z);
    }
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    out.report.count = static_cast<int>(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            out.report.min_separation = std::min(out.report.min_separation, std::abs(roots[i] - roots[j]));
    if (C) {
        out.separation_bound = separation_bound(*C);
        out.separation_ok = roots.size() < 2 || out.report.min_separation >= *out.separation_bound * (1.0 - 1e-9);
    }
    return out;
}

} // namespace schw
