#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "schw/errors.hpp"
#include "schw/ode.hpp"
#include "schw/parser.hpp"
#include "schw/polynomial.hpp"
#include "schw/schwarzian.hpp"

using namespace schw;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexField constant_field(double c) {
    return [c](Complex) { return Complex(c); };
}

double max_error_vs_sine(int steps) {
    const SegmentPath path(-0.9, 0.9);
    const auto sol = integrate_segment(constant_field(1.0), path, 0.0, 1.0, steps);
    double err = 0.0;
    for (std::size_t i = 0; i < sol.s.size(); ++i) err = std::max(err, std::abs(sol.u[i] - std::sin(sol.s[i])));
    return err;
}

} // namespace

TEST_CASE("SegmentPath") {
    const SegmentPath p(Complex(0.1, 0.2), Complex(-0.3, 0.5));
    CHECK(std::abs(std::abs(p.direction()) - 1.0) < 1e-15);
    CHECK(std::abs(p.at(p.length()) - p.end()) < 1e-15);
    CHECK_THROWS_AS(SegmentPath(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(SegmentPath(0.3, 0.3), DomainError);
}

TEST_CASE("integrate_segment: closed-form solutions") {
    SUBCASE("psi = 0 gives a straight line") {
        const auto sol = integrate_segment(AnalyticExpr::constant(0.0), SegmentPath(Complex(0, -0.4), Complex(0.5, 0.3)),
                                           0.0, 1.0, 200);
        for (std::size_t i = 0; i < sol.s.size(); ++i) CHECK(std::abs(sol.u[i] - sol.s[i]) < 1e-12);
    }
    SUBCASE("constant psi gives a sinusoid") {
        const double C = 10.0, k = std::sqrt(C / 2.0);
        const auto sol = integrate_segment(AnalyticExpr::constant(C / 2.0), SegmentPath(-0.8, 0.8), 0.0, 1.0, 2000);
        for (std::size_t i = 0; i < sol.s.size(); ++i)
            CHECK(std::abs(sol.u[i] - std::sin(k * sol.s[i]) / k) < 1e-9);
    }
    SUBCASE("psi = Sf/2 for tan_scaled recovers cos up to a scalar") {
        const double C = 8.0, k = std::sqrt(C / 2.0);
        const auto f = AnalyticExpr::tan_scaled(C);
        const ComplexField psi = [&f](Complex z) { return schwarzian(f, z) / 2.0; };
        const SegmentPath path(-0.7, 0.6);
        const Complex a = path.start();
        const auto sol = integrate_segment(psi, path, std::cos(k * a), -k * std::sin(k * a), 1000);
        for (std::size_t i = 0; i < sol.s.size(); ++i)
            CHECK(std::abs(sol.u[i] - std::cos(k * path.at(sol.s[i]))) < 1e-9);
    }
    SUBCASE("complex direction uses z'(s)^2") {
        // u = exp(i z) solves u'' + u = 0 in z; along any direction u(z(s)) must match.
        const SegmentPath path(Complex(-0.3, -0.6), Complex(0.5, 0.4));
        const Complex I(0, 1);
        const Complex u0 = std::exp(I * path.start());
        const auto sol = integrate_segment(constant_field(1.0), path, u0, I * u0 * path.direction(), 500);
        for (std::size_t i = 0; i < sol.s.size(); ++i)
            CHECK(std::abs(sol.u[i] - std::exp(I * path.at(sol.s[i]))) < 1e-10);
    }
}

TEST_CASE("integrate_segment: errors") {
    const SegmentPath path(-0.5, 0.5);
    CHECK_THROWS_AS(integrate_segment(constant_field(1.0), path, 0.0, 1.0, 99), DomainError);
    CHECK_THROWS_AS(integrate_segment(parse("1/z"), path, 0.0, 1.0, 100), PoleError);
    // Frequency 300 on length 1 with 100 steps: far from converged.
    CHECK_THROWS_AS(integrate_segment(constant_field(9e4), path, 0.0, 1.0, 100), NumericalError);
}

TEST_CASE("integrate_segment: fourth-order convergence") {
    const double ratio = max_error_vs_sine(200) / max_error_vs_sine(400);
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("lemma1_residual") {
    SUBCASE("psi = 0, u = 1 + s") {
        const auto sol = integrate_segment(AnalyticExpr::constant(0.0), SegmentPath(-0.5, 0.5), 1.0, 1.0, 200);
        const auto rep = lemma1_residual(sol, AnalyticExpr::constant(0.0));
        CHECK(std::abs(rep.min_residual) < 1e-8);
        CHECK(rep.pass);
        CHECK_FALSE(rep.shrunk);
    }
    SUBCASE("Koebe along 0 -> 0.7") {
        const auto psi = parse("-3/(1 - z^2)^2");
        for (const Complex dir : {Complex(0.7), Complex(0.0, 0.7), std::polar(0.7, 0.8)}) {
            const auto sol = integrate_segment(psi, SegmentPath(0.0, dir), 1.0, Complex(0.2, -0.1), 2000);
            const auto rep = lemma1_residual(sol, psi);
            CHECK(rep.pass);
            CHECK(rep.min_residual >= -1e-6 * rep.scale);
        }
    }
    SUBCASE("equality case for a sinusoid") {
        const double C = 10.0, k = std::sqrt(C / 2.0);
        const auto psi = AnalyticExpr::constant(C / 2.0);
        // First zero of sin(ks) at pi/k ~ 1.405 lies beyond the segment.
        const auto sol = integrate_segment(psi, SegmentPath(-0.6, 0.7), 0.0, 1.0, 2000);
        const auto rep = lemma1_residual(sol, psi);
        CHECK(rep.pass);
        CHECK(std::abs(rep.min_residual) < 1e-6 * rep.scale);
        CHECK(k > 0.0);
    }
    SUBCASE("interior zero shrinks the range") {
        // u = sin(2 (s - s0)) with s0 on the grid, so |u| dips below 1e-8 there.
        const SegmentPath path(-0.9, 0.9);
        const int steps = 1800;
        const double s0 = path.length() * 1200 / steps;
        const auto sol = integrate_segment(constant_field(4.0), path, std::sin(-2.0 * s0), 2.0 * std::cos(-2.0 * s0),
                                           steps);
        const auto rep = lemma1_residual(sol, constant_field(4.0));
        CHECK(rep.shrunk);
        CHECK(rep.s_hi < s0);
        CHECK(rep.pass);
    }
}

TEST_CASE("find_zeros and zero_separation_check") {
    SUBCASE("C = 200 sinusoid") {
        const double C = 200.0, k = std::sqrt(C / 2.0);
        const auto sol =
            integrate_segment(AnalyticExpr::constant(C / 2.0), SegmentPath(-0.95, 0.95), 0.0, 1.0, 20000);
        const auto rec = find_zeros(sol);
        const int expected = static_cast<int>(std::floor(1.9 * k / kPi)) + 1;
        CHECK(rec.count == expected);
        for (int j = 0; j < rec.count; ++j)
            CHECK(std::abs(rec.zeros[static_cast<std::size_t>(j)] - j * kPi / k) < 1e-9);
        CHECK(rec.min_gap == doctest::Approx(kPi * std::sqrt(0.01)).epsilon(1e-9));
        const auto res = zero_separation_check(C, rec);
        CHECK(res.pass);
        CHECK_FALSE(res.vacuous);
        CHECK(res.bound == doctest::Approx(0.3141592653589793).epsilon(1e-14));
    }
    SUBCASE("complex solution zeros off the real axis") {
        // u = sin(k (z - z0)) along a segment through z0.
        const double k = 6.0;
        const SegmentPath path(Complex(-0.5, -0.5), Complex(0.6, 0.5));
        const Complex z0 = path.at(0.4);
        const Complex a = path.start();
        const auto sol = integrate_segment(constant_field(k * k), path, std::sin(k * (a - z0)),
                                           k * std::cos(k * (a - z0)) * path.direction(), 4000);
        const auto rec = find_zeros(sol);
        REQUIRE(rec.count >= 1);
        CHECK(std::abs(rec.zeros[0] - 0.4) < 1e-9);
    }
    SUBCASE("C = pi^2/2: at most one zero on a diameter") {
        const double C = kPi * kPi / 2.0;
        const auto sol = integrate_segment(AnalyticExpr::constant(C / 2.0),
                                           SegmentPath(-(1.0 - 1e-9), 1.0 - 1e-9), 0.3, 1.0, 4000);
        const auto rec = find_zeros(sol);
        CHECK(rec.count <= 1);
        CHECK(zero_separation_check(C, rec).pass);
        CHECK(zero_separation_check(C, rec).bound == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("vacuous") {
        const auto res = zero_separation_check(10.0, make_zero_record({0.5}));
        CHECK(res.pass);
        CHECK(res.vacuous);
    }
    SUBCASE("too-close zeros fail") {
        CHECK_FALSE(zero_separation_check(200.0, make_zero_record({0.0, 0.3})).pass);
    }
}

TEST_CASE("Sturm monotonicity in the constant") {
    const SegmentPath path(-(1.0 - 1e-9), 1.0 - 1e-9);
    int prev = 0;
    std::vector<int> counts;
    for (double c : {1.0, 4.0, 9.0, 16.0}) {
        const auto rec = find_zeros(integrate_segment(constant_field(c), path, 0.0, 1.0, 4000));
        CHECK(rec.count >= prev);
        prev = rec.count;
        counts.push_back(rec.count);
    }
    CHECK(counts == std::vector<int>{1, 2, 2, 3});
}

TEST_CASE("legendre_lower_bound") {
    const auto r3 = legendre_lower_bound(3);
    REQUIRE(r3.count == 2);
    CHECK(r3.zeros[0] == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-13));
    CHECK(r3.zeros[1] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-13));

    const auto r2 = legendre_lower_bound(2);
    REQUIRE(r2.count == 1);
    CHECK(std::abs(r2.zeros[0]) < 1e-15);

    CHECK(legendre_lower_bound(1).count == 0);

    for (int n = 2; n <= 12; ++n) {
        const auto rec = legendre_lower_bound(n);
        CHECK(rec.count == n - 1);
        for (double x : rec.zeros) CHECK(std::abs(legendre_derivative(n, x)) < 1e-9 * n * n);
        CHECK(legendre_ode_sign_changes(n) >= n - 1);
    }
    CHECK(legendre_lower_bound(30).count == 29);
    CHECK_THROWS_AS(legendre_lower_bound(0), DomainError);
    CHECK_THROWS_AS(legendre_lower_bound(31), DomainError);
}

TEST_CASE("real integrator against exact solutions") {
    SUBCASE("quadratic profile: sqrt(1-x^2) (A + B atanh x)") {
        const NehariProfile p(NehariKind::quadratic);
        const auto pf = [&p](double x) { return p(std::abs(x)); };
        // u = sqrt(1-x^2) atanh x: u(0) = 0, u'(0) = 1.
        for (double end : {0.999, -0.9999, 1.0 - 1e-6}) {
            const auto sol = integrate_real(pf, 0.0, 0.0, 1.0, end);
            const double x = sol.x.back();
            CHECK(x == end);
            CHECK(sol.u.back() == doctest::Approx(std::sqrt(1 - x * x) * std::atanh(x)).epsilon(1e-7));
        }
    }
    SUBCASE("pokornyi: u = 1 - x^2") {
        const NehariProfile p(NehariKind::pokornyi);
        const auto pf = [&p](double x) { return p(std::abs(x)); };
        const auto sol = integrate_real(pf, 0.2, 0.96, -0.4, 1.0 - 1e-6);
        for (std::size_t i = 0; i < sol.x.size(); ++i)
            CHECK(std::abs(sol.u[i] - (1 - sol.x[i] * sol.x[i])) < 1e-9);
        CHECK(solution_zero_count(p, 0.2, 0.96, -0.4) == 0);
    }
}

TEST_CASE("disconjugacy_check") {
    SUBCASE("constant profile: sin(pi x/2) has exactly one zero") {
        const NehariProfile p(NehariKind::constant);
        CHECK(solution_zero_count(p, 0.0, 0.0, 1.0) == 1);
        CHECK(solution_zero_count(p, 0.0, 1.0, 0.0) == 0);
        const auto rep = disconjugacy_check(p, 100);
        CHECK(rep.pass);
        CHECK(rep.max_zero_count <= 1);
    }
    for (auto kind : {NehariKind::quadratic, NehariKind::pokornyi}) {
        const auto rep = disconjugacy_check(NehariProfile(kind), 100);
        CHECK(rep.pass);
        CHECK(rep.max_zero_count == 1);
        CHECK_FALSE(rep.blew_up);
    }
    SUBCASE("a profile that is too large is caught") {
        // 4 p_constant is not a Nehari function: sin(pi (x+1)) vanishes at -1 and at 0.
        const auto strong = [](double) { return kPi * kPi; };
        const auto sol = integrate_real(strong, -1.0 + 1e-6, 0.0, 1.0, 1.0 - 1e-6);
        CHECK(sol.sign_changes() >= 1);
    }
    SUBCASE("deterministic and rejects trivial data") {
        const NehariProfile p(NehariKind::pokornyi);
        const auto a = disconjugacy_check(p, 20, 42), b = disconjugacy_check(p, 20, 42);
        CHECK(a.worst_base_point == b.worst_base_point);
        CHECK_THROWS_AS(solution_zero_count(p, 0.1, 0.0, 0.0), DomainError);
    }
}
