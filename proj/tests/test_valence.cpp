#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "schw/errors.hpp"
#include "schw/parser.hpp"
#include "schw/valence.hpp"

using namespace schw;

namespace {

constexpr double kPi = std::numbers::pi;

// prod (z - a_k) as an expression, together with its roots.
struct PolyCase {
    std::vector<Complex> roots;
    AnalyticExpr expr;
};

PolyCase product_of(const std::vector<Complex>& roots) {
    std::string text;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (i) text += "*";
        text += "(z - " + format_complex(roots[i]) + ")";
    }
    return {roots, parse(text)};
}

} // namespace

TEST_CASE("separation and constant-context bounds") {
    CHECK(separation_bound(kPi * kPi / 2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(separation_bound(2.0 * kPi * kPi) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(separation_bound(200.0) == doctest::Approx(0.3141592653589793).epsilon(1e-15));
    CHECK_THROWS_AS(separation_bound(0.0), DomainError);

    CHECK(valence_bound_const(kPi * kPi / 2.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(valence_bound_const(2.0 * kPi * kPi) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(valence_bound_const(50.0 * kPi * kPi) == doctest::Approx(121.0).epsilon(1e-14));
    CHECK(valence_cap(kPi * kPi / 2.0) == 4);
    CHECK(valence_cap(4.9348022) == 4);
    CHECK(valence_cap(2.0 * kPi * kPi) == 9);
    CHECK(valence_cap(200.0) == 54);
    CHECK_THROWS_AS(valence_bound_const(4.9), DomainError);

    CHECK(BoundConfig(4.0, BoundContext::pokornyi).epsilon() == doctest::Approx(kPi / 4.0));
    CHECK_THROWS_AS(BoundConfig(2.0, BoundContext::pokornyi), DomainError);
    CHECK_THROWS_AS(BoundConfig(4.0, BoundContext::constant), DomainError);
}

TEST_CASE("tan_zero_census") {
    const auto r200 = tan_zero_census(200.0);
    CHECK(r200.count == 7);
    CHECK(std::abs(r200.min_separation - 0.1 * kPi) < 1e-12);
    for (int k = -3; k <= 3; ++k)
        CHECK(std::abs(r200.preimages[static_cast<std::size_t>(k + 3)] - Complex(0.1 * kPi * k)) < 1e-14);

    CHECK(tan_zero_census(2.0 * kPi * kPi).count == 1);
    CHECK(tan_zero_census(kPi * kPi / 2.0 * (1.0 + 1e-6)).count == 1);

    CHECK(packing_check(r200, 200.0).pass);
    CHECK(packing_check(tan_zero_census(2.0 * kPi * kPi), 2.0 * kPi * kPi).vacuous_separation);
    ValenceReport synthetic = r200;
    synthetic.count = 60;
    CHECK_FALSE(packing_check(synthetic, 200.0).pass);
    synthetic = r200;
    synthetic.min_separation = 0.2;
    CHECK_FALSE(packing_check(synthetic, 200.0).pass);
}

TEST_CASE("count_valence: catalog") {
    const auto k = count_valence(AnalyticExpr::koebe(), 1.0, 0.9);
    REQUIRE(k.count == 1);
    CHECK(std::abs(k.preimages[0] - (3.0 - std::sqrt(5.0)) / 2.0) < 1e-12);
    CHECK(k.winding_residual < 0.01);

    CHECK(count_valence(AnalyticExpr::identity(), 2.0, 0.9).count == 0);

    const auto t = count_valence(AnalyticExpr::tan_scaled(200.0), 0.0, 0.999);
    CHECK(t.count == 7);
    CHECK(t.poles.size() == 6);
    CHECK(std::lround(t.winding) == 1);
    CHECK(t.winding_residual < 0.01);
    const auto census = tan_zero_census(200.0);
    for (std::size_t i = 0; i < census.preimages.size(); ++i)
        CHECK(std::abs(t.preimages[i] - census.preimages[i]) < 1e-10);
    CHECK(std::abs(t.min_separation - census.min_separation) < 1e-10);
    for (Complex z : t.preimages) CHECK(std::abs(std::tan(std::sqrt(100.0) * z)) < 1e-8);
}

TEST_CASE("count_valence: polynomial corpus") {
    const std::vector<std::vector<Complex>> corpus{
        {0.1},
        {0.2, -0.3},
        {Complex(0.1, 0.5), Complex(0.1, -0.5), 1.5},
        {0.0, 0.5, -0.5, Complex(0, 0.5)},
        {2.0, -2.0, Complex(0, 3.0)},
        {Complex(0.3, 0.3), Complex(-0.3, 0.3), Complex(0.3, -0.3), Complex(-0.3, -0.3), 0.95},
        {0.7, 0.71, -0.2},
        {Complex(0.45, 0.2), Complex(-0.6, -0.6), Complex(0.2, 0.88), 1.2, Complex(-1.1, 0.4)},
        {0.05, -0.05, Complex(0, 0.05), Complex(0, -0.05), 0.6, -0.6},
        {Complex(0.8, 0.1), Complex(-0.1, 0.8), Complex(-0.8, -0.1), Complex(0.1, -0.8), 0.0, 0.4, -0.4},
    };
    const double r = 0.9;
    for (const auto& roots : corpus) {
        const PolyCase pc = product_of(roots);
        const auto rep = count_valence(pc.expr, 0.0, r);
        const auto inside = std::count_if(roots.begin(), roots.end(), [r](Complex a) { return std::abs(a) < r; });
        CHECK(rep.count == inside);
        CHECK(std::lround(rep.winding) == inside);
        CHECK(rep.winding_residual < 0.01);
        CHECK(rep.poles.empty());
        for (Complex z : rep.preimages) {
            CHECK(std::abs(evaluate(pc.expr, z)) < 1e-8);
            const auto nearest = std::min_element(roots.begin(), roots.end(), [z](Complex a, Complex b) {
                return std::abs(a - z) < std::abs(b - z);
            });
            CHECK(std::abs(*nearest - z) < 1e-9);
        }
    }
}

TEST_CASE("count_valence: errors") {
    CHECK_THROWS_AS(count_valence(parse("z - 0.5"), 0.0, 0.5 + 1e-8), DomainError);
    CHECK_THROWS_AS(count_valence(AnalyticExpr::koebe(), 1.0, -0.5), DomainError);
    CHECK_THROWS_AS(count_valence(AnalyticExpr::koebe(), 1.0, 0.5, 4), DomainError);
}

TEST_CASE("empirical-versus-bound sandwich for tan") {
    for (double C : {50.0, 200.0, 800.0}) {
        const auto rep = count_valence(AnalyticExpr::tan_scaled(C), 0.0, 0.999);
        CHECK(rep.count >= std::sqrt(2.0 * C) / kPi - 1.0);
        CHECK(rep.count <= valence_bound_const(C));
        CHECK(rep.count == tan_zero_census(C).count);
    }
}

TEST_CASE("lemma2_bound, next_radius, phi") {
    CHECK(lemma2_bound(0.5) == 12);
    CHECK(lemma2_bound(1.0) == 6);
    CHECK_THROWS_AS(lemma2_bound(kPi), DomainError);
    CHECK_THROWS_AS(lemma2_bound(0.0), DomainError);

    const auto s = next_radius(0.0, 0.5);
    CHECK(s.x == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK(std::abs(s.x - 0.0 - 0.5 * std::sqrt(1.0 - s.x * s.x)) < 1e-12);
    CHECK(next_radius(0.3, 1e-9).d < 1e-8);
    const auto t = next_radius(0.8, 0.1);
    CHECK(std::abs(t.x - 0.8 - 0.1 * std::sqrt(1.0 - t.x * t.x)) < 1e-12);
    CHECK_THROWS_AS(next_radius(1.0, 0.1), DomainError);

    CHECK(phi(0.0, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(phi(0.0, 0.5) == doctest::Approx(std::sqrt(1.25) / 0.5).epsilon(1e-15));
    CHECK(phi(0.2, 0.1) < phi(0.5, 0.1));
    CHECK(phi(0.5, 0.1) < phi(0.8, 0.1));
    for (double a : {0.0, 0.1, 0.5, 0.9, 0.999})
        for (double e : {1e-3, 0.1, 1.0}) CHECK(std::abs(phi(a, e) * next_radius(a, e).d - 1.0) < 1e-12);
    CHECK_THROWS_AS(phi(1.0, 0.1), DomainError);
}

TEST_CASE("theorem2_breakdown") {
    const auto b4 = theorem2_breakdown(4.0);
    CHECK(b4.r0 == doctest::Approx(kPi / std::sqrt(kPi * kPi + 16.0)).epsilon(1e-15));
    CHECK(b4.r0 == doctest::Approx(0.6180).epsilon(1e-3));
    CHECK(b4.R * b4.R == doctest::Approx(1.0 - 1.0 / 16.0).epsilon(1e-15));
    CHECK(b4.R1 * b4.R1 == doctest::Approx(1.0 - 1.0 / 8.0).epsilon(1e-15));
    CHECK_THROWS_AS(theorem2_breakdown(2.0), DomainError);

    for (double C : {2.1, 4.0, 16.0, 64.0, 256.0, 1024.0, 1e4, 1e6}) {
        const auto b = theorem2_breakdown(C);
        CHECK(b.r0 == doctest::Approx(next_radius(0.0, b.epsilon).x).epsilon(1e-14));
        REQUIRE(b.radii.size() == static_cast<std::size_t>(b.m) + 1);
        CHECK(b.radii.back() <= b.R);
        CHECK(next_radius(b.radii.back(), b.epsilon).x > b.R);
        std::int64_t sum = 0;
        for (int k = 1; k <= b.m; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            CHECK(b.radii[ku] > b.radii[ku - 1]);
            CHECK(b.gaps[ku - 1] == doctest::Approx(b.radii[ku] - b.radii[ku - 1]).epsilon(1e-12));
            CHECK(std::abs(phi(b.radii[ku - 1], b.epsilon) * b.gaps[ku - 1] - 1.0) < 1e-10);
            CHECK(b.annulus_counts[ku - 1] == static_cast<std::int64_t>(std::floor(2 * kPi / b.gaps[ku - 1])));
            sum += b.annulus_counts[ku - 1];
        }
        CHECK(sum == b.inner_sum);
        CHECK(b.gap_annulus_count == static_cast<std::int64_t>(std::ceil(8.0 * C - 1e-9)));
        CHECK(b.total == 1 + b.inner_sum + b.gap_annulus_count + b.rectangle_count);
        CHECK(b.envelope_ok);
        CHECK(1.0 + static_cast<double>(b.inner_sum) <= 1.01 * b.envelope);
        CHECK_FALSE(b.rectangle_fallback);
    }
}

TEST_CASE("theorem2_breakdown: growth in C") {
    // The floor terms make the raw total a sawtooth in C (the last annulus
    // count jumps as r_{m-1} drifts), so on a fine grid only the continuous
    // envelope version of the bound is monotone.
    std::vector<double> Cs;
    for (double C = 2.1; C < 3000.0; C *= 1.07) Cs.push_back(C);
    const auto rows = theorem2_sweep(Cs);
    const auto smooth = [](const BoundBreakdown& b) {
        return b.envelope + static_cast<double>(b.gap_annulus_count + b.rectangle_count);
    };
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].C > rows[i - 1].C);
        CHECK(smooth(rows[i]) >= smooth(rows[i - 1]));
        CHECK(static_cast<double>(rows[i].total) <= smooth(rows[i]));
    }
    const auto coarse = theorem2_sweep({2.1, 4.0, 16.0, 64.0, 256.0, 1024.0, 4096.0, 16384.0, 65536.0, 262144.0, 1e6});
    for (std::size_t i = 1; i < coarse.size(); ++i) CHECK(coarse[i].total > coarse[i - 1].total);
}

TEST_CASE("sweep band and CSV") {
    const auto rows = theorem2_sweep({1024.0, 4.0, 256.0, 16.0, 64.0});
    REQUIRE(rows.size() == 5);
    CHECK(rows.front().C == 4.0);
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        lo = std::min(lo, rows[i].total_over_ClogC);
        hi = std::max(hi, rows[i].total_over_ClogC);
        if (i > 0) CHECK(rows[i].total_over_ClogC <= rows[i - 1].total_over_ClogC);
    }
    CHECK(hi / lo <= 5.0);

    std::ostringstream out;
    write_sweep_csv(out, rows);
    const std::string csv = out.str();
    CHECK(csv.rfind("C,r0,m,R,R1,inner_sum,gap_count,rect_count,total,total_over_ClogC\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    std::ostringstream again;
    write_sweep_csv(again, theorem2_sweep({4.0, 16.0, 64.0, 256.0, 1024.0}));
    CHECK(again.str() == csv);
}

TEST_CASE("integral_estimates") {
    for (double C : {2.5, 4.0, 16.0, 64.0, 256.0, 1024.0}) {
        const auto est = integral_estimates(C);
        const double eps = kPi / (2.0 * std::sqrt(C));
        const double R = std::sqrt(1.0 - 1.0 / (4.0 * C));
        CHECK(est.I1 == doctest::Approx(std::atanh(R) / (eps * eps)).epsilon(1e-8));
        CHECK(est.I2 == doctest::Approx(R / (1.0 - R * R)).epsilon(1e-8));
        CHECK(est.I1_within_bound);
        CHECK(est.I1 <= 2.0 * C / (kPi * kPi) * std::log(16.0 * C) + 1e-6);
        CHECK(est.I2_within_bound);
        CHECK(std::isfinite(est.I3));
        CHECK(est.I3 > 0.0);

        const auto b = theorem2_breakdown(C);
        double riemann = 0.0;
        for (int k = 1; k <= b.m; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const double p = phi(b.radii[ku - 1], eps);
            riemann += p * p * b.gaps[ku - 1];
        }
        CHECK(est.I1 + est.I2 + est.I3 >= 0.99 * riemann);
        CHECK(b.envelope == doctest::Approx(1.0 + 2.0 * kPi * (est.I1 + est.I2 + est.I3)).epsilon(1e-7));
    }
    // The 1/eps^2 factor: I1 per unit C is fixed by R alone.
    const auto big = integral_estimates(1e6);
    CHECK(big.I1 / 1e6 == doctest::Approx(4.0 / (kPi * kPi) * std::atanh(std::sqrt(1.0 - 0.25e-6))).epsilon(1e-7));
}
