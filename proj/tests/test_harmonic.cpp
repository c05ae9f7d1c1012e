#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "schw/disk.hpp"
#include "schw/errors.hpp"
#include "schw/harmonic.hpp"

using namespace schw;

namespace {

constexpr double kPi = std::numbers::pi;

using LComplex = std::complex<long double>;
using LFn = std::function<LComplex(LComplex)>;

LComplex widen(Complex z) { return {z.real(), z.imag()}; }
Complex narrow(LComplex z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

const AnalyticExpr Z = AnalyticExpr::var();
AnalyticExpr K(Complex c) { return AnalyticExpr::constant(c); }

// A harmonic map together with closed forms of h' and q for the oracles.
struct Sample {
    HarmonicMap map;
    LFn hprime;
    LFn q;
};

std::vector<Sample> random_maps(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<Sample> out;
    {
        const Complex c(u(rng), u(rng));
        out.push_back({HarmonicMap(AnalyticExpr::koebe(), K(c) * Z),
                       [](LComplex z) { return (1.0L + z) / ((1.0L - z) * (1.0L - z) * (1.0L - z)); },
                       [c](LComplex z) { return widen(c) * z; }});
    }
    {
        const Complex a(2.0 * u(rng), 2.0 * u(rng));
        const Complex c(u(rng), u(rng)), d(0.5 * u(rng), 0.5 * u(rng));
        out.push_back({HarmonicMap(AnalyticExpr::unary(Op::Exp, K(a) * Z), K(c) * Z * Z + K(d)),
                       [a](LComplex z) { return widen(a) * std::exp(widen(a) * z); },
                       [c, d](LComplex z) { return widen(c) * z * z + widen(d); }});
    }
    {
        const Complex b(0.8 * u(rng), 0.8 * u(rng));
        const Complex c(u(rng), u(rng)), d(u(rng), u(rng));
        out.push_back({HarmonicMap(Z + K(b) * Z * Z, K(c) * (Z + K(d))),
                       [b](LComplex z) { return 1.0L + 2.0L * widen(b) * z; },
                       [c, d](LComplex z) { return widen(c) * (z + widen(d)); }});
    }
    {
        const double C = 1.0 + 4.0 * std::abs(u(rng));
        const Complex c(u(rng), u(rng));
        out.push_back({HarmonicMap(AnalyticExpr::tan_scaled(C), K(c) * Z),
                       [C](LComplex z) {
                           const long double k = std::sqrt(static_cast<long double>(C) / 2.0L);
                           const LComplex t = std::tan(k * z);
                           return 1.0L + t * t;
                       },
                       [c](LComplex z) { return widen(c) * z; }});
    }
    return out;
}

long double sigma_of(const Sample& s, long double x, long double y) {
    const LComplex z(x, y);
    return std::log(std::abs(s.hprime(z)) * (1.0L + std::norm(s.q(z))));
}

constexpr long double kW[5] = {1.0L / 12.0L, -2.0L / 3.0L, 0.0L, 2.0L / 3.0L, -1.0L / 12.0L};
constexpr long double kW2[5] = {-1.0L / 12.0L, 4.0L / 3.0L, -5.0L / 2.0L, 4.0L / 3.0L, -1.0L / 12.0L};

// Fourth-order stencils for the Wirtinger derivatives of sigma:
// sigma_z = (sigma_x - i sigma_y)/2, sigma_zz = (sigma_xx - sigma_yy - 2i sigma_xy)/4.
Complex fd_schwarzian(const Sample& s, Complex z0, long double h) {
    const long double x = z0.real(), y = z0.imag();
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < 5; ++i) {
        const long double o = (i - 2) * h;
        sx += kW[i] * sigma_of(s, x + o, y);
        sy += kW[i] * sigma_of(s, x, y + o);
        sxx += kW2[i] * sigma_of(s, x + o, y);
        syy += kW2[i] * sigma_of(s, x, y + o);
        for (int j = 0; j < 5; ++j)
            if (kW[i] != 0 && kW[j] != 0) sxy += kW[i] * kW[j] * sigma_of(s, x + o, y + (j - 2) * h);
    }
    sx /= h;
    sy /= h;
    sxx /= h * h;
    syy /= h * h;
    sxy /= h * h;
    const LComplex sz = LComplex(sx, -sy) / 2.0L;
    const LComplex szz = LComplex(sxx - syy, -2.0L * sxy) / 4.0L;
    return narrow(2.0L * (szz - sz * sz));
}

// Nine-point Laplacian (4 (N+S+E+W) + corners - 20 centre)/(6 h^2).
double fd_laplacian(const Sample& s, Complex z0, long double h) {
    const long double x = z0.real(), y = z0.imag();
    const long double c = sigma_of(s, x, y);
    const long double edges = sigma_of(s, x + h, y) + sigma_of(s, x - h, y) + sigma_of(s, x, y + h) +
                              sigma_of(s, x, y - h);
    const long double corners = sigma_of(s, x + h, y + h) + sigma_of(s, x + h, y - h) +
                                sigma_of(s, x - h, y + h) + sigma_of(s, x - h, y - h);
    return static_cast<double>((4.0L * edges + corners - 20.0L * c) / (6.0L * h * h));
}

Complex random_point(std::mt19937_64& rng, double max_radius) {
    std::uniform_real_distribution<double> r(0.0, 1.0), t(0.0, 2.0 * kPi);
    return std::polar(max_radius * std::sqrt(r(rng)), t(rng));
}

Sample shear_sample() {
    return {shear_koebe(0.0), [](LComplex z) { return 1.0L / std::pow(1.0L - z, 4); }, [](LComplex z) { return z; }};
}

Complex shear_closed_form(Complex z) {
    const Complex t = 1.0 / (1.0 - z) + std::conj(z) / (1.0 + std::norm(z));
    return -4.0 * t * t;
}

} // namespace

TEST_CASE("harmonic: q = 0 reduces to the analytic Schwarzian") {
    std::mt19937_64 rng(11);
    const std::vector<AnalyticExpr> hs = {AnalyticExpr::koebe(), AnalyticExpr::tan_scaled(3.0),
                                          AnalyticExpr::unary(Op::Exp, K(1.7) * Z) + Z * Z * Z,
                                          Z + K(0.25) * Z * Z};
    double worst = 0.0;
    for (const auto& h : hs) {
        const HarmonicMap f(h, K(0.0));
        for (int i = 0; i < 50; ++i) {
            const Complex z = random_point(rng, 0.8);
            worst = std::max(worst, std::abs(harmonic_schwarzian(f, z) - schwarzian(h, z)));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("harmonic: sheared Koebe closed form") {
    const auto f = shear_koebe(0.0);
    CHECK(std::abs(harmonic_schwarzian(f, 0.0) - Complex(-4.0, 0.0)) < 1e-14);
    std::mt19937_64 rng(12);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Complex z = random_point(rng, 0.95);
        worst = std::max(worst, std::abs(harmonic_schwarzian(f, z) - shear_closed_form(z)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("harmonic: Schwarzian matches finite differences of sigma") {
    std::mt19937_64 rng(13);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        auto maps = random_maps(rng);
        maps.push_back(shear_sample());
        for (const auto& s : maps) {
            for (int i = 0; i < 8; ++i) {
                const Complex z = random_point(rng, 0.6);
                const Complex lib = harmonic_schwarzian(s.map, z);
                const Complex fd = fd_schwarzian(s, z, 2e-3L);
                worst = std::max(worst, std::abs(lib - fd) / std::max(1.0, std::abs(lib)));
            }
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("harmonic: sigma jet") {
    const auto f = shear_koebe(0.0);
    const auto s = sigma_jet(f, 0.0);
    CHECK(s.sigma == doctest::Approx(0.0));
    CHECK(std::abs(s.sigma_z - Complex(2.0, 0.0)) < 1e-14);
    CHECK(std::abs(s.sigma_zz - Complex(2.0, 0.0)) < 1e-14);
    const Complex z(0.2, -0.3);
    CHECK(std::exp(sigma_jet(f, z).sigma) ==
          doctest::Approx(std::abs(f.h_prime(z)) + std::abs(f.g_prime(z))).epsilon(1e-14));
}

TEST_CASE("harmonic: composition laws") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> t(0.0, 2.0 * kPi);
    double worst_mobius = 0.0, worst_general = 0.0;
    // A non-Mobius self-map of the disk, so the S(phi) term is exercised.
    const auto phi2 = K(0.5) * Z + K(Complex(0.1, 0.2)) * Z * Z;
    for (int trial = 0; trial < 4; ++trial) {
        auto maps = random_maps(rng);
        maps.push_back(shear_sample());
        for (const auto& s : maps) {
            const auto phi = AnalyticExpr::disk_automorphism(random_point(rng, 0.5), t(rng));
            for (int i = 0; i < 5; ++i) {
                const Complex z = random_point(rng, 0.3);
                try {
                    worst_mobius = std::max(worst_mobius, harmonic_composition_residual(s.map, phi, z));
                } catch (const DomainError&) {
                    // phi(z) may leave the region where |q| < 1; not a law violation.
                }
                worst_general = std::max(worst_general, harmonic_composition_residual(s.map, phi2, z));
            }
        }
    }
    CHECK(worst_mobius <= 1e-8);
    CHECK(worst_general <= 1e-8);
}

TEST_CASE("harmonic: sheared Koebe norm") {
    const auto f = shear_koebe(0.0);
    const auto est = harmonic_norm_estimate(f);
    CHECK(std::abs(est.lower_bound - 16.0) <= 1e-3);
    CHECK(est.lower_bound <= 16.0 + 1e-9);

    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> t(0.0, 2.0 * kPi);
    for (int i = 0; i < 4; ++i) {
        const auto phi = AnalyticExpr::disk_automorphism(random_point(rng, 0.7), t(rng));
        CHECK(std::abs(harmonic_norm_estimate(f.compose(phi)).lower_bound - est.lower_bound) <= 1e-3);
    }
}

TEST_CASE("harmonic: rotated shears have dilatation e^{i theta} z^2 and norm 16") {
    const auto base = shear_koebe(0.0);
    for (double theta : {0.7, 2.0, 4.5}) {
        // e^{-i theta/2} F has h = e^{-i theta/2} h_0 and q = e^{i theta/2} z.
        const HarmonicMap f(K(std::polar(1.0, -theta / 2.0)) * base.h(), K(std::polar(1.0, theta / 2.0)) * Z);
        const Complex z(0.3, -0.2);
        CHECK(std::abs(f.omega(z) - std::polar(1.0, theta) * z * z) < 1e-15);
        CHECK(std::abs(harmonic_norm_estimate(f).lower_bound - 16.0) <= 1e-3);
    }
}

TEST_CASE("harmonic: shear with h - g = k and dilatation e^{i theta} z^2") {
    for (double theta : {0.0, 1.0, 3.0}) {
        const auto f = shear_koebe(theta);
        for (Complex z : {Complex(0.3, 0.1), Complex(-0.5, 0.4), Complex(0.1, -0.8)}) {
            const Complex k = z / ((1.0 - z) * (1.0 - z));
            CHECK(std::abs(f.h_value(z) - f.g(z) - k) <= 1e-10 * std::max(1.0, std::abs(k)));
            CHECK(std::abs(f.omega(z) - std::polar(1.0, theta) * z * z) < 1e-15);
        }
    }
    // For theta != 0 the analytic part only has a cube-order singularity at 1
    // and the weighted supremum is interior; the value at the maximiser
    // agrees with the finite-difference oracle.
    const double theta = 1.0;
    const auto f = shear_koebe(theta);
    const Sample s{f,
                   [theta](LComplex z) {
                       const LComplex c = std::polar(1.0L, static_cast<long double>(theta));
                       return (1.0L + z) / ((1.0L - z) * (1.0L - z) * (1.0L - z) * (1.0L - c * z * z));
                   },
                   [theta](LComplex z) { return std::polar(1.0L, static_cast<long double>(theta) / 2.0L) * z; }};
    const auto est = harmonic_norm_estimate(f);
    const Complex p = est.attaining_point;
    const double w = 1.0 - std::norm(p);
    CHECK(std::abs(p) < 0.9);
    CHECK(est.lower_bound == doctest::Approx(w * w * std::abs(fd_schwarzian(s, p, 2e-3L))).epsilon(1e-7));
    CHECK(est.lower_bound < 12.0);
    const Complex p1(0.2, 0.3);
    CHECK(std::abs(shear_koebe(-0.1).omega(p1) - shear_koebe(2.0 * kPi - 0.1).omega(p1)) < 1e-14);
    CHECK(std::abs(shear_koebe(2.0 * kPi).h_prime(p1) - shear_koebe(0.0).h_prime(p1)) < 1e-12);
}

TEST_CASE("harmonic: validity errors") {
    const HarmonicMap wide(Z, K(2.0) * Z);
    CHECK_THROWS_AS(harmonic_schwarzian(wide, 0.6), DomainError);
    CHECK_FALSE(wide.valid_at(0.6));
    CHECK(wide.valid_at(0.1));
    const HarmonicMap critical(Z * Z, K(0.0));
    CHECK_THROWS_AS(harmonic_schwarzian(critical, 0.0), CriticalPointError);
}

TEST_CASE("harmonic: analytic-part bounds") {
    CHECK(pommerenke_bound(0.0) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(pommerenke_bound(6.0) == doctest::Approx(17.0).epsilon(1e-15));
    CHECK(pommerenke_bound(19204.0) < 19407.0);
    CHECK(pommerenke_bound(19204.0) > 19406.0);
    CHECK_THROWS_AS(pommerenke_bound(-1.0), DomainError);

    CHECK(mu(1.0) == 1.0);
    const double m = mu(49.0);
    CHECK(m * (49.0 + std::sqrt(49.0 * 49.0 - 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m == doctest::Approx(49.0 - std::sqrt(2400.0)).epsilon(1e-10));
    CHECK(analytic_part_norm_bound(49.0) == doctest::Approx(19204.0).epsilon(1e-4));
    CHECK(analytic_part_norm_bound(49.0) < 19204.0 + 1.0);
    CHECK(pommerenke_bound(analytic_part_norm_bound()) < 19407.0);
    CHECK_THROWS_AS(mu(0.5), DomainError);

    for (double lambda : {1.5, 3.0, 49.0}) {
        CHECK(convexity_floor(0.0, lambda) == 1.0);
        CHECK(std::abs(convexity_floor(mu(lambda), lambda)) < 1e-12);
        CHECK(convexity_floor(0.5 * mu(lambda), lambda) > 0.0);
    }
    CHECK_THROWS_AS(convexity_floor(1.0, 2.0), DomainError);
    CHECK_THROWS_AS(convexity_floor(0.5, 0.9), DomainError);
}

TEST_CASE("harmonic: convexity indicator and Koebe transform coefficient") {
    const auto k = AnalyticExpr::koebe();
    CHECK(std::abs(convexity_indicator(k, -(2.0 - std::sqrt(3.0)))) < 1e-12);
    CHECK(convexity_indicator(Z, Complex(0.4, 0.3)) == 1.0);
    std::mt19937_64 rng(16);
    for (int i = 0; i < 20; ++i) {
        const double x = 0.9 * (2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng) - 1.0);
        CHECK(convexity_indicator(k, x) == doctest::Approx((1.0 + 4.0 * x + x * x) / (1.0 - x * x)).epsilon(1e-12));
    }

    CHECK(std::abs(schwarz_transform_coefficient(k, 0.0) - Complex(4.0, 0.0)) < 1e-14);
    // Oracle: H = h o phi_zeta with phi_zeta(z) = (z + zeta)/(1 + conj(zeta) z); H''(0)/H'(0).
    for (int i = 0; i < 20; ++i) {
        const Complex zeta = random_point(rng, 0.8);
        const auto H = AnalyticExpr::compose(k, AnalyticExpr::disk_automorphism(zeta));
        const Jet j = derivative_jet(H, 0.0, 1);
        CHECK(std::abs(schwarz_transform_coefficient(k, zeta) - j[1] / j[0]) < 1e-10);
    }
    CHECK_THROWS_AS(schwarz_transform_coefficient(k, 1.0), DomainError);
}

TEST_CASE("harmonic: lift") {
    const auto f = shear_koebe(0.0);
    const Complex z0(0.3, 0.0);
    const auto s = lift(f, z0);
    CHECK(s.conformality_residual <= 1e-6);
    CHECK(s.conformal_factor == doctest::Approx(1.09 / std::pow(0.7, 4)).epsilon(1e-13));
    CHECK(s.curvature_density == doctest::Approx(4.0 / (1.09 * 1.09)).epsilon(1e-13));

    // Numeric partials of the lifted coordinates (fourth-order centred).
    std::mt19937_64 rng(17);
    std::vector<Complex> points{z0};
    for (int i = 0; i < 4; ++i) points.push_back(random_point(rng, 0.7));
    const double h = 1e-4;
    for (Complex z : points) {
        const auto e = lift(f, z).conformal_factor;
        std::array<double, 3> xu{}, xv{};
        const auto ls = [&](Complex p) { return lift(f, p).coords; };
        const auto a1 = ls(z + h), a2 = ls(z - h), a3 = ls(z + 2.0 * h), a4 = ls(z - 2.0 * h);
        const Complex ih(0.0, h);
        const auto b1 = ls(z + ih), b2 = ls(z - ih), b3 = ls(z + 2.0 * ih), b4 = ls(z - 2.0 * ih);
        for (int k = 0; k < 3; ++k) {
            xu[k] = (8.0 * (a1[k] - a2[k]) - (a3[k] - a4[k])) / (12.0 * h);
            xv[k] = (8.0 * (b1[k] - b2[k]) - (b3[k] - b4[k])) / (12.0 * h);
        }
        const double nu = std::hypot(xu[0], xu[1], xu[2]), nv = std::hypot(xv[0], xv[1], xv[2]);
        const double dot = xu[0] * xv[0] + xu[1] * xv[1] + xu[2] * xv[2];
        CHECK(std::abs(nu - e) / e <= 1e-6);
        CHECK(std::abs(nv - e) / e <= 1e-6);
        CHECK(std::abs(dot) / (e * e) <= 1e-6);
    }

    const HarmonicMap flat(AnalyticExpr::koebe(), K(0.0));
    const auto fl = lift(flat, Complex(0.2, 0.1));
    CHECK(fl.coords[2] == 0.0);
    CHECK(fl.curvature_density == 0.0);
    CHECK_THROWS_AS(lift(f, 1.0), DomainError);
}

TEST_CASE("harmonic: curvature density equals the Laplacian of sigma") {
    std::mt19937_64 rng(18);
    std::vector<Sample> maps{shear_sample()};
    const auto extra = random_maps(rng);
    maps.push_back(extra[0]);
    maps.push_back(extra[1]);
    double worst = 0.0;
    for (const auto& s : maps) {
        for (int i = 0; i < 10; ++i) {
            const Complex z = random_point(rng, 0.6);
            worst = std::max(worst, std::abs(lift(s.map, z).curvature_density - fd_laplacian(s, z, 1e-3L)));
        }
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("harmonic: lift criterion") {
    const auto f = shear_koebe(0.0);
    CHECK(lift_criterion_value(f, 0.0) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(std::abs(lift_criterion_value(f, 0.0) - 8.0) <= 1e-9);

    const std::vector<Complex> origin{0.0};
    CHECK(lift_criterion_check_constant(f, origin, 8.0).pass);
    CHECK_FALSE(lift_criterion_check_constant(f, origin, 7.9).pass);
    CHECK(lift_criterion_check_pokornyi(f, origin, 4.0).pass);

    // A map with q = 0 reduces to |Sh|, so tan_scaled(C) meets the constant bound C.
    const HarmonicMap t(AnalyticExpr::tan_scaled(20.0), K(0.0));
    const auto samples = disk_samples(0.99, 20, 32);
    const auto rep = lift_criterion_check_constant(t, samples, 20.0);
    CHECK(rep.pass);
    CHECK(rep.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lift_criterion_check_nehari(t, samples, NehariProfile(NehariKind::constant)).pass == false);

    const auto shear_rep = lift_criterion_check_pokornyi(f, disk_samples(0.99, 30, 48), 8.0);
    CHECK(shear_rep.evaluated == 1 + 30 * 48);
    CHECK(shear_rep.worst_value >= 8.0);
    CHECK_THROWS_AS(lift_criterion_check_constant(f, std::vector<Complex>{1.0}, 8.0), DomainError);
}

TEST_CASE("harmonic: preimages") {
    const HarmonicMap id(Z, K(0.0));
    const auto r0 = harmonic_preimages(id, 0.5);
    REQUIRE(r0.report.count == 1);
    CHECK(std::abs(r0.report.preimages[0] - 0.5) < 1e-10);

    const auto f = shear_koebe(0.0);
    for (Complex z0 : {Complex(0.3, 0.4), Complex(-0.6, 0.1), Complex(0.2, -0.7)}) {
        const auto r = harmonic_preimages(f, f(z0));
        REQUIRE(r.report.count == 1);
        CHECK(std::abs(r.report.preimages[0] - z0) < 1e-9);
    }

    // Analytic part exp(8z) with a small dilatation: three preimages of 1,
    // separated by at least pi sqrt(2/C) for the measured criterion level C.
    const HarmonicMap g(AnalyticExpr::unary(Op::Exp, K(8.0) * Z), K(0.3) * Z);
    double C = 0.0;
    for (Complex z : disk_samples(0.999, 200, 256)) C = std::max(C, lift_criterion_value(g, z));
    const auto r = harmonic_preimages(g, 1.0, {24, 0.95, false}, C);
    CHECK(r.report.count == 3);
    REQUIRE(r.separation_bound.has_value());
    CHECK(*r.separation_bound == doctest::Approx(kPi * std::sqrt(2.0 / C)));
    CHECK(r.separation_ok);
    CHECK(r.report.min_separation >= *r.separation_bound);
    for (Complex p : r.report.preimages) CHECK(std::abs(g(p) - 1.0) < 1e-9);
}
