#include "schw/valence.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <optional>
#include <string>

#include "schw/disk.hpp"
#include "schw/errors.hpp"
#include "schw/parallel.hpp"
#include "schw/quadrature.hpp"

namespace schw {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi2 = kPi * kPi / 2.0;

void require_const_range(double C) {
    if (!std::isfinite(C) || C < kHalfPi2 * (1.0 - 1e-9))
        throw DomainError("constant context needs C >= pi^2/2");
}

void require_pokornyi_range(double C) {
    if (!std::isfinite(C) || !(C > 2.0)) throw DomainError("Pokornyi context needs C > 2");
    if (C > 1e8) throw DomainError("C above 1e8 is outside the supported range");
}

double min_pairwise(const std::vector<Complex>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, std::abs(pts[i] - pts[j]));
    return best;
}

struct Winding {
    Complex value;
    double min_root_distance;
};

Winding winding_number(const AnalyticExpr& f, Complex w, double r, int nodes) {
    std::vector<Complex> terms(static_cast<std::size_t>(nodes));
    std::vector<double> dist(static_cast<std::size_t>(nodes));
    parallel_for(terms.size(), [&](std::size_t j) {
        const Complex z = std::polar(r, 2.0 * kPi * static_cast<double>(j) / nodes);
        const Jet jet = eval_jet(f, z, 1);
        const Complex g = jet[0] - w;
        terms[j] = jet[1] * z / g;
        dist[j] = std::abs(g) / std::abs(jet[1]);
    });
    Complex sum = 0.0;
    for (Complex t : terms) sum += t;
    return {sum / static_cast<double>(nodes), *std::min_element(dist.begin(), dist.end())};
}

bool add_unique(std::vector<Complex>& pts, Complex z) {
    for (Complex p : pts)
        if (std::abs(p - z) < 1e-9) return false;
    pts.push_back(z);
    return true;
}

// Newton for f = w (sign = -1) or for a pole of f (sign = +1, i.e. Newton on 1/(f - w)).
std::optional<Complex> newton(const AnalyticExpr& f, Complex w, Complex z, double limit, double sign) {
    for (int it = 0; it < 80; ++it) {
        Jet jet;
        try {
            jet = eval_jet(f, z, 1);
        } catch (const PoleError&) {
            if (sign > 0) return z;
            return std::nullopt;
        } catch (const Error&) {
            return std::nullopt;
        }
        const Complex g = jet[0] - w;
        if (jet[1] == 0.0) return std::nullopt;
        const Complex step = sign * g / jet[1];
        z += step;
        if (!std::isfinite(std::abs(z)) || std::abs(z) > limit) return std::nullopt;
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(z))) return z;
    }
    return z;
}

} // namespace

BoundConfig::BoundConfig(double c, BoundContext ctx) : C(c), context(ctx) {
    if (ctx == BoundContext::constant)
        require_const_range(c);
    else
        require_pokornyi_range(c);
}

double BoundConfig::epsilon() const { return kPi / (2.0 * std::sqrt(C)); }

double separation_bound(double C) {
    if (!(C > 0.0) || !std::isfinite(C)) throw DomainError("separation_bound needs C > 0");
    return kPi * std::sqrt(2.0 / C);
}

double valence_bound_const(double C) {
    require_const_range(C);
    const double t = 1.0 + std::sqrt(2.0 * C) / kPi;
    return t * t;
}

int valence_cap(double C) {
    const double v = valence_bound_const(C);
    return static_cast<int>(std::floor(v + 1e-9 * v));
}

ValenceReport tan_zero_census(double C) {
    require_const_range(C);
    const double s = separation_bound(C);
    const int k_max = static_cast<int>(std::ceil(1.0 / s - 1e-9)) - 1;
    ValenceReport rep;
    rep.w = 0.0;
    rep.radius = 1.0;
    for (int k = -k_max; k <= k_max; ++k) rep.preimages.emplace_back(k * s, 0.0);
    rep.count = static_cast<int>(rep.preimages.size());
    rep.min_separation = rep.count >= 2 ? s : std::numeric_limits<double>::infinity();
    const double lower = std::sqrt(2.0 * C) / kPi - 1.0;
    if (rep.count < lower || rep.count > valence_bound_const(C) * (1.0 + 1e-9))
        throw NumericalError("tan census count outside its envelope");
    return rep;
}

ValenceReport count_valence(const AnalyticExpr& f, Complex w, double r, int nodes) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("contour radius must be positive");
    if (nodes < 8) throw DomainError("need at least 8 contour nodes");

    ValenceReport rep;
    rep.w = w;
    rep.radius = r;
    int n = nodes;
    Winding wind{};
    for (;;) {
        wind = winding_number(f, w, r, n);
        if (wind.min_root_distance < 1e-6)
            throw DomainError("a solution or pole lies within 1e-6 of the contour; perturb the radius");
        const double residual = std::abs(wind.value - std::round(wind.value.real()));
        if (residual < 0.01) break;
        if (n >= (1 << 22)) throw NumericalError("winding integral did not approach an integer");
        n *= 2;
    }
    rep.nodes = n;
    rep.winding = wind.value.real();
    rep.winding_residual = std::abs(wind.value - std::round(wind.value.real()));
    const long expected = std::lround(rep.winding);

    for (int grid = 16; grid <= 256; grid *= 2) {
        std::vector<Complex> zeros, poles;
        const double h = 2.0 * r / (grid - 1);
        for (int i = 0; i < grid; ++i) {
            for (int j = 0; j < grid; ++j) {
                const Complex seed(-r + i * h, -r + j * h);
                if (std::abs(seed) >= r) continue;
                if (auto z = newton(f, w, seed, 1.5 * r + 1.0, -1.0)) {
                    if (std::abs(*z) < r) {
                        try {
                            if (std::abs(evaluate(f, *z) - w) < 1e-8) add_unique(zeros, *z);
                        } catch (const Error&) {
                        }
                    }
                }
                if (auto p = newton(f, w, seed, 1.5 * r + 1.0, 1.0)) {
                    if (std::abs(*p) < r) {
                        bool is_pole = false;
                        try {
                            is_pole = std::abs(evaluate(f, *p) - w) > 1e8;
                        } catch (const PoleError&) {
                            is_pole = true;
                        } catch (const Error&) {
                        }
                        if (is_pole) add_unique(poles, *p);
                    }
                }
            }
        }
        if (static_cast<long>(zeros.size()) - static_cast<long>(poles.size()) == expected) {
            for (Complex z : zeros)
                if (std::abs(std::abs(z) - r) < 1e-6)
                    throw DomainError("a solution lies within 1e-6 of the contour; perturb the radius");
            auto lex = [](Complex a, Complex b) {
                return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
            };
            std::sort(zeros.begin(), zeros.end(), lex);
            std::sort(poles.begin(), poles.end(), lex);
            rep.count = static_cast<int>(zeros.size());
            rep.min_separation = min_pairwise(zeros);
            rep.preimages = std::move(zeros);
            rep.poles = std::move(poles);
            return rep;
        }
    }
    throw NumericalError("located solutions and poles do not match the winding number " +
                         std::to_string(expected));
}

PackingResult packing_check(const ValenceReport& report, double C) {
    PackingResult res;
    res.count = report.count;
    res.min_separation = report.min_separation;
    res.separation_bound = separation_bound(C);
    res.valence_bound = valence_bound_const(C);
    res.vacuous_separation = report.count < 2;
    const bool separated = res.vacuous_separation || report.min_separation >= res.separation_bound - 1e-9;
    res.pass = separated && report.count <= res.valence_bound * (1.0 + 1e-9);
    return res;
}

int lemma2_bound(double d) {
    if (!(d > 0.0 && d <= 1.0)) throw DomainError("lemma2_bound needs 0 < d <= 1");
    return static_cast<int>(std::floor(2.0 * kPi / d));
}

RadiusStep next_radius(double a, double eps) {
    if (!(a >= 0.0 && a < 1.0)) throw DomainError("next_radius needs 0 <= a < 1");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("next_radius needs eps > 0");
    // x - a written without cancellation: eps (1 - a^2) / (sqrt(1 - a^2 + eps^2) + eps a).
    const double d = eps * (1.0 - a * a) / (std::sqrt(1.0 - a * a + eps * eps) + eps * a);
    return {a + d, d};
}

double phi(double a, double eps) {
    if (!(a >= 0.0 && a < 1.0)) throw DomainError("phi needs 0 <= a < 1");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("phi needs eps > 0");
    return (std::sqrt(1.0 - a * a + eps * eps) + eps * a) / (eps * (1.0 - a * a));
}

namespace {

double split_simpson(const std::function<double(double)>& g, double R) {
    const double split = R - (1.0 - R) / 2.0;
    return adaptive_simpson(g, 0.0, split, 1e-8).value + adaptive_simpson(g, split, R, 1e-8).value;
}

} // namespace

BoundBreakdown theorem2_breakdown(double C) {
    require_pokornyi_range(C);
    BoundBreakdown b;
    b.C = C;
    b.epsilon = kPi / (2.0 * std::sqrt(C));
    b.r0 = kPi / std::sqrt(kPi * kPi + 4.0 * C);
    b.R = std::sqrt(1.0 - 1.0 / (4.0 * C));
    b.R1 = std::sqrt(1.0 - 1.0 / (2.0 * C));

    b.radii.push_back(b.r0);
    for (;;) {
        const RadiusStep step = next_radius(b.radii.back(), b.epsilon);
        if (!(step.d > 1e-12)) throw NumericalError("radius recurrence stagnated");
        if (step.x > b.R) break;
        b.radii.push_back(step.x);
        b.gaps.push_back(step.d);
        b.annulus_counts.push_back(lemma2_bound(step.d));
        b.inner_sum += b.annulus_counts.back();
    }
    b.m = static_cast<int>(b.gaps.size());

    if (b.radii.back() < b.R) {
        // p(R) = 2/(1 - R^2) with 1 - R^2 = 1/(4C) exactly.
        const double pR = 8.0 * C;
        const double g = 2.0 * std::sqrt(2.0 * C * pR);
        b.gap_annulus_count = static_cast<std::int64_t>(std::ceil(g - 1e-12 * g));
    }
    const RectangleCount rc = rectangle_count(C);
    b.rectangle_count = rc.count;
    b.rectangle_fallback = rc.fallback;
    b.total = b.inner_unit + b.inner_sum + b.gap_annulus_count + b.rectangle_count;

    const double eps = b.epsilon;
    const double integral = split_simpson(
        [eps](double x) {
            const double p = phi(x, eps);
            return p * p;
        },
        b.R);
    b.envelope = 1.0 + 2.0 * kPi * integral;
    b.envelope_ok = 1.0 + static_cast<double>(b.inner_sum) <= 1.01 * b.envelope;
    b.total_over_ClogC = static_cast<double>(b.total) / (C * std::log(C));
    return b;
}

IntegralEstimates integral_estimates(double C) {
    require_pokornyi_range(C);
    const double eps = kPi / (2.0 * std::sqrt(C));
    const double R = std::sqrt(1.0 - 1.0 / (4.0 * C));
    IntegralEstimates est;
    est.I1 = split_simpson([](double x) { return 1.0 / (1.0 - x * x); }, R) / (eps * eps);
    est.I2 = split_simpson(
        [](double x) {
            const double w = 1.0 - x * x;
            return (1.0 + x * x) / (w * w);
        },
        R);
    est.I3 = split_simpson(
                 [eps](double x) {
                     const double w = 1.0 - x * x;
                     return x * std::sqrt(1.0 + eps * eps - x * x) / (w * w);
                 },
                 R) *
             2.0 / eps;
    est.I1_bound = 2.0 * C / (kPi * kPi) * std::log(16.0 * C);
    est.I1_within_bound = est.I1 <= est.I1_bound + 1e-6;
    est.I2_within_bound = est.I2 <= 2.0 / (1.0 - R * R);
    return est;
}

std::vector<BoundBreakdown> theorem2_sweep(const std::vector<double>& Cs) {
    std::vector<BoundBreakdown> rows(Cs.size());
    std::vector<std::string> errors(Cs.size());
    parallel_for(Cs.size(), [&](std::size_t i) {
        try {
            rows[i] = theorem2_breakdown(Cs[i]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < Cs.size(); ++i)
        if (!errors[i].empty()) throw DomainError("sweep at C=" + std::to_string(Cs[i]) + ": " + errors[i]);
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.C < b.C; });
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<BoundBreakdown>& rows) {
    const auto old_flags = out.flags();
    const auto old_prec = out.precision();
    out << "C,r0,m,R,R1,inner_sum,gap_count,rect_count,total,total_over_ClogC\n";
    out << std::setprecision(17);
    for (const auto& b : rows) {
        out << b.C << ',' << b.r0 << ',' << b.m << ',' << b.R << ',' << b.R1 << ',' << b.inner_sum << ','
            << b.gap_annulus_count << ',' << b.rectangle_count << ',' << b.total << ',' << b.total_over_ClogC << '\n';
    }
    out.flags(old_flags);
    out.precision(old_prec);
}

} // namespace schw
