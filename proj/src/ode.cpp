#include "schw/ode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "schw/errors.hpp"
#include "schw/parallel.hpp"
#include "schw/polynomial.hpp"

namespace schw {

namespace {

constexpr double kDiskLimit = 1.0 - 1e-9;
constexpr double kEndStandoff = 1e-6;

struct Rk4Run {
    std::vector<Complex> u, du;
};

// a[k] holds psi(z(s)) z'(s)^2 at s = k * (b / (4 * steps)); a run with
// `stride` 2 uses the requested step, stride 1 the half step.
Rk4Run rk4_run(const std::vector<Complex>& a, int steps, int stride, double h, Complex u0, Complex du0) {
    Rk4Run run;
    run.u.reserve(static_cast<std::size_t>(steps) + 1);
    run.du.reserve(static_cast<std::size_t>(steps) + 1);
    Complex u = u0, w = du0;
    run.u.push_back(u);
    run.du.push_back(w);
    for (int i = 0; i < steps; ++i) {
        const auto k = static_cast<std::size_t>(2 * stride * i);
        const Complex a0 = a[k], am = a[k + static_cast<std::size_t>(stride)],
                      a1 = a[k + 2 * static_cast<std::size_t>(stride)];
        const Complex k1u = w, k1w = -a0 * u;
        const Complex k2u = w + 0.5 * h * k1w, k2w = -am * (u + 0.5 * h * k1u);
        const Complex k3u = w + 0.5 * h * k2w, k3w = -am * (u + 0.5 * h * k2u);
        const Complex k4u = w + h * k3w, k4w = -a1 * (u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        if (!std::isfinite(std::abs(u)) || !std::isfinite(std::abs(w)))
            throw NumericalError("segment integration overflowed");
        run.u.push_back(u);
        run.du.push_back(w);
    }
    return run;
}

Complex hermite(const SegmentSolution& sol, std::size_t i, double s) {
    const double h = sol.s[i + 1] - sol.s[i];
    const double t = (s - sol.s[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * sol.u[i] + (t3 - 2 * t2 + t) * h * sol.du[i] + (-2 * t3 + 3 * t2) * sol.u[i + 1] +
           (t3 - t2) * h * sol.du[i + 1];
}

Complex interpolate(const SegmentSolution& sol, double s) {
    const std::size_t n = sol.s.size() - 1;
    auto i = static_cast<std::size_t>(std::clamp(std::floor(s / sol.step()), 0.0, static_cast<double>(n - 1)));
    return hermite(sol, i, s);
}

// Minimises g on [a, b] by golden section; returns the abscissa.
template <class G>
double golden_min(G&& g, double a, double b, int iterations = 80) {
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
    double gc = g(c), gd = g(d);
    for (int it = 0; it < iterations; ++it) {
        if (gc <= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - kInvPhi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + kInvPhi * (b - a);
            gd = g(d);
        }
    }
    return gc <= gd ? c : d;
}

double bisect_root(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

struct TwoSided {
    RealSolution left, right;
};

TwoSided integrate_both_ways(const std::function<double(double)>& p, double x0, double u0, double du0) {
    return {integrate_real(p, x0, u0, du0, -1.0 + kEndStandoff), integrate_real(p, x0, u0, du0, 1.0 - kEndStandoff)};
}

int zero_count(const TwoSided& both, double u0) {
    return both.left.sign_changes() + both.right.sign_changes() + (u0 == 0.0 ? 1 : 0);
}

} // namespace

SegmentPath::SegmentPath(Complex start, Complex end) : start_(start), end_(end) {
    if (std::abs(start) > kDiskLimit || std::abs(end) > kDiskLimit)
        throw DomainError("segment endpoints must satisfy |z| <= 1 - 1e-9");
    length_ = std::abs(end - start);
    if (!(length_ > 0.0)) throw DomainError("segment endpoints coincide");
    direction_ = (end - start) / length_;
}

std::vector<double> SegmentSolution::modulus() const {
    std::vector<double> v(u.size());
    std::transform(u.begin(), u.end(), v.begin(), [](Complex c) { return std::abs(c); });
    return v;
}

SegmentSolution integrate_segment(const ComplexField& psi, const SegmentPath& path, Complex u0, Complex du0,
                                  int steps) {
    if (steps < 100) throw DomainError("integrate_segment needs at least 100 steps");
    const double b = path.length();
    const Complex e2 = path.direction() * path.direction();
    const int quarter = 4 * steps;
    std::vector<Complex> a(static_cast<std::size_t>(quarter) + 1);
    for (int k = 0; k <= quarter; ++k) {
        const double s = b * k / quarter;
        a[static_cast<std::size_t>(k)] = psi(path.at(s)) * e2;
    }
    const double h = b / steps;
    Rk4Run coarse = rk4_run(a, steps, 2, h, u0, du0);
    const Rk4Run fine = rk4_run(a, 2 * steps, 1, 0.5 * h, u0, du0);

    double diff = 0.0, umax = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const auto ci = static_cast<std::size_t>(i);
        diff = std::max(diff, std::abs(coarse.u[ci] - fine.u[2 * ci]));
        umax = std::max(umax, std::abs(coarse.u[ci]));
    }
    const double err = diff * 16.0 / 15.0;
    if (err > 1e-6 * std::max(1.0, umax))
        throw NumericalError("integrate_segment: step count too small (Richardson error " + std::to_string(err) + ")");

    SegmentSolution sol{path, {}, std::move(coarse.u), std::move(coarse.du), err};
    sol.s.resize(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) sol.s[static_cast<std::size_t>(i)] = b * i / steps;
    return sol;
}

SegmentSolution integrate_segment(const AnalyticExpr& psi, const SegmentPath& path, Complex u0, Complex du0,
                                  int steps) {
    return integrate_segment([&psi](Complex z) { return evaluate(psi, z); }, path, u0, du0, steps);
}

Lemma1Report lemma1_residual(const SegmentSolution& sol, const ComplexField& psi) {
    constexpr double kDelta = 1e-8;
    const std::vector<double> v = sol.modulus();
    const std::size_t n = v.size() - 1;
    if (n < 2) throw DomainError("solution has too few samples");

    // Longest run of interior samples with v > delta.
    std::size_t best_lo = 0, best_len = 0;
    for (std::size_t i = 1; i < n;) {
        if (v[i] <= kDelta) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && v[j] > kDelta) ++j;
        if (j - i > best_len) {
            best_lo = i;
            best_len = j - i;
        }
        i = j;
    }
    if (best_len < 3) throw DomainError("v = |u| vanishes on the interior; no range left to test");

    Lemma1Report rep;
    rep.shrunk = best_len != n - 1;
    rep.s_lo = sol.s[best_lo];
    rep.s_hi = sol.s[best_lo + best_len - 1];
    rep.min_residual = std::numeric_limits<double>::infinity();
    const double h = sol.step();
    for (std::size_t i = best_lo; i < best_lo + best_len; ++i) {
        const double vpp = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        const double pv = std::abs(psi(sol.path.at(sol.s[i]))) * v[i];
        rep.min_residual = std::min(rep.min_residual, vpp + pv);
        rep.scale = std::max(rep.scale, std::abs(vpp) + pv);
        ++rep.tested;
    }
    rep.pass = rep.min_residual >= -1e-6 * rep.scale;
    return rep;
}

Lemma1Report lemma1_residual(const SegmentSolution& sol, const AnalyticExpr& psi) {
    return lemma1_residual(sol, [&psi](Complex z) { return evaluate(psi, z); });
}

ZeroRecord make_zero_record(std::vector<double> zeros) {
    std::sort(zeros.begin(), zeros.end());
    ZeroRecord rec;
    rec.count = static_cast<int>(zeros.size());
    for (std::size_t i = 1; i < zeros.size(); ++i) rec.min_gap = std::min(rec.min_gap, zeros[i] - zeros[i - 1]);
    rec.zeros = std::move(zeros);
    return rec;
}

ZeroRecord find_zeros(const SegmentSolution& sol) {
    const std::vector<double> v = sol.modulus();
    const std::size_t n = v.size() - 1;
    const double umax = *std::max_element(v.begin(), v.end());
    const double threshold = 1e-8 * umax;
    std::vector<double> zeros;
    if (umax == 0.0) throw DomainError("trivial solution has no isolated zeros");
    for (std::size_t i = 0; i <= n; ++i) {
        const bool left_ok = i == 0 || v[i] < v[i - 1];
        const bool right_ok = i == n || v[i] <= v[i + 1];
        if (!left_ok || !right_ok) continue;
        const double a = sol.s[i == 0 ? 0 : i - 1];
        const double b = sol.s[i == n ? n : i + 1];
        const double s = golden_min([&](double t) { return std::abs(interpolate(sol, t)); }, a, b);
        const double at_grid = v[i];
        const double refined = std::abs(interpolate(sol, s));
        const double best_s = refined < at_grid ? s : sol.s[i];
        if (std::min(refined, at_grid) < threshold) {
            if (zeros.empty() || best_s - zeros.back() > 0.5 * sol.step()) zeros.push_back(best_s);
        }
    }
    return make_zero_record(std::move(zeros));
}

SeparationResult zero_separation_check(double C, const ZeroRecord& record) {
    if (!(C > 0.0)) throw DomainError("C must be positive");
    SeparationResult res;
    res.bound = std::numbers::pi * std::sqrt(2.0 / C);
    res.min_gap = record.min_gap;
    res.vacuous = record.count < 2;
    res.pass = res.vacuous || record.min_gap >= res.bound - 1e-9;
    return res;
}

ZeroRecord legendre_lower_bound(int n) {
    if (n < 1 || n > 30) throw DomainError("legendre_lower_bound needs 1 <= n <= 30");
    const auto f = [n](double x) { return legendre_derivative(n, x); };
    const int m = 200 * n * n + 2;
    std::vector<double> roots;
    double prev_x = -1.0, prev_f = f(-1.0);
    bool root_since_prev = false;
    for (int k = 1; k <= m; ++k) {
        const double x = -1.0 + 2.0 * k / m;
        const double fx = f(x);
        if (fx == 0.0) {
            roots.push_back(x);
            root_since_prev = true;
            continue;
        }
        if ((fx < 0) != (prev_f < 0) && !root_since_prev) roots.push_back(bisect_root(f, prev_x, x));
        prev_x = x;
        prev_f = fx;
        root_since_prev = false;
    }
    if (static_cast<int>(roots.size()) != n - 1)
        throw NumericalError("legendre_lower_bound: isolated " + std::to_string(roots.size()) + " roots, expected " +
                             std::to_string(n - 1));
    const int ode = legendre_ode_sign_changes(n);
    if (ode < n - 1)
        throw NumericalError("legendre_lower_bound: ODE cross-check found only " + std::to_string(ode) +
                             " sign changes");
    return make_zero_record(std::move(roots));
}

int legendre_ode_sign_changes(int n) {
    if (n < 1 || n > 30) throw DomainError("legendre_ode_sign_changes needs 1 <= n <= 30");
    const double c = n * (n + 1.0);
    const auto p = [c](double x) { return c / (1.0 - x * x); };
    return integrate_real(p, -1.0 + kEndStandoff, 0.0, 1.0, 1.0 - kEndStandoff).sign_changes();
}

int RealSolution::sign_changes() const {
    int changes = 0, last = 0;
    for (double value : u) {
        const int sign = (value > 0) - (value < 0);
        if (sign == 0) continue;
        if (last != 0 && sign != last) ++changes;
        last = sign;
    }
    return changes;
}

RealSolution integrate_real(const std::function<double(double)>& p, double x0, double u0, double du0,
                            double x_end) {
    if (!(std::abs(x0) < 1.0 && std::abs(x_end) < 1.0)) throw DomainError("integrate_real works inside (-1, 1)");
    constexpr double kMaxStep = 1e-3, kEndFraction = 0.01;
    RealSolution sol;
    double x = x0, u = u0, w = du0;
    sol.x.push_back(x);
    sol.u.push_back(u);
    sol.du.push_back(w);
    const double dir = x_end >= x0 ? 1.0 : -1.0;
    while (dir * (x_end - x) > 0.0) {
        const double dist = 1.0 - std::abs(x);
        double h = std::min(kMaxStep, kEndFraction * dist);
        h = std::min(h, dir * (x_end - x));
        const double hs = dir * h;
        const double p0 = p(x), pm = p(x + 0.5 * hs), p1 = p(x + hs);
        const double k1u = w, k1w = -p0 * u;
        const double k2u = w + 0.5 * hs * k1w, k2w = -pm * (u + 0.5 * hs * k1u);
        const double k3u = w + 0.5 * hs * k2w, k3w = -pm * (u + 0.5 * hs * k2u);
        const double k4u = w + hs * k3w, k4w = -p1 * (u + hs * k3u);
        u += hs / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        w += hs / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        x = (dir * (x_end - x) <= h) ? x_end : x + hs;
        if (!std::isfinite(u) || !std::isfinite(w) || std::abs(u) > 1e200) {
            sol.blew_up = true;
            break;
        }
        sol.x.push_back(x);
        sol.u.push_back(u);
        sol.du.push_back(w);
    }
    return sol;
}

int solution_zero_count(const NehariProfile& profile, double x0, double u0, double du0) {
    if (u0 == 0.0 && du0 == 0.0) throw DomainError("zero initial data gives the trivial solution");
    if (!(std::abs(x0) < 1.0 - kEndStandoff)) throw DomainError("base point must lie in (-1+1e-6, 1-1e-6)");
    const auto both = integrate_both_ways([&profile](double x) { return profile(std::abs(x)); }, x0, u0, du0);
    if (both.left.blew_up || both.right.blew_up) throw NumericalError("integration blew up before the endpoint");
    return zero_count(both, u0);
}

DisconjugacyReport disconjugacy_check(const NehariProfile& profile, int trials, std::uint64_t seed) {
    if (trials < 1) throw DomainError("need at least one trial");
    struct Trial {
        double x0, u0, du0;
        int zeros = 0;
        double lo = -1.0, hi = 1.0;
        bool blew_up = false;
    };
    std::vector<Trial> runs(static_cast<std::size_t>(trials));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> base(-1.0 + kEndStandoff, 1.0 - kEndStandoff);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (auto& t : runs) {
        t.x0 = base(rng);
        const double th = angle(rng);
        t.u0 = std::cos(th);
        t.du0 = std::sin(th);
    }
    const auto p = [&profile](double x) { return profile(std::abs(x)); };
    parallel_for(runs.size(), [&](std::size_t i) {
        Trial& t = runs[i];
        const TwoSided both = integrate_both_ways(p, t.x0, t.u0, t.du0);
        t.zeros = zero_count(both, t.u0);
        t.lo = both.left.x.back();
        t.hi = both.right.x.back();
        t.blew_up = both.left.blew_up || both.right.blew_up;
    });

    DisconjugacyReport rep;
    rep.trials = trials;
    rep.max_zero_count = -1;
    rep.reached_lo = -1.0 + kEndStandoff;
    rep.reached_hi = 1.0 - kEndStandoff;
    for (const Trial& t : runs) {
        if (t.zeros > rep.max_zero_count) {
            rep.max_zero_count = t.zeros;
            rep.worst_base_point = t.x0;
            rep.worst_u0 = t.u0;
            rep.worst_du0 = t.du0;
        }
        if (t.blew_up) {
            rep.blew_up = true;
            rep.reached_lo = std::max(rep.reached_lo, t.lo);
            rep.reached_hi = std::min(rep.reached_hi, t.hi);
        }
    }
    rep.pass = !rep.blew_up && rep.max_zero_count <= 1;
    return rep;
}

} // namespace schw
