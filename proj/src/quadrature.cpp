#include "schw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "schw/errors.hpp"

namespace schw {

namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    double abs_tol;
    int max_depth;
    int evaluations = 0;
    double error = 0.0;
    bool failed = false;
};

double simpson_step(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    st.evaluations += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth >= st.max_depth) {
        if (depth >= st.max_depth && std::abs(delta) > 15.0 * tol) st.failed = true;
        st.error += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

} // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, double abs_tol, int max_depth) {
    SimpsonState st{f, abs_tol, max_depth};
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    st.evaluations = 3;
    const double coarse = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    // A first pass estimates the magnitude so the tolerance can be relative.
    SimpsonState probe{f, abs_tol, 12};
    const double rough = simpson_step(probe, a, b, fa, fm, fb, coarse, std::abs(coarse) * 1e-3, 0);
    const double tol = std::max(rel_tol * std::abs(rough), abs_tol);

    const double value = simpson_step(st, a, b, fa, fm, fb, coarse, tol, 0);
    if (st.failed || !std::isfinite(value))
        throw NumericalError("adaptive Simpson quadrature did not converge");
    return {value, st.error, st.evaluations + probe.evaluations};
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi;
    std::complex<double> value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<std::complex<double>(std::complex<double>)>& f,
           std::complex<double> a, std::complex<double> dir, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const std::complex<double> fc = f(a + dir * center);
    std::complex<double> kron = fc * kWgk[7];
    std::complex<double> gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const std::complex<double> sum = f(a + dir * (center - dx)) + f(a + dir * (center + dx));
        kron += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    // Integral over the real parameter t in [lo, hi] of f(a + dir t) dir.
    kron *= half * dir;
    gauss *= half * dir;
    return {lo, hi, kron, std::abs(kron - gauss)};
}

} // namespace

ComplexQuadratureResult line_integral(
    const std::function<std::complex<double>(std::complex<double>)>& f, std::complex<double> a,
    std::complex<double> b, double rel_tol, double abs_tol, int max_intervals) {
    if (a == b) return {{0.0, 0.0}, 0.0, 0};
    const std::complex<double> dir = b - a;
    std::priority_queue<Panel> panels;
    Panel first = gk15(f, a, dir, 0.0, 1.0);
    std::complex<double> total = first.value;
    double error = first.error;
    panels.push(first);
    int evaluations = 15;
    while (error > std::max(rel_tol * std::abs(total), abs_tol)) {
        if (static_cast<int>(panels.size()) >= max_intervals)
            throw NumericalError("segment quadrature exceeded its interval budget");
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        Panel l = gk15(f, a, dir, worst.lo, mid);
        Panel r = gk15(f, a, dir, mid, worst.hi);
        evaluations += 30;
        total += l.value + r.value - worst.value;
        error += l.error + r.error - worst.error;
        panels.push(l);
        panels.push(r);
        // Guard against error drift from repeated subtraction.
        if (panels.size() % 64 == 0) {
            auto copy = panels;
            double e = 0.0;
            std::complex<double> t = 0.0;
            while (!copy.empty()) {
                e += copy.top().error;
                t += copy.top().value;
                copy.pop();
            }
            error = e;
            total = t;
        }
    }
    if (!std::isfinite(total.real()) || !std::isfinite(total.imag()))
        throw NumericalError("segment quadrature produced a nonfinite value");
    return {total, error, evaluations};
}

} // namespace schw
