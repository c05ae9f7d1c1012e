#include "schw/jet.hpp"

#include <algorithm>
#include <cmath>

#include "schw/errors.hpp"

namespace schw {

namespace {

constexpr double kPoleThreshold = 1e-300;

int common_order(const Jet& a, const Jet& b) { return std::min(a.order(), b.order()); }

bool on_branch_cut(Complex v) { return v.imag() == 0.0 && v.real() <= 0.0; }

} // namespace

Jet::Jet(int order, Complex base) : order_(order), base_(base) {
    if (order < 0 || order > kMaxJetOrder)
        throw DomainError("jet order must lie in [0, " + std::to_string(kMaxJetOrder) + "]");
}

Jet Jet::constant(Complex value, int order, Complex base) {
    Jet j(order, base);
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(Complex z, int order) {
    Jet j(order, z);
    j.c_[0] = z;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
}

Complex Jet::derivative(int n) const {
    double factorial = 1.0;
    for (int k = 2; k <= n; ++k) factorial *= k;
    return factorial * (*this)[n];
}

Jet Jet::differentiate() const {
    Jet d(std::max(order_ - 1, 0), base_);
    for (int k = 0; k < order_; ++k) d[k] = static_cast<double>(k + 1) * (*this)[k + 1];
    return d;
}

bool Jet::all_finite() const {
    for (Complex c : coeffs())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

Jet& Jet::operator+=(const Jet& o) {
    order_ = common_order(*this, o);
    for (int k = 0; k <= order_; ++k) (*this)[k] += o[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    order_ = common_order(*this, o);
    for (int k = 0; k <= order_; ++k) (*this)[k] -= o[k];
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator-(const Jet& a) {
    Jet r(a.order(), a.base_point());
    for (int k = 0; k <= a.order(); ++k) r[k] = -a[k];
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    const int n = common_order(a, b);
    Jet r(n, a.base_point());
    for (int k = 0; k <= n; ++k) {
        Complex s = 0.0;
        for (int i = 0; i <= k; ++i) s += a[i] * b[k - i];
        r[k] = s;
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    if (std::abs(b[0]) < kPoleThreshold)
        throw PoleError("division by a vanishing jet (pole)");
    const int n = common_order(a, b);
    Jet q(n, a.base_point());
    for (int k = 0; k <= n; ++k) {
        Complex s = a[k];
        for (int i = 0; i < k; ++i) s -= q[i] * b[k - i];
        q[k] = s / b[0];
    }
    return q;
}

Jet operator+(Jet a, Complex s) {
    a[0] += s;
    return a;
}

Jet operator+(Complex s, Jet a) { return std::move(a) + s; }

Jet operator*(Jet a, Complex s) {
    for (int k = 0; k <= a.order(); ++k) a[k] *= s;
    return a;
}

Jet operator*(Complex s, Jet a) { return std::move(a) * s; }

Jet operator-(Complex s, const Jet& a) { return -a + s; }

Jet pow(const Jet& a, int n) {
    if (n < 0) return Jet::constant(1.0, a.order(), a.base_point()) / pow(a, -n);
    Jet result = Jet::constant(1.0, a.order(), a.base_point());
    Jet base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

Jet exp(const Jet& a) {
    Jet e(a.order(), a.base_point());
    e[0] = std::exp(a[0]);
    for (int k = 1; k <= a.order(); ++k) {
        Complex s = 0.0;
        for (int j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * e[k - j];
        e[k] = s / static_cast<double>(k);
    }
    return e;
}

Jet log(const Jet& a) {
    if (on_branch_cut(a[0])) throw BranchError("log evaluated on the branch cut (nonpositive real)");
    Jet l(a.order(), a.base_point());
    l[0] = std::log(a[0]);
    for (int k = 1; k <= a.order(); ++k) {
        Complex s = 0.0;
        for (int j = 1; j < k; ++j) s += static_cast<double>(j) * l[j] * a[k - j];
        l[k] = (a[k] - s / static_cast<double>(k)) / a[0];
    }
    return l;
}

namespace {

void sincos(const Jet& a, Jet& s, Jet& c) {
    s = Jet(a.order(), a.base_point());
    c = Jet(a.order(), a.base_point());
    s[0] = std::sin(a[0]);
    c[0] = std::cos(a[0]);
    for (int k = 1; k <= a.order(); ++k) {
        Complex ss = 0.0, cc = 0.0;
        for (int j = 1; j <= k; ++j) {
            ss += static_cast<double>(j) * a[j] * c[k - j];
            cc += static_cast<double>(j) * a[j] * s[k - j];
        }
        s[k] = ss / static_cast<double>(k);
        c[k] = -cc / static_cast<double>(k);
    }
}

} // namespace

Jet sin(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return s;
}

Jet cos(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return c;
}

Jet tan(const Jet& a) {
    const int n = a.order();
    Jet t(n, a.base_point());
    Jet w(n, a.base_point());  // 1 + t^2
    t[0] = std::tan(a[0]);
    if (!std::isfinite(t[0].real()) || !std::isfinite(t[0].imag()))
        throw PoleError("tan evaluated at a pole");
    w[0] = 1.0 + t[0] * t[0];
    for (int k = 1; k <= n; ++k) {
        Complex s = 0.0;
        for (int j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * w[k - j];
        t[k] = s / static_cast<double>(k);
        Complex sq = 0.0;
        for (int i = 0; i <= k; ++i) sq += t[i] * t[k - i];
        w[k] = sq;
    }
    return t;
}

Jet sqrt(const Jet& a) {
    if (on_branch_cut(a[0])) throw BranchError("sqrt evaluated on the branch cut (nonpositive real)");
    Jet s(a.order(), a.base_point());
    s[0] = std::sqrt(a[0]);
    for (int k = 1; k <= a.order(); ++k) {
        Complex acc = a[k];
        for (int i = 1; i < k; ++i) acc -= s[i] * s[k - i];
        s[k] = acc / (2.0 * s[0]);
    }
    return s;
}

Jet compose(const Jet& outer, const Jet& inner) {
    const int n = std::min(outer.order(), inner.order());
    Jet shift = inner;
    shift[0] = 0.0;
    // Horner in the shifted inner series.
    Jet acc = Jet::constant(outer[n], n, inner.base_point());
    for (int k = n - 1; k >= 0; --k) acc = acc * shift + outer[k];
    Jet r(n, inner.base_point());
    for (int k = 0; k <= n; ++k) r[k] = acc[k];
    return r;
}

} // namespace schw
