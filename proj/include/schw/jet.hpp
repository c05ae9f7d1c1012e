#pragma once

#include <array>
#include <complex>
#include <span>

namespace schw {

using Complex = std::complex<double>;

inline constexpr int kMaxJetOrder = 6;

// Truncated Taylor expansion c_0 + c_1 t + ... + c_n t^n of an analytic
// function about base_point(). f^(k)(base) = k! c_k.
class Jet {
public:
    explicit Jet(int order = 0, Complex base = {});

    static Jet constant(Complex value, int order, Complex base = {});
    /// The identity function z about `z`: (z, 1, 0, ...).
    static Jet variable(Complex z, int order);

    int order() const noexcept { return order_; }
    Complex base_point() const noexcept { return base_; }

    Complex operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
    Complex& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

    std::span<const Complex> coeffs() const {
        return {c_.data(), static_cast<std::size_t>(order_ + 1)};
    }

    Complex value() const { return c_[0]; }
    /// n-th derivative at the base point.
    Complex derivative(int n) const;

    /// Jet of the derivative, one order lower.
    Jet differentiate() const;

    bool all_finite() const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);

private:
    int order_;
    Complex base_;
    std::array<Complex, kMaxJetOrder + 1> c_{};
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
/// Throws PoleError when |b_0| < 1e-300.
Jet operator/(const Jet& a, const Jet& b);

Jet operator+(Jet a, Complex s);
Jet operator*(Jet a, Complex s);
Jet operator+(Complex s, Jet a);
Jet operator*(Complex s, Jet a);
Jet operator-(Complex s, const Jet& a);

Jet pow(const Jet& a, int n);
Jet exp(const Jet& a);
/// Principal branch; BranchError on the nonpositive real axis.
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
/// Uses tan' = 1 + tan^2.
Jet tan(const Jet& a);
/// Principal branch; BranchError on the nonpositive real axis.
Jet sqrt(const Jet& a);

/// Series composition: `outer` expanded about inner[0], `inner` about z0.
/// Result is the jet of outer(inner(.)) about z0, truncated to the lower order.
Jet compose(const Jet& outer, const Jet& inner);

} // namespace schw
