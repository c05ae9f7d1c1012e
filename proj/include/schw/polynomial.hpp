#pragma once

#include <initializer_list>
#include <vector>

namespace schw {

/// Real polynomial, coefficients in ascending degree. Trailing zeros are
/// trimmed so the leading coefficient is nonzero (the zero polynomial has
/// no coefficients).
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<double>& coeffs() const { return c_; }
    double coeff(int k) const {
        return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : 0.0;
    }

    double operator()(double x) const;
    Polynomial derivative() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double s, const Polynomial& a);

    bool operator==(const Polynomial&) const = default;

private:
    void trim();
    std::vector<double> c_;
};

/// Legendre polynomial P_n from (n+1)P_{n+1} = (2n+1)x P_n - n P_{n-1}.
/// Requires 0 <= n <= 50.
Polynomial legendre_poly(int n);

/// P_n(x) and P_n'(x) by the three-term recurrence, without forming the
/// monomial coefficients (which cancel badly near |x| = 1 for large n).
double legendre_value(int n, double x);
double legendre_derivative(int n, double x);

} // namespace schw
