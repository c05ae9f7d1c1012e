#include "schw/polynomial.hpp"

#include <algorithm>

#include "schw/errors.hpp"

namespace schw {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> r(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k)
        r[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
    return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
}

Polynomial operator*(double s, const Polynomial& a) {
    std::vector<double> r = a.c_;
    for (double& v : r) v *= s;
    return Polynomial(std::move(r));
}

Polynomial legendre_poly(int n) {
    if (n < 0 || n > 50) throw DomainError("legendre_poly requires 0 <= n <= 50");
    Polynomial prev{1.0};
    if (n == 0) return prev;
    Polynomial cur{0.0, 1.0};
    const Polynomial x{0.0, 1.0};
    for (int k = 1; k < n; ++k) {
        Polynomial next = (1.0 / (k + 1)) * ((2.0 * k + 1.0) * (x * cur) - static_cast<double>(k) * prev);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

double legendre_value(int n, double x) {
    if (n < 0) throw DomainError("legendre_value requires n >= 0");
    double prev = 1.0, cur = x;
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double legendre_derivative(int n, double x) {
    if (n < 0) throw DomainError("legendre_derivative requires n >= 0");
    // P'_{k+1} = P'_{k-1} + (2k+1) P_k
    double dprev = 0.0, dcur = 1.0, prev = 1.0, cur = x;
    if (n == 0) return 0.0;
    for (int k = 1; k < n; ++k) {
        const double dnext = dprev + (2.0 * k + 1.0) * cur;
        const double next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        dprev = dcur;
        dcur = dnext;
        prev = cur;
        cur = next;
    }
    return dcur;
}

} // namespace schw
