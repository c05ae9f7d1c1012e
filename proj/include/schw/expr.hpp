#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "schw/jet.hpp"

namespace schw {

enum class Op {
    Var,
    Const,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Sqrt,
    Compose,   // children: outer, inner
    Integral,  // z -> integral of child from 0 to z along the segment
    Koebe,     // z/(1-z)^2
    Mobius,    // (az+b)/(cz+d), params a..d
    TanScaled  // tan(sqrt(C/2) z), params[0] = C
};

/// Immutable expression tree over the complex variable z. Copies share
/// structure; all member functions are const and thread-safe.
class AnalyticExpr {
public:
    struct Node {
        Op op = Op::Var;
        Complex value{};                 // Const
        int exponent = 0;                // Pow
        std::array<Complex, 4> params{}; // Mobius, TanScaled
        std::vector<std::shared_ptr<const Node>> children;
    };

    /// The identity map.
    AnalyticExpr();

    static AnalyticExpr var() { return {}; }
    static AnalyticExpr identity() { return {}; }
    static AnalyticExpr constant(Complex c);
    static AnalyticExpr koebe();
    /// Throws DomainError when ad - bc == 0.
    static AnalyticExpr mobius(Complex a, Complex b, Complex c, Complex d);
    static AnalyticExpr tan_scaled(Complex C);
    /// The disk automorphism e^{i theta} (z + a)/(1 + conj(a) z) as a Mobius node.
    static AnalyticExpr disk_automorphism(Complex a, double theta = 0.0);

    static AnalyticExpr unary(Op op, const AnalyticExpr& arg);
    static AnalyticExpr binary(Op op, const AnalyticExpr& lhs, const AnalyticExpr& rhs);
    static AnalyticExpr power(const AnalyticExpr& base, int exponent);
    /// outer(inner(z)).
    static AnalyticExpr compose(const AnalyticExpr& outer, const AnalyticExpr& inner);
    /// z -> integral_0^z f.
    static AnalyticExpr integral(const AnalyticExpr& f);

    Op op() const { return node_->op; }
    const Node& node() const { return *node_; }
    AnalyticExpr child(std::size_t i) const { return AnalyticExpr(node_->children.at(i)); }

    /// True when the tree contains no Var (Integral nodes count as variable).
    bool is_constant() const;

    /// Evaluates the tree with z replaced by the series `z`.
    Jet eval(const Jet& z) const;

    /// Canonical text that parse() maps back to an identical tree.
    std::string to_string() const;

    bool operator==(const AnalyticExpr& o) const;
    bool operator!=(const AnalyticExpr& o) const { return !(*this == o); }

private:
    explicit AnalyticExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

AnalyticExpr operator+(const AnalyticExpr& a, const AnalyticExpr& b);
AnalyticExpr operator-(const AnalyticExpr& a, const AnalyticExpr& b);
AnalyticExpr operator*(const AnalyticExpr& a, const AnalyticExpr& b);
AnalyticExpr operator/(const AnalyticExpr& a, const AnalyticExpr& b);
AnalyticExpr operator-(const AnalyticExpr& a);

/// Taylor coefficients of f about z through `order` (<= kMaxJetOrder).
Jet eval_jet(const AnalyticExpr& f, Complex z, int order);

/// Jet of f' about z through `order`. Integral nodes at the top level or as
/// the outer map of a composition use their integrand directly, so no
/// quadrature is performed.
Jet derivative_jet(const AnalyticExpr& f, Complex z, int order);

/// f(z).
Complex evaluate(const AnalyticExpr& f, Complex z);

/// Formats a complex constant in the literal syntax accepted by parse().
std::string format_complex(Complex c);

} // namespace schw
