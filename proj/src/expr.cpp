#include "schw/expr.hpp"

#include <cmath>
#include <cstdio>

#include "schw/errors.hpp"
#include "schw/quadrature.hpp"

namespace schw {

namespace {

using NodePtr = std::shared_ptr<const AnalyticExpr::Node>;

std::shared_ptr<AnalyticExpr::Node> make(Op op) {
    auto n = std::make_shared<AnalyticExpr::Node>();
    n->op = op;
    return n;
}

bool nodes_equal(const AnalyticExpr::Node& a, const AnalyticExpr::Node& b) {
    if (a.op != b.op || a.children.size() != b.children.size()) return false;
    switch (a.op) {
    case Op::Const:
        if (a.value != b.value) return false;
        break;
    case Op::Pow:
        if (a.exponent != b.exponent) return false;
        break;
    case Op::Mobius:
    case Op::TanScaled:
        if (a.params != b.params) return false;
        break;
    default:
        break;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (a.children[i] != b.children[i] && !nodes_equal(*a.children[i], *b.children[i]))
            return false;
    return true;
}

bool contains_var(const AnalyticExpr::Node& n) {
    if (n.op == Op::Var || n.op == Op::Koebe || n.op == Op::Mobius || n.op == Op::TanScaled ||
        n.op == Op::Integral)
        return true;
    if (n.op == Op::Compose) return contains_var(*n.children[0]) && contains_var(*n.children[1]);
    for (const auto& c : n.children)
        if (contains_var(*c)) return true;
    return false;
}

Jet eval_node(const AnalyticExpr::Node& n, const Jet& z);

Jet eval_integral(const AnalyticExpr::Node& integrand, const Jet& z) {
    const Complex z0 = z[0];
    const int order = z.order();
    Jet g(order, z0);
    auto f = [&integrand](Complex w) { return eval_node(integrand, Jet::variable(w, 0))[0]; };
    g[0] = line_integral(f, 0.0, z0).value;
    if (order >= 1) {
        const Jet fj = eval_node(integrand, Jet::variable(z0, order - 1));
        for (int k = 0; k < order; ++k) g[k + 1] = fj[k] / static_cast<double>(k + 1);
    }
    return compose(g, z);
}

Jet eval_node(const AnalyticExpr::Node& n, const Jet& z) {
    const int order = z.order();
    const Complex base = z.base_point();
    switch (n.op) {
    case Op::Var:
        return z;
    case Op::Const:
        return Jet::constant(n.value, order, base);
    case Op::Add:
        return eval_node(*n.children[0], z) + eval_node(*n.children[1], z);
    case Op::Sub:
        return eval_node(*n.children[0], z) - eval_node(*n.children[1], z);
    case Op::Mul:
        return eval_node(*n.children[0], z) * eval_node(*n.children[1], z);
    case Op::Div:
        return eval_node(*n.children[0], z) / eval_node(*n.children[1], z);
    case Op::Neg:
        return -eval_node(*n.children[0], z);
    case Op::Pow:
        return pow(eval_node(*n.children[0], z), n.exponent);
    case Op::Exp:
        return exp(eval_node(*n.children[0], z));
    case Op::Log:
        return log(eval_node(*n.children[0], z));
    case Op::Sin:
        return sin(eval_node(*n.children[0], z));
    case Op::Cos:
        return cos(eval_node(*n.children[0], z));
    case Op::Tan:
        return tan(eval_node(*n.children[0], z));
    case Op::Sqrt:
        return sqrt(eval_node(*n.children[0], z));
    case Op::Compose:
        return eval_node(*n.children[0], eval_node(*n.children[1], z));
    case Op::Integral:
        return eval_integral(*n.children[0], z);
    case Op::Koebe: {
        const Jet one_minus = 1.0 - z;
        return z / (one_minus * one_minus);
    }
    case Op::Mobius:
        return (n.params[0] * z + n.params[1]) / (n.params[2] * z + n.params[3]);
    case Op::TanScaled:
        return tan(std::sqrt(n.params[0] / 2.0) * z);
    }
    throw Error("unreachable expression node");
}

// Printing precedence: 1 additive, 2 multiplicative, 3 unary minus, 4 power, 5 atom.
int precedence(const AnalyticExpr::Node& n) {
    switch (n.op) {
    case Op::Add:
    case Op::Sub:
        return 1;
    case Op::Mul:
    case Op::Div:
        return 2;
    case Op::Neg:
        return 3;
    case Op::Pow:
        return 4;
    default:
        return 5;
    }
}

std::string fmt_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void print_node(const AnalyticExpr::Node& n, std::string& out);

void print_wrapped(const AnalyticExpr::Node& n, bool paren, std::string& out) {
    if (paren) out += '(';
    print_node(n, out);
    if (paren) out += ')';
}

const char* function_name(Op op) {
    switch (op) {
    case Op::Exp:
        return "exp";
    case Op::Log:
        return "log";
    case Op::Sin:
        return "sin";
    case Op::Cos:
        return "cos";
    case Op::Tan:
        return "tan";
    case Op::Sqrt:
        return "sqrt";
    case Op::Integral:
        return "integral";
    default:
        return nullptr;
    }
}

void print_node(const AnalyticExpr::Node& n, std::string& out) {
    const int prec = precedence(n);
    switch (n.op) {
    case Op::Var:
        out += 'z';
        return;
    case Op::Const:
        out += format_complex(n.value);
        return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
        const auto& l = *n.children[0];
        const auto& r = *n.children[1];
        print_wrapped(l, precedence(l) < prec, out);
        out += n.op == Op::Add ? "+" : n.op == Op::Sub ? "-" : n.op == Op::Mul ? "*" : "/";
        print_wrapped(r, precedence(r) <= prec, out);
        return;
    }
    case Op::Neg: {
        const auto& a = *n.children[0];
        out += '-';
        print_wrapped(a, precedence(a) < prec, out);
        return;
    }
    case Op::Pow: {
        const auto& a = *n.children[0];
        print_wrapped(a, precedence(a) < 5, out);
        out += '^';
        out += std::to_string(n.exponent);
        return;
    }
    case Op::Compose:
        out += "compose(";
        print_node(*n.children[0], out);
        out += ',';
        print_node(*n.children[1], out);
        out += ')';
        return;
    case Op::Koebe:
        out += "koebe";
        return;
    case Op::Mobius:
        out += "mobius(";
        for (int i = 0; i < 4; ++i) {
            if (i) out += ',';
            out += format_complex(n.params[static_cast<std::size_t>(i)]);
        }
        out += ')';
        return;
    case Op::TanScaled:
        out += "tan_scaled(" + format_complex(n.params[0]) + ")";
        return;
    default:
        out += function_name(n.op);
        out += '(';
        print_node(*n.children[0], out);
        out += ')';
        return;
    }
}

} // namespace

std::string format_complex(Complex c) {
    const double re = c.real(), im = c.imag();
    if (im == 0.0 && !std::signbit(im) && re >= 0.0 && !std::signbit(re)) return fmt_real(re);
    if (re == 0.0 && !std::signbit(re) && im > 0.0) return fmt_real(im) + "i";
    std::string s = "(";
    if (re == 0.0 && !std::signbit(re)) {
        // Pure imaginary with negative (or negative zero) part.
        s += "-" + fmt_real(std::abs(im)) + "i";
    } else {
        s += fmt_real(re);
        s += std::signbit(im) ? "-" : "+";
        s += fmt_real(std::abs(im)) + "i";
    }
    return s + ")";
}

AnalyticExpr::AnalyticExpr() : node_(make(Op::Var)) {}

AnalyticExpr AnalyticExpr::constant(Complex c) {
    auto n = make(Op::Const);
    n->value = c;
    return AnalyticExpr(n);
}

AnalyticExpr AnalyticExpr::koebe() { return AnalyticExpr(make(Op::Koebe)); }

AnalyticExpr AnalyticExpr::mobius(Complex a, Complex b, Complex c, Complex d) {
    if (a * d - b * c == Complex(0.0))
        throw DomainError("mobius requires ad - bc != 0");
    auto n = make(Op::Mobius);
    n->params = {a, b, c, d};
    return AnalyticExpr(n);
}

AnalyticExpr AnalyticExpr::tan_scaled(Complex C) {
    auto n = make(Op::TanScaled);
    n->params[0] = C;
    return AnalyticExpr(n);
}

AnalyticExpr AnalyticExpr::disk_automorphism(Complex a, double theta) {
    if (std::abs(a) >= 1.0) throw DomainError("disk automorphism requires |a| < 1");
    const Complex rot = std::polar(1.0, theta);
    return mobius(rot, rot * a, std::conj(a), 1.0);
}

AnalyticExpr AnalyticExpr::unary(Op op, const AnalyticExpr& arg) {
    auto n = make(op);
    n->children.push_back(arg.node_);
    return AnalyticExpr(n);
}

AnalyticExpr AnalyticExpr::binary(Op op, const AnalyticExpr& lhs, const AnalyticExpr& rhs) {
    auto n = make(op);
    n->children = {lhs.node_, rhs.node_};
    return AnalyticExpr(n);
}

AnalyticExpr AnalyticExpr::power(const AnalyticExpr& base, int exponent) {
    auto n = make(Op::Pow);
    n->exponent = exponent;
    n->children.push_back(base.node_);
    return AnalyticExpr(n);
}

AnalyticExpr AnalyticExpr::compose(const AnalyticExpr& outer, const AnalyticExpr& inner) {
    return binary(Op::Compose, outer, inner);
}

AnalyticExpr AnalyticExpr::integral(const AnalyticExpr& f) { return unary(Op::Integral, f); }

bool AnalyticExpr::is_constant() const { return !contains_var(*node_); }

Jet AnalyticExpr::eval(const Jet& z) const { return eval_node(*node_, z); }

std::string AnalyticExpr::to_string() const {
    std::string out;
    print_node(*node_, out);
    return out;
}

bool AnalyticExpr::operator==(const AnalyticExpr& o) const {
    return node_ == o.node_ || nodes_equal(*node_, *o.node_);
}

AnalyticExpr operator+(const AnalyticExpr& a, const AnalyticExpr& b) {
    return AnalyticExpr::binary(Op::Add, a, b);
}
AnalyticExpr operator-(const AnalyticExpr& a, const AnalyticExpr& b) {
    return AnalyticExpr::binary(Op::Sub, a, b);
}
AnalyticExpr operator*(const AnalyticExpr& a, const AnalyticExpr& b) {
    return AnalyticExpr::binary(Op::Mul, a, b);
}
AnalyticExpr operator/(const AnalyticExpr& a, const AnalyticExpr& b) {
    return AnalyticExpr::binary(Op::Div, a, b);
}
AnalyticExpr operator-(const AnalyticExpr& a) { return AnalyticExpr::unary(Op::Neg, a); }

Jet eval_jet(const AnalyticExpr& f, Complex z, int order) {
    if (order < 0 || order > kMaxJetOrder) throw DomainError("jet order out of range");
    Jet j = f.eval(Jet::variable(z, order));
    if (!j.all_finite()) throw PoleError("nonfinite jet (pole or overflow)");
    return j;
}

Jet derivative_jet(const AnalyticExpr& f, Complex z, int order) {
    if (f.op() == Op::Integral) return eval_jet(f.child(0), z, order);
    if (order + 1 > kMaxJetOrder) throw DomainError("jet order out of range");
    if (f.op() == Op::Compose) {
        // (outer o inner)' = outer'(inner) inner'; keeps quadrature out of the
        // derivative when the outer map is an antiderivative.
        const Jet in = eval_jet(f.child(1), z, order + 1);
        const Jet out = derivative_jet(f.child(0), in[0], order);
        const Jet r = compose(out, in) * in.differentiate();
        if (!r.all_finite()) throw PoleError("non-finite derivative");
        return r;
    }
    if (order + 1 > kMaxJetOrder) throw DomainError("jet order out of range");
    return eval_jet(f, z, order + 1).differentiate();
}

Complex evaluate(const AnalyticExpr& f, Complex z) { return eval_jet(f, z, 0)[0]; }

} // namespace schw
