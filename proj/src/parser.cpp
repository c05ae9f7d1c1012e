#include "schw/parser.hpp"

#include <cctype>
#include <charconv>
#include <numbers>
#include <optional>
#include <string>

#include "schw/errors.hpp"

namespace schw {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    AnalyticExpr parse_all() {
        AnalyticExpr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
        throw ParseError(msg, at);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
            fail(std::string("expected '") + c + "'");
        }
    }

    AnalyticExpr expr() {
        AnalyticExpr lhs = term();
        for (;;) {
            if (accept('+')) lhs = lhs + term();
            else if (accept('-')) lhs = lhs - term();
            else return lhs;
        }
    }

    AnalyticExpr term() {
        AnalyticExpr lhs = factor();
        for (;;) {
            if (accept('*')) lhs = lhs * factor();
            else if (accept('/')) lhs = lhs / factor();
            else return lhs;
        }
    }

    AnalyticExpr factor() {
        if (accept('-')) return -factor();
        AnalyticExpr base = atom();
        if (accept('^')) {
            skip_ws();
            bool negative = false;
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
                negative = text_[pos_] == '-';
                ++pos_;
            }
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("expected integer exponent");
            int n = 0;
            auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, n);
            if (ec != std::errc()) fail_at("exponent out of range", start);
            (void)ptr;
            return AnalyticExpr::power(base, negative ? -n : n);
        }
        return base;
    }

    // Unsigned decimal literal at pos_ (no whitespace skipping).
    std::optional<double> number_literal() {
        const std::size_t start = pos_;
        std::size_t p = pos_;
        auto digits = [&] {
            const std::size_t s = p;
            while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
            return p - s;
        };
        std::size_t n = digits();
        if (p < text_.size() && text_[p] == '.') {
            ++p;
            n += digits();
        }
        if (n == 0) return std::nullopt;
        if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
            std::size_t q = p + 1;
            if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
            if (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) {
                p = q;
                digits();
            }
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + p, value);
        if (ec != std::errc() || ptr != text_.data() + p) fail_at("malformed number", start);
        pos_ = p;
        return value;
    }

    // Consumes an 'i' suffix directly after a number.
    bool imaginary_suffix() {
        if (pos_ < text_.size() && text_[pos_] == 'i' &&
            (pos_ + 1 >= text_.size() || !ident_char(text_[pos_ + 1]))) {
            ++pos_;
            return true;
        }
        return false;
    }

    // Tries '(' literal ')' starting after the '('; restores pos_ on failure.
    std::optional<Complex> paren_literal() {
        const std::size_t save = pos_;
        auto bail = [&]() -> std::optional<Complex> {
            pos_ = save;
            return std::nullopt;
        };
        skip_ws();
        double sign = 1.0;
        if (pos_ < text_.size() && text_[pos_] == '-') {
            sign = -1.0;
            ++pos_;
            skip_ws();
        }
        auto first = number_literal();
        if (!first) return bail();
        Complex value;
        if (imaginary_suffix()) {
            value = Complex(0.0, sign * *first);
        } else {
            value = Complex(sign * *first, 0.0);
            skip_ws();
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                const double isign = text_[pos_] == '-' ? -1.0 : 1.0;
                ++pos_;
                skip_ws();
                auto second = number_literal();
                if (!second || !imaginary_suffix()) return bail();
                value = Complex(sign * *first, isign * *second);
            }
        }
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != ')') return bail();
        ++pos_;
        return value;
    }

    Complex constant_arg() {
        skip_ws();
        const std::size_t at = pos_;
        AnalyticExpr e = expr();
        if (!e.is_constant()) fail_at("builtin argument must not depend on z", at);
        try {
            return eval_jet(e, 0.0, 0)[0];
        } catch (const Error& err) {
            fail_at(std::string("cannot evaluate builtin argument: ") + err.what(), at);
        }
    }

    AnalyticExpr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected expression but input ended");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            if (auto lit = paren_literal()) return AnalyticExpr::constant(*lit);
            AnalyticExpr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const double v = *number_literal();
            if (imaginary_suffix()) return AnalyticExpr::constant(Complex(0.0, v));
            return AnalyticExpr::constant(v);
        }
        if (!ident_char(c)) fail("unexpected '" + std::string(1, c) + "'");

        const std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);

        if (name == "z" || name == "identity") return AnalyticExpr::var();
        if (name == "i") return AnalyticExpr::constant(Complex(0.0, 1.0));
        if (name == "pi") return AnalyticExpr::constant(std::numbers::pi);
        if (name == "koebe") return AnalyticExpr::koebe();

        static constexpr std::pair<std::string_view, Op> kFuncs[] = {
            {"exp", Op::Exp}, {"log", Op::Log},   {"sin", Op::Sin},          {"cos", Op::Cos},
            {"tan", Op::Tan}, {"sqrt", Op::Sqrt}, {"integral", Op::Integral}};
        for (const auto& [fname, op] : kFuncs) {
            if (name == fname) {
                expect('(');
                AnalyticExpr arg = expr();
                expect(')');
                return AnalyticExpr::unary(op, arg);
            }
        }
        if (name == "compose") {
            expect('(');
            AnalyticExpr outer = expr();
            expect(',');
            AnalyticExpr inner = expr();
            expect(')');
            return AnalyticExpr::compose(outer, inner);
        }
        if (name == "tan_scaled") {
            expect('(');
            const Complex C = constant_arg();
            expect(')');
            return AnalyticExpr::tan_scaled(C);
        }
        if (name == "mobius") {
            expect('(');
            Complex p[4];
            for (int k = 0; k < 4; ++k) {
                if (k) expect(',');
                p[k] = constant_arg();
            }
            expect(')');
            if (p[0] * p[3] - p[1] * p[2] == Complex(0.0))
                fail_at("mobius requires ad - bc != 0", start);
            return AnalyticExpr::mobius(p[0], p[1], p[2], p[3]);
        }
        fail_at("unknown identifier '" + std::string(name) + "'", start);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

AnalyticExpr parse(std::string_view text) { return Parser(text).parse_all(); }

Complex parse_complex(std::string_view text) {
    AnalyticExpr e = parse(text);
    if (!e.is_constant()) throw ParseError("expected a constant, found an expression in z", 0);
    return eval_jet(e, 0.0, 0)[0];
}

} // namespace schw
