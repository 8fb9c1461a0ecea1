#pragma once

#include <cctype>
#include <cstddef>
#include <string>

#include "errors.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"

namespace bernop {

namespace detail {

/// Recursive-descent parser for sums of c*(x-t)^k terms. Numbers may be
/// decimals or fractions and are kept exact; products of factors are expanded.
class ExpressionParser {
public:
    explicit ExpressionParser(const std::string& text) : s_(text) {}

    Polynomial<Rational> parse() {
        Polynomial<Rational> acc = signed_term();
        while (!at_end()) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                Polynomial<Rational> t = term();
                acc = (c == '-') ? acc - t : acc + t;
            } else {
                fail("expected '+' or '-'");
            }
        }
        return acc;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression: " + what + " at position " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    bool number_ahead() {
        char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    }

    Rational number() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
            ++pos_;
        if (pos_ == start)
            fail("expected a number");
        return parse_rational(s_.substr(start, pos_ - start));
    }

    int exponent() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (pos_ == start)
            fail("expected an integer exponent");
        long k = std::stol(s_.substr(start, pos_ - start));
        if (k > 64)
            fail("exponent too large");
        return static_cast<int>(k);
    }

    Polynomial<Rational> signed_term() {
        if (accept('-'))
            return -term();
        accept('+');
        return term();
    }

    // primary := NUMBER | x | '(' x ('+'|'-') NUMBER ')' | '(' NUMBER ['/' NUMBER] ')'
    // with an optional '^' integer power.
    Polynomial<Rational> primary() {
        Polynomial<Rational> p(Rational(0), {});
        if (accept('(')) {
            if (peek() == 'x') {
                ++pos_;
                char sign = peek();
                if (sign != '+' && sign != '-')
                    fail("expected '+' or '-' after 'x'");
                ++pos_;
                Rational t = number();
                p = Polynomial<Rational>(Rational(0),
                                         {sign == '-' ? -t : t, Rational(1)});
            } else {
                Rational v = number();
                if (accept('/')) {
                    Rational d = number();
                    if (d == 0)
                        fail("division by zero");
                    v /= d;
                }
                p = Polynomial<Rational>::constant(v);
            }
            expect(')');
        } else if (peek() == 'x') {
            ++pos_;
            p = Polynomial<Rational>::identity(Rational(0));
        } else if (number_ahead()) {
            p = Polynomial<Rational>::constant(number());
        } else {
            fail("expected a number, 'x', or '('");
        }
        if (accept('^')) {
            int k = exponent();
            Polynomial<Rational> out = Polynomial<Rational>::constant(Rational(1));
            for (int i = 0; i < k; ++i)
                out = out * p;
            p = out;
        }
        return p;
    }

    Polynomial<Rational> term() {
        Polynomial<Rational> acc = primary();
        for (;;) {
            if (accept('*')) {
                acc = acc * primary();
            } else if (accept('/')) {
                Rational d = number();
                if (d == 0)
                    fail("division by zero");
                acc = acc * Polynomial<Rational>::constant(Rational(1) / d);
            } else if (peek() == 'x' || peek() == '(') {
                acc = acc * primary();
            } else {
                break;
            }
        }
        return acc;
    }
};

} // namespace detail

/// Parses an expression such as "(x-0.125)^3" or "3x/8 - x^2/2 + x^3/3" into
/// an exact polynomial about base 0.
inline Polynomial<Rational> parse_poly_expression(const std::string& text) {
    detail::ExpressionParser parser(text);
    return parser.parse();
}

} // namespace bernop
