#include "probefp/errors.hpp"
#include "probefp/polyexpr.hpp"

#include <cctype>
#include <string>

namespace probefp {
namespace {

constexpr unsigned kMaxExponent = 4096;

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    ParamExpr parse() {
        ParamExpr result = expr();
        skip_ws();
        if (pos_ < text_.size()) {
            if (text_[pos_] == '/') fail("division is not supported in polynomial expressions");
            if (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '(' ||
                text_[pos_] == '.') {
                fail("unexpected '" + std::string(1, text_[pos_]) +
                     "' (implicit multiplication is not allowed)");
            }
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return result;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

    [[noreturn]] void fail_at(std::size_t offset, const std::string& what) const {
        throw ParseError("expression syntax error at byte " + std::to_string(offset) + ": " + what,
                         ParseError::Kind::ByteOffset, offset);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool is_digit_at(std::size_t p) const {
        return p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]));
    }

    std::string digits() {
        const std::size_t start = pos_;
        while (is_digit_at(pos_)) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    ParamExpr expr() {
        ParamExpr acc = term();
        while (true) {
            if (peek('+')) {
                ++pos_;
                acc += term();
            } else if (peek('-')) {
                ++pos_;
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    ParamExpr term() {
        ParamExpr acc = factor();
        while (peek('*')) {
            ++pos_;
            acc = acc * factor();
        }
        return acc;
    }

    ParamExpr factor() {
        if (peek('-')) {
            ++pos_;
            return -factor();
        }
        ParamExpr base = atom();
        if (peek('^')) {
            ++pos_;
            skip_ws();
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
                fail("exponent must be a nonnegative integer");
            }
            if (!is_digit_at(pos_)) fail("expected integer exponent");
            const std::size_t start = pos_;
            const std::string power = digits();
            if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == '/')) {
                fail_at(start, "exponent must be a nonnegative integer");
            }
            if (power.size() > 6 || std::stoul(power) > kMaxExponent) {
                fail_at(start, "exponent exceeds " + std::to_string(kMaxExponent));
            }
            return base.pow(static_cast<unsigned>(std::stoul(power)));
        }
        return base;
    }

    ParamExpr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == 'x') {
            ++pos_;
            return ParamExpr::x();
        }
        if (c == 'y') {
            ++pos_;
            return ParamExpr::y();
        }
        if (c == '(') {
            ++pos_;
            ParamExpr inner = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (is_digit_at(pos_)) return ParamExpr(number());
        fail("unexpected '" + std::string(1, c) + "'");
    }

    // INT, INT '/' INT, or INT '.' INT as an exact rational.
    Rational number() {
        const std::string whole = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            if (!is_digit_at(pos_)) fail("expected digits after decimal point");
            const std::string frac = digits();
            mpz_class scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
            Rational q(mpz_class(whole + frac, 10), scale);
            q.canonicalize();
            return q;
        }
        const std::size_t after_int = pos_;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '/') {
            const std::size_t slash = pos_;
            ++pos_;
            skip_ws();
            if (!is_digit_at(pos_)) {
                fail_at(slash, "division is not supported in polynomial expressions");
            }
            const std::string den = digits();
            if (pos_ < text_.size() && text_[pos_] == '.') {
                fail("rational literal denominator must be an integer");
            }
            mpz_class d(den, 10);
            if (d == 0) fail_at(slash, "zero denominator in rational literal");
            Rational q(mpz_class(whole, 10), d);
            q.canonicalize();
            return q;
        }
        pos_ = after_int;
        return Rational(mpz_class(whole, 10));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

ParamExpr parse_expr(std::string_view text) {
    return ExprParser(text).parse();
}

Rational parse_rational(std::string_view text) {
    const ParamExpr e = parse_expr(text);
    if (!e.is_constant()) {
        throw ParseError("expected a rational constant, got '" + std::string(text) + "'",
                         ParseError::Kind::ByteOffset, 0);
    }
    return e.coefficient(Monomial{});
}

}  // namespace probefp
