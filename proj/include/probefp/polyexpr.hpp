#pragma once

// Exact polynomials and rational functions in the two probe parameters x, y.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace probefp {

using Rational = mpq_class;

// x^x_pow * y^y_pow
struct Monomial {
    unsigned x_pow = 0;
    unsigned y_pow = 0;

    unsigned degree() const { return x_pow + y_pow; }
    bool operator==(const Monomial&) const = default;
};

// Serialization order: ascending total degree, and within a degree the
// larger power of x first (1, x, y, x^2, x*y, y^2, ...).
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.x_pow > b.x_pow;
    }
};

// Graded lexicographic comparison with x > y; the maximum is the leading term.
std::strong_ordering grlex_compare(const Monomial& a, const Monomial& b);

class ParamExpr {
public:
    using TermMap = std::map<Monomial, Rational, MonomialOrder>;

    ParamExpr() = default;
    ParamExpr(const Rational& constant);  // NOLINT: implicit by design of the algebra
    ParamExpr(long constant) : ParamExpr(Rational(constant)) {}
    ParamExpr(int constant) : ParamExpr(Rational(constant)) {}

    static ParamExpr x();
    static ParamExpr y();
    static ParamExpr monomial(Monomial m, const Rational& coeff);
    static ParamExpr from_terms(const std::vector<std::pair<Monomial, Rational>>& terms);

    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Coefficient of the monomial, zero when absent.
    Rational coefficient(Monomial m) const;
    unsigned total_degree() const;

    // Greatest monomial under grlex. Precondition: !is_zero().
    std::pair<Monomial, Rational> leading_term() const;

    // Floating-point evaluation; each coefficient is converted at call time.
    double eval(double x, double y) const;
    Rational eval_exact(const Rational& x, const Rational& y) const;

    ParamExpr& operator+=(const ParamExpr& other);
    ParamExpr& operator-=(const ParamExpr& other);
    ParamExpr& operator*=(const ParamExpr& other);
    ParamExpr& operator*=(const Rational& scalar);

    friend ParamExpr operator+(ParamExpr a, const ParamExpr& b) { return a += b; }
    friend ParamExpr operator-(ParamExpr a, const ParamExpr& b) { return a -= b; }
    friend ParamExpr operator*(const ParamExpr& a, const ParamExpr& b);
    friend ParamExpr operator*(ParamExpr a, const Rational& s) { return a *= s; }
    friend ParamExpr operator*(const Rational& s, ParamExpr a) { return a *= s; }
    ParamExpr operator-() const;

    friend bool operator==(const ParamExpr& a, const ParamExpr& b) { return a.terms_ == b.terms_; }

    ParamExpr pow(unsigned exponent) const;

    // Canonical text form, parseable by parse_expr.
    std::string render() const;

private:
    void add_term(const Monomial& m, const Rational& c);

    TermMap terms_;
};

inline ParamExpr expr_add(const ParamExpr& a, const ParamExpr& b) { return a + b; }
inline ParamExpr expr_sub(const ParamExpr& a, const ParamExpr& b) { return a - b; }
inline ParamExpr expr_mul(const ParamExpr& a, const ParamExpr& b) { return a * b; }
inline double expr_eval(const ParamExpr& e, double x, double y) { return e.eval(x, y); }

// Quotient a / b when b divides a exactly in Q[x, y]; throws std::logic_error
// when a remainder is left.
ParamExpr divide_exact(const ParamExpr& a, const ParamExpr& b);

// Positive rational c such that a / c has coprime integer coefficients.
// Zero for the zero polynomial.
Rational content(const ParamExpr& a);

// Parses the expression grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' INT)? | '-' factor
//   atom   := INT ('/' INT)? | DECIMAL | 'x' | 'y' | '(' expr ')'
// Decimals are exact (0.1 == 1/10). Throws ParseError with a byte offset.
ParamExpr parse_expr(std::string_view text);
inline ParamExpr expr_parse(std::string_view text) { return parse_expr(text); }

// Parses a rational or decimal literal, optionally signed ("-3/4", "2.5").
Rational parse_rational(std::string_view text);
std::string render_rational(const Rational& q);

class RationalFn {
public:
    // Throws std::invalid_argument when den is zero.
    RationalFn(ParamExpr num, ParamExpr den = ParamExpr(1));

    const ParamExpr& num() const { return num_; }
    const ParamExpr& den() const { return den_; }

    // Throws SingularPointError when |den(x,y)| < 1e-12 * (1 + max|den coeff|).
    double eval(double x, double y) const;

    bool operator==(const RationalFn&) const = default;

private:
    ParamExpr num_;
    ParamExpr den_;
};

inline double ratfn_eval(const RationalFn& f, double x, double y) { return f.eval(x, y); }

// Exact test: f.num * g.den - g.num * f.den == 0. `samples` random points
// are additionally compared numerically; a disagreement with the exact
// verdict throws std::logic_error.
bool ratfn_equiv(const RationalFn& f, const RationalFn& g, unsigned samples = 8);

}  // namespace probefp
