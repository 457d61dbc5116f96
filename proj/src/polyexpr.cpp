#include "probefp/polyexpr.hpp"

#include "probefp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace probefp {

std::strong_ordering grlex_compare(const Monomial& a, const Monomial& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    return a.x_pow <=> b.x_pow;
}

ParamExpr::ParamExpr(const Rational& constant) {
    add_term(Monomial{}, constant);
}

ParamExpr ParamExpr::x() { return monomial({1, 0}, 1); }
ParamExpr ParamExpr::y() { return monomial({0, 1}, 1); }

ParamExpr ParamExpr::monomial(Monomial m, const Rational& coeff) {
    ParamExpr e;
    e.add_term(m, coeff);
    return e;
}

ParamExpr ParamExpr::from_terms(const std::vector<std::pair<Monomial, Rational>>& terms) {
    ParamExpr e;
    for (const auto& [m, c] : terms) e.add_term(m, c);
    return e;
}

void ParamExpr::add_term(const Monomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (inserted) return;
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
}

bool ParamExpr::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

Rational ParamExpr::coefficient(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

unsigned ParamExpr::total_degree() const {
    // map order is ascending by degree
    return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

std::pair<Monomial, Rational> ParamExpr::leading_term() const {
    if (terms_.empty()) throw std::logic_error("leading_term of zero polynomial");
    auto best = terms_.begin();
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (grlex_compare(it->first, best->first) > 0) best = it;
    }
    return *best;
}

double ParamExpr::eval(double x, double y) const {
    if (terms_.empty()) return 0.0;
    const unsigned deg = total_degree();
    std::vector<double> xp(deg + 1, 1.0), yp(deg + 1, 1.0);
    for (unsigned k = 1; k <= deg; ++k) {
        xp[k] = xp[k - 1] * x;
        yp[k] = yp[k - 1] * y;
    }
    double sum = 0.0;
    for (const auto& [m, c] : terms_) sum += c.get_d() * xp[m.x_pow] * yp[m.y_pow];
    return sum;
}

Rational ParamExpr::eval_exact(const Rational& x, const Rational& y) const {
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
        Rational term = c;
        for (unsigned k = 0; k < m.x_pow; ++k) term *= x;
        for (unsigned k = 0; k < m.y_pow; ++k) term *= y;
        sum += term;
    }
    return sum;
}

ParamExpr& ParamExpr::operator+=(const ParamExpr& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

ParamExpr& ParamExpr::operator-=(const ParamExpr& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

ParamExpr& ParamExpr::operator*=(const ParamExpr& other) {
    *this = *this * other;
    return *this;
}

ParamExpr& ParamExpr::operator*=(const Rational& scalar) {
    if (sgn(scalar) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= scalar;
    return *this;
}

ParamExpr operator*(const ParamExpr& a, const ParamExpr& b) {
    ParamExpr out;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            out.add_term(Monomial{ma.x_pow + mb.x_pow, ma.y_pow + mb.y_pow}, ca * cb);
        }
    }
    return out;
}

ParamExpr ParamExpr::operator-() const {
    ParamExpr out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

ParamExpr ParamExpr::pow(unsigned exponent) const {
    ParamExpr result(1);
    ParamExpr base = *this;
    while (exponent > 0) {
        if (exponent & 1u) result = result * base;
        exponent >>= 1u;
        if (exponent > 0) base = base * base;
    }
    return result;
}

std::string render_rational(const Rational& q) {
    return q.get_str();
}

std::string ParamExpr::render() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        const bool negative = sgn(c) < 0;
        if (negative) {
            out += '-';
        } else if (!first) {
            out += '+';
        }
        first = false;

        const Rational magnitude = abs(c);
        std::string factors;
        auto append_var = [&factors](char var, unsigned power) {
            if (power == 0) return;
            if (!factors.empty()) factors += '*';
            factors += var;
            if (power > 1) factors += '^' + std::to_string(power);
        };
        append_var('x', m.x_pow);
        append_var('y', m.y_pow);

        if (factors.empty()) {
            out += render_rational(magnitude);
        } else if (magnitude == 1) {
            out += factors;
        } else {
            out += render_rational(magnitude) + '*' + factors;
        }
    }
    return out;
}

ParamExpr divide_exact(const ParamExpr& a, const ParamExpr& b) {
    if (b.is_zero()) throw std::logic_error("divide_exact: division by zero polynomial");
    const auto [lead_m, lead_c] = b.leading_term();
    ParamExpr quotient;
    ParamExpr rest = a;
    while (!rest.is_zero()) {
        const auto [rm, rc] = rest.leading_term();
        if (rm.x_pow < lead_m.x_pow || rm.y_pow < lead_m.y_pow) {
            throw std::logic_error("divide_exact: divisor does not divide dividend");
        }
        const ParamExpr step = ParamExpr::monomial(
            Monomial{rm.x_pow - lead_m.x_pow, rm.y_pow - lead_m.y_pow}, rc / lead_c);
        quotient += step;
        rest -= step * b;
    }
    return quotient;
}

Rational content(const ParamExpr& a) {
    if (a.is_zero()) return 0;
    mpz_class num_gcd = 0;
    mpz_class den_lcm = 1;
    for (const auto& [m, c] : a.terms()) {
        num_gcd = gcd(num_gcd, c.get_num());
        den_lcm = lcm(den_lcm, c.get_den());
    }
    Rational result(num_gcd, den_lcm);
    result.canonicalize();
    return result;
}

namespace {

double max_abs_coefficient(const ParamExpr& e) {
    double best = 0.0;
    for (const auto& [m, c] : e.terms()) best = std::max(best, std::fabs(c.get_d()));
    return best;
}

}  // namespace

RationalFn::RationalFn(ParamExpr num, ParamExpr den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::invalid_argument("rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = ParamExpr(1);
        return;
    }
    // Joint content of num and den: gcd of all numerators over lcm of all denominators.
    mpz_class num_gcd = 0;
    mpz_class den_lcm = 1;
    for (const ParamExpr* part : {&num_, &den_}) {
        for (const auto& [m, c] : part->terms()) {
            num_gcd = gcd(num_gcd, c.get_num());
            den_lcm = lcm(den_lcm, c.get_den());
        }
    }
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    if (sgn(den_.leading_term().second) < 0) scale = -scale;
    num_ *= scale;
    den_ *= scale;
}

double RationalFn::eval(double x, double y) const {
    const double d = den_.eval(x, y);
    if (std::fabs(d) < 1e-12 * (1.0 + max_abs_coefficient(den_))) {
        throw SingularPointError("denominator vanishes at (" + std::to_string(x) + ", " +
                                     std::to_string(y) + ")",
                                 x, y);
    }
    return num_.eval(x, y) / d;
}

bool ratfn_equiv(const RationalFn& f, const RationalFn& g, unsigned samples) {
    const bool exact = (f.num() * g.den() - g.num() * f.den()).is_zero();

    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (unsigned s = 0; s < samples; ++s) {
        double x = unit(rng);
        double y = unit(rng);
        if (x + y > 1.0) {
            x = 1.0 - x;
            y = 1.0 - y;
        }
        double fv = 0.0;
        double gv = 0.0;
        try {
            fv = f.eval(x, y);
            gv = g.eval(x, y);
        } catch (const SingularPointError&) {
            continue;
        }
        if (exact && std::fabs(fv - gv) > 1e-8 * (1.0 + std::fabs(fv))) {
            throw std::logic_error("ratfn_equiv: exact and sampled verdicts disagree");
        }
    }
    return exact;
}

}  // namespace probefp
