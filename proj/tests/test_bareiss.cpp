#include <doctest.h>

#include "oracles.hpp"

#include "probefp/bareiss.hpp"
#include "probefp/errors.hpp"

using namespace probefp;

namespace {

// Gauss-Jordan over Q at a fixed rational point.
std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (a[p][c] == 0) ++p;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t r = 0; r < n; ++r) b[r] /= a[r][r];
    return b;
}

}  // namespace

TEST_CASE("2x2 system with a polynomial determinant") {
    PolyMatrix a(2);
    a(0, 0) = parse_expr("x");
    a(0, 1) = parse_expr("1");
    a(1, 0) = parse_expr("1");
    a(1, 1) = parse_expr("y");
    const auto sol = solve_fraction_free(a, {parse_expr("1"), parse_expr("0")});
    // v = (y, -1) / (xy - 1)
    const RationalFn v0(sol.numerators[0], sol.determinant);
    const RationalFn v1(sol.numerators[1], sol.determinant);
    CHECK(ratfn_equiv(v0, RationalFn(parse_expr("y"), parse_expr("x*y-1"))));
    CHECK(ratfn_equiv(v1, RationalFn(parse_expr("-1"), parse_expr("x*y-1"))));
}

TEST_CASE("property: A * numerators == det * b exactly, and agrees with a rational solve") {
    oracle::Generator gen(41);
    for (int t = 0; t < 25; ++t) {
        const std::size_t n = 2 + t % 4;
        PolyMatrix a(n);
        std::vector<ParamExpr> b(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) a(r, c) = gen.polynomial(1, 3);
            a(r, r) += ParamExpr(7);  // keep it generically nonsingular
            b[r] = gen.polynomial(1, 3);
        }
        const auto sol = solve_fraction_free(a, b);
        REQUIRE_FALSE(sol.determinant.is_zero());
        for (std::size_t r = 0; r < n; ++r) {
            ParamExpr lhs;
            for (std::size_t c = 0; c < n; ++c) lhs += a(r, c) * sol.numerators[c];
            CHECK(lhs == sol.determinant * b[r]);
        }
        const Rational px(1, 3);
        const Rational py(2, 7);
        std::vector<std::vector<Rational>> ae(n, std::vector<Rational>(n));
        std::vector<Rational> be(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) ae[r][c] = a(r, c).eval_exact(px, py);
            be[r] = b[r].eval_exact(px, py);
        }
        const Rational det = sol.determinant.eval_exact(px, py);
        if (det == 0) continue;
        const auto want = solve_exact(ae, be);
        for (std::size_t c = 0; c < n; ++c) CHECK(sol.numerators[c].eval_exact(px, py) / det == want[c]);
    }
}

TEST_CASE("singular systems are rejected") {
    PolyMatrix a(2);
    a(0, 0) = parse_expr("x");
    a(0, 1) = parse_expr("y");
    a(1, 0) = parse_expr("2*x");
    a(1, 1) = parse_expr("2*y");
    CHECK_THROWS_AS(solve_fraction_free(a, {ParamExpr(1), ParamExpr(0)}), std::domain_error);
}

TEST_CASE("term cap aborts with SwellError") {
    oracle::Generator gen(42);
    const std::size_t n = 4;
    PolyMatrix a(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) a(r, c) = gen.polynomial(3, 5) + ParamExpr(r == c ? 9 : 0);
    }
    CHECK_THROWS_AS(solve_fraction_free(a, std::vector<ParamExpr>(n, ParamExpr(1)), 5), SwellError);
}
