#include "probefp/bareiss.hpp"

#include "probefp/errors.hpp"

#include <stdexcept>
#include <string>

namespace probefp {
namespace {

void check_cap(const ParamExpr& e, std::size_t cap) {
    if (e.term_count() > cap) {
        throw SwellError("intermediate polynomial has " + std::to_string(e.term_count()) +
                         " terms, exceeding the cap of " + std::to_string(cap));
    }
}

}  // namespace

FractionFreeSolution solve_fraction_free(PolyMatrix a, std::vector<ParamExpr> b,
                                         std::size_t term_cap) {
    const std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("solve_fraction_free: shape mismatch");
    if (n == 0) throw std::invalid_argument("solve_fraction_free: empty system");

    // Augmented column n holds b.
    auto at = [&](std::size_t r, std::size_t c) -> ParamExpr& { return c == n ? b[r] : a(r, c); };
    auto swap_rows = [&](std::size_t r1, std::size_t r2) {
        for (std::size_t c = 0; c < n; ++c) std::swap(a(r1, c), a(r2, c));
        std::swap(b[r1], b[r2]);
    };

    ParamExpr previous(1);
    for (std::size_t k = 0; k < n; ++k) {
        // Sparsest nonzero pivot keeps products small.
        std::size_t pivot = n;
        for (std::size_t r = k; r < n; ++r) {
            if (a(r, k).is_zero()) continue;
            if (pivot == n || a(r, k).term_count() < a(pivot, k).term_count()) pivot = r;
        }
        if (pivot == n) throw std::domain_error("matrix is singular over Q(x, y)");
        if (pivot != k) swap_rows(pivot, k);

        const ParamExpr& p = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const ParamExpr lead = a(i, k);
            for (std::size_t j = k + 1; j <= n; ++j) {
                ParamExpr updated = at(i, j) * p - lead * at(k, j);
                check_cap(updated, term_cap);
                at(i, j) = divide_exact(updated, previous);
                check_cap(at(i, j), term_cap);
            }
            a(i, k) = ParamExpr();
        }
        previous = p;
    }

    // Back substitution on scaled unknowns y_i = det * v_i, which are polynomials.
    const ParamExpr det = a(n - 1, n - 1);
    std::vector<ParamExpr> y(n);
    y[n - 1] = b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        ParamExpr acc = det * b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * y[j];
        check_cap(acc, term_cap);
        y[i] = divide_exact(acc, a(i, i));
    }
    return FractionFreeSolution{std::move(y), det};
}

}  // namespace probefp
