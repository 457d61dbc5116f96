#pragma once

// Fraction-free (Bareiss) elimination over Q[x, y].

#include "probefp/polyexpr.hpp"

#include <cstddef>
#include <vector>

namespace probefp {

// Square matrix of polynomials, row-major.
class PolyMatrix {
public:
    explicit PolyMatrix(std::size_t n) : n_(n), data_(n * n) {}

    std::size_t size() const { return n_; }
    ParamExpr& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    const ParamExpr& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

private:
    std::size_t n_;
    std::vector<ParamExpr> data_;
};

inline constexpr std::size_t kDefaultTermCap = 200000;

// Solution of A v = b as v = numerators / determinant, all polynomials.
struct FractionFreeSolution {
    std::vector<ParamExpr> numerators;
    ParamExpr determinant;  // det(A) up to sign; never zero
};

// Throws std::domain_error when A is singular over Q(x, y) and SwellError when
// any intermediate polynomial exceeds `term_cap` terms.
FractionFreeSolution solve_fraction_free(PolyMatrix a, std::vector<ParamExpr> b,
                                         std::size_t term_cap = kDefaultTermCap);

}  // namespace probefp
