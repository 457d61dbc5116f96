#include "probefp/fingerprint.hpp"

#include "probefp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace probefp {

std::string_view to_string(BoundaryMode mode) {
    return mode == BoundaryMode::Cesaro ? "cesaro" : "interior_offset";
}

BoundaryMode parse_boundary_mode(std::string_view text) {
    if (text == "cesaro") return BoundaryMode::Cesaro;
    if (text == "offset" || text == "interior_offset") return BoundaryMode::InteriorOffset;
    throw std::invalid_argument("unknown boundary mode '" + std::string(text) + "'");
}

bool on_simplex_boundary(double x, double y) {
    return x <= 0.0 || y <= 0.0 || x + y >= 1.0 - 1e-12;
}

std::pair<double, double> pull_to_interior(double x, double y) {
    if (!on_simplex_boundary(x, y)) return {x, y};
    constexpr double c = 1.0 / 3.0;
    return {x + kInteriorOffset * (c - x), y + kInteriorOffset * (c - y)};
}

double fingerprint_at(const ParamChain& chain, double x, double y, BoundaryMode mode) {
    if (!in_simplex(x, y)) {
        throw OutOfSimplexError("point outside the parameter simplex", x, y);
    }
    if (mode == BoundaryMode::InteriorOffset) std::tie(x, y) = pull_to_interior(x, y);
    const NumericChain m = evaluate(chain, x, y);
    return expected_payoff(limit_distribution(m), m.payoff);
}

double fingerprint_at(const PlayerMachine& player, const Probe& probe, const PayoffMatrix& payoff,
                      double x, double y, BoundaryMode mode) {
    return fingerprint_at(compose(player, probe, payoff), x, y, mode);
}

// ---------------------------------------------------------------- grids

double FingerprintGrid::interpolate(double x, double y) const {
    if (!in_simplex(x, y)) throw OutOfSimplexError("interpolation point outside the simplex", x, y);
    const double u = x * n;
    const double v = y * n;
    auto i = static_cast<unsigned>(std::min<double>(std::floor(u), n));
    auto j = static_cast<unsigned>(std::min<double>(std::floor(v), n));
    if (i + j >= n) {
        // On (or rounding past) the hypotenuse: snap to the nearest node on it.
        j = std::min(j, n - std::min(i, n));
        i = n - j;
        return at(i, j);
    }
    const double fu = u - i;
    const double fv = v - j;
    if (fu + fv <= 1.0 || i + j + 2 > n) {
        return (1.0 - fu - fv) * at(i, j) + fu * at(i + 1, j) + fv * at(i, j + 1);
    }
    return (fu + fv - 1.0) * at(i + 1, j + 1) + (1.0 - fv) * at(i + 1, j) + (1.0 - fu) * at(i, j + 1);
}

FingerprintGrid fingerprint_grid(const PlayerMachine& player, const Probe& probe,
                                 const PayoffMatrix& payoff, unsigned n, BoundaryMode mode) {
    if (n < 1) throw std::invalid_argument("grid resolution must be >= 1");
    const ParamChain chain = compose(player, probe, payoff);
    FingerprintGrid grid;
    grid.n = n;
    grid.mode = mode;
    grid.meta = {player.name(), probe.name(), payoff};
    grid.values.reserve(FingerprintGrid::point_count(n));
    for (unsigned i = 0; i <= n; ++i) {
        for (unsigned j = 0; i + j <= n; ++j) {
            grid.values.push_back(fingerprint_at(chain, static_cast<double>(i) / n,
                                                 static_cast<double>(j) / n, mode));
        }
    }
    return grid;
}

// ---------------------------------------------------------------- symbolic

SymbolicFingerprint symbolic_fingerprint(const PlayerMachine& player, const Probe& probe,
                                         const PayoffMatrix& payoff, std::size_t term_cap) {
    const ParamChain chain = compose(player, probe, payoff);
    const std::size_t n = chain.size();

    const auto classes = closed_classes(evaluate(chain, 1.0 / 3.0, 1.0 / 3.0));
    if (classes.size() != 1 || !classes.front().closed) {
        throw ReducibleChainError("joint chain of '" + player.name() + "' vs '" + probe.name() +
                                  "' is reducible at (1/3, 1/3): " + describe_classes(classes) +
                                  "; use grid mode");
    }

    // Transpose of pi (I - P) = 0 with the last equation replaced by sum pi = 1.
    PolyMatrix a(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (const auto& [t, w] : chain.row(s)) a(t, s) -= w;
        a(s, s) += ParamExpr(1);
    }
    for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = ParamExpr(1);
    std::vector<ParamExpr> b(n);
    b[n - 1] = ParamExpr(1);

    FractionFreeSolution sol;
    try {
        sol = solve_fraction_free(std::move(a), std::move(b), term_cap);
    } catch (const std::domain_error& e) {
        throw ReducibleChainError(std::string("stationary system is singular: ") + e.what());
    }

    ParamExpr num;
    ParamExpr mass;
    for (std::size_t s = 0; s < n; ++s) {
        num += sol.numerators[s] * chain.payoff()[s];
        mass += sol.numerators[s];
    }
    if (!(mass == sol.determinant)) {
        throw std::logic_error("symbolic stationary distribution does not sum to one");
    }

    SymbolicFingerprint out{RationalFn(std::move(num), sol.determinant),
                            {player.name(), probe.name(), payoff}, 0.0, 0};
    constexpr unsigned kLattice = 20;
    for (unsigned i = 1; i < kLattice; ++i) {
        for (unsigned j = 1; i + j < kLattice; ++j) {
            const double x = static_cast<double>(i) / kLattice;
            const double y = static_cast<double>(j) / kLattice;
            double exact = 0.0;
            try {
                exact = out.f.eval(x, y);
            } catch (const SingularPointError& e) {
                throw NumericError(std::string("symbolic fingerprint: ") + e.what(), x, y);
            }
            const double numeric = fingerprint_at(chain, x, y, BoundaryMode::Cesaro);
            out.max_deviation = std::max(out.max_deviation, std::fabs(exact - numeric));
            ++out.checked_points;
        }
    }
    return out;
}

// ---------------------------------------------------------------- boundary

double BoundaryDiscrepancy::Point::difference() const { return std::fabs(cesaro - offset); }

BoundaryDiscrepancy boundary_discrepancy(const PlayerMachine& player, const Probe& probe,
                                         const PayoffMatrix& payoff, unsigned n) {
    if (n < 2) throw std::invalid_argument("boundary discrepancy needs n >= 2");
    const ParamChain chain = compose(player, probe, payoff);
    BoundaryDiscrepancy report;
    report.n = n;
    for (unsigned i = 0; i <= n; ++i) {
        for (unsigned j = 0; i + j <= n; ++j) {
            if (i != 0 && j != 0 && i + j != n) continue;
            const double x = static_cast<double>(i) / n;
            const double y = static_cast<double>(j) / n;
            BoundaryDiscrepancy::Point p{i, j, fingerprint_at(chain, x, y, BoundaryMode::Cesaro),
                                         fingerprint_at(chain, x, y, BoundaryMode::InteriorOffset)};
            report.max_difference = std::max(report.max_difference, p.difference());
            report.points.push_back(p);
        }
    }
    return report;
}

}  // namespace probefp
