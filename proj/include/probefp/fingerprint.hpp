#pragma once

// Fingerprints: limiting expected payoff of a player against a probe as a
// function of the probe parameters (x, y) on the simplex.

#include "probefp/automata.hpp"
#include "probefp/bareiss.hpp"
#include "probefp/chain.hpp"
#include "probefp/polyexpr.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace probefp {

enum class BoundaryMode {
    Cesaro,          // limit from the actual initial distribution, everywhere
    InteriorOffset,  // boundary points pulled toward the centroid first
};

inline constexpr double kInteriorOffset = 1e-6;

std::string_view to_string(BoundaryMode mode);
// Accepts "cesaro", "offset" and "interior_offset".
BoundaryMode parse_boundary_mode(std::string_view text);

bool on_simplex_boundary(double x, double y);
// Moves a boundary point a fraction kInteriorOffset of the way to (1/3, 1/3).
std::pair<double, double> pull_to_interior(double x, double y);

double fingerprint_at(const ParamChain& chain, double x, double y,
                      BoundaryMode mode = BoundaryMode::Cesaro);
double fingerprint_at(const PlayerMachine& player, const Probe& probe, const PayoffMatrix& payoff,
                      double x, double y, BoundaryMode mode = BoundaryMode::Cesaro);

struct FingerprintMeta {
    std::string player;
    std::string probe;
    PayoffMatrix payoff = PayoffMatrix::prisoners_dilemma();
};

// Values on {(i/n, j/n) : i + j <= n}, stored in lexicographic (i, j) order.
struct FingerprintGrid {
    unsigned n = 1;
    BoundaryMode mode = BoundaryMode::Cesaro;
    std::vector<double> values;
    FingerprintMeta meta;

    static std::size_t point_count(unsigned n) { return (n + 1u) * (n + 2u) / 2u; }
    std::size_t index(unsigned i, unsigned j) const {
        return static_cast<std::size_t>(i) * (n + 1) - static_cast<std::size_t>(i) * (i - 1) / 2 + j;
    }
    double at(unsigned i, unsigned j) const { return values.at(index(i, j)); }

    // Barycentric interpolation on the lattice triangle containing (x, y).
    double interpolate(double x, double y) const;
};

FingerprintGrid fingerprint_grid(const PlayerMachine& player, const Probe& probe,
                                 const PayoffMatrix& payoff, unsigned n,
                                 BoundaryMode mode = BoundaryMode::Cesaro);

struct SymbolicFingerprint {
    RationalFn f;
    FingerprintMeta meta;
    // Agreement with the numeric path on the interior of the 20-subdivision.
    double max_deviation = 0.0;
    std::size_t checked_points = 0;

    static constexpr double kAgreementTolerance = 1e-8;
    bool agrees() const { return max_deviation <= kAgreementTolerance; }
    double eval(double x, double y) const { return f.eval(x, y); }
};

// Solves the stationary system over Q[x, y] by fraction-free elimination.
// Throws ReducibleChainError unless the chain evaluated at (1/3, 1/3) is a
// single closed class, SwellError past `term_cap`, and NumericError if the
// denominator vanishes at an interior validation point.
SymbolicFingerprint symbolic_fingerprint(const PlayerMachine& player, const Probe& probe,
                                         const PayoffMatrix& payoff,
                                         std::size_t term_cap = kDefaultTermCap);

struct BoundaryDiscrepancy {
    struct Point {
        unsigned i = 0;
        unsigned j = 0;
        double cesaro = 0.0;
        double offset = 0.0;
        double difference() const;
    };
    unsigned n = 2;
    std::vector<Point> points;  // boundary lattice points in (i, j) order
    double max_difference = 0.0;
};

BoundaryDiscrepancy boundary_discrepancy(const PlayerMachine& player, const Probe& probe,
                                         const PayoffMatrix& payoff, unsigned n);

}  // namespace probefp
