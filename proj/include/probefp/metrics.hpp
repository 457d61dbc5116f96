#pragma once

// L2 distances between fingerprints over the parameter simplex.

#include "probefp/chain.hpp"
#include "probefp/fingerprint.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace probefp {

// Anything that can be evaluated at an interior point of the simplex.
using FingerprintFn = std::function<double(double, double)>;

FingerprintFn evaluable(FingerprintGrid grid);
FingerprintFn evaluable(SymbolicFingerprint fp);
// Computes the limit distribution at every requested point.
FingerprintFn evaluable(ParamChain chain, BoundaryMode mode = BoundaryMode::Cesaro);

inline constexpr unsigned kDefaultQuadratureN = 200;

// Centroids of the n^2 congruent subtriangles of the n-subdivision: all
// upward triangles in (i, j) order, then all downward ones.
std::vector<std::pair<double, double>> quadrature_nodes(unsigned n);

// F sampled at quadrature_nodes(n).
std::vector<double> quadrature_samples(const FingerprintFn& f, unsigned n);

// sqrt( sum over subtriangles of (f - g)^2 at the centroid * 1/(2 n^2) ).
double l2_from_samples(const std::vector<double>& f, const std::vector<double>& g, unsigned n);
double l2_distance(const FingerprintFn& f, const FingerprintFn& g,
                   unsigned n = kDefaultQuadratureN);

struct DistanceMatrix {
    std::vector<std::string> names;
    std::vector<double> d;  // row-major, names.size()^2

    std::size_t size() const { return names.size(); }
    double operator()(std::size_t i, std::size_t j) const { return d.at(i * names.size() + j); }
};

// Throws std::invalid_argument on duplicate names; evaluation errors are
// rethrown annotated with the offending fingerprint.
DistanceMatrix distance_matrix(const std::vector<std::pair<std::string, FingerprintFn>>& corpus,
                               unsigned n = kDefaultQuadratureN);

}  // namespace probefp
