#include "probefp/metrics.hpp"

#include "probefp/errors.hpp"

#include <cmath>
#include <memory>
#include <set>
#include <stdexcept>

namespace probefp {

FingerprintFn evaluable(FingerprintGrid grid) {
    auto shared = std::make_shared<const FingerprintGrid>(std::move(grid));
    return [shared](double x, double y) { return shared->interpolate(x, y); };
}

FingerprintFn evaluable(SymbolicFingerprint fp) {
    auto shared = std::make_shared<const SymbolicFingerprint>(std::move(fp));
    return [shared](double x, double y) { return shared->eval(x, y); };
}

FingerprintFn evaluable(ParamChain chain, BoundaryMode mode) {
    auto shared = std::make_shared<const ParamChain>(std::move(chain));
    return [shared, mode](double x, double y) { return fingerprint_at(*shared, x, y, mode); };
}

std::vector<std::pair<double, double>> quadrature_nodes(unsigned n) {
    if (n < 1) throw std::invalid_argument("quadrature resolution must be >= 1");
    std::vector<std::pair<double, double>> nodes;
    nodes.reserve(static_cast<std::size_t>(n) * n);
    const double h = 1.0 / n;
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; i + j + 1 <= n; ++j) {
            nodes.emplace_back((i + 1.0 / 3.0) * h, (j + 1.0 / 3.0) * h);
        }
    }
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; i + j + 2 <= n; ++j) {
            nodes.emplace_back((i + 2.0 / 3.0) * h, (j + 2.0 / 3.0) * h);
        }
    }
    return nodes;
}

std::vector<double> quadrature_samples(const FingerprintFn& f, unsigned n) {
    const auto nodes = quadrature_nodes(n);
    std::vector<double> out;
    out.reserve(nodes.size());
    for (const auto& [x, y] : nodes) out.push_back(f(x, y));
    return out;
}

double l2_from_samples(const std::vector<double>& f, const std::vector<double>& g, unsigned n) {
    if (f.size() != g.size() || f.size() != static_cast<std::size_t>(n) * n) {
        throw std::invalid_argument("l2_from_samples: sample count does not match n^2");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double diff = f[k] - g[k];
        sum += diff * diff;
    }
    return std::sqrt(sum / (2.0 * n * n));
}

double l2_distance(const FingerprintFn& f, const FingerprintFn& g, unsigned n) {
    return l2_from_samples(quadrature_samples(f, n), quadrature_samples(g, n), n);
}

DistanceMatrix distance_matrix(const std::vector<std::pair<std::string, FingerprintFn>>& corpus,
                               unsigned n) {
    DistanceMatrix out;
    std::set<std::string> seen;
    for (const auto& [name, fn] : corpus) {
        if (!seen.insert(name).second) {
            throw std::invalid_argument("duplicate fingerprint name '" + name + "'");
        }
        out.names.push_back(name);
    }
    const std::size_t k = corpus.size();

    std::vector<std::vector<double>> samples;
    samples.reserve(k);
    for (const auto& [name, fn] : corpus) {
        try {
            samples.push_back(quadrature_samples(fn, n));
        } catch (const NumericError& e) {
            throw NumericError("fingerprint '" + name + "': " + e.what(), e.x(), e.y());
        } catch (const Error& e) {
            throw Error("fingerprint '" + name + "': " + e.what());
        }
    }

    out.d.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double v = l2_from_samples(samples[i], samples[j], n);
            out.d[i * k + j] = v;
            out.d[j * k + i] = v;
        }
    }
    return out;
}

}  // namespace probefp
