#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "probefp/automata.hpp"
#include "probefp/errors.hpp"
#include "probefp/fingerprint.hpp"
#include "probefp/io.hpp"
#include "probefp/metrics.hpp"
#include "probefp/simulate.hpp"

#include <optional>
#include <set>
#include <tuple>

namespace py = pybind11;
using namespace probefp;

namespace {

using PayoffOverrides = std::vector<std::tuple<std::string, std::string, std::string>>;

// Prisoner's dilemma defaults for {C, D}; other alphabets must list every pair.
PayoffMatrix make_payoff(const Alphabet& alphabet, const std::optional<PayoffOverrides>& overrides) {
    const bool pd = alphabet == Alphabet::cooperate_defect();
    PayoffMatrix payoff = pd ? PayoffMatrix::prisoners_dilemma()
                             : PayoffMatrix(alphabet, std::vector<Rational>(alphabet.size() * alphabet.size()));
    std::set<std::pair<std::size_t, std::size_t>> seen;
    if (overrides) {
        for (const auto& [a, b, v] : *overrides) {
            const auto pa = alphabet.find(a);
            const auto pb = alphabet.find(b);
            if (!pa || !pb) throw ValidationError("payoff entry uses an unknown action");
            payoff.set(*pa, *pb, parse_rational(v));
            seen.insert({pa->id, pb->id});
        }
    }
    if (!pd && seen.size() != alphabet.size() * alphabet.size()) {
        throw ValidationError("non-{C,D} alphabets need a payoff entry for every action pair");
    }
    return payoff;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fingerprints of finite-state game strategies against parametrized probes";
    m.attr("__version__") = std::string(kToolVersion);

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<NumericError>(m, "NumericError", base.ptr());
    py::register_exception<ReducibleChainError>(m, "ReducibleChainError", base.ptr());
    py::register_exception<SwellError>(m, "SwellError", base.ptr());

    m.def("parse_expr", [](const std::string& text) { return parse_expr(text).render(); },
          "Canonical form of a polynomial expression in x and y.");
    m.def("eval_expr", [](const std::string& text, double x, double y) { return parse_expr(text).eval(x, y); });

    py::class_<PlayerMachine>(m, "Player")
        .def_property_readonly("name", &PlayerMachine::name)
        .def_property_readonly("state_count", &PlayerMachine::state_count)
        .def("__str__", &render_player);
    py::class_<Probe>(m, "Probe")
        .def_property_readonly("name", &Probe::name)
        .def_property_readonly("state_count", &Probe::state_count)
        .def("__str__", &render_probe);

    m.def("parse_player", [](const std::string& text) { return parse_player(text); });
    m.def("parse_probe", [](const std::string& text) { return parse_probe(text); });
    m.def("joss_ann", &joss_ann, py::arg("base"));
    m.def("validate_probe", [](const Probe& p) {
        const ProbeValidation r = validate_probe(p);
        return py::dict(py::arg("ok") = r.ok(), py::arg("min_weight") = r.min_weight,
                        py::arg("summary") = r.summary());
    });

    m.def(
        "fingerprint_at",
        [](const PlayerMachine& player, const Probe& probe, double x, double y, const std::string& boundary,
           const std::optional<PayoffOverrides>& payoff) {
            return fingerprint_at(player, probe, make_payoff(player.alphabet(), payoff), x, y,
                                  parse_boundary_mode(boundary));
        },
        py::arg("player"), py::arg("probe"), py::arg("x"), py::arg("y"), py::arg("boundary") = "cesaro",
        py::arg("payoff") = py::none());

    m.def(
        "fingerprint_grid",
        [](const PlayerMachine& player, const Probe& probe, unsigned n, const std::string& boundary,
           const std::optional<PayoffOverrides>& payoff) {
            const FingerprintGrid grid = fingerprint_grid(player, probe, make_payoff(player.alphabet(), payoff), n,
                                                          parse_boundary_mode(boundary));
            std::vector<std::tuple<double, double, double>> rows;
            for (unsigned i = 0; i <= grid.n; ++i) {
                for (unsigned j = 0; i + j <= grid.n; ++j) {
                    rows.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n, grid.at(i, j));
                }
            }
            return rows;
        },
        py::arg("player"), py::arg("probe"), py::arg("n") = 20, py::arg("boundary") = "cesaro",
        py::arg("payoff") = py::none());

    m.def(
        "symbolic_fingerprint",
        [](const PlayerMachine& player, const Probe& probe, const std::optional<PayoffOverrides>& payoff) {
            const SymbolicFingerprint fp =
                symbolic_fingerprint(player, probe, make_payoff(player.alphabet(), payoff));
            return py::dict(py::arg("num") = fp.f.num().render(), py::arg("den") = fp.f.den().render(),
                            py::arg("max_deviation") = fp.max_deviation, py::arg("agrees") = fp.agrees());
        },
        py::arg("player"), py::arg("probe"), py::arg("payoff") = py::none());

    m.def(
        "distance_matrix",
        [](const std::vector<std::tuple<std::string, PlayerMachine, Probe>>& corpus, unsigned quad_n) {
            std::vector<std::pair<std::string, FingerprintFn>> fns;
            for (const auto& [name, player, probe] : corpus) {
                fns.emplace_back(name, evaluable(compose(player, probe, make_payoff(player.alphabet(), {}))));
            }
            const DistanceMatrix d = distance_matrix(fns, quad_n);
            std::vector<std::vector<double>> rows(d.size(), std::vector<double>(d.size()));
            for (std::size_t i = 0; i < d.size(); ++i) {
                for (std::size_t j = 0; j < d.size(); ++j) rows[i][j] = d(i, j);
            }
            return std::make_pair(d.names, rows);
        },
        py::arg("corpus"), py::arg("quad_n") = kDefaultQuadratureN,
        "corpus: list of (name, player, probe); returns (names, matrix).");

    m.def(
        "estimate",
        [](const PlayerMachine& player, const Probe& probe, double x, double y, std::uint64_t rounds,
           std::optional<std::uint64_t> burn_in, unsigned replicates, std::uint64_t seed) {
            const SimEstimate e = estimate(player, probe, make_payoff(player.alphabet(), {}), x, y, rounds,
                                           burn_in.value_or(rounds / 10), replicates, seed);
            return py::dict(py::arg("mean") = e.mean, py::arg("stderr") = e.std_error,
                            py::arg("rounds") = e.rounds, py::arg("burn_in") = e.burn_in,
                            py::arg("replicates") = e.replicates, py::arg("seed") = e.seed,
                            py::arg("rng") = std::string(kRngName));
        },
        py::arg("player"), py::arg("probe"), py::arg("x"), py::arg("y"), py::arg("rounds") = 100000,
        py::arg("burn_in") = py::none(), py::arg("replicates") = 32, py::arg("seed") = 1);
}
