#pragma once

// Player strategies (deterministic Mealy machines) and parametrized
// probabilistic probes over a finite action alphabet.

#include "probefp/polyexpr.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace probefp {

// Index into an Alphabet.
struct Action {
    std::size_t id = 0;
    auto operator<=>(const Action&) const = default;
};

class Alphabet {
public:
    // Throws ValidationError unless there are >= 2 distinct symbols.
    explicit Alphabet(std::vector<std::string> symbols);
    static Alphabet cooperate_defect();

    std::size_t size() const { return symbols_.size(); }
    const std::string& symbol(Action a) const { return symbols_.at(a.id); }
    const std::vector<std::string>& symbols() const { return symbols_; }
    std::optional<Action> find(std::string_view symbol) const;
    std::vector<Action> actions() const;

    bool operator==(const Alphabet&) const = default;

private:
    std::vector<std::string> symbols_;
};

class PayoffMatrix {
public:
    // Conventional prisoner's dilemma: CC 3, CD 0, DC 5, DD 1.
    static PayoffMatrix prisoners_dilemma();

    // Entries row-major by (player action, opponent action).
    PayoffMatrix(Alphabet alphabet, std::vector<Rational> entries);

    const Alphabet& alphabet() const { return alphabet_; }
    const Rational& operator()(Action player, Action opponent) const {
        return entries_.at(player.id * alphabet_.size() + opponent.id);
    }
    void set(Action player, Action opponent, Rational value);
    PayoffMatrix scaled(const Rational& factor) const;
    Rational min_entry() const;
    Rational max_entry() const;

    bool operator==(const PayoffMatrix&) const = default;

private:
    Alphabet alphabet_;
    std::vector<Rational> entries_;
};

struct PlayerStep {
    std::size_t next_state = 0;
    Action output;

    bool operator==(const PlayerStep&) const = default;
};

class PlayerMachine {
public:
    // Validates totality and reachability; throws ValidationError.
    PlayerMachine(std::string name, Alphabet alphabet, std::vector<std::string> state_names,
                  std::size_t initial_state, Action initial_action,
                  std::vector<PlayerStep> steps);

    const std::string& name() const { return name_; }
    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t state_count() const { return state_names_.size(); }
    const std::string& state_name(std::size_t s) const { return state_names_.at(s); }
    std::size_t initial_state() const { return initial_state_; }
    Action initial_action() const { return initial_action_; }
    const PlayerStep& step(std::size_t state, Action observed) const {
        return steps_.at(state * alphabet_.size() + observed.id);
    }

    bool operator==(const PlayerMachine&) const = default;

private:
    std::string name_;
    Alphabet alphabet_;
    std::vector<std::string> state_names_;
    std::size_t initial_state_;
    Action initial_action_;
    std::vector<PlayerStep> steps_;  // state * |alphabet| + observed
};

struct ProbeOutcome {
    Action output;
    std::size_t next_state = 0;
    ParamExpr weight;

    bool operator==(const ProbeOutcome&) const = default;
};

// Outcomes sorted by (output, next_state), no duplicates, no zero weights.
using Distribution = std::vector<ProbeOutcome>;

// Sorts, merges identical (output, next_state) pairs and drops zero weights.
Distribution canonical_distribution(Distribution outcomes);

class Probe {
public:
    // Structural checks only (sizes, indices, reachability). Probability
    // checks live in validate_probe so they can be reported without throwing.
    Probe(std::string name, Alphabet alphabet, std::vector<std::string> state_names,
          Distribution initial, std::vector<Distribution> steps);

    const std::string& name() const { return name_; }
    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t state_count() const { return state_names_.size(); }
    const std::string& state_name(std::size_t s) const { return state_names_.at(s); }
    const Distribution& initial() const { return initial_; }
    const Distribution& step(std::size_t state, Action observed) const {
        return steps_.at(state * alphabet_.size() + observed.id);
    }

    bool operator==(const Probe&) const = default;

private:
    std::string name_;
    Alphabet alphabet_;
    std::vector<std::string> state_names_;
    Distribution initial_;
    std::vector<Distribution> steps_;
};

struct LatticePoint {
    unsigned i = 0;
    unsigned j = 0;
    unsigned n = 1;
    double x() const { return static_cast<double>(i) / n; }
    double y() const { return static_cast<double>(j) / n; }
};

struct ProbeValidation {
    struct Residual {
        std::string where;  // "init" or "state <s> input <a>"
        ParamExpr residual;  // 1 minus the sum of weights
    };
    struct Violation {
        std::string where;
        std::string weight;  // rendered expression
        LatticePoint point;
        double value = 0.0;
    };

    std::vector<Residual> residuals;  // one per distribution
    double min_weight = 0.0;
    LatticePoint min_point;
    std::vector<Violation> violations;  // outside [-1e-12, 1 + 1e-12]

    bool sums_ok() const;
    bool ok() const { return sums_ok() && violations.empty(); }
    std::string summary() const;
};

// Sum-to-one residuals, the 20-subdivision lattice range check, and an
// exact vertex check for affine weights.
ProbeValidation validate_probe(const Probe& probe);

// Parses the player file format; throws ParseError (with line) or ValidationError.
PlayerMachine parse_player(std::string_view text);

// Parses the probe file format and runs validate_probe; throws on failure.
Probe parse_probe(std::string_view text);

// x: play C, y: play D, 1-x-y: follow base. Base must use the {C, D} alphabet.
Probe joss_ann(const PlayerMachine& base);

// Always-C/Always-D style constant probe playing `action` from one state.
Probe constant_probe(const Alphabet& alphabet, Action action, std::string name);

// Payoff config lines: `payoff <a> <b> <value>` with `#` comments. Starts
// from `base` and overrides the listed entries.
PayoffMatrix parse_payoff_lines(std::string_view text, PayoffMatrix base);

// First keyword of the first non-comment line ("player", "probe", ...).
std::string header_keyword(std::string_view text);

// Canonical text form of machines, parseable by parse_player / parse_probe.
std::string render_player(const PlayerMachine& player);
std::string render_probe(const Probe& probe);

}  // namespace probefp
