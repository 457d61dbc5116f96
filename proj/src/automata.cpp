#include "probefp/automata.hpp"

#include "probefp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace probefp {

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.size() < 2) throw ValidationError("alphabet needs at least two symbols");
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.empty() || s.find_first_of(" \t#:") != std::string::npos || s == "->") {
            throw ValidationError("invalid action symbol '" + s + "'");
        }
        if (!seen.insert(s).second) throw ValidationError("duplicate action symbol '" + s + "'");
    }
}

Alphabet Alphabet::cooperate_defect() { return Alphabet({"C", "D"}); }

std::optional<Action> Alphabet::find(std::string_view symbol) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i] == symbol) return Action{i};
    }
    return std::nullopt;
}

std::vector<Action> Alphabet::actions() const {
    std::vector<Action> out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) out.push_back(Action{i});
    return out;
}

// ---------------------------------------------------------------- PayoffMatrix

PayoffMatrix::PayoffMatrix(Alphabet alphabet, std::vector<Rational> entries)
    : alphabet_(std::move(alphabet)), entries_(std::move(entries)) {
    if (entries_.size() != alphabet_.size() * alphabet_.size()) {
        throw ValidationError("payoff matrix must define every ordered action pair");
    }
}

PayoffMatrix PayoffMatrix::prisoners_dilemma() {
    return PayoffMatrix(Alphabet::cooperate_defect(), {3, 0, 5, 1});
}

void PayoffMatrix::set(Action player, Action opponent, Rational value) {
    entries_.at(player.id * alphabet_.size() + opponent.id) = std::move(value);
}

PayoffMatrix PayoffMatrix::scaled(const Rational& factor) const {
    PayoffMatrix out = *this;
    for (auto& e : out.entries_) e *= factor;
    return out;
}

Rational PayoffMatrix::min_entry() const { return *std::min_element(entries_.begin(), entries_.end()); }
Rational PayoffMatrix::max_entry() const { return *std::max_element(entries_.begin(), entries_.end()); }

// ---------------------------------------------------------------- PlayerMachine

PlayerMachine::PlayerMachine(std::string name, Alphabet alphabet,
                             std::vector<std::string> state_names, std::size_t initial_state,
                             Action initial_action, std::vector<PlayerStep> steps)
    : name_(std::move(name)),
      alphabet_(std::move(alphabet)),
      state_names_(std::move(state_names)),
      initial_state_(initial_state),
      initial_action_(initial_action),
      steps_(std::move(steps)) {
    const std::size_t n = state_names_.size();
    if (n == 0) throw ValidationError("player '" + name_ + "' has no states");
    if (steps_.size() != n * alphabet_.size()) {
        throw ValidationError("player '" + name_ + "': transition table is not total");
    }
    if (initial_state_ >= n || initial_action_.id >= alphabet_.size()) {
        throw ValidationError("player '" + name_ + "': invalid start");
    }
    for (const auto& st : steps_) {
        if (st.next_state >= n || st.output.id >= alphabet_.size()) {
            throw ValidationError("player '" + name_ + "': transition out of range");
        }
    }
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{initial_state_};
    seen[initial_state_] = true;
    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        for (Action a : alphabet_.actions()) {
            const std::size_t t = step(s, a).next_state;
            if (!seen[t]) {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!seen[s]) {
            throw ValidationError("player '" + name_ + "': state " + state_names_[s] +
                                  " is unreachable from the start state");
        }
    }
}

// ---------------------------------------------------------------- Probe

Distribution canonical_distribution(Distribution outcomes) {
    std::map<std::pair<std::size_t, std::size_t>, ParamExpr> merged;
    for (auto& o : outcomes) merged[{o.output.id, o.next_state}] += o.weight;
    Distribution out;
    for (auto& [key, w] : merged) {
        if (w.is_zero()) continue;
        out.push_back(ProbeOutcome{Action{key.first}, key.second, std::move(w)});
    }
    return out;
}

Probe::Probe(std::string name, Alphabet alphabet, std::vector<std::string> state_names,
             Distribution initial, std::vector<Distribution> steps)
    : name_(std::move(name)),
      alphabet_(std::move(alphabet)),
      state_names_(std::move(state_names)),
      initial_(canonical_distribution(std::move(initial))),
      steps_(std::move(steps)) {
    const std::size_t n = state_names_.size();
    if (n == 0) throw ValidationError("probe '" + name_ + "' has no states");
    if (steps_.size() != n * alphabet_.size()) {
        throw ValidationError("probe '" + name_ + "': transition table is not total");
    }
    for (auto& d : steps_) d = canonical_distribution(std::move(d));

    auto check = [&](const Distribution& d) {
        for (const auto& o : d) {
            if (o.next_state >= n || o.output.id >= alphabet_.size()) {
                throw ValidationError("probe '" + name_ + "': outcome out of range");
            }
        }
    };
    check(initial_);
    for (const auto& d : steps_) check(d);
    if (initial_.empty()) throw ValidationError("probe '" + name_ + "': empty initial distribution");

    // Nonzero polynomial weights are positive at generic interior points.
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue;
    for (const auto& o : initial_) {
        if (!seen[o.next_state]) {
            seen[o.next_state] = true;
            queue.push_back(o.next_state);
        }
    }
    while (!queue.empty()) {
        const std::size_t s = queue.front();
        queue.pop_front();
        for (Action a : alphabet_.actions()) {
            for (const auto& o : step(s, a)) {
                if (!seen[o.next_state]) {
                    seen[o.next_state] = true;
                    queue.push_back(o.next_state);
                }
            }
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!seen[s]) {
            throw ValidationError("probe '" + name_ + "': state " + state_names_[s] +
                                  " is unreachable");
        }
    }
}

bool ProbeValidation::sums_ok() const {
    return std::all_of(residuals.begin(), residuals.end(),
                       [](const Residual& r) { return r.residual.is_zero(); });
}

std::string ProbeValidation::summary() const {
    std::ostringstream out;
    for (const auto& r : residuals) {
        if (!r.residual.is_zero()) {
            out << "sum-to-one violation at " << r.where << ": residual 1 - sum = "
                << r.residual.render() << "\n";
        }
    }
    for (const auto& v : violations) {
        out << "weight '" << v.weight << "' at " << v.where << " evaluates to " << v.value
            << " at lattice point (" << v.point.i << "/" << v.point.n << ", " << v.point.j << "/"
            << v.point.n << ")\n";
    }
    out << "minimum sampled weight " << min_weight << " at (" << min_point.x() << ", "
        << min_point.y() << ")";
    return out.str();
}

ProbeValidation validate_probe(const Probe& probe) {
    constexpr unsigned kLattice = 20;
    constexpr double kTol = 1e-12;

    ProbeValidation report;
    report.min_weight = std::numeric_limits<double>::infinity();

    auto inspect = [&](const Distribution& d, const std::string& where) {
        ParamExpr sum;
        for (const auto& o : d) sum += o.weight;
        report.residuals.push_back({where, ParamExpr(1) - sum});

        for (const auto& o : d) {
            bool flagged = false;
            auto flag = [&](LatticePoint p, double value) {
                if (flagged) return;
                flagged = true;
                report.violations.push_back({where, o.weight.render(), p, value});
            };
            for (unsigned i = 0; i <= kLattice; ++i) {
                for (unsigned j = 0; i + j <= kLattice; ++j) {
                    const double value =
                        o.weight.eval_exact(Rational(i, kLattice), Rational(j, kLattice)).get_d();
                    const LatticePoint p{i, j, kLattice};
                    if (value < report.min_weight) {
                        report.min_weight = value;
                        report.min_point = p;
                    }
                    if (value < -kTol || value > 1.0 + kTol) flag(p, value);
                }
            }
            // An affine weight lies in [0, 1] on the triangle iff it does at the vertices.
            if (o.weight.total_degree() <= 1) {
                for (auto [i, j] : {std::pair{0u, 0u}, {1u, 0u}, {0u, 1u}}) {
                    const Rational v = o.weight.eval_exact(i, j);
                    if (sgn(v) < 0 || v > 1) flag(LatticePoint{i, j, 1}, v.get_d());
                }
            }
        }
    };

    inspect(probe.initial(), "init");
    for (std::size_t s = 0; s < probe.state_count(); ++s) {
        for (Action a : probe.alphabet().actions()) {
            inspect(probe.step(s, a),
                    "state " + probe.state_name(s) + " input " + probe.alphabet().symbol(a));
        }
    }
    return report;
}

// ---------------------------------------------------------------- Parsing

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
    std::string tail;  // text after the first ':' (probe weights)
    bool has_colon = false;
};

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<Line> lex_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++number;
        std::string_view raw = text.substr(start, end - start);
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        Line line{number, {}, {}, false};
        if (auto colon = raw.find(':'); colon != std::string_view::npos) {
            line.has_colon = true;
            line.tail = std::string(raw.substr(colon + 1));
            raw = raw.substr(0, colon);
        }
        line.tokens = split_ws(raw);
        if (!line.tokens.empty() || line.has_colon) lines.push_back(std::move(line));
        if (end == text.size()) break;
        start = end + 1;
    }
    return lines;
}

[[noreturn]] void syntax(std::size_t line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what, ParseError::Kind::Line, line);
}

// Assigns state indices in order of first appearance.
class StateTable {
public:
    std::size_t intern(const std::string& name) {
        auto [it, inserted] = index_.try_emplace(name, names_.size());
        if (inserted) names_.push_back(name);
        return it->second;
    }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::map<std::string, std::size_t> index_;
    std::vector<std::string> names_;
};

// Shared `<kind> NAME` and `alphabet ...` prologue.
struct Prologue {
    std::string name;
    Alphabet alphabet = Alphabet::cooperate_defect();
    std::size_t body_start = 0;
};

Prologue parse_prologue(const std::vector<Line>& lines, const std::string& kind) {
    Prologue p;
    if (lines.empty()) throw ParseError("empty " + kind + " file", ParseError::Kind::Line, 1);
    const Line& head = lines.front();
    if (head.has_colon || head.tokens.size() != 2 || head.tokens[0] != kind) {
        syntax(head.number, "expected '" + kind + " <NAME>'");
    }
    p.name = head.tokens[1];
    p.body_start = 1;
    if (lines.size() > 1 && !lines[1].tokens.empty() && lines[1].tokens[0] == "alphabet") {
        const Line& al = lines[1];
        if (al.has_colon) syntax(al.number, "unexpected ':' in alphabet line");
        try {
            p.alphabet = Alphabet({al.tokens.begin() + 1, al.tokens.end()});
        } catch (const ValidationError& e) {
            syntax(al.number, e.what());
        }
        p.body_start = 2;
    }
    return p;
}

Action lookup_action(const Alphabet& alphabet, const std::string& sym, std::size_t line) {
    auto a = alphabet.find(sym);
    if (!a) syntax(line, "action '" + sym + "' is not in the alphabet");
    return *a;
}

}  // namespace

std::string header_keyword(std::string_view text) {
    const auto lines = lex_lines(text);
    if (lines.empty() || lines.front().tokens.empty()) return {};
    return lines.front().tokens.front();
}

PlayerMachine parse_player(std::string_view text) {
    const auto lines = lex_lines(text);
    const Prologue pro = parse_prologue(lines, "player");
    const Alphabet& alphabet = pro.alphabet;

    StateTable states;
    std::optional<std::pair<std::size_t, Action>> start;
    struct Rule {
        std::size_t line;
        std::size_t from;
        Action input;
        std::size_t to;
        Action output;
    };
    std::vector<Rule> rules;

    for (std::size_t k = pro.body_start; k < lines.size(); ++k) {
        const Line& ln = lines[k];
        if (ln.has_colon) syntax(ln.number, "unexpected ':' in player file");
        const auto& t = ln.tokens;
        if (t[0] == "alphabet") syntax(ln.number, "alphabet must directly follow the header");
        if (t[0] == "player") syntax(ln.number, "duplicate header");
        if (t[0] == "start") {
            if (t.size() != 3) syntax(ln.number, "expected 'start <state> <action>'");
            if (start) syntax(ln.number, "duplicate start line");
            start = {states.intern(t[1]), lookup_action(alphabet, t[2], ln.number)};
            continue;
        }
        if (t.size() != 5 || t[2] != "->") {
            syntax(ln.number, "expected '<state> <input> -> <nextstate> <output>'");
        }
        const std::size_t from = states.intern(t[0]);
        const Action input = lookup_action(alphabet, t[1], ln.number);
        const std::size_t to = states.intern(t[3]);
        const Action output = lookup_action(alphabet, t[4], ln.number);
        rules.push_back({ln.number, from, input, to, output});
    }
    if (!start) throw ParseError("missing 'start <state> <action>' line", ParseError::Kind::Line,
                                 lines.back().number);

    const std::size_t n = states.names().size();
    const std::size_t m = alphabet.size();
    std::vector<std::optional<PlayerStep>> table(n * m);
    for (const auto& r : rules) {
        auto& slot = table[r.from * m + r.input.id];
        if (slot) {
            throw ValidationError("line " + std::to_string(r.line) + ": duplicate rule for state " +
                                  states.names()[r.from] + " input " + alphabet.symbol(r.input));
        }
        slot = PlayerStep{r.to, r.output};
    }
    std::vector<PlayerStep> steps;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < m; ++a) {
            if (!table[s * m + a]) {
                throw ValidationError("missing transition for state " + states.names()[s] +
                                      " input " + alphabet.symbol(Action{a}));
            }
            steps.push_back(*table[s * m + a]);
        }
    }
    return PlayerMachine(pro.name, alphabet, states.names(), start->first, start->second,
                         std::move(steps));
}

Probe parse_probe(std::string_view text) {
    const auto lines = lex_lines(text);
    const Prologue pro = parse_prologue(lines, "probe");
    const Alphabet& alphabet = pro.alphabet;

    auto weight_of = [](const Line& ln) {
        if (!ln.has_colon) syntax(ln.number, "missing ': <weight>'");
        try {
            return parse_expr(ln.tail);
        } catch (const ParseError& e) {
            syntax(ln.number, e.what());
        }
    };

    StateTable states;
    struct PendingOutcome {
        std::size_t line;
        std::size_t from;
        Action input;
        ProbeOutcome outcome;
    };
    std::vector<PendingOutcome> pending;
    Distribution initial;

    for (std::size_t k = pro.body_start; k < lines.size(); ++k) {
        const Line& ln = lines[k];
        const auto& t = ln.tokens;
        if (t.empty()) syntax(ln.number, "missing directive before ':'");
        if (t[0] == "alphabet") syntax(ln.number, "alphabet must directly follow the header");
        if (t[0] == "probe") syntax(ln.number, "duplicate header");
        if (t[0] == "init") {
            if (t.size() != 3) syntax(ln.number, "expected 'init <action> <state> : <expr>'");
            const Action a = lookup_action(alphabet, t[1], ln.number);
            const std::size_t s = states.intern(t[2]);
            initial.push_back({a, s, weight_of(ln)});
            continue;
        }
        if (t.size() != 5 || t[2] != "->") {
            syntax(ln.number, "expected '<state> <input> -> <output> <nextstate> : <expr>'");
        }
        const std::size_t from = states.intern(t[0]);
        const Action input = lookup_action(alphabet, t[1], ln.number);
        const Action output = lookup_action(alphabet, t[3], ln.number);
        const std::size_t to = states.intern(t[4]);
        pending.push_back({ln.number, from, input, ProbeOutcome{output, to, weight_of(ln)}});
    }
    if (initial.empty()) {
        throw ParseError("missing 'init <action> <state> : <expr>' line", ParseError::Kind::Line,
                         lines.back().number);
    }

    const std::size_t n = states.names().size();
    const std::size_t m = alphabet.size();
    std::vector<Distribution> steps(n * m);
    std::vector<bool> present(n * m, false);
    for (auto& p : pending) {
        steps[p.from * m + p.input.id].push_back(std::move(p.outcome));
        present[p.from * m + p.input.id] = true;
    }
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < m; ++a) {
            if (!present[s * m + a]) {
                throw ValidationError("missing transition for state " + states.names()[s] +
                                      " input " + alphabet.symbol(Action{a}));
            }
        }
    }

    Probe probe(pro.name, alphabet, states.names(), std::move(initial), std::move(steps));
    const ProbeValidation report = validate_probe(probe);
    if (!report.ok()) throw ValidationError("probe '" + pro.name + "' is invalid:\n" + report.summary());
    return probe;
}

Probe joss_ann(const PlayerMachine& base) {
    const Alphabet& alphabet = base.alphabet();
    const auto c = alphabet.find("C");
    const auto d = alphabet.find("D");
    if (alphabet.size() != 2 || !c || !d) {
        throw ValidationError("joss_ann requires a base strategy over the binary alphabet {C, D}");
    }
    const ParamExpr x = ParamExpr::x();
    const ParamExpr y = ParamExpr::y();
    const ParamExpr follow = ParamExpr(1) - x - y;

    auto mix = [&](std::size_t next, Action base_out) {
        return Distribution{{*c, next, x}, {*d, next, y}, {base_out, next, follow}};
    };

    std::vector<std::string> names;
    for (std::size_t s = 0; s < base.state_count(); ++s) names.push_back(base.state_name(s));
    std::vector<Distribution> steps;
    for (std::size_t s = 0; s < base.state_count(); ++s) {
        for (Action a : alphabet.actions()) {
            const PlayerStep& st = base.step(s, a);
            steps.push_back(mix(st.next_state, st.output));
        }
    }
    return Probe("JossAnn(" + base.name() + ")", alphabet, std::move(names),
                 mix(base.initial_state(), base.initial_action()), std::move(steps));
}

Probe constant_probe(const Alphabet& alphabet, Action action, std::string name) {
    std::vector<Distribution> steps(alphabet.size(), Distribution{{action, 0, ParamExpr(1)}});
    return Probe(std::move(name), alphabet, {"0"}, Distribution{{action, 0, ParamExpr(1)}},
                 std::move(steps));
}

PayoffMatrix parse_payoff_lines(std::string_view text, PayoffMatrix base) {
    for (const Line& ln : lex_lines(text)) {
        const auto& t = ln.tokens;
        if (ln.has_colon || t.size() != 4 || t[0] != "payoff") {
            syntax(ln.number, "expected 'payoff <a> <b> <value>'");
        }
        const Action a = lookup_action(base.alphabet(), t[1], ln.number);
        const Action b = lookup_action(base.alphabet(), t[2], ln.number);
        try {
            base.set(a, b, parse_rational(t[3]));
        } catch (const ParseError& e) {
            syntax(ln.number, e.what());
        }
    }
    return base;
}

std::string render_player(const PlayerMachine& player) {
    std::ostringstream out;
    const Alphabet& al = player.alphabet();
    out << "player " << player.name() << "\nalphabet";
    for (const auto& s : al.symbols()) out << ' ' << s;
    out << "\nstart " << player.state_name(player.initial_state()) << ' '
        << al.symbol(player.initial_action()) << '\n';
    for (std::size_t s = 0; s < player.state_count(); ++s) {
        for (Action a : al.actions()) {
            const auto& st = player.step(s, a);
            out << player.state_name(s) << ' ' << al.symbol(a) << " -> "
                << player.state_name(st.next_state) << ' ' << al.symbol(st.output) << '\n';
        }
    }
    return out.str();
}

std::string render_probe(const Probe& probe) {
    std::ostringstream out;
    const Alphabet& al = probe.alphabet();
    out << "probe " << probe.name() << "\nalphabet";
    for (const auto& s : al.symbols()) out << ' ' << s;
    out << '\n';
    for (const auto& o : probe.initial()) {
        out << "init " << al.symbol(o.output) << ' ' << probe.state_name(o.next_state) << " : "
            << o.weight.render() << '\n';
    }
    for (std::size_t s = 0; s < probe.state_count(); ++s) {
        for (Action a : al.actions()) {
            for (const auto& o : probe.step(s, a)) {
                out << probe.state_name(s) << ' ' << al.symbol(a) << " -> " << al.symbol(o.output)
                    << ' ' << probe.state_name(o.next_state) << " : " << o.weight.render() << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace probefp
