#include "probefp/chain.hpp"

#include "probefp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace probefp {

// ---------------------------------------------------------------- ParamChain

ParamChain::ParamChain(std::vector<JointState> states, std::vector<ParamExpr> init,
                       std::vector<Row> rows, std::vector<Rational> payoff)
    : states_(std::move(states)), init_(std::move(init)), rows_(std::move(rows)),
      payoff_(std::move(payoff)) {
    if (init_.size() != states_.size() || rows_.size() != states_.size() ||
        payoff_.size() != states_.size()) {
        throw std::invalid_argument("ParamChain: inconsistent dimensions");
    }
}

ParamExpr ParamChain::weight(std::size_t s, std::size_t t) const {
    const Row& r = rows_.at(s);
    auto it = std::lower_bound(r.begin(), r.end(), t,
                               [](const auto& entry, std::size_t key) { return entry.first < key; });
    if (it != r.end() && it->first == t) return it->second;
    return {};
}

ParamExpr ParamChain::row_residual(std::size_t s) const {
    ParamExpr sum;
    for (const auto& [t, w] : rows_.at(s)) sum += w;
    return ParamExpr(1) - sum;
}

ParamExpr ParamChain::init_residual() const {
    ParamExpr sum;
    for (const auto& w : init_) sum += w;
    return ParamExpr(1) - sum;
}

bool ParamChain::row_sums_exact() const {
    if (!init_residual().is_zero()) return false;
    for (std::size_t s = 0; s < size(); ++s) {
        if (!row_residual(s).is_zero()) return false;
    }
    return true;
}

ParamChain compose(const PlayerMachine& player, const Probe& probe, const PayoffMatrix& payoff) {
    if (!(player.alphabet() == probe.alphabet()) || !(player.alphabet() == payoff.alphabet())) {
        throw ValidationError("alphabet mismatch between player '" + player.name() + "', probe '" +
                              probe.name() + "' and payoff matrix");
    }

    std::map<JointState, std::size_t> index;
    std::vector<JointState> states;
    std::deque<std::size_t> frontier;
    auto intern = [&](const JointState& js) {
        auto [it, inserted] = index.try_emplace(js, states.size());
        if (inserted) {
            states.push_back(js);
            frontier.push_back(it->second);
        }
        return it->second;
    };

    // Probe distributions are already sorted by (action, state index).
    std::vector<std::pair<std::size_t, ParamExpr>> init_entries;
    for (const auto& o : probe.initial()) {
        const JointState js{player.initial_state(), o.next_state, player.initial_action(), o.output};
        init_entries.emplace_back(intern(js), o.weight);
    }

    std::vector<ParamChain::Row> rows;
    while (!frontier.empty()) {
        const std::size_t s = frontier.front();
        frontier.pop_front();
        const JointState cur = states[s];
        const PlayerStep& reply = player.step(cur.player_state, cur.probe_action);
        ParamChain::Row row;
        for (const auto& o : probe.step(cur.probe_state, cur.player_action)) {
            const JointState next{reply.next_state, o.next_state, reply.output, o.output};
            row.emplace_back(intern(next), o.weight);
        }
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (rows.size() <= s) rows.resize(s + 1);
        rows[s] = std::move(row);
    }
    rows.resize(states.size());

    std::vector<ParamExpr> init(states.size());
    for (auto& [s, w] : init_entries) init[s] += w;
    std::vector<Rational> pay;
    for (const auto& js : states) pay.push_back(payoff(js.player_action, js.probe_action));

    ParamChain chain(std::move(states), std::move(init), std::move(rows), std::move(pay));
    if (!chain.row_sums_exact()) {
        throw ValidationError("composed chain rows do not sum to 1; probe '" + probe.name() +
                              "' was not validated");
    }
    return chain;
}

// ---------------------------------------------------------------- numeric evaluation

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    DenseMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) throw std::invalid_argument("ragged matrix rows");
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

bool in_simplex(double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && x >= 0.0 && y >= 0.0 && x + y <= 1.0 + 1e-12;
}

namespace {

constexpr double kProbTol = 1e-12;

std::string point_text(double x, double y) {
    std::ostringstream out;
    out.precision(17);
    out << "(" << x << ", " << y << ")";
    return out.str();
}

// Checks, clamps and renormalizes one evaluated distribution in place.
void normalize_checked(std::span<double> values, double x, double y, const std::string& where) {
    double sum = 0.0;
    for (double& v : values) {
        if (v < -kProbTol || v > 1.0 + kProbTol) {
            throw NumericError(where + ": probability " + std::to_string(v) + " out of range at " +
                                   point_text(x, y),
                               x, y);
        }
        v = std::clamp(v, 0.0, 1.0);
        sum += v;
    }
    if (std::fabs(sum - 1.0) > kProbTol) {
        throw NumericError(where + ": probabilities sum to " + std::to_string(sum) + " at " +
                               point_text(x, y),
                           x, y);
    }
    for (double& v : values) v /= sum;
}

}  // namespace

NumericChain evaluate(const ParamChain& chain, double x, double y) {
    if (!in_simplex(x, y)) {
        throw OutOfSimplexError("point " + point_text(x, y) + " is outside the parameter simplex",
                                x, y);
    }
    const std::size_t n = chain.size();
    NumericChain out{x, y, DenseMatrix(n, n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t s = 0; s < n; ++s) {
        out.init[s] = chain.init()[s].eval(x, y);
        out.payoff[s] = chain.payoff()[s].get_d();
        for (const auto& [t, w] : chain.row(s)) out.matrix(s, t) = w.eval(x, y);
    }
    normalize_checked(out.init, x, y, "initial distribution");
    std::vector<double> row(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) row[t] = out.matrix(s, t);
        normalize_checked(row, x, y, "row " + std::to_string(s));
        for (std::size_t t = 0; t < n; ++t) out.matrix(s, t) = row[t];
    }
    return out;
}

// ---------------------------------------------------------------- class decomposition

namespace {

class Tarjan {
public:
    explicit Tarjan(const std::vector<std::vector<std::size_t>>& graph)
        : graph_(graph), number_(graph.size(), kUnvisited), low_(graph.size(), 0),
          on_stack_(graph.size(), false) {}

    std::vector<std::vector<std::size_t>> run() {
        for (std::size_t v = 0; v < graph_.size(); ++v) {
            if (number_[v] == kUnvisited) visit(v);
        }
        return std::move(components_);
    }

private:
    static constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);

    // Iterative DFS; chains can be long enough to make recursion risky.
    void visit(std::size_t root) {
        struct Frame {
            std::size_t vertex;
            std::size_t next_edge;
        };
        std::vector<Frame> call{{root, 0}};
        enter(root);
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& succ = graph_[f.vertex];
            if (f.next_edge < succ.size()) {
                const std::size_t w = succ[f.next_edge++];
                if (number_[w] == kUnvisited) {
                    enter(w);
                    call.push_back({w, 0});
                } else if (on_stack_[w]) {
                    low_[f.vertex] = std::min(low_[f.vertex], number_[w]);
                }
                continue;
            }
            const std::size_t v = f.vertex;
            call.pop_back();
            if (!call.empty()) low_[call.back().vertex] = std::min(low_[call.back().vertex], low_[v]);
            if (low_[v] == number_[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack_.back();
                    stack_.pop_back();
                    on_stack_[w] = false;
                    comp.push_back(w);
                } while (w != v);
                components_.push_back(std::move(comp));
            }
        }
    }

    void enter(std::size_t v) {
        number_[v] = low_[v] = counter_++;
        stack_.push_back(v);
        on_stack_[v] = true;
    }

    const std::vector<std::vector<std::size_t>>& graph_;
    std::vector<std::size_t> number_;
    std::vector<std::size_t> low_;
    std::vector<bool> on_stack_;
    std::vector<std::size_t> stack_;
    std::size_t counter_ = 0;
    std::vector<std::vector<std::size_t>> components_;
};

}  // namespace

std::vector<StateClass> closed_classes(const DenseMatrix& matrix) {
    const std::size_t n = matrix.rows();
    std::vector<std::vector<std::size_t>> graph(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            if (matrix(s, t) > kSupportCutoff) graph[s].push_back(t);
        }
    }
    auto components = Tarjan(graph).run();

    std::vector<std::size_t> component_of(n);
    for (std::size_t c = 0; c < components.size(); ++c) {
        for (std::size_t s : components[c]) component_of[s] = c;
    }
    std::vector<StateClass> classes;
    for (std::size_t c = 0; c < components.size(); ++c) {
        StateClass cls;
        cls.states = components[c];
        std::sort(cls.states.begin(), cls.states.end());
        cls.closed = std::all_of(cls.states.begin(), cls.states.end(), [&](std::size_t s) {
            return std::all_of(graph[s].begin(), graph[s].end(),
                               [&](std::size_t t) { return component_of[t] == c; });
        });
        classes.push_back(std::move(cls));
    }
    std::sort(classes.begin(), classes.end(), [](const StateClass& a, const StateClass& b) {
        return a.states.front() < b.states.front();
    });
    return classes;
}

std::string describe_classes(const std::vector<StateClass>& classes) {
    std::ostringstream out;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (c) out << "; ";
        out << (classes[c].closed ? "closed" : "transient") << " {";
        for (std::size_t k = 0; k < classes[c].states.size(); ++k) {
            out << (k ? "," : "") << classes[c].states[k];
        }
        out << "}";
    }
    return out.str();
}

// ---------------------------------------------------------------- linear algebra

std::vector<double> solve_dense(DenseMatrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_dense: shape mismatch");

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t r = k + 1; r < n; ++r) {
            if (std::fabs(a(r, k)) > std::fabs(a(pivot, k))) pivot = r;
        }
        double row_norm = 0.0;
        for (std::size_t c = k; c < n; ++c) row_norm = std::max(row_norm, std::fabs(a(pivot, c)));
        if (row_norm == 0.0 || std::fabs(a(pivot, k)) < 1e-13 * row_norm) {
            throw std::runtime_error("singular system at column " + std::to_string(k));
        }
        if (pivot != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(pivot, c));
            std::swap(b[k], b[pivot]);
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const double factor = a(r, k) / a(k, k);
            if (factor == 0.0) continue;
            for (std::size_t c = k; c < n; ++c) a(r, c) -= factor * a(k, c);
            b[r] -= factor * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double acc = b[k];
        for (std::size_t c = k + 1; c < n; ++c) acc -= a(k, c) * x[c];
        x[k] = acc / a(k, k);
    }
    return x;
}

namespace {

// pi (I - P_C) = 0, sum pi = 1, with the normalization replacing the last equation.
std::vector<double> class_stationary(const DenseMatrix& p, const std::vector<std::size_t>& cls) {
    const std::size_t k = cls.size();
    DenseMatrix a(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            // transpose: equation i is column i of (I - P_C)
            a(i, j) = (i == j ? 1.0 : 0.0) - p(cls[j], cls[i]);
        }
    }
    std::vector<double> b(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) a(k - 1, j) = 1.0;
    b[k - 1] = 1.0;
    return solve_dense(std::move(a), std::move(b));
}

}  // namespace

LimitDistribution limit_distribution(const NumericChain& m) {
    const std::size_t n = m.matrix.rows();
    const auto classes = closed_classes(m.matrix);

    std::vector<std::size_t> transient;
    for (const auto& c : classes) {
        if (!c.closed) transient.insert(transient.end(), c.states.begin(), c.states.end());
    }
    std::sort(transient.begin(), transient.end());

    // Expected visits z to transient states: z (I - Q) = init_T.
    std::vector<double> visits;
    if (!transient.empty()) {
        const std::size_t k = transient.size();
        DenseMatrix a(k, k);
        std::vector<double> b(k);
        for (std::size_t i = 0; i < k; ++i) {
            b[i] = m.init[transient[i]];
            for (std::size_t j = 0; j < k; ++j) {
                a(i, j) = (i == j ? 1.0 : 0.0) - m.matrix(transient[j], transient[i]);
            }
        }
        try {
            visits = solve_dense(std::move(a), std::move(b));
        } catch (const std::runtime_error& e) {
            throw NumericError(std::string("transient system: ") + e.what() + " at " +
                                   point_text(m.x, m.y),
                               m.x, m.y);
        }
    }

    LimitDistribution out{std::vector<double>(n, 0.0)};
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& cls = classes[c];
        if (!cls.closed) continue;
        double mass = 0.0;
        for (std::size_t s : cls.states) mass += m.init[s];
        for (std::size_t i = 0; i < transient.size(); ++i) {
            double into = 0.0;
            for (std::size_t s : cls.states) into += m.matrix(transient[i], s);
            mass += visits[i] * into;
        }
        if (mass <= 0.0) continue;
        std::vector<double> local;
        try {
            local = class_stationary(m.matrix, cls.states);
        } catch (const std::runtime_error& e) {
            throw NumericError("closed class " + std::to_string(c) + ": " + e.what() + " at " +
                                   point_text(m.x, m.y),
                               m.x, m.y);
        }
        for (std::size_t i = 0; i < cls.states.size(); ++i) {
            out.pi[cls.states[i]] = mass * std::max(local[i], 0.0);
        }
    }
    double total = 0.0;
    for (double v : out.pi) total += v;
    if (!(total > 0.0)) {
        throw NumericError("limit distribution has no mass at " + point_text(m.x, m.y), m.x, m.y);
    }
    for (double& v : out.pi) v /= total;
    return out;
}

double expected_payoff(const LimitDistribution& pi, std::span<const double> payoff) {
    if (pi.pi.size() != payoff.size()) throw std::invalid_argument("expected_payoff: size mismatch");
    double sum = 0.0;
    for (std::size_t s = 0; s < payoff.size(); ++s) sum += pi.pi[s] * payoff[s];
    return sum;
}

}  // namespace probefp
