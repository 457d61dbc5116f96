#pragma once

// Joint player/probe Markov chains: symbolic composition, numeric
// evaluation, and limiting (Cesaro) distributions.

#include "probefp/automata.hpp"
#include "probefp/polyexpr.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace probefp {

// One round of joint play: machine states after the round and the two moves made in it.
struct JointState {
    std::size_t player_state = 0;
    std::size_t probe_state = 0;
    Action player_action;
    Action probe_action;

    auto operator<=>(const JointState&) const = default;
};

class ParamChain {
public:
    using Row = std::vector<std::pair<std::size_t, ParamExpr>>;  // sorted by target

    ParamChain(std::vector<JointState> states, std::vector<ParamExpr> init, std::vector<Row> rows,
               std::vector<Rational> payoff);

    std::size_t size() const { return states_.size(); }
    const std::vector<JointState>& states() const { return states_; }
    const std::vector<ParamExpr>& init() const { return init_; }
    const Row& row(std::size_t s) const { return rows_.at(s); }
    // Transition weight s -> t (zero polynomial when absent).
    ParamExpr weight(std::size_t s, std::size_t t) const;
    const std::vector<Rational>& payoff() const { return payoff_; }

    // 1 - sum of row s (zero polynomial on a valid chain).
    ParamExpr row_residual(std::size_t s) const;
    ParamExpr init_residual() const;
    bool row_sums_exact() const;

private:
    std::vector<JointState> states_;
    std::vector<ParamExpr> init_;
    std::vector<Row> rows_;
    std::vector<Rational> payoff_;
};

// Throws ValidationError on alphabet mismatch between player, probe and payoff.
ParamChain compose(const PlayerMachine& player, const Probe& probe, const PayoffMatrix& payoff);

// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct NumericChain {
    double x = 0.0;
    double y = 0.0;
    DenseMatrix matrix;  // row-stochastic
    std::vector<double> init;
    std::vector<double> payoff;
};

bool in_simplex(double x, double y);

// Throws OutOfSimplexError, or NumericError on row-sum/negativity failures.
NumericChain evaluate(const ParamChain& chain, double x, double y);

// Edge threshold for the support graph.
inline constexpr double kSupportCutoff = 1e-14;

struct StateClass {
    std::vector<std::size_t> states;  // ascending
    bool closed = false;
};

// Strongly connected components of the support graph, ordered by smallest member.
std::vector<StateClass> closed_classes(const DenseMatrix& matrix);
inline std::vector<StateClass> closed_classes(const NumericChain& m) { return closed_classes(m.matrix); }
std::string describe_classes(const std::vector<StateClass>& classes);

struct LimitDistribution {
    std::vector<double> pi;
};

// Absorption mass into each closed class times the class's stationary
// distribution. Throws NumericError when a linear solve is singular.
LimitDistribution limit_distribution(const NumericChain& m);

double expected_payoff(const LimitDistribution& pi, std::span<const double> payoff);

// Gaussian elimination with partial pivoting; a pivot below
// 1e-13 * (max |entry| of its row) is treated as singular and throws
// std::runtime_error naming the column.
std::vector<double> solve_dense(DenseMatrix a, std::vector<double> b);

}  // namespace probefp
