#include "probefp/simulate.hpp"

#include "probefp/chain.hpp"
#include "probefp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace probefp {
namespace {

struct SampledOutcome {
    std::size_t action;
    std::size_t next_state;
    double cumulative;
};

// Distribution evaluated at (x, y), renormalized, as an inverse-CDF table.
std::vector<SampledOutcome> cdf_table(const Distribution& d, double x, double y) {
    std::vector<double> w;
    double total = 0.0;
    for (const auto& o : d) {
        const double v = o.weight.eval(x, y);
        if (v < -1e-12) throw NumericError("negative probe weight during simulation", x, y);
        w.push_back(std::max(v, 0.0));
        total += w.back();
    }
    if (!(total > 0.0)) throw NumericError("probe distribution has no mass", x, y);
    std::vector<SampledOutcome> out;
    double acc = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        acc += w[k] / total;
        out.push_back({d[k].output.id, d[k].next_state, acc});
    }
    out.back().cumulative = 1.0;
    return out;
}

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    const SampledOutcome& draw(const std::vector<SampledOutcome>& table) {
        if (table.size() == 1) return table.front();
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        for (const auto& o : table) {
            if (u < o.cumulative) return o;
        }
        return table.back();
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace

double play_once(const PlayerMachine& player, const Probe& probe, const PayoffMatrix& payoff,
                 double x, double y, std::uint64_t rounds, std::uint64_t burn_in,
                 std::uint64_t seed) {
    if (rounds <= burn_in) throw std::invalid_argument("rounds must exceed burn_in");
    if (!in_simplex(x, y)) throw OutOfSimplexError("simulation point outside the simplex", x, y);
    if (!(player.alphabet() == probe.alphabet()) || !(player.alphabet() == payoff.alphabet())) {
        throw ValidationError("alphabet mismatch between player, probe and payoff matrix");
    }

    const std::size_t m = probe.alphabet().size();
    std::vector<std::vector<SampledOutcome>> steps;
    steps.reserve(probe.state_count() * m);
    for (std::size_t s = 0; s < probe.state_count(); ++s) {
        for (std::size_t a = 0; a < m; ++a) steps.push_back(cdf_table(probe.step(s, Action{a}), x, y));
    }
    std::vector<double> pay(m * m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) pay[a * m + b] = payoff(Action{a}, Action{b}).get_d();
    }

    Sampler sampler(seed);
    std::size_t p_state = player.initial_state();
    std::size_t p_action = player.initial_action().id;
    const auto initial = cdf_table(probe.initial(), x, y);
    const SampledOutcome& first = sampler.draw(initial);
    std::size_t q_state = first.next_state;
    std::size_t q_action = first.action;

    double total = 0.0;
    for (std::uint64_t round = 1;; ++round) {
        if (round > burn_in) total += pay[p_action * m + q_action];
        if (round == rounds) break;
        const PlayerStep& reply = player.step(p_state, Action{q_action});
        const SampledOutcome& o = sampler.draw(steps[q_state * m + p_action]);
        p_state = reply.next_state;
        p_action = reply.output.id;
        q_state = o.next_state;
        q_action = o.action;
    }
    return total / static_cast<double>(rounds - burn_in);
}

SimEstimate estimate(const PlayerMachine& player, const Probe& probe, const PayoffMatrix& payoff,
                     double x, double y, std::uint64_t rounds, std::uint64_t burn_in,
                     unsigned replicates, std::uint64_t seed) {
    if (replicates < 2) throw std::invalid_argument("estimate needs at least 2 replicates");
    std::vector<double> means(replicates);
    for (unsigned r = 0; r < replicates; ++r) {
        means[r] = play_once(player, probe, payoff, x, y, rounds, burn_in, seed + r);
    }
    double sum = 0.0;
    for (double v : means) sum += v;
    const double mean = sum / replicates;
    double ss = 0.0;
    for (double v : means) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (replicates - 1));
    return SimEstimate{mean, sd / std::sqrt(static_cast<double>(replicates)), rounds, burn_in,
                       replicates, seed};
}

}  // namespace probefp
