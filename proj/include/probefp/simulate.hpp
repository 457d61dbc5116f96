#pragma once

// Monte Carlo play of the probe game at a fixed parameter point.

#include "probefp/automata.hpp"

#include <cstdint>
#include <string_view>

namespace probefp {

// Recorded in reports; outputs are reproducible within one build.
inline constexpr std::string_view kRngName = "mt19937_64 (53-bit uniform)";

struct SimEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t rounds = 0;
    std::uint64_t burn_in = 0;
    unsigned replicates = 0;
    std::uint64_t seed = 0;

    bool operator==(const SimEstimate&) const = default;
};

// Average payoff to the player over rounds burn_in+1 .. rounds.
// Requires rounds > burn_in and (x, y) in the simplex.
double play_once(const PlayerMachine& player, const Probe& probe, const PayoffMatrix& payoff,
                 double x, double y, std::uint64_t rounds, std::uint64_t burn_in,
                 std::uint64_t seed);

// `replicates` (>= 2) runs seeded seed + r; std_error of the replicate means.
SimEstimate estimate(const PlayerMachine& player, const Probe& probe, const PayoffMatrix& payoff,
                     double x, double y, std::uint64_t rounds, std::uint64_t burn_in,
                     unsigned replicates, std::uint64_t seed);

}  // namespace probefp
