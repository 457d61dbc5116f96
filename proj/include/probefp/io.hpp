#pragma once

// File formats: fingerprint grids (CSV/JSON), distance matrices, digests.

#include "probefp/fingerprint.hpp"
#include "probefp/metrics.hpp"
#include "probefp/simulate.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace probefp {

inline constexpr std::string_view kToolVersion = "0.1.0";

// 17 significant digits.
std::string format_number(double v);

std::string sha256_hex(std::string_view bytes);

// Input files that determine a run: (label, sha256 of contents).
using InputDigests = std::vector<std::pair<std::string, std::string>>;

std::string payoff_text(const PayoffMatrix& payoff);
nlohmann::json payoff_json(const PayoffMatrix& payoff);

// `# key: value` metadata lines, then `x,y,value` rows in (i, j) order.
std::string grid_to_csv(const FingerprintGrid& grid, const InputDigests& inputs);
std::string grid_to_json(const FingerprintGrid& grid, const InputDigests& inputs);

// Reads either format back. Throws ParseError on malformed content.
FingerprintGrid grid_from_text(std::string_view text);

std::string distances_to_csv(const DistanceMatrix& m, const InputDigests& inputs);
std::string distances_to_json(const DistanceMatrix& m, unsigned quad_n, const InputDigests& inputs);

nlohmann::json simulation_json(const SimEstimate& est, double x, double y, double exact,
                               const FingerprintMeta& meta, const InputDigests& inputs);

}  // namespace probefp
