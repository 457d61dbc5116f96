#pragma once

#include "probefp/automata.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace probefp::testing {

inline std::string data_path(const std::string& rel) { return std::string(PROBEFP_DATA_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline PlayerMachine player(const std::string& name) { return parse_player(slurp(data_path("players/" + name + ".player"))); }
inline Probe probe(const std::string& name) { return parse_probe(slurp(data_path("probes/" + name + ".probe"))); }

}  // namespace probefp::testing
