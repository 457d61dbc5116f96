#include "probefp/io.hpp"

#include "probefp/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace probefp {

std::string format_number(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += kHex[digest[k] >> 4];
        out += kHex[digest[k] & 0xf];
    }
    return out;
}

std::string payoff_text(const PayoffMatrix& payoff) {
    std::string out;
    const Alphabet& al = payoff.alphabet();
    for (Action a : al.actions()) {
        for (Action b : al.actions()) {
            if (!out.empty()) out += "; ";
            out += al.symbol(a) + " " + al.symbol(b) + " " + render_rational(payoff(a, b));
        }
    }
    return out;
}

nlohmann::json payoff_json(const PayoffMatrix& payoff) {
    nlohmann::json out = nlohmann::json::array();
    const Alphabet& al = payoff.alphabet();
    for (Action a : al.actions()) {
        for (Action b : al.actions()) {
            out.push_back({al.symbol(a), al.symbol(b), render_rational(payoff(a, b))});
        }
    }
    return out;
}

namespace {

nlohmann::json inputs_json(const InputDigests& inputs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [label, digest] : inputs) out.push_back({{"path", label}, {"sha256", digest}});
    return out;
}

[[noreturn]] void bad_grid(const std::string& what) {
    throw ParseError("grid file: " + what, ParseError::Kind::Line, 0);
}

unsigned resolution_from_count(std::size_t count) {
    for (unsigned n = 1; FingerprintGrid::point_count(n) <= count; ++n) {
        if (FingerprintGrid::point_count(n) == count) return n;
    }
    bad_grid("row count " + std::to_string(count) + " is not a triangular lattice size");
}

void check_lattice(const FingerprintGrid& grid, const std::vector<std::pair<double, double>>& xy) {
    std::size_t k = 0;
    for (unsigned i = 0; i <= grid.n; ++i) {
        for (unsigned j = 0; i + j <= grid.n; ++j, ++k) {
            if (std::fabs(xy[k].first - static_cast<double>(i) / grid.n) > 1e-9 ||
                std::fabs(xy[k].second - static_cast<double>(j) / grid.n) > 1e-9) {
                bad_grid("row " + std::to_string(k) + " is not lattice point (" + std::to_string(i) +
                         "/n, " + std::to_string(j) + "/n)");
            }
        }
    }
}

FingerprintGrid grid_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        bad_grid(e.what());
    }
    FingerprintGrid grid;
    try {
        const auto& meta = doc.at("meta");
        grid.meta.player = meta.value("player", "");
        grid.meta.probe = meta.value("probe", "");
        grid.mode = parse_boundary_mode(meta.value("boundary_mode", "cesaro"));
        std::vector<std::pair<double, double>> xy;
        for (const auto& p : doc.at("points")) {
            xy.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
            grid.values.push_back(p.at(2).get<double>());
        }
        grid.n = resolution_from_count(grid.values.size());
        if (meta.contains("n") && meta["n"].get<unsigned>() != grid.n) bad_grid("n disagrees with points");
        check_lattice(grid, xy);
    } catch (const nlohmann::json::exception& e) {
        bad_grid(e.what());
    } catch (const std::invalid_argument& e) {
        bad_grid(e.what());
    }
    return grid;
}

}  // namespace

std::string grid_to_csv(const FingerprintGrid& grid, const InputDigests& inputs) {
    std::ostringstream out;
    out << "# tool: probefp " << kToolVersion << "\n";
    out << "# player: " << grid.meta.player << "\n";
    out << "# probe: " << grid.meta.probe << "\n";
    out << "# n: " << grid.n << "\n";
    out << "# boundary_mode: " << to_string(grid.mode) << "\n";
    out << "# payoff: " << payoff_text(grid.meta.payoff) << "\n";
    for (const auto& [label, digest] : inputs) out << "# input: " << label << " sha256 " << digest << "\n";
    out << "x,y,value\n";
    std::size_t k = 0;
    for (unsigned i = 0; i <= grid.n; ++i) {
        for (unsigned j = 0; i + j <= grid.n; ++j) {
            out << format_number(static_cast<double>(i) / grid.n) << ','
                << format_number(static_cast<double>(j) / grid.n) << ','
                << format_number(grid.values.at(k++)) << '\n';
        }
    }
    return out.str();
}

std::string grid_to_json(const FingerprintGrid& grid, const InputDigests& inputs) {
    nlohmann::json doc;
    doc["meta"] = {
        {"tool", "probefp " + std::string(kToolVersion)},
        {"player", grid.meta.player},
        {"probe", grid.meta.probe},
        {"n", grid.n},
        {"boundary_mode", to_string(grid.mode)},
        {"payoff", payoff_json(grid.meta.payoff)},
        {"inputs", inputs_json(inputs)},
    };
    nlohmann::json points = nlohmann::json::array();
    std::size_t k = 0;
    for (unsigned i = 0; i <= grid.n; ++i) {
        for (unsigned j = 0; i + j <= grid.n; ++j) {
            points.push_back({static_cast<double>(i) / grid.n, static_cast<double>(j) / grid.n,
                              grid.values.at(k++)});
        }
    }
    doc["points"] = std::move(points);
    return doc.dump(2) + "\n";
}

FingerprintGrid grid_from_text(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return grid_from_json(text);

    FingerprintGrid grid;
    grid.meta.player.clear();
    std::vector<std::pair<double, double>> xy;
    bool header_seen = false;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string key = line.substr(1, colon - 1);
            std::string value = line.substr(colon + 1);
            key.erase(0, key.find_first_not_of(' '));
            value.erase(0, value.find_first_not_of(' '));
            if (key == "player") grid.meta.player = value;
            if (key == "probe") grid.meta.probe = value;
            if (key == "boundary_mode") {
                try {
                    grid.mode = parse_boundary_mode(value);
                } catch (const std::invalid_argument& e) {
                    bad_grid(e.what());
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != "x,y,value") bad_grid("line " + std::to_string(line_no) + ": expected header 'x,y,value'");
            header_seen = true;
            continue;
        }
        std::array<double, 3> v{};
        std::istringstream fields(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(fields, cell, ',')) {
            if (c >= 3) bad_grid("line " + std::to_string(line_no) + ": too many columns");
            try {
                std::size_t used = 0;
                v[c] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                bad_grid("line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
            ++c;
        }
        if (c != 3) bad_grid("line " + std::to_string(line_no) + ": expected 3 columns");
        xy.emplace_back(v[0], v[1]);
        grid.values.push_back(v[2]);
    }
    if (!header_seen) bad_grid("missing header 'x,y,value'");
    grid.n = resolution_from_count(grid.values.size());
    check_lattice(grid, xy);
    return grid;
}

std::string distances_to_csv(const DistanceMatrix& m, const InputDigests& inputs) {
    auto cell = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    };
    std::ostringstream out;
    out << "# tool: probefp " << kToolVersion << "\n";
    for (const auto& [label, digest] : inputs) out << "# input: " << label << " sha256 " << digest << "\n";
    out << "name";
    for (const auto& n : m.names) out << ',' << cell(n);
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << cell(m.names[i]);
        for (std::size_t j = 0; j < m.size(); ++j) out << ',' << format_number(m(i, j));
        out << '\n';
    }
    return out.str();
}

std::string distances_to_json(const DistanceMatrix& m, unsigned quad_n, const InputDigests& inputs) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    nlohmann::json doc{
        {"meta", {{"tool", "probefp " + std::string(kToolVersion)}, {"quad_n", quad_n},
                  {"inputs", inputs_json(inputs)}}},
        {"names", m.names},
        {"distances", std::move(rows)},
    };
    return doc.dump(2) + "\n";
}

nlohmann::json simulation_json(const SimEstimate& est, double x, double y, double exact,
                               const FingerprintMeta& meta, const InputDigests& inputs) {
    nlohmann::json z;
    const double diff = est.mean - exact;
    if (est.std_error > 0.0) {
        z = diff / est.std_error;
    } else if (std::fabs(diff) <= 1e-12) {
        z = 0.0;
    }  // else null: nonzero error with zero spread
    return nlohmann::json{
        {"meta", {{"tool", "probefp " + std::string(kToolVersion)}, {"player", meta.player},
                  {"probe", meta.probe}, {"payoff", payoff_json(meta.payoff)},
                  {"rng", kRngName}, {"inputs", inputs_json(inputs)}}},
        {"point", {x, y}},
        {"estimate", {{"mean", est.mean}, {"stderr", est.std_error}, {"rounds", est.rounds},
                      {"burn_in", est.burn_in}, {"replicates", est.replicates}, {"seed", est.seed}}},
        {"exact", exact},
        {"z", z},
    };
}

}  // namespace probefp
