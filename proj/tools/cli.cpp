#include "cli.hpp"

#include "probefp/automata.hpp"
#include "probefp/chain.hpp"
#include "probefp/errors.hpp"
#include "probefp/fingerprint.hpp"
#include "probefp/io.hpp"
#include "probefp/metrics.hpp"
#include "probefp/simulate.hpp"

#include <CLI11.hpp>

#include <array>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace probefp::cli {
namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("I/O error while reading '" + path + "'");
    return buf.str();
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write '" + path + "'");
    file << content;
    if (!file) throw IoError("I/O error while writing '" + path + "'");
}

// Effective settings: defaults, then the config file, then flags.
struct RunConfig {
    std::vector<std::array<std::string, 3>> payoff;
    unsigned n = 20;
    std::string boundary = "cesaro";
    unsigned quad_n = kDefaultQuadratureN;
    std::string format = "csv";
    std::string output;
    std::uint64_t seed = 1;
    int verbosity = 0;
    std::uint64_t rounds = 100000;
    std::optional<std::uint64_t> burn_in;
    unsigned replicates = 32;
};

// Raw flag values; an option only overrides when it was given.
struct Flags {
    std::string config;
    std::vector<std::string> payoff;  // flattened triples
    unsigned n = 0;
    std::string boundary;
    unsigned quad_n = 0;
    std::string format;
    std::string output;
    std::uint64_t seed = 0;
    std::uint64_t rounds = 0;
    std::uint64_t burn_in = 0;
    unsigned replicates = 0;
};

template <typename T>
T parse_config_number(const std::string& value, std::size_t line) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size() || value.front() == '-') throw std::invalid_argument(value);
        return static_cast<T>(v);
    } catch (const std::exception&) {
        throw ParseError("config line " + std::to_string(line) + ": expected a nonnegative integer, got '" +
                             value + "'",
                         ParseError::Kind::Line, line);
    }
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream tokens(line);
        std::vector<std::string> t;
        for (std::string tok; tokens >> tok;) t.push_back(tok);
        if (t.empty()) continue;
        auto need = [&](std::size_t count) {
            if (t.size() != count) {
                throw ParseError("config line " + std::to_string(number) + ": wrong number of values for '" +
                                     t[0] + "'",
                                 ParseError::Kind::Line, number);
            }
        };
        const std::string& key = t[0];
        if (key == "payoff") {
            need(4);
            cfg.payoff.push_back({t[1], t[2], t[3]});
        } else if (key == "n") {
            need(2);
            cfg.n = parse_config_number<unsigned>(t[1], number);
        } else if (key == "boundary") {
            need(2);
            cfg.boundary = t[1];
        } else if (key == "quad-n") {
            need(2);
            cfg.quad_n = parse_config_number<unsigned>(t[1], number);
        } else if (key == "format") {
            need(2);
            cfg.format = t[1];
        } else if (key == "output") {
            need(2);
            cfg.output = t[1];
        } else if (key == "seed") {
            need(2);
            cfg.seed = parse_config_number<std::uint64_t>(t[1], number);
        } else if (key == "verbosity") {
            need(2);
            cfg.verbosity = parse_config_number<int>(t[1], number);
        } else if (key == "rounds") {
            need(2);
            cfg.rounds = parse_config_number<std::uint64_t>(t[1], number);
        } else if (key == "burn-in") {
            need(2);
            cfg.burn_in = parse_config_number<std::uint64_t>(t[1], number);
        } else if (key == "replicates") {
            need(2);
            cfg.replicates = parse_config_number<unsigned>(t[1], number);
        } else {
            throw ParseError("config line " + std::to_string(number) + ": unknown key '" + key + "'",
                             ParseError::Kind::Line, number);
        }
    }
}

RunConfig resolve_config(const CLI::App& sub, const Flags& flags, int verbosity) {
    RunConfig cfg;
    if (!flags.config.empty()) apply_config_file(flags.config, cfg);
    auto given = [&](const char* name) {
        const CLI::Option* opt = sub.get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    for (std::size_t k = 0; k + 2 < flags.payoff.size(); k += 3) {
        cfg.payoff.push_back({flags.payoff[k], flags.payoff[k + 1], flags.payoff[k + 2]});
    }
    if (given("-n")) cfg.n = flags.n;
    if (given("--boundary")) cfg.boundary = flags.boundary;
    if (given("--quad-n")) cfg.quad_n = flags.quad_n;
    if (given("--format")) cfg.format = flags.format;
    if (given("-o")) cfg.output = flags.output;
    if (given("--seed")) cfg.seed = flags.seed;
    if (given("--rounds")) cfg.rounds = flags.rounds;
    if (given("--burn-in")) cfg.burn_in = flags.burn_in;
    if (given("--replicates")) cfg.replicates = flags.replicates;
    cfg.verbosity += verbosity;

    if (cfg.n < 1 || cfg.quad_n < 1) throw UsageError("resolutions must be >= 1");
    if (cfg.format != "csv" && cfg.format != "json") throw UsageError("format must be csv or json");
    if (cfg.boundary != "cesaro" && cfg.boundary != "offset" && cfg.boundary != "interior_offset") {
        throw UsageError("boundary must be cesaro or offset");
    }
    return cfg;
}

PayoffMatrix build_payoff(const Alphabet& alphabet, const RunConfig& cfg) {
    const bool pd = alphabet == Alphabet::cooperate_defect();
    PayoffMatrix payoff = pd ? PayoffMatrix::prisoners_dilemma()
                             : PayoffMatrix(alphabet, std::vector<Rational>(alphabet.size() * alphabet.size()));
    std::set<std::pair<std::size_t, std::size_t>> assigned;
    for (const auto& [a, b, v] : cfg.payoff) {
        const auto pa = alphabet.find(a);
        const auto pb = alphabet.find(b);
        if (!pa || !pb) throw ValidationError("payoff entry '" + a + " " + b + "' uses an unknown action");
        payoff.set(*pa, *pb, parse_rational(v));
        assigned.insert({pa->id, pb->id});
    }
    if (!pd && assigned.size() != alphabet.size() * alphabet.size()) {
        throw ValidationError("non-{C,D} alphabets need a payoff entry for every action pair");
    }
    return payoff;
}

struct Loaded {
    PlayerMachine player;
    Probe probe;
    InputDigests inputs;
};

PlayerMachine load_player(const std::string& path, InputDigests& inputs) {
    const std::string text = read_file(path);
    inputs.emplace_back(path, sha256_hex(text));
    return parse_player(text);
}

Probe load_probe_spec(const std::string& probe_path, const std::string& joss_ann_path,
                      InputDigests& inputs) {
    if (probe_path.empty() == joss_ann_path.empty()) {
        throw UsageError("give exactly one of a probe file or --joss-ann <player file>");
    }
    if (!joss_ann_path.empty()) return joss_ann(load_player(joss_ann_path, inputs));
    const std::string text = read_file(probe_path);
    inputs.emplace_back(probe_path, sha256_hex(text));
    return parse_probe(text);
}

Loaded load_pair(const std::string& player_path, const std::string& probe_path,
                 const std::string& joss_ann_path, const std::string& config_path) {
    // Validate the probe spec first so a missing probe is a usage error even
    // when the player file is unreadable.
    if (probe_path.empty() == joss_ann_path.empty()) {
        throw UsageError("give exactly one of a probe file or --joss-ann <player file>");
    }
    InputDigests inputs;
    PlayerMachine player = load_player(player_path, inputs);
    Probe probe = load_probe_spec(probe_path, joss_ann_path, inputs);
    if (!config_path.empty()) inputs.emplace_back(config_path, sha256_hex(read_file(config_path)));
    return {std::move(player), std::move(probe), std::move(inputs)};
}

void add_shared(CLI::App& sub, Flags& flags) {
    sub.add_option("--config", flags.config, "Config file (payoff/n/boundary/... lines)");
    sub.add_option("--payoff", flags.payoff, "Payoff override: <a> <b> <value> (repeatable)")
        ->expected(3)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub.add_option("-n", flags.n, "Grid resolution")->check(CLI::PositiveNumber);
    sub.add_option("--boundary", flags.boundary, "Boundary convention")
        ->check(CLI::IsMember({"cesaro", "offset", "interior_offset"}));
    sub.add_option("--quad-n", flags.quad_n, "Quadrature resolution")->check(CLI::PositiveNumber);
    sub.add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub.add_option("-o,--output", flags.output, "Output path (default stdout)");
    sub.add_option("--seed", flags.seed, "RNG seed");
}

// ---------------------------------------------------------------- commands

int cmd_validate(const std::vector<std::string>& files, std::ostream& out) {
    bool all_ok = true;
    for (const auto& path : files) {
        try {
            const std::string text = read_file(path);
            const std::string kind = header_keyword(text);
            if (kind == "player") {
                const PlayerMachine p = parse_player(text);
                out << path << ": OK (player " << p.name() << ", " << p.state_count() << " states)\n";
            } else if (kind == "probe") {
                const Probe p = parse_probe(text);
                const ProbeValidation report = validate_probe(p);
                out << path << ": OK (probe " << p.name() << ", " << p.state_count()
                    << " states, min sampled weight " << report.min_weight << ")\n";
            } else {
                throw ParseError("unknown file header '" + kind + "' (expected player or probe)",
                                 ParseError::Kind::Line, 1);
            }
        } catch (const Error& e) {
            all_ok = false;
            out << path << ": INVALID: " << e.what() << "\n";
        }
    }
    return all_ok ? kOk : kInvalidInput;
}

int cmd_fingerprint(const Loaded& in, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const PayoffMatrix payoff = build_payoff(in.player.alphabet(), cfg);
    if (cfg.verbosity > 0) err << "fingerprinting " << in.player.name() << " vs " << in.probe.name() << "\n";
    const FingerprintGrid grid =
        fingerprint_grid(in.player, in.probe, payoff, cfg.n, parse_boundary_mode(cfg.boundary));
    write_output(cfg.output, cfg.format == "json" ? grid_to_json(grid, in.inputs) : grid_to_csv(grid, in.inputs),
                 out);
    return kOk;
}

int cmd_symbolic(const Loaded& in, const RunConfig& cfg, std::ostream& out) {
    const PayoffMatrix payoff = build_payoff(in.player.alphabet(), cfg);
    const SymbolicFingerprint fp = symbolic_fingerprint(in.player, in.probe, payoff);
    std::ostringstream text;
    if (cfg.format == "json") {
        nlohmann::json inputs = nlohmann::json::array();
        for (const auto& [label, digest] : in.inputs) inputs.push_back({{"path", label}, {"sha256", digest}});
        nlohmann::json doc{
            {"meta", {{"tool", "probefp " + std::string(kToolVersion)}, {"player", fp.meta.player},
                      {"probe", fp.meta.probe}, {"payoff", payoff_json(payoff)}, {"inputs", inputs}}},
            {"num", fp.f.num().render()},
            {"den", fp.f.den().render()},
            {"agreement", {{"max_deviation", fp.max_deviation}, {"points", fp.checked_points},
                           {"tolerance", SymbolicFingerprint::kAgreementTolerance}, {"pass", fp.agrees()}}},
        };
        text << doc.dump(2) << "\n";
    } else {
        text << "# tool: probefp " << kToolVersion << "\n";
        for (const auto& [label, digest] : in.inputs) text << "# input: " << label << " sha256 " << digest << "\n";
        text << "player: " << fp.meta.player << "\n";
        text << "probe: " << fp.meta.probe << "\n";
        text << "payoff: " << payoff_text(payoff) << "\n";
        text << "num: " << fp.f.num().render() << "\n";
        text << "den: " << fp.f.den().render() << "\n";
        text << "agreement: max |symbolic - numeric| = " << format_number(fp.max_deviation) << " over "
             << fp.checked_points << " interior points of the 20-subdivision (tolerance "
             << SymbolicFingerprint::kAgreementTolerance << "): " << (fp.agrees() ? "PASS" : "FAIL") << "\n";
    }
    write_output(cfg.output, text.str(), out);
    if (!fp.agrees()) {
        throw NumericError("symbolic and numeric fingerprints disagree by " + format_number(fp.max_deviation),
                           0.0, 0.0);
    }
    return kOk;
}

int cmd_distance(const std::vector<std::string>& sources, const std::string& joss_ann_path,
                 const RunConfig& cfg, const std::string& config_path, std::ostream& out, std::ostream& err) {
    if (sources.size() < 2) throw UsageError("distance needs at least two fingerprint sources");

    InputDigests inputs;
    std::optional<Probe> default_probe;
    if (!joss_ann_path.empty()) default_probe = joss_ann(load_player(joss_ann_path, inputs));
    const BoundaryMode mode = parse_boundary_mode(cfg.boundary);

    std::vector<std::pair<std::string, FingerprintFn>> corpus;
    std::set<std::string> names;
    for (const std::string& source : sources) {
        std::string name;
        std::string spec = source;
        if (auto eq = source.find('='); eq != std::string::npos && eq > 0 &&
                                        source.find_first_of("/:") > eq) {
            name = source.substr(0, eq);
            spec = source.substr(eq + 1);
        }
        FingerprintFn fn;
        if (auto colon = spec.find(':'); colon != std::string::npos) {
            const PlayerMachine player = load_player(spec.substr(0, colon), inputs);
            const std::string probe_path = spec.substr(colon + 1);
            const std::string probe_text = read_file(probe_path);
            inputs.emplace_back(probe_path, sha256_hex(probe_text));
            const Probe probe = parse_probe(probe_text);
            if (name.empty()) name = player.name();
            fn = evaluable(compose(player, probe, build_payoff(player.alphabet(), cfg)), mode);
        } else {
            const std::string text = read_file(spec);
            if (header_keyword(text) == "player") {
                if (!default_probe) throw UsageError("source '" + spec + "' is a player file; give --joss-ann or PLAYER:PROBE");
                inputs.emplace_back(spec, sha256_hex(text));
                const PlayerMachine player = parse_player(text);
                if (name.empty()) name = player.name();
                fn = evaluable(compose(player, *default_probe, build_payoff(player.alphabet(), cfg)), mode);
            } else {
                inputs.emplace_back(spec, sha256_hex(text));
                FingerprintGrid grid = grid_from_text(text);
                if (name.empty()) name = grid.meta.player.empty() ? spec : grid.meta.player;
                fn = evaluable(std::move(grid));
            }
        }
        if (!names.insert(name).second) throw UsageError("duplicate fingerprint name '" + name + "'");
        corpus.emplace_back(name, std::move(fn));
    }
    if (!config_path.empty()) inputs.emplace_back(config_path, sha256_hex(read_file(config_path)));

    if (cfg.verbosity > 0) err << "computing " << corpus.size() << "x" << corpus.size() << " distances\n";
    const DistanceMatrix m = distance_matrix(corpus, cfg.quad_n);
    write_output(cfg.output,
                 cfg.format == "json" ? distances_to_json(m, cfg.quad_n, inputs) : distances_to_csv(m, inputs), out);
    return kOk;
}

int cmd_simulate(const Loaded& in, double x, double y, const RunConfig& cfg, std::ostream& out) {
    if (!in_simplex(x, y)) throw UsageError("point (" + format_number(x) + ", " + format_number(y) +
                                            ") is outside the parameter simplex");
    if (cfg.replicates < 2) throw UsageError("--replicates must be >= 2");
    const std::uint64_t burn_in = cfg.burn_in.value_or(cfg.rounds / 10);
    if (cfg.rounds <= burn_in) throw UsageError("--rounds must exceed --burn-in");
    const PayoffMatrix payoff = build_payoff(in.player.alphabet(), cfg);
    const SimEstimate est = estimate(in.player, in.probe, payoff, x, y, cfg.rounds, burn_in, cfg.replicates, cfg.seed);
    const double exact = fingerprint_at(in.player, in.probe, payoff, x, y, BoundaryMode::Cesaro);
    const FingerprintMeta meta{in.player.name(), in.probe.name(), payoff};
    write_output(cfg.output, simulation_json(est, x, y, exact, meta, in.inputs).dump(2) + "\n", out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fingerprints of finite-state game strategies against parametrized probes", "probefp"};
    app.set_version_flag("--version", "probefp " + std::string(kToolVersion));
    app.require_subcommand(1);
    int verbosity = 0;
    app.add_flag("-v,--verbose", verbosity, "Progress messages on stderr");

    std::vector<std::string> validate_files;
    auto* validate = app.add_subcommand("validate", "Parse and validate player/probe files");
    validate->add_option("files", validate_files, "Player or probe files")->required();

    Flags flags;
    std::string player_path;
    std::string probe_path;
    std::string joss_ann_path;
    auto add_pair = [&](CLI::App* sub) {
        sub->add_option("player", player_path, "Player file")->required();
        sub->add_option("probe", probe_path, "Probe file");
        sub->add_option("--joss-ann", joss_ann_path, "Use the Joss-Ann probe built from this player file");
        add_shared(*sub, flags);
    };

    auto* fingerprint = app.add_subcommand("fingerprint", "Fingerprint grid over the simplex");
    add_pair(fingerprint);
    auto* symbolic = app.add_subcommand("symbolic", "Closed-form rational fingerprint");
    add_pair(symbolic);

    std::vector<std::string> sources;
    auto* distance = app.add_subcommand("distance", "L2 distance matrix between fingerprints");
    distance->add_option("sources", sources,
                         "Grid files, player files (with --joss-ann), or PLAYER:PROBE pairs; prefix NAME= to rename")
        ->required();
    distance->add_option("--joss-ann", joss_ann_path, "Probe base for bare player sources");
    add_shared(*distance, flags);

    double sim_x = 0.0;
    double sim_y = 0.0;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate at one parameter point");
    add_pair(simulate);
    simulate->add_option("-x", sim_x, "Probe parameter x")->required();
    simulate->add_option("-y", sim_y, "Probe parameter y")->required();
    simulate->add_option("--rounds", flags.rounds, "Rounds per replicate");
    simulate->add_option("--burn-in", flags.burn_in, "Discarded leading rounds (default rounds/10)");
    simulate->add_option("--replicates", flags.replicates, "Independent replicates");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(validate_files, out);
        if (distance->parsed()) {
            const RunConfig cfg = resolve_config(*distance, flags, verbosity);
            return cmd_distance(sources, joss_ann_path, cfg, flags.config, out, err);
        }
        CLI::App* sub = fingerprint->parsed() ? fingerprint : symbolic->parsed() ? symbolic : simulate;
        const RunConfig cfg = resolve_config(*sub, flags, verbosity);
        const Loaded loaded = load_pair(player_path, probe_path, joss_ann_path, flags.config);
        if (sub == fingerprint) return cmd_fingerprint(loaded, cfg, out, err);
        if (sub == symbolic) return cmd_symbolic(loaded, cfg, out);
        return cmd_simulate(loaded, sim_x, sim_y, cfg, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ReducibleChainError& e) {
        err << "reducible chain: " << e.what() << "\n";
        return kReducible;
    } catch (const SwellError& e) {
        err << "expression swell: " << e.what() << "\n";
        return kSwellAbort;
    } catch (const NumericError& e) {
        err << "numeric failure at (" << format_number(e.x()) << ", " << format_number(e.y()) << "): " << e.what()
            << "\n";
        return kNumericFailure;
    } catch (const Error& e) {
        err << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumericFailure;
    }
}

}  // namespace probefp::cli
