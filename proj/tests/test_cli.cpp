#include <doctest.h>

#include "cli.hpp"
#include "support.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace probefp;
namespace fs = std::filesystem;
using probefp::testing::data_path;
using probefp::testing::slurp;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "probefp");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string kTft = data_path("players/tft.player");
const std::string kAllc = data_path("players/allc.player");
const std::string kAlld = data_path("players/alld.player");
const std::string kGrim = data_path("players/grim.player");

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("probefp_cli_" + std::to_string(::getpid()))) { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    bool body = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!body) {
            body = true;
            continue;
        }
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("validate") {
    const Result ok = run({"validate", kTft, data_path("probes/constc.probe")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("OK") != std::string::npos);

    const Result bad = run({"validate", data_path("probes/bad_sum.probe")});
    CHECK(bad.code == 2);
    CHECK((bad.out + bad.err).find("1-x-y") != std::string::npos);

    const Result missing = run({"validate", "/nonexistent/file.player"});
    CHECK(missing.code == 2);
    CHECK((missing.out + missing.err).find("cannot read") != std::string::npos);

    CHECK(run({"validate"}).code == 64);
}

TEST_CASE("fingerprint") {
    const Result r = run({"fingerprint", kAllc, "--joss-ann", kTft, "-n", "4"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 15);
    for (const auto& row : rows) CHECK(std::abs(row[2] - (3.0 - 3.0 * row[1])) <= 1e-12);
    CHECK(r.out.find("# input: ") != std::string::npos);

    const Result c = run({"fingerprint", kTft, data_path("probes/constc.probe"), "-n", "2"});
    REQUIRE(c.code == 0);
    for (const auto& row : csv_rows(c.out)) CHECK(row[2] == 3.0);

    CHECK(run({"fingerprint", kTft}).code == 64);
    CHECK(run({"fingerprint", kTft, "--joss-ann", kTft, "-n", "0"}).code == 64);
    CHECK(run({"fingerprint", kTft, "--joss-ann", kTft, "--format", "xml"}).code == 64);
    CHECK(run({"fingerprint", kTft, data_path("probes/bad_sum.probe")}).code == 2);
}

TEST_CASE("fingerprint JSON and payoff overrides") {
    const Result r = run({"fingerprint", kAllc, "--joss-ann", kTft, "-n", "2", "--format", "json", "--payoff", "C", "C", "4"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["meta"]["n"] == 2);
    CHECK(doc["points"][0][2] == 4.0);  // (0, 0): AllC vs TFT, always mutual C
}

TEST_CASE("config file with flag precedence") {
    TempDir dir;
    const std::string cfg = dir.file("run.cfg");
    std::ofstream(cfg) << "# run settings\nn 3\nformat json\npayoff C C 2\n";
    const Result r = run({"fingerprint", kAllc, "--joss-ann", kTft, "--config", cfg, "-n", "2"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["meta"]["n"] == 2);
    CHECK(doc["points"][0][2] == 2.0);
}

TEST_CASE("symbolic") {
    const Result r = run({"symbolic", kAlld, "--joss-ann", kTft});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("num: 1+4*x") != std::string::npos);
    CHECK(r.out.find("den: 1\n") != std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);

    const Result c = run({"symbolic", kAllc, "--joss-ann", kTft});
    REQUIRE(c.code == 0);
    CHECK(c.out.find("num: 3-3*y") != std::string::npos);

    const Result red = run({"symbolic", kTft, data_path("probes/split.probe")});
    CHECK(red.code == 4);
    CHECK((red.out + red.err).find("closed {") != std::string::npos);
    CHECK(run({"symbolic", kGrim, "--joss-ann", kTft}).code == 4);
}

TEST_CASE("distance") {
    const Result r = run({"distance", kAllc, kAlld, "--joss-ann", kTft});
    REQUIRE(r.code == 0);
    const auto rows = [&] {
        std::vector<std::string> lines;
        std::istringstream in(r.out);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] != '#') lines.push_back(line);
        }
        return lines;
    }();
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "name,AllC,AllD");
    const double d = std::stod(rows[1].substr(rows[1].rfind(',') + 1));
    CHECK(std::abs(d - 0.6455) <= 1e-3);

    CHECK(run({"distance", kAllc, "--joss-ann", kTft}).code == 64);
    CHECK(run({"distance", "a=" + kAllc, "a=" + kAlld, "--joss-ann", kTft}).code == 64);
}

TEST_CASE("distance from grid files") {
    TempDir dir;
    const std::string g1 = dir.file("allc.csv");
    const std::string g2 = dir.file("alld.json");
    REQUIRE(run({"fingerprint", kAllc, "--joss-ann", kTft, "-n", "10", "-o", g1}).code == 0);
    REQUIRE(run({"fingerprint", kAlld, "--joss-ann", kTft, "-n", "10", "--format", "json", "-o", g2}).code == 0);
    const Result r = run({"distance", g1, g2, "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(std::abs(doc["distances"][0][1].get<double>() - std::sqrt(5.0 / 12.0)) <= 1e-3);
}

TEST_CASE("simulate") {
    const Result r = run({"simulate", kAllc, "--joss-ann", kTft, "-x", "0.25", "-y", "0.25", "--rounds", "100000"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(std::abs(doc["z"].get<double>()) <= 3.0);
    CHECK(doc["exact"] == 2.25);
    CHECK(doc["estimate"]["seed"] == 1);
    CHECK(doc["meta"]["rng"] == "mt19937_64 (53-bit uniform)");

    CHECK(run({"simulate", kAllc, "--joss-ann", kTft, "-x", "0.7", "-y", "0.7"}).code == 64);

    const Result det = run({"simulate", kTft, data_path("probes/constc.probe"), "-x", "0.1", "-y", "0.1",
                            "--rounds", "1000", "--replicates", "2"});
    REQUIRE(det.code == 0);
    CHECK(nlohmann::json::parse(det.out)["estimate"]["stderr"] == 0.0);
}

TEST_CASE("outputs are byte-identical across runs") {
    TempDir dir;
    for (int k = 0; k < 2; ++k) {
        REQUIRE(run({"fingerprint", kTft, "--joss-ann", kTft, "-n", "6", "-o", dir.file("fp" + std::to_string(k))}).code == 0);
        REQUIRE(run({"simulate", kTft, "--joss-ann", kTft, "-x", "0.2", "-y", "0.2", "--rounds", "5000", "--replicates",
                     "3", "--seed", "9", "-o", dir.file("sim" + std::to_string(k))})
                    .code == 0);
    }
    CHECK(slurp(dir.file("fp0")) == slurp(dir.file("fp1")));
    CHECK(slurp(dir.file("sim0")) == slurp(dir.file("sim1")));
}

TEST_CASE("usage errors and help") {
    CHECK(run({}).code == 64);
    CHECK(run({"frobnicate"}).code == 64);
    CHECK(run({"--help"}).code == 0);
}
