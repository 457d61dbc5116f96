#include <doctest.h>

#include "oracles.hpp"
#include "support.hpp"

#include "probefp/errors.hpp"

using namespace probefp;
using probefp::testing::player;
using probefp::testing::probe;

namespace {

const Alphabet kCD = Alphabet::cooperate_defect();
const Action C = *kCD.find("C");
const Action D = *kCD.find("D");

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

const char* kProbeHeader = "probe P\nalphabet C D\n";

}  // namespace

TEST_CASE("alphabet validation") {
    CHECK_THROWS_AS(Alphabet({"C"}), ValidationError);
    CHECK_THROWS_AS(Alphabet({"C", "C"}), ValidationError);
    CHECK_THROWS_AS(Alphabet({"C", "two words"}), ValidationError);
    const Alphabet rps({"R", "P", "S"});
    CHECK(rps.size() == 3);
    CHECK(rps.find("S")->id == 2);
    CHECK_FALSE(rps.find("C").has_value());
}

TEST_CASE("default payoff matrix") {
    const PayoffMatrix pd = PayoffMatrix::prisoners_dilemma();
    CHECK(pd(C, C) == 3);
    CHECK(pd(C, D) == 0);
    CHECK(pd(D, C) == 5);
    CHECK(pd(D, D) == 1);
    CHECK(pd.min_entry() == 0);
    CHECK(pd.max_entry() == 5);
    const PayoffMatrix p2 = parse_payoff_lines("# override\npayoff C C 2.5\n", pd);
    CHECK(p2(C, C) == Rational(5, 2));
    CHECK(p2(D, C) == 5);
}

TEST_CASE("parse_player: Tit-for-Tat") {
    const PlayerMachine tft = parse_player("player TFT\nstart 0 C\n0 C -> 0 C\n0 D -> 0 D\n");
    CHECK(tft.state_count() == 1);
    CHECK(tft.initial_action() == C);
    CHECK(tft.step(0, D).output == D);
    CHECK(tft.step(0, C).output == C);
    CHECK(tft.name() == "TFT");
}

TEST_CASE("parse_player: bundled strategies") {
    const PlayerMachine pavlov = player("pavlov");
    CHECK(pavlov.state_count() == 2);
    CHECK(pavlov.state_name(0) == "c");
    // Win-stay, lose-shift.
    CHECK(pavlov.step(0, C).output == C);
    CHECK(pavlov.step(0, D).output == D);
    CHECK(pavlov.step(1, C).output == D);
    CHECK(pavlov.step(1, D).output == C);
    CHECK(player("grim").state_count() == 2);
    CHECK(player("allc").state_count() == 1);
    CHECK(player("alld").initial_action() == D);
}

TEST_CASE("parse_player: errors") {
    const std::string missing = error_of([] { parse_player("player X\nstart 0 C\n0 C -> 0 C\n"); });
    CHECK(missing.find("missing transition") != std::string::npos);
    CHECK(missing.find("state 0") != std::string::npos);
    CHECK(missing.find("D") != std::string::npos);

    CHECK_THROWS_AS(parse_player("player X\nstart 0 C\n0 C -> 0 C\n0 D -> 0 D\n0 D -> 0 C\n"), ValidationError);
    // State 1 is never entered.
    CHECK_THROWS_AS(parse_player("player X\nstart 0 C\n0 C -> 0 C\n0 D -> 0 D\n1 C -> 0 C\n1 D -> 0 D\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_player("player X\nstart 0 Q\n0 C -> 0 C\n0 D -> 0 D\n"), Error);

    try {
        parse_player("player X\nstart 0 C\n0 C => 0 C\n0 D -> 0 D\n");
        FAIL("expected a syntax error");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::Line);
        CHECK(e.position() == 3);
    }
}

TEST_CASE("parse_player: deterministic") {
    const std::string text = testing::slurp(testing::data_path("players/grim.player"));
    CHECK(parse_player(text) == parse_player(text));
}

TEST_CASE("parse_probe: constant probe") {
    const Probe p = probe("constc");
    CHECK(p.state_count() == 1);
    const ProbeValidation r = validate_probe(p);
    CHECK(r.ok());
    CHECK(r.min_weight == 1.0);
    for (const auto& res : r.residuals) CHECK(res.residual.is_zero());
}

TEST_CASE("parse_probe: sum-to-one violation") {
    const std::string text = std::string(kProbeHeader) +
                             "init C s : 1\ns C -> C s : x\ns C -> D s : y\ns D -> C s : 1\n";
    const std::string msg = error_of([&] { parse_probe(text); });
    CHECK(msg.find("1-x-y") != std::string::npos);
    CHECK(msg.find("C") != std::string::npos);
    CHECK_THROWS_AS(parse_probe(text), ValidationError);
}

TEST_CASE("parse_probe: negativity violation") {
    const std::string text = std::string(kProbeHeader) +
                             "init C s : 1\ns C -> C s : x-1/2\ns C -> D s : 3/2-x\ns D -> C s : 1\n";
    const std::string msg = error_of([&] { parse_probe(text); });
    CHECK(msg.find("(0, 0)") != std::string::npos);
}

TEST_CASE("parse_probe: duplicate outcomes merge") {
    const Probe p = parse_probe(std::string(kProbeHeader) +
                                "init C s : 1/2\ninit C s : 1/2\ns C -> C s : x\ns C -> C s : 1-x\ns D -> D s : 1\n");
    REQUIRE(p.initial().size() == 1);
    CHECK(p.initial()[0].weight == ParamExpr(1));
    REQUIRE(p.step(0, C).size() == 1);
    CHECK(p.step(0, C)[0].weight == ParamExpr(1));
}

TEST_CASE("parse_probe: bad expression reports the line") {
    try {
        parse_probe(std::string(kProbeHeader) + "init C s : 1\ns C -> C s : 2x\ns D -> C s : 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::Line);
        CHECK(e.position() == 4);
    }
}

TEST_CASE("joss_ann: Tit-for-Tat merge") {
    const Probe ja = joss_ann(player("tft"));
    CHECK(ja.state_count() == 1);
    const Distribution& d = ja.step(0, C);
    REQUIRE(d.size() == 2);
    CHECK(d[0].output == C);
    CHECK(d[0].weight == parse_expr("1-y"));
    CHECK(d[1].output == D);
    CHECK(d[1].weight == parse_expr("y"));
    const Distribution& dd = ja.step(0, D);
    REQUIRE(dd.size() == 2);
    CHECK(dd[0].weight == parse_expr("x"));
    CHECK(dd[1].weight == parse_expr("1-x"));
    CHECK(ja.name() == "JossAnn(TFT)");
}

TEST_CASE("joss_ann: AllD merge and the forced-C corner") {
    const Probe ja = joss_ann(player("alld"));
    const Distribution& d = ja.step(0, C);
    REQUIRE(d.size() == 2);
    CHECK(d[0].weight == parse_expr("x"));
    CHECK(d[1].weight == parse_expr("1-x"));

    const Probe jt = joss_ann(player("tft"));
    for (Action a : {C, D}) {
        double mass_on_c = 0.0;
        for (const auto& o : jt.step(0, a)) {
            if (o.output == C) mass_on_c += o.weight.eval(1.0, 0.0);
        }
        CHECK(mass_on_c == 1.0);
    }
}

TEST_CASE("joss_ann: rejects non-binary alphabets") {
    const Alphabet rps({"R", "P", "S"});
    const PlayerMachine rock("Rock", rps, {"0"}, 0, Action{0}, {{0, Action{0}}, {0, Action{0}}, {0, Action{0}}});
    CHECK_THROWS_AS(joss_ann(rock), ValidationError);
}

TEST_CASE("property: joss_ann at (0,0) reproduces the base machine") {
    oracle::Generator gen(21);
    std::vector<PlayerMachine> bases{player("tft"), player("pavlov"), player("grim")};
    for (int k = 0; k < 30; ++k) bases.push_back(gen.player(4));
    for (const PlayerMachine& base : bases) {
        const Probe ja = joss_ann(base);
        REQUIRE(ja.state_count() == base.state_count());
        for (std::size_t s = 0; s < base.state_count(); ++s) {
            for (Action a : {C, D}) {
                const PlayerStep& want = base.step(s, a);
                for (const auto& o : ja.step(s, a)) {
                    const double w = o.weight.eval(0.0, 0.0);
                    const bool is_base = o.output == want.output && o.next_state == want.next_state;
                    CHECK(w == (is_base ? 1.0 : 0.0));
                }
            }
        }
    }
}

TEST_CASE("property: every generated probe sums to one exactly") {
    oracle::Generator gen(22);
    for (int k = 0; k < 50; ++k) {
        const Probe p = gen.probe(4);
        const ProbeValidation r = validate_probe(p);
        CHECK(r.sums_ok());
        for (const auto& res : r.residuals) CHECK(res.residual.is_zero());
        CHECK(r.min_weight >= 0.0);
    }
}

TEST_CASE("validate_probe examples") {
    const ProbeValidation ja = validate_probe(joss_ann(player("tft")));
    CHECK(ja.ok());
    CHECK(ja.min_weight == 0.0);

    const Probe two_x("TwoX", kCD, {"s"}, {{C, 0, ParamExpr(1)}},
                      {{{C, 0, parse_expr("2*x")}, {D, 0, parse_expr("1-2*x")}}, {{C, 0, ParamExpr(1)}}});
    const ProbeValidation r = validate_probe(two_x);
    CHECK(r.sums_ok());
    CHECK_FALSE(r.ok());
    CHECK(r.min_weight == -1.0);
    CHECK(r.min_point.x() == 1.0);
    CHECK(r.min_point.y() == 0.0);
    CHECK(r.summary().find("(1, 0)") != std::string::npos);

    CHECK(validate_probe(probe("constc")).min_weight == 1.0);
}

TEST_CASE("render round trip for players") {
    for (const std::string name : {"tft", "allc", "alld", "pavlov", "grim"}) {
        const PlayerMachine p = player(name);
        CHECK(parse_player(render_player(p)) == p);
    }
}

TEST_CASE("header keyword") {
    CHECK(header_keyword("# comment\n\nplayer X\n") == "player");
    CHECK(header_keyword("probe Y\n") == "probe");
}
