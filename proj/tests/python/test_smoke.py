import math
import os
from pathlib import Path

import pytest

import probefp

DATA = Path(os.environ.get("PROBEFP_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def load_player(name):
    return probefp.parse_player((DATA / "players" / f"{name}.player").read_text())


def load_probe(name):
    return probefp.parse_probe((DATA / "probes" / f"{name}.probe").read_text())


@pytest.fixture(scope="module")
def ja_tft():
    return probefp.joss_ann(load_player("tft"))


def test_expressions():
    assert probefp.parse_expr("y + x + 1") == "1+x+y"
    assert probefp.parse_expr("0.25") == "1/4"
    assert probefp.eval_expr("1-x-y", 0.25, 0.25) == 0.5
    with pytest.raises(probefp.ParseError):
        probefp.parse_expr("2x")


def test_machines(ja_tft):
    tft = load_player("tft")
    assert tft.name == "TFT"
    assert tft.state_count == 1
    assert ja_tft.name == "JossAnn(TFT)"
    report = probefp.validate_probe(ja_tft)
    assert report["ok"]
    assert report["min_weight"] == 0.0
    with pytest.raises(probefp.ValidationError):
        load_probe("bad_sum")


def test_fingerprints(ja_tft):
    allc = load_player("allc")
    assert probefp.fingerprint_at(allc, ja_tft, 0.25, 0.25) == pytest.approx(2.25, abs=1e-12)
    grid = probefp.fingerprint_grid(allc, ja_tft, n=4)
    assert len(grid) == 15
    for x, y, v in grid:
        assert v == pytest.approx(3 - 3 * y, abs=1e-12)
    sym = probefp.symbolic_fingerprint(load_player("alld"), ja_tft)
    assert (sym["num"], sym["den"]) == ("1+4*x", "1")
    assert sym["agrees"]
    with pytest.raises(probefp.ReducibleChainError):
        probefp.symbolic_fingerprint(load_player("tft"), load_probe("split"))


def test_payoff_override(ja_tft):
    allc = load_player("allc")
    assert probefp.fingerprint_at(allc, ja_tft, 0.0, 0.0, payoff=[("C", "C", "4")]) == 4.0


def test_distance_and_simulation(ja_tft):
    corpus = [("AllC", load_player("allc"), ja_tft), ("AllD", load_player("alld"), ja_tft)]
    names, d = probefp.distance_matrix(corpus, quad_n=100)
    assert names == ["AllC", "AllD"]
    assert d[0][0] == 0.0 and d[0][1] == d[1][0]
    assert abs(d[0][1] - math.sqrt(5 / 12)) < 1e-3

    est = probefp.estimate(load_player("alld"), ja_tft, 0.5, 0.25, rounds=20000, replicates=8, seed=3)
    assert abs(est["mean"] - 3.0) <= 4 * est["stderr"]
    assert est == probefp.estimate(load_player("alld"), ja_tft, 0.5, 0.25, rounds=20000, replicates=8, seed=3)
