import os
from fractions import Fraction
from pathlib import Path

import pytest

import matradix

CONFIGS = Path(os.environ.get("MATRADIX_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


def config(name):
    return matradix.load_config(str(CONFIGS / f"{name}.json"))


def test_encode_examples():
    s = matradix.RadixSystem([[2]], [0, 3])
    assert s.encode([11]) == "3;0;0;3|3;0"
    assert s.encode([18]) == "0;3;3|0"
    assert s.encode([-2]) == "|0;3"
    assert s.encode([0]) == "|0"


def test_cycle_codec_roundtrip():
    s = matradix.RadixSystem([[2]], [0, 1])
    assert s.cycle_points("1;0") == [[Fraction(1, 3)], [Fraction(2, 3)]]
    word = s.encode([15], cycle="1;0", slot=0)
    assert word == "0;0;1;0;0;1|1;0"
    assert s.decode(word, cycle="1;0") == ([15], 0)


def test_integer_cycles():
    s = matradix.RadixSystem([[2]], [0, 3])
    got = {frozenset(p[0] for p in c["points"]) for c in s.integer_cycles()}
    assert got == {frozenset({0}), frozenset({-3}), frozenset({-1, -2})}


def test_large_integers_cross_the_boundary():
    s = matradix.RadixSystem([[2]], [0, 1])
    k = 10**30 + 7
    assert s.decode(s.encode([k])) == ([k], 0)


def test_config_and_hadamard():
    cfg = config("cloud9")
    assert cfg.transpose
    assert len(cfg.digits) == 5
    h = matradix.hadamard(cfg.a, cfg.digits, cfg.dual_digits)
    assert h["unitary"]
    assert h["defect"] < 1e-12
    assert h["fourier_distance"] < 1e-12


def test_spectrum_twin_dragon():
    out = matradix.spectrum(config("twin_dragon"))
    assert out["gamma"] == out["lambda"]
    assert out["mass_uniformity"] > 0.95


def test_membership_and_measure():
    s = matradix.RadixSystem([[2]], [0, 3])
    assert s.membership([Fraction(3, 2)]) == "inside"
    assert s.membership([4]) == "outside"
    assert s.measure() == pytest.approx(3.0, rel=0.01)


def test_corsum():
    s = config("binary_01").system()
    report = s.verify_corsum(cycle="1;0", samples=20)
    assert report["passed"]


def test_group_relation():
    assert matradix.group_relation_holds([[1, -2], [2, 1]], [3, -7])


def test_errors_carry_kind_and_exit_code():
    with pytest.raises(matradix.MatradixError) as err:
        matradix.RadixSystem([[2]], [0, 2])
    assert err.value.kind == "IncompleteDigitSet"
    assert err.value.exit_code == 3
    s = matradix.RadixSystem([[2]], [0, 1])
    with pytest.raises(matradix.MatradixError) as err:
        s.decode("|1;1;0", cycle="1;0")
    assert err.value.kind == "PeriodNotCompanion"
