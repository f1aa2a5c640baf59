import os
from fractions import Fraction
from pathlib import Path

import pytest

import proxygrade

DATA = Path(os.environ.get("PROXYGRADE_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def election():
    return proxygrade.parse_election((DATA / "worked_example.json").read_text())


def test_worked_example():
    mech = (DATA / "worked_example_mechanism.json").read_text()
    assert proxygrade.grade(election(), mech) == {"I": Fraction(1), "J": Fraction(3)}


def test_majority_grade_default():
    grades = proxygrade.grade(election())
    # I: {1, 2} -> 1, J: {2, 3} -> 2
    assert grades == {"I": Fraction(1), "J": Fraction(2)}


def test_round_trip():
    e = election()
    again = proxygrade.parse_election(e.render())
    assert again == e
    assert again.render() == e.render()
    assert e.voters == ["x", "y", "z"]


def test_select_matches_sorted_index():
    values = [Fraction(5), Fraction(1, 2), 3, 2]
    ordered = sorted(Fraction(v) for v in values)
    assert proxygrade.select("lower_median", values) == ordered[1]
    assert proxygrade.select("max", values) == ordered[-1]


def test_rank():
    assert proxygrade.rank(election()) == [["J"], ["I"]]


def test_check():
    space = (DATA / "small_space.json").read_text()
    assert proxygrade.check("SP", space, "majority_grade")["holds"]
    assert not proxygrade.check("SP", space, "mean")["holds"]
    assert "SP" in proxygrade.axiom_names()


def test_errors():
    with pytest.raises(proxygrade.ProxygradeError, match="SchemaError"):
        proxygrade.parse_election("{")


def test_cli():
    code, out, _ = proxygrade.run_cli(["grade", "--election", str(DATA / "worked_example.json")])
    assert code == 0
    assert '"candidates"' in out
