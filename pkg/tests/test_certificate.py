import json
from fractions import Fraction

import pytest

from primdyn.certificate import Certificate, Timer, certify


def test_roundtrip():
    c = certify("x.claim", {"r": Fraction(1, 3)}, [], Timer(), [{"v": {Fraction(1, 2)}}], ["ok"])
    assert c.verdict == "pass"
    assert c.parameters == {"r": "1/3"}
    back = Certificate.loads(c.dumps())
    assert back.stable_dict() == c.stable_dict()
    assert json.loads(c.dumps())["witnesses"] == [{"v": ["1/2"]}]


def test_fail_needs_witness():
    with pytest.raises(ValueError):
        Certificate("x", {}, "fail", [])
    with pytest.raises(ValueError):
        Certificate("x", {}, "maybe")


def test_failures_become_witnesses():
    c = certify("x", {}, [{"n": 3}], Timer(), [{"ignored": 1}])
    assert c.verdict == "fail" and c.witnesses == [{"n": 3}]


def test_stable_dict_drops_volatile():
    c = certify("x", {}, [], Timer())
    assert "timestamp" not in c.stable_dict() and "elapsed_ms" not in c.stable_dict()
