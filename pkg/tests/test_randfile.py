from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randcl import dumps, load, loads
from randcl.checks import random_instance

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

GOOD = """
{
  "theory": "dlo",
  "atoms": [["w1", "1/2"], ["w2", "1/2"]],
  "elements": {"a": ["0", "1"], "b": ["1", "0"]}
}
"""


def test_load_good_instance():
    r = loads(GOOD)
    assert r.sig.is_dlo
    assert r.partition.names == ("w1", "w2")
    assert sorted(r.elements) == ["a", "b"]


def test_load_sample_files():
    r = load(SAMPLES / "swap_pair.json")
    assert r.partition.size == 2 and r.sig.is_dlo
    f = load(SAMPLES / "coin_enum.json")
    assert f.sig.n == 2


def test_parse_error_has_location():
    with pytest.raises(ValueError, match=r"parse error at line 1, column 6"):
        loads('{"a":')


def test_weight_sum_reported():
    bad = GOOD.replace('"1/2"], ["w2", "1/2"', '"1/2"], ["w2", "1/3"')
    with pytest.raises(ValueError, match="weights sum to 5/6"):
        loads(bad)


def test_value_length_mismatch():
    bad = GOOD.replace('"a": ["0", "1"]', '"a": ["0", "1", "2"]')
    with pytest.raises(ValueError, match="3 values for 2 atoms"):
        loads(bad)


def test_enum_domain_violation():
    text = """
    {
      "theory": "enum(2)",
      "atoms": [["w1", "1"]],
      "elements": {"x": [3]}
    }
    """
    with pytest.raises(ValueError, match="out of domain"):
        loads(text)


def test_enum_values_must_be_integers():
    text = """
    {
      "theory": "enum(2)",
      "atoms": [["w1", "1"]],
      "elements": {"x": ["1"]}
    }
    """
    with pytest.raises(ValueError, match="must be integers"):
        loads(text)


def test_dlo_values_must_be_strings():
    bad = GOOD.replace('["0", "1"]', "[0.5, 1]")
    with pytest.raises(ValueError, match="exact fraction string"):
        loads(bad)


def test_missing_field():
    with pytest.raises(ValueError, match="missing field 'elements'"):
        loads('{"theory": "dlo", "atoms": [["w1", "1"]]}')


def test_unknown_theory():
    with pytest.raises(ValueError, match="unknown theory"):
        loads(GOOD.replace('"dlo"', '"groups"'))


def test_missing_file():
    with pytest.raises(ValueError, match="cannot read"):
        load(SAMPLES / "absent.json")


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_round_trip(seed):
    r = random_instance(random.Random(seed))
    back = loads(dumps(r))
    assert back.sig == r.sig
    assert back.partition == r.partition
    assert back.elements == r.elements
