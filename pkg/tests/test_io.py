import json

import numpy as np
import pytest

from crossalg.algebra import NotPrime, field
from crossalg.fixtures import random_fixture
from crossalg.freeconstruct import make_data
from crossalg.io import ParseError, UnknownKind, dumps, from_json, load, save, to_json
from helpers import PRIMES

KINDS = ["precrossed", "crossed", "nil2", "2crossed", "square", "quadratic", "simplicial", "construction_data"]


@pytest.mark.parametrize("kind", KINDS)
def test_round_trip(kind):
    for s in range(4):
        obj = random_fixture(kind, s, PRIMES[s % 3])
        text = dumps(to_json(obj))
        again = to_json(from_json(json.loads(text)))
        assert dumps(again) == text


def test_save_and_load(tmp_path):
    obj = random_fixture("crossed", 1, 3)
    path = tmp_path / "c.json"
    save(obj, path)
    assert load(path) == json.loads(dumps(to_json(obj)))


def test_load_errors(tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("  \n")
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    for path in (empty, bad, tmp_path / "missing.json"):
        with pytest.raises(ParseError):
            load(path)


def bundle(kind="crossed"):
    return to_json(random_fixture(kind, 2, 3))


def test_bundle_errors():
    with pytest.raises(ParseError):
        from_json([1, 2])
    with pytest.raises(UnknownKind):
        from_json({"kind": "banana"})
    d = bundle()
    del d["action"]
    with pytest.raises(ParseError):
        from_json(d)
    d = bundle()
    d["boundary"]["matrix"] = [[1, 2, 3]]
    with pytest.raises(ParseError):
        from_json(d)
    d = bundle()
    d["action"].append([0, 0])
    with pytest.raises(ParseError):
        from_json(d)
    d = bundle()
    d["action"].append([99, 0, 0, 1])
    with pytest.raises(ParseError):
        from_json(d)
    d = bundle()
    d["R"]["p"] = 5
    with pytest.raises(ParseError):
        from_json(d)
    d = bundle("simplicial")
    d["levels"] = d["levels"][:3]
    with pytest.raises(ParseError):
        from_json(d)


def test_not_prime():
    d = bundle()
    d["C"]["p"] = d["R"]["p"] = 4
    with pytest.raises(NotPrime):
        from_json(d)


def test_sparse_psi_format():
    d = {
        "kind": "construction_data",
        "R": {"p": 3, "dim": 1, "structconst": [[0, 0, 0, 1]]},
        "X": [{"name": "x1", "vartheta": [0]}, {"name": "x2"}],
        "Y": [{"name": "y", "psi": {"x1*x2": 1, "x1^2": [2]}}],
        "degree_cap": 3,
    }
    data = from_json(d)
    assert data.X == ["x1", "x2"] and data.Y == ["y"]
    assert {k: v.tolist() for k, v in data.psi[0].items()} == {(1, 1): [1], (2, 0): [2]}
    assert to_json(data)["Y"][0]["psi"] == {"x1*x1": [2], "x1*x2": [1]}


def test_dumps_is_canonical():
    data = make_data(field(5), [("x", [0])], degree_cap=3)
    a = dumps(to_json(data))
    b = dumps(json.loads(a))
    assert a == b and a.endswith("\n")
