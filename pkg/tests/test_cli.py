import json

import numpy as np
import pytest

from crossalg.algebra import field
from crossalg.cli import main, run
from crossalg.fixtures import mutate_bundle, random_fixture
from crossalg.freeconstruct import make_data
from crossalg.io import dumps, save, to_json


def write(tmp_path, name, obj):
    path = tmp_path / name
    save(obj, path)
    return str(path)


@pytest.mark.parametrize("kind", ["crossed", "2crossed", "square", "quadratic", "simplicial", "construction_data"])
def test_validate_fixture(kind):
    code, d, msg, _ = run(["validate", "fixture:" + kind, "--seed", "1"])
    assert code == 0 and d["pass"], msg


def test_validate_mutant_fails_with_witness(tmp_path):
    for s in range(40):
        d = to_json(random_fixture("crossed", s, 3))
        _, m = mutate_bundle(d, np.random.default_rng(s))
        path = tmp_path / "m.json"
        path.write_text(dumps(m))
        code, rep, _, _ = run(["validate", str(path)])
        if code == 1:
            bad = [r for r in rep["results"] if not r["pass"]]
            assert bad and all(r["witness"] is not None for r in bad)
            return
    pytest.fail("no mutant detected")


def test_input_errors(tmp_path):
    empty = tmp_path / "e.json"
    empty.write_text("")
    assert run(["validate", str(empty)])[0] == 2
    assert run(["validate", "fixture:banana"])[0] == 2
    sq = write(tmp_path, "sq.json", random_fixture("square", 0, 3))
    assert run(["construct", "two-to-quadratic", sq])[0] == 2
    assert run(["validate", "fixture:crossed", "--p", "4"])[0] == 2


def test_construct_and_out(tmp_path):
    out = tmp_path / "sq.json"
    code, d, msg, _ = run(["construct", "m2", "fixture:simplicial", "--seed", "3", "--out", str(out)])
    assert code == 0, msg
    assert d["output_kind"] == "square"
    assert json.loads(out.read_text())["kind"] == "square"
    assert run(["validate", str(out)])[0] == 0


def test_freequad_empty(tmp_path):
    data = write(tmp_path, "d.json", make_data(field(3), degree_cap=3))
    code, d, _, _ = run(["freequad", data])
    assert code == 0
    assert d["profiles"]["output"]["dims"] == [0, 1, 0, 0]


def test_homotopy_trivial_quadratic(tmp_path):
    from crossalg.freeconstruct import totally_free_quadratic

    Q = totally_free_quadratic(make_data(field(5), degree_cap=3))
    code, d, _, _ = run(["homotopy", write(tmp_path, "q.json", Q)])
    assert code == 0 and d["profiles"]["input"]["dims"] == [0, 1, 0, 0]


def test_compare_paths(tmp_path):
    a = write(tmp_path, "a.json", random_fixture("2crossed", 4, 3))
    code, d, _, _ = run(["compare", a, a])
    assert code == 0 and set(d["profiles"]) == {"A", "B"}


@pytest.mark.parametrize("prop,kind", [("ho2", "2crossed"), ("ho3", "simplicial"), ("thm-vs-ellis", "construction_data")])
def test_compare_props(prop, kind):
    code, d, msg, _ = run(["compare", "--prop", prop, "fixture:" + kind, "--seed", "2"])
    assert code == 0, msg


def test_compare_xy_has_kernel_line(tmp_path):
    data = write(tmp_path, "x.json", make_data(field(3), [("x", [0])], degree_cap=3))
    code, d, _, _ = run(["compare", "--prop", "xy", data])
    assert code == 0
    assert any(r["check"].endswith("kernel-homology-zero") and r["pass"] for r in d["results"])


def test_compare_prop_kind_mismatch():
    assert run(["compare", "--prop", "ho2", "fixture:square"])[0] == 2


def test_json_output_is_deterministic(capsys):
    outs = []
    for _ in range(3):
        assert main(["validate", "fixture:quadratic", "--seed", "5", "--json"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] == outs[2]
    assert json.loads(outs[0])["pass"] is True


def test_human_output(capsys):
    main(["homotopy", "fixture:crossed"])
    out = capsys.readouterr().out
    assert out.startswith("homotopy: PASS") and "pi = (" in out
