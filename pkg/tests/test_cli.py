from __future__ import annotations

import json

import pytest

from ordlen.cli import evaluate, main
from ordlen.euclid import ZZ, RingMatrix
from ordlen.homology import ModuleComplex
from ordlen.module import cyclic_module, direct_sum, free_module
from ordlen.ordinal import parse_ordinal as O


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv, want", [
    (["1 + w"], "w"),
    (["w+1 # w+1"], "2*w+2"),
    (["2 * w"], "2*w"),
    (["2", "*", "w"], "2*w"),
    (["w^2+3"], "w^2+3"),
])
def test_ordinal_command(capsys, argv, want):
    code, out, _ = run(capsys, "ordinal", *argv)
    assert code == 0 and out.strip() == want


def test_ordinal_json(capsys):
    code, out, _ = run(capsys, "ordinal", "--json", "2*w^2+3*w")
    assert code == 0
    assert json.loads(out) == {"result": "2*w^2+3*w", "degree": 2, "order": 1, "valence": 5}


def test_evaluate_left_to_right():
    assert evaluate("1 + w # 1") == O("w+1")
    assert evaluate("w # w * 2") == O("2*w")


def test_bad_expression_exits_2(capsys):
    code, _, err = run(capsys, "ordinal", "w +")
    assert code == 2 and "error" in err


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_len_module(capsys, tmp_path):
    m = direct_sum(free_module(ZZ, 1), cyclic_module(ZZ, 2))
    f = _write(tmp_path, "m.json", m.to_json())
    assert run(capsys, "len", "module", f)[1].strip() == "w+1"
    assert run(capsys, "module", "len", f)[1].strip() == "w+1"
    code, out, _ = run(capsys, "len", "module", f, "--json")
    rep = json.loads(out)
    assert code == 0 and rep["dimension"] == 1 and rep["generic_length"] == 1 and rep["unmixed"] is False


def test_len_poset(capsys, tmp_path):
    f = _write(tmp_path, "p.json", {"n": 4, "le": [[0, 1], [0, 2], [1, 3], [2, 3]]})
    assert run(capsys, "len", "poset", f)[1].strip() == "2"


def test_len_pwoexpr(capsys, tmp_path):
    f = _write(tmp_path, "e.json", {"product": [{"chain": "w+1"}, {"chain": "w+1"}]})
    assert run(capsys, "len", "pwoexpr", f)[1].strip() == "2*w"


def test_len_rejects_bad_schema(capsys, tmp_path):
    f = _write(tmp_path, "e.json", {"chain": "w", "sum": []})
    assert run(capsys, "len", "pwoexpr", f)[0] == 2
    assert run(capsys, "len", "poset", str(tmp_path / "missing.json"))[0] == 2


def test_len_sum_without_max_is_error(capsys, tmp_path):
    f = _write(tmp_path, "e.json", {"sum": [{"chain": "w"}, {"chain": "1"}]})
    assert run(capsys, "len", "pwoexpr", f)[0] == 2


def test_complex_command(capsys, tmp_path):
    Z, Z2 = free_module(ZZ, 1), free_module(ZZ, 2)
    c = ModuleComplex.descending([Z, Z2, Z], [RingMatrix.from_rows(ZZ, [[1], [0]]), RingMatrix.from_rows(ZZ, [[0, 1]])])
    f = _write(tmp_path, "c.json", c.to_json())
    code, out, _ = run(capsys, "complex", f, "--e", "-1", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "acyclic" and rep["lowlen"] == rep["hilen"] == "2*w"


def test_verify_list(capsys):
    code, out, _ = run(capsys, "verify", "--list")
    names = out.split()
    assert code == 0 and "vasconcelos" in names and "period" in names and len(names) >= 24


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "no-such-suite")[0] == 2
    assert run(capsys, "verify")[0] == 2


def test_verify_passes(capsys):
    code, out, err = run(capsys, "verify", "vasconcelos", "--seed", "1", "--trials", "20", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["failures"] == [] and rep["trials"] == 20
    assert "elapsed_ms" not in rep and "elapsed" in err


def test_verify_timing_flag(capsys):
    _, out, _ = run(capsys, "verify", "lowhi", "--trials", "3", "--json", "--timing")
    assert "elapsed_ms" in json.loads(out)


@pytest.mark.parametrize("suite", ["ssum-equivalence", "semi-additivity", "acycunm"])
def test_verify_deterministic(capsys, suite):
    a = run(capsys, "verify", suite, "--seed", "3", "--trials", "15", "--json")[1]
    b = run(capsys, "verify", suite, "--seed", "3", "--trials", "15", "--json")[1]
    assert a == b


def test_failure_replay(capsys, tmp_path):
    # the literal sum formula is off by one on finite instances, so failures exist
    code, out, _ = run(capsys, "verify", "sum-formula", "--seed", "0", "--trials", "10", "--json")
    rep = json.loads(out)
    assert code == 1 and rep["failures"]
    f = _write(tmp_path, "r.json", rep["failures"][0])
    code, out, _ = run(capsys, "verify", "--replay", f, "--json")
    assert code == 1 and len(json.loads(out)["reproduced"]) == 1
    # whole reports replay too
    f = _write(tmp_path, "all.json", rep)
    code, out, _ = run(capsys, "verify", "--replay", f, "--json")
    assert code == 1 and json.loads(out)["replayed"] == len(rep["failures"])


def test_replay_passing_record(capsys, tmp_path):
    rec = {"suite": "lowhi", "seed": 0, "trial": 0}
    f = _write(tmp_path, "r.json", rec)
    assert run(capsys, "verify", "--replay", f)[0] == 0
