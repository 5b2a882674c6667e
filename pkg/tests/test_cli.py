import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from tprob.cli import EXIT_OK, EXIT_RESIDUAL, EXIT_USER, main

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_eval_branch(capsys):
    code, doc = run_json(capsys, "eval", CORPUS / "branch.pt", "--mode", "lockstep", "--eps", "0")
    assert code == EXIT_OK
    assert {e["nat"]: e["prob"] for e in doc["support"]} == {2: "1/2", 3: "1/4", 4: "1/4"}
    assert doc["residual"] == "0/1" and doc["success_bounds"] == ["1/1", "1/1"]
    assert doc["avlength_lower"] == "3/2"


def test_eval_exact_tree(capsys):
    code, doc = run_json(capsys, "eval", CORPUS / "doubleflip.pt", "--mode", "exact-tree")
    assert code == EXIT_OK
    assert {e["nat"]: e["prob"] for e in doc["support"]} == {0: "1/4", 1: "1/2", 2: "1/4"}


def test_check(capsys):
    assert run_json(capsys, "check", CORPUS / "fixgeo.pt") == (EXIT_OK, {"type": "Nat"})
    assert run_json(capsys, "check", CORPUS / "expo.pt")[1] == {"type": "Nat -> Nat"}


def test_compare_geometric_encodings(capsys):
    code, doc = run_json(capsys, "compare", CORPUS / "geo.pt", CORPUS / "geo_fix.pt",
                         "--eps", "2^-16")
    assert code == EXIT_OK
    assert F(doc["tv_lower"]) == 0 and F(doc["tv_upper"]) <= F(1, 2**15)


def test_sample_is_reproducible(capsys):
    argv = ("sample", CORPUS / "branch.pt", "--seed", "7", "--trials", "2000")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == EXIT_OK
    doc = json.loads(first[1])
    assert doc["seed"] == 7 and doc["trials"] == 2000
    probs = {e["nat"]: F(e["prob"]) for e in doc["dist"]["support"]}
    assert abs(probs[2] - F(1, 2)) < F(1, 20)


def test_eval_is_reproducible(capsys):
    argv = ("eval", CORPUS / "geo.pt", "--eps", "2^-12")
    assert run(capsys, *argv) == run(capsys, *argv)


def test_arguments_and_nf(capsys):
    code, doc = run_json(capsys, "nf", CORPUS / "expo.pt", "--arg", "3")
    assert code == EXIT_OK and doc["normal_form"] == "16"
    code, doc = run_json(capsys, "eval", CORPUS / "expo.pt", "--arg", "2", "--eps", "0")
    assert [e["nat"] for e in doc["support"]] == [8]


def test_avlength(capsys):
    code, doc = run_json(capsys, "avlength", CORPUS / "doubleflip.pt", "--eps", "0")
    assert code == EXIT_OK and doc["avlength_lower"] == "9/1"


def test_exit_codes(capsys):
    code, _, err = run(capsys, "check", CORPUS / "ill_typed.pt")
    assert code == EXIT_USER and "type" in err
    assert run(capsys, "eval", CORPUS / "missing.pt")[0] == EXIT_USER
    assert run(capsys, "eval", CORPUS / "geo.pt", "--eps", "2")[0] == EXIT_USER
    assert run(capsys, "eval", CORPUS / "geo.pt", "--max-steps", "0")[0] == EXIT_USER
    code, _, _ = run(capsys, "eval", CORPUS / "geo_fix.pt", "--max-steps", "3", "--eps", "2^-20")
    assert code == EXIT_RESIDUAL
    code, _, err = run(capsys, "transform", CORPUS / "geo.pt", "--pass", "lift-plus")
    assert code == EXIT_USER and err


def test_transform_writes_surface_syntax(capsys, tmp_path):
    out = tmp_path / "enc.pt"
    code, doc = run_json(capsys, "transform", CORPUS / "branch.pt", "--pass", "oplus-to-rand",
                         "--out", out)
    assert code == EXIT_OK and doc["type"] == "Nat"
    assert run_json(capsys, "check", out)[1] == {"type": "Nat"}


ENCODING_PASSES = [("branch.pt", "oplus-to-rand"), ("branch.pt", "oplus-to-fixran"),
                   ("doubleflip.pt", "oplus-to-rand"), ("doubleflip.pt", "oplus-to-fixran"),
                   ("geo.pt", "rand-to-fixran"), ("geo_fix.pt", "fixran-to-rand"),
                   ("evens_fix.pt", "fixran-to-rand"), ("evens_rand.pt", "rand-to-fixran")]


@pytest.mark.parametrize("name,pass_", ENCODING_PASSES)
def test_transform_then_eval_commutes(capsys, tmp_path, name, pass_):
    out = tmp_path / "out.pt"
    assert run(capsys, "transform", CORPUS / name, "--pass", pass_, "--out", out)[0] == EXIT_OK
    code, doc = run_json(capsys, "compare", CORPUS / name, out, "--eps", "2^-16")
    assert code == EXIT_OK
    assert F(doc["tv_upper"]) <= sum(F(r) for r in doc["residuals"])


def test_transform_approximant_then_eval(capsys, tmp_path):
    out = tmp_path / "approx.pt"
    run(capsys, "transform", CORPUS / "geo.pt", "--pass", "approximant", "--out", out)
    code, doc = run_json(capsys, "eval", out, "--arg", "4", "--eps", "2^-40", "--rand-width", "1")
    probs = {e["nat"]: F(e["prob"]) for e in doc["support"]}
    assert code == EXIT_OK and doc["residual"] == "0/1"
    # underestimates every positive outcome and moves the lost mass to 0
    assert probs[0] >= F(1, 2) and all(probs[k] <= F(1, 2 ** (k + 1)) for k in probs if k)
    assert sum(abs(probs.get(k, 0) - F(1, 2 ** (k + 1))) for k in range(1, 40)) / 2 <= F(1, 4)


@pytest.mark.parametrize("name,pass_", [("doubleflip_fn.pt", "finite-rep"),
                                        ("majority.pt", "derand-mc"),
                                        ("doubleflip_fn.pt", "lift-plus")])
def test_pure_passes_typecheck(capsys, tmp_path, name, pass_):
    out = tmp_path / "out.pt"
    code, doc = run_json(capsys, "transform", CORPUS / name, "--pass", pass_, "--out", out)
    assert code == EXIT_OK
    assert run_json(capsys, "check", out)[1]["type"] == doc["type"]
