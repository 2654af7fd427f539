import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from extdiv.cli import EXIT_INPUT, resolve_n_max, run
from extdiv.division import DivisionProblem, Representation, verify_representation
from extdiv.exterior import multiindices
from extdiv.problems import (
    ProblemError,
    parse_division,
    parse_ext,
    parse_log_residue,
    parse_residue,
    problem_hash,
)
from extdiv.residua import ResidueRepresentation, verify_residue_representation

from cli_corpus import CORPUS, GOLDEN, corpus, invoke


def write(tmp_path: Path, data, name="p.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return path


def load(verb, name):
    return json.loads((CORPUS / verb / name).read_text())


# -- parsing ------------------------------------------------------------------------


def test_parse_valid_divide_file():
    prob = parse_division(load("divide", "e1_e2_e123.json"))
    assert isinstance(prob, DivisionProblem)
    assert (prob.m, prob.k, prob.p, prob.r) == (3, 2, 3, 2)


def test_parse_rejects_unsorted_index():
    data = load("divide", "e1_e2_e123.json")
    data["eta"]["terms"][0]["index"] = [2, 1, 3]
    with pytest.raises(ProblemError, match="index not strictly increasing") as info:
        parse_division(data)
    assert info.value.field == "eta.terms[0].index"


def test_parse_rejects_improper_ideal():
    data = load("residue", "sphere.json")
    data["fs"] = ["1"]
    with pytest.raises(ProblemError, match="ideal is not proper"):
        parse_residue(data)


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda d: d.pop("ring"), "ring"),
        (lambda d: d.update(m="three"), "m"),
        (lambda d: d.update(r=5), "r"),
        (lambda d: d["omegas"][0]["terms"][0].update(coeff="x +"), "omegas[0].terms[0].coeff"),
        (lambda d: d["omegas"][0].update(degree=2), "omegas[0].terms[0].index"),
        (lambda d: d["eta"].update(degree=4), "eta.degree"),
        (lambda d: d["ring"].update(variables="xyz"), "ring.variables"),
    ],
)
def test_parse_errors_name_the_field(mutate, field):
    data = load("divide", "e1_e2_e123.json")
    mutate(data)
    with pytest.raises(ProblemError) as info:
        parse_division(data)
    assert info.value.field == field


def test_problem_hash_ignores_key_order_and_whitespace():
    assert problem_hash({"a": 1, "b": [1, 2]}) == problem_hash(json.loads('{ "b": [1,2], "a": 1 }'))


# -- running ------------------------------------------------------------------------


def test_divide_solves_basis_case():
    code, out = invoke("divide", CORPUS / "divide" / "e1_e2_e123.json")
    result = json.loads(out)
    assert code == 0 and result["status"] == "solved"
    assert result["representation"]["gammas"]["1,2"]["terms"] == [{"coeff": "1", "index": [3]}]


def test_divide_power_returns_first_power():
    code, out = invoke("divide-power", CORPUS / "divide-power" / "x_e1_e12.json")
    result = json.loads(out)
    assert code == 0 and result["representation"]["n"] == 1


def test_check_b_reports_witness():
    code, out = invoke("check-b", CORPUS / "check-b" / "z_e12_fails.json")
    result = json.loads(out)
    assert code == 2
    assert result["witnesses"] == [{"index": [1], "product": {"degree": 3, "terms": [{"coeff": "z^2", "index": [1, 2, 3]}]}}]


def test_exit_codes_for_inconclusive_and_degenerate():
    assert invoke("divide-power", CORPUS / "divide-power" / "y_on_x_inconclusive.json")[0] == 3
    assert invoke("divide-power", CORPUS / "divide-power" / "zero_omega.json")[0] == 4
    assert invoke("koszul", CORPUS / "koszul" / "unit.json")[0] == 4


def test_input_errors_exit_64(tmp_path):
    err = io.StringIO()
    assert run(["divide", str(tmp_path / "missing.json")], stdout=io.StringIO(), stderr=err) == EXIT_INPUT
    assert "input" in err.getvalue()
    bad = write(tmp_path, "{not json")
    assert run(["divide", str(bad)], stdout=io.StringIO(), stderr=io.StringIO()) == EXIT_INPUT
    assert run(["nonsense", str(bad)], stdout=io.StringIO(), stderr=io.StringIO()) == EXIT_INPUT
    data = load("divide-power", "x_e1_e12.json")
    data.pop("a")
    err = io.StringIO()
    assert run(["divide-power", str(write(tmp_path, data))], stdout=io.StringIO(), stderr=err) == EXIT_INPUT
    assert "a:" in err.getvalue()


def test_prop1_rejects_non_regular_fs(tmp_path):
    data = load("prop1-check", "z_xyz.json")
    data["fs"] = ["x", "x*y"]
    err = io.StringIO()
    assert run(["prop1-check", str(write(tmp_path, data))], stdout=io.StringIO(), stderr=err) == EXIT_INPUT
    assert "fs:" in err.getvalue()


def test_a_flag_overrides_file(tmp_path):
    data = load("divide-power", "x_e1_e12.json")
    data["a"] = "y"
    data["n_max"] = 2
    path = write(tmp_path, data)
    assert invoke("divide-power", path)[0] == 3
    code, out = invoke("divide-power", path, "--a", "x")
    assert code == 0 and json.loads(out)["representation"]["a"] == "x"


def test_n_max_precedence(monkeypatch):
    monkeypatch.delenv("EXTDIV_NMAX", raising=False)
    assert resolve_n_max(None, {}) == 16
    monkeypatch.setenv("EXTDIV_NMAX", "5")
    assert resolve_n_max(None, {}) == 5
    assert resolve_n_max(None, {"n_max": 3}) == 3
    assert resolve_n_max(2, {"n_max": 3}) == 2
    monkeypatch.setenv("EXTDIV_NMAX", "lots")
    with pytest.raises(ProblemError):
        resolve_n_max(None, {})


def test_env_n_max_reaches_the_solver(tmp_path, monkeypatch):
    data = load("divide-power", "y_on_x_inconclusive.json")
    data.pop("n_max")
    path = write(tmp_path, data)
    monkeypatch.setenv("EXTDIV_NMAX", "1")
    out = io.StringIO()
    run(["divide-power", str(path)], stdout=out, stderr=io.StringIO())
    assert json.loads(out.getvalue())["n_max"] == 1


def test_cross_check_flags():
    code, out = invoke("depth", CORPUS / "depth" / "xy_xz.json", "--cross-check")
    result = json.loads(out)
    assert code == 0 and result["agree"] and result["koszul_depth"] == 1
    code, out = invoke("koszul", CORPUS / "koszul" / "xyz.json", "--cross-check")
    assert code == 0 and json.loads(out)["codim_depth"] == 3


def test_order_flag_changes_nothing_observable_for_monomial_input():
    a = json.loads(invoke("depth", CORPUS / "depth" / "xy_xz.json")[1])
    b = json.loads(invoke("depth", CORPUS / "depth" / "xy_xz.json", "--order", "lex")[1])
    assert a == b


def test_text_report_renders_identity():
    code, out = invoke("divide", CORPUS / "divide" / "e1_e2_e123.json", "--format", "text")
    assert "identity: η = ω_{1,2} ∧ ((1)*e3)" in out
    code, out = invoke("log-residue", CORPUS / "log-residue" / "xy_dxdy.json", "--format", "text")
    assert "η/(xy) = dx/x ∧ dy/y" in out


# -- invariants ---------------------------------------------------------------------


@pytest.mark.parametrize("verb, path", corpus(), ids=lambda v: v if isinstance(v, str) else v.name)
def test_solved_results_reverify_after_reparse(verb, path):
    data = json.loads(path.read_text())
    code, out = invoke(verb, path)
    result = json.loads(out)
    if result.get("status") != "solved" or verb not in ("divide", "divide-power", "residue", "log-residue"):
        return
    rep_json = result["representation"]
    if verb == "log-residue":
        prob = parse_log_residue(data).residue_problem()
    elif verb == "residue":
        prob = parse_residue(data)
    else:
        prob = parse_division(data)
    base = prob.base if verb in ("residue", "log-residue") else prob
    ring, m = base.ring, base.m
    gammas = {
        tuple(int(j) for j in key.split(",")): parse_ext(g, ring, m, key)
        for key, g in rep_json["gammas"].items()
    }
    assert set(gammas) <= set(multiindices(base.r, base.k))
    a = ring.parse(rep_json["a"])
    if verb in ("residue", "log-residue"):
        xis = [parse_ext(x, ring, m, "xi") for x in rep_json["xis"]]
        assert verify_residue_representation(prob, ResidueRepresentation(gammas, xis, a, rep_json["n"]))
    else:
        assert verify_representation(prob, Representation(gammas, a, rep_json["n"]))


def test_golden_corpus_is_complete():
    codes = json.loads((GOLDEN / "exit_codes.json").read_text())
    assert set(codes) == {f"{v}/{p.name}" for v, p in corpus()}
    assert len(codes) >= 9
    assert {v for v, _ in corpus()} == {
        "check-b", "divide", "divide-power", "depth", "koszul", "regseq", "residue", "log-residue", "prop1-check"
    }


def test_console_entry_point_runs_as_module():
    proc = subprocess.run(
        [sys.executable, "-m", "extdiv.cli", "regseq", str(CORPUS / "regseq" / "xy_xz.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["regular"] is False
