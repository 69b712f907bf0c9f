import json
import os

import pytest

from indcontrol import cli
from indcontrol.controllability import Report
from indcontrol.errors import ValidationError
from indcontrol.systems import EXAMPLES

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
PROBLEMS = os.path.join(ROOT, "problems")
FIXTURES = os.path.join(ROOT, "tests", "fixtures")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def problem(name):
    return os.path.join(PROBLEMS, f"{name}.json")


def fixture(name):
    return os.path.join(FIXTURES, name)


def test_shipped_problems_match_examples():
    for name, build in EXAMPLES.items():
        with open(problem(name), encoding="utf-8") as f:
            assert f.read() == cli.dumps(cli.problem_to_json(build().problem, seed=0))


def test_problem_roundtrip_is_exact():
    p = EXAMPLES["odd_na"]().problem
    data = json.loads(cli.dumps(cli.problem_to_json(p)))
    q = cli.problem_from_json(data)
    assert (q.drift_k == p.drift_k).all()
    assert all((a[1] == b[1]).all() for a, b in zip(p.couplings, q.couplings))


def test_closure_command(capsys):
    code, out, _ = run(capsys, "closure", problem("two_qubit_case1"), "--format", "machine")
    rep = json.loads(out)
    assert code == 0
    assert rep["algebra_dim"] == 15 and rep["completely_controllable"] is True
    assert rep["command"] == "closure" and rep["exit_code"] == 0


def test_disintegrate_command(capsys):
    code, out, _ = run(capsys, "disintegrate", problem("two_qubit_case1"), "--format", "machine")
    rep = json.loads(out)
    assert code == 0
    assert rep["s"] == rep["d_s"] == 3
    assert rep["block_sum"] == rep["algebra_dim"]
    assert rep["case_label"] == "FullLocal"


def test_analyze_case1(capsys):
    code, out, _ = run(capsys, "analyze", problem("two_qubit_case1"), "--rho-a", "mixed", "--format", "machine")
    rep = json.loads(out)
    assert code == 0
    assert rep["completely_controllable"] and rep["indirect_criterion_holds"]
    assert rep["counterexample"] is None
    assert rep["tol"] == 1e-9
    assert len(rep["input_sha256"]) == 64


def test_analyze_intermediate(capsys):
    code, out, _ = run(capsys, "analyze", problem("intermediate"), "--format", "machine")
    rep = json.loads(out)
    assert code == 0
    assert rep["counterexample"]["criterion"] is False
    assert rep["indirect_criterion_holds"] is False
    assert len(rep["counterexample"]["state"]) == 2


@pytest.mark.parametrize("seed", ["1", "2", "3"])
def test_seed_agreement_through_cli(capsys, seed):
    _, out, _ = run(capsys, "analyze", problem("two_qubit_case1"), "--seed", seed, "--format", "machine")
    assert json.loads(out)["generic_verdicts"] == [True, True, True]


def test_text_format(capsys):
    code, out, _ = run(capsys, "analyze", problem("intermediate"))
    assert code == 0
    assert "case_label: Intermediate" in out
    assert "counterexample: criterion=false" in out


def test_output_file_matches_stdout(capsys, tmp_path):
    target = tmp_path / "r.json"
    _, out, _ = run(capsys, "analyze", problem("odd_na"), "--format", "machine", "-o", str(target))
    assert target.read_text(encoding="utf-8") == out


def test_flags_override_file(capsys):
    _, out, _ = run(capsys, "closure", problem("two_qubit_case1"), "--tol", "1e-8", "--format", "machine")
    assert json.loads(out)["tol"] == 1e-8


def test_rho_a_file(capsys):
    code, out, _ = run(
        capsys, "analyze", problem("two_qubit_case1"), "--rho-a", fixture("rho_a_pure.json"), "--format", "machine"
    )
    rep = json.loads(out)
    assert code == 0 and rep["mode"] == "exploratory"
    assert set(rep["rho_a"]) == {"sha256"}


def test_partial_control_is_criterion_only(capsys):
    code, out, _ = run(capsys, "analyze", fixture("partial_control.json"), "--format", "machine")
    rep = json.loads(out)
    assert code == 0 and rep["mode"] == "criterion-only"
    code, _, err = run(capsys, "disintegrate", fixture("partial_control.json"))
    assert code == 2 and "su(n_A)" in err


@pytest.mark.parametrize(
    "name,needle",
    [
        ("bad_complex_entry.json", "K[0][1]"),
        ("string_complex_entry.json", "K[1][0][0]"),
        ("unknown_field.json", "comment"),
        ("missing_schema_version.json", "schema_version"),
        ("wrong_schema_version.json", "schema_version"),
        ("not_skew_hermitian.json", "couplings[0].S"),
        ("ragged_matrix.json", "couplings[0].sigma"),
        ("control_only.json", "couplings"),
        ("syntax_error.json", "syntax_error.json:"),
        ("nan_entry.json", "NaN"),
    ],
)
def test_malformed_inputs_exit_2(capsys, name, needle):
    for cmd in ("closure", "analyze", "disintegrate"):
        code, out, err = run(capsys, cmd, fixture(name))
        assert code == 2
        assert out == ""
        assert needle in err


def test_syntax_error_has_line_and_column(capsys):
    _, _, err = run(capsys, "closure", fixture("syntax_error.json"))
    loc = err.split("syntax_error.json:")[1].split(":")
    assert loc[0].isdigit() and loc[1].isdigit()


def test_missing_file(capsys):
    code, _, err = run(capsys, "closure", fixture("does_not_exist.json"))
    assert code == 2 and "cannot read" in err


def test_bad_flags(capsys):
    assert run(capsys, "closure", problem("intermediate"), "--tol", "-1")[0] == 2
    assert run(capsys, "closure", problem("intermediate"), "--max-dim", "0")[0] == 2
    assert run(capsys, "analyze", problem("intermediate"), "--seed", "-3")[0] == 2


def test_cap_exit_3(capsys):
    code, out, err = run(capsys, "closure", problem("two_qubit_case1"), "--max-dim", "5")
    assert code == 3 and out == "" and "max_dim=5" in err


def test_bad_rho_a(capsys):
    code, _, err = run(capsys, "analyze", problem("intermediate"), "--rho-a", fixture("rho_a_not_psd.json"))
    assert code == 2 and "positive" in err
    code, _, err = run(capsys, "analyze", problem("odd_na"), "--rho-a", fixture("rho_a_pure.json"))
    assert code == 2 and "n_a = 3" in err


def test_inconsistency_exit_4(capsys, monkeypatch):
    # the real pipeline is consistent on every shipped input, so feed the
    # reporting layer a report that records a mismatch
    real = cli.analyze

    def broken(*a, **kw):
        r = real(*a, **kw)
        r.inconsistencies.append("injected mismatch")
        return r

    monkeypatch.setattr(cli, "analyze", broken)
    code, out, err = run(capsys, "analyze", problem("two_qubit_case1"), "--format", "machine")
    assert code == 4
    assert json.loads(out)["inconsistencies"] == ["injected mismatch"]
    assert "contradict" in err
    assert isinstance(real(EXAMPLES["intermediate"]().problem), Report)


def test_parse_json_locators():
    with pytest.raises(ValidationError, match=r"src:1:2"):
        cli.parse_json("{,}", cli.PROBLEM_SCHEMA, "src")
    with pytest.raises(ValidationError, match="non-finite"):
        cli.parse_json('{"a": Infinity}', cli.PROBLEM_SCHEMA, "src")
    with pytest.raises(ValidationError, match="non-finite"):
        cli.parse_json('{"a": 1e999}', cli.PROBLEM_SCHEMA, "src")
