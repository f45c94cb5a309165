"""End-to-end CLI behavior: session files, outputs, exit codes."""

import json

import pytest

from lvset import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def session(tmp_path):
    return str(tmp_path / "session.json")


def test_lattice_and_session_round_trip(session, capsys, tmp_path):
    code, out, err = run(capsys, "lattice", "B", "--boolean", "2", "--session", session)
    assert code == 0 and "B" in out
    code, out, err = run(capsys, "lattice", "P", "--projection", "2", "--session", session)
    assert code == 0
    doc = json.loads(open(session).read())
    assert set(doc["lattices"]) == {"B", "P"}
    assert set(doc) == {"lattices", "sets", "observables", "states", "fragments"}


def test_lattice_usage_errors(session, capsys):
    code, out, err = run(capsys, "lattice", "X", "--session", session)
    assert code == 2
    code, out, err = run(capsys, "lattice", "X", "--boolean", "2",
                         "--projection", "2", "--session", session)
    assert code == 2
    code, out, err = run(capsys, "lattice", "X", "--boolean", "99", "--session", session)
    assert code == 4  # data validation: too many atoms


def test_set_literal_and_eval(session, capsys):
    run(capsys, "lattice", "B", "--boolean", "2", "--session", session)
    code, out, err = run(capsys, "set", "e", "--lattice", "B", "--empty",
                         "--session", session)
    assert code == 0
    code, out, err = run(capsys, "set", "u", "--lattice", "B",
                         "--literal", '{e: "a0"}', "--session", session)
    assert code == 0
    code, out, err = run(capsys, "eval", "e in u", "--session", session)
    assert code == 0
    assert out.strip() == "a0"
    code, out, err = run(capsys, "eval", "~(e in u)", "--session", session)
    assert out.strip() == "a1"
    # boolean literal values use display forms: "1" is the top element
    code, out, err = run(capsys, "set", "v", "--lattice", "B",
                         "--literal", '{e: "1", u: "a1"}', "--session", session)
    assert code == 0
    code, out, err = run(capsys, "eval", "e in v", "--session", session)
    assert out.strip() == "1"


def test_eval_trace_and_json(session, capsys):
    run(capsys, "lattice", "B", "--boolean", "2", "--session", session)
    run(capsys, "set", "e", "--lattice", "B", "--empty", "--session", session)
    run(capsys, "set", "u", "--lattice", "B", "--literal", '{e: "a0"}',
        "--session", session)
    code, out, err = run(capsys, "eval", "~(e in u & e = e)", "--trace",
                         "--session", session)
    assert code == 0
    assert "R8" in out and "R9" in out and "R1" in out
    code, out, err = run(capsys, "eval", "e in u", "--json", "--session", session)
    doc = json.loads(out)
    assert doc["repr"] == "a0"
    assert doc["value"] == 1  # raw atom bitmask

    # unbound identifier: usage error
    code, out, err = run(capsys, "eval", "nosuch in u", "--session", session)
    assert code == 2
    # parse error
    code, out, err = run(capsys, "eval", "e in in u", "--session", session)
    assert code == 2


def test_eval_closed_formula_needs_lattice(session, capsys):
    run(capsys, "lattice", "B", "--boolean", "1", "--session", session)
    code, out, err = run(capsys, "eval", "forall t . t = t", "--session", session)
    assert code == 2
    run(capsys, "enumerate", "F", "--lattice", "B", "--max-rank", "2",
        "--session", session)
    code, out, err = run(capsys, "eval", "forall t . t = t", "--fragment", "F",
                         "--session", session)
    assert code == 0
    assert out.splitlines()[0] == "1"
    assert "truncation" in out


def test_check_set_numerals(session, capsys):
    run(capsys, "lattice", "B", "--boolean", "2", "--session", session)
    code, out, err = run(capsys, "set", "two", "--lattice", "B", "--check", "2",
                         "--json", "--session", session)
    assert code == 0
    doc = json.loads(out)
    assert doc["rank"] == 3 and doc["entries"] == 2
    code, out, err = run(capsys, "eval", "two = two", "--session", session)
    assert out.strip() == "1"


def test_enumerate_boolean_counts(session, capsys):
    run(capsys, "lattice", "B", "--boolean", "1", "--session", session)
    code, out, err = run(capsys, "enumerate", "F", "--lattice", "B",
                         "--max-rank", "3", "--json", "--session", session)
    assert code == 0
    doc = json.loads(out)
    assert doc["members"] == 27
    assert doc["by_rank"] == {"1": 1, "2": 2, "3": 24}
    # too large: data validation error with the computed size
    code, out, err = run(capsys, "enumerate", "G", "--lattice", "B",
                         "--max-rank", "5", "--session", session)
    assert code == 4


def test_enumerate_projection_values_from(session, capsys):
    run(capsys, "lattice", "P", "--projection", "2", "--session", session)
    run(capsys, "obs", "A", "--diag", "1,2", "--session", session)
    code, out, err = run(capsys, "enumerate", "F", "--lattice", "P",
                         "--max-rank", "2", "--values-from", "A",
                         "--json", "--session", session)
    assert code == 0
    doc = json.loads(out)
    # values {0, P1, P2, 1}: the two eigenprojections are complements,
    # so the fragment is empty set + 4 singletons
    assert doc["members"] == 5
    # a projection fragment without values is refused
    code, out, err = run(capsys, "enumerate", "G", "--lattice", "P",
                         "--max-rank", "2", "--session", session)
    assert code == 4


def test_obs_and_state_and_prob(session, capsys):
    run(capsys, "lattice", "P", "--projection", "2", "--session", session)
    code, out, err = run(capsys, "obs", "A", "--diag", "1,2", "--session", session)
    assert code == 0
    code, out, err = run(capsys, "obs", "B", "--diag", "1,3", "--session", session)
    assert code == 0
    code, out, err = run(capsys, "state", "psi", "--vector", "1,1",
                         "--session", session)
    assert code == 0

    # the worked example: [[A = B]] projects on e1, Pr = 1/2 exactly
    code, out, err = run(capsys, "prob", "A=B", "--state", "psi",
                         "--session", session)
    assert code == 0
    assert out.strip() == "1/2  (exact)"

    code, out, err = run(capsys, "prob", "A=B", "--state", "psi", "--json",
                         "--session", session)
    doc = json.loads(out)
    assert doc["probability"] == "1/2"
    assert doc["kind"] == "exact"
    assert doc["model_dependent"] is False

    # point spectrum query
    code, out, err = run(capsys, "prob", "A=1", "--state", "psi",
                         "--session", session)
    assert out.strip() == "1/2  (exact)"
    code, out, err = run(capsys, "prob", "A=7", "--state", "psi",
                         "--session", session)
    assert out.strip() == "0  (exact)"

    # show the truth-value projection
    code, out, err = run(capsys, "prob", "A=B", "--state", "psi",
                         "--show-projection", "--session", session)
    assert "projection:" in out

    # unknown observable name
    code, out, err = run(capsys, "prob", "A=C", "--state", "psi",
                         "--session", session)
    assert code == 2
    # malformed spec
    code, out, err = run(capsys, "prob", "A", "--state", "psi",
                         "--session", session)
    assert code == 2


def test_prob_model_dependent_tag(session, capsys, tmp_path):
    run(capsys, "lattice", "P", "--projection", "2", "--session", session)
    run(capsys, "obs", "A", "--diag", "1,2", "--session", session)
    # rotated observable: eigenvectors (1,1) and (1,-1)
    rot = {
        "dim": 2,
        "eigen": [
            {"value": "1", "proj": [["1/2", "1/2"], ["1/2", "1/2"]]},
            {"value": "2", "proj": [["1/2", "-1/2"], ["-1/2", "1/2"]]},
        ],
    }
    obs_file = tmp_path / "rot.json"
    obs_file.write_text(json.dumps(rot))
    code, out, err = run(capsys, "obs", "R", "--file", str(obs_file),
                         "--session", session)
    assert code == 0
    run(capsys, "state", "psi", "--vector", "1,0", "--session", session)
    code, out, err = run(capsys, "prob", "A=R", "--state", "psi",
                         "--session", session)
    assert code == 0
    assert "model-dependent" in out


def test_check_laws_boolean_and_projection(session, capsys):
    run(capsys, "lattice", "B", "--boolean", "3", "--session", session)
    code, out, err = run(capsys, "check", "laws", "--lattice", "B",
                         "--session", session)
    assert code == 0
    assert "distributivity" in out

    run(capsys, "lattice", "P", "--projection", "2", "--session", session)
    code, out, err = run(capsys, "check", "laws", "--lattice", "P",
                         "--session", session)
    assert code == 0  # the violation is expected, so the suite passes
    assert "violation found, as expected" in out

    code, out, err = run(capsys, "check", "laws", "--session", session)
    assert code == 2  # missing --lattice


def test_check_laws_failure_exit_code(session, capsys, monkeypatch):
    # wire a fabricated failing report through to confirm the exit code
    from lvset.lattice import LawReport
    run(capsys, "lattice", "B", "--boolean", "2", "--session", session)

    def broken(lattice, sample=None, max_triples=400):
        return LawReport(kind="boolean", laws={"complement-meet": False},
                         distributive=True, distributivity_witness=None,
                         orthomodular=True, pairs_checked=1, triples_checked=1)

    monkeypatch.setattr(cli, "verify_laws", broken)
    code, out, err = run(capsys, "check", "laws", "--lattice", "B",
                         "--session", session)
    assert code == 3


def test_check_scott_solovay_cli(session, capsys, tmp_path):
    run(capsys, "lattice", "B", "--boolean", "1", "--session", session)
    run(capsys, "enumerate", "F", "--lattice", "B", "--max-rank", "3",
        "--session", session)
    out_file = tmp_path / "report.json"
    code, out, err = run(capsys, "check", "scott-solovay", "--fragment", "F",
                         "--cross-check", "20", "--out", str(out_file),
                         "--session", session)
    assert code == 0
    assert "overall: pass" in out
    doc = json.loads(out_file.read_text())
    assert doc["passed"] is True
    # missing fragment name
    code, out, err = run(capsys, "check", "scott-solovay", "--session", session)
    assert code == 2


def test_check_transfer_cli(session, capsys):
    run(capsys, "lattice", "P", "--projection", "2", "--session", session)
    run(capsys, "obs", "A", "--diag", "1,2", "--session", session)
    run(capsys, "enumerate", "F", "--lattice", "P", "--max-rank", "2",
        "--values-from", "A", "--session", session)
    code, out, err = run(capsys, "check", "transfer", "--fragment", "F",
                         "--sample", "60", "--session", session)
    assert code == 0
    assert "overall: pass" in out


def test_check_equality_axiom_demo_and_boolean(session, capsys):
    code, out, err = run(capsys, "check", "equality-axiom", "--demo",
                         "--session", session)
    assert code == 0
    assert "violation witness" in out

    run(capsys, "lattice", "B", "--boolean", "1", "--session", session)
    run(capsys, "enumerate", "F", "--lattice", "B", "--max-rank", "3",
        "--session", session)
    code, out, err = run(capsys, "check", "equality-axiom", "--fragment", "F",
                         "--session", session)
    assert code == 0
    assert "no equality-axiom violation" in out

    code, out, err = run(capsys, "check", "equality-axiom", "--session", session)
    assert code == 2


def test_json_outputs_are_byte_deterministic(session, capsys):
    run(capsys, "lattice", "B", "--boolean", "1", "--session", session)
    run(capsys, "enumerate", "F", "--lattice", "B", "--max-rank", "3",
        "--session", session)
    first = run(capsys, "check", "scott-solovay", "--fragment", "F", "--json",
                "--seed", "7", "--session", session)
    second = run(capsys, "check", "scott-solovay", "--fragment", "F", "--json",
                 "--seed", "7", "--session", session)
    assert first == second
    a = run(capsys, "eval", "forall t . t = t", "--fragment", "F", "--json",
            "--session", session)
    b = run(capsys, "eval", "forall t . t = t", "--fragment", "F", "--json",
            "--session", session)
    assert a == b


def test_state_decimal_and_validation(session, capsys):
    run(capsys, "lattice", "P", "--projection", "2", "--session", session)
    code, out, err = run(capsys, "state", "d", "--vector",
                         "0.70710678118655,0.70710678118655i", "--decimal",
                         "--session", session)
    assert code == 0
    # unnormalized decimal state: data validation error
    code, out, err = run(capsys, "state", "bad", "--vector", "0.5,0.5",
                         "--decimal", "--session", session)
    assert code == 4
    # unparseable exact entry: usage error
    code, out, err = run(capsys, "state", "bad", "--vector", "1,zebra",
                         "--session", session)
    assert code == 2


def test_missing_session_file_starts_fresh(tmp_path, capsys):
    session = str(tmp_path / "does-not-exist-yet.json")
    code, out, err = run(capsys, "lattice", "B", "--boolean", "1",
                         "--session", session)
    assert code == 0
    # unknown names against a fresh session are usage errors
    code, out, err = run(capsys, "eval", "x = x", "--session", session)
    assert code == 2
    code, out, err = run(capsys, "check", "scott-solovay", "--fragment", "F",
                         "--session", session)
    assert code == 2
