"""Test cases for the command-line front end"""

import json

import pytest

from app.cli import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_VERIFICATION_FAILED, main
from app.config import get_settings


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Logs into a temp dir, settings rebuilt per test"""
    monkeypatch.setenv("LOG_DIR", str(tmp_path))
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_decompose_csv(capsys):
    code, out = run(capsys, "decompose", "u", "b")
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "ub, e"
    assert lines[1].startswith("dim_q(u)*dim_q(b) = ")
    assert lines[-1] == "# precision_bits=128"


def test_decompose_json(capsys):
    code, out = run(capsys, "decompose", "ub", "ub", "--format", "json", "--precision", "96")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["summands"] == ["ubub", "ub", "e"]
    assert payload["dim_product"] == payload["dim_sum"]
    assert payload["precision_bits"] == 96


def test_malformed_word_is_config_error(capsys):
    code, out = run(capsys, "decompose", "uxb", "u")
    assert code == EXIT_CONFIG_ERROR
    assert out == ""


def test_usage_errors(capsys):
    assert main([]) == EXIT_CONFIG_ERROR
    assert main(["frobnicate"]) == EXIT_CONFIG_ERROR
    assert main(["gap", "--precision", "32"]) == EXIT_CONFIG_ERROR
    assert main(["gap", "--q", "1.5"]) == EXIT_CONFIG_ERROR


def test_q_and_F_are_exclusive(tmp_path, capsys):
    source = tmp_path / "ctx.json"
    source.write_text(json.dumps({"q": 0.5}))
    assert main(["gap", "--q", "0.5", "--F", str(source)]) == EXIT_CONFIG_ERROR


def test_context_file(tmp_path, capsys):
    source = tmp_path / "ctx.json"
    source.write_text(json.dumps({"F": [[[2, 0], [0, 0]], [[0, 0], [1, 0]]]}))
    code, out = run(capsys, "gap", "--F", str(source), "--n-max", "4")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "n,p,k,gap,bound,pass"


def test_unreadable_context_file(tmp_path, capsys):
    assert main(["gap", "--F", str(tmp_path / "missing.json")]) == EXIT_CONFIG_ERROR


def test_gap_output_file_is_reproducible(tmp_path, capsys):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["gap", "--q", "0.5", "--n-max", "5", "--out", str(first)]) == EXIT_OK
    assert main(["gap", "--q", "0.5", "--n-max", "5", "--out", str(second)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text().endswith("# precision_bits=128\n")


def test_boundary_json(capsys):
    code, out = run(capsys, "boundary", "--q", "0.5", "--depth", "2", "--format", "json")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert len(payload["rows"]) == 7
    assert payload["rows"][0]["word"] == "e"


def test_walk(capsys):
    code, out = run(capsys, "walk", "--paths", "2000", "--escape", "10", "--depth", "1", "--seed", "3")
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "word,estimate,stderr,closed_form,z_score"
    assert [line.split(",")[0] for line in lines[1:3]] == ["u", "b"]


def test_verify_single_suite(capsys):
    code, out = run(capsys, "verify", "--suite", "convolution")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["suites"] == ["convolution"]


def test_faithfulness_certificate(capsys):
    code, out = run(capsys, "faithfulness", "--F-words", "u", "--L", "6")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["certificate"]["N"] == 1
    assert payload["support"]["disjoint"]
    assert payload["witness_norm"] == 0


def test_faithfulness_failure_exit_code(capsys):
    code, out = run(capsys, "faithfulness", "--F-words", "ubb", "--N-max", "1")
    assert code == EXIT_VERIFICATION_FAILED
    assert "witnesses" in json.loads(out)["certificate"]


def test_faithfulness_table(capsys):
    code, out = run(capsys, "faithfulness", "--table", "2", "--N-max", "3")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "word,length,N"


def test_theta_rotation(capsys):
    code, out = run(capsys, "lemmas", "--which", "theta", "--theta", "pi/6", "--samples", "4", "--k", "1")
    results = json.loads(out)["results"]
    assert code == EXIT_OK
    assert len(results) == 1
    assert results[0]["passed"]


@pytest.mark.parametrize("which, count", [("l49", 1), ("asymptotic", 1), ("l410", 1), ("easy", 1)])
def test_lemma_selector_spellings(capsys, which, count):
    code, out = run(capsys, "lemmas", "--which", which, "--samples", "4", "--dim-max", "2", "--eps", "0.25")
    assert code == EXIT_OK
    assert len(json.loads(out)["results"]) == count


def test_lemma_aliases_agree(capsys):
    _, first = run(capsys, "lemmas", "--which", "l410", "--samples", "4", "--dim-max", "2")
    _, second = run(capsys, "lemmas", "--which", "easy", "--samples", "4", "--dim-max", "2")
    assert first == second


def test_unknown_lemma_selector(capsys):
    assert main(["lemmas", "--which", "l411"]) == EXIT_CONFIG_ERROR


def test_gap_prints_full_precision(capsys):
    code, out = run(capsys, "gap", "--q", "1", "--n-max", "3")
    rows = {tuple(line.split(",")[:3]): line.split(",")[3] for line in out.splitlines()[1:-1]}
    assert code == EXIT_OK
    assert rows[("3", "1", "2")] == "0.16666666666666666667"
