import contextlib
import io
import json

from fencemonoid import cli

ALPHA = "n=6:[1>3 2>2 4>6 5>5 6>4]"


def run(*argv):
    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_enumerate_counts():
    code, out, _ = run("enumerate", "--n", "2", "--which", "IF", "--no-cache")
    assert code == 0 and out == "count 6\n"
    code, out, _ = run("enumerate", "--n", "1", "--which", "IF", "--no-cache")
    assert code == 0 and out == "count 2\n"


def test_enumerate_contains_counterexample():
    code, out, _ = run(
        "enumerate", "--n", "6", "--which", "PFI", "--contains", ALPHA, "--no-cache"
    )
    assert code == 0 and "contains true" in out
    code, out, _ = run(
        "enumerate", "--n", "6", "--which", "IF", "--contains", ALPHA, "--no-cache"
    )
    assert code == 0 and "contains false" in out


def test_enumerate_deterministic_across_threads():
    args = ["enumerate", "--n", "6", "--which", "IF", "--elements", "--no-cache"]
    _, out1, _ = run(*args, "--threads", "1")
    _, out2, _ = run(*args, "--threads", "3")
    assert out1 == out2


def test_enumerate_cache(tmp_path):
    args = ["enumerate", "--n", "4", "--cache-dir", str(tmp_path)]
    code, out1, _ = run(*args)
    assert code == 0
    assert (tmp_path / "IF_n4.txt").exists()
    code, out2, _ = run(*args)  # second run is served from the cache
    assert code == 0 and out2 == out1


def test_enumerate_guard_exit_code():
    code, _, err = run("enumerate", "--n", "9", "--no-cache")
    assert code == 1 and "huge" in err


def test_greens_pair_output():
    a = "n=6:[1>2 4>6 5>5 6>4]"
    b = "n=6:[1>5 2>6 5>1 6>2]"
    code, out, _ = run("greens", "--n", "6", a, b)
    assert code == 0
    assert "J false" in out
    assert "invariant first 1:1;3:1:0" in out
    assert "invariant second 2:2" in out


def test_greens_witness():
    a = "n=6:[1>1 2>2]"
    b = "n=6:[5>5 6>6]"
    code, out, _ = run("greens", "--n", "6", a, b, "--witness")
    assert code == 0
    assert "witness gamma n=6:[5>1 6>2]" in out
    assert "witness verified true" in out


def test_greens_reflexive_single_element():
    code, out, _ = run("greens", "--n", "6", "n=6:[1>1 2>2]", "--relation", "J")
    assert code == 0 and "J true" in out


def test_greens_classes_csv():
    code, out, _ = run("greens", "--n", "4", "--classes", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "class,invariant,size,representative"
    assert len(lines) == 9  # 8 classes + header


def test_greens_rejects_non_if():
    code, _, err = run("greens", "--n", "6", ALPHA, ALPHA)
    assert code == 1 and "fence-preserving" in err


def test_factorize_table_word():
    code, out, _ = run(
        "factorize", "--n", "6",
        "--element", "n=6:[1>1 2>2 3>3 5>5 6>6]",
        "--target", "G", "--verify",
    )
    assert code == 0
    assert "word w6: gam:4 gam:4" in out
    assert "verified true" in out
    assert "fallback false" in out


def test_factorize_single_letter():
    code, out, _ = run(
        "factorize", "--n", "4", "--element", "n=4:[1>1 2>2 3>3]", "--verify"
    )
    assert code == 0 and "length 1" in out


def test_factorize_g_needs_even_n():
    code, _, err = run(
        "factorize", "--n", "5", "--element", "n=5:[1>1]", "--target", "G"
    )
    assert code == 1 and "even" in err


def test_verify_ok_claims():
    assert run("verify", "--n", "4", "--claim", "rank")[0] == 0
    assert run("verify", "--n", "3", "--claim", "odd-neg")[0] == 0
    assert run("verify", "--n", "3", "--claim", "jcrit")[0] == 0
    assert run("verify", "--n", "3", "--claim", "regular")[0] == 0
    code, out, _ = run("verify", "--n", "4", "--claim", "rank")
    assert "claim rank: ok" in out


def test_verify_parity_guards():
    assert run("verify", "--n", "3", "--claim", "rank")[0] == 1
    code, _, err = run("verify", "--n", "3", "--claim", "thm2")
    assert code == 1 and "even" in err
    code, _, err = run("verify", "--n", "4", "--claim", "odd-neg")
    assert code == 1 and "odd" in err


def test_verify_violation_exit_code(monkeypatch):
    monkeypatch.setitem(
        cli._CLAIMS, "rank", (lambda n, huge: (False, {"forced": True}), "even")
    )
    code, out, _ = run("verify", "--n", "4", "--claim", "rank")
    assert code == 2 and "violation" in out


def test_json_schema():
    code, out, _ = run(
        "enumerate", "--n", "3", "--no-cache", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {
        "command", "n", "params", "status", "result", "timing_ms", "version",
    }
    assert doc["version"] == "v1"
    assert doc["status"] == "ok"
    assert doc["result"]["count"] == 18
    assert json.loads(json.dumps(doc)) == doc


def test_csv_rejected_for_non_tabular():
    code, _, err = run("enumerate", "--n", "3", "--no-cache", "--format", "csv")
    assert code == 1 and "tabular" in err


def test_bad_element_literal():
    code, _, err = run("factorize", "--n", "6", "--element", "nonsense")
    assert code == 1


def test_element_size_mismatch():
    code, _, err = run("factorize", "--n", "4", "--element", "n=6:[1>1]")
    assert code == 1 and "n=6" in err


def test_usage_error_exit_code():
    code, _, _ = run("enumerate")  # missing --n
    assert code == 1
    code, _, _ = run("nonsense")
    assert code == 1
