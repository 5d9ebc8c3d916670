import json

import numpy as np
import pytest

from monocount.cli import RunConfig, main
from monocount.cnf import parse_dimacs, read_dimacs
from monocount.inflation import count_a2
from monocount.oracle import brute_force_count


@pytest.fixture
def cnf(tmp_path):
    def write(text, name="f.cnf"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_pruned(capsys, cnf):
    code, out, err = run(capsys, "count", "--mode", "pruned", "--in", cnf("p cnf 2 1\n1 2 0\n"))
    assert code == 0
    assert "modelCount: 3" in out and "exact: true" in out
    assert "wall time" in err


def test_count_json(capsys, cnf):
    code, out, _ = run(capsys, "count", "--mode", "exhaustive", "--format", "json",
                       "--in", cnf("p cnf 2 1\n1 2 0\n"))
    assert code == 0
    assert json.loads(out) == {"modelCount": "3", "mode": "exhaustive", "exact": True,
                               "nodesVisited": 2, "subtreesPruned": 0}


def test_count_a2_banner(capsys, cnf, tmp_path):
    path = str(tmp_path / "g.cnf")
    assert main(["generate", "--n", "8", "--m", "6", "--k", "2", "--seed", "4", "--out", path]) == 0
    code, out, _ = run(capsys, "count", "--mode", "a2", "--in", path, "--sigma", "2", "--seed", "9")
    assert code == 0
    assert "probabilistic" in out and "exact: false" in out
    count = int(out.split("modelCount: ")[1].split()[0])
    assert 0 <= count <= 256
    expected = count_a2(read_dimacs(path), 2, np.random.default_rng(9))
    assert count == expected.model_count


def test_count_a2_requires_seed(capsys, cnf):
    code, _, err = run(capsys, "count", "--mode", "a2", "--in", cnf("p cnf 4 1\n1 0\n"))
    assert code == 1 and "seed" in err
    with pytest.raises(ValueError):
        RunConfig("count", mode="a2")


def test_oracle_ceiling(capsys, cnf):
    code, _, err = run(capsys, "count", "--mode", "oracle", "--in", cnf("p cnf 40 1\n1 2 0\n"))
    assert code == 1 and "n <= 30" in err


def test_parse_error_exit_code(capsys, cnf):
    code, _, err = run(capsys, "count", "--in", cnf("p cnf 3 1\n1 -1 0\n"))
    assert code == 1 and "twice" in err


def test_internal_inconsistency_exit_code(capsys, cnf, monkeypatch):
    from monocount import counter

    def broken(f, threads=1):
        t = counter.ParityTally(f.num_vars)
        for _ in range(5):
            t.add(1, True)
        return counter.CountResult(counter.apply_identity(t, f.num_vars), "pruned")

    monkeypatch.setattr(counter, "signed_count_pruned", broken)
    code, _, err = run(capsys, "count", "--in", cnf("p cnf 2 1\n1 2 0\n"))
    assert code == 2 and "internal inconsistency" in err


def test_generate(capsys):
    code, out, _ = run(capsys, "generate", "--n", "4", "--m", "5", "--k", "2", "--seed", "1")
    assert code == 0
    f = parse_dimacs(out)
    assert f.m == 5 and len(set(f.clauses)) == 5
    code, _, err = run(capsys, "generate", "--n", "2", "--m", "5", "--k", "2", "--seed", "1")
    assert code == 1 and "exceeds" in err


def test_validate_corpus(capsys):
    code, out, _ = run(capsys, "validate", "--n", "10", "--m", "16", "--k", "3", "--seeds", "20")
    assert code == 0
    assert "agreement: 20/20" in out


def test_validate_json(capsys):
    code, out, _ = run(capsys, "validate", "--n", "6", "--m", "8", "--k", "2", "--seeds", "3",
                       "--format", "json")
    payload = json.loads(out)
    assert code == 0 and payload["agreeing"] == payload["total"] == 3


def test_validate_disagreement_exit_code(capsys, cnf, monkeypatch):
    from monocount import oracle
    monkeypatch.setattr(oracle, "brute_force_count", lambda f: -1)
    code, out, _ = run(capsys, "validate", "--in", cnf("p cnf 2 1\n1 2 0\n"))
    assert code == 3 and "NO" in out


def test_inflate_then_validate(capsys, cnf, tmp_path):
    src = str(tmp_path / "f.cnf")
    main(["generate", "--n", "8", "--m", "10", "--k", "3", "--seed", "5", "--out", src])
    out_cnf = str(tmp_path / "fp.cnf")
    rec = str(tmp_path / "rec.json")
    code, _, _ = run(capsys, "inflate", "--in", src, "--sigma", "1", "--seed", "2",
                     "--out", out_cnf, "--record", rec)
    assert code == 0
    record = json.loads(open(rec).read())
    assert record["z"] == 2 and record["entries"]
    code, out, _ = run(capsys, "validate", "--in", src, "--in", out_cnf)
    assert code == 0 and "files agree: yes" in out


def test_validate_files_with_different_counts(capsys, cnf):
    a = cnf("p cnf 2 1\n1 2 0\n", "a.cnf")
    b = cnf("p cnf 2 1\n1 0\n", "b.cnf")
    code, out, _ = run(capsys, "validate", "--in", a, "--in", b)
    assert code == 3 and "files agree: NO" in out


def test_bench(capsys, tmp_path):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({"n": [8], "k": [2], "delta": [2], "sigma": [1], "seeds": [0, 1],
                                  "trials": 1000}))
    code, out, _ = run(capsys, "bench", "--config", str(config), "--out", "-")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3 and lines[0].startswith("n,m,k,delta,sigma,seed")
    code, out, _ = run(capsys, "bench", "--config", str(config), "--format", "json")
    assert code == 0 and len(json.loads(out)) == 2
