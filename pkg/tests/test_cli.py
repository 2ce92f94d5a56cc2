import json

import numpy as np
import pytest

from cgroups import cli
from cgroups.group import from_table, load
from cgroups.search import ORDER64_PRESENTATION, p5_presentation

from conftest import naive_closure


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}

    def make(name, *argv):
        path = tmp_path / f"{name}.json"
        code, _, err = run(capsys, "construct", *argv, "-o", str(path))
        assert code == 0, err
        paths[name] = path
        return path

    make("a244", "alpha-c", "--n1", "2", "--n2", "4", "--n3", "4")
    make("trivial", "cyclic", "--n", "1")
    make("z6", "cyclic", "--n", "6")
    make("z4", "cyclic", "--n", "4")
    make("klein", "abelian", "--ns", "2,2")
    (tmp_path / "order64.pres").write_text(ORDER64_PRESENTATION + "\n")
    make("order64", "presentation", "--file", str(tmp_path / "order64.pres"))
    make("p5", "presentation", "--text", p5_presentation(2))
    return paths


def test_construct(files):
    assert load(files["a244"]).order == 32
    assert load(files["trivial"]).order == 1
    assert load(files["order64"]).order == 64


def test_construct_product(files, capsys, tmp_path):
    out = tmp_path / "prod.json"
    code, _, _ = run(capsys, "construct", "product", "--left", str(files["a244"]), "--right", str(files["z4"]),
                     "-o", str(out))
    assert code == 0 and load(out).order == 128


def test_construct_to_stdout(capsys):
    code, out, _ = run(capsys, "construct", "dihedral", "--n", "4")
    assert code == 0 and json.loads(out)["order"] == 8


def test_construct_errors(capsys):
    code, _, err = run(capsys, "construct", "alpha-c", "--n1", "2", "--n2", "2", "--n3", "2")
    assert code == 2 and "gcd" in err
    with pytest.raises(SystemExit) as exc:
        cli.main(["construct", "cyclic"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "construct", "presentation", "--text", "<a | a^>")
    assert code == 2
    code, _, _ = run(capsys, "construct", "cyclic", "--n", "100", "--order-cap", "50")
    assert code == 3


def test_invariants(files, capsys):
    code, out, _ = run(capsys, "invariants", str(files["a244"]))
    d = json.loads(out)
    assert code == 0 and (d["rank"], d["center_rank"], d["is_c_group"]) == (2, 3, True)
    code, out, _ = run(capsys, "invariants", str(files["z6"]), "--format", "tsv")
    assert out.splitlines()[1].split("\t")[2:5] == ["1", "1", "false"]
    code, out, _ = run(capsys, "invariants", str(files["order64"]))
    d = json.loads(out)
    assert d["nilpotency_class"] == 3 and d["is_c_group"]


def test_invariants_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"order": 2, "table": [[0, 1], [0, 1]]}))
    code, _, err = run(capsys, "invariants", str(bad))
    assert code == 2 and "NotAGroup" not in err and err.startswith("error:")


def test_verify(capsys, tmp_path):
    out = tmp_path / "p5.json"
    code, _, err = run(capsys, "verify", "p5", "--p", "2", "-o", str(out))
    assert code == 0 and "checks passed" in err
    report = json.loads(out.read_text())
    assert report["passed"] and report["seed"] == 0
    assert any("presentation group ~" in c["claim"] for c in report["checks"])
    code, _, _ = run(capsys, "verify", "p5", "--p", "5")
    assert code == 3
    code, _, _ = run(capsys, "verify", "alpha-c", "--max-order", "64")
    assert code == 0


def test_verify_failure_exit_code(capsys, monkeypatch):
    from cgroups import search

    real = search.check_alpha_c

    def failing(params, limits):
        report, checks = real(params, limits)
        checks.record("forced", str(params), False, "injected")
        return report, checks

    monkeypatch.setattr(search, "check_alpha_c", failing)
    code, _, err = run(capsys, "verify", "alpha-c", "--max-order", "32")
    assert code == 1 and "FAIL  forced" in err


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--max-order", "32", "--format", "tsv")
    rows = out.splitlines()
    assert code == 0 and len(rows) == 2 and rows[1].startswith("alphaC(2,4,4)\t")
    code, out, _ = run(capsys, "search", "--max-order", "31")
    assert code == 0 and json.loads(out) == {"groups": [], "orders": []}
    code, out, _ = run(capsys, "search", "--max-order", "243", "--format", "tsv")
    assert any(r.startswith("alphaC(3,9,9)\t") for r in out.splitlines())


def test_iso(files, capsys):
    code, out, _ = run(capsys, "iso", str(files["a244"]), str(files["p5"]))
    assert code == 0 and json.loads(out)["isomorphic"] is True
    code, out, _ = run(capsys, "iso", str(files["z4"]), str(files["klein"]))
    assert json.loads(out)["isomorphic"] is False
    code, out, _ = run(capsys, "iso", str(files["z6"]), str(files["z6"]), "--format", "tsv")
    assert out == "isomorphic\ttrue\n"
    code, _, _ = run(capsys, "iso", str(files["z4"]), str(files["z6"]))
    assert code == 2


def test_export_table(files, capsys, tmp_path):
    code, out, _ = run(capsys, "export", str(files["trivial"]))
    assert out == "1\n1\n"
    z3 = tmp_path / "z3.json"
    run(capsys, "construct", "cyclic", "--n", "3", "-o", str(z3))
    code, out, _ = run(capsys, "export", str(z3), "--style", "table")
    assert out == "3\n1 2 3\n2 3 1\n3 1 2\n"


def test_export_permutations(files, capsys):
    code, out, _ = run(capsys, "export", str(files["a244"]), "--style", "perm")
    lines = out.splitlines()
    assert lines[0] == "32" and len(lines) == 3
    perms = [[int(v) - 1 for v in line.split()] for line in lines[1:]]
    assert all(sorted(p) == list(range(32)) for p in perms)
    # closure of the exported permutations, composed independently
    ident = tuple(range(32))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for s in perms:
                q = tuple(s[p[i]] for i in range(32))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    assert len(seen) == 32


def test_table_roundtrip(files, capsys, tmp_path):
    for name in ("a244", "order64", "klein"):
        text_path = tmp_path / f"{name}.txt"
        run(capsys, "export", str(files[name]), "-o", str(text_path))
        rows = text_path.read_text().split("\n")[1:-1]
        table = [[int(v) - 1 for v in row.split()] for row in rows]
        assert np.array_equal(from_table(table).table, load(files[name]).table)
        back = tmp_path / f"{name}.back.json"
        code, _, _ = run(capsys, "construct", "table", "--file", str(text_path), "-o", str(back))
        assert code == 0 and np.array_equal(load(back).table, load(files[name]).table)


def test_env_fallback_and_precedence(files, capsys, monkeypatch):
    monkeypatch.setenv("CGROUPS_FORMAT", "tsv")
    code, out, _ = run(capsys, "invariants", str(files["z6"]))
    assert out.startswith("group_id\t")
    code, out, _ = run(capsys, "invariants", str(files["z6"]), "--format", "json")
    assert json.loads(out)["order"] == 6
    monkeypatch.setenv("CGROUPS_ORDER_CAP", "16")
    code, _, _ = run(capsys, "construct", "cyclic", "--n", "20")
    assert code == 3
    code, _, _ = run(capsys, "construct", "cyclic", "--n", "20", "--order-cap", "32")
    assert code == 0


def test_seed_recorded(files, capsys):
    code, out, _ = run(capsys, "invariants", str(files["z6"]), "--seed", "7")
    assert json.loads(out)["seed"] == 7


def test_subgroup_closure_oracle_on_file(files):
    g = load(files["a244"])
    assert len(naive_closure(g.table.tolist(), [1])) == g.element_orders[1]
