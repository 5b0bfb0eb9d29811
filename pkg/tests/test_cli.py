import pytest

from vasscov.cli import main

LOOP = "vass d=1\nstate p\ntrans p p 1\ninit p 0\ntarget p 3\nmode cover\n"
DOWN = "vass d=1\nstate p\ntrans p p -1\ninit p 0\ntarget p 3\nmode cover\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_forward(capsys, files):
    code, out, _ = run(capsys, "solve", "--algo", "forward", files("a", LOOP))
    assert code == 0
    lines = out.splitlines()
    assert "answer=yes" in lines and "len=4" in lines
    assert lines[lines.index("len=4") + 1:lines.index("len=4") + 5] == ["p 0", "p 1", "p 2", "p 3"]
    assert any(line.startswith("stats expanded=") for line in lines)


def test_solve_no_and_backward(capsys, files):
    f = files("d", DOWN)
    assert run(capsys, "solve", "--algo", "forward", f)[0] == 1
    code, out, _ = run(capsys, "solve", "--algo", "backward", f)
    assert code == 1 and "answer=no" in out


def test_solve_cap_exhausted(capsys, files):
    code, out, _ = run(capsys, "solve", "--algo", "forward", "--cap", "2", files("a", LOOP))
    assert code == 10 and "answer=budget-exhausted" in out


def test_solve_bounded_budget(capsys, files):
    f = files("a", LOOP.replace("target p 3", "target p 40"))
    code, out, _ = run(capsys, "solve", "--algo", "bounded-dfs", "--bound", "50", "--budget", "5", f)
    assert code == 10


def test_solve_bounded_needs_bound(capsys, files):
    code, _, err = run(capsys, "solve", "--algo", "bounded-dfs", files("a", LOOP))
    assert code == 2 and "bound" in err


def test_oracle_then_audit(capsys, files):
    inst = files("a", LOOP)
    code, out, _ = run(capsys, "oracle", inst)
    assert code == 0
    code, out, _ = run(capsys, "audit", inst, files("r", out))
    assert code == 0 and "len_ok=true" in out.splitlines()


def test_audit_rejects_non_witness(capsys, files):
    code, _, err = run(capsys, "audit", files("a", LOOP), files("r", "len=2\np 0\np 1\n"))
    assert code == 1 and "does not" in err


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "3", "2")
    assert out.splitlines() == ["L[0]=3", "L[1]=81", "L[2]=43046721", "M[0]=3", "M[1]=9", "M[2]=243"]


def test_bound_too_small(capsys):
    assert run(capsys, "bound", "1", "2")[0] == 2


GRAPH = "graph k=3 mode=partite\npart 1: a\npart 2: b\npart 3: c\nedge a b\nedge b c\nedge a c\n"


def test_gen_clique_and_solve(capsys, files):
    code, out, _ = run(capsys, "gen", "clique", files("g", GRAPH))
    assert code == 0 and out.startswith("vass d=2\n")
    code, out, _ = run(capsys, "solve", "--algo", "ztest", files("c", out))
    assert code == 0 and "stats zero_tests=30" in out


def test_gen_flags(capsys, files):
    g = files("g", GRAPH)
    _, unary, _ = run(capsys, "gen", "clique", "--unary", g)
    assert all(abs(int(x)) <= 1 for line in unary.splitlines() if line.startswith("trans")
               for x in line.split()[3:])
    _, elim, _ = run(capsys, "gen", "clique", "--eliminate-ztests", g)
    assert elim.startswith("vass d=3\n") and "ztest" not in elim and "mode reach" in elim


def test_gen_cycle_and_hyperclique(capsys, files):
    cyc = "graph k=3 mode=circle\npart 0: a\npart 1: b\npart 2: c\nedge a b\nedge b c\nedge c a\n"
    code, out, _ = run(capsys, "gen", "cycle", files("c", cyc))
    assert code == 0 and "mode reach" in out
    hyp = "hypergraph parts=4\npart 1: a\npart 2: b\npart 3: c\npart 4: d\n" \
          "hedge a b c\nhedge a b d\nhedge a c d\nhedge b c d\n"
    code, out, _ = run(capsys, "gen", "hyperclique", "--d", "1", files("h", hyp))
    assert code == 0 and out.startswith("vass d=2\n")


def test_gen_bad_graph(capsys, files):
    code, _, err = run(capsys, "gen", "clique", files("g", "graph k=2\npart 1: a b\npart 2: c\nedge a b\n"))
    assert code == 2 and "line 4" in err


def test_compile(capsys, files):
    code, out, _ = run(capsys, "compile", "--init", "2,0", "--bound", "20", files("p", "multiply x 3\n"))
    assert code == 0
    assert sum(line.startswith("state ") for line in out.splitlines()) == 3
    assert "init qI 2 0" in out and "bound 20" in out


def test_transforms(capsys, files):
    code, out, _ = run(capsys, "transform", "cover2reach", files("a", LOOP))
    assert code == 0 and "mode reach" in out and "trans p p -1" in out
    reach = LOOP.replace("mode cover", "mode reach\nbound 3")
    code, out, _ = run(capsys, "transform", "reach2cover", files("r", reach))
    assert code == 0 and "target s 3" in out
    code, out, _ = run(capsys, "transform", "opposite", files("o", reach))
    assert code == 0 and "trans p p 1 -1" in out and "init p 0 3" in out


def test_suite(capsys):
    code, out, _ = run(capsys, "suite", "gadgets", "--seed", "1", "--count", "5")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 6
    assert all("agree=true" in line for line in lines[:5])


def test_unknown_suite(capsys):
    code, _, err = run(capsys, "suite", "nope")
    assert code == 2 and "unknown suite" in err


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--algo", "sideways", "x"])
    assert exc.value.code == 2


def test_missing_file(capsys):
    assert run(capsys, "solve", "/nonexistent/file")[0] == 2
