import io
from pathlib import Path

import pytest

from odpforge.cli import run

GOLDEN = Path(__file__).parent / "golden" / "recipe"
SUBCOMMANDS = ["compile", "lint", "diagram", "materialize", "query", "catalog"]


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def tree(root: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(root.iterdir())}


def test_catalog_list():
    code, out, _ = invoke("catalog", "list")
    assert code == 0
    assert out.split() == ["AgentRole", "NameStub", "Stub", "Plan", "Quantity", "QuantityOfStuff", "Provenance"]


def test_catalog_show_pattern():
    code, out, _ = invoke("catalog", "show", "Plan")
    assert code == 0
    assert out.startswith("pattern Plan")


def test_catalog_show_unknown():
    code, _, err = invoke("catalog", "show", "Nope")
    assert code == 2
    assert "Nope" in err


def test_missing_file():
    code, _, err = invoke("compile", "missing.odp")
    assert code == 2
    assert "file not found" in err


@pytest.mark.parametrize("cmd", SUBCOMMANDS)
def test_help_exits_zero(cmd, capsys):
    assert run([cmd, "--help"]) == 0
    assert "usage" in capsys.readouterr().out


def test_no_command_is_usage_error(capsys):
    assert run([]) == 2


def test_compile_turtle_only(tmp_path):
    code, out, _ = invoke("compile", "builtin:recipe", "--format", "turtle", "-o", str(tmp_path))
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert len([n for n in names if not n.startswith("Recipe.")]) == 6
    assert "Recipe.merged.ttl" in names
    assert all(n.endswith(".ttl") for n in names)
    assert "65 subclass-family axioms, 6 disjointness axioms, 24 equivalence bridges" in out.splitlines()


def test_compile_matches_golden_tree(tmp_path):
    code, _, _ = invoke("compile", "builtin:recipe", "-o", str(tmp_path))
    assert code == 0
    assert tree(tmp_path) == tree(GOLDEN)


def test_compile_twice_is_byte_identical(tmp_path):
    for d in ("a", "b"):
        assert invoke("compile", "builtin:recipe", "-o", str(tmp_path / d))[0] == 0
    assert tree(tmp_path / "a") == tree(tmp_path / "b")


def test_compile_syntax_error_location(tmp_path):
    bad = tmp_path / "bad.odp"
    bad.write_text("module M {\n  class A\n}")
    code, _, err = invoke("compile", str(bad), "-o", str(tmp_path / "out"))
    assert code == 1
    assert err.startswith(f"{bad}:3:1: error:")
    assert not (tmp_path / "out").exists()


def test_compile_strict_fails_on_warnings(tmp_path):
    src = tmp_path / "w.odp"
    src.write_text("module A { class Recipe. }\nmodule B { class Recipe. }")
    assert invoke("compile", str(src), "-o", str(tmp_path / "o"))[0] == 0
    assert invoke("compile", str(src), "--strict", "-o", str(tmp_path / "s"))[0] == 1


def test_lint_recipe():
    code, out, _ = invoke("lint", "builtin:recipe")
    assert code == 0
    assert "0 errors" in out.splitlines()[-1]


def test_diagram_files(tmp_path):
    code, _, _ = invoke("diagram", "builtin:movie", "-o", str(tmp_path))
    assert code == 0
    dots = list(tmp_path.glob("*.dot"))
    assert dots and all(p.read_text().startswith("digraph") for p in dots)


def test_query_cq7_tsv():
    code, out, _ = invoke("query", "builtin:recipe", "builtin:recipe", "builtin:cq7")
    assert code == 0
    header, *rows = out.splitlines()
    assert header.split("\t")[0] == "r"
    assert [r.split("\t")[0] for r in rows] == ["pulledPork"]


def test_materialize_reports_clash(tmp_path):
    data = tmp_path / "d.ttl"
    data.write_text("@prefix : <http://example.org/data/> .\n:x a :Recipe , :Situation .\n")
    code, _, err = invoke("materialize", "builtin:recipe", str(data), "--depth", "0")
    assert code == 1
    assert err.count("clash:") == 1


def test_materialize_hides_fresh_by_default():
    code, out, _ = invoke("materialize", "builtin:recipe", "builtin:recipe", "--depth", "1")
    assert code == 0
    assert "_ex:" not in out
    _, shown, _ = invoke("materialize", "builtin:recipe", "builtin:recipe", "--depth", "1", "--include-fresh")
    assert "_ex:" in shown


def test_negative_depth():
    code, _, err = invoke("materialize", "builtin:recipe", "builtin:recipe", "--depth", "-1")
    assert code == 2
    assert "depth" in err
