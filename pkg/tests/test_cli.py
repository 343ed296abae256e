from __future__ import annotations

import argparse
from pathlib import Path

import pytest

from conftest import golden
from vlang import bundled
from vlang.cli import build_parser, main


@pytest.fixture()
def workspace(tmp_path: Path) -> Path:
    files = {
        "cdsimp.mclang": bundled.CDSIMP_GRAMMAR_TEXT,
        "cd.mclang": bundled.CD_GRAMMAR_TEXT,
        "cda.mclang": bundled.ASSERTION_GRAMMAR_TEXT,
        "example.fd": bundled.EXAMPLE_FD_TEXT,
        "sm.conf": bundled.DOMAIN_CONF_TEXT,
        "cd.conf": bundled.MAPPING_CONF_TEXT,
        "bad.conf": bundled.DIRECT_CONF_TEXT,
        "d.cd": "classdiagram D { class A extends B; class B; }\n",
        "abs.cd": "classdiagram D { class A; class B; }\n",
        "dup.cd": "classdiagram D { class A; class A extends B, C; }\n",
        "sugar.cd": "classdiagram D { classes A, B; }\n",
        "pos.cda": "assertions S { sub A B; }\n",
        "neg.cda": "assertions S { no sub A B; }\n",
        "broken.cd": "classdiagram D { class extends; }\n",
    }
    for name, text in files.items():
        (tmp_path / name).write_text(text, encoding="utf-8")
    return tmp_path


def _run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_grammar_prints_schema_dump(workspace, capsys):
    code, out, _ = _run(capsys, "check-grammar", str(workspace / "cdsimp.mclang"))
    assert code == 0
    assert out == golden("cdsimp_schema.txt")


def test_check_grammar_rejects_bad_grammar(workspace, capsys):
    bad = workspace / "bad.mclang"
    bad.write_text("grammar X { }", encoding="utf-8")
    code, _, err = _run(capsys, "check-grammar", str(bad))
    assert code == 1
    assert "no productions" in err


def test_missing_file_is_a_file_error(workspace, capsys):
    code, _, err = _run(capsys, "check-grammar", str(workspace / "nope.mclang"))
    assert code == 2
    assert "cannot read" in err


def test_parse_prints_ast(workspace, capsys):
    code, out, _ = _run(
        capsys, "parse", str(workspace / "cdsimp.mclang"), str(workspace / "d.cd")
    )
    assert code == 0
    assert out.startswith("(CDDefinition ")


def test_parse_minimal_desugars(workspace, capsys):
    code, out, _ = _run(
        capsys,
        "parse",
        str(workspace / "cd.mclang"),
        str(workspace / "sugar.cd"),
        "--minimal",
    )
    assert code == 0
    assert "CDCClasses" not in out
    assert out.count("(CDCClass ") == 2


def test_parse_model_error_is_a_negative_verdict(workspace, capsys):
    code, _, err = _run(
        capsys, "parse", str(workspace / "cdsimp.mclang"), str(workspace / "broken.cd")
    )
    assert code == 1
    assert "expected" in err


def test_wf_clean_model(workspace, capsys):
    code, out, _ = _run(
        capsys,
        "wf",
        str(workspace / "cdsimp.mclang"),
        str(workspace / "d.cd"),
        "--cc",
        "CC-supers-declared,CC-single-inheritance-syntactic",
    )
    assert code == 0
    assert "no violations" in out


def test_wf_reports_violations_and_exits_nonzero(workspace, capsys):
    code, out, _ = _run(
        capsys,
        "wf",
        str(workspace / "cdsimp.mclang"),
        str(workspace / "dup.cd"),
        "--cc",
        "CC-single-inheritance-syntactic",
    )
    assert code == 1
    lines = out.strip().splitlines()
    assert any("CC-unique-class-names" in l for l in lines)
    assert any("CC-single-inheritance-syntactic" in l for l in lines)
    assert lines == sorted(lines)


def test_wf_unknown_condition_is_usage_error(workspace, capsys):
    code, _, err = _run(
        capsys,
        "wf",
        str(workspace / "cdsimp.mclang"),
        str(workspace / "d.cd"),
        "--cc",
        "CC-nope",
    )
    assert code == 2
    assert "CC-nope" in err


def test_fm_check_accepts_example_selection(workspace, capsys):
    code, out, _ = _run(
        capsys,
        "fm-check",
        str(workspace / "example.fd"),
        str(workspace / "sm.conf"),
        str(workspace / "cd.conf"),
    )
    assert code == 0
    assert "OK" in out


def test_fm_check_rejects_excluded_combination(workspace, capsys):
    code, out, _ = _run(
        capsys,
        "fm-check",
        str(workspace / "example.fd"),
        str(workspace / "sm.conf"),
        str(workspace / "bad.conf"),
    )
    assert code == 1
    assert out.splitlines() == [
        "VIOLATION CDSimpSemVar excludes MapSuperCDirect "
        "with SystemModelVar.SingleInheritance"
    ]


def test_generate_writes_both_theories(workspace, capsys):
    out_dir = workspace / "gen"
    code, out, _ = _run(
        capsys,
        "generate",
        str(workspace / "example.fd"),
        str(workspace / "sm.conf"),
        str(workspace / "cd.conf"),
        "--out",
        str(out_dir),
    )
    assert code == 0
    assert (out_dir / "SystemModel.thy.txt").read_text() == golden("SystemModel.thy.txt")
    assert (out_dir / "CDSimpSem.thy.txt").read_text() == golden("CDSimpSem.thy.txt")


def test_generate_refuses_invalid_selection(workspace, capsys):
    code, out, _ = _run(
        capsys,
        "generate",
        str(workspace / "example.fd"),
        str(workspace / "sm.conf"),
        str(workspace / "bad.conf"),
        "--out",
        str(workspace / "gen"),
    )
    assert code == 1
    assert "VIOLATION" in out
    assert not (workspace / "gen").exists()


def test_sem_counts_and_witnesses(workspace, capsys):
    code, out, _ = _run(
        capsys,
        "sem",
        str(workspace / "cdsimp.mclang"),
        str(workspace / "d.cd"),
        str(workspace / "example.fd"),
        str(workspace / "sm.conf"),
        str(workspace / "cd.conf"),
        "--max-objects",
        "0",
        "--witnesses",
        "1",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "SEM count=2 bounds=extra={};maxObjects=0;attrs={}"
    assert lines[1] == "WITNESS 1"
    assert lines[2] == "CLASSES A B"
    assert lines[3] == "SUB (A,A) (A,B) (B,B)"


def test_analyze_refine_holds(workspace, capsys):
    code, out, _ = _run(
        capsys,
        "analyze",
        "refine",
        str(workspace / "cdsimp.mclang"),
        str(workspace / "d.cd"),
        str(workspace / "abs.cd"),
        str(workspace / "example.fd"),
        str(workspace / "sm.conf"),
        str(workspace / "cd.conf"),
        "--max-objects",
        "0",
    )
    assert code == 0
    assert out.startswith("RESULT holds=true kind=refine ")


def test_analyze_refine_reverse_fails_with_counterexample(workspace, capsys):
    code, out, _ = _run(
        capsys,
        "analyze",
        "refine",
        str(workspace / "cdsimp.mclang"),
        str(workspace / "abs.cd"),
        str(workspace / "d.cd"),
        str(workspace / "example.fd"),
        str(workspace / "sm.conf"),
        str(workspace / "cd.conf"),
        "--max-objects",
        "0",
    )
    assert code == 1
    assert out.startswith("RESULT holds=false kind=refine ")
    assert "COUNTEREXAMPLE" in out
    assert "SUB (A,A) (B,B)" in out


def test_analyze_consistent_across_languages(workspace, capsys):
    common = [
        str(workspace / "example.fd"),
        str(workspace / "sm.conf"),
        str(workspace / "cd.conf"),
        "--max-objects",
        "0",
    ]
    code, out, _ = _run(
        capsys,
        "analyze",
        "consistent",
        str(workspace / "cdsimp.mclang"),
        str(workspace / "d.cd"),
        str(workspace / "cda.mclang"),
        str(workspace / "pos.cda"),
        *common,
    )
    assert code == 0
    assert "holds=true kind=consistent" in out
    code, out, _ = _run(
        capsys,
        "analyze",
        "consistent",
        str(workspace / "cdsimp.mclang"),
        str(workspace / "d.cd"),
        str(workspace / "cda.mclang"),
        str(workspace / "neg.cda"),
        *common,
    )
    assert code == 1
    assert "holds=false kind=consistent" in out


def test_analyze_equiv(workspace, capsys):
    code, out, _ = _run(
        capsys,
        "analyze",
        "equiv",
        str(workspace / "cd.mclang"),
        str(workspace / "sugar.cd"),
        str(workspace / "abs.cd"),
        str(workspace / "example.fd"),
        str(workspace / "sm.conf"),
        str(workspace / "cd.conf"),
        "--max-objects",
        "0",
    )
    assert code == 0
    assert "holds=true kind=equiv" in out


def test_output_carries_no_ansi_when_not_a_tty(workspace, capsys, monkeypatch):
    monkeypatch.setenv("VLANG_COLOR", "0")
    _, out, _ = _run(
        capsys,
        "fm-check",
        str(workspace / "example.fd"),
        str(workspace / "sm.conf"),
        str(workspace / "cd.conf"),
    )
    assert "\x1b[" not in out


def test_every_subcommand_help_lists_all_flags():
    parser = build_parser()
    subactions = [
        a for a in parser._actions if isinstance(a, argparse._SubParsersAction)
    ]
    assert subactions
    commands = subactions[0].choices
    assert set(commands) == {
        "check-grammar", "parse", "wf", "fm-check", "generate", "sem", "analyze",
    }
    for name, sub in commands.items():
        help_text = sub.format_help()
        for action in sub._actions:
            for option in action.option_strings:
                assert option in help_text, (name, option)


def test_exit_codes_reflect_verdicts_only(workspace, capsys):
    # the same invocation yields the same exit code on repeat
    args = (
        "fm-check",
        str(workspace / "example.fd"),
        str(workspace / "sm.conf"),
        str(workspace / "bad.conf"),
    )
    first, _, _ = _run(capsys, *args)
    second, _, _ = _run(capsys, *args)
    assert first == second == 1
