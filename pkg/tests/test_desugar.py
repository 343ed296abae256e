from __future__ import annotations

import pytest

from vlang.desugar import DesugarError, desugar_to_minimal
from vlang.grammar import parse_grammar
from vlang.modelparse import parse_model
from vlang.schema import dump_ast


def test_class_list_expands_to_plain_classes(cd):
    sugared = desugar_to_minimal(
        parse_model(cd, "classdiagram D { classes A, B; }"), cd
    )
    expanded = desugar_to_minimal(
        parse_model(cd, "classdiagram D { class A; class B; }"), cd
    )
    assert sugared == expanded
    assert dump_ast(sugared) == dump_ast(expanded)


def test_expansion_preserves_declaration_order(cd):
    node = desugar_to_minimal(
        parse_model(cd, "classdiagram D { class X; classes A, B; class Y; }"), cd
    )
    assert [c.fields["Name"] for c in node.fields["classes"]] == ["X", "A", "B", "Y"]
    assert all(c.datatype == "CDCClass" for c in node.fields["classes"])


def test_expanded_classes_have_empty_supers_and_stereotypes(cd):
    node = desugar_to_minimal(parse_model(cd, "classdiagram D { classes A, B; }"), cd)
    for c in node.fields["classes"]:
        assert c.fields["scl"] == []
        assert c.fields["stereotypes"] == frozenset()


def test_already_minimal_ast_is_unchanged(cd):
    node = parse_model(cd, "classdiagram D { class A ext B; class B; }")
    assert desugar_to_minimal(node, cd) == node


def test_idempotence(cd):
    node = parse_model(
        cd, "classdiagram D { classes A, B; <<singleton>> class C extends A; }"
    )
    once = desugar_to_minimal(node, cd)
    assert desugar_to_minimal(once, cd) == once


def test_minimal_grammar_needs_no_expanders(cdsimp):
    node = parse_model(cdsimp, "classdiagram D { class A; }")
    assert desugar_to_minimal(node, cdsimp) == node


def test_unregistered_sugar_is_an_error():
    g = parse_grammar(
        'grammar Fresh { A = "a" (items:B)*; B = "b" x:IDENT ";"; '
        'sugar C for B = "c" y:IDENT ";"; }'
    )
    node = parse_model(g, "a c one ;")
    with pytest.raises(DesugarError, match="no expander registered"):
        desugar_to_minimal(node, g)
