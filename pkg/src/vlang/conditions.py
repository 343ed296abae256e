"""Context conditions: configurable well-formedness checks over minimal ASTs.

Conditions are registered per language (grammar name).  Non-optional
conditions always apply; optional ones are selected by id.  Each condition
is a total predicate yielding a possibly empty violation list; violations
are reported deterministically, ordered by (condition id, source position).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .schema import AstNode


class UnknownConditionError(Exception):
    pass


@dataclass(frozen=True, order=True)
class CCViolation:
    condition_id: str
    line: int
    col: int
    message: str

    def render(self) -> str:
        return f"CC {self.condition_id} {self.line}:{self.col} {self.message}"


@dataclass(frozen=True)
class ContextCondition:
    id: str
    description: str
    optional: bool
    check: Callable[[AstNode], list[CCViolation]]


_REGISTRY: dict[str, dict[str, ContextCondition]] = {}


def register_condition(language: str, condition: ContextCondition) -> None:
    by_id = _REGISTRY.setdefault(language, {})
    if condition.id in by_id:
        raise ValueError(f"condition {condition.id} already registered for {language}")
    by_id[condition.id] = condition


def conditions_for(language: str) -> dict[str, ContextCondition]:
    return dict(_REGISTRY.get(language, {}))


def check_context_conditions(
    node: AstNode, active: Iterable[str], language: str
) -> list[CCViolation]:
    """Run the given registered conditions on a minimal AST and return all
    violations in deterministic order."""
    registry = conditions_for(language)
    violations: list[CCViolation] = []
    for cc_id in sorted(set(active)):
        condition = registry.get(cc_id)
        if condition is None:
            raise UnknownConditionError(
                f"unknown context condition {cc_id} for language {language}"
            )
        violations.extend(condition.check(node))
    return sorted(violations)
