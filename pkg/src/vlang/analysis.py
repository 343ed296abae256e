"""Bounded decision procedures: refinement, consistency, equivalence.

All verdicts are relative to the enumeration bounds they ran with, which the
verdict records.  Universal checks (refinement, equivalence) stop at the
first counterexample; existential checks (consistency) stop at the first
witness.  Because enumeration order is canonical, reported systems are
stable across runs and minimal in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .schema import AstNode
from .semantics import (
    DEFAULT_MAPPING_VARIANTS,
    MappingVariantRegistry,
    SemanticsConfig,
    mapping_predicate,
    mentioned_class_names,
    valid_predicate,
)
from .sysmodel import (
    DEFAULT_DOMAIN_VARIANTS,
    Bounds,
    DomainVariantRegistry,
    SystemModelLite,
    dump_system,
    enumerate_systems,
)


class AnalysisError(Exception):
    pass


@dataclass(frozen=True)
class AnalysisVerdict:
    kind: str  # "refine" | "consistent" | "equiv"
    holds: bool
    bounds_used: Bounds
    witness: SystemModelLite | None = None
    counterexample: SystemModelLite | None = None

    def report(self) -> str:
        lines = [
            f"RESULT holds={'true' if self.holds else 'false'} "
            f"kind={self.kind} bounds={self.bounds_used.describe()}"
        ]
        if self.witness is not None:
            lines.append("WITNESS")
            lines.append(dump_system(self.witness).rstrip("\n"))
        if self.counterexample is not None:
            lines.append("COUNTEREXAMPLE")
            lines.append(dump_system(self.counterexample).rstrip("\n"))
        return "\n".join(lines) + "\n"


def _registries(domain_registry, mapping_registry):
    return (
        domain_registry or DEFAULT_DOMAIN_VARIANTS,
        mapping_registry or DEFAULT_MAPPING_VARIANTS,
    )


def check_refinement(
    refined: AstNode,
    abstract: AstNode,
    config: SemanticsConfig,
    *,
    domain_registry: DomainVariantRegistry | None = None,
    mapping_registry: MappingVariantRegistry | None = None,
) -> AnalysisVerdict:
    """Does every system denoted by `refined` lie in the semantics of
    `abstract`, within bounds?"""
    if refined.datatype != abstract.datatype:
        raise AnalysisError(
            f"refinement relates models of one language, got "
            f"{refined.datatype} and {abstract.datatype}"
        )
    dom, mapr = _registries(domain_registry, mapping_registry)
    required = sorted(mentioned_class_names(refined) | mentioned_class_names(abstract))
    valid = valid_predicate(config, dom)
    accepts_refined = mapping_predicate(refined, config, mapr)
    accepts_abstract = mapping_predicate(abstract, config, mapr)
    for sm in enumerate_systems(config.bounds, required, valid):
        if accepts_refined(sm) and not accepts_abstract(sm):
            return AnalysisVerdict("refine", False, config.bounds, counterexample=sm)
    return AnalysisVerdict("refine", True, config.bounds)


def check_consistency(
    models: Sequence[AstNode],
    config: SemanticsConfig,
    *,
    domain_registry: DomainVariantRegistry | None = None,
    mapping_registry: MappingVariantRegistry | None = None,
) -> AnalysisVerdict:
    """Is the intersection of the models' semantics nonempty within bounds?
    The models may come from different languages."""
    if not models:
        raise AnalysisError("consistency needs at least one model")
    dom, mapr = _registries(domain_registry, mapping_registry)
    required: set[str] = set()
    for m in models:
        required |= mentioned_class_names(m)
    valid = valid_predicate(config, dom)
    predicates = [mapping_predicate(m, config, mapr) for m in models]
    for sm in enumerate_systems(config.bounds, sorted(required), valid):
        if all(p(sm) for p in predicates):
            return AnalysisVerdict("consistent", True, config.bounds, witness=sm)
    return AnalysisVerdict("consistent", False, config.bounds)


def check_equivalence(
    m1: AstNode,
    m2: AstNode,
    config: SemanticsConfig,
    *,
    domain_registry: DomainVariantRegistry | None = None,
    mapping_registry: MappingVariantRegistry | None = None,
) -> AnalysisVerdict:
    """Mutual refinement; the counterexample comes from whichever direction
    fails first."""
    forward = check_refinement(
        m1, m2, config,
        domain_registry=domain_registry, mapping_registry=mapping_registry,
    )
    if not forward.holds:
        return AnalysisVerdict(
            "equiv", False, config.bounds, counterexample=forward.counterexample
        )
    backward = check_refinement(
        m2, m1, config,
        domain_registry=domain_registry, mapping_registry=mapping_registry,
    )
    return AnalysisVerdict(
        "equiv", backward.holds, config.bounds, counterexample=backward.counterexample
    )
