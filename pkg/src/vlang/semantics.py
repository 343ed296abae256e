"""Set-valued semantics of the bundled languages over the bounded domain.

A model denotes the set of all valid systems its mapping predicate accepts
(loose interpretation: a system may contain classes, subclass pairs,
attributes, and objects the model never mentions).  Class diagrams map each
declared class to an existence condition, a super-class condition picked by
the configured mapping variant, and the constraints of its stereotypes.
Assertion documents map each statement to a (possibly negated) subclass
condition.

Two super-class mapping variants are bundled:

  MapSuperCDirect    every declared super is a direct subclass target.
  MapSuperCDelegate  subclassing only to the first declared super; each
                     further super S is reached through a delegation
                     attribute dlg_S of target S on the class.

The semantics set of a model is enumerable within bounds and supports
membership queries without materializing the set.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import islice
from typing import Callable, Iterator

from .features import Configuration, FeatureDiagram
from .schema import AstNode
from .sysmodel import (
    Attr,
    Bounds,
    DEFAULT_DOMAIN_VARIANTS,
    DomainVariantRegistry,
    SystemModelLite,
    composed_valid,
    enumerate_systems,
)

SUPER_MAPPING_SLOT = "mSuperClasses"
SINGLETON = "singleton"
KNOWN_STEREOTYPES = frozenset({SINGLETON})

SuperMapping = Callable[[str, list[str], SystemModelLite], bool]


class SemanticsError(Exception):
    pass


class UnboundMappingError(SemanticsError):
    """No mapping variant is selected, so a declared mapping function stays
    undefined."""


class UnknownStereotypeWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# Super-class mapping variants
# ---------------------------------------------------------------------------

def map_super_direct(cls: str, supers: list[str], sm: SystemModelLite) -> bool:
    classes = set(sm.classes)
    pairs = set(sm.sub)
    return all(s in classes and (cls, s) in pairs for s in supers)


def map_super_delegate(cls: str, supers: list[str], sm: SystemModelLite) -> bool:
    if not supers:
        return True
    classes = set(sm.classes)
    pairs = set(sm.sub)
    attrs = set(sm.attrs)
    if (cls, supers[0]) not in pairs:
        return False
    return all(
        s in classes and (cls, f"dlg_{s}", s) in attrs for s in supers[1:]
    )


class MappingVariantRegistry:
    """Super-class mapping functions keyed by feature name."""

    def __init__(self) -> None:
        self._functions: dict[str, SuperMapping] = {}
        self._wants_delegate_attrs: set[str] = set()

    def register(
        self, feature: str, fn: SuperMapping, *, delegate_attrs: bool = False
    ) -> None:
        self._functions[feature] = fn
        if delegate_attrs:
            self._wants_delegate_attrs.add(feature)

    def has(self, feature: str) -> bool:
        return feature in self._functions

    def resolve(self, feature: str) -> SuperMapping:
        try:
            return self._functions[feature]
        except KeyError:
            raise SemanticsError(
                f"feature {feature} provides no mapping function to bind "
                f"{SUPER_MAPPING_SLOT}"
            ) from None

    def wants_delegate_attrs(self, feature: str) -> bool:
        return feature in self._wants_delegate_attrs


DEFAULT_MAPPING_VARIANTS = MappingVariantRegistry()
DEFAULT_MAPPING_VARIANTS.register("MapSuperCDirect", map_super_direct)
DEFAULT_MAPPING_VARIANTS.register(
    "MapSuperCDelegate", map_super_delegate, delegate_attrs=True
)


def super_mapping_for(
    config: Configuration,
    registry: MappingVariantRegistry = DEFAULT_MAPPING_VARIANTS,
) -> SuperMapping:
    """The single super-class mapping bound by a validated mapping
    configuration."""
    bound = [f for f in sorted(config.selected) if registry.has(f)]
    if not bound:
        raise UnboundMappingError(
            f"no mapping variant selected; {SUPER_MAPPING_SLOT} remains unbound"
        )
    if len(bound) > 1:
        raise SemanticsError(
            f"{SUPER_MAPPING_SLOT} bound by more than one selected variant: "
            + ", ".join(bound)
        )
    return registry.resolve(bound[0])


# ---------------------------------------------------------------------------
# AST access helpers (shape shared by all class-diagram grammars)
# ---------------------------------------------------------------------------

def _statement_list(root: AstNode) -> list[AstNode]:
    lists = [v for v in root.fields.values() if isinstance(v, list)]
    if len(lists) != 1:
        raise SemanticsError(
            f"{root.datatype} has {len(lists)} list fields, expected exactly one"
        )
    return lists[0]


def class_nodes(diagram: AstNode) -> list[AstNode]:
    return _statement_list(diagram)


def class_supers(class_node: AstNode) -> list[str]:
    return list(class_node.fields.get("scl") or [])


def class_stereotypes(class_node: AstNode) -> frozenset[str]:
    return frozenset(class_node.fields.get("stereotypes") or ())


# ---------------------------------------------------------------------------
# Mapping predicates
# ---------------------------------------------------------------------------

def map_class(class_node: AstNode, sm: SystemModelLite, variant: SuperMapping) -> bool:
    """The class exists, its supers map under the variant, and its stereotype
    constraints hold.  Unknown stereotypes are ignored with a warning."""
    name = class_node.fields["Name"]
    if name not in set(sm.classes):
        return False
    if not variant(name, class_supers(class_node), sm):
        return False
    stereotypes = class_stereotypes(class_node)
    for st in sorted(stereotypes - KNOWN_STEREOTYPES):
        warnings.warn(
            f"ignoring unknown stereotype <<{st}>> on class {name}",
            UnknownStereotypeWarning,
            stacklevel=2,
        )
    if SINGLETON in stereotypes:
        population = sum(1 for _, c in sm.class_of if c == name)
        if population > 1:
            return False
    return True


def map_diagram(diagram: AstNode, sm: SystemModelLite, variant: SuperMapping) -> bool:
    """Conjunction of map_class over all classes of a minimal class diagram."""
    return all(map_class(c, sm, variant) for c in class_nodes(diagram))


def map_assertions(doc: AstNode, sm: SystemModelLite) -> bool:
    """Conjunction over the subclass assertions of a minimal assertion
    document."""
    classes = set(sm.classes)
    pairs = set(sm.sub)
    for stmt in _statement_list(doc):
        left = stmt.fields["left"]
        right = stmt.fields["right"]
        if left not in classes or right not in classes:
            return False
        if stmt.fields.get("neg") is None:
            if (left, right) not in pairs:
                return False
        elif (left, right) in pairs:
            return False
    return True


# ---------------------------------------------------------------------------
# Mentioned names and delegate-attribute demands
# ---------------------------------------------------------------------------

def mentioned_class_names(model: AstNode) -> frozenset[str]:
    """All class names a minimal model mentions (declared or referenced)."""
    if model.datatype in _ROOT_MENTIONS:
        return _ROOT_MENTIONS[model.datatype](model)
    raise SemanticsError(f"no semantics registered for {model.datatype} models")


def delegate_attr_candidates(model: AstNode) -> frozenset[Attr]:
    """Delegation attributes a model demands under the delegate variant."""
    if model.datatype in _ROOT_DELEGATE_ATTRS:
        return _ROOT_DELEGATE_ATTRS[model.datatype](model)
    return frozenset()


def _cd_mentions(model: AstNode) -> frozenset[str]:
    names: set[str] = set()
    for c in class_nodes(model):
        names.add(c.fields["Name"])
        names.update(class_supers(c))
    return frozenset(names)


def _cd_delegate_attrs(model: AstNode) -> frozenset[Attr]:
    demands: set[Attr] = set()
    for c in class_nodes(model):
        supers = class_supers(c)
        demands.update((c.fields["Name"], f"dlg_{s}", s) for s in supers[1:])
    return frozenset(demands)


def _assertion_mentions(model: AstNode) -> frozenset[str]:
    names: set[str] = set()
    for stmt in _statement_list(model):
        names.add(stmt.fields["left"])
        names.add(stmt.fields["right"])
    return frozenset(names)


# Root datatype -> semantics hooks.  Adding a language means adding a row.
_ROOT_MENTIONS: dict[str, Callable[[AstNode], frozenset[str]]] = {
    "CDDefinition": _cd_mentions,
    "AssertionDoc": _assertion_mentions,
}
_ROOT_DELEGATE_ATTRS: dict[str, Callable[[AstNode], frozenset[Attr]]] = {
    "CDDefinition": _cd_delegate_attrs,
}


# ---------------------------------------------------------------------------
# Configured semantics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemanticsConfig:
    """A jointly validated selection of domain and mapping variants plus the
    enumeration bounds.  Build through `make_semantics_config`."""

    domain_diagram: FeatureDiagram
    domain_config: Configuration
    mapping_diagram: FeatureDiagram
    mapping_config: Configuration
    bounds: Bounds


def make_semantics_config(
    diagrams: list[FeatureDiagram],
    configs: list[Configuration],
    bounds: Bounds,
) -> SemanticsConfig:
    """Merge and validate configurations, then split them into the domain and
    mapping parts.  Raises SemanticsError when validation fails."""
    from .features import merge_configurations, render_violations, validate_configurations

    merged = merge_configurations(configs)
    violations = validate_configurations(diagrams, merged)
    if violations:
        raise SemanticsError(
            "configuration does not validate:\n" + render_violations(violations)
        )

    def classify(d: FeatureDiagram) -> str | None:
        kinds = {f.kind for f in d.features().values()}
        if "semantic-domain" in kinds and "semantic-mapping" in kinds:
            raise SemanticsError(f"diagram {d.name} mixes domain and mapping features")
        if "semantic-domain" in kinds:
            return "domain"
        if "semantic-mapping" in kinds:
            return "mapping"
        return None

    domain = [d for d in diagrams if classify(d) == "domain"]
    mapping = [d for d in diagrams if classify(d) == "mapping"]
    if len(domain) != 1 or len(mapping) != 1:
        raise SemanticsError(
            f"expected one semantic-domain and one semantic-mapping diagram, "
            f"found {len(domain)} and {len(mapping)}"
        )

    by_diagram = {c.diagram: c for c in merged}

    def config_of(d: FeatureDiagram) -> Configuration:
        return by_diagram.get(d.name, Configuration(f"empty-{d.name}", d.name, frozenset()))

    return SemanticsConfig(
        domain[0], config_of(domain[0]), mapping[0], config_of(mapping[0]), bounds
    )


def valid_predicate(
    config: SemanticsConfig,
    domain_registry: DomainVariantRegistry = DEFAULT_DOMAIN_VARIANTS,
) -> Callable[[SystemModelLite], bool]:
    """Composed validity for the configured semantic domain."""
    domain_features = [
        f
        for f in config.domain_config.selected
        if config.domain_diagram.features()[f].kind == "semantic-domain"
    ]
    return composed_valid(domain_features, domain_registry)


def mapping_predicate(
    model: AstNode,
    config: SemanticsConfig,
    mapping_registry: MappingVariantRegistry = DEFAULT_MAPPING_VARIANTS,
) -> Callable[[SystemModelLite], bool]:
    """The membership predicate the model contributes, per its language."""
    if model.datatype == "CDDefinition":
        variant = super_mapping_for(config.mapping_config, mapping_registry)
        return lambda sm: map_diagram(model, sm, variant)
    if model.datatype == "AssertionDoc":
        return lambda sm: map_assertions(model, sm)
    raise SemanticsError(f"no semantics registered for {model.datatype} models")


@dataclass
class SemanticsSet:
    """The enumerable, bound-relative semantics of one minimal model."""

    model: AstNode
    config: SemanticsConfig
    required_classes: tuple[str, ...]
    _valid: Callable[[SystemModelLite], bool]
    _accepts: Callable[[SystemModelLite], bool]

    def __iter__(self) -> Iterator[SystemModelLite]:
        for sm in enumerate_systems(self.config.bounds, self.required_classes, self._valid):
            if self._accepts(sm):
                yield sm

    def count(self) -> int:
        return sum(1 for _ in self)

    def first(self, k: int) -> list[SystemModelLite]:
        return list(islice(iter(self), k))

    def is_empty(self) -> bool:
        return not self.first(1)

    def contains(self, sm: SystemModelLite) -> bool:
        """Membership by predicate, independent of enumeration."""
        return self._valid(sm) and self._accepts(sm)


def compute_sem(
    model: AstNode,
    config: SemanticsConfig,
    *,
    domain_registry: DomainVariantRegistry = DEFAULT_DOMAIN_VARIANTS,
    mapping_registry: MappingVariantRegistry = DEFAULT_MAPPING_VARIANTS,
) -> SemanticsSet:
    """The semantics set of a minimal model under a validated configuration."""
    return SemanticsSet(
        model,
        config,
        tuple(sorted(mentioned_class_names(model))),
        valid_predicate(config, domain_registry),
        mapping_predicate(model, config, mapping_registry),
    )


def auto_attr_candidates(
    models: list[AstNode],
    mapping_config: Configuration,
    mapping_registry: MappingVariantRegistry = DEFAULT_MAPPING_VARIANTS,
) -> frozenset[Attr]:
    """Delegation attributes the models demand, when a variant that uses them
    is selected; empty otherwise."""
    if not any(
        mapping_registry.wants_delegate_attrs(f) for f in mapping_config.selected
    ):
        return frozenset()
    demands: set[Attr] = set()
    for m in models:
        demands |= delegate_attr_candidates(m)
    return frozenset(demands)
