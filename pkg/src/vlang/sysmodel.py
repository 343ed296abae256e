"""The bounded semantic domain: finite class structures with subclassing,
attributes, and an object population.

A system is a finite set of class names, a subclassing relation over them,
attributes (owner, name, target class), objects with canonical identifiers
o1..oN, and a total class assignment for the objects.  Base validity demands
a reflexive and transitive subclassing relation on top of the structural
invariants.  Domain variants are extra validity predicates keyed by feature
name; the composed predicate is their conjunction with base validity.

`enumerate_systems` yields every system within given bounds that satisfies a
predicate, in a canonical deterministic order: componentwise by cardinality,
then lexicographically, over the encoding (classes, sub, attrs, objects,
class assignment).  Smaller systems come first, which makes reported
witnesses minimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Iterable, Iterator

Pair = tuple[str, str]
Attr = tuple[str, str, str]  # (owner class, attribute name, target class)


class NameConventionError(Exception):
    """A selected feature has no predicate registered under its name."""


@dataclass(frozen=True)
class SystemModelLite:
    """One bounded semantic-domain structure.

    All components are canonically sorted tuples; build instances through
    `make_system` unless the inputs are already canonical.
    """

    classes: tuple[str, ...]
    sub: tuple[Pair, ...]
    attrs: tuple[Attr, ...]
    objects: tuple[str, ...]
    class_of: tuple[Pair, ...]


def make_system(
    classes: Iterable[str] = (),
    sub: Iterable[Pair] = (),
    attrs: Iterable[Attr] = (),
    objects: Iterable[str] = (),
    class_of: Iterable[Pair] = (),
) -> SystemModelLite:
    return SystemModelLite(
        tuple(sorted(set(classes))),
        tuple(sorted(set(sub))),
        tuple(sorted(set(attrs))),
        tuple(sorted(set(objects))),
        tuple(sorted(set(class_of))),
    )


def canonical_key(sm: SystemModelLite):
    """Sort key realizing the canonical enumeration order."""
    return (
        len(sm.classes),
        sm.classes,
        len(sm.sub),
        sm.sub,
        len(sm.attrs),
        sm.attrs,
        len(sm.objects),
        sm.objects,
        sm.class_of,
    )


def structural_problems(sm: SystemModelLite) -> list[str]:
    problems: list[str] = []
    classes = set(sm.classes)
    for a, b in sm.sub:
        if a not in classes or b not in classes:
            problems.append(f"sub pair ({a},{b}) outside the class universe")
    seen_attr: set[Pair] = set()
    for owner, name, target in sm.attrs:
        if owner not in classes or target not in classes:
            problems.append(f"attribute ({owner},{name},{target}) outside the class universe")
        if (owner, name) in seen_attr:
            problems.append(f"attribute name {name} duplicated on class {owner}")
        seen_attr.add((owner, name))
    objects = set(sm.objects)
    assigned = {o for o, _ in sm.class_of}
    if assigned != objects or len(sm.class_of) != len(objects):
        problems.append("class assignment is not total on the objects")
    for o, c in sm.class_of:
        if c not in classes:
            problems.append(f"object {o} assigned to unknown class {c}")
    return problems


def structurally_valid(sm: SystemModelLite) -> bool:
    return not structural_problems(sm)


def _supers(sm: SystemModelLite) -> dict[str, set[str]]:
    out: dict[str, set[str]] = {}
    for a, b in sm.sub:
        out.setdefault(a, set()).add(b)
    return out


def eval_valid_base(sm: SystemModelLite) -> bool:
    """Base validity: structural invariants plus a reflexive and transitive
    subclassing relation."""
    if not structurally_valid(sm):
        return False
    pairs = set(sm.sub)
    if any((c, c) not in pairs for c in sm.classes):
        return False
    supers = _supers(sm)
    for a, bs in supers.items():
        for b in bs:
            for c in supers.get(b, ()):
                if (a, c) not in pairs:
                    return False
    return True


def valid_single_inheritance(sm: SystemModelLite) -> bool:
    """Any two superclasses of one class are themselves related."""
    pairs = set(sm.sub)
    for sups in _supers(sm).values():
        for c2, c3 in combinations(sorted(sups), 2):
            if (c2, c3) not in pairs and (c3, c2) not in pairs:
                return False
    return True


# ---------------------------------------------------------------------------
# Domain variant registry
# ---------------------------------------------------------------------------

class DomainVariantRegistry:
    """Validity predicates keyed by feature name, following the valid-<Feature>
    naming convention."""

    def __init__(self) -> None:
        self._predicates: dict[str, Callable[[SystemModelLite], bool]] = {}

    def register(self, feature: str, predicate: Callable[[SystemModelLite], bool]) -> None:
        self._predicates[feature] = predicate

    def has(self, feature: str) -> bool:
        return feature in self._predicates

    def resolve(self, feature: str) -> Callable[[SystemModelLite], bool]:
        try:
            return self._predicates[feature]
        except KeyError:
            raise NameConventionError(
                f"feature {feature} provides no predicate valid-{feature}"
            ) from None


DEFAULT_DOMAIN_VARIANTS = DomainVariantRegistry()
DEFAULT_DOMAIN_VARIANTS.register("SingleInheritance", valid_single_inheritance)


def eval_variant_predicate(
    feature: str,
    sm: SystemModelLite,
    registry: DomainVariantRegistry = DEFAULT_DOMAIN_VARIANTS,
) -> bool:
    return registry.resolve(feature)(sm)


def composed_valid(
    selected: Iterable[str],
    registry: DomainVariantRegistry = DEFAULT_DOMAIN_VARIANTS,
) -> Callable[[SystemModelLite], bool]:
    """Conjunction of base validity and the predicates of the selected
    domain features, in sorted feature order."""
    predicates = [registry.resolve(f) for f in sorted(set(selected))]

    def valid(sm: SystemModelLite) -> bool:
        return eval_valid_base(sm) and all(p(sm) for p in predicates)

    return valid


# ---------------------------------------------------------------------------
# Bounded enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    """Search-space bounds for enumeration: class names addable beyond the
    required ones, the maximum object count, and the attribute triples
    eligible to appear."""

    extra_class_names: tuple[str, ...] = ()
    max_objects: int = 0
    attr_candidates: frozenset[Attr] = frozenset()

    def __post_init__(self) -> None:
        if self.max_objects < 0:
            raise ValueError("max_objects must be non-negative")

    def describe(self) -> str:
        extra = ",".join(sorted(set(self.extra_class_names)))
        attrs = ",".join(f"({o},{n},{t})" for o, n, t in sorted(self.attr_candidates))
        return f"extra={{{extra}}};maxObjects={self.max_objects};attrs={{{attrs}}}"


def _subsets_by_size(items: tuple) -> Iterator[tuple]:
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def enumerate_systems(
    bounds: Bounds,
    required_classes: Iterable[str],
    valid: Callable[[SystemModelLite], bool],
) -> Iterator[SystemModelLite]:
    """All systems within bounds satisfying `valid`, in canonical order,
    without duplicates.

    The class universe ranges over required_classes plus any subset of the
    extra names; attributes over subsets of the candidates that respect
    per-class name uniqueness; objects o1..oN for N up to the bound, with
    every total class assignment.
    """
    required = sorted(set(required_classes))
    extras = sorted(set(bounds.extra_class_names) - set(required))

    class_universes = sorted(
        {tuple(sorted(set(required) | set(chosen))) for chosen in _subsets_by_size(tuple(extras))},
        key=lambda t: (len(t), t),
    )

    for classes in class_universes:
        class_set = set(classes)
        all_pairs = tuple(sorted(product(classes, classes)))
        eligible_attrs = tuple(
            sorted(
                a
                for a in bounds.attr_candidates
                if a[0] in class_set and a[2] in class_set
            )
        )
        for sub in _subsets_by_size(all_pairs):
            for attrs in _subsets_by_size(eligible_attrs):
                if len({(o, n) for o, n, _ in attrs}) != len(attrs):
                    continue  # attribute names unique per class
                for count in range(bounds.max_objects + 1):
                    objects = tuple(f"o{i}" for i in range(1, count + 1))
                    if count and not classes:
                        continue
                    assignments = sorted(
                        tuple(sorted(zip(objects, chosen)))
                        for chosen in product(classes, repeat=count)
                    ) if count else [()]
                    for class_of in assignments:
                        sm = SystemModelLite(classes, sub, attrs, objects, class_of)
                        if valid(sm):
                            yield sm


# ---------------------------------------------------------------------------
# Witness dump format
# ---------------------------------------------------------------------------

def dump_system(sm: SystemModelLite) -> str:
    """Deterministic dump with sections CLASSES, SUB, ATTRS, OBJECTS, CLASSOF;
    bit-exact for golden tests."""
    def section(header: str, entries: list[str]) -> str:
        return " ".join([header, *entries]) if entries else header

    return "\n".join(
        [
            section("CLASSES", list(sm.classes)),
            section("SUB", [f"({a},{b})" for a, b in sm.sub]),
            section("ATTRS", [f"({o},{n},{t})" for o, n, t in sm.attrs]),
            section("OBJECTS", list(sm.objects)),
            section("CLASSOF", [f"({o},{c})" for o, c in sm.class_of]),
        ]
    ) + "\n"
