"""Composed theory documents for validated configurations.

A domain configuration yields a theory that imports the base theory plus one
``<vp>/<Feature>`` path per selected feature and defines the composed
validity predicate as a conjunction, bound by name convention: a selected
feature F must have a predicate registered as valid-F.  A mapping
configuration yields a theory that merely combines the chosen variant
theories through imports; selecting no variant of an xor variation point is
an error because the declared mapping function would stay unbound.

Output is plain text (one definition per line, single spaces, LF), written
as ``<TheoryName>.thy.txt`` and byte-stable for golden tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .features import Configuration, FeatureDiagram
from .semantics import (
    DEFAULT_MAPPING_VARIANTS,
    MappingVariantRegistry,
    SUPER_MAPPING_SLOT,
    SemanticsError,
    UnboundMappingError,
)
from .sysmodel import DEFAULT_DOMAIN_VARIANTS, DomainVariantRegistry, NameConventionError

DOMAIN_THEORY_NAME = "SystemModel"


@dataclass(frozen=True)
class TheoryDoc:
    name: str
    base_import: str
    variant_imports: tuple[str, ...]  # "<vp>/<Feature>", sorted
    body: tuple[str, ...]

    def render(self) -> str:
        imports = " ".join([self.base_import, *(f'"{p}"' for p in self.variant_imports)])
        lines = [f"theory {self.name} imports {imports}"]
        if self.body:
            lines.append("begin")
            lines.extend(self.body)
            lines.append("end")
        else:
            lines.append("begin end")
        return "\n".join(lines) + "\n"

    @property
    def filename(self) -> str:
        return f"{self.name}.thy.txt"


def _variant_imports(diagram: FeatureDiagram, selected: frozenset[str]) -> tuple[str, ...]:
    pairs = sorted((diagram.vp_of(f).name, f) for f in selected)
    return tuple(f"{vp}/{feature}" for vp, feature in pairs)


def generate_domain_theory(
    diagram: FeatureDiagram,
    config: Configuration,
    registry: DomainVariantRegistry = DEFAULT_DOMAIN_VARIANTS,
) -> TheoryDoc:
    """The composed system-model theory for a validated domain configuration."""
    for feature in sorted(config.selected):
        if not registry.has(feature):
            raise NameConventionError(
                f"feature {feature} provides no predicate valid-{feature}"
            )
    conjunction = " ".join(
        ["valid-base sm", *(f"^ valid-{f} sm" for f in sorted(config.selected))]
    )
    return TheoryDoc(
        DOMAIN_THEORY_NAME,
        f"{DOMAIN_THEORY_NAME}-base",
        _variant_imports(diagram, config.selected),
        (f'constdefs "valid sm == {conjunction}"',),
    )


def generate_mapping_theory(
    diagram: FeatureDiagram,
    config: Configuration,
    language_name: str,
    registry: MappingVariantRegistry = DEFAULT_MAPPING_VARIANTS,
) -> TheoryDoc:
    """The combined semantic-mapping theory for a validated mapping
    configuration of the named language."""
    for vp in diagram.variation_points:
        if vp.is_xor and not ({f.name for f in vp.features} & config.selected):
            raise UnboundMappingError(
                f"variation point {vp.name} has no selected variant; "
                f"{SUPER_MAPPING_SLOT} remains unbound"
            )
    for feature in sorted(config.selected):
        if not registry.has(feature):
            raise SemanticsError(
                f"feature {feature} provides no mapping function to bind "
                f"{SUPER_MAPPING_SLOT}"
            )
    return TheoryDoc(
        f"{language_name}Sem",
        f"{language_name}Sem-base",
        _variant_imports(diagram, config.selected),
        (),
    )


def write_theory(doc: TheoryDoc, out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / doc.filename
    path.write_text(doc.render(), encoding="utf-8", newline="\n")
    return path
