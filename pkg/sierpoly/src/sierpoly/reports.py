"""JSON report models shared by the library and the CLI.

Every top-level report carries ``schemaVersion``; keys are camelCase on the
wire and snake_case in Python.
"""

from __future__ import annotations

import json
from enum import StrEnum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field
from pydantic.alias_generators import to_camel

from . import conventions

# ---------------------------------------------------------------------------
# Base models
# ---------------------------------------------------------------------------


class WireModel(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)

    def dump(self) -> dict[str, Any]:
        return self.model_dump(by_alias=True, mode="json")


class Report(WireModel):
    schema_version: int = conventions.SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(self.dump(), indent=2)


# ---------------------------------------------------------------------------
# Construction and metric
# ---------------------------------------------------------------------------


class BuildSummary(Report):
    r: int
    k: int
    mode: str
    format: str
    path: str
    vertices: int
    edges: int
    degrees: dict[int, int] = Field(default_factory=dict)


class BallReport(Report):
    center: str
    radius: int
    ambient_level: int
    points: list[str]
    matrix: list[list[int]]
    xi: str | None = None
    certificate: CertificateReport | None = None


# ---------------------------------------------------------------------------
# Limit graphs
# ---------------------------------------------------------------------------


class CertificateReport(Report):
    r: int
    xi: str
    radius: int
    level: int
    window: int
    mode: str


class ClassFailure(WireModel):
    pair: list[str]
    image: list[str]
    image_partner: str | None


class EquivarianceEntry(WireModel):
    sigma: str
    shift: int
    reflect: bool
    edges_preserved: bool
    classes_preserved: bool
    predicted: bool
    edges_checked: int
    classes_checked: int
    edge_failures: list[list[str]] = Field(default_factory=list)
    class_failures: list[ClassFailure] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.edges_preserved and self.classes_preserved


class EquivarianceReport(Report):
    r: int
    k: int
    entries: list[EquivarianceEntry] = Field(default_factory=list)

    @property
    def summary(self) -> dict[str, int]:
        """Count of group elements by outcome."""
        return {
            "passed": sum(1 for e in self.entries if e.passed),
            "failed": sum(1 for e in self.entries if not e.passed),
        }

    def entry(self, label: str) -> EquivarianceEntry:
        return next(e for e in self.entries if e.sigma == label)


class Verdict(StrEnum):
    isomorphic = "isomorphic"
    non_isomorphic = "non-isomorphic"
    inconclusive = "inconclusive"


class AlgebraicSide(WireModel):
    found: bool
    sigma: str | None = None
    # explicit alias outranks the camelCase generator
    n: int | None = Field(default=None, alias="N", alias_priority=2)
    sigmas_tried: int = 0
    reflections_equivariant: bool = True


class GeometricEntry(WireModel):
    radius: int
    compared_with: str
    pointed: bool
    isometric: bool | None
    sizes: list[int] = Field(default_factory=list)


class IsoVerdict(Report):
    r: int
    xi: str
    eta: str
    algebraic: AlgebraicSide
    geometric: list[GeometricEntry] = Field(default_factory=list)
    agreement: bool
    verdict: Verdict


# ---------------------------------------------------------------------------
# Boundary census
# ---------------------------------------------------------------------------


class ProfileEntry(WireModel):
    kind: str
    ball: list[str]
    values: list[int]
    stabilized_at: int
    witnesses: dict[str, int] = Field(default_factory=dict)


class BusemannEntry(WireModel):
    direction: str
    samples: int
    geodesic_defects: int
    almost_defects: int
    profile_id: str


class AlmostFailure(WireModel):
    n: int = Field(alias="N", alias_priority=2)
    s: int
    t: int
    defect: int


class AntipodalEntry(WireModel):
    levels: list[int]
    weakly_n: dict[str, int | None]
    weakly_passed: bool
    almost_failures: list[AlmostFailure] = Field(default_factory=list)
    almost_failed_everywhere: bool
    profile_id: str


class ShiftedEntry(WireModel):
    t: int
    levels: list[int]
    weakly_passed: bool
    profile_id: str


class CensusClaims(WireModel):
    two_geodesic_profiles: bool
    busemann_distinct: bool
    antipodal_weakly: bool
    antipodal_not_almost: bool
    antipodal_distinct_from_busemann: bool
    shifted_weakly: bool
    shifted_pairwise_distinct: bool
    shifted_distinct_from_busemann: bool
    midpoint_matches_antipodal: bool

    @property
    def all_hold(self) -> bool:
        return all(self.model_dump().values())


class CensusReport(Report):
    spec: dict[str, int]
    xi: str
    params: dict[str, Any]
    busemann: list[BusemannEntry] = Field(default_factory=list)
    antipodal: AntipodalEntry
    shifted: list[ShiftedEntry] = Field(default_factory=list)
    profile_order: list[str] = Field(default_factory=list)
    distinctness: list[list[str | None]] = Field(default_factory=list)
    profiles: dict[str, ProfileEntry] = Field(default_factory=dict)
    witnesses: dict[str, str] = Field(default_factory=dict)
    tilts: list[int] = Field(default_factory=list)
    claims: CensusClaims


class CacheClearSummary(Report):
    cache_dir: str
    removed: int


BallReport.model_rebuild()
