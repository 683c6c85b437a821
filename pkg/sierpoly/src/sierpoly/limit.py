"""The limit graph of a basepoint sequence, seen through certified balls.

A vertex of the limit graph is a sequence cofinal with the basepoint; it is
stored as a finite word followed by the basepoint's tail. Every level-k copy
sits isometrically in level k + 1, so limit distances are exact level-K
distances for any K at which both vertices already exist.
"""

from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass
from enum import StrEnum

import networkx as nx

from . import conventions
from .construction import BuildMode, build_level_graph, copy_embedding, neighbors
from .core import (
    Address,
    BasepointSeq,
    DihedralElement,
    PolygonSpec,
    apply_dihedral,
    canonical,
    cofinal,
    corner,
    dihedral_group,
    format_word,
    gluing_partner,
)
from .errors import BudgetExceeded
from .metric import PointedBall, ball, hierarchical_dist, pointed_isometric
from .reports import (
    AlgebraicSide,
    ClassFailure,
    EquivarianceEntry,
    EquivarianceReport,
    GeometricEntry,
    IsoVerdict,
    Verdict,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Limit vertices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitVertex:
    """``word`` followed by the letters of ``base`` after position ``len(word)``.

    Always built through ``limit_vertex`` so that equal vertices compare equal.
    """

    base: BasepointSeq
    word: Address

    @property
    def depth(self) -> int:
        return len(self.word)

    def address(self, level: int) -> Address:
        if level < self.depth:
            raise ValueError(f"vertex needs level {self.depth}, asked for {level}")
        return self.word + self.base.prefix(level)[self.depth :]

    def text(self, spec: PolygonSpec) -> str:
        return format_word(spec, self.word) if self.word else "xi"


def _run_length(base: BasepointSeq, word: Address) -> int | None:
    """Initial constant run of ``word . tail``; None when it never ends."""

    def letter(i: int) -> int:
        return word[i - 1] if i <= len(word) else base.letter(i)

    horizon = max(len(word), len(base.preperiod)) + len(base.period) + 1
    first = letter(1)
    i = 2
    while i <= horizon:
        if letter(i) != first:
            return i - 1
        i += 1
    return None


def limit_vertex(spec: PolygonSpec, base: BasepointSeq, word: Address) -> LimitVertex:
    """Normal form of the vertex ``word . tail``: canonicalize past every gluing, then trim."""
    depth = len(word)
    run = _run_length(base, word)
    settle = max(depth, 1) if run is None else max(depth, run + 1)
    address = word + base.prefix(settle)[depth:]
    address = canonical(spec, address).canonical
    while address and address[-1] == base.letter(len(address)):
        address = address[:-1]
    return LimitVertex(base, address)


def basepoint(spec: PolygonSpec, base: BasepointSeq) -> LimitVertex:
    return limit_vertex(spec, base, ())


def sequence_vertex(spec: PolygonSpec, base: BasepointSeq, eta: BasepointSeq) -> LimitVertex:
    """The limit vertex represented by a sequence cofinal with ``base``."""
    ok, n = cofinal(base, eta)
    if not ok or n is None:
        raise ValueError("sequence is not cofinal with the basepoint")
    return limit_vertex(spec, base, eta.prefix(n - 1))


def limit_distance(spec: PolygonSpec, u: LimitVertex, v: LimitVertex) -> int:
    level = max(u.depth, v.depth, 1)
    return hierarchical_dist(spec, level, u.address(level), v.address(level))


def vertex_in_limit(xi: BasepointSeq, eta: BasepointSeq) -> bool:
    return cofinal(xi, eta)[0]


def level_diameter(spec: PolygonSpec, k: int) -> int:
    return nx.diameter(build_level_graph(spec, k, BuildMode.materialized).to_networkx())


@dataclass(frozen=True)
class MembershipBound:
    agreement: int
    distance: int
    bound: int


def membership_bound(spec: PolygonSpec, xi: BasepointSeq, eta: BasepointSeq) -> MembershipBound:
    """d(xi, eta) against the diameter of the level below their agreement index."""
    ok, n = cofinal(xi, eta)
    if not ok or n is None:
        raise ValueError("sequences are not cofinal")
    edited = n - 1
    if edited == 0:
        return MembershipBound(n, 0, 0)
    d = hierarchical_dist(spec, edited, xi.prefix(edited), eta.prefix(edited))
    return MembershipBound(n, d, level_diameter(spec, edited))


# ---------------------------------------------------------------------------
# Stabilization
# ---------------------------------------------------------------------------


class StabilityMode(StrEnum):
    heuristic = "heuristic"
    certified = "certified"


@dataclass(frozen=True)
class StabilizationCertificate:
    xi: BasepointSeq
    radius: int
    level: int
    window: int
    mode: StabilityMode


def _gluing_gap(spec: PolygonSpec, xi: BasepointSeq, k: int) -> int:
    """Distance from xi[k] to the gluing corners of its copy at level k + 1."""
    c = xi.letter(k + 1)
    here = xi.prefix(k)
    return min(
        hierarchical_dist(spec, k, here, corner(spec.up(c), k)),
        hierarchical_dist(spec, k, here, corner(spec.down(c), k)),
    )


def _corner_floor(spec: PolygonSpec, xi: BasepointSeq, k: int) -> int:
    """Least distance from xi[k] to any corner a periodic letter can glue through.

    Non-decreasing in k once k is past the preperiod.
    """
    letters = {spec.up(p) for p in xi.period} | {spec.down(p) for p in xi.period}
    here = xi.prefix(k)
    return min(hierarchical_dist(spec, k, here, corner(x, k)) for x in sorted(letters))


def confined(spec: PolygonSpec, xi: BasepointSeq, radius: int, level: int) -> bool:
    """Whether every deeper ball of this radius is the image of the level-``level`` ball."""
    settle = max(level, len(xi.preperiod))
    if any(_gluing_gap(spec, xi, k) < radius for k in range(level, settle)):
        return False
    return _corner_floor(spec, xi, settle) >= radius


class _Search:
    """Balls and consecutive-level comparisons for one (spec, xi, radius)."""

    def __init__(self, spec: PolygonSpec, xi: BasepointSeq, radius: int, step_budget: int) -> None:
        self.spec = spec
        self.xi = xi
        self.radius = radius
        self.step_budget = step_budget
        self._balls: dict[int, PointedBall] = {}
        self._steps: dict[int, bool] = {}

    def ball(self, k: int) -> PointedBall:
        if k not in self._balls:
            graph = build_level_graph(self.spec, k, BuildMode.implicit)
            self._balls[k] = ball(graph, canonical(self.spec, self.xi.prefix(k)), self.radius)
        return self._balls[k]

    def step(self, k: int) -> bool:
        if k not in self._steps:
            lower, upper = self.ball(k), self.ball(k + 1)
            embed = copy_embedding(self.spec, k + 1, self.xi.letter(k + 1))
            hint = {p: embed(p) for p in lower.points}
            try:
                found = pointed_isometric(lower, upper, hint=hint, step_budget=self.step_budget)
            except BudgetExceeded:
                found = None
            self._steps[k] = found is not None
            logger.debug("radius %d: levels %d -> %d isometric=%s", self.radius, k, k + 1, self._steps[k])
        return self._steps[k]


_certificates: dict[tuple, StabilizationCertificate] = {}
_certificates_lock = threading.Lock()


def stabilization_level(
    spec: PolygonSpec,
    xi: BasepointSeq,
    radius: int,
    mode: StabilityMode | str = StabilityMode.heuristic,
    *,
    window: int = conventions.PROBE_WINDOW,
    max_level: int = conventions.MAX_LEVEL,
    step_budget: int = conventions.ISOMETRY_STEP_BUDGET,
) -> StabilizationCertificate:
    """Least level M from which balls of ``radius`` around xi[k] stop changing.

    Heuristic mode requires pointed isometries B_k -> B_{k+1} for every
    k in [M, M + window]; certified mode also requires ``confined``.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    mode = StabilityMode(mode)
    xi = xi.normalized()
    key = (spec.r, xi, radius, mode, window)
    cached = _certificates.get(key)
    if cached is not None:
        return cached

    if radius == 0:
        cert = StabilizationCertificate(xi, 0, 1, window, mode)
    else:
        search = _Search(spec, xi, radius, step_budget)
        cert = None
        for level in range(1, max_level - window):
            if not all(search.step(k) for k in range(level, level + window + 1)):
                continue
            if mode is StabilityMode.certified and not confined(spec, xi, radius, level):
                continue
            cert = StabilizationCertificate(xi, radius, level, window, mode)
            break
        if cert is None:
            raise BudgetExceeded(
                f"no stabilization of radius {radius} found up to level {max_level}",
                suggestion="raise --max-level",
                largest_level=max_level,
            )
    logger.info("radius %d stabilizes at level %d (%s)", radius, cert.level, mode)
    with _certificates_lock:
        _certificates.setdefault(key, cert)
    return cert


def ball_at_level(spec: PolygonSpec, xi: BasepointSeq, radius: int, level: int) -> PointedBall:
    """B_level(xi[level], radius) with limit-vertex identities attached."""
    graph = build_level_graph(spec, level, BuildMode.implicit)
    found = ball(graph, canonical(spec, xi.prefix(level)), radius)
    identities = tuple(limit_vertex(spec, xi, p.canonical) for p in found.points)
    return PointedBall(found.center, found.radius, found.level, found.points, found.matrix, identities)


def stable_ball(
    spec: PolygonSpec,
    xi: BasepointSeq,
    radius: int,
    mode: StabilityMode | str = StabilityMode.heuristic,
    **search: int,
) -> PointedBall:
    cert = stabilization_level(spec, xi, radius, mode, **search)
    return ball_at_level(spec, xi, radius, cert.level)


# ---------------------------------------------------------------------------
# Dihedral equivariance
# ---------------------------------------------------------------------------


def reflection_predicted(spec: PolygonSpec) -> bool:
    """Letterwise reflections carry glued pairs to glued pairs iff 3f = 0 mod r."""
    return (3 * spec.f) % spec.r == 0


def _check_element(
    spec: PolygonSpec, k: int, sigma: DihedralElement, max_counterexamples: int
) -> EquivarianceEntry:
    r = spec.r

    def word(a: Address) -> str:
        return format_word(spec, a)

    edges_checked = classes_checked = 0
    edge_failures: list[list[str]] = []
    class_failures: list[ClassFailure] = []
    edges_ok = classes_ok = True
    for a in itertools.product(spec.alphabet, repeat=k):
        b = ((a[0] + 1) % r,) + a[1:]
        sa, sb = apply_dihedral(sigma, a), apply_dihedral(sigma, b)
        edges_checked += 1
        if canonical(spec, sb) not in neighbors(spec, k, canonical(spec, sa)):
            edges_ok = False
            if len(edge_failures) < max_counterexamples:
                edge_failures.append([word(a), word(b)])
        partner = gluing_partner(spec, a)
        if partner is None or partner < a:
            continue
        classes_checked += 1
        image_partner = gluing_partner(spec, sa)
        if image_partner != apply_dihedral(sigma, partner):
            classes_ok = False
            if len(class_failures) < max_counterexamples:
                class_failures.append(
                    ClassFailure(
                        pair=[word(a), word(partner)],
                        image=[word(sa), word(apply_dihedral(sigma, partner))],
                        image_partner=None if image_partner is None else word(image_partner),
                    )
                )
    return EquivarianceEntry(
        sigma=sigma.label,
        shift=sigma.shift,
        reflect=sigma.reflect,
        edges_preserved=edges_ok,
        classes_preserved=classes_ok,
        predicted=reflection_predicted(spec) if sigma.reflect else True,
        edges_checked=edges_checked,
        classes_checked=classes_checked,
        edge_failures=edge_failures,
        class_failures=class_failures,
    )


def dihedral_equivariance_check(
    spec: PolygonSpec,
    k: int,
    *,
    max_counterexamples: int = conventions.MAX_COUNTEREXAMPLES,
) -> EquivarianceReport:
    """Exhaustively test each letterwise group element on the edges and glued pairs of level ``k``."""
    if k < 2:
        raise ValueError("equivariance is checked from level 2 on")
    entries = [_check_element(spec, k, sigma, max_counterexamples) for sigma in dihedral_group(spec)]
    return EquivarianceReport(r=spec.r, k=k, entries=entries)


# ---------------------------------------------------------------------------
# Isomorphism experiments
# ---------------------------------------------------------------------------


def _compare(
    spec: PolygonSpec,
    xi: BasepointSeq,
    other: BasepointSeq,
    radius: int,
    label: str,
    *,
    relax: bool,
    step_budget: int,
    max_level: int,
) -> GeometricEntry:
    left = stable_ball(spec, xi, radius, max_level=max_level, step_budget=step_budget)
    right = stable_ball(spec, other, radius, max_level=max_level, step_budget=step_budget)
    sizes = [len(left), len(right)]
    try:
        if pointed_isometric(left, right, step_budget=step_budget) is not None:
            return GeometricEntry(radius=radius, compared_with=label, pointed=True, isometric=True, sizes=sizes)
        if not relax:
            return GeometricEntry(radius=radius, compared_with=label, pointed=True, isometric=False, sizes=sizes)
        found = pointed_isometric(left, right, pointed=False, step_budget=step_budget)
    except BudgetExceeded:
        return GeometricEntry(radius=radius, compared_with=label, pointed=not relax, isometric=None, sizes=sizes)
    return GeometricEntry(
        radius=radius, compared_with=label, pointed=False, isometric=found is not None, sizes=sizes
    )


def iso_check_theorem(
    spec: PolygonSpec,
    xi: BasepointSeq,
    eta: BasepointSeq,
    max_radius: int,
    *,
    max_level: int = conventions.MAX_LEVEL,
    step_budget: int = conventions.ISOMETRY_STEP_BUDGET,
) -> IsoVerdict:
    """Compare the group-and-cofinality criterion with ball evidence up to ``max_radius``.

    When some sigma makes eta cofinal with sigma(xi), the balls around xi are
    compared with the balls around sigma(xi), the image of the basepoint and
    a vertex of eta's limit graph. Otherwise the balls around xi and eta are
    compared, falling back to an unpointed search when the pointed one fails.
    """
    reflections_ok = reflection_predicted(spec)
    algebraic = AlgebraicSide(found=False, reflections_equivariant=reflections_ok)
    target: BasepointSeq | None = None
    for tried, sigma in enumerate(dihedral_group(spec), start=1):
        ok, n = cofinal(eta, apply_dihedral(sigma, xi))
        algebraic.sigmas_tried = tried
        if ok:
            algebraic.found = True
            algebraic.sigma = sigma.label
            algebraic.n = n
            target = apply_dihedral(sigma, xi)
            if sigma.reflect and not reflections_ok:
                logger.warning(
                    "reflection %s found for r=%d, where reflections do not preserve glued pairs",
                    sigma.label,
                    spec.r,
                )
            break

    geometric: list[GeometricEntry] = []
    for radius in range(1, max_radius + 1):
        if target is not None:
            entry = _compare(
                spec, xi, target, radius, "sigma(xi)",
                relax=False, step_budget=step_budget, max_level=max_level,
            )
        else:
            entry = _compare(
                spec, xi, eta, radius, "eta",
                relax=True, step_budget=step_budget, max_level=max_level,
            )
        geometric.append(entry)

    if algebraic.found:
        agreement = all(e.isometric for e in geometric)
        verdict = Verdict.isomorphic
    else:
        agreement = True
        differs = any(e.isometric is False for e in geometric)
        verdict = Verdict.non_isomorphic if differs else Verdict.inconclusive
    return IsoVerdict(
        r=spec.r,
        xi=xi.text(spec.r),
        eta=eta.text(spec.r),
        algebraic=algebraic,
        geometric=geometric,
        agreement=agreement,
        verdict=verdict,
    )
