"""Horofunction experiments at a basepoint xi = w . j^inf.

Probes are finite samples (t, v) of candidate rays with d(xi, v) = t. A
probe induces a horofunction restricted to a stable ball around xi plus a
few frame gluing vertices farther out; two probes describe different
boundary points as soon as their restrictions differ at one of them. The
census runs the two gluing rays, the antipodal sequence and its shifts,
and records every claim with the evidence that backs it.
"""

from __future__ import annotations

import functools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum

from . import conventions
from .construction import BuildMode, build_level_graph
from .core import BasepointSeq, PolygonSpec, VertexId, canonical, corner, members
from .errors import (
    InternalInvariantError,
    NoAntipodalPoint,
    NotStabilized,
    ProfileMismatch,
    UnsupportedBasepoint,
)
from .limit import LimitVertex, StabilityMode, basepoint, limit_distance, limit_vertex, stable_ball
from .metric import GeodesicPath, PointedBall, canonical_geodesic, geodesics_between, gluing_span, hierarchical_dist
from .params import CensusParams
from .reports import (
    AlmostFailure,
    AntipodalEntry,
    BusemannEntry,
    CensusClaims,
    CensusReport,
    ProfileEntry,
    ShiftedEntry,
)

logger = logging.getLogger(__name__)


class Direction(StrEnum):
    up = "up"
    down = "down"


class Condition(StrEnum):
    geodesic = "geodesic"
    almost = "almost"
    weakly = "weakly"


def _require_constant_tail(spec: PolygonSpec, xi: BasepointSeq) -> None:
    if not xi.is_eventually_constant:
        raise UnsupportedBasepoint(xi.text(spec.r))


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------


def _glue(spec: PolygonSpec, m: int, i: int) -> VertexId:
    """Class joining copy i to copy i + 1 at level m."""
    return canonical(spec, corner(spec.up(i), m - 1) + (i,))


def _in_copies(spec: PolygonSpec, v: VertexId, copies: Iterable[int]) -> bool:
    allowed = set(copies)
    return any(a[-1] in allowed for a in members(spec, v))


@dataclass(frozen=True)
class HoleFrame:
    """Gluing vertices around the level-m hole, seen from the copy holding xi[m].

    ``span`` is d(b_up, b_down) and ``hole`` the length of the frame path
    from ``a`` to ``b`` through the antipodal copies.
    """

    m: int
    copy: int
    b_up: VertexId
    b_down: VertexId
    antipodal_copies: tuple[int, ...]
    a: VertexId
    b: VertexId
    span: int
    hole: int


def _antipodal_copies(spec: PolygonSpec, c: int) -> tuple[int, ...]:
    r = spec.r
    if spec.is_even:
        return ((c + r // 2) % r,)
    a1 = (c + r // 2) % r
    return (a1, (a1 + 1) % r)


def _frame_ends(spec: PolygonSpec, m: int, c: int) -> tuple[tuple[int, ...], VertexId, VertexId]:
    copies = _antipodal_copies(spec, c)
    r = spec.r
    first, last = copies[0], copies[-1]
    return copies, _glue(spec, m, last), _glue(spec, m, (first - 1) % r)


@functools.lru_cache(maxsize=256)
def frame_path(spec: PolygonSpec, xi: BasepointSeq, m: int, choice: int = 0) -> GeodesicPath:
    """Path from A to B through the antipodal copies of the level-m hole.

    For even r it is a geodesic of the level-m graph, the ``choice``-th one in
    lexicographic order; a ``choice`` past the last geodesic is a ValueError.
    For odd r it is the canonical geodesic from A to the shared gluing vertex
    followed by the canonical geodesic from there to B; each half stays in
    one copy.
    """
    if m < 2:
        raise ValueError("frames exist from level 2 on")
    c = xi.letter(m)
    copies, a, b = _frame_ends(spec, m, c)
    graph = build_level_graph(spec, m, BuildMode.implicit)
    if spec.is_even:
        candidates = geodesics_between(graph, a, b, max_count=choice + 1)
        if len(candidates) <= choice:
            raise ValueError(
                f"frame at m={m} has {len(candidates)} geodesic(s) from A to B; no choice {choice}"
            )
        path = candidates[choice]
        if not all(_in_copies(spec, v, copies) for v in path.vertices):
            raise InternalInvariantError(f"frame path at m={m} leaves the antipodal copy {copies[0]}")
        return path

    shared = _glue(spec, m, copies[0])
    first = canonical_geodesic(graph, a, shared)
    second = canonical_geodesic(graph, shared, b)
    if not all(_in_copies(spec, v, copies[-1:]) for v in first.vertices) or not all(
        _in_copies(spec, v, copies[:1]) for v in second.vertices
    ):
        raise InternalInvariantError(f"frame path at m={m} leaves the antipodal pair {copies}")
    return GeodesicPath(first.vertices + second.vertices[1:])


def frame(spec: PolygonSpec, xi: BasepointSeq, m: int) -> HoleFrame:
    if m < 2:
        raise ValueError("frames exist from level 2 on")
    c = xi.letter(m)
    copies, a, b = _frame_ends(spec, m, c)
    b_up = _glue(spec, m, c)
    b_down = canonical(spec, corner(spec.down(c), m - 1) + (c,))
    return HoleFrame(
        m=m,
        copy=c,
        b_up=b_up,
        b_down=b_down,
        antipodal_copies=copies,
        a=a,
        b=b,
        span=gluing_span(spec, m - 1),
        hole=frame_path(spec, xi, m).length,
    )


def _checked_midpoint(spec: PolygonSpec, xi: BasepointSeq, m: int, choice: int) -> VertexId:
    fr = frame(spec, xi, m)
    if spec.is_even:
        path = frame_path(spec, xi, m, choice)
        if path.length % 2:
            raise NoAntipodalPoint(spec.r, m, path.length)
        p = path.midpoint
    else:
        p = _glue(spec, m, fr.antipodal_copies[0])
    to_up = hierarchical_dist(spec, m, fr.b_up, p)
    to_down = hierarchical_dist(spec, m, fr.b_down, p)
    if to_up != to_down:
        raise InternalInvariantError(
            f"antipodal point at m={m} is not equidistant: d(bUp, p)={to_up}, d(bDown, p)={to_down}"
        )
    return p


def antipodal_point(spec: PolygonSpec, xi: BasepointSeq, m: int, *, choice: int = 0) -> LimitVertex:
    """Vertex of the level-m hole opposite the copy holding xi[m]."""
    return limit_vertex(spec, xi, _checked_midpoint(spec, xi, m, choice).canonical)


def frame_tilt(spec: PolygonSpec, xi: BasepointSeq, m: int) -> int:
    """d(xi, b_up) - d(xi, b_down) at level m.

    For xi = j^inf it is zero at every level when letterwise reflections
    preserve the gluing (3f = 0 mod r). Otherwise it can grow with m (1, 2,
    5, 13, 34 for r = 5), and then points equidistant from the two gluing
    vertices take the Busemann profile of the nearer one.
    """
    fr = frame(spec, xi, m)
    here = canonical(spec, xi.prefix(m))
    return hierarchical_dist(spec, m, here, fr.b_up) - hierarchical_dist(spec, m, here, fr.b_down)


@dataclass(frozen=True)
class Witness:
    """A frame gluing vertex added to profile domains, labelled like ``A4`` or ``bDown3``."""

    label: str
    vertex: LimitVertex


def frame_witnesses(
    spec: PolygonSpec, xi: BasepointSeq, depth: int, *, start: int = 2
) -> tuple[Witness, ...]:
    """A, B, b_up and b_down of the frames at levels start..depth.

    Shifted and Busemann profiles can agree on a whole ball around xi and
    still differ at these vertices.
    """
    found: list[Witness] = []
    for n in range(max(start, 2), depth + 1):
        fr = frame(spec, xi, n)
        for name, v in (("A", fr.a), ("B", fr.b), ("bUp", fr.b_up), ("bDown", fr.b_down)):
            found.append(Witness(f"{name}{n}", limit_vertex(spec, xi, v.canonical)))
    return tuple(found)


# ---------------------------------------------------------------------------
# Probes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RayProbe:
    """Samples (t, v) of a candidate ray with d(xi, v) = t; the first is (0, xi)."""

    spec: PolygonSpec
    base: BasepointSeq
    kind: str
    samples: tuple[tuple[int, LimitVertex], ...]
    levels: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.samples or self.samples[0][0] != 0:
            raise InternalInvariantError(f"{self.kind} probe must start at (0, xi)")
        times = self.times
        if any(s >= t for s, t in zip(times, times[1:])):
            raise InternalInvariantError(f"{self.kind} probe times are not increasing: {list(times)}")

    @property
    def times(self) -> tuple[int, ...]:
        return tuple(t for t, _ in self.samples)

    @property
    def vertices(self) -> tuple[LimitVertex, ...]:
        return tuple(v for _, v in self.samples)

    def __len__(self) -> int:
        return len(self.samples)


def _probe(
    spec: PolygonSpec,
    xi: BasepointSeq,
    kind: str,
    points: Sequence[tuple[int, LimitVertex]],
) -> RayProbe:
    base = basepoint(spec, xi)
    samples = [(0, base)]
    levels: list[int] = []
    for m, v in points:
        t = limit_distance(spec, base, v)
        if t <= samples[-1][0]:
            raise InternalInvariantError(f"{kind} sample at m={m} is not farther than the previous one")
        samples.append((t, v))
        levels.append(m)
    return RayProbe(spec, xi, kind, tuple(samples), tuple(levels))


def antipodal_sequence(
    spec: PolygonSpec, xi: BasepointSeq, levels: Iterable[int], *, choice: int = 0
) -> RayProbe:
    _require_constant_tail(spec, xi)
    points = [(m, antipodal_point(spec, xi, m, choice=choice)) for m in levels]
    return _probe(spec, xi, "antipodal", points)


def shifted_sequence(spec: PolygonSpec, xi: BasepointSeq, shift: int, levels: Iterable[int]) -> RayProbe:
    """Frame-path vertices at distance ``shift`` from each antipodal midpoint."""
    _require_constant_tail(spec, xi)
    points: list[tuple[int, LimitVertex]] = []
    for m in levels:
        path = frame_path(spec, xi, m)
        if path.length % 2:
            raise NoAntipodalPoint(spec.r, m, path.length)
        position = path.length // 2 + shift
        if not 0 < position < path.length:
            logger.warning("dropping level %d: shift %d leaves a frame path of length %d", m, shift, path.length)
            continue
        points.append((m, limit_vertex(spec, xi, path.at(position).canonical)))
    return _probe(spec, xi, f"shifted({shift})", points)


def _ray_start(spec: PolygonSpec, xi: BasepointSeq) -> int:
    return max(2, len(xi.preperiod) + 1)


def gluing_ray(spec: PolygonSpec, xi: BasepointSeq, direction: Direction | str, depth: int) -> RayProbe:
    """Geodesic from xi through the up (or down) gluing vertices of levels m0..depth.

    Samples every integer time. Waypoints before the first level from which
    distances add up along the chain are skipped with a warning.
    """
    _require_constant_tail(spec, xi)
    direction = Direction(direction)
    start_level = _ray_start(spec, xi)
    if depth < start_level:
        raise ValueError(f"ray depth must be at least {start_level}")

    graph = build_level_graph(spec, depth, BuildMode.implicit)
    origin = canonical(spec, xi.prefix(depth))

    def waypoint(m: int) -> VertexId:
        fr = frame(spec, xi, m)
        g = fr.b_up if direction is Direction.up else fr.b_down
        return canonical(spec, limit_vertex(spec, xi, g.canonical).address(depth))

    chain = [waypoint(m) for m in range(start_level, depth + 1)]
    reach = [hierarchical_dist(spec, depth, origin, g) for g in chain]
    first = len(chain) - 1
    while first > 0:
        step = hierarchical_dist(spec, depth, chain[first - 1], chain[first])
        if reach[first - 1] + step != reach[first]:
            break
        first -= 1
    if first > 0:
        logger.warning(
            "%s ray: gluing chain is additive only from level %d on", direction, start_level + first
        )

    path = [origin]
    for g in chain[first:]:
        path.extend(canonical_geodesic(graph, path[-1], g).vertices[1:])

    samples = []
    for t, v in enumerate(path):
        if hierarchical_dist(spec, depth, origin, v) != t:
            raise InternalInvariantError(f"{direction} ray is not geodesic at t={t}")
        samples.append((t, limit_vertex(spec, xi, v.canonical)))
    kind = "gluingUp" if direction is Direction.up else "gluingDown"
    return RayProbe(spec, xi, kind, tuple(samples))


# ---------------------------------------------------------------------------
# Horofunction profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HoroProfile:
    """d(y, v) - d(xi, v) at the tail samples v of a probe.

    ``values`` follow the ball points and ``witness_values`` the witnesses.
    """

    kind: str
    ball: PointedBall
    values: tuple[int, ...]
    stabilized_at: int
    witnesses: tuple[Witness, ...] = ()
    witness_values: tuple[int, ...] = ()

    def value(self, y: VertexId) -> int:
        return self.values[self.ball.index[y]]

    def at(self, label: str) -> int:
        for w, value in zip(self.witnesses, self.witness_values):
            if w.label == label:
                return value
        raise KeyError(label)

    def to_entry(self, spec: PolygonSpec) -> ProfileEntry:
        return ProfileEntry(
            kind=self.kind,
            ball=[v.text(spec) for v in self.ball.identities],
            values=list(self.values),
            stabilized_at=self.stabilized_at,
            witnesses={w.label: value for w, value in zip(self.witnesses, self.witness_values)},
        )


def horoprofile(
    spec: PolygonSpec,
    xi: BasepointSeq,
    probe: RayProbe,
    radius: int,
    *,
    witnesses: Sequence[Witness] = (),
    profile_window: int = conventions.PROFILE_WINDOW,
    mode: StabilityMode | str = StabilityMode.heuristic,
    **search: int,
) -> HoroProfile:
    ball = stable_ball(spec, xi, radius, mode, **search)
    base = basepoint(spec, xi)
    domain = (*ball.identities, *(w.vertex for w in witnesses))
    rows: list[tuple[int, ...]] = []
    for _, v in probe.samples:
        offset = limit_distance(spec, base, v)
        rows.append(tuple(limit_distance(spec, y, v) - offset for y in domain))

    stabilized_at = len(rows) - 1
    while stabilized_at > 0 and rows[stabilized_at - 1] == rows[-1]:
        stabilized_at -= 1
    if len(rows) - stabilized_at < profile_window:
        raise NotStabilized(probe.kind, len(rows))
    logger.debug("%s profile stable from sample %d of %d", probe.kind, stabilized_at, len(rows))
    size = len(ball.identities)
    tail = rows[-1]
    return HoroProfile(probe.kind, ball, tail[:size], stabilized_at, tuple(witnesses), tail[size:])


def profiles_distinct(p1: HoroProfile, p2: HoroProfile) -> LimitVertex | None:
    """Least ball point (canonical order) where the two profiles differ, else the first differing witness."""
    if p1.ball.level != p2.ball.level or p1.ball.points != p2.ball.points:
        raise ProfileMismatch(f"{p1.kind} and {p2.kind} profiles live on different balls")
    if p1.witnesses != p2.witnesses:
        raise ProfileMismatch(f"{p1.kind} and {p2.kind} profiles use different witnesses")
    differing = [y for y, a, b in zip(p1.ball.points, p1.values, p2.values) if a != b]
    if differing:
        return p1.ball.identities[p1.ball.index[min(differing)]]
    for w, a, b in zip(p1.witnesses, p1.witness_values, p2.witness_values):
        if a != b:
            return w.vertex
    return None


# ---------------------------------------------------------------------------
# Geodesic conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Defect:
    s: int
    t: int
    defect: int
    y: LimitVertex | None = None


@dataclass(frozen=True, eq=False)
class DefectReport:
    """Nonzero defects found among ``checked`` measurements."""

    condition: Condition
    checked: int
    defects: tuple[Defect, ...] = ()
    witness_n: dict[LimitVertex, int | None] = field(default_factory=dict)

    @property
    def max_defect(self) -> int:
        return max((d.defect for d in self.defects), default=0)

    @property
    def passed(self) -> bool:
        if self.condition is Condition.weakly:
            return all(n is not None for n in self.witness_n.values())
        return not self.defects


def test_geodesic(probe: RayProbe) -> DefectReport:
    """|d(v_t, v_s) - (t - s)| over every sampled pair."""
    spec, samples = probe.spec, probe.samples
    found: list[Defect] = []
    checked = 0
    for i, (s, u) in enumerate(samples):
        for t, v in samples[i + 1 :]:
            checked += 1
            defect = abs(limit_distance(spec, u, v) - (t - s))
            if defect:
                found.append(Defect(s, t, defect))
    return DefectReport(Condition.geodesic, checked, tuple(found))


def test_almost_geodesic(probe: RayProbe, n: int = 0) -> DefectReport:
    """|d(v_t, v_s) + d(v_s, v_0) - t| over sampled pairs with t > s >= n."""
    spec, samples = probe.spec, probe.samples
    origin = samples[0][1]
    found: list[Defect] = []
    checked = 0
    for i, (s, u) in enumerate(samples):
        if s < n:
            continue
        back = limit_distance(spec, u, origin)
        for t, v in samples[i + 1 :]:
            checked += 1
            defect = abs(limit_distance(spec, u, v) + back - t)
            if defect:
                found.append(Defect(s, t, defect))
    return DefectReport(Condition.almost, checked, tuple(found))


def almost_failures(probe: RayProbe, report: DefectReport | None = None) -> list[AlmostFailure]:
    """For each sample time N up to the penultimate, the worst pair with s >= N."""
    report = report or test_almost_geodesic(probe)
    failures = []
    for n in probe.times[:-1]:
        later = [d for d in report.defects if d.s >= n]
        if later:
            worst = max(later, key=lambda d: (d.defect, -d.s, -d.t))
            failures.append(AlmostFailure(n=n, s=worst.s, t=worst.t, defect=worst.defect))
    return failures


def _settle_time(times: Sequence[int], excess: Sequence[int]) -> int:
    """Least integer N such that the excess is constant on samples at times >= N."""
    i = len(excess) - 1
    while i > 0 and excess[i - 1] == excess[-1]:
        i -= 1
    return 0 if i == 0 else times[i - 1] + 1


def _weakly(
    probe: RayProbe, points: Sequence[LimitVertex], n_budget: int | None
) -> DefectReport:
    spec, times = probe.spec, probe.times
    if n_budget is None:
        n_budget = times[-2] if len(times) > 1 else 0
    found: list[Defect] = []
    witness_n: dict[LimitVertex, int | None] = {}
    for y in points:
        excess = [limit_distance(spec, v, y) - t for t, v in probe.samples]
        for (s, e_s), (t, e_t) in zip(zip(times, excess), zip(times[1:], excess[1:])):
            if e_t != e_s:
                found.append(Defect(s, t, abs(e_t - e_s), y))
        settle = _settle_time(times, excess)
        witness_n[y] = settle if settle <= n_budget else None
    checked = len(points) * max(len(times) - 1, 0)
    return DefectReport(Condition.weakly, checked, tuple(found), witness_n)


def test_weakly_geodesic(
    probe: RayProbe,
    ball: PointedBall,
    n_budget: int | None = None,
    *,
    witnesses: Sequence[Witness] = (),
) -> DefectReport:
    """Per ball point (and witness) y, the least N from which d(v_t, y) - t stops changing.

    ``n_budget`` defaults to the penultimate sample time, so a pass always
    rests on at least two agreeing samples.
    """
    return _weakly(probe, (*ball.identities, *(w.vertex for w in witnesses)), n_budget)


for _fn in (test_geodesic, test_almost_geodesic, test_weakly_geodesic):
    _fn.__test__ = False  # type: ignore[attr-defined]
del _fn


class SplitPattern(StrEnum):
    alternate = "alternate"
    up = "up"


def splitting_counterexample(
    spec: PolygonSpec,
    xi: BasepointSeq,
    n: int,
    levels: Iterable[int],
    pattern: SplitPattern | str = SplitPattern.alternate,
) -> DefectReport:
    """Weak-geodesy test at y = bUp_n of gluing vertices beyond level n.

    Alternating between bUp_m and bDown_m makes d(v, y) - d(v, xi) jump by
    d(bUp_n, bDown_n) - d(xi, bDown_n) + d(xi, bUp_n) at every step; the
    ``up`` pattern is the control that passes.
    """
    _require_constant_tail(spec, xi)
    pattern = SplitPattern(pattern)
    y = limit_vertex(spec, xi, frame(spec, xi, n).b_up.canonical)
    points = []
    for i, m in enumerate(m for m in levels if m > n):
        fr = frame(spec, xi, m)
        g = fr.b_up if pattern is SplitPattern.up or i % 2 == 0 else fr.b_down
        points.append((m, limit_vertex(spec, xi, g.canonical)))
    probe = _probe(spec, xi, "splitting", points)
    return _weakly(probe, [y], None)


# ---------------------------------------------------------------------------
# Census
# ---------------------------------------------------------------------------


def _distinctness(order: Sequence[str], profiles: dict[str, HoroProfile], spec: PolygonSpec) -> list[list[str | None]]:
    matrix: list[list[str | None]] = []
    for left in order:
        row: list[str | None] = []
        for right in order:
            witness = profiles_distinct(profiles[left], profiles[right])
            row.append(None if witness is None else witness.text(spec))
        matrix.append(row)
    return matrix


def boundary_census(
    spec: PolygonSpec,
    xi: BasepointSeq,
    params: CensusParams | None = None,
    *,
    mode: StabilityMode | str = StabilityMode.heuristic,
    profile_window: int = conventions.PROFILE_WINDOW,
    **search: int,
) -> CensusReport:
    """Gluing rays, the antipodal sequence and its shifts, with every claim checked.

    Profiles are compared on the stable ball of ``params.radius`` and on the
    frame witnesses up to ``params.effective_witness_depth()``.
    """
    _require_constant_tail(spec, xi)
    params = params or CensusParams()
    params.validate()
    levels = list(params.levels.levels())
    radius = params.radius

    anti_probe = antipodal_sequence(spec, xi, levels)
    tilts = [frame_tilt(spec, xi, m) for m in levels]
    if any(tilts):
        logger.warning(
            "census %s: d(xi, bUp) - d(xi, bDown) = %s; antipodal and shifted profiles may match a Busemann one",
            xi.text(spec.r),
            tilts,
        )
    witnesses = frame_witnesses(spec, xi, params.effective_witness_depth(), start=_ray_start(spec, xi))

    def profile(probe: RayProbe) -> HoroProfile:
        return horoprofile(
            spec, xi, probe, radius, witnesses=witnesses, profile_window=profile_window, mode=mode, **search
        )

    ball = stable_ball(spec, xi, radius, mode, **search)
    profiles: dict[str, HoroProfile] = {}
    order: list[str] = []

    busemann: list[BusemannEntry] = []
    geodesic_ok = True
    for direction in Direction:
        probe = gluing_ray(spec, xi, direction, params.ray_depth)
        geodesic = test_geodesic(probe)
        almost = test_almost_geodesic(probe)
        key = f"busemann-{direction}"
        profiles[key] = profile(probe)
        order.append(key)
        geodesic_ok = geodesic_ok and geodesic.passed
        busemann.append(
            BusemannEntry(
                direction=str(direction),
                samples=len(probe),
                geodesic_defects=len(geodesic.defects),
                almost_defects=len(almost.defects),
                profile_id=key,
            )
        )
    logger.info("census %s: gluing rays done", xi.text(spec.r))

    anti_weak = test_weakly_geodesic(anti_probe, ball, params.n_budget, witnesses=witnesses)
    failures = almost_failures(anti_probe)
    profiles["antipodal"] = profile(anti_probe)
    order.append("antipodal")
    antipodal = AntipodalEntry(
        levels=list(anti_probe.levels),
        weakly_n={y.text(spec): n for y, n in anti_weak.witness_n.items()},
        weakly_passed=anti_weak.passed,
        almost_failures=failures,
        almost_failed_everywhere=len(failures) == len(anti_probe.times) - 1,
        profile_id="antipodal",
    )

    shifted: list[ShiftedEntry] = []
    shift_keys: dict[int, str] = {}
    for t in params.shifts.shifts():
        probe = shifted_sequence(spec, xi, t, levels)
        weak = test_weakly_geodesic(probe, ball, params.n_budget, witnesses=witnesses)
        key = f"shift({t})"
        profiles[key] = profile(probe)
        order.append(key)
        shift_keys[t] = key
        shifted.append(ShiftedEntry(t=t, levels=list(probe.levels), weakly_passed=weak.passed, profile_id=key))
    logger.info("census %s: %d shifted probes done", xi.text(spec.r), len(shifted))

    def differ(a: str, b: str) -> bool:
        return profiles_distinct(profiles[a], profiles[b]) is not None

    rays = ("busemann-up", "busemann-down")
    shift_ids = list(shift_keys.values())
    claims = CensusClaims(
        two_geodesic_profiles=geodesic_ok,
        busemann_distinct=differ(*rays),
        antipodal_weakly=anti_weak.passed,
        antipodal_not_almost=antipodal.almost_failed_everywhere,
        antipodal_distinct_from_busemann=all(differ("antipodal", ray) for ray in rays),
        shifted_weakly=all(entry.weakly_passed for entry in shifted),
        shifted_pairwise_distinct=all(
            differ(a, b) for i, a in enumerate(shift_ids) for b in shift_ids[i + 1 :]
        ),
        shifted_distinct_from_busemann=all(differ(s, ray) for s in shift_ids for ray in rays),
        midpoint_matches_antipodal=0 not in shift_keys or not differ(shift_keys[0], "antipodal"),
    )
    return CensusReport(
        spec={"r": spec.r, "f": spec.f, "ftilde": spec.ftilde},
        xi=xi.text(spec.r),
        params={
            "levels": [params.levels.start, params.levels.stop],
            "radius": radius,
            "shifts": [params.shifts.low, params.shifts.high],
            "nBudget": params.n_budget,
            "rayDepth": params.ray_depth,
            "witnessDepth": params.effective_witness_depth(),
            "ballLevel": ball.level,
        },
        busemann=busemann,
        antipodal=antipodal,
        shifted=shifted,
        profile_order=order,
        distinctness=_distinctness(order, profiles, spec),
        profiles={key: p.to_entry(spec) for key, p in profiles.items()},
        witnesses={w.label: w.vertex.text(spec) for w in witnesses},
        tilts=tilts,
        claims=claims,
    )
