"""Tests for hole frames, ray probes, horofunction profiles, defect testers and the census."""

from __future__ import annotations

import itertools
import logging

import pytest

from sierpoly import boundary
from sierpoly.boundary import (
    Direction,
    SplitPattern,
    antipodal_point,
    antipodal_sequence,
    frame,
    frame_path,
    frame_tilt,
    frame_witnesses,
    gluing_ray,
    horoprofile,
    profiles_distinct,
    shifted_sequence,
    splitting_counterexample,
)
from sierpoly.construction import BuildMode, build_level_graph
from sierpoly.core import BasepointSeq, PolygonSpec, canonical, make_spec, members
from sierpoly.errors import NoAntipodalPoint, ProfileMismatch, UnsupportedBasepoint
from sierpoly.limit import basepoint, limit_distance, limit_vertex
from sierpoly.metric import geodesics_between, hierarchical_dist
from sierpoly.params import CensusParams, LevelRange, ShiftRange

FOUR = BasepointSeq.constant(4)
ZERO = BasepointSeq.constant(0)


def labels(spec: PolygonSpec, v) -> set[str]:
    return {"".join(map(str, a)) for a in members(spec, v)}


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------


class TestFrame:
    def test_hexagon_level_two(self, spec6: PolygonSpec) -> None:
        fr = frame(spec6, FOUR, 2)
        assert fr.copy == 4
        assert labels(spec6, fr.b_up) == {"04", "35"}
        assert labels(spec6, fr.b_down) == {"24", "53"}
        assert fr.antipodal_copies == (1,)
        assert labels(spec6, fr.a) == {"31", "02"}
        assert labels(spec6, fr.b) == {"51", "20"}

    def test_span_and_hole(self, spec6: PolygonSpec) -> None:
        fr = frame(spec6, FOUR, 3)
        assert fr.span == hierarchical_dist(spec6, 3, fr.b_up, fr.b_down)
        assert fr.hole == hierarchical_dist(spec6, 3, fr.a, fr.b)

    def test_pentagon_antipodal_pair(self, spec5: PolygonSpec) -> None:
        fr = frame(spec5, ZERO, 2)
        assert fr.copy == 0
        assert fr.antipodal_copies == (2, 3)

    def test_depends_only_on_the_mth_letter(self, spec6: PolygonSpec) -> None:
        other = BasepointSeq.of((1, 2), (4,))
        assert frame(spec6, other, 3) == frame(spec6, FOUR, 3)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_even_hole_has_even_length(self, spec6: PolygonSpec, m: int) -> None:
        assert frame_path(spec6, FOUR, m).length % 2 == 0

    def test_needs_level_two(self, spec6: PolygonSpec) -> None:
        with pytest.raises(ValueError):
            frame(spec6, FOUR, 1)


class TestAntipodalPoint:
    def test_hexagon_midpoint(self, spec6: PolygonSpec) -> None:
        p = antipodal_point(spec6, FOUR, 2)
        assert p == limit_vertex(spec6, FOUR, (4, 1))
        fr = frame(spec6, FOUR, 2)
        here = p.address(2)
        assert hierarchical_dist(spec6, 2, fr.b_up, here) == hierarchical_dist(spec6, 2, fr.b_down, here) == 5

    def test_pentagon_shared_gluing_vertex(self, spec5: PolygonSpec) -> None:
        p = antipodal_point(spec5, ZERO, 2)
        assert labels(spec5, canonical(spec5, p.address(2))) == {"42", "23"}

    @pytest.mark.parametrize(("r", "j"), [(3, 0), (5, 0), (6, 4), (7, 2)])
    def test_equidistant_at_every_level(self, r: int, j: int) -> None:
        spec = make_spec(r)
        xi = BasepointSeq.constant(j)
        for m in range(2, 5):
            p = antipodal_point(spec, xi, m)
            fr = frame(spec, xi, m)
            assert hierarchical_dist(spec, m, fr.b_up, p.address(m)) == hierarchical_dist(
                spec, m, fr.b_down, p.address(m)
            )

    def test_odd_hole_has_no_midpoint(self) -> None:
        spec10 = make_spec(10)
        one = BasepointSeq.constant(1)
        assert frame_path(spec10, one, 2).length == 3
        with pytest.raises(NoAntipodalPoint, match="r=10"):
            antipodal_point(spec10, one, 2)
        with pytest.raises(NoAntipodalPoint):
            shifted_sequence(spec10, one, 0, range(2, 4))
        with pytest.raises(NoAntipodalPoint):
            boundary.boundary_census(spec10, one, CensusParams(levels=LevelRange(2, 4), ray_depth=4))

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_hexagon_frame_geodesic_is_unique(self, spec6: PolygonSpec, m: int) -> None:
        fr = frame(spec6, FOUR, m)
        graph = build_level_graph(spec6, m, BuildMode.implicit)
        assert len(geodesics_between(graph, fr.a, fr.b, max_count=2)) == 1
        with pytest.raises(ValueError, match="no choice 1"):
            antipodal_point(spec6, FOUR, m, choice=1)


class TestFrameTilt:
    def test_pentagon_tilt_grows(self, spec5: PolygonSpec) -> None:
        assert [frame_tilt(spec5, ZERO, m) for m in range(2, 6)] == [1, 2, 5, 13]

    @pytest.mark.parametrize(("r", "j"), [(3, 0), (6, 4)])
    def test_reflection_symmetric_frames_are_level(self, r: int, j: int) -> None:
        spec = make_spec(r)
        xi = BasepointSeq.constant(j)
        assert [frame_tilt(spec, xi, m) for m in range(2, 6)] == [0, 0, 0, 0]


class TestFrameWitnesses:
    def test_labels(self, spec6: PolygonSpec) -> None:
        found = frame_witnesses(spec6, FOUR, 3)
        assert [w.label for w in found] == ["A2", "B2", "bUp2", "bDown2", "A3", "B3", "bUp3", "bDown3"]
        assert found[2].vertex == limit_vertex(spec6, FOUR, frame(spec6, FOUR, 2).b_up.canonical)

    def test_start_skips_early_levels(self, spec6: PolygonSpec) -> None:
        found = frame_witnesses(spec6, FOUR, 4, start=3)
        assert found[0].label == "A3"
        assert len(found) == 8

    def test_up_ray_values_at_its_own_gluing_vertices(self, spec6: PolygonSpec) -> None:
        found = frame_witnesses(spec6, FOUR, 3)
        up = horoprofile(spec6, FOUR, gluing_ray(spec6, FOUR, Direction.up, 5), 1, witnesses=found)
        base = basepoint(spec6, FOUR)
        for w in found:
            if w.label.startswith("bUp"):
                assert up.at(w.label) == -limit_distance(spec6, base, w.vertex)

    def test_unknown_label(self, spec6: PolygonSpec) -> None:
        up = horoprofile(spec6, FOUR, gluing_ray(spec6, FOUR, Direction.up, 4), 1)
        with pytest.raises(KeyError):
            up.at("bUp2")

    def test_mismatched_witnesses(self, spec6: PolygonSpec) -> None:
        ray = gluing_ray(spec6, FOUR, Direction.up, 5)
        bare = horoprofile(spec6, FOUR, ray, 1)
        wide = horoprofile(spec6, FOUR, ray, 1, witnesses=frame_witnesses(spec6, FOUR, 3))
        with pytest.raises(ProfileMismatch, match="witnesses"):
            profiles_distinct(bare, wide)


# ---------------------------------------------------------------------------
# Probes
# ---------------------------------------------------------------------------


class TestGluingRay:
    def test_hand_checked_distances(self, spec6: PolygonSpec) -> None:
        assert hierarchical_dist(spec6, 2, (4, 4), (0, 4)) == 2
        assert hierarchical_dist(spec6, 2, (4, 4), (0, 0)) == 6
        assert hierarchical_dist(spec6, 2, (4, 4), (2, 2)) == 6

    @pytest.mark.parametrize("direction", list(Direction))
    def test_rays_are_geodesic(self, spec6: PolygonSpec, direction: Direction) -> None:
        ray = gluing_ray(spec6, FOUR, direction, 4)
        assert ray.samples[0] == (0, basepoint(spec6, FOUR))
        assert ray.times == tuple(range(len(ray)))
        report = boundary.test_geodesic(ray)
        assert report.passed
        assert report.max_defect == 0
        assert report.checked == len(ray) * (len(ray) - 1) // 2

    def test_up_ray_passes_every_up_gluing_vertex(self, spec6: PolygonSpec) -> None:
        ray = gluing_ray(spec6, FOUR, Direction.up, 4)
        for m in range(2, 5):
            g = limit_vertex(spec6, FOUR, frame(spec6, FOUR, m).b_up.canonical)
            assert g in ray.vertices

    def test_rays_diverge(self, spec6: PolygonSpec) -> None:
        up = gluing_ray(spec6, FOUR, Direction.up, 4)
        down = gluing_ray(spec6, FOUR, Direction.down, 4)
        far = min(len(up), len(down)) - 1
        assert limit_distance(spec6, up.vertices[far], down.vertices[far]) >= 2

    def test_preperiod_basepoint(self, spec6: PolygonSpec) -> None:
        xi = BasepointSeq.of((1, 3), (4,))
        ray = gluing_ray(spec6, xi, "up", 5)
        assert ray.samples[0][1] == basepoint(spec6, xi)
        assert boundary.test_geodesic(ray).passed

    def test_needs_constant_tail(self, spec6: PolygonSpec) -> None:
        with pytest.raises(UnsupportedBasepoint):
            gluing_ray(spec6, BasepointSeq.of((1,), (5, 4)), Direction.up, 4)


class TestAntipodalSequence:
    def test_times_increase_from_zero(self, spec6: PolygonSpec) -> None:
        probe = antipodal_sequence(spec6, FOUR, range(2, 6))
        assert probe.times[0] == 0
        assert list(probe.levels) == [2, 3, 4, 5]
        assert all(s < t for s, t in zip(probe.times, probe.times[1:]))
        for t, v in probe.samples:
            assert limit_distance(spec6, probe.samples[0][1], v) == t

    def test_needs_constant_tail(self, spec6: PolygonSpec) -> None:
        with pytest.raises(UnsupportedBasepoint):
            antipodal_sequence(spec6, BasepointSeq.of((), (4, 5)), range(2, 4))


class TestShiftedSequence:
    def test_shift_zero_reproduces_the_midpoints(self, spec6: PolygonSpec) -> None:
        shifted = shifted_sequence(spec6, FOUR, 0, range(2, 6))
        antipodal = antipodal_sequence(spec6, FOUR, range(2, 6))
        assert shifted.samples == antipodal.samples

    def test_shift_zero_odd(self, spec5: PolygonSpec) -> None:
        shifted = shifted_sequence(spec5, ZERO, 0, range(2, 5))
        antipodal = antipodal_sequence(spec5, ZERO, range(2, 5))
        assert shifted.samples == antipodal.samples

    def test_out_of_range_levels_are_dropped(self, spec6: PolygonSpec, caplog: pytest.LogCaptureFixture) -> None:
        with caplog.at_level(logging.WARNING, logger="sierpoly.boundary"):
            probe = shifted_sequence(spec6, FOUR, 1000, range(2, 4))
        assert len(probe) == 1
        assert "dropping level 2" in caplog.text

    def test_opposite_shifts_land_on_opposite_sides(self, spec6: PolygonSpec) -> None:
        plus = shifted_sequence(spec6, FOUR, 1, range(3, 5))
        minus = shifted_sequence(spec6, FOUR, -1, range(3, 5))
        assert plus.vertices[1:] != minus.vertices[1:]


# ---------------------------------------------------------------------------
# Profiles and defects
# ---------------------------------------------------------------------------


class TestHoroprofile:
    def test_profile_invariants(self, spec6: PolygonSpec) -> None:
        profile = horoprofile(spec6, FOUR, gluing_ray(spec6, FOUR, Direction.up, 4), 3)
        b = profile.ball
        assert profile.values[0] == 0
        for i, j in itertools.combinations(range(len(b)), 2):
            assert abs(profile.values[i] - profile.values[j]) <= b.matrix[i, j]
        for i in range(len(b)):
            assert profile.values[i] >= -b.matrix[0, i]

    def test_busemann_value_at_the_first_gluing_vertex(self, spec6: PolygonSpec) -> None:
        b_up = frame(spec6, FOUR, 2).b_up
        up = horoprofile(spec6, FOUR, gluing_ray(spec6, FOUR, Direction.up, 4), 2)
        down = horoprofile(spec6, FOUR, gluing_ray(spec6, FOUR, Direction.down, 4), 2)
        point = canonical(spec6, limit_vertex(spec6, FOUR, b_up.canonical).address(up.ball.level))
        assert up.value(point) == -2
        assert down.value(point) == 0
        assert profiles_distinct(up, down) is not None

    def test_profile_against_itself(self, spec6: PolygonSpec) -> None:
        profile = horoprofile(spec6, FOUR, gluing_ray(spec6, FOUR, Direction.down, 4), 2)
        assert profiles_distinct(profile, profile) is None

    def test_different_balls(self, spec6: PolygonSpec) -> None:
        ray = gluing_ray(spec6, FOUR, Direction.up, 4)
        with pytest.raises(ProfileMismatch):
            profiles_distinct(horoprofile(spec6, FOUR, ray, 1), horoprofile(spec6, FOUR, ray, 2))


class TestDefects:
    def test_gluing_ray_is_weakly_and_almost_geodesic(self, spec6: PolygonSpec) -> None:
        from sierpoly.limit import stable_ball

        ray = gluing_ray(spec6, FOUR, Direction.up, 4)
        assert boundary.test_almost_geodesic(ray).passed
        report = boundary.test_weakly_geodesic(ray, stable_ball(spec6, FOUR, 2))
        assert report.passed
        assert all(n is not None for n in report.witness_n.values())

    def test_alternating_split_fails(self, spec6: PolygonSpec) -> None:
        report = splitting_counterexample(spec6, FOUR, 2, range(2, 7))
        assert not report.passed
        assert report.max_defect >= 1
        (witness,) = report.witness_n
        assert witness == limit_vertex(spec6, FOUR, frame(spec6, FOUR, 2).b_up.canonical)

    def test_up_pattern_passes(self, spec6: PolygonSpec) -> None:
        report = splitting_counterexample(spec6, FOUR, 2, range(2, 7), SplitPattern.up)
        assert report.passed
        # only the step off xi itself changes the excess
        assert all(d.s == 0 for d in report.defects)

    def test_testers_are_not_collected(self) -> None:
        assert boundary.test_geodesic.__test__ is False
        assert boundary.test_weakly_geodesic.__test__ is False


# ---------------------------------------------------------------------------
# Census
# ---------------------------------------------------------------------------


class TestCensusParams:
    def test_validation(self) -> None:
        with pytest.raises(ValueError):
            CensusParams(levels=LevelRange(1, 4)).validate()
        with pytest.raises(ValueError):
            CensusParams(shifts=ShiftRange(2, 1)).validate()


@pytest.mark.slow
class TestCensus:
    """Desk-scale runs of the full boundary census."""

    def test_hexagon(self, spec6: PolygonSpec) -> None:
        report = boundary.boundary_census(spec6, FOUR, CensusParams())
        assert report.claims.all_hold, report.claims
        assert len(report.busemann) == 2
        assert all(entry.geodesic_defects == 0 for entry in report.busemann)
        assert len(report.shifted) == 7
        assert report.antipodal.almost_failed_everywhere
        assert report.tilts == [0] * 6
        assert len(report.witnesses) == 12

    def test_busemann_profiles_on_radius_eight(self, spec6: PolygonSpec) -> None:
        up = horoprofile(spec6, FOUR, gluing_ray(spec6, FOUR, Direction.up, 7), 8)
        down = horoprofile(spec6, FOUR, gluing_ray(spec6, FOUR, Direction.down, 7), 8)
        assert profiles_distinct(up, down) is not None

    def test_profile_stability(self, spec6: PolygonSpec) -> None:
        short = horoprofile(spec6, FOUR, antipodal_sequence(spec6, FOUR, range(2, 6)), 3)
        longer = horoprofile(spec6, FOUR, antipodal_sequence(spec6, FOUR, range(2, 8)), 3)
        assert short.values == longer.values

    def test_far_shift_separates_from_busemann_outside_the_ball(self, spec6: PolygonSpec) -> None:
        found = frame_witnesses(spec6, FOUR, 4)
        up = horoprofile(spec6, FOUR, gluing_ray(spec6, FOUR, Direction.up, 7), 2, witnesses=found)
        far = horoprofile(spec6, FOUR, shifted_sequence(spec6, FOUR, 3, range(2, 8)), 2, witnesses=found)
        assert far.values == up.values
        assert far.at("bDown4") != up.at("bDown4")
        assert profiles_distinct(far, up) is not None

    def test_triangle(self, spec3: PolygonSpec) -> None:
        params = CensusParams(levels=LevelRange(2, 9), radius=6, ray_depth=8)
        report = boundary.boundary_census(spec3, ZERO, params)
        assert report.claims.all_hold, report.claims
        assert not any(report.tilts)

    def test_pentagon_equidistant_points_follow_the_nearer_gluing_vertex(self, spec5: PolygonSpec) -> None:
        params = CensusParams(
            levels=LevelRange(2, 6), radius=3, shifts=ShiftRange(-2, 2), ray_depth=5, witness_depth=2
        )
        report = boundary.boundary_census(spec5, ZERO, params)
        assert report.tilts == [1, 2, 5, 13, 34]
        assert report.claims.two_geodesic_profiles
        assert report.claims.busemann_distinct
        order = report.profile_order
        assert report.distinctness[order.index("antipodal")][order.index("busemann-down")] is None
        assert not report.claims.antipodal_distinct_from_busemann

    def test_preperiod_matches_constant_basepoint(self, spec6: PolygonSpec) -> None:
        params = CensusParams(levels=LevelRange(3, 7), radius=4, shifts=ShiftRange(-1, 1), ray_depth=6)
        shifted = boundary.boundary_census(spec6, BasepointSeq.of((1, 3), (4,)), params)
        plain = boundary.boundary_census(spec6, FOUR, params)
        assert shifted.claims == plain.claims
        assert shifted.profile_order == plain.profile_order
        common = [label for label in shifted.witnesses if label in plain.witnesses]
        assert common == [f"{name}{n}" for n in (3, 4) for name in ("A", "B", "bUp", "bDown")]
        for key in plain.profile_order:
            moved = shifted.profiles[key].witnesses
            fixed = plain.profiles[key].witnesses
            assert {x: moved[x] - moved["bUp3"] for x in common} == {x: fixed[x] - fixed["bUp3"] for x in common}
