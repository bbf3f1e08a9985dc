import copy
import math
from functools import reduce

import numpy as np
import pytest

from vizcompose.config import Thresholds
from vizcompose.data_model import CompositeType, RelationshipKind, allowed_composites
from vizcompose.compose import DecomposeTrigger, JuxtaposeLayout, OverloadPlacement
from vizcompose.intent import (
    CandidateIntent,
    InteractionEvent,
    InvalidEvent,
    candidates,
    commit_on_release,
    hysteresis_gate,
    init_session,
    step,
)
from vizcompose.scene import Part, Pose, ViewSpec, rotation_about

from . import scenarios as sc


def grab(t, hand, view, part=None):
    return InteractionEvent(
        t=t, kind="grab", hand=hand, target=(view, part or Part.body())
    )


def move(t, hand, pos, rot=(0, 0, 0, 1), scale=1.0):
    return InteractionEvent(
        t=t, kind="move", hand=hand,
        pose=Pose(position=tuple(pos), rotation=tuple(rot), scale=scale),
    )


def tick(t):
    return InteractionEvent(t=t, kind="tick")


def release(t, hand):
    return InteractionEvent(t=t, kind="release", hand=hand)


def run(state, events):
    return reduce(step, events, state)


@pytest.fixture
def integrated_setup():
    protein = sc.cereal_measure_table("protein_t", "protein")
    calories = sc.cereal_measure_table("calories_t", "calories")
    line = ViewSpec(
        id="line", chart="linechart", table="protein_t",
        encodings={"value": "protein"}, half_extents=(0.25, 0.2, 0.01),
        pose=Pose(position=(0.0, 1.0, 0.0)),
    )
    bars = ViewSpec(
        id="cal-bars", chart="barchart", table="calories_t",
        encodings={"value": "calories"}, half_extents=(0.25, 0.2, 0.01),
        pose=Pose(position=(2.0, 1.0, 0.0)),
    )
    return init_session(
        {"protein_t": protein, "calories_t": calories}, [line, bars]
    )


@pytest.fixture
def superimposed_setup():
    states = sc.states_table()
    return init_session(
        {"states": states},
        [sc.map_view(), sc.density_bars(pose=Pose(position=(1.5, 0.8, 0.0)))],
    )


class TestStepBasics:
    def test_rigid_follow(self, integrated_setup):
        s0 = integrated_setup
        start = s0.views["line"].pose.position
        s = run(s0, [
            grab(0.0, "left", "line"),
            move(0.1, "left", np.asarray(start) + [0.5, 0, 0]),
            release(0.2, "left"),
        ])
        assert s.views["line"].pose.position == pytest.approx(
            (start[0] + 0.5, start[1], start[2])
        )

    def test_move_empty_hand(self, integrated_setup):
        with pytest.raises(InvalidEvent):
            step(integrated_setup, move(0.0, "left", (0, 0, 0)))

    def test_grab_busy_hand(self, integrated_setup):
        s = step(integrated_setup, grab(0.0, "left", "line"))
        with pytest.raises(InvalidEvent):
            step(s, grab(0.1, "left", "cal-bars"))

    def test_release_empty_hand(self, integrated_setup):
        with pytest.raises(InvalidEvent):
            step(integrated_setup, release(0.0, "right"))

    def test_time_regression(self, integrated_setup):
        s = step(integrated_setup, tick(1.0))
        with pytest.raises(InvalidEvent):
            step(s, tick(0.5))

    def test_unknown_view(self, integrated_setup):
        with pytest.raises(InvalidEvent):
            step(integrated_setup, grab(0.0, "left", "ghost"))

    def test_purity(self, integrated_setup):
        s0 = step(integrated_setup, grab(0.0, "left", "line"))
        snapshot = copy.deepcopy(s0)
        step(s0, move(0.1, "left", (0.4, 1.0, 0.0)))
        assert s0 == snapshot


class TestBimanualScaleRule:
    def test_double_separation_doubles_scale(self, integrated_setup):
        s0 = integrated_setup
        center = np.asarray(s0.views["line"].pose.position)
        base_scale = s0.views["line"].pose.scale
        s = run(s0, [
            grab(0.0, "left", "line"),
            grab(0.1, "right", "line"),
            # first separated move establishes the 0.2 m reference frame
            move(0.2, "left", center + [-0.2, 0, 0]),
            # doubling the separation doubles the view scale
            move(0.3, "left", center + [-0.4, 0, 0]),
        ])
        assert s.views["line"].pose.scale == pytest.approx(2 * base_scale)
        # view center is preserved by symmetric stretching about the midpoint
        assert s.views["line"].pose.position == pytest.approx(tuple(center))

    def test_unimanual_never_scales(self, integrated_setup):
        s0 = integrated_setup
        base_scale = s0.views["line"].pose.scale
        s = run(s0, [
            grab(0.0, "left", "line"),
            move(0.1, "left", (3.0, 2.0, 1.0)),
        ])
        assert s.views["line"].pose.scale == base_scale


class TestHysteresis:
    def test_band_membership(self):
        th = Thresholds()
        latched = frozenset()
        for gap, want in [(0.14, True), (0.16, True), (0.14, True)]:
            latched = hysteresis_gate(("a", "b"), gap, latched, th)
            assert (("a", "b") in latched) is want

    def test_break_threshold(self):
        th = Thresholds()
        latched = hysteresis_gate(("a", "b"), 0.14, frozenset(), th)
        latched = hysteresis_gate(("a", "b"), 0.20, latched, th)
        assert ("a", "b") not in latched

    def test_oscillation_single_transition(self):
        th = Thresholds()
        latched = frozenset()
        transitions = 0
        was = False
        for k in range(100):
            gap = 0.15 + (0.01 if k % 2 else -0.01)
            latched = hysteresis_gate(("a", "b"), gap, latched, th)
            now = ("a", "b") in latched
            if now != was:
                transitions += 1
            was = now
        assert transitions <= 1


class TestCandidates:
    def test_superimposed_top(self, superimposed_setup):
        s = run(superimposed_setup, [
            grab(0.0, "right", "bars"),
            move(0.1, "right", (0.0, 0.95, 0.0)),
            tick(0.2),
        ])
        ranked = candidates(s)
        assert ranked, "expected a candidate"
        top = ranked[0]
        assert top.type is CompositeType.SUPERIMPOSED
        assert top.context["host"] == "map"
        assert top.context["client"] == "bars"

    def test_integrated_over_juxtaposed(self, integrated_setup):
        s = run(integrated_setup, [
            grab(0.0, "left", "cal-bars"),
            move(0.1, "left", (0.75, 1.0, 0.0)),
            tick(0.2),
        ])
        ranked = candidates(s)
        assert ranked[0].type is CompositeType.INTEGRATED
        assert all(c.type is not CompositeType.JUXTAPOSED for c in ranked)

    def test_none_relationship_juxtaposed_only(self):
        states = sc.states_table()
        cereals = sc.cereals_table()
        a = sc.density_bars(view_id="a", pose=Pose(position=(0, 0, 0)))
        b = ViewSpec(
            id="b", chart="barchart", table="cereals",
            encodings={"value": "sugar"}, half_extents=(0.3, 0.2, 0.01),
            pose=Pose(position=(0.75, 0.0, 0.0)),
        )
        s = init_session({"states": states, "cereals": cereals}, [a, b])
        s = step(s, tick(0.1))
        ranked = candidates(s)
        assert [c.type for c in ranked] == [CompositeType.JUXTAPOSED]

    def test_nested_candidate(self):
        s = _nested_session()
        node = _node_world("p3")
        s = run(s, [
            grab(0.0, "left", "stats-bars", Part.element("p3")),
            move(0.1, "left", node),
            tick(0.2),
        ])
        ranked = candidates(s)
        assert ranked[0].type is CompositeType.NESTED
        assert ranked[0].constituents == ("graph", "stats-bars")
        assert ranked[0].context["seed"] == "p3"


def _nested_session():
    players, stats = sc.players_table(), sc.stats_table()
    return init_session(
        {"players": players, "stats": stats},
        [sc.graph_view(), sc.stats_bars()],
    )


def _node_world(key):
    for node in sc.graph_nodes():
        if node["key"] == key:
            return (node["pos"][0], node["pos"][1], 0.0)
    raise KeyError(key)


class TestCommitOnRelease:
    def test_integrated_commit(self, integrated_setup):
        s = run(integrated_setup, [
            grab(0.0, "left", "cal-bars"),
            move(0.1, "left", (0.75, 1.0, 0.0)),
            tick(0.2),
            release(0.3, "left"),
        ])
        assert len(s.commands) == 1
        assert s.commands[0].kind == "compose"
        spec = s.commands[0].spec
        assert spec.type is CompositeType.INTEGRATED
        assert set(spec.constituents) == {"line", "cal-bars"}
        assert spec.payload.segment_count() == len(sc.CEREAL_NAMES)

    def test_release_far_no_command(self, integrated_setup):
        s = run(integrated_setup, [
            grab(0.0, "left", "cal-bars"),
            move(0.1, "left", (5.0, 1.0, 0.0)),
            tick(0.2),
            release(0.3, "left"),
        ])
        assert s.commands == ()

    def test_superimposed_commit_then_lift_decompose(self, superimposed_setup):
        s = run(superimposed_setup, [
            grab(0.0, "right", "bars"),
            move(0.1, "right", (0.0, 0.95, 0.0)),
            tick(0.2),
            release(0.3, "right"),
        ])
        assert s.commands[-1].kind == "compose"
        spec = s.commands[-1].spec
        assert spec.type is CompositeType.SUPERIMPOSED
        assert len(spec.payload.entries) == 6
        # now lift one bar 0.25 m above its anchor
        entry = next(e for e in spec.payload.entries if e.client_item == "AZ")
        above = np.asarray(entry.target.position) + [0, 0.25, 0]
        s = run(s, [
            grab(0.4, "left", "bars", Part.element("AZ")),
            move(0.5, "left", above),
            release(0.6, "left"),
        ])
        assert s.commands[-1].kind == "decompose"
        assert s.commands[-1].trigger is DecomposeTrigger.LIFT_ELEMENT
        assert s.composites == {}
        assert s.views["bars"].pose.position == pytest.approx((0.0, 0.95, 0.0))

    def test_nested_commit(self):
        s = _nested_session()
        node = _node_world("p3")
        s = run(s, [
            grab(0.0, "left", "stats-bars", Part.element("p3")),
            move(0.1, "left", node),
            tick(0.2),
            release(0.3, "left"),
        ])
        assert s.commands[-1].kind == "compose"
        spec = s.commands[-1].spec
        assert spec.type is CompositeType.NESTED
        assert len(spec.payload.placements) == 5
        assert spec.payload.placements[0].host_element == "p3"
        # the mini chart is absorbed
        assert "stats-bars#p3" not in s.views

    def test_nested_drag_out_decompose(self):
        s = _nested_session()
        node = _node_world("p2")
        s = run(s, [
            grab(0.0, "left", "stats-bars", Part.element("p2")),
            move(0.1, "left", node),
            tick(0.2),
            release(0.3, "left"),
        ])
        assert s.commands[-1].spec.type is CompositeType.NESTED
        s = run(s, [
            grab(0.4, "left", "stats-bars", Part.element("p2")),
            move(0.5, "left", (2.0, 0.0, 0.0)),
            release(0.6, "left"),
        ])
        assert s.commands[-1].kind == "decompose"
        assert s.commands[-1].trigger is DecomposeTrigger.DRAG_OUT
        assert s.views["stats-bars"].pose == sc.stats_bars().pose

    def test_integrated_separate_decompose(self, integrated_setup):
        s = run(integrated_setup, [
            grab(0.0, "left", "cal-bars"),
            move(0.1, "left", (0.75, 1.0, 0.0)),
            tick(0.2),
            release(0.3, "left"),
            grab(0.4, "left", "cal-bars"),
            move(0.5, "left", (3.0, 1.0, 0.0)),
            tick(0.6),
            release(0.7, "left"),
        ])
        kinds = [c.kind for c in s.commands]
        assert kinds == ["compose", "decompose"]
        assert s.commands[-1].trigger is DecomposeTrigger.SEPARATE


class TestOverloadedFlow:
    def test_spread_compose_close(self):
        table = sc.cereals_table()
        pcp = sc.cereal_pcp()
        s = init_session({"cereals": table}, [pcp])
        xs = [-0.45, -0.15, 0.15, 0.45]
        s = run(s, [
            grab(0.0, "left", "pcp", Part.pcp_axis(0)),
            grab(0.1, "right", "pcp", Part.pcp_axis(1)),
            move(0.2, "right", (0.05, 0.0, 0.0)),  # gap 0.5 > 1.5 * 0.3
            tick(0.3),
        ])
        assert ("pcp", 0) in s.active_regions
        scatter_id = "pcp-scatter-0-1"
        assert scatter_id in s.views
        s = run(s, [
            release(0.4, "right"),
            release(0.5, "left"),
            grab(0.6, "left", scatter_id),
            move(0.7, "left", (-0.3, 0.0, 0.0)),
            tick(0.8),
            release(0.9, "left"),
        ])
        assert s.commands[-1].kind == "compose"
        spec = s.commands[-1].spec
        assert spec.type is CompositeType.OVERLOADED
        assert isinstance(spec.payload, OverloadPlacement)
        assert len(spec.payload.scatter_points) == len(table.rows)
        # close the axes to decompose
        s = run(s, [
            grab(1.0, "left", "pcp", Part.pcp_axis(0)),
            grab(1.1, "right", "pcp", Part.pcp_axis(1)),
            move(1.2, "right", (-0.25, 0.0, 0.0)),  # gap 0.2 < default 0.3
            release(1.3, "right"),
        ])
        assert s.commands[-1].kind == "decompose"
        assert s.commands[-1].trigger is DecomposeTrigger.CLOSE_AXES


class TestPartitionFlow:
    def test_partition_commit_and_collapse(self):
        table = sc.cereals_table()
        view = sc.cereal_scatter()
        s = init_session({"cereals": table}, [view])
        handle = (-0.3, 0.25, 0.0)
        s = run(s, [
            grab(0.0, "left", "scatter", Part.axis_handle("y")),
            move(0.1, "left", (-0.3, 0.25 + 0.5, 0.0)),  # 2 bin steps
            release(0.2, "left"),
        ])
        assert s.commands[-1].kind == "compose"
        spec = s.commands[-1].spec
        assert spec.type is CompositeType.JUXTAPOSED
        assert isinstance(spec.payload, JuxtaposeLayout)
        assert (spec.payload.bins_x, spec.payload.bins_y) == (1, 3)
        # drag the handle back to collapse
        s = run(s, [
            grab(0.3, "left", "scatter", Part.axis_handle("y")),
            move(0.4, "left", (-0.3, 0.2, 0.0)),  # negative drag
            release(0.5, "left"),
        ])
        assert s.commands[-1].kind == "decompose"
        assert s.commands[-1].trigger is DecomposeTrigger.COLLAPSE_HANDLE
        assert s.composites == {}

    def test_bimanual_expand(self):
        table = sc.cereals_table()
        view = sc.cereal_scatter()
        s = init_session({"cereals": table}, [view])
        s = run(s, [
            grab(0.0, "left", "scatter", Part.axis_handle("x")),
            grab(0.1, "right", "scatter", Part.axis_handle("y")),
            move(0.2, "left", (0.3 + 0.65, -0.25, 0.0)),  # past one x axis length
            move(0.3, "right", (-0.3, 0.25 + 0.55, 0.0)),  # past one y axis length
            release(0.4, "left"),
        ])
        assert s.commands[-1].kind == "compose"
        layout = s.commands[-1].spec.payload
        assert layout.mode == "expansion"
        assert (layout.bins_x, layout.bins_y) == (2, 2)
        # the other hand was force-released with the source absorbed
        assert s.hands["right"] is None


class TestDeterminism:
    def test_replay_twice_identical(self, superimposed_setup):
        events = [
            grab(0.0, "right", "bars"),
            move(0.1, "right", (0.0, 0.95, 0.0)),
            tick(0.2),
            release(0.3, "right"),
        ]
        s1 = run(superimposed_setup, events)
        s2 = run(superimposed_setup, events)
        assert s1 == s2
        assert s1.commands == s2.commands

    def test_commands_bounded_by_releases(self, integrated_setup):
        events = [
            grab(0.0, "left", "cal-bars"),
            move(0.1, "left", (0.75, 1.0, 0.0)),
            tick(0.2),
            release(0.3, "left"),
            grab(0.4, "right", "line"),
            move(0.5, "right", (0.1, 1.0, 0.0)),
            release(0.6, "right"),
        ]
        s = run(integrated_setup, events)
        releases = sum(1 for e in events if e.kind == "release")
        assert len(s.commands) <= releases
