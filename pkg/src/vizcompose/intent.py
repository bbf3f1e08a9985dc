"""Event-sourced session state machine.

Events (grab / move / release / tick) drive a pure transition function:
ticks recompute induced relations and preview candidates, releases are
the only moments a composition or decomposition commits. State is a
value; identical manifests and event prefixes always produce identical
states and command logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .config import Thresholds
from .data_model import (
    CompositeType,
    DataTable,
    Relationship,
    RelationshipKind,
    allowed_composites,
)
from . import compose as ops
from .compose import CompositeSpec, DecomposeTrigger, JuxtaposeLayout
from .scene import (
    BODY,
    InducedRelations,
    Part,
    Pose,
    ViewSpec,
    compose_rotations,
    induced_relations,
    obb_of,
    pcp_axis_positions,
    pcp_default_gap,
    rotation_about,
)

Vec3 = tuple[float, float, float]

HANDS = ("left", "right")


class InvalidEvent(Exception):
    pass


@dataclass(frozen=True)
class InteractionEvent:
    t: float
    kind: str  # grab | move | release | tick
    hand: str | None = None
    target: tuple[str, Part] | None = None  # grab only
    pose: Pose | None = None  # move only

    def __post_init__(self):
        if self.kind not in ("grab", "move", "release", "tick"):
            raise ValueError(f"unknown event kind {self.kind!r}")
        if self.kind in ("grab", "move", "release") and self.hand not in HANDS:
            raise ValueError(f"{self.kind} needs a hand")
        if self.kind == "grab" and self.target is None:
            raise ValueError("grab needs a target")
        if self.kind == "move" and self.pose is None:
            raise ValueError("move needs a pose")


@dataclass(frozen=True)
class HandState:
    view_id: str
    part: Part
    grab_point: Vec3
    view_pose_at_grab: Pose
    hand_pos: Vec3
    hand_rot: tuple[float, float, float, float]


@dataclass(frozen=True)
class BimanualRef:
    """Reference frame for two-handed body manipulation.

    Both grabs latch onto the body center, so the reference separation is
    established lazily at the first move that pulls the hands apart
    (``dist0`` stays 0 until then)."""

    view_id: str
    mid0: Vec3 = (0.0, 0.0, 0.0)
    dist0: float = 0.0
    dir0: Vec3 = (0.0, 0.0, 0.0)
    view_pose_ref: Pose = Pose()


@dataclass(frozen=True)
class CandidateIntent:
    type: CompositeType
    constituents: tuple[str, ...]
    rank: int
    admissible: bool
    context: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Command:
    kind: str  # compose | decompose
    spec: CompositeSpec | None = None
    composite_id: str | None = None
    trigger: DecomposeTrigger | None = None
    replaces: str | None = None
    force_release: str | None = None
    absorbed: tuple[str, ...] = ()


@dataclass(frozen=True)
class ReleaseContext:
    hand: str
    state: HandState
    other: HandState | None


@dataclass(frozen=True)
class SessionState:
    tables: dict
    relationships: dict  # (name, name) sorted -> Relationship
    thresholds: Thresholds
    views: dict  # id -> ViewSpec
    composites: dict = field(default_factory=dict)  # id -> CompositeSpec
    hands: dict = field(default_factory=lambda: {h: None for h in HANDS})
    bimanual: BimanualRef | None = None
    relations: InducedRelations = field(default_factory=InducedRelations)
    latched: frozenset = frozenset()
    active_regions: frozenset = frozenset()  # (pcp view id, left axis index)
    extracted: dict = field(default_factory=dict)  # mini id -> (source id, item)
    prev_positions: dict = field(default_factory=dict)  # id -> (t, position)
    t: float = 0.0
    counter: int = 0
    applied: int = 0
    commands: tuple = ()
    last_release: ReleaseContext | None = None

    def constituent_of(self, view_id: str) -> CompositeSpec | None:
        for spec in self.composites.values():
            if view_id in spec.constituents:
                return spec
        return None

    def relationship(self, table_a: str, table_b: str) -> Relationship:
        return self.relationships[tuple(sorted((table_a, table_b)))]

    def committed_specs(self) -> list[CompositeSpec]:
        return [c.spec for c in self.commands if c.kind == "compose"]


def init_session(
    tables: dict[str, DataTable],
    views: list[ViewSpec],
    declared: list[Relationship] = (),
    thresholds: Thresholds | None = None,
) -> SessionState:
    """Build the initial state: relationship table precomputed over every
    table pair (declared relationships win over inference)."""
    from .data_model import infer_relationship

    thresholds = thresholds or Thresholds()
    names = sorted(tables)
    rels = {}
    for i, a in enumerate(names):
        for b in names[i:]:
            rels[(a, b)] = infer_relationship(tables[a], tables[b])
    for rel in declared:
        rels[tuple(sorted((rel.table_a, rel.table_b)))] = rel
    view_map = {v.id: v for v in views}
    if len(view_map) != len(views):
        raise ValueError("duplicate view ids")
    state = SessionState(
        tables=dict(tables),
        relationships=rels,
        thresholds=thresholds,
        views=view_map,
        relations=induced_relations(view_map.values(), tables),
    )
    return state


def hysteresis_gate(
    pair: tuple[str, str],
    gap: float,
    latched: frozenset,
    thresholds: Thresholds | None = None,
) -> frozenset:
    """Dual-threshold latch: enter below tau_link, leave above the break
    threshold, hold anywhere between."""
    thresholds = thresholds or Thresholds()
    key = tuple(sorted(pair))
    if gap < thresholds.tau_link:
        return latched | {key}
    if gap > thresholds.tau_break:
        return latched - {key}
    return latched


def step(state: SessionState, event: InteractionEvent) -> SessionState:
    """Apply one event and return the successor state (input untouched)."""
    if event.t < state.t:
        raise InvalidEvent(f"time regression: {event.t} < {state.t}")
    state = replace(state, t=event.t, applied=state.applied + 1)
    if event.kind == "grab":
        return _apply_grab(state, event)
    if event.kind == "move":
        return _apply_move(state, event)
    if event.kind == "tick":
        return _apply_tick(state, event)
    return _apply_release(state, event)


# -- grab -------------------------------------------------------------


def _apply_grab(state: SessionState, event: InteractionEvent) -> SessionState:
    hand = event.hand
    if state.hands[hand] is not None:
        raise InvalidEvent(f"{hand} hand is already holding something")
    view_id, part = event.target
    view = state.views.get(view_id)
    if view is None:
        raise InvalidEvent(f"unknown view {view_id!r}")
    table = state.tables[view.table]

    # pulling a bar out of a free-standing bar chart detaches a mini chart
    if (
        part.kind == "element"
        and view.chart in ("barchart", "stackedbar")
        and state.constituent_of(view_id) is None
    ):
        mini = ops.extract_element(view, part.item, table)
        views = dict(state.views)
        views[mini.id] = mini
        extracted = dict(state.extracted)
        extracted[mini.id] = (view_id, part.item)
        hand_state = HandState(
            view_id=mini.id,
            part=BODY,
            grab_point=mini.pose.position,
            view_pose_at_grab=mini.pose,
            hand_pos=mini.pose.position,
            hand_rot=(0.0, 0.0, 0.0, 1.0),
        )
        hands = dict(state.hands)
        hands[hand] = hand_state
        return replace(state, views=views, extracted=extracted, hands=hands)

    grab_point = _grab_point(state, view, part, table)
    hand_state = HandState(
        view_id=view_id,
        part=part,
        grab_point=grab_point,
        view_pose_at_grab=view.pose,
        hand_pos=grab_point,
        hand_rot=(0.0, 0.0, 0.0, 1.0),
    )
    hands = dict(state.hands)
    hands[hand] = hand_state
    bimanual = state.bimanual
    other = state.hands[_other(hand)]
    if (
        part.kind == "body"
        and other is not None
        and other.view_id == view_id
        and other.part.kind == "body"
    ):
        bimanual = BimanualRef(view_id=view_id)
    return replace(state, hands=hands, bimanual=bimanual)


def _grab_point(state, view: ViewSpec, part: Part, table: DataTable) -> Vec3:
    """World point the hand latches onto; raises for unknown parts."""
    spec = state.constituent_of(view.id)
    if part.kind == "element" and spec is not None:
        placed = _placed_element_position(spec, view.id, part.item)
        if placed is not None:
            return placed
    try:
        box = obb_of(view, part, table)
    except Exception as err:
        raise InvalidEvent(f"{part.wire()} on {view.id!r}: {err}") from err
    return box.center


def _placed_element_position(spec: CompositeSpec, view_id, item) -> Vec3 | None:
    """Where a composited client's element actually sits (anchor or nest)."""
    if isinstance(spec.payload, ops.AnchorMap) and spec.payload.client == view_id:
        for entry in spec.payload.entries:
            if entry.client_item == item:
                return entry.target.position
    if isinstance(spec.payload, ops.NestPlacementSet) and spec.payload.client == view_id:
        for p in spec.payload.placements:
            if p.client_row == item:
                return p.target.position
    return None


def _other(hand: str) -> str:
    return "right" if hand == "left" else "left"


# -- move -------------------------------------------------------------


def _apply_move(state: SessionState, event: InteractionEvent) -> SessionState:
    hand = event.hand
    hs = state.hands[hand]
    if hs is None:
        raise InvalidEvent(f"{hand} hand is not holding anything")
    pose = event.pose
    hands = dict(state.hands)
    hands[hand] = replace(hs, hand_pos=pose.position, hand_rot=pose.rotation)
    state = replace(state, hands=hands)

    bim = state.bimanual
    if (
        bim is not None
        and hs.view_id == bim.view_id
        and _both_hold_body(state, bim.view_id)
    ):
        return _move_bimanual(state)
    if hs.part.kind == "body":
        return _move_unimanual(state, hand)
    return state  # handle / axis / element grabs track the hand only


def _both_hold_body(state: SessionState, view_id: str) -> bool:
    return all(
        h is not None and h.view_id == view_id and h.part.kind == "body"
        for h in state.hands.values()
    )


def _move_unimanual(state: SessionState, hand: str) -> SessionState:
    hs = state.hands[hand]
    view = state.views[hs.view_id]
    ref = hs.view_pose_at_grab
    rot_m = Pose(rotation=hs.hand_rot).matrix()
    offset = np.asarray(ref.position, float) - np.asarray(hs.grab_point, float)
    pos = np.asarray(hs.hand_pos, float) + rot_m @ offset
    new_pose = Pose(
        position=tuple(float(x) for x in pos),
        rotation=compose_rotations(hs.hand_rot, ref.rotation),
        scale=ref.scale,
    )
    views = dict(state.views)
    views[hs.view_id] = view.with_pose(new_pose)
    return replace(state, views=views)


def _move_bimanual(state: SessionState) -> SessionState:
    bim = state.bimanual
    left = np.asarray(state.hands["left"].hand_pos, float)
    right = np.asarray(state.hands["right"].hand_pos, float)
    dist = float(np.linalg.norm(right - left))
    if dist < 1e-9:
        return state
    mid = (left + right) / 2.0
    if bim.dist0 < 1e-9:
        # first separated move establishes the reference frame
        view = state.views[bim.view_id]
        return replace(
            state,
            bimanual=BimanualRef(
                view_id=bim.view_id,
                mid0=tuple(float(x) for x in mid),
                dist0=dist,
                dir0=tuple(float(x) for x in (right - left) / dist),
                view_pose_ref=view.pose,
            ),
        )
    factor = dist / bim.dist0
    q = _vector_rotation(bim.dir0, tuple((right - left) / dist))
    rot_m = Pose(rotation=q).matrix()
    ref = bim.view_pose_ref
    offset = np.asarray(ref.position, float) - np.asarray(bim.mid0, float)
    pos = mid + rot_m @ (offset * factor)
    new_pose = Pose(
        position=tuple(float(x) for x in pos),
        rotation=compose_rotations(q, ref.rotation),
        scale=ref.scale * factor,
    )
    views = dict(state.views)
    view = views[bim.view_id]
    views[bim.view_id] = view.with_pose(new_pose)
    return replace(state, views=views)


def _vector_rotation(u: Vec3, v: Vec3) -> tuple[float, float, float, float]:
    """Minimal-arc quaternion taking unit vector u to unit vector v."""
    a = np.asarray(u, float)
    b = np.asarray(v, float)
    d = float(np.clip(a @ b, -1.0, 1.0))
    if d > 1.0 - 1e-12:
        return (0.0, 0.0, 0.0, 1.0)
    if d < -1.0 + 1e-12:
        helper = np.array([1.0, 0.0, 0.0])
        if abs(a[0]) > 0.9:
            helper = np.array([0.0, 1.0, 0.0])
        axis = np.cross(a, helper)
        axis = axis / np.linalg.norm(axis)
        return rotation_about(tuple(axis), math.pi)
    axis = np.cross(a, b)
    axis = axis / np.linalg.norm(axis)
    return rotation_about(tuple(axis), math.acos(d))


# -- tick -------------------------------------------------------------


def _apply_tick(state: SessionState, event: InteractionEvent) -> SessionState:
    state = _refresh_relations(state, update_history=True)
    return _update_spread_regions(state)


def _refresh_relations(state: SessionState, update_history: bool) -> SessionState:
    rel = induced_relations(
        state.views.values(), state.tables, state.prev_positions, now=state.t
    )
    latched = state.latched
    for (a, b), pr in rel.pairs.items():
        latched = hysteresis_gate((a, b), pr.gap, latched, state.thresholds)
    # drop latches whose views disappeared
    latched = frozenset(
        p for p in latched if p[0] in state.views and p[1] in state.views
    )
    new = replace(state, relations=rel, latched=latched)
    if update_history:
        prev = {
            vid: (state.t, v.pose.position) for vid, v in state.views.items()
        }
        new = replace(new, prev_positions=prev)
    return new


def _held_axis_pair(state: SessionState):
    """(pcp view, left axis index, current hand gap) when the two hands
    hold adjacent axes of one pcp."""
    left, right = state.hands["left"], state.hands["right"]
    if left is None or right is None:
        return None
    if left.view_id != right.view_id:
        return None
    if left.part.kind != "pcp-axis" or right.part.kind != "pcp-axis":
        return None
    view = state.views.get(left.view_id)
    if view is None or view.chart != "pcp":
        return None
    i, j = sorted((left.part.index, right.part.index))
    if j != i + 1:
        return None
    axis_dir = view.pose.matrix()[:, 0]
    delta = np.asarray(right.hand_pos, float) - np.asarray(left.hand_pos, float)
    gap = abs(float(delta @ axis_dir))
    return view, i, gap


def _update_spread_regions(state: SessionState) -> SessionState:
    held = _held_axis_pair(state)
    if held is None:
        return state
    pcp, i, gap = held
    table = state.tables[pcp.table]
    key = (pcp.id, i)
    default = pcp_default_gap(pcp)
    regions = state.active_regions
    views = state.views
    if gap > state.thresholds.gamma_spread * default and key not in regions:
        regions = regions | {key}
        client = ops.spread_pcp_axes(pcp, i, gap, table, state.thresholds)
        if client is not None and client.id not in views:
            views = dict(views)
            views[client.id] = client
    elif gap < default and key in regions and not _region_composed(state, key):
        regions = regions - {key}
    if regions is state.active_regions and views is state.views:
        return state
    return replace(state, active_regions=regions, views=views)


def _region_composed(state: SessionState, key) -> bool:
    pcp_id, i = key
    for spec in state.composites.values():
        if (
            isinstance(spec.payload, ops.OverloadPlacement)
            and spec.payload.pcp_view == pcp_id
            and spec.payload.axis_pair[0] == i
        ):
            return True
    return False


# -- candidates -------------------------------------------------------

_PRECEDENCE = (
    CompositeType.NESTED,
    CompositeType.OVERLOADED,
    CompositeType.SUPERIMPOSED,
    CompositeType.INTEGRATED,
    CompositeType.JUXTAPOSED,
)


def candidates(state: SessionState) -> list[CandidateIntent]:
    """Admissible composition intents implied by the current geometry,
    ranked most-specific first."""
    found: list[tuple[int, tuple, CandidateIntent]] = []
    active = {
        vid: v for vid, v in state.views.items() if state.constituent_of(vid) is None
    }
    plain = {vid: v for vid, v in active.items() if vid not in state.extracted}

    _nested_candidates(state, active, found)
    _overloaded_candidates(state, active, found)
    _pair_candidates(state, plain, found)
    _join_candidates(state, plain, found)

    found.sort(key=lambda item: (item[0], item[1]))
    out = []
    for rank, (_, _, cand) in enumerate(found):
        out.append(replace(cand, rank=rank))
    return out


def _type_rank(ctype: CompositeType) -> int:
    return _PRECEDENCE.index(ctype)


def _nested_candidates(state, active, found):
    th = state.thresholds
    for client_id, client in active.items():
        source_id = state.extracted.get(client_id, (client_id, None))[0]
        source = state.views.get(source_id)
        if source is None or state.constituent_of(source_id) is not None:
            continue
        for host_id, host in active.items():
            if host_id in (client_id, source_id):
                continue
            if (client_id, host_id) not in state.relations.pairs and (
                host_id, client_id
            ) not in state.relations.pairs:
                continue
            pr = state.relations.pair(client_id, host_id)
            if not pr.colliding or pr.scale_ratio < th.sigma_hc:
                continue
            if host.radius() <= client.radius():
                continue  # host must be the larger view
            elems = state.relations.embedded_elements(client_id, host_id)
            if not elems:
                continue
            rel = state.relationship(host.table, source.table)
            if CompositeType.NESTED not in allowed_composites(rel.kind):
                continue
            cand = CandidateIntent(
                type=CompositeType.NESTED,
                constituents=(host_id, source_id),
                rank=0,
                admissible=True,
                context={
                    "host": host_id,
                    "seed": elems[0],
                    "client_view": client_id,
                },
            )
            found.append((_type_rank(CompositeType.NESTED), (host_id, client_id), cand))


def _overloaded_candidates(state, active, found):
    for (pcp_id, i) in sorted(state.active_regions):
        pcp = active.get(pcp_id)
        if pcp is None or _region_composed(state, (pcp_id, i)):
            continue
        axes = pcp.encodings.get("axes", [])
        region_box = pcp_region_obb(pcp, i)
        table = state.tables[pcp.table]
        for vid, view in active.items():
            if view.chart != "scatterplot" or vid == pcp_id:
                continue
            if view.encodings.get("x") != axes[i + 1] or view.encodings.get("y") != axes[i]:
                continue
            from .scene import collide

            if not collide(obb_of(view, BODY), region_box):
                continue
            rel = state.relationship(pcp.table, view.table)
            if CompositeType.OVERLOADED not in allowed_composites(rel.kind):
                continue
            cand = CandidateIntent(
                type=CompositeType.OVERLOADED,
                constituents=(pcp_id, vid),
                rank=0,
                admissible=True,
                context={"pcp": pcp_id, "region": i, "scatter": vid},
            )
            found.append((_type_rank(CompositeType.OVERLOADED), (pcp_id, vid, i), cand))


def pcp_region_obb(pcp: ViewSpec, i: int):
    """World box spanning the inter-axis rectangle (i, i+1)."""
    from .scene import _local_box

    xs = pcp_axis_positions(pcp)
    hy = pcp.half_extents[1]
    hz = pcp.half_extents[2]
    center = np.array([(xs[i] + xs[i + 1]) / 2.0, 0.0, 0.0])
    half = np.array([(xs[i + 1] - xs[i]) / 2.0, hy, hz])
    return _local_box(pcp, center, half)


def _pair_candidates(state, plain, found):
    th = state.thresholds
    ids = sorted(plain)
    for n, a_id in enumerate(ids):
        for b_id in ids[n + 1 :]:
            pr = state.relations.pairs.get((a_id, b_id))
            if pr is None:
                continue
            a, b = plain[a_id], plain[b_id]
            rel = state.relationship(a.table, b.table)
            allowed = allowed_composites(rel.kind)
            if (
                pr.colliding
                and pr.orientation >= th.theta_sup
                and abs(pr.vertical_offset) > 0
                and CompositeType.SUPERIMPOSED in allowed
            ):
                host, client = (a_id, b_id) if pr.vertical_offset > 0 else (b_id, a_id)
                cand = CandidateIntent(
                    type=CompositeType.SUPERIMPOSED,
                    constituents=(host, client),
                    rank=0,
                    admissible=True,
                    context={"host": host, "client": client},
                )
                found.append(
                    (_type_rank(CompositeType.SUPERIMPOSED), (a_id, b_id), cand)
                )
            if (
                not pr.colliding
                and (a_id, b_id) in state.latched
                and rel.kind is not RelationshipKind.NONE
                and CompositeType.INTEGRATED in allowed
            ):
                cand = CandidateIntent(
                    type=CompositeType.INTEGRATED,
                    constituents=(a_id, b_id),
                    rank=0,
                    admissible=True,
                    context={},
                )
                found.append(
                    (_type_rank(CompositeType.INTEGRATED), (a_id, b_id), cand)
                )
            if (
                not pr.colliding
                and pr.gap < th.tau_juxt
                and (
                    rel.kind is RelationshipKind.NONE
                    or CompositeType.INTEGRATED not in allowed
                )
            ):
                cand = CandidateIntent(
                    type=CompositeType.JUXTAPOSED,
                    constituents=(a_id, b_id),
                    rank=0,
                    admissible=True,
                    context={},
                )
                found.append(
                    (_type_rank(CompositeType.JUXTAPOSED), (a_id, b_id), cand)
                )


def _join_candidates(state, plain, found):
    """A free view latched near an integrated group can join it."""
    for vid, view in sorted(plain.items()):
        if vid in state.extracted:
            continue
        for spec in state.composites.values():
            if spec.type is not CompositeType.INTEGRATED:
                continue
            for cid in spec.constituents:
                partner = state.views.get(cid)
                if partner is None:
                    continue
                key = tuple(sorted((vid, cid)))
                pr = state.relations.pairs.get(key)
                if pr is None or pr.colliding or key not in state.latched:
                    continue
                rel = state.relationship(view.table, partner.table)
                if rel.kind is RelationshipKind.NONE:
                    continue
                cand = CandidateIntent(
                    type=CompositeType.INTEGRATED,
                    constituents=key,
                    rank=0,
                    admissible=True,
                    context={"join": spec.id},
                )
                found.append((_type_rank(CompositeType.INTEGRATED), key, cand))
                break  # one join candidate per (view, composite)


# -- release and commit ------------------------------------------------


def _apply_release(state: SessionState, event: InteractionEvent) -> SessionState:
    hand = event.hand
    hs = state.hands[hand]
    if hs is None:
        raise InvalidEvent(f"{hand} hand is not holding anything")
    other = state.hands[_other(hand)]
    ctx = ReleaseContext(hand=hand, state=hs, other=other)
    hands = dict(state.hands)
    hands[hand] = None
    bimanual = state.bimanual
    if bimanual is not None and bimanual.view_id == hs.view_id:
        bimanual = None
    state = replace(state, hands=hands, bimanual=bimanual, last_release=ctx)
    state = _refresh_relations(state, update_history=False)
    command = commit_on_release(state)
    if command is not None:
        state = _apply_command(state, command)
    return state


def commit_on_release(state: SessionState) -> Command | None:
    """Decide what the release that was just applied commits, if anything."""
    ctx = state.last_release
    if ctx is None:
        return None
    hs = ctx.state
    part = hs.part
    view = state.views.get(hs.view_id)
    if view is None:
        return None
    if part.kind in ("axis-x-handle", "axis-y-handle"):
        return _commit_handle(state, ctx, view)
    if part.kind == "pcp-axis":
        return _commit_pcp_axis(state, ctx, view)
    if part.kind == "element":
        return _commit_element(state, ctx, view)
    if part.kind == "body":
        return _commit_body(state, ctx, view)
    return None


def _signed_drag(view: ViewSpec, hs: HandState, axis: str) -> float:
    col = 0 if axis == "x" else 1
    direction = Pose(rotation=hs.view_pose_at_grab.rotation).matrix()[:, col]
    delta = np.asarray(hs.hand_pos, float) - np.asarray(hs.grab_point, float)
    return float(delta @ direction)


def _next_id(state: SessionState) -> str:
    return f"c{state.counter + 1}"


def _commit_handle(state, ctx, view) -> Command | None:
    axis = "x" if ctx.state.part.kind == "axis-x-handle" else "y"
    drag = _signed_drag(view, ctx.state, axis)
    table = state.tables[view.table]
    spec = state.constituent_of(view.id)
    th = state.thresholds
    if spec is not None and isinstance(spec.payload, JuxtaposeLayout):
        if spec.payload.mode == "proximity":
            return None
        try:
            new = ops.repartition(spec, axis, drag, table, th)
        except ops.NoSuchAxis:
            return None
        if new is None:
            return Command(
                kind="decompose",
                composite_id=spec.id,
                trigger=DecomposeTrigger.COLLAPSE_HANDLE,
            )
        new = replace(new, id=_next_id(state))
        return Command(kind="compose", spec=new, replaces=spec.id)
    if spec is not None:
        return None
    other = ctx.other
    bimanual_handles = (
        other is not None
        and other.view_id == view.id
        and other.part.kind in ("axis-x-handle", "axis-y-handle")
        and other.part.kind != ctx.state.part.kind
    )
    try:
        if bimanual_handles:
            other_axis = "x" if other.part.kind == "axis-x-handle" else "y"
            drags = {axis: max(drag, 0.0), other_axis: max(_signed_drag(view, other, other_axis), 0.0)}
            new = ops.expand_axis(view, drags, table, th, composite_id=_next_id(state))
            force = _other(ctx.hand) if new is not None else None
            if new is None:
                return None
            return Command(kind="compose", spec=new, force_release=force)
        new = ops.partition_axis(view, axis, max(drag, 0.0), table, th, composite_id=_next_id(state))
        if new is None:
            return None
        return Command(kind="compose", spec=new)
    except ops.NoSuchAxis:
        return None


def _commit_pcp_axis(state, ctx, view) -> Command | None:
    other = ctx.other
    if (
        other is None
        or other.view_id != view.id
        or other.part.kind != "pcp-axis"
    ):
        return None
    i, j = sorted((ctx.state.part.index, other.part.index))
    if j != i + 1:
        return None
    axis_dir = view.pose.matrix()[:, 0]
    delta = np.asarray(other.hand_pos, float) - np.asarray(ctx.state.hand_pos, float)
    gap = abs(float(delta @ axis_dir))
    if gap >= pcp_default_gap(view):
        return None
    for spec in state.composites.values():
        if (
            isinstance(spec.payload, ops.OverloadPlacement)
            and spec.payload.pcp_view == view.id
            and spec.payload.axis_pair[0] == i
        ):
            return Command(
                kind="decompose",
                composite_id=spec.id,
                trigger=DecomposeTrigger.CLOSE_AXES,
            )
    return None


def _commit_element(state, ctx, view) -> Command | None:
    spec = state.constituent_of(view.id)
    if spec is None:
        return None
    item = ctx.state.part.item
    hand = np.asarray(ctx.state.hand_pos, float)
    if isinstance(spec.payload, ops.AnchorMap) and spec.payload.client == view.id:
        for entry in spec.payload.entries:
            if entry.client_item == item:
                lift = float(hand[1] - entry.target.position[1])
                if lift > state.thresholds.delta_pull:
                    return Command(
                        kind="decompose",
                        composite_id=spec.id,
                        trigger=DecomposeTrigger.LIFT_ELEMENT,
                    )
                return None
    if isinstance(spec.payload, ops.NestPlacementSet) and spec.payload.client == view.id:
        host = state.views.get(spec.payload.host)
        if host is None:
            return None
        for p in spec.payload.placements:
            if p.client_row == item:
                box = obb_of(
                    host, Part.element(p.host_element), state.tables[host.table]
                )
                if not box.contains(hand):
                    return Command(
                        kind="decompose",
                        composite_id=spec.id,
                        trigger=DecomposeTrigger.DRAG_OUT,
                    )
                return None
    return None


def _commit_body(state, ctx, view) -> Command | None:
    spec = state.constituent_of(view.id)
    th = state.thresholds
    if spec is not None:
        if spec.type is CompositeType.INTEGRATED or (
            isinstance(spec.payload, JuxtaposeLayout)
            and spec.payload.mode == "proximity"
        ):
            brk = (
                th.tau_break
                if spec.type is CompositeType.INTEGRATED
                else th.tau_juxt * th.hysteresis_factor
            )
            partners = [c for c in spec.constituents if c != view.id and c in state.views]
            if partners and all(
                state.relations.gap(view.id, p) > brk for p in partners
            ):
                return Command(
                    kind="decompose",
                    composite_id=spec.id,
                    trigger=DecomposeTrigger.SEPARATE,
                )
        return None

    ranked = candidates(state)
    mine = [c for c in ranked if view.id in c.constituents or c.context.get("client_view") == view.id]
    for cand in mine:
        command = _build_compose(state, cand)
        if command is not None:
            return command
    return None


def _build_compose(state: SessionState, cand: CandidateIntent) -> Command | None:
    tables = state.tables
    th = state.thresholds
    try:
        if cand.type is CompositeType.NESTED:
            host = state.views[cand.context["host"]]
            client_view = state.views[cand.constituents[1]]
            client_geom = cand.context["client_view"]
            rel = state.relationship(host.table, client_view.table)
            spec = ops.compose_nested(
                host,
                tables[client_view.table],
                rel,
                cand.context["seed"],
                client_view,
                tables,
                composite_id=_next_id(state),
            )
            absorbed = (client_geom,) if client_geom in state.extracted else ()
            return Command(kind="compose", spec=spec, absorbed=absorbed)
        if cand.type is CompositeType.OVERLOADED:
            pcp = state.views[cand.context["pcp"]]
            scatter = state.views[cand.context["scatter"]]
            i = cand.context["region"]
            rel = state.relationship(pcp.table, scatter.table)
            spec = ops.compose_overloaded(
                pcp, scatter, (i, i + 1), rel, tables[pcp.table],
                active_regions=state.active_regions,
                composite_id=_next_id(state),
            )
            return Command(kind="compose", spec=spec)
        if cand.type is CompositeType.SUPERIMPOSED:
            host = state.views[cand.context["host"]]
            client = state.views[cand.context["client"]]
            rel = state.relationship(host.table, client.table)
            spec = ops.compose_superimposed(
                host, client, rel, tables, composite_id=_next_id(state)
            )
            return Command(kind="compose", spec=spec)
        if cand.type is CompositeType.INTEGRATED:
            return _build_integrated(state, cand)
        if cand.type is CompositeType.JUXTAPOSED:
            a = state.views[cand.constituents[0]]
            b = state.views[cand.constituents[1]]
            gap = state.relations.gap(a.id, b.id)
            spec = ops.juxtapose_views(a, b, gap, composite_id=_next_id(state))
            return Command(kind="compose", spec=spec)
    except (ops.NotAdmissible, ops.UnmatchedItems, ops.RegionNotActive,
            ops.SeedUnmatched, ops.NotPcp, ops.BadAxisIndex, KeyError):
        return None
    return None


def _build_integrated(state: SessionState, cand: CandidateIntent) -> Command | None:
    a_id, b_id = cand.constituents
    a, b = state.views[a_id], state.views[b_id]
    spec_a = state.constituent_of(a_id)
    spec_b = state.constituent_of(b_id)
    target = spec_a or spec_b
    if target is not None and target.type is CompositeType.INTEGRATED:
        newcomer = a if spec_a is None else b
        pairs = []
        for cid in target.constituents:
            partner = state.views[cid]
            rel = state.relationship(newcomer.table, partner.table)
            if rel.kind is RelationshipKind.NONE:
                continue
            pairs.append((newcomer, partner, rel))
        if not pairs:
            return None
        spec = ops.extend_integrated(
            target, pairs, state.tables, composite_id=_next_id(state)
        )
        return Command(kind="compose", spec=spec, replaces=target.id)
    rel = state.relationship(a.table, b.table)
    spec = ops.compose_integrated(
        a, b, rel, state.tables, composite_id=_next_id(state)
    )
    return Command(kind="compose", spec=spec)


def _apply_command(state: SessionState, command: Command) -> SessionState:
    views = dict(state.views)
    composites = dict(state.composites)
    extracted = dict(state.extracted)
    hands = dict(state.hands)
    counter = state.counter
    if command.kind == "compose":
        counter += 1
        if command.replaces and command.replaces in composites:
            del composites[command.replaces]
        composites[command.spec.id] = command.spec
        for vid in command.absorbed:
            views.pop(vid, None)
            extracted.pop(vid, None)
        if command.force_release:
            hands[command.force_release] = None
    else:
        spec = composites.pop(command.composite_id)
        for restored in ops.decompose(spec, command.trigger, current_views=views):
            views[restored.id] = restored
    latched = frozenset(
        p for p in state.latched if p[0] in views and p[1] in views
    )
    new = replace(
        state,
        views=views,
        composites=composites,
        extracted=extracted,
        hands=hands,
        counter=counter,
        latched=latched,
        commands=state.commands + (command,),
    )
    return _refresh_relations(new, update_history=False)
