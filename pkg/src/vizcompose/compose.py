"""The five composition operators, their inverses, and the auxiliary
operations (axis expansion and partition, pcp axis spreading, element
extraction, arc bending) that produce CompositeSpec artifacts.

All constructors are pure: they read immutable views and tables and
return a new CompositeSpec carrying enough (constituent view specs plus
pre-composition transforms) for decomposition to restore the originals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .config import Thresholds
from .data_model import (
    CompositeType,
    DataTable,
    Relationship,
    TableMismatch,
    Value,
    allowed_composites,
    item_correspondences,
)
from .scene import (
    Part,
    Pose,
    ViewSpec,
    anchor_position,
    compose_rotations,
    element_keys,
    normalized_column,
    obb_of,
    pcp_axis_positions,
    pcp_default_gap,
    rotation_about,
    view_items,
)

Vec3 = tuple[float, float, float]


class NotAdmissible(Exception):
    pass


class UnmatchedItems(Exception):
    def __init__(self, items):
        self.items = sorted(items, key=str)
        super().__init__(f"client items without host anchors: {self.items}")


class RegionNotActive(Exception):
    pass


class NotPcp(Exception):
    pass


class BadAxisIndex(Exception):
    pass


class SeedUnmatched(Exception):
    pass


class NoSuchAxis(Exception):
    pass


class WrongTrigger(Exception):
    pass


class DecomposeTrigger(Enum):
    SEPARATE = "separate"  # constituent pulled away (integrated / proximity)
    LIFT_ELEMENT = "lift-element"  # superimposed: element pulled off its anchor
    CLOSE_AXES = "close-axes"  # overloaded: axis pair closed below default
    DRAG_OUT = "drag-out"  # nested: embedded chart dragged out of its element
    COLLAPSE_HANDLE = "collapse-handle"  # partition/expansion folded back


@dataclass(frozen=True)
class TransformEntry:
    """Start and target poses for one animated element.

    ``element`` is an item key, or ``view:<id>`` for a whole constituent
    (whose start pose doubles as its pre-composition restore pose).
    """

    element: str
    start: Pose
    target: Pose


@dataclass(frozen=True)
class LinkSegment:
    a_item: Value
    b_item: Value
    end_a: Vec3
    end_b: Vec3


@dataclass(frozen=True)
class LinkGroup:
    a_view: str
    b_view: str
    segments: tuple[LinkSegment, ...]


@dataclass(frozen=True)
class LinkSet:
    groups: tuple[LinkGroup, ...]

    def segment_count(self) -> int:
        return sum(len(g.segments) for g in self.groups)


@dataclass(frozen=True)
class AnchorEntry:
    client_item: Value
    host_region: Value
    target: Pose


@dataclass(frozen=True)
class AnchorMap:
    host: str
    client: str
    entries: tuple[AnchorEntry, ...]


@dataclass(frozen=True)
class NestPlacement:
    host_element: Value
    client_row: Value
    target: Pose
    scale_factor: float


@dataclass(frozen=True)
class NestPlacementSet:
    host: str
    client: str  # absorbed client chart view id
    placements: tuple[NestPlacement, ...]


@dataclass(frozen=True)
class ScatterPoint:
    row: Value
    x: float  # normalized value of the right axis column
    y: float  # normalized value of the left axis column


@dataclass(frozen=True)
class OverloadPlacement:
    pcp_view: str
    client: str  # absorbed scatterplot view id
    axis_pair: tuple[int, int]
    region_rect: tuple[float, float, float, float]  # x0, y0, x1, y1 pcp-local
    scatter_points: tuple[ScatterPoint, ...]
    hidden_polyline_segments: tuple[int, int]


@dataclass(frozen=True)
class Panel:
    view: ViewSpec
    col: int
    row: int
    x_interval: tuple[float, float] | None
    y_interval: tuple[float, float] | None
    row_keys: tuple[Value, ...]


@dataclass(frozen=True)
class JuxtaposeLayout:
    source: str
    mode: str  # partition | expansion | proximity
    panels: tuple[Panel, ...]
    bins_x: int
    bins_y: int
    axis_x_column: str | None
    axis_y_column: str | None
    gap: float
    curvature: float = 0.0


Payload = LinkSet | AnchorMap | NestPlacementSet | OverloadPlacement | JuxtaposeLayout

PAYLOAD_KEYS = {
    CompositeType.INTEGRATED: "links",
    CompositeType.SUPERIMPOSED: "anchors",
    CompositeType.NESTED: "nests",
    CompositeType.OVERLOADED: "overload",
    CompositeType.JUXTAPOSED: "layout",
}


@dataclass(frozen=True)
class CompositeSpec:
    id: str
    type: CompositeType
    constituents: tuple[str, ...]
    payload: Payload
    transforms: tuple[TransformEntry, ...] = ()
    views: tuple[ViewSpec, ...] = ()  # constituent specs at compose time

    def view_by_id(self, view_id: str) -> ViewSpec:
        for v in self.views:
            if v.id == view_id:
                return v
        raise KeyError(view_id)

    def client_id(self) -> str | None:
        if isinstance(self.payload, AnchorMap):
            return self.payload.client
        if isinstance(self.payload, NestPlacementSet):
            return self.payload.client
        if isinstance(self.payload, OverloadPlacement):
            return self.payload.client
        return None


def _default_id(ctype: CompositeType, ids) -> str:
    return f"{ctype.value}:" + "+".join(ids)


def _require(ctype: CompositeType, rel: Relationship):
    if ctype not in allowed_composites(rel.kind):
        raise NotAdmissible(
            f"{ctype.value} cannot encode a {rel.kind.value} relationship"
        )


def _orient_pair(a: ViewSpec, b: ViewSpec, rel: Relationship):
    """Match the two views to the relationship's table roles."""
    if a.table == rel.table_a and b.table == rel.table_b:
        return a, b
    if a.table == rel.table_b and b.table == rel.table_a:
        return b, a
    raise TableMismatch(
        f"views over ({a.table!r}, {b.table!r}) do not fit relationship "
        f"({rel.table_a!r}, {rel.table_b!r})"
    )


def _link_group(
    view_a: ViewSpec,
    view_b: ViewSpec,
    rel: Relationship,
    tables: dict[str, DataTable],
) -> LinkGroup:
    va, vb = _orient_pair(view_a, view_b, rel)
    ta, tb = tables[rel.table_a], tables[rel.table_b]
    segments = []
    for a_item, target in item_correspondences(rel, ta, tb):
        b_items = target if isinstance(target, list) else [target]
        for b_item in b_items:
            end_a = anchor_position(va, a_item, ta)
            end_b = anchor_position(vb, b_item, tb)
            segments.append(
                LinkSegment(
                    a_item, b_item,
                    tuple(float(x) for x in end_a),
                    tuple(float(x) for x in end_b),
                )
            )
    return LinkGroup(va.id, vb.id, tuple(segments))


def compose_integrated(
    a: ViewSpec,
    b: ViewSpec,
    rel: Relationship,
    tables: dict[str, DataTable],
    composite_id: str | None = None,
) -> CompositeSpec:
    """Link two views with one segment per item correspondence."""
    return compose_integrated_group([(a, b, rel)], tables, composite_id)


def compose_integrated_group(
    pairs: list[tuple[ViewSpec, ViewSpec, Relationship]],
    tables: dict[str, DataTable],
    composite_id: str | None = None,
) -> CompositeSpec:
    """Integrated composite over several related view pairs (one link
    group per relationship); views keep their poses."""
    groups = []
    order: list[ViewSpec] = []
    for a, b, rel in pairs:
        _require(CompositeType.INTEGRATED, rel)
        groups.append(_link_group(a, b, rel, tables))
        for v in (a, b):
            if all(o.id != v.id for o in order):
                order.append(v)
    ids = tuple(v.id for v in order)
    return CompositeSpec(
        id=composite_id or _default_id(CompositeType.INTEGRATED, ids),
        type=CompositeType.INTEGRATED,
        constituents=ids,
        payload=LinkSet(tuple(groups)),
        views=tuple(order),
    )


def extend_integrated(
    spec: CompositeSpec,
    new_pairs: list[tuple[ViewSpec, ViewSpec, Relationship]],
    tables: dict[str, DataTable],
    composite_id: str | None = None,
) -> CompositeSpec:
    """Join another view into an integrated group by adding link groups."""
    assert isinstance(spec.payload, LinkSet)
    groups = list(spec.payload.groups)
    order = list(spec.views)
    for a, b, rel in new_pairs:
        _require(CompositeType.INTEGRATED, rel)
        groups.append(_link_group(a, b, rel, tables))
        for v in (a, b):
            if all(o.id != v.id for o in order):
                order.append(v)
    ids = tuple(v.id for v in order)
    return CompositeSpec(
        id=composite_id or spec.id,
        type=CompositeType.INTEGRATED,
        constituents=ids,
        payload=LinkSet(tuple(groups)),
        views=tuple(order),
    )


# Rotation standing a chart upright on a horizontal host panel: the
# client's growth axis (+y) aligns with the host normal (+z).
_UPRIGHT = rotation_about((1.0, 0.0, 0.0), math.pi / 2)


def compose_superimposed(
    host: ViewSpec,
    client: ViewSpec,
    rel: Relationship,
    tables: dict[str, DataTable],
    composite_id: str | None = None,
) -> CompositeSpec:
    """Overlay the client on the host, one anchor per client element."""
    _require(CompositeType.SUPERIMPOSED, rel)
    host_table = tables[host.table]
    client_table = tables[client.table]
    corr = _correspondence_map(rel, client, host, tables)
    client_items = view_items(client, client_table)
    missing = [c for c in client_items if c not in corr]
    if missing:
        raise UnmatchedItems(missing)
    target_rot = compose_rotations(host.pose.rotation, _UPRIGHT)
    entries = []
    transforms = []
    for item in sorted(client_items, key=str):
        host_key = corr[item]
        anchor = anchor_position(host, host_key, host_table)
        target = Pose(
            position=tuple(float(x) for x in anchor),
            rotation=target_rot,
            scale=client.pose.scale,
        )
        start = Pose(
            position=tuple(
                float(x) for x in anchor_position(client, item, client_table)
            ),
            rotation=client.pose.rotation,
            scale=client.pose.scale,
        )
        entries.append(AnchorEntry(item, host_key, target))
        transforms.append(TransformEntry(str(item), start, target))
    transforms.append(
        TransformEntry(f"view:{client.id}", client.pose, client.pose)
    )
    ids = (host.id, client.id)
    return CompositeSpec(
        id=composite_id or _default_id(CompositeType.SUPERIMPOSED, ids),
        type=CompositeType.SUPERIMPOSED,
        constituents=ids,
        payload=AnchorMap(host.id, client.id, tuple(entries)),
        transforms=tuple(transforms),
        views=(host, client),
    )


def _correspondence_map(
    rel: Relationship,
    client: ViewSpec,
    host: ViewSpec,
    tables: dict[str, DataTable],
) -> dict:
    """client item -> host item under the relationship."""
    ta, tb = tables[rel.table_a], tables[rel.table_b]
    pairs = item_correspondences(rel, ta, tb)
    out: dict = {}
    host_is_a = host.table == rel.table_a and client.table == rel.table_b
    client_is_a = client.table == rel.table_a and host.table == rel.table_b
    if not (host_is_a or client_is_a):
        raise TableMismatch(
            f"relationship ({rel.table_a!r}, {rel.table_b!r}) does not join "
            f"({client.table!r}, {host.table!r})"
        )
    for a_item, target in pairs:
        b_items = target if isinstance(target, list) else [target]
        if host_is_a:
            for b in b_items:
                out[b] = a_item
        else:
            # client on the item side: host items fan out; map to the first
            out.setdefault(a_item, sorted(b_items, key=str)[0])
    return out


def spread_pcp_axes(
    pcp: ViewSpec,
    i: int,
    new_gap: float,
    table: DataTable,
    thresholds: Thresholds | None = None,
) -> ViewSpec | None:
    """Open pcp axes i and i+1 apart. Past the spread threshold this
    activates the region and returns a scatterplot client over the two
    axis columns, positioned beside the pcp; below it, returns None."""
    thresholds = thresholds or Thresholds()
    if pcp.chart != "pcp":
        raise NotPcp(pcp.chart)
    axes = pcp.encodings.get("axes", [])
    if not (0 <= i < len(axes) - 1):
        raise BadAxisIndex(f"no axis pair at ({i}, {i + 1})")
    if new_gap <= thresholds.gamma_spread * pcp_default_gap(pcp):
        return None
    hx, hy, hz = pcp.half_extents
    side = min(hx, hy) * 0.5
    local = np.array([hx + side + 0.05, 0.0, 0.0])
    return ViewSpec(
        id=f"{pcp.id}-scatter-{i}-{i + 1}",
        chart="scatterplot",
        table=pcp.table,
        encodings={"x": axes[i + 1], "y": axes[i]},
        half_extents=(side, side, hz),
        pose=Pose(
            position=tuple(float(x) for x in pcp.pose.apply(local)),
            rotation=pcp.pose.rotation,
            scale=pcp.pose.scale,
        ),
    )


def compose_overloaded(
    pcp: ViewSpec,
    scatter: ViewSpec,
    region: tuple[int, int],
    rel: Relationship,
    table: DataTable,
    active_regions: frozenset | set = frozenset(),
    composite_id: str | None = None,
) -> CompositeSpec:
    """Embed a scatterplot between two spread pcp axes, suppressing the
    polylines of that pair."""
    i, j = region
    if (pcp.id, i) not in active_regions:
        raise RegionNotActive(f"region ({i}, {j}) of {pcp.id!r} is not active")
    _require(CompositeType.OVERLOADED, rel)
    axes = pcp.encodings["axes"]
    if j != i + 1 or not (0 <= i < len(axes) - 1):
        raise BadAxisIndex(f"({i}, {j})")
    left = normalized_column(table, axes[i])
    right = normalized_column(table, axes[i + 1])
    points = tuple(
        ScatterPoint(key, right[key], left[key]) for key in table.sorted_keys()
    )
    xs = pcp_axis_positions(pcp)
    hy = pcp.half_extents[1]
    rect = (xs[i], -hy, xs[i + 1], hy)
    mid = np.array([(xs[i] + xs[i + 1]) / 2.0, 0.0, 0.0])
    region_width = (xs[i + 1] - xs[i]) * pcp.pose.scale
    target = Pose(
        position=tuple(float(x) for x in pcp.pose.apply(mid)),
        rotation=pcp.pose.rotation,
        scale=region_width / (2.0 * scatter.half_extents[0]),
    )
    ids = (pcp.id, scatter.id)
    return CompositeSpec(
        id=composite_id or _default_id(CompositeType.OVERLOADED, ids),
        type=CompositeType.OVERLOADED,
        constituents=ids,
        payload=OverloadPlacement(
            pcp_view=pcp.id,
            client=scatter.id,
            axis_pair=(i, i + 1),
            region_rect=rect,
            scatter_points=points,
            hidden_polyline_segments=(i, i + 1),
        ),
        transforms=(TransformEntry(f"view:{scatter.id}", scatter.pose, target),),
        views=(pcp, scatter),
    )


NEST_FILL = 0.8  # placed chart diagonal relative to the element box


def compose_nested(
    host: ViewSpec,
    client_table: DataTable,
    rel: Relationship,
    seed_element: Value,
    client_view: ViewSpec,
    tables: dict[str, DataTable],
    composite_id: str | None = None,
) -> CompositeSpec:
    """Replace every corresponded host element with a mini chart of the
    client's row; the seed placement comes first."""
    _require(CompositeType.NESTED, rel)
    host_table = tables[host.table]
    corr = _nest_correspondences(rel, host_table, client_table)
    if seed_element not in corr:
        raise SeedUnmatched(f"{seed_element!r} has no client row")
    mini = extract_element(client_view, corr[seed_element], client_table)
    chart_diag = 2.0 * float(np.linalg.norm(mini.half_extents))
    placements = []
    keys = [seed_element] + [
        k for k in sorted(corr, key=str) if k != seed_element
    ]
    transforms = [TransformEntry(f"view:{client_view.id}", client_view.pose, client_view.pose)]
    for key in keys:
        if key not in set(element_keys(host, host_table)):
            continue
        elem = obb_of(host, Part.element(key), host_table)
        elem_size = 2.0 * float(np.linalg.norm(elem.half_extents))
        factor = NEST_FILL * elem_size / chart_diag
        target = Pose(
            position=elem.center,
            rotation=host.pose.rotation,
            scale=factor,
        )
        row = corr[key]
        start_box = obb_of(client_view, Part.element(row), tables[client_view.table])
        start = Pose(
            position=start_box.center,
            rotation=client_view.pose.rotation,
            scale=client_view.pose.scale,
        )
        placements.append(NestPlacement(key, row, target, factor))
        transforms.append(TransformEntry(str(key), start, target))
    ids = (host.id, client_view.id)
    return CompositeSpec(
        id=composite_id or _default_id(CompositeType.NESTED, ids),
        type=CompositeType.NESTED,
        constituents=ids,
        payload=NestPlacementSet(host.id, client_view.id, tuple(placements)),
        transforms=tuple(transforms),
        views=(host, client_view),
    )


def _nest_correspondences(
    rel: Relationship, host_table: DataTable, client_table: DataTable
) -> dict:
    """host element key -> client row key."""
    if rel.table_a == host_table.name and rel.table_b == client_table.name:
        host_is_a = True
    elif rel.table_b == host_table.name and rel.table_a == client_table.name:
        host_is_a = False
    else:
        raise TableMismatch(
            f"relationship ({rel.table_a!r}, {rel.table_b!r}) does not join "
            f"({host_table.name!r}, {client_table.name!r})"
        )
    pairs = item_correspondences(rel, host_table, client_table)
    out: dict = {}
    for a_item, target in pairs:
        b_items = target if isinstance(target, list) else [target]
        if host_is_a:
            out[a_item] = sorted(b_items, key=str)[0]
        else:
            for b in b_items:
                out[b] = a_item
    return out


def expand_axis(
    view: ViewSpec,
    drags: dict[str, float],
    table: DataTable,
    thresholds: Thresholds | None = None,
    composite_id: str | None = None,
) -> CompositeSpec | None:
    """Widen the data range: k = floor(drag / axisLength) extra panels
    per dragged axis, forming a (kx+1) x (ky+1) grid. Returns None when
    both drags stay below one axis length."""
    thresholds = thresholds or Thresholds()
    cols = _axis_columns(view)
    ks = {}
    for axis, drag in drags.items():
        if axis not in ("x", "y"):
            raise NoSuchAxis(axis)
        if cols.get(axis) is None:
            raise NoSuchAxis(f"view {view.id!r} has no {axis} data axis")
        length = _axis_length(view, axis)
        ks[axis] = max(0, math.floor(max(drag, 0.0) / length))
    kx = ks.get("x", 0)
    ky = ks.get("y", 0)
    if kx == 0 and ky == 0:
        return None
    return _grid_layout(
        view, "expansion", kx + 1, ky + 1, cols, table, thresholds,
        expanded=True, composite_id=composite_id,
    )


def partition_axis(
    view: ViewSpec,
    axis: str,
    drag_distance: float,
    table: DataTable,
    thresholds: Thresholds | None = None,
    composite_id: str | None = None,
) -> CompositeSpec | None:
    """Split the axis domain into n = 1 + floor(drag / binStep) equal
    bins; below the first step, no composite."""
    thresholds = thresholds or Thresholds()
    cols = _axis_columns(view)
    if axis not in ("x", "y"):
        raise NoSuchAxis(axis)
    if cols.get(axis) is None:
        raise NoSuchAxis(f"view {view.id!r} has no {axis} data axis")
    step = _bin_step(view, axis, thresholds)
    n = 1 + max(0, math.floor(max(drag_distance, 0.0) / step))
    if n == 1:
        return None
    bins_x = n if axis == "x" else 1
    bins_y = n if axis == "y" else 1
    return _grid_layout(
        view, "partition", bins_x, bins_y, cols, table, thresholds,
        expanded=False, composite_id=composite_id,
    )


def repartition(
    spec: CompositeSpec,
    axis: str,
    drag_distance: float,
    table: DataTable,
    thresholds: Thresholds | None = None,
) -> CompositeSpec | None:
    """Re-bin one axis of an existing partition/expansion grid from a new
    drag distance; the other axis keeps its bin count. Returns None when
    the grid collapses to a single panel (decompose instead)."""
    thresholds = thresholds or Thresholds()
    assert isinstance(spec.payload, JuxtaposeLayout)
    layout = spec.payload
    source = spec.view_by_id(layout.source)
    cols = _axis_columns(source)
    if axis not in ("x", "y"):
        raise NoSuchAxis(axis)
    if cols.get(axis) is None:
        raise NoSuchAxis(f"view {source.id!r} has no {axis} data axis")
    if layout.mode == "expansion":
        length = _axis_length(source, axis)
        n = 1 + max(0, math.floor(max(drag_distance, 0.0) / length))
    else:
        step = _bin_step(source, axis, thresholds)
        n = 1 + max(0, math.floor(max(drag_distance, 0.0) / step))
    bins_x = n if axis == "x" else layout.bins_x
    bins_y = n if axis == "y" else layout.bins_y
    if bins_x == 1 and bins_y == 1:
        return None
    return _grid_layout(
        source, layout.mode, bins_x, bins_y, cols, table, thresholds,
        expanded=layout.mode == "expansion", composite_id=spec.id,
    )


def _axis_columns(view: ViewSpec) -> dict[str, str | None]:
    if view.chart == "scatterplot":
        return {"x": view.encodings.get("x"), "y": view.encodings.get("y")}
    if view.chart in ("barchart", "linechart"):
        return {"x": None, "y": view.encodings.get("value")}
    return {"x": None, "y": None}


def _axis_length(view: ViewSpec, axis: str) -> float:
    half = view.half_extents[0] if axis == "x" else view.half_extents[1]
    return 2.0 * half * view.pose.scale


def _bin_step(view: ViewSpec, axis: str, thresholds: Thresholds) -> float:
    return _axis_length(view, axis) * thresholds.bin_step_fraction


def _intervals(lo: float, hi: float, n: int, expanded: bool) -> list[tuple[float, float]]:
    if expanded:
        width = hi - lo
        return [(lo + p * width, lo + (p + 1) * width) for p in range(n)]
    width = (hi - lo) / n
    return [(lo + p * width, lo + (p + 1) * width) for p in range(n)]


def _in_interval(v: float, iv: tuple[float, float], last: bool) -> bool:
    lo, hi = iv
    return (lo <= v < hi) or (last and v == hi)


def _grid_layout(
    view: ViewSpec,
    mode: str,
    bins_x: int,
    bins_y: int,
    cols: dict[str, str | None],
    table: DataTable,
    thresholds: Thresholds,
    expanded: bool,
    composite_id: str | None = None,
) -> CompositeSpec:
    col_x = cols.get("x") if bins_x > 1 else None
    col_y = cols.get("y") if bins_y > 1 else None
    ivx = _domain_intervals(table, col_x, bins_x, expanded)
    ivy = _domain_intervals(table, col_y, bins_y, expanded)
    hx, hy, _ = view.half_extents
    s = view.pose.scale
    dx = 2.0 * hx * s + thresholds.panel_gap
    dy = 2.0 * hy * s + thresholds.panel_gap
    m = view.pose.matrix()
    base = np.asarray(view.pose.position, float)
    panels = []
    for q in range(bins_y):
        for p in range(bins_x):
            keys = []
            for row in table.rows:
                if col_x is not None and not _in_interval(
                    float(row[col_x]), ivx[p], p == bins_x - 1
                ):
                    continue
                if col_y is not None and not _in_interval(
                    float(row[col_y]), ivy[q], q == bins_y - 1
                ):
                    continue
                keys.append(row[table.key])
            pos = base + m @ np.array([p * dx, q * dy, 0.0])
            panel_view = replace(
                view,
                id=f"{view.id}/{p}-{q}",
                pose=Pose(
                    position=tuple(float(x) for x in pos),
                    rotation=view.pose.rotation,
                    scale=s,
                ),
            )
            panels.append(
                Panel(
                    view=panel_view,
                    col=p,
                    row=q,
                    x_interval=ivx[p] if col_x is not None else None,
                    y_interval=ivy[q] if col_y is not None else None,
                    row_keys=tuple(sorted(keys, key=str)),
                )
            )
    layout = JuxtaposeLayout(
        source=view.id,
        mode=mode,
        panels=tuple(panels),
        bins_x=bins_x,
        bins_y=bins_y,
        axis_x_column=col_x,
        axis_y_column=col_y,
        gap=thresholds.panel_gap,
        curvature=0.0,
    )
    return CompositeSpec(
        id=composite_id or _default_id(CompositeType.JUXTAPOSED, (view.id,)),
        type=CompositeType.JUXTAPOSED,
        constituents=(view.id,),
        payload=layout,
        views=(view,),
    )


def _domain_intervals(table, column, n, expanded):
    if column is None or n <= 1:
        return [None] * max(n, 1)
    vals = [float(row[column]) for row in table.rows]
    lo, hi = min(vals), max(vals)
    if hi == lo:
        hi = lo + 1.0
    return _intervals(lo, hi, n, expanded)


def juxtapose_views(
    a: ViewSpec, b: ViewSpec, gap: float, composite_id: str | None = None
) -> CompositeSpec:
    """Proximity juxtaposition: two unrelated views standing side by side."""
    order = sorted((a, b), key=lambda v: v.id)
    panels = tuple(
        Panel(view=v, col=i, row=0, x_interval=None, y_interval=None, row_keys=())
        for i, v in enumerate(order)
    )
    ids = tuple(v.id for v in order)
    layout = JuxtaposeLayout(
        source=order[0].id,
        mode="proximity",
        panels=panels,
        bins_x=2,
        bins_y=1,
        axis_x_column=None,
        axis_y_column=None,
        gap=gap,
    )
    return CompositeSpec(
        id=composite_id or _default_id(CompositeType.JUXTAPOSED, ids),
        type=CompositeType.JUXTAPOSED,
        constituents=ids,
        payload=layout,
        views=tuple(order),
    )


def bend_layout(layout: JuxtaposeLayout, curvature: float) -> JuxtaposeLayout:
    """Re-pose a flat grid on a circular arc of the given total angle,
    panels facing the arc center. Zero curvature is the identity."""
    if curvature == 0.0 or layout.bins_x <= 1:
        return replace(layout, curvature=curvature)
    cols = layout.bins_x
    positions = np.array([np.asarray(p.view.pose.position, float) for p in layout.panels])
    centroid = positions.mean(axis=0)
    rot_q = layout.panels[0].view.pose.rotation
    m = layout.panels[0].view.pose.matrix()
    step = curvature / (cols - 1)
    # spacing between adjacent columns, measured in the panel frame
    by_col = {}
    for p in layout.panels:
        by_col.setdefault(p.col, p.view.pose.position)
    xs = [float((m.T @ (np.asarray(by_col[c], float) - centroid))[0]) for c in sorted(by_col)]
    spacing = xs[1] - xs[0]
    radius = spacing / step
    new_panels = []
    for p in layout.panels:
        local = m.T @ (np.asarray(p.view.pose.position, float) - centroid)
        phi = (p.col - (cols - 1) / 2.0) * step
        bent = np.array(
            [radius * math.sin(phi), local[1], radius * (1.0 - math.cos(phi))]
        )
        pos = centroid + m @ bent
        rot = compose_rotations(rot_q, rotation_about((0.0, 1.0, 0.0), -phi))
        new_panels.append(
            replace(
                p,
                view=p.view.with_pose(
                    Pose(
                        position=tuple(float(x) for x in pos),
                        rotation=rot,
                        scale=p.view.pose.scale,
                    )
                ),
            )
        )
    return replace(layout, panels=tuple(new_panels), curvature=curvature)


def extract_element(view: ViewSpec, item_id: Value, table: DataTable) -> ViewSpec:
    """Detach one item of a bar chart as a grabbable mini chart; the
    source view is untouched."""
    if view.chart not in ("barchart", "stackedbar"):
        raise NotAdmissible(f"cannot extract from a {view.chart}")
    items = view_items(view, table)
    if item_id not in items:
        from .scene import UnknownItem

        raise UnknownItem(str(item_id))
    box = obb_of(view, Part.element(item_id), table)
    n = len(items)
    hx, hy, hz = view.half_extents
    return ViewSpec(
        id=f"{view.id}#{item_id}",
        chart=view.chart,
        table=view.table,
        encodings={**view.encodings, "item": item_id},
        half_extents=(hx / n, hy, hz),
        pose=Pose(
            position=box.center,
            rotation=view.pose.rotation,
            scale=view.pose.scale,
        ),
    )


_TRIGGER_FOR_TYPE = {
    CompositeType.INTEGRATED: {DecomposeTrigger.SEPARATE},
    CompositeType.SUPERIMPOSED: {DecomposeTrigger.LIFT_ELEMENT},
    CompositeType.OVERLOADED: {DecomposeTrigger.CLOSE_AXES},
    CompositeType.NESTED: {DecomposeTrigger.DRAG_OUT},
    CompositeType.JUXTAPOSED: {
        DecomposeTrigger.COLLAPSE_HANDLE,
        DecomposeTrigger.SEPARATE,
    },
}


def decompose(
    composite: CompositeSpec,
    trigger: DecomposeTrigger,
    current_views: dict[str, ViewSpec] | None = None,
) -> list[ViewSpec]:
    """Restore the constituent views.

    Integrated and juxtaposed constituents keep their current poses;
    superimposed, overloaded, and nested clients return to the
    pre-composition pose recorded in the transforms.
    """
    allowed = _TRIGGER_FOR_TYPE[composite.type]
    if isinstance(composite.payload, JuxtaposeLayout):
        if composite.payload.mode == "proximity":
            allowed = {DecomposeTrigger.SEPARATE}
        else:
            allowed = {DecomposeTrigger.COLLAPSE_HANDLE}
    if trigger not in allowed:
        raise WrongTrigger(
            f"{trigger.value} cannot decompose a {composite.type.value} composite"
        )
    restore_start = {
        e.element[len("view:"):]: e.start
        for e in composite.transforms
        if e.element.startswith("view:")
    }
    out = []
    for vid in composite.constituents:
        view = None
        if current_views and vid in current_views:
            view = current_views[vid]
        if view is None:
            view = composite.view_by_id(vid)
        if composite.type in (
            CompositeType.SUPERIMPOSED,
            CompositeType.OVERLOADED,
            CompositeType.NESTED,
        ) and vid in restore_start:
            view = view.with_pose(restore_start[vid])
        out.append(view)
    return out
