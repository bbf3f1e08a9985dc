"""Geometric world model: posed visualization panels, their oriented
bounding boxes, per-item mark anchors, and the pairwise relations
(distance, orientation, scale, collision, embedding) induced by moving
panels around.

Chart layouts live in a local frame: panels occupy x in [-hx, hx],
y in [-hy, hy] at z = 0, with +z the panel normal and +y world up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy.spatial.transform import Rotation

from .data_model import DataTable, Value

Vec3 = tuple[float, float, float]
Quat = tuple[float, float, float, float]  # x, y, z, w

IDENTITY_QUAT: Quat = (0.0, 0.0, 0.0, 1.0)


class UnknownPart(Exception):
    pass


class UnknownItem(Exception):
    pass


@dataclass(frozen=True)
class Pose:
    position: Vec3 = (0.0, 0.0, 0.0)
    rotation: Quat = IDENTITY_QUAT
    scale: float = 1.0

    def __post_init__(self):
        norm = math.sqrt(sum(c * c for c in self.rotation))
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"quaternion norm {norm} not unit")
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    def matrix(self) -> np.ndarray:
        return _quat_matrix(self.rotation)

    def apply(self, local: np.ndarray) -> np.ndarray:
        """Map a local point to world coordinates."""
        return self.matrix() @ (np.asarray(local, float) * self.scale) + np.asarray(
            self.position, float
        )

    def normal(self) -> np.ndarray:
        return self.matrix() @ np.array([0.0, 0.0, 1.0])


@lru_cache(maxsize=8192)
def _quat_matrix(q: Quat) -> np.ndarray:
    m = Rotation.from_quat(q).as_matrix()
    m.flags.writeable = False
    return m


def rotation_about(axis: Vec3, angle_rad: float) -> Quat:
    v = np.asarray(axis, float)
    v = v / np.linalg.norm(v)
    return tuple(Rotation.from_rotvec(v * angle_rad).as_quat())


def compose_rotations(outer: Quat, inner: Quat) -> Quat:
    """Quaternion for applying ``inner`` first, then ``outer``."""
    r = Rotation.from_quat(outer) * Rotation.from_quat(inner)
    q = r.as_quat()
    return (float(q[0]), float(q[1]), float(q[2]), float(q[3]))


CHART_KINDS = (
    "scatterplot",
    "barchart",
    "linechart",
    "stackedbar",
    "map",
    "pcp",
    "graph",
)


@dataclass(frozen=True)
class Part:
    """A grabbable or addressable piece of a view."""

    kind: str  # body | axis-x | axis-y | axis-x-handle | axis-y-handle | pcp-axis | element
    index: int | None = None  # pcp-axis only
    item: Value | None = None  # element only

    @staticmethod
    def body() -> "Part":
        return Part("body")

    @staticmethod
    def axis_handle(axis: str) -> "Part":
        return Part(f"axis-{axis}-handle")

    @staticmethod
    def pcp_axis(index: int) -> "Part":
        return Part("pcp-axis", index=index)

    @staticmethod
    def element(item: Value) -> "Part":
        return Part("element", item=item)

    def wire(self) -> str:
        if self.kind == "pcp-axis":
            return f"pcp-axis:{self.index}"
        if self.kind == "element":
            return f"element:{self.item}"
        return self.kind

    @staticmethod
    def from_wire(text: str) -> "Part":
        if text.startswith("pcp-axis:"):
            return Part.pcp_axis(int(text.split(":", 1)[1]))
        if text.startswith("element:"):
            return Part.element(_coerce_item(text.split(":", 1)[1]))
        if text in ("body", "axis-x", "axis-y", "axis-x-handle", "axis-y-handle"):
            return Part(text)
        raise UnknownPart(text)


def _coerce_item(text: str) -> Value:
    # The wire format is stringly; numeric-looking ids resolve to numbers.
    # Only finite numerics qualify ("inf"/"nan" stay strings, as table
    # values are always finite).
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        return text
    return value if math.isfinite(value) else text


BODY = Part.body()


@dataclass(frozen=True)
class ViewSpec:
    """A primitive visualization panel placed in the world."""

    id: str
    chart: str
    table: str
    encodings: dict
    half_extents: Vec3 = (0.25, 0.2, 0.01)
    pose: Pose = Pose()

    def __post_init__(self):
        if self.chart not in CHART_KINDS:
            raise ValueError(f"unknown chart kind {self.chart!r}")
        if any(h <= 0 for h in self.half_extents):
            raise ValueError("half extents must be positive")

    def with_pose(self, pose: Pose) -> "ViewSpec":
        return replace(self, pose=pose)

    def radius(self) -> float:
        """Bounding-sphere radius: norm of the scaled half extents."""
        return float(np.linalg.norm(np.asarray(self.half_extents) * self.pose.scale))

    def single_item(self) -> Value | None:
        return self.encodings.get("item")


@dataclass(frozen=True)
class OBB:
    center: Vec3
    axes: tuple[Vec3, Vec3, Vec3]  # orthonormal rows
    half_extents: Vec3

    def corners(self) -> np.ndarray:
        c = np.asarray(self.center, float)
        ax = [np.asarray(a, float) for a in self.axes]
        pts = []
        for sx in (-1, 1):
            for sy in (-1, 1):
                for sz in (-1, 1):
                    pts.append(
                        c
                        + sx * self.half_extents[0] * ax[0]
                        + sy * self.half_extents[1] * ax[1]
                        + sz * self.half_extents[2] * ax[2]
                    )
        return np.array(pts)

    def contains(self, point, pad: float = 0.0) -> bool:
        rel = np.asarray(point, float) - np.asarray(self.center, float)
        for axis, h in zip(self.axes, self.half_extents):
            if abs(float(rel @ np.asarray(axis, float))) > h + pad:
                return False
        return True


def _local_box(view: ViewSpec, center: np.ndarray, half: np.ndarray) -> OBB:
    """Lift a local-frame box (center, half sizes) into world space."""
    m = view.pose.matrix()
    s = view.pose.scale
    world_center = view.pose.apply(center)
    axes = tuple(tuple(float(x) for x in m[:, i]) for i in range(3))
    return OBB(
        center=tuple(float(x) for x in world_center),
        axes=axes,  # type: ignore[arg-type]
        half_extents=tuple(float(h * s) for h in half),  # type: ignore[arg-type]
    )


# Fractions of the panel used by sub-part boxes.
HANDLE_SIDE_FRACTION = 0.05  # handle cube side, relative to axis length
AXIS_THICKNESS_FRACTION = 0.05
PCP_AXIS_HALF_WIDTH_FRACTION = 0.02  # of panel width
GRAPH_NODE_RADIUS_FRACTION = 0.10  # of the smaller panel half extent
POINT_HALF_FRACTION = 0.02


def obb_of(view: ViewSpec, part: Part, table: DataTable | None = None) -> OBB:
    """World-space OBB of a view part.

    ``table`` is required for element parts so item layout can be
    resolved; body and axis parts need geometry only.
    """
    hx, hy, hz = view.half_extents
    if part.kind == "body":
        return _local_box(view, np.zeros(3), np.array([hx, hy, hz]))
    if part.kind == "axis-x":
        t = AXIS_THICKNESS_FRACTION * hy
        return _local_box(view, np.array([0.0, -hy, 0.0]), np.array([hx, t, hz]))
    if part.kind == "axis-y":
        t = AXIS_THICKNESS_FRACTION * hx
        return _local_box(view, np.array([-hx, 0.0, 0.0]), np.array([t, hy, hz]))
    if part.kind == "axis-x-handle":
        side = HANDLE_SIDE_FRACTION * (2.0 * hx)
        return _local_box(
            view, np.array([hx, -hy, 0.0]), np.array([side, side, side]) / 2.0
        )
    if part.kind == "axis-y-handle":
        side = HANDLE_SIDE_FRACTION * (2.0 * hy)
        return _local_box(
            view, np.array([-hx, hy, 0.0]), np.array([side, side, side]) / 2.0
        )
    if part.kind == "pcp-axis":
        if view.chart != "pcp":
            raise UnknownPart("pcp-axis on a non-pcp chart")
        xs = pcp_axis_positions(view)
        if part.index is None or not (0 <= part.index < len(xs)):
            raise UnknownPart(f"pcp axis index {part.index}")
        w = PCP_AXIS_HALF_WIDTH_FRACTION * (2.0 * hx)
        return _local_box(view, np.array([xs[part.index], 0.0, 0.0]), np.array([w, hy, hz]))
    if part.kind == "element":
        if table is None:
            raise UnknownPart("element part needs the view's table")
        return _element_obb(view, part.item, table)
    raise UnknownPart(part.kind)


def pcp_axis_positions(view: ViewSpec) -> list[float]:
    """Local x of each pcp axis: evenly spaced across the panel width."""
    axes = view.encodings.get("axes", [])
    n = len(axes)
    hx = view.half_extents[0]
    if n == 1:
        return [0.0]
    return [-hx + i * (2.0 * hx / (n - 1)) for i in range(n)]


def pcp_default_gap(view: ViewSpec) -> float:
    """World-space spacing between adjacent pcp axes."""
    axes = view.encodings.get("axes", [])
    n = max(len(axes), 2)
    return (2.0 * view.half_extents[0] / (n - 1)) * view.pose.scale


def _normalize(values: list[float]) -> dict[float, float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        return {v: 0.5 for v in values}
    return {v: (v - lo) / (hi - lo) for v in values}


def normalized_column(table: DataTable, column: str) -> dict[Value, float]:
    """Min-max normalized value per row key (0.5 when the column is flat)."""
    keys = table.key_values()
    vals = [float(row[column]) for row in table.rows]
    lo, hi = min(vals), max(vals)
    out = {}
    for k, v in zip(keys, vals):
        out[k] = 0.5 if hi == lo else (v - lo) / (hi - lo)
    return out


def view_items(view: ViewSpec, table: DataTable) -> list[Value]:
    """Row keys rendered by the view, in deterministic layout order."""
    single = view.single_item()
    if single is not None:
        return [single]
    return table.sorted_keys()


def _bar_layout(view: ViewSpec, table: DataTable) -> dict[Value, float]:
    """Local x of each bar center, bars left to right in key order."""
    items = view_items(view, table)
    hx = view.half_extents[0]
    n = len(items)
    width = 2.0 * hx / n
    return {item: -hx + (i + 0.5) * width for i, item in enumerate(items)}


def _line_positions(view: ViewSpec, table: DataTable) -> dict[Value, float]:
    items = view_items(view, table)
    hx = view.half_extents[0]
    n = len(items)
    if n == 1:
        return {items[0]: 0.0}
    return {item: -hx + i * (2.0 * hx / (n - 1)) for i, item in enumerate(items)}


def polygon_centroid(points: list[list[float]]) -> tuple[float, float]:
    """Area centroid of a simple polygon (shoelace)."""
    area2 = 0.0
    cx = 0.0
    cy = 0.0
    n = len(points)
    for i in range(n):
        x0, y0 = points[i]
        x1, y1 = points[(i + 1) % n]
        cross = x0 * y1 - x1 * y0
        area2 += cross
        cx += (x0 + x1) * cross
        cy += (y0 + y1) * cross
    if abs(area2) < 1e-12:  # degenerate: fall back to vertex mean
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        return sum(xs) / n, sum(ys) / n
    return cx / (3.0 * area2), cy / (3.0 * area2)


def _local_anchor(view: ViewSpec, item_id: Value, table: DataTable) -> np.ndarray:
    hx, hy, _ = view.half_extents
    chart = view.chart
    if chart == "scatterplot":
        nx = normalized_column(table, view.encodings["x"])
        ny = normalized_column(table, view.encodings["y"])
        return np.array([-hx + 2 * hx * nx[item_id], -hy + 2 * hy * ny[item_id], 0.0])
    if chart in ("barchart", "stackedbar"):
        xs = _bar_layout(view, table)
        if chart == "barchart":
            norm = normalized_column(table, view.encodings["value"])[item_id]
        else:
            norm = _stack_height(view, table)[item_id]
        return np.array([xs[item_id], hy * (2.0 * norm - 1.0), 0.0])
    if chart == "linechart":
        xs = _line_positions(view, table)
        norm = normalized_column(table, view.encodings["value"])[item_id]
        return np.array([xs[item_id], hy * (2.0 * norm - 1.0), 0.0])
    if chart == "map":
        region = _region_for(view, item_id)
        cx, cy = polygon_centroid(region["polygon"])
        return np.array([cx, cy, 0.0])
    if chart == "graph":
        node = _node_for(view, item_id)
        return np.array([node["pos"][0], node["pos"][1], 0.0])
    if chart == "pcp":
        cols = view.encodings["axes"]
        xs = pcp_axis_positions(view)
        ys = [
            -hy + 2 * hy * normalized_column(table, col)[item_id] for col in cols
        ]
        pts = np.array([[x, y, 0.0] for x, y in zip(xs, ys)])
        return pts.mean(axis=0)
    raise UnknownPart(chart)


def _stack_height(view: ViewSpec, table: DataTable) -> dict[Value, float]:
    """Stacked bars normalize total height against the tallest stack."""
    cols = view.encodings["values"]
    totals = {
        row[table.key]: sum(float(row[c]) for c in cols) for row in table.rows
    }
    hi = max(totals.values())
    lo = 0.0
    if hi == lo:
        return {k: 0.5 for k in totals}
    return {k: (v - lo) / (hi - lo) for k, v in totals.items()}


def _region_for(view: ViewSpec, item_id: Value) -> dict:
    for region in view.encodings.get("regions", []):
        if region["key"] == item_id:
            return region
    raise UnknownItem(f"no map region for {item_id!r}")


def _node_for(view: ViewSpec, item_id: Value) -> dict:
    for node in view.encodings.get("nodes", []):
        if node["key"] == item_id:
            return node
    raise UnknownItem(f"no graph node for {item_id!r}")


def anchor_position(view: ViewSpec, item_id: Value, table: DataTable) -> np.ndarray:
    """World position of an item's mark on the view."""
    if view.table != table.name:
        raise UnknownItem(f"table {table.name!r} is not the view's table")
    items = set(view_items(view, table))
    if item_id not in items:
        raise UnknownItem(f"{item_id!r} not shown on view {view.id!r}")
    return view.pose.apply(_local_anchor(view, item_id, table))


def _element_obb(view: ViewSpec, item_id: Value, table: DataTable) -> OBB:
    hx, hy, hz = view.half_extents
    chart = view.chart
    if chart in ("barchart", "stackedbar"):
        items = view_items(view, table)
        if item_id not in items:
            raise UnknownItem(str(item_id))
        xs = _bar_layout(view, table)
        if chart == "barchart":
            norm = normalized_column(table, view.encodings["value"])[item_id]
        else:
            norm = _stack_height(view, table)[item_id]
        half_w = hx / len(items)
        half_h = max(norm * hy, 1e-6)
        center = np.array([xs[item_id], -hy + half_h, 0.0])
        return _local_box(view, center, np.array([half_w, half_h, hz]))
    if chart == "map":
        region = _region_for(view, item_id)
        pts = np.asarray(region["polygon"], float)
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        center = np.array([(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, 0.0])
        half = np.array([(hi[0] - lo[0]) / 2, (hi[1] - lo[1]) / 2, hz])
        return _local_box(view, center, half)
    if chart == "graph":
        node = _node_for(view, item_id)
        r = GRAPH_NODE_RADIUS_FRACTION * min(hx, hy)
        center = np.array([node["pos"][0], node["pos"][1], 0.0])
        return _local_box(view, center, np.array([r, r, hz]))
    # point-like marks: scatter, line vertices, pcp midpoints
    local = _local_anchor(view, item_id, table)
    r = POINT_HALF_FRACTION * min(hx, hy)
    return _local_box(view, local, np.array([r, r, hz]))


def element_keys(view: ViewSpec, table: DataTable) -> list[Value]:
    """Item keys that have a grabbable element on this view."""
    if view.chart == "map":
        return [r["key"] for r in view.encodings.get("regions", [])]
    if view.chart == "graph":
        return [n["key"] for n in view.encodings.get("nodes", [])]
    return view_items(view, table)


def _cross3(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _dot3(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _sat_axes(a: OBB, b: OBB):
    candidates = list(a.axes) + list(b.axes)
    for u in a.axes:
        for v in b.axes:
            c = _cross3(u, v)
            norm = math.sqrt(_dot3(c, c))
            if norm > 1e-9:
                candidates.append((c[0] / norm, c[1] / norm, c[2] / norm))
    return candidates


def collide(a: OBB, b: OBB) -> bool:
    """Separating-axis test over 15 candidate axes; True iff none separates."""
    d = (
        b.center[0] - a.center[0],
        b.center[1] - a.center[1],
        b.center[2] - a.center[2],
    )
    for axis in _sat_axes(a, b):
        ra = sum(h * abs(_dot3(axis, u)) for h, u in zip(a.half_extents, a.axes))
        rb = sum(h * abs(_dot3(axis, v)) for h, v in zip(b.half_extents, b.axes))
        if abs(_dot3(axis, d)) > ra + rb:
            return False
    return True


def sat_margin(a: OBB, b: OBB) -> float:
    """Smallest |projected distance - extent sum| over all axes.

    Near zero means the pair sits on the touch boundary; used by tests to
    exclude knife-edge cases.
    """
    d = (
        b.center[0] - a.center[0],
        b.center[1] - a.center[1],
        b.center[2] - a.center[2],
    )
    best = math.inf
    for axis in _sat_axes(a, b):
        ra = sum(h * abs(_dot3(axis, u)) for h, u in zip(a.half_extents, a.axes))
        rb = sum(h * abs(_dot3(axis, v)) for h, v in zip(b.half_extents, b.axes))
        gap = abs(_dot3(axis, d)) - (ra + rb)
        best = min(best, abs(gap))
    return best


def gap_distance(a: ViewSpec, b: ViewSpec) -> float:
    """Center distance minus the two bounding-sphere radii (may be negative)."""
    ca = np.asarray(a.pose.position, float)
    cb = np.asarray(b.pose.position, float)
    return float(np.linalg.norm(ca - cb)) - (a.radius() + b.radius())


def orientation_angle(a: ViewSpec, b: ViewSpec) -> float:
    """Angle between panel normals in degrees, folded into [0, 90]."""
    na = a.pose.normal()
    nb = b.pose.normal()
    cosang = abs(float(np.clip(na @ nb, -1.0, 1.0)))
    return math.degrees(math.acos(cosang))


@dataclass(frozen=True)
class PairRelation:
    """Relations for the unordered pair (a, b) with a < b by id.

    ``vertical_offset`` is b's center height minus a's;
    ``embedded_a_in_b`` lists element keys of b containing a's center.
    """

    a: str
    b: str
    gap: float
    orientation: float
    scale_ratio: float
    vertical_offset: float
    colliding: bool
    embedded_a_in_b: tuple = ()
    embedded_b_in_a: tuple = ()


@dataclass(frozen=True)
class InducedRelations:
    pairs: dict = field(default_factory=dict)  # (a, b) sorted ids -> PairRelation
    velocities: dict = field(default_factory=dict)  # view id -> Vec3

    def pair(self, a: str, b: str) -> PairRelation:
        return self.pairs[tuple(sorted((a, b)))]

    def gap(self, a: str, b: str) -> float:
        return self.pair(a, b).gap

    def colliding(self, a: str, b: str) -> bool:
        return self.pair(a, b).colliding

    def vertical_offset(self, first: str, second: str) -> float:
        """second's center height minus first's."""
        p = self.pair(first, second)
        return p.vertical_offset if (first, second) == (p.a, p.b) else -p.vertical_offset

    def embedded_elements(self, inner: str, outer: str) -> tuple:
        p = self.pair(inner, outer)
        return p.embedded_a_in_b if (inner, outer) == (p.a, p.b) else p.embedded_b_in_a

    def velocity(self, view_id: str) -> Vec3:
        return self.velocities.get(view_id, (0.0, 0.0, 0.0))


def induced_relations(
    views: Iterable[ViewSpec],
    tables: dict[str, DataTable],
    prev_positions: dict[str, tuple[float, Vec3]] | None = None,
    now: float | None = None,
) -> InducedRelations:
    """Compute all pairwise relations plus per-view velocities.

    ``prev_positions`` maps view id to (t, position) from the previous
    relations pass; velocity is a one-step backward difference and zero
    without history.
    """
    view_list = sorted(views, key=lambda v: v.id)
    bodies = {v.id: obb_of(v, BODY) for v in view_list}
    pairs = {}
    for i, va in enumerate(view_list):
        for vb in view_list[i + 1 :]:
            ra, rb = va.radius(), vb.radius()
            ratio = max(ra, rb) / min(ra, rb) if min(ra, rb) > 0 else math.inf
            pairs[(va.id, vb.id)] = PairRelation(
                a=va.id,
                b=vb.id,
                gap=gap_distance(va, vb),
                orientation=orientation_angle(va, vb),
                scale_ratio=ratio,
                vertical_offset=vb.pose.position[1] - va.pose.position[1],
                colliding=collide(bodies[va.id], bodies[vb.id]),
                embedded_a_in_b=_embedded(va, vb, tables),
                embedded_b_in_a=_embedded(vb, va, tables),
            )
    velocities = {}
    for v in view_list:
        vel = (0.0, 0.0, 0.0)
        if prev_positions and now is not None and v.id in prev_positions:
            t_prev, pos_prev = prev_positions[v.id]
            dt = now - t_prev
            if dt > 0:
                cur = np.asarray(v.pose.position, float)
                vel = tuple(float(x) for x in (cur - np.asarray(pos_prev, float)) / dt)
        velocities[v.id] = vel
    return InducedRelations(pairs=pairs, velocities=velocities)


def _embedded(inner: ViewSpec, outer: ViewSpec, tables: dict[str, DataTable]) -> tuple:
    """Element keys of ``outer`` whose boxes contain ``inner``'s center."""
    if outer.chart not in ("graph", "map", "barchart", "stackedbar"):
        return ()
    table = tables.get(outer.table)
    if table is None:
        return ()
    center = inner.pose.position
    # elements sit inside (or fractionally beyond) the body panel, so a
    # padded body test cheaply rules out most pairs
    hx, hy, _ = outer.half_extents
    pad = GRAPH_NODE_RADIUS_FRACTION * min(hx, hy) * outer.pose.scale
    if not obb_of(outer, BODY).contains(center, pad=pad):
        return ()
    hits = []
    for key in element_keys(outer, table):
        if obb_of(outer, Part.element(key), table).contains(center):
            hits.append(key)
    return tuple(hits)
