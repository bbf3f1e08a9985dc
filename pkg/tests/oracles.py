"""Independent reference implementations used only by tests.

These deliberately avoid the production code paths: inference is
re-derived with naive counting loops, and box overlap is decided by
vertex containment plus exact segment clipping instead of separating
axes.
"""

from __future__ import annotations

import numpy as np

from vizcompose.data_model import (
    ColumnKind,
    DataTable,
    RelationshipKind,
)


def _count(values, v) -> int:
    n = 0
    for x in values:
        if x == v:
            n += 1
    return n


def _is_bijection(va, vb) -> bool:
    if len(va) != len(vb):
        return False
    for v in va:
        if _count(va, v) != 1 or _count(vb, v) != 1:
            return False
    for v in vb:
        if _count(va, v) != 1:
            return False
    return True


def _quant_count(table: DataTable, exclude: str) -> int:
    n = 0
    for c in table.columns:
        if c.kind is ColumnKind.QUANTITATIVE and c.name != exclude:
            n += 1
    return n


def _many_to_one(item: DataTable, dim: DataTable, col: str) -> bool:
    keys = [r[item.key] for r in item.rows]
    vals = [r[col] for r in dim.rows]
    for v in vals:
        if _count(keys, v) != 1:
            return False
    fanout2 = False
    for k in keys:
        c = _count(vals, k)
        if c == 0:
            return False
        if c >= 2:
            fanout2 = True
    return fanout2


def oracle_infer_kind(a: DataTable, b: DataTable) -> RelationshipKind:
    """Brute-force relationship classification over all column pairs."""
    kinds: set[RelationshipKind] = set()
    for ca in [c.name for c in a.columns]:
        for cb in [c.name for c in b.columns]:
            va = [r[ca] for r in a.rows]
            vb = [r[cb] for r in b.rows]
            if not _is_bijection(va, vb):
                continue
            a_m = _quant_count(a, ca)
            b_m = _quant_count(b, cb)
            if (a_m >= 2) != (b_m >= 2):
                kinds.add(RelationshipKind.ITEM_GROUP)
            else:
                kinds.add(RelationshipKind.ITEM_ITEM)
    for col in [c.name for c in b.columns]:
        if _many_to_one(a, b, col):
            kinds.add(RelationshipKind.ITEM_DIMENSION)
    for col in [c.name for c in a.columns]:
        if _many_to_one(b, a, col):
            kinds.add(RelationshipKind.ITEM_DIMENSION)
    for kind in (
        RelationshipKind.ITEM_ITEM,
        RelationshipKind.ITEM_GROUP,
        RelationshipKind.ITEM_DIMENSION,
    ):
        if kind in kinds:
            return kind
    return RelationshipKind.NONE


def _segment_hits_box(p0, p1, center, axes, half) -> bool:
    """Exact segment-vs-OBB test by clipping the parameter interval
    against the box's three slabs in its local frame."""
    d = np.asarray(p1, float) - np.asarray(p0, float)
    rel = np.asarray(p0, float) - np.asarray(center, float)
    lo, hi = 0.0, 1.0
    for i in range(3):
        axis = np.asarray(axes[i], float)
        o = float(rel @ axis)
        s = float(d @ axis)
        e = float(half[i])
        if abs(s) < 1e-15:
            if abs(o) > e:
                return False
            continue
        t0 = (-e - o) / s
        t1 = (e - o) / s
        if t0 > t1:
            t0, t1 = t1, t0
        lo = max(lo, t0)
        hi = min(hi, t1)
        if lo > hi:
            return False
    return True


def _box_corners(center, axes, half) -> np.ndarray:
    c = np.asarray(center, float)
    out = []
    for sx in (-1, 1):
        for sy in (-1, 1):
            for sz in (-1, 1):
                out.append(
                    c
                    + sx * half[0] * np.asarray(axes[0], float)
                    + sy * half[1] * np.asarray(axes[1], float)
                    + sz * half[2] * np.asarray(axes[2], float)
                )
    return np.array(out)


def _contains(center, axes, half, point, pad=0.0) -> bool:
    rel = np.asarray(point, float) - np.asarray(center, float)
    for i in range(3):
        if abs(float(rel @ np.asarray(axes[i], float))) > half[i] + pad:
            return False
    return True


_EDGE_INDICES = [
    (0, 1), (2, 3), (4, 5), (6, 7),
    (0, 2), (1, 3), (4, 6), (5, 7),
    (0, 4), (1, 5), (2, 6), (3, 7),
]


def oracle_obb_overlap(a, b) -> bool:
    """Vertex containment + edge clipping + a dense interior point grid.

    Complete for closed boxes: two convex boxes intersect iff a vertex of
    one lies in the other or an edge of one meets the other.
    """
    ca = _box_corners(a.center, a.axes, a.half_extents)
    cb = _box_corners(b.center, b.axes, b.half_extents)
    for p in ca:
        if _contains(b.center, b.axes, b.half_extents, p):
            return True
    for p in cb:
        if _contains(a.center, a.axes, a.half_extents, p):
            return True
    for i, j in _EDGE_INDICES:
        if _segment_hits_box(ca[i], ca[j], b.center, b.axes, b.half_extents):
            return True
        if _segment_hits_box(cb[i], cb[j], a.center, a.axes, a.half_extents):
            return True
    # Dense interior sampling for belt and suspenders (catches nothing the
    # edge tests miss, but keeps the oracle honest about interiors).
    ts = np.linspace(-1.0, 1.0, 5)
    for u in ts:
        for v in ts:
            for w in ts:
                p = (
                    np.asarray(a.center, float)
                    + u * a.half_extents[0] * np.asarray(a.axes[0], float)
                    + v * a.half_extents[1] * np.asarray(a.axes[1], float)
                    + w * a.half_extents[2] * np.asarray(a.axes[2], float)
                )
                if _contains(b.center, b.axes, b.half_extents, p):
                    return True
    return False
