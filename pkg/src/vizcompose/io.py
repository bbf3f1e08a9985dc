"""Manifest, trace, and composite file formats.

Manifests (`.manifest.json`) declare tables, optional relationships,
views, and threshold overrides. Traces (`.trace.jsonl`) hold one event
per line. Composites (`.composite.json`) are written canonically:
sorted keys, six significant digits, byte-identical across runs.
Unknown fields are rejected everywhere so golden files stay honest.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .config import Thresholds, thresholds_from_json
from .data_model import (
    Column,
    ColumnKind,
    CompositeType,
    DataTable,
    RelationSource,
    Relationship,
    RelationshipKind,
    validate_table,
)
from .compose import (
    AnchorEntry,
    AnchorMap,
    CompositeSpec,
    JuxtaposeLayout,
    LinkGroup,
    LinkSegment,
    LinkSet,
    NestPlacement,
    NestPlacementSet,
    OverloadPlacement,
    PAYLOAD_KEYS,
    Panel,
    ScatterPoint,
    TransformEntry,
)
from .intent import InteractionEvent, SessionState, init_session
from .scene import CHART_KINDS, Part, Pose, ViewSpec


class ParseError(Exception):
    def __init__(self, message, line=None, position=None):
        self.line = line
        self.position = position
        where = f" at line {line}" if line is not None else ""
        where += f" (offset {position})" if position is not None else ""
        super().__init__(f"{message}{where}")


class ValidationError(Exception):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class OrderError(Exception):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class Manifest:
    tables: dict
    declared: tuple[Relationship, ...]
    views: tuple[ViewSpec, ...]
    thresholds: Thresholds = field(default_factory=Thresholds)

    def session(self) -> SessionState:
        return init_session(
            self.tables, list(self.views), list(self.declared), self.thresholds
        )


def _check_keys(obj: dict, allowed: set, path: str):
    if not isinstance(obj, dict):
        raise ValidationError(path, f"expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in allowed:
            raise ValidationError(path, f"unknown field {key!r}")


def _need(obj: dict, key: str, path: str):
    if key not in obj:
        raise ValidationError(path, f"missing field {key!r}")
    return obj[key]


def _value_ok(v) -> bool:
    if isinstance(v, str):
        return True
    if isinstance(v, bool):
        return False
    if isinstance(v, (int, float)):
        return math.isfinite(v)
    return False


def load_manifest(data: bytes | str) -> Manifest:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, line=err.lineno, position=err.pos) from err
    _check_keys(doc, {"tables", "relationships", "views", "thresholds"}, "$")
    tables = _parse_tables(_need(doc, "tables", "$"))
    declared = _parse_relationships(doc.get("relationships", []), tables)
    views = _parse_views(doc.get("views", []), tables)
    thresholds = Thresholds()
    if "thresholds" in doc:
        try:
            thresholds = thresholds_from_json(doc["thresholds"])
        except ValueError as err:
            raise ValidationError("thresholds", str(err)) from err
    return Manifest(
        tables=tables, declared=tuple(declared), views=tuple(views),
        thresholds=thresholds,
    )


def _parse_tables(items) -> dict:
    if not isinstance(items, list):
        raise ValidationError("tables", "expected a list")
    tables: dict = {}
    for i, obj in enumerate(items):
        path = f"tables[{i}]"
        _check_keys(obj, {"name", "key", "columns", "rows"}, path)
        name = _need(obj, "name", path)
        cols = []
        for j, c in enumerate(_need(obj, "columns", path)):
            cpath = f"{path}.columns[{j}]"
            _check_keys(c, {"name", "kind"}, cpath)
            kind_text = _need(c, "kind", cpath)
            try:
                kind = ColumnKind(kind_text)
            except ValueError:
                raise ValidationError(cpath, f"unknown column kind {kind_text!r}")
            cols.append(Column(_need(c, "name", cpath), kind))
        rows = []
        for j, row in enumerate(_need(obj, "rows", path)):
            rpath = f"{path}.rows[{j}]"
            if not isinstance(row, dict):
                raise ValidationError(rpath, "expected an object")
            for col, v in row.items():
                if not _value_ok(v):
                    raise ValidationError(
                        rpath, f"column {col!r} must be text or a finite number"
                    )
            rows.append(dict(row))
        table = DataTable(
            name=name, key=_need(obj, "key", path),
            columns=tuple(cols), rows=tuple(rows),
        )
        for violation in validate_table(table):
            raise ValidationError(path, violation)
        if name in tables:
            raise ValidationError(path, f"duplicate table name {name!r}")
        tables[name] = table
    return tables


_KIND_WIRE = {
    "none": RelationshipKind.NONE,
    "item-item": RelationshipKind.ITEM_ITEM,
    "item-group": RelationshipKind.ITEM_GROUP,
    "item-dimension": RelationshipKind.ITEM_DIMENSION,
}


def _parse_relationships(items, tables) -> list[Relationship]:
    out = []
    for i, obj in enumerate(items):
        path = f"relationships[{i}]"
        _check_keys(obj, {"a", "b", "kind", "aKey", "bKey"}, path)
        a = _need(obj, "a", path)
        b = _need(obj, "b", path)
        kind_text = _need(obj, "kind", path)
        if kind_text not in _KIND_WIRE:
            raise ValidationError(path, f"unknown kind {kind_text!r}")
        kind = _KIND_WIRE[kind_text]
        for t in (a, b):
            if t not in tables:
                raise ValidationError(path, f"unknown table {t!r}")
        a_key = obj.get("aKey")
        b_key = obj.get("bKey")
        if kind is RelationshipKind.NONE:
            if a_key or b_key:
                raise ValidationError(path, "'none' relationships carry no keys")
        else:
            if a_key not in tables[a].column_names():
                raise ValidationError(path, f"aKey {a_key!r} not a column of {a!r}")
            if b_key not in tables[b].column_names():
                raise ValidationError(path, f"bKey {b_key!r} not a column of {b!r}")
        out.append(
            Relationship(kind, a, b, a_key, b_key, RelationSource.DECLARED)
        )
    return out


_ENCODING_KEYS = {
    "scatterplot": {"x", "y"},
    "barchart": {"value", "item"},
    "linechart": {"value"},
    "stackedbar": {"values", "item"},
    "map": {"value", "regions"},
    "pcp": {"axes"},
    "graph": {"nodes", "edges"},
}

_REQUIRED_ENCODINGS = {
    "scatterplot": {"x", "y"},
    "barchart": {"value"},
    "linechart": {"value"},
    "stackedbar": {"values"},
    "map": {"regions"},
    "pcp": {"axes"},
    "graph": {"nodes"},
}


def _parse_views(items, tables) -> list[ViewSpec]:
    views = []
    seen = set()
    for i, obj in enumerate(items):
        path = f"views[{i}]"
        _check_keys(
            obj, {"id", "chart", "table", "encodings", "halfExtents", "pose"}, path
        )
        vid = _need(obj, "id", path)
        chart = _need(obj, "chart", path)
        table_name = _need(obj, "table", path)
        if chart not in CHART_KINDS:
            raise ValidationError(path, f"unknown chart {chart!r}")
        if table_name not in tables:
            raise ValidationError(f"{path}.table", f"unknown table {table_name!r}")
        if vid in seen:
            raise ValidationError(path, f"duplicate view id {vid!r}")
        seen.add(vid)
        table = tables[table_name]
        encodings = dict(_need(obj, "encodings", path))
        epath = f"{path}.encodings"
        _check_keys(encodings, _ENCODING_KEYS[chart], epath)
        for req in _REQUIRED_ENCODINGS[chart]:
            if req not in encodings:
                raise ValidationError(epath, f"{chart} needs {req!r}")
        half = tuple(obj.get("halfExtents", (0.25, 0.2, 0.01)))
        if len(half) != 3 or any(
            not isinstance(h, (int, float)) or h <= 0 for h in half
        ):
            raise ValidationError(f"{path}.halfExtents", "expected 3 positive numbers")
        _validate_encodings(chart, encodings, table, half, epath)
        pose = _parse_pose(obj.get("pose"), f"{path}.pose") if "pose" in obj else Pose()
        views.append(
            ViewSpec(
                id=vid, chart=chart, table=table_name, encodings=encodings,
                half_extents=tuple(float(h) for h in half), pose=pose,
            )
        )
    return views


def _validate_encodings(chart, encodings, table, half, path):
    columns = set(table.column_names())

    def check_column(col, where):
        if col not in columns:
            raise ValidationError(where, f"unknown column {col!r}")

    if chart == "scatterplot":
        check_column(encodings["x"], f"{path}.x")
        check_column(encodings["y"], f"{path}.y")
    elif chart in ("barchart", "linechart"):
        check_column(encodings["value"], f"{path}.value")
    elif chart == "stackedbar":
        for col in encodings["values"]:
            check_column(col, f"{path}.values")
    elif chart == "pcp":
        axes = encodings["axes"]
        if len(axes) < 2:
            raise ValidationError(f"{path}.axes", "pcp needs at least 2 axes")
        for col in axes:
            check_column(col, f"{path}.axes")
    elif chart == "map":
        if "value" in encodings:
            check_column(encodings["value"], f"{path}.value")
        keys = set()
        for r, region in enumerate(encodings["regions"]):
            rpath = f"{path}.regions[{r}]"
            _check_keys(region, {"key", "polygon"}, rpath)
            poly = _need(region, "polygon", rpath)
            if len(poly) < 3:
                raise ValidationError(rpath, "polygon needs 3+ points")
            for pt in poly:
                if abs(pt[0]) > half[0] + 1e-9 or abs(pt[1]) > half[1] + 1e-9:
                    raise ValidationError(rpath, "polygon leaves the panel")
            keys.add(region["key"])
        missing = set(table.key_values()) - keys
        if missing:
            raise ValidationError(
                path, f"rows without regions: {sorted(missing, key=str)}"
            )
    elif chart == "graph":
        node_keys = set()
        for n, node in enumerate(encodings["nodes"]):
            npath = f"{path}.nodes[{n}]"
            _check_keys(node, {"key", "pos"}, npath)
            pos = _need(node, "pos", npath)
            if abs(pos[0]) > half[0] + 1e-9 or abs(pos[1]) > half[1] + 1e-9:
                raise ValidationError(npath, "node leaves the panel")
            node_keys.add(node["key"])
        for e, edge in enumerate(encodings.get("edges", [])):
            for end in edge:
                if end not in node_keys:
                    raise ValidationError(
                        f"{path}.edges[{e}]", f"unknown node {end!r}"
                    )
        missing = set(table.key_values()) - node_keys
        if missing:
            raise ValidationError(
                path, f"rows without nodes: {sorted(missing, key=str)}"
            )


def _parse_pose(obj, path) -> Pose:
    _check_keys(obj, {"pos", "rot", "scale"}, path)
    pos = tuple(float(x) for x in obj.get("pos", (0, 0, 0)))
    rot = tuple(float(x) for x in obj.get("rot", (0, 0, 0, 1)))
    scale = float(obj.get("scale", 1.0))
    if len(pos) != 3:
        raise ValidationError(path, "pos needs 3 numbers")
    if len(rot) != 4:
        raise ValidationError(path, "rot needs 4 numbers")
    try:
        return Pose(position=pos, rotation=rot, scale=scale)
    except ValueError as err:
        raise ValidationError(path, str(err)) from err


def pose_to_json(pose: Pose) -> dict:
    return {
        "pos": list(pose.position),
        "rot": list(pose.rotation),
        "scale": pose.scale,
    }


def view_to_json(view: ViewSpec) -> dict:
    return {
        "id": view.id,
        "chart": view.chart,
        "table": view.table,
        "encodings": view.encodings,
        "halfExtents": list(view.half_extents),
        "pose": pose_to_json(view.pose),
    }


def view_from_json(obj: dict) -> ViewSpec:
    return ViewSpec(
        id=obj["id"],
        chart=obj["chart"],
        table=obj["table"],
        encodings=dict(obj["encodings"]),
        half_extents=tuple(float(h) for h in obj["halfExtents"]),
        pose=_parse_pose(obj["pose"], "view.pose"),
    )


# -- traces ------------------------------------------------------------


def parse_event(obj: dict, line: int = 0) -> InteractionEvent:
    path = f"line {line}" if line else "event"
    _check_keys(obj, {"t", "event", "hand", "target", "pose"}, path)
    t = _need(obj, "t", path)
    kind = _need(obj, "event", path)
    if kind not in ("grab", "move", "release", "tick"):
        raise ValidationError(path, f"unknown event {kind!r}")
    hand = obj.get("hand")
    target = None
    pose = None
    if kind == "grab":
        tgt = _need(obj, "target", path)
        _check_keys(tgt, {"view", "part"}, f"{path}.target")
        target = (tgt["view"], Part.from_wire(tgt["part"]))
    elif "target" in obj:
        raise ValidationError(path, "target is only valid on grab events")
    if kind == "move":
        pose = _parse_pose(_need(obj, "pose", path), f"{path}.pose")
    elif "pose" in obj:
        raise ValidationError(path, "pose is only valid on move events")
    try:
        return InteractionEvent(
            t=float(t), kind=kind, hand=hand, target=target, pose=pose
        )
    except ValueError as err:
        raise ValidationError(path, str(err)) from err


def event_to_json(event: InteractionEvent) -> dict:
    obj: dict = {"t": event.t, "event": event.kind}
    if event.hand is not None:
        obj["hand"] = event.hand
    if event.target is not None:
        view_id, part = event.target
        obj["target"] = {"view": view_id, "part": part.wire()}
    if event.pose is not None:
        obj["pose"] = pose_to_json(event.pose)
    return obj


def load_trace(data: bytes | str) -> list[InteractionEvent]:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    events = []
    last_t = None
    for line_no, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as err:
            raise ParseError(err.msg, line=line_no) from err
        event = parse_event(obj, line_no)
        if last_t is not None and event.t < last_t:
            raise OrderError(line_no, f"t={event.t} regresses below {last_t}")
        last_t = event.t
        events.append(event)
    return events


def save_trace(events) -> bytes:
    lines = [canonical_json(event_to_json(e)) for e in events]
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- composites ---------------------------------------------------------


def _interval(iv):
    return None if iv is None else [iv[0], iv[1]]


def composite_to_json(spec: CompositeSpec) -> dict:
    obj = {
        "id": spec.id,
        "type": spec.type.value,
        "constituents": list(spec.constituents),
        "views": [view_to_json(v) for v in spec.views],
        "transforms": [
            {
                "element": t.element,
                "start": pose_to_json(t.start),
                "target": pose_to_json(t.target),
            }
            for t in spec.transforms
        ],
    }
    payload = spec.payload
    key = PAYLOAD_KEYS[spec.type]
    if isinstance(payload, LinkSet):
        obj[key] = [
            {
                "a": g.a_view,
                "b": g.b_view,
                "segments": [
                    {
                        "aItem": s.a_item,
                        "bItem": s.b_item,
                        "endA": list(s.end_a),
                        "endB": list(s.end_b),
                    }
                    for s in g.segments
                ],
            }
            for g in payload.groups
        ]
    elif isinstance(payload, AnchorMap):
        obj[key] = {
            "host": payload.host,
            "client": payload.client,
            "entries": [
                {
                    "item": e.client_item,
                    "region": e.host_region,
                    "target": pose_to_json(e.target),
                }
                for e in payload.entries
            ],
        }
    elif isinstance(payload, NestPlacementSet):
        obj[key] = {
            "host": payload.host,
            "client": payload.client,
            "placements": [
                {
                    "element": p.host_element,
                    "row": p.client_row,
                    "target": pose_to_json(p.target),
                    "scale": p.scale_factor,
                }
                for p in payload.placements
            ],
        }
    elif isinstance(payload, OverloadPlacement):
        obj[key] = {
            "pcp": payload.pcp_view,
            "client": payload.client,
            "axisPair": list(payload.axis_pair),
            "rect": list(payload.region_rect),
            "points": [
                {"row": p.row, "x": p.x, "y": p.y} for p in payload.scatter_points
            ],
            "hidden": list(payload.hidden_polyline_segments),
        }
    elif isinstance(payload, JuxtaposeLayout):
        obj[key] = {
            "source": payload.source,
            "mode": payload.mode,
            "binsX": payload.bins_x,
            "binsY": payload.bins_y,
            "axisX": payload.axis_x_column,
            "axisY": payload.axis_y_column,
            "gap": payload.gap,
            "curvature": payload.curvature,
            "panels": [
                {
                    "view": view_to_json(p.view),
                    "col": p.col,
                    "row": p.row,
                    "xInterval": _interval(p.x_interval),
                    "yInterval": _interval(p.y_interval),
                    "rows": list(p.row_keys),
                }
                for p in payload.panels
            ],
        }
    return obj


def composite_from_json(obj: dict) -> CompositeSpec:
    ctype = CompositeType(obj["type"])
    key = PAYLOAD_KEYS[ctype]
    raw = obj[key]
    if ctype is CompositeType.INTEGRATED:
        payload = LinkSet(
            tuple(
                LinkGroup(
                    g["a"], g["b"],
                    tuple(
                        LinkSegment(
                            s["aItem"], s["bItem"],
                            tuple(s["endA"]), tuple(s["endB"]),
                        )
                        for s in g["segments"]
                    ),
                )
                for g in raw
            )
        )
    elif ctype is CompositeType.SUPERIMPOSED:
        payload = AnchorMap(
            raw["host"], raw["client"],
            tuple(
                AnchorEntry(
                    e["item"], e["region"], _parse_pose(e["target"], "target")
                )
                for e in raw["entries"]
            ),
        )
    elif ctype is CompositeType.NESTED:
        payload = NestPlacementSet(
            raw["host"], raw["client"],
            tuple(
                NestPlacement(
                    p["element"], p["row"],
                    _parse_pose(p["target"], "target"), float(p["scale"]),
                )
                for p in raw["placements"]
            ),
        )
    elif ctype is CompositeType.OVERLOADED:
        payload = OverloadPlacement(
            pcp_view=raw["pcp"],
            client=raw["client"],
            axis_pair=tuple(raw["axisPair"]),
            region_rect=tuple(float(x) for x in raw["rect"]),
            scatter_points=tuple(
                ScatterPoint(p["row"], float(p["x"]), float(p["y"]))
                for p in raw["points"]
            ),
            hidden_polyline_segments=tuple(raw["hidden"]),
        )
    else:
        payload = JuxtaposeLayout(
            source=raw["source"],
            mode=raw["mode"],
            panels=tuple(
                Panel(
                    view=view_from_json(p["view"]),
                    col=p["col"],
                    row=p["row"],
                    x_interval=None if p["xInterval"] is None else tuple(p["xInterval"]),
                    y_interval=None if p["yInterval"] is None else tuple(p["yInterval"]),
                    row_keys=tuple(p["rows"]),
                )
                for p in raw["panels"]
            ),
            bins_x=raw["binsX"],
            bins_y=raw["binsY"],
            axis_x_column=raw["axisX"],
            axis_y_column=raw["axisY"],
            gap=float(raw["gap"]),
            curvature=float(raw["curvature"]),
        )
    return CompositeSpec(
        id=obj["id"],
        type=ctype,
        constituents=tuple(obj["constituents"]),
        payload=payload,
        transforms=tuple(
            TransformEntry(
                t["element"],
                _parse_pose(t["start"], "start"),
                _parse_pose(t["target"], "target"),
            )
            for t in obj["transforms"]
        ),
        views=tuple(view_from_json(v) for v in obj["views"]),
    )


def save_composite(spec: CompositeSpec) -> bytes:
    return canonical_json(composite_to_json(spec)).encode("utf-8")


def load_composite(data: bytes | str) -> CompositeSpec:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        return composite_from_json(json.loads(data))
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, line=err.lineno, position=err.pos) from err


def save_composites(specs) -> bytes:
    return canonical_json([composite_to_json(s) for s in specs]).encode("utf-8")


# -- canonical serialization --------------------------------------------


def format_float(x: float) -> str:
    """Six significant digits, trailing noise trimmed ('0.15', not
    '0.150000001'); integral floats render bare."""
    if not math.isfinite(x):
        raise ValueError("non-finite number in canonical output")
    if x == 0:
        return "0"
    text = format(x, ".6g")
    return text


def canonical_json(value) -> str:
    """Deterministic JSON: sorted keys, no whitespace, fixed float form."""
    out: list[str] = []
    _emit(value, out)
    return "".join(out)


def _emit(value, out: list[str]):
    if value is None:
        out.append("null")
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(format_float(value))
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    elif isinstance(value, dict):
        out.append("{")
        for i, key in enumerate(sorted(value)):
            if i:
                out.append(",")
            out.append(json.dumps(str(key), ensure_ascii=False))
            out.append(":")
            _emit(value[key], out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")
