"""Regenerate the bundled demo manifests and gesture traces.

Each demo is a miniature of one composition scenario: a cereal
scatterplot partition, linked protein/calorie charts, density bars onto
a six-state map, a scatterplot dropped between spread pcp axes, and
stacked player bars nested into a match graph. The script replays every
trace through the engine and refuses to write fixtures that do not
commit the expected composite type.

Usage: python3 scripts/make_demos.py [--check]
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from vizcompose.data_model import CompositeType
from vizcompose.intent import step
from vizcompose.io import load_manifest, load_trace, save_trace

REPO = Path(__file__).resolve().parent.parent
OUT_DIR = REPO / "src" / "vizcompose" / "demos"
FRONTEND_MANIFESTS = REPO / "frontend" / "src" / "manifests.ts"

CEREALS = [
    # name, sugar, protein, calories, fiber
    ("almondy", 2, 1, 90, 0),
    ("branflakes", 5, 6, 107, 2),
    ("cocoapuff", 8, 4, 124, 4),
    ("cornpops", 11, 2, 141, 6),
    ("fruitrings", 3, 7, 158, 8),
    ("granola", 6, 5, 85, 1),
    ("honeyohs", 9, 3, 102, 3),
    ("oatsquares", 12, 1, 119, 5),
    ("riceclusters", 4, 6, 136, 7),
    ("wheatbits", 7, 4, 153, 0),
]

STATES = [("AZ", 20), ("CO", 33), ("NM", 46), ("NV", 59), ("TX", 72), ("UT", 85)]

PLAYERS = [
    # id, strength, agility, endurance, intelligence
    ("p1", 3, 2, 4, 1),
    ("p2", 5, 5, 5, 5),
    ("p3", 7, 8, 6, 2),
    ("p4", 4, 3, 7, 6),
    ("p5", 6, 7, 4, 3),
]


def cereal_table(name="cereals", columns=("sugar", "protein", "calories", "fiber")):
    cols = [{"name": "name", "kind": "categorical"}]
    cols += [{"name": c, "kind": "quantitative"} for c in columns]
    idx = {"sugar": 1, "protein": 2, "calories": 3, "fiber": 4}
    rows = []
    for row in CEREALS:
        out = {"name": row[0]}
        for c in columns:
            out[c] = float(row[idx[c]])
        rows.append(out)
    return {"name": name, "key": "name", "columns": cols, "rows": rows}


def states_table():
    return {
        "name": "states",
        "key": "name",
        "columns": [
            {"name": "name", "kind": "categorical"},
            {"name": "density", "kind": "quantitative"},
        ],
        "rows": [{"name": n, "density": float(d)} for n, d in STATES],
    }


def state_regions(hx=0.3, hy=0.25):
    regions = []
    w, h = 2 * hx / 3, 2 * hy / 2
    for i, (name, _) in enumerate(STATES):
        col, row = i % 3, i // 3
        x0, y0 = -hx + col * w, -hy + row * h
        regions.append(
            {
                "key": name,
                "polygon": [
                    [x0, y0], [x0 + w, y0], [x0 + w, y0 + h], [x0, y0 + h]
                ],
            }
        )
    return regions


def player_tables():
    players = {
        "name": "players",
        "key": "id",
        "columns": [{"name": "id", "kind": "categorical"}],
        "rows": [{"id": p[0]} for p in PLAYERS],
    }
    stats = {
        "name": "stats",
        "key": "id",
        "columns": [
            {"name": "id", "kind": "categorical"},
            {"name": "strength", "kind": "quantitative"},
            {"name": "agility", "kind": "quantitative"},
            {"name": "endurance", "kind": "quantitative"},
            {"name": "intelligence", "kind": "quantitative"},
        ],
        "rows": [
            {
                "id": p, "strength": float(s), "agility": float(a),
                "endurance": float(e), "intelligence": float(q),
            }
            for p, s, a, e, q in PLAYERS
        ],
    }
    return players, stats


def graph_nodes(hx=0.5, hy=0.5):
    nodes = []
    r = 0.7 * min(hx, hy)
    for i, p in enumerate(PLAYERS):
        ang = 2 * math.pi * i / len(PLAYERS)
        nodes.append(
            {"key": p[0], "pos": [round(r * math.cos(ang), 6), round(r * math.sin(ang), 6)]}
        )
    return nodes


GRAPH_EDGES = [["p1", "p2"], ["p2", "p3"], ["p3", "p4"], ["p4", "p5"], ["p5", "p1"]]

IDENTITY = {"pos": [0.0, 0.0, 0.0], "rot": [0.0, 0.0, 0.0, 1.0], "scale": 1.0}
# panel lying flat, normal up: -90 degrees about x
FLAT = {
    "pos": [0.0, 0.8, 0.0],
    "rot": [-math.sin(math.pi / 4), 0.0, 0.0, math.cos(math.pi / 4)],
    "scale": 1.0,
}


def pose(pos, rot=(0.0, 0.0, 0.0, 1.0), scale=1.0):
    return {"pos": list(pos), "rot": list(rot), "scale": scale}


def ev(t, kind, hand=None, view=None, part=None, pos=None, rot=(0, 0, 0, 1)):
    obj = {"t": t, "event": kind}
    if hand:
        obj["hand"] = hand
    if view is not None:
        obj["target"] = {"view": view, "part": part or "body"}
    if pos is not None:
        obj["pose"] = pose(pos, rot)
    return obj


def demo_juxtaposed():
    manifest = {
        "tables": [cereal_table()],
        "views": [
            {
                "id": "scatter",
                "chart": "scatterplot",
                "table": "cereals",
                "encodings": {"x": "sugar", "y": "protein"},
                "halfExtents": [0.3, 0.25, 0.01],
                "pose": IDENTITY,
            }
        ],
    }
    # y handle sits at (-0.3, 0.25, 0); two bin steps = 0.5 m, overshoot a bit
    trace = [
        ev(0.0, "grab", "left", "scatter", "axis-y-handle"),
        ev(0.1, "move", "left", pos=(-0.3, 0.8, 0.0)),
        ev(0.2, "tick"),
        ev(0.3, "release", "left"),
    ]
    return manifest, trace, CompositeType.JUXTAPOSED


def demo_integrated():
    manifest = {
        "tables": [
            cereal_table("protein_t", ("protein",)),
            cereal_table("calories_t", ("calories",)),
        ],
        "views": [
            {
                "id": "protein-line",
                "chart": "linechart",
                "table": "protein_t",
                "encodings": {"value": "protein"},
                "halfExtents": [0.25, 0.2, 0.01],
                "pose": pose((0.0, 1.0, 0.0)),
            },
            {
                "id": "calorie-bars",
                "chart": "barchart",
                "table": "calories_t",
                "encodings": {"value": "calories"},
                "halfExtents": [0.25, 0.2, 0.01],
                "pose": pose((2.0, 1.0, 0.0)),
            },
        ],
    }
    trace = [
        ev(0.0, "grab", "right", "calorie-bars", "body"),
        ev(0.1, "move", "right", pos=(1.2, 1.0, 0.0)),
        ev(0.2, "tick"),
        ev(0.3, "move", "right", pos=(0.75, 1.0, 0.0)),
        ev(0.4, "tick"),
        ev(0.5, "release", "right"),
    ]
    return manifest, trace, CompositeType.INTEGRATED


def demo_superimposed():
    manifest = {
        "tables": [states_table()],
        "views": [
            {
                "id": "map",
                "chart": "map",
                "table": "states",
                "encodings": {"value": "density", "regions": state_regions()},
                "halfExtents": [0.3, 0.25, 0.01],
                "pose": FLAT,
            },
            {
                "id": "bars",
                "chart": "barchart",
                "table": "states",
                "encodings": {"value": "density"},
                "halfExtents": [0.3, 0.2, 0.01],
                "pose": pose((1.5, 0.8, 0.0)),
            },
        ],
    }
    trace = [
        ev(0.0, "grab", "right", "bars", "body"),
        ev(0.1, "move", "right", pos=(0.7, 0.9, 0.0)),
        ev(0.2, "tick"),
        ev(0.3, "move", "right", pos=(0.0, 0.95, 0.0)),
        ev(0.4, "tick"),
        ev(0.5, "release", "right"),
    ]
    return manifest, trace, CompositeType.SUPERIMPOSED


def demo_overloaded():
    manifest = {
        "tables": [cereal_table()],
        "views": [
            {
                "id": "pcp",
                "chart": "pcp",
                "table": "cereals",
                "encodings": {"axes": ["sugar", "protein", "calories", "fiber"]},
                "halfExtents": [0.45, 0.3, 0.01],
                "pose": IDENTITY,
            }
        ],
    }
    # axes 0 and 1 sit at x = -0.45 and -0.15; default gap 0.3 m
    trace = [
        ev(0.0, "grab", "left", "pcp", "pcp-axis:0"),
        ev(0.1, "grab", "right", "pcp", "pcp-axis:1"),
        ev(0.2, "move", "right", pos=(0.05, 0.0, 0.0)),  # gap 0.5 > 0.45
        ev(0.3, "tick"),
        ev(0.4, "release", "right"),
        ev(0.5, "release", "left"),
        ev(0.6, "grab", "left", "pcp-scatter-0-1", "body"),
        ev(0.7, "move", "left", pos=(-0.3, 0.0, 0.0)),
        ev(0.8, "tick"),
        ev(0.9, "release", "left"),
    ]
    return manifest, trace, CompositeType.OVERLOADED


def demo_nested():
    players, stats = player_tables()
    nodes = graph_nodes()
    manifest = {
        "tables": [players, stats],
        "views": [
            {
                "id": "graph",
                "chart": "graph",
                "table": "players",
                "encodings": {"nodes": nodes, "edges": GRAPH_EDGES},
                "halfExtents": [0.5, 0.5, 0.01],
                "pose": IDENTITY,
            },
            {
                "id": "stats-bars",
                "chart": "stackedbar",
                "table": "stats",
                "encodings": {
                    "values": ["strength", "agility", "endurance", "intelligence"]
                },
                "halfExtents": [0.25, 0.2, 0.01],
                "pose": pose((1.2, 0.0, 0.0)),
            },
        ],
    }
    p3 = next(n for n in nodes if n["key"] == "p3")
    trace = [
        ev(0.0, "grab", "left", "stats-bars", "element:p3"),
        ev(0.1, "move", "left", pos=(0.6, 0.1, 0.0)),
        ev(0.2, "tick"),
        ev(0.3, "move", "left", pos=(p3["pos"][0], p3["pos"][1], 0.0)),
        ev(0.4, "tick"),
        ev(0.5, "release", "left"),
    ]
    return manifest, trace, CompositeType.NESTED


DEMOS = {
    "juxtaposed": demo_juxtaposed,
    "integrated": demo_integrated,
    "superimposed": demo_superimposed,
    "overloaded": demo_overloaded,
    "nested": demo_nested,
}


def verify(case: str, manifest_doc: dict, trace_lines: list, expected: CompositeType):
    manifest = load_manifest(json.dumps(manifest_doc))
    events = load_trace("\n".join(json.dumps(line) for line in trace_lines))
    state = manifest.session()
    for event in events:
        state = step(state, event)
    committed = [c.spec.type for c in state.commands if c.kind == "compose"]
    if expected not in committed:
        raise SystemExit(
            f"{case}: expected a {expected.value} commit, got {committed}"
        )
    return state


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--check", action="store_true",
        help="verify fixtures replay correctly without writing",
    )
    args = parser.parse_args()
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    manifests = {}
    for case, build in DEMOS.items():
        manifest_doc, trace_lines, expected = build()
        state = verify(case, manifest_doc, trace_lines, expected)
        n_commits = sum(1 for c in state.commands if c.kind == "compose")
        print(f"{case}: ok ({n_commits} commit)")
        manifests[case] = manifest_doc
        if args.check:
            continue
        manifest_path = OUT_DIR / f"demo_{case}.manifest.json"
        trace_path = OUT_DIR / f"demo_{case}.trace.jsonl"
        manifest_path.write_text(json.dumps(manifest_doc, indent=2) + "\n")
        events = load_trace("\n".join(json.dumps(line) for line in trace_lines))
        trace_path.write_bytes(save_trace(events))
    if not args.check:
        if FRONTEND_MANIFESTS.parent.is_dir():
            body = json.dumps(manifests, indent=2, sort_keys=True)
            FRONTEND_MANIFESTS.write_text(
                "// Generated by scripts/make_demos.py; do not edit by hand.\n"
                "import type { ManifestJson } from \"./protocol.js\";\n\n"
                f"export const MANIFESTS: Record<string, ManifestJson> = {body};\n"
            )
            print(f"playground manifests written to {FRONTEND_MANIFESTS}")
        print(f"fixtures written to {OUT_DIR}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
