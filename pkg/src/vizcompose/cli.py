"""Command-line interface: trace replay, relationship inspection, the
admissibility matrix, bundled demos, file validation, and the session
server.

Exit codes are a stable contract: 0 success, 2 usage or parse or
validation failure, 3 engine failure, 4 demo expectation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .compose import CompositeSpec, JuxtaposeLayout, LinkSet
from .config import thresholds_from_json
from .data_model import (
    COMPOSITE_ORDER,
    CompositeType,
    RelationshipKind,
    allowed_composites,
)
from .intent import InvalidEvent, SessionState, step
from .io import (
    Manifest,
    OrderError,
    ParseError,
    ValidationError,
    composite_to_json,
    load_manifest,
    load_trace,
    save_composites,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ENGINE = 3
EXIT_EXPECTATION = 4

DEMO_CASES = ("juxtaposed", "integrated", "superimposed", "overloaded", "nested")


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _load_manifest_file(path: str, thresholds_path: str | None = None) -> Manifest:
    manifest = load_manifest(_read(path))
    if thresholds_path:
        overrides = json.loads(_read(thresholds_path))
        thresholds = thresholds_from_json(overrides, base=manifest.thresholds)
        manifest = Manifest(
            tables=manifest.tables,
            declared=manifest.declared,
            views=manifest.views,
            thresholds=thresholds,
        )
    return manifest


def _replay(manifest: Manifest, events) -> SessionState:
    state = manifest.session()
    for event in events:
        state = step(state, event)
    return state


def _summary_line(spec: CompositeSpec) -> str:
    extra = ""
    if isinstance(spec.payload, LinkSet):
        extra = f" links={spec.payload.segment_count()}"
    elif isinstance(spec.payload, JuxtaposeLayout):
        extra = f" panels={len(spec.payload.panels)}"
    elif hasattr(spec.payload, "entries"):
        extra = f" anchors={len(spec.payload.entries)}"
    elif hasattr(spec.payload, "placements"):
        extra = f" nests={len(spec.payload.placements)}"
    elif hasattr(spec.payload, "scatter_points"):
        extra = f" points={len(spec.payload.scatter_points)}"
    views = ",".join(spec.constituents)
    return f"committed {spec.type.value} {spec.id}: views={views}{extra}"


def _print_commands(state: SessionState):
    for command in state.commands:
        if command.kind == "compose":
            print(_summary_line(command.spec))
        else:
            print(f"decomposed {command.composite_id} ({command.trigger.value})")


def cmd_replay(args) -> int:
    try:
        manifest = _load_manifest_file(args.manifest, args.thresholds)
        events = load_trace(_read(args.trace))
    except (ParseError, ValidationError, OrderError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        state = _replay(manifest, events)
    except InvalidEvent as err:
        print(f"engine error: {err}", file=sys.stderr)
        return EXIT_ENGINE
    Path(args.out).write_bytes(save_composites(state.committed_specs()))
    _print_commands(state)
    return EXIT_OK


def cmd_infer(args) -> int:
    try:
        manifest = _load_manifest_file(args.manifest)
    except (ParseError, ValidationError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    state = manifest.session()
    names = sorted(manifest.tables)
    for i, a in enumerate(names):
        for b in names[i:]:
            rel = state.relationship(a, b)
            if rel.kind is RelationshipKind.NONE:
                print(f"{a} <-> {b}: none [{rel.source.value}]")
            else:
                print(
                    f"{a} <-> {b}: {rel.kind.value} "
                    f"({rel.table_a}.{rel.a_key} ~ {rel.table_b}.{rel.b_key}) "
                    f"[{rel.source.value}]"
                )
    return EXIT_OK


_KIND_LABELS = (
    (RelationshipKind.NONE, "none"),
    (RelationshipKind.ITEM_ITEM, "item-item"),
    (RelationshipKind.ITEM_GROUP, "item-group"),
    (RelationshipKind.ITEM_DIMENSION, "item-dimension"),
)


def cmd_matrix(_args) -> int:
    for kind, label in _KIND_LABELS:
        allowed = allowed_composites(kind)
        cells = " ".join(c.value for c in COMPOSITE_ORDER if c in allowed)
        print(f"{label}: {cells}")
    return EXIT_OK


_DEMO_EXPECTED = {
    "juxtaposed": CompositeType.JUXTAPOSED,
    "integrated": CompositeType.INTEGRATED,
    "superimposed": CompositeType.SUPERIMPOSED,
    "overloaded": CompositeType.OVERLOADED,
    "nested": CompositeType.NESTED,
}


def demo_fixture(case: str) -> tuple[bytes, bytes]:
    root = resources.files("vizcompose") / "demos"
    manifest = (root / f"demo_{case}.manifest.json").read_bytes()
    trace = (root / f"demo_{case}.trace.jsonl").read_bytes()
    return manifest, trace


def cmd_demo(args) -> int:
    case = args.case
    manifest_bytes, trace_bytes = demo_fixture(case)
    try:
        manifest = load_manifest(manifest_bytes)
        events = load_trace(trace_bytes)
        state = _replay(manifest, events)
    except (ParseError, ValidationError, OrderError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidEvent as err:
        print(f"engine error: {err}", file=sys.stderr)
        return EXIT_ENGINE
    expected = _DEMO_EXPECTED[case]
    matching = [s for s in state.committed_specs() if s.type is expected]
    if not matching:
        got = [s.type.value for s in state.committed_specs()]
        print(
            f"expectation failed: wanted a {expected.value} commit, got {got}",
            file=sys.stderr,
        )
        return EXIT_EXPECTATION
    _print_commands(state)
    print(json.dumps(composite_to_json(matching[-1]), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        if args.manifest:
            load_manifest(_read(args.manifest))
            print(f"{args.manifest}: ok")
        if args.trace:
            events = load_trace(_read(args.trace))
            print(f"{args.trace}: ok ({len(events)} events)")
    except (ParseError, ValidationError, OrderError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .server import build_app

    app = build_app()
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vizcompose",
        description="compose and decompose visualization views from "
        "manipulation event streams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    replay = sub.add_parser("replay", help="replay a trace against a manifest")
    replay.add_argument("--manifest", required=True)
    replay.add_argument("--trace", required=True)
    replay.add_argument("--out", required=True)
    replay.add_argument("--thresholds", default=None)
    replay.set_defaults(func=cmd_replay)

    infer = sub.add_parser("infer", help="show inferred table relationships")
    infer.add_argument("--manifest", required=True)
    infer.set_defaults(func=cmd_infer)

    matrix = sub.add_parser("matrix", help="print the admissibility matrix")
    matrix.set_defaults(func=cmd_matrix)

    demo = sub.add_parser("demo", help="run a bundled scenario")
    demo.add_argument("--case", required=True, choices=DEMO_CASES)
    demo.set_defaults(func=cmd_demo)

    validate = sub.add_parser("validate", help="check a manifest or trace file")
    validate.add_argument("--manifest", default=None)
    validate.add_argument("--trace", default=None)
    validate.set_defaults(func=cmd_validate)

    serve = sub.add_parser("serve", help="run the session server")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
