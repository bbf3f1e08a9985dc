import json

import pytest

from vizcompose.compose import DecomposeTrigger, compose_integrated, decompose
from vizcompose.data_model import RelationshipKind, infer_relationship
from vizcompose.io import (
    OrderError,
    ParseError,
    ValidationError,
    canonical_json,
    composite_from_json,
    composite_to_json,
    event_to_json,
    format_float,
    load_composite,
    load_manifest,
    load_trace,
    save_composite,
    save_trace,
)
from vizcompose.scene import Pose, ViewSpec

from . import scenarios as sc


def minimal_manifest(**overrides):
    doc = {
        "tables": [
            {
                "name": "cereals",
                "key": "name",
                "columns": [
                    {"name": "name", "kind": "categorical"},
                    {"name": "sugar", "kind": "quantitative"},
                    {"name": "protein", "kind": "quantitative"},
                ],
                "rows": [
                    {"name": "bran", "sugar": 2.0, "protein": 4.0},
                    {"name": "corn", "sugar": 9.0, "protein": 1.0},
                ],
            }
        ],
        "views": [
            {
                "id": "v1",
                "chart": "scatterplot",
                "table": "cereals",
                "encodings": {"x": "sugar", "y": "protein"},
                "halfExtents": [0.3, 0.25, 0.01],
                "pose": {"pos": [0, 0, 0], "rot": [0, 0, 0, 1], "scale": 1.0},
            }
        ],
    }
    doc.update(overrides)
    return doc


class TestManifest:
    def test_load_ok(self):
        m = load_manifest(json.dumps(minimal_manifest()))
        assert set(m.tables) == {"cereals"}
        assert m.views[0].id == "v1"

    def test_dangling_table_reference(self):
        doc = minimal_manifest()
        doc["views"][0]["table"] = "ghost"
        with pytest.raises(ValidationError) as err:
            load_manifest(json.dumps(doc))
        assert "views[0].table" in str(err.value)

    def test_empty_file_is_parse_error(self):
        with pytest.raises(ParseError):
            load_manifest(b"")

    def test_unknown_field_rejected(self):
        doc = minimal_manifest()
        doc["extra"] = 1
        with pytest.raises(ValidationError):
            load_manifest(json.dumps(doc))

    def test_unknown_encoding_rejected(self):
        doc = minimal_manifest()
        doc["views"][0]["encodings"]["color"] = "sugar"
        with pytest.raises(ValidationError):
            load_manifest(json.dumps(doc))

    def test_declared_relationship_overrides_inference(self):
        doc = minimal_manifest()
        doc["tables"].append(
            {
                "name": "other",
                "key": "name",
                "columns": [
                    {"name": "name", "kind": "categorical"},
                    {"name": "cal", "kind": "quantitative"},
                ],
                "rows": [
                    {"name": "bran", "cal": 100.0},
                    {"name": "corn", "cal": 120.0},
                ],
            }
        )
        doc["relationships"] = [
            {"a": "cereals", "b": "other", "kind": "none"}
        ]
        m = load_manifest(json.dumps(doc))
        state = m.session()
        rel = state.relationship("cereals", "other")
        assert rel.kind is RelationshipKind.NONE

    def test_thresholds_override(self):
        doc = minimal_manifest(thresholds={"tauLink": 0.2})
        m = load_manifest(json.dumps(doc))
        assert m.thresholds.tau_link == 0.2
        assert m.thresholds.tau_juxt == 0.3

    def test_bad_threshold_name(self):
        doc = minimal_manifest(thresholds={"tau_link": 0.2})
        with pytest.raises(ValidationError):
            load_manifest(json.dumps(doc))


class TestTrace:
    def test_three_line_trace(self):
        text = "\n".join(
            [
                '{"t": 0.0, "event": "grab", "hand": "left",'
                ' "target": {"view": "v1", "part": "body"}}',
                '{"t": 0.1, "event": "move", "hand": "left",'
                ' "pose": {"pos": [0.5, 0, 0], "rot": [0, 0, 0, 1], "scale": 1}}',
                '{"t": 0.2, "event": "release", "hand": "left"}',
            ]
        )
        events = load_trace(text)
        assert [e.kind for e in events] == ["grab", "move", "release"]

    def test_time_regression(self):
        text = (
            '{"t": 1.0, "event": "tick"}\n'
            '{"t": 0.5, "event": "tick"}\n'
        )
        with pytest.raises(OrderError) as err:
            load_trace(text)
        assert err.value.line == 2

    def test_blank_lines_skipped(self):
        text = '\n\n{"t": 0.0, "event": "tick"}\n\n'
        assert len(load_trace(text)) == 1

    def test_parse_error_line(self):
        with pytest.raises(ParseError) as err:
            load_trace('{"t": 0.0, "event": "tick"}\nnot json\n')
        assert err.value.line == 2

    def test_round_trip(self):
        text = (
            '{"t": 0.0, "event": "grab", "hand": "right",'
            ' "target": {"view": "v1", "part": "element:corn"}}\n'
            '{"t": 0.5, "event": "release", "hand": "right"}\n'
        )
        events = load_trace(text)
        again = load_trace(save_trace(events))
        assert events == again


class TestComposite:
    def _spec(self):
        protein = sc.cereal_measure_table("protein_t", "protein")
        calories = sc.cereal_measure_table("calories_t", "calories")
        line = ViewSpec(
            id="line", chart="linechart", table="protein_t",
            encodings={"value": "protein"}, pose=Pose(position=(0, 1, 0)),
        )
        bars = ViewSpec(
            id="bars", chart="barchart", table="calories_t",
            encodings={"value": "calories"}, pose=Pose(position=(0.7, 1, 0)),
        )
        rel = infer_relationship(protein, calories)
        return compose_integrated(
            line, bars, rel, {"protein_t": protein, "calories_t": calories}
        )

    def test_bytes_identical(self):
        spec = self._spec()
        assert save_composite(spec) == save_composite(spec)

    def test_round_trip_structural(self):
        spec = self._spec()
        again = load_composite(save_composite(spec))
        assert again.id == spec.id
        assert again.type == spec.type
        assert again.constituents == spec.constituents
        _assert_tree_close(
            composite_to_json(again), composite_to_json(spec)
        )

    def test_round_trip_bytes_idempotent(self):
        spec = self._spec()
        once = save_composite(spec)
        twice = save_composite(load_composite(once))
        assert once == twice

    def test_decompose_after_reload(self):
        spec = self._spec()
        again = load_composite(save_composite(spec))
        restored = decompose(again, DecomposeTrigger.SEPARATE)
        assert {v.id for v in restored} == {"line", "bars"}


def _assert_tree_close(a, b, rel=1e-5):
    """Structural equality up to canonical float quantization."""
    assert type(a) is type(b) or (
        isinstance(a, (int, float)) and isinstance(b, (int, float))
    ), (a, b)
    if isinstance(a, dict):
        assert set(a) == set(b)
        for k in a:
            _assert_tree_close(a[k], b[k], rel)
    elif isinstance(a, (list, tuple)):
        assert len(a) == len(b)
        for x, y in zip(a, b):
            _assert_tree_close(x, y, rel)
    elif isinstance(a, float) or isinstance(b, float):
        assert a == pytest.approx(b, rel=rel, abs=1e-6)
    else:
        assert a == b


class TestCanonicalJson:
    def test_sorted_keys(self):
        assert canonical_json({"b": 1, "a": 2}) == '{"a":2,"b":1}'

    def test_float_formatting(self):
        assert format_float(0.15) == "0.15"
        assert format_float(0.150000001) == "0.15"
        assert format_float(-0.0) == "0"
        assert canonical_json([0.1 + 0.2]) == "[0.3]"

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            canonical_json([float("nan")])
