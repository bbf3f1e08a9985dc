import math

import numpy as np
import pytest

from vizcompose.config import Thresholds
from vizcompose.data_model import (
    CompositeType,
    RelationSource,
    Relationship,
    RelationshipKind,
    allowed_composites,
    infer_relationship,
    item_correspondences,
)
from vizcompose.compose import (
    AnchorMap,
    DecomposeTrigger,
    JuxtaposeLayout,
    LinkSet,
    NestPlacementSet,
    NotAdmissible,
    OverloadPlacement,
    RegionNotActive,
    SeedUnmatched,
    UnmatchedItems,
    WrongTrigger,
    bend_layout,
    compose_integrated,
    compose_integrated_group,
    compose_nested,
    compose_overloaded,
    compose_superimposed,
    decompose,
    expand_axis,
    extend_integrated,
    extract_element,
    juxtapose_views,
    partition_axis,
    repartition,
    spread_pcp_axes,
)
from vizcompose.scene import Pose, ViewSpec, anchor_position, pcp_default_gap

from . import scenarios as sc


@pytest.fixture
def cereal_pair():
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
        pose=Pose(position=(0.7, 1.0, 0.0)),
    )
    tables = {"protein_t": protein, "calories_t": calories}
    rel = infer_relationship(protein, calories)
    return line, bars, rel, tables


class TestIntegrated:
    def test_link_per_correspondence(self, cereal_pair):
        line, bars, rel, tables = cereal_pair
        spec = compose_integrated(line, bars, rel, tables)
        assert isinstance(spec.payload, LinkSet)
        corr = item_correspondences(rel, tables["protein_t"], tables["calories_t"])
        assert spec.payload.segment_count() == len(corr)

    def test_endpoints_at_anchors(self, cereal_pair):
        line, bars, rel, tables = cereal_pair
        spec = compose_integrated(line, bars, rel, tables)
        group = spec.payload.groups[0]
        views = {v.id: v for v in (line, bars)}
        for seg in group.segments:
            a_view = views[group.a_view]
            b_view = views[group.b_view]
            want_a = anchor_position(a_view, seg.a_item, tables[a_view.table])
            want_b = anchor_position(b_view, seg.b_item, tables[b_view.table])
            assert np.allclose(seg.end_a, want_a, atol=1e-6)
            assert np.allclose(seg.end_b, want_b, atol=1e-6)

    def test_join_third_view(self, cereal_pair):
        line, bars, rel, tables = cereal_pair
        sugar = sc.cereal_measure_table("sugar_t", "sugar")
        tables = {**tables, "sugar_t": sugar}
        scatter = ViewSpec(
            id="sugar-view", chart="barchart", table="sugar_t",
            encodings={"value": "sugar"}, pose=Pose(position=(0.35, 1.6, 0.0)),
        )
        base = compose_integrated(line, bars, rel, tables)
        joined = extend_integrated(
            base,
            [
                (scatter, line, infer_relationship(sugar, tables["protein_t"])),
                (scatter, bars, infer_relationship(sugar, tables["calories_t"])),
            ],
            tables,
        )
        assert set(joined.constituents) == {"line", "cal-bars", "sugar-view"}
        assert len(joined.payload.groups) == 3
        n = len(sc.CEREAL_NAMES)
        assert joined.payload.segment_count() == 3 * n

    def test_item_dimension_fan_out(self):
        states = sc.states_table()
        import vizcompose.data_model as dm

        cities = dm.DataTable(
            name="cities",
            key="city",
            columns=(dm.Column("city", sc.CAT), dm.Column("state", sc.CAT)),
            rows=(
                {"city": "phoenix", "state": "AZ"},
                {"city": "tucson", "state": "AZ"},
                {"city": "denver", "state": "CO"},
                {"city": "reno", "state": "NV"},
                {"city": "vegas", "state": "NV"},
                {"city": "austin", "state": "TX"},
                {"city": "elpaso", "state": "TX"},
                {"city": "santafe", "state": "NM"},
                {"city": "slc", "state": "UT"},
            ),
        )
        rel = infer_relationship(states, cities)
        assert rel.kind is RelationshipKind.ITEM_DIMENSION
        host = sc.density_bars(view_id="state-bars", pose=Pose())
        nodes = [
            {"key": r["city"], "pos": [-0.4 + 0.1 * i, 0.0]}
            for i, r in enumerate(cities.rows)
        ]
        city_graph = ViewSpec(
            id="city-graph", chart="graph", table="cities",
            encodings={"nodes": nodes, "edges": []},
            pose=Pose(position=(0.8, 0, 0)),
        )
        tables = {"states": states, "cities": cities}
        spec = compose_integrated(host, city_graph, rel, tables)
        fanout = sum(
            len(v) for _, v in item_correspondences(rel, states, cities)
        )
        assert spec.payload.segment_count() == fanout == len(cities.rows)

    def test_none_not_admissible(self, cereal_pair):
        line, bars, _, tables = cereal_pair
        rel = Relationship(RelationshipKind.NONE, "protein_t", "calories_t")
        with pytest.raises(NotAdmissible):
            compose_integrated(line, bars, rel, tables)


class TestSuperimposed:
    def setup_method(self):
        self.states = sc.states_table()
        self.map = sc.map_view()
        self.bars = sc.density_bars(
            pose=Pose(position=(0.0, 0.95, 0.0))
        )
        self.tables = {"states": self.states}
        self.rel = infer_relationship(self.states, self.states)

    def test_anchor_per_state(self):
        spec = compose_superimposed(self.map, self.bars, self.rel, self.tables)
        assert isinstance(spec.payload, AnchorMap)
        assert len(spec.payload.entries) == len(sc.STATE_NAMES)
        clients = {e.client_item for e in spec.payload.entries}
        regions = {e.host_region for e in spec.payload.entries}
        assert clients == set(sc.STATE_NAMES)
        assert regions == set(sc.STATE_NAMES)

    def test_targets_at_region_centroids(self):
        spec = compose_superimposed(self.map, self.bars, self.rel, self.tables)
        for entry in spec.payload.entries:
            want = anchor_position(self.map, entry.host_region, self.states)
            assert np.allclose(entry.target.position, want, atol=1e-9)

    def test_unmatched_items(self):
        import vizcompose.data_model as dm

        extra = dm.DataTable(
            name="states_plus",
            key="name",
            columns=(dm.Column("name", sc.CAT), dm.Column("density", sc.QUANT)),
            rows=tuple(
                list(self.states.rows) + [{"name": "PR", "density": 400.0}]
            ),
        )
        bars = sc.density_bars(table="states_plus", view_id="bars2")
        rel = Relationship(
            RelationshipKind.ITEM_ITEM, "states", "states_plus", "name", "name",
            RelationSource.DECLARED,
        )
        with pytest.raises(UnmatchedItems) as err:
            compose_superimposed(
                self.map, bars, rel, {"states": self.states, "states_plus": extra}
            )
        assert err.value.items == ["PR"]

    def test_single_pair_degenerate(self):
        import vizcompose.data_model as dm

        one = dm.DataTable(
            "one", "name",
            (dm.Column("name", sc.CAT), dm.Column("v", sc.QUANT)),
            ({"name": "AZ", "v": 1.0},),
        )
        host = sc.map_view(table="one", view_id="m1")
        host = ViewSpec(
            id="m1", chart="map", table="one",
            encodings={"regions": sc.state_regions()[:1]},
            half_extents=(0.3, 0.25, 0.01), pose=host.pose,
        )
        client = sc.density_bars(table="one", view_id="b1")
        client = ViewSpec(
            id="b1", chart="barchart", table="one",
            encodings={"value": "v"}, pose=client.pose,
        )
        rel = infer_relationship(one, one)
        spec = compose_superimposed(host, client, rel, {"one": one})
        assert len(spec.payload.entries) == 1


class TestOverloaded:
    def setup_method(self):
        self.table = sc.cereals_table()
        self.pcp = sc.cereal_pcp()
        self.tables = {"cereals": self.table}
        self.rel = infer_relationship(self.table, self.table)

    def test_spread_activates_and_spawns(self):
        gap = pcp_default_gap(self.pcp)
        client = spread_pcp_axes(self.pcp, 1, 1.6 * gap, self.table)
        assert client is not None
        assert client.chart == "scatterplot"
        assert client.encodings == {"x": "calories", "y": "protein"}

    def test_spread_below_threshold(self):
        gap = pcp_default_gap(self.pcp)
        assert spread_pcp_axes(self.pcp, 1, 1.2 * gap, self.table) is None

    def test_bad_axis_index(self):
        from vizcompose.compose import BadAxisIndex

        with pytest.raises(BadAxisIndex):
            spread_pcp_axes(self.pcp, 3, 1.0, self.table)

    def test_points_normalized(self):
        gap = pcp_default_gap(self.pcp)
        client = spread_pcp_axes(self.pcp, 0, 2.0 * gap, self.table)
        spec = compose_overloaded(
            self.pcp, client, (0, 1), self.rel, self.table,
            active_regions={(self.pcp.id, 0)},
        )
        assert isinstance(spec.payload, OverloadPlacement)
        assert len(spec.payload.scatter_points) == len(self.table.rows)
        for pt in spec.payload.scatter_points:
            assert 0.0 <= pt.x <= 1.0
            assert 0.0 <= pt.y <= 1.0
        # the row holding the left-axis maximum lands at y = 1.0
        sugar = {r["name"]: r["sugar"] for r in self.table.rows}
        top = max(sugar, key=lambda k: sugar[k])
        y_at = {p.row: p.y for p in spec.payload.scatter_points}
        assert y_at[top] == 1.0

    def test_without_spread_not_active(self):
        gap = pcp_default_gap(self.pcp)
        client = spread_pcp_axes(self.pcp, 0, 2.0 * gap, self.table)
        with pytest.raises(RegionNotActive):
            compose_overloaded(
                self.pcp, client, (0, 1), self.rel, self.table,
                active_regions=frozenset(),
            )

    def test_hidden_pair_recorded(self):
        gap = pcp_default_gap(self.pcp)
        client = spread_pcp_axes(self.pcp, 2, 2.0 * gap, self.table)
        spec = compose_overloaded(
            self.pcp, client, (2, 3), self.rel, self.table,
            active_regions={(self.pcp.id, 2)},
        )
        assert spec.payload.hidden_polyline_segments == (2, 3)


class TestNested:
    def setup_method(self):
        self.players = sc.players_table()
        self.stats = sc.stats_table()
        self.graph = sc.graph_view()
        self.bars = sc.stats_bars()
        self.tables = {"players": self.players, "stats": self.stats}
        self.rel = infer_relationship(self.players, self.stats)

    def test_placement_per_node_seed_first(self):
        spec = compose_nested(
            self.graph, self.stats, self.rel, "p3", self.bars, self.tables
        )
        assert isinstance(spec.payload, NestPlacementSet)
        assert len(spec.payload.placements) == 5
        assert spec.payload.placements[0].host_element == "p3"
        assert {p.host_element for p in spec.payload.placements} == set(sc.PLAYER_IDS)

    def test_uncorresponded_node_untouched(self):
        import vizcompose.data_model as dm

        extra_players = dm.DataTable(
            "players", "id", (dm.Column("id", sc.CAT),),
            tuple([{"id": p} for p in sc.PLAYER_IDS] + [{"id": "p6"}]),
        )
        nodes = sc.graph_nodes() + [{"key": "p6", "pos": [0.0, 0.0]}]
        graph = ViewSpec(
            id="graph", chart="graph", table="players",
            encodings={"nodes": nodes, "edges": sc.GRAPH_EDGES},
            half_extents=(0.5, 0.5, 0.01),
        )
        rel = infer_relationship(extra_players, self.stats)
        assert rel.kind is RelationshipKind.ITEM_DIMENSION or rel.kind is RelationshipKind.NONE or rel.kind is RelationshipKind.ITEM_GROUP
        # p6 breaks the bijection; declare the relationship over shared ids
        rel = Relationship(
            RelationshipKind.ITEM_GROUP, "players", "stats", "id", "id",
            RelationSource.DECLARED,
        )
        spec = compose_nested(
            graph, self.stats, rel,
            "p3", self.bars, {"players": extra_players, "stats": self.stats},
        )
        assert len(spec.payload.placements) == 5
        assert "p6" not in {p.host_element for p in spec.payload.placements}

    def test_item_dimension_not_admissible(self):
        rel = Relationship(
            RelationshipKind.ITEM_DIMENSION, "players", "stats", "id", "id"
        )
        with pytest.raises(NotAdmissible):
            compose_nested(
                self.graph, self.stats, rel, "p3", self.bars, self.tables
            )

    def test_seed_unmatched(self):
        with pytest.raises(SeedUnmatched):
            compose_nested(
                self.graph, self.stats, self.rel, "p9", self.bars, self.tables
            )

    def test_scale_fits_inside_element(self):
        spec = compose_nested(
            self.graph, self.stats, self.rel, "p1", self.bars, self.tables
        )
        for p in spec.payload.placements:
            assert 0 < p.scale_factor < 1.0


class TestExtract:
    def test_extract_mini(self):
        stats = sc.stats_table()
        bars = sc.stats_bars()
        mini = extract_element(bars, "p3", stats)
        assert mini.encodings["item"] == "p3"
        assert mini.table == "stats"
        assert mini.half_extents[0] == pytest.approx(bars.half_extents[0] / 5)
        # source untouched
        assert bars.encodings.get("item") is None

    def test_unknown_item(self):
        from vizcompose.scene import UnknownItem

        with pytest.raises(UnknownItem):
            extract_element(sc.stats_bars(), "p9", sc.stats_table())


class TestPartitionExpand:
    def setup_method(self):
        self.table = sc.cereals_table()
        self.view = sc.cereal_scatter()
        self.th = Thresholds()

    def test_zero_drag_no_composite(self):
        assert expand_axis(self.view, {"x": 0.0, "y": 0.0}, self.table) is None

    def test_dual_expansion_2x2(self):
        lx = 2 * self.view.half_extents[0]
        ly = 2 * self.view.half_extents[1]
        spec = expand_axis(self.view, {"x": lx, "y": ly}, self.table)
        layout = spec.payload
        assert (layout.bins_x, layout.bins_y) == (2, 2)
        assert len(layout.panels) == 4

    def test_x_only_3x1(self):
        lx = 2 * self.view.half_extents[0]
        spec = expand_axis(self.view, {"x": 2.3 * lx}, self.table)
        assert (spec.payload.bins_x, spec.payload.bins_y) == (3, 1)

    def test_partition_below_step(self):
        step = self.view.half_extents[1] * 2 * self.th.bin_step_fraction
        assert partition_axis(self.view, "y", 0.5 * step, self.table) is None

    def test_partition_three_bins(self):
        step = self.view.half_extents[1] * 2 * self.th.bin_step_fraction
        spec = partition_axis(self.view, "y", 2 * step, self.table)
        layout = spec.payload
        assert (layout.bins_x, layout.bins_y) == (1, 3)
        vals = [r["protein"] for r in self.table.rows]
        lo, hi = min(vals), max(vals)
        thirds = [
            (lo, lo + (hi - lo) / 3),
            (lo + (hi - lo) / 3, lo + 2 * (hi - lo) / 3),
            (lo + 2 * (hi - lo) / 3, hi),
        ]
        for panel, want in zip(layout.panels, thirds):
            assert panel.y_interval == pytest.approx(want)

    def test_partition_conserves_rows(self):
        step = self.view.half_extents[1] * 2 * self.th.bin_step_fraction
        spec = partition_axis(self.view, "y", 2 * step, self.table)
        routed = []
        for panel in spec.payload.panels:
            routed.extend(panel.row_keys)
        assert sorted(routed) == sorted(r["name"] for r in self.table.rows)
        sets = [set(p.row_keys) for p in spec.payload.panels]
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                assert not (sets[i] & sets[j])

    def test_grid_after_second_partition(self):
        step_y = self.view.half_extents[1] * 2 * self.th.bin_step_fraction
        step_x = self.view.half_extents[0] * 2 * self.th.bin_step_fraction
        first = partition_axis(self.view, "y", 2 * step_y, self.table)
        grid = repartition(first, "x", step_x, self.table)
        layout = grid.payload
        assert (layout.bins_x, layout.bins_y) == (2, 3)
        assert len(layout.panels) == 6
        routed = []
        for panel in layout.panels:
            routed.extend(panel.row_keys)
        assert sorted(routed) == sorted(r["name"] for r in self.table.rows)

    def test_repartition_collapse_returns_none(self):
        step_y = self.view.half_extents[1] * 2 * self.th.bin_step_fraction
        first = partition_axis(self.view, "y", 2 * step_y, self.table)
        assert repartition(first, "y", 0.0, self.table) is None

    def test_no_such_axis(self):
        from vizcompose.compose import NoSuchAxis

        bars = sc.density_bars()
        with pytest.raises(NoSuchAxis):
            partition_axis(bars, "x", 1.0, sc.states_table())


class TestBend:
    def _row_layout(self):
        table = sc.cereals_table()
        view = sc.cereal_scatter()
        lx = 2 * view.half_extents[0]
        spec = expand_axis(view, {"x": 2 * lx}, table)
        return spec.payload

    def test_zero_curvature_identity(self):
        layout = self._row_layout()
        bent = bend_layout(layout, 0.0)
        for a, b in zip(layout.panels, bent.panels):
            assert a.view.pose == b.view.pose

    def test_headings_quarter_pi_apart(self):
        layout = self._row_layout()
        bent = bend_layout(layout, math.pi / 2)
        normals = [p.view.pose.normal() for p in bent.panels]
        for a, b in zip(normals, normals[1:]):
            ang = math.acos(float(np.clip(a @ b, -1, 1)))
            assert ang == pytest.approx(math.pi / 4, abs=1e-9)

    def test_equal_chords(self):
        layout = self._row_layout()
        bent = bend_layout(layout, math.pi / 2)
        centers = [np.asarray(p.view.pose.position) for p in bent.panels]
        chords = [
            float(np.linalg.norm(a - b)) for a, b in zip(centers, centers[1:])
        ]
        assert chords[0] == pytest.approx(chords[1], abs=1e-9)


class TestDecompose:
    def test_integrated_round_trip(self, cereal_pair):
        line, bars, rel, tables = cereal_pair
        spec = compose_integrated(line, bars, rel, tables)
        restored = decompose(spec, DecomposeTrigger.SEPARATE)
        assert {v.id for v in restored} == {"line", "cal-bars"}
        by_id = {v.id: v for v in restored}
        assert by_id["line"].table == line.table
        assert by_id["line"].encodings == line.encodings

    def test_superimposed_restores_client_pose(self):
        states = sc.states_table()
        host = sc.map_view()
        client = sc.density_bars(pose=Pose(position=(0.0, 0.95, 0.0)))
        rel = infer_relationship(states, states)
        spec = compose_superimposed(host, client, rel, {"states": states})
        restored = decompose(spec, DecomposeTrigger.LIFT_ELEMENT)
        by_id = {v.id: v for v in restored}
        assert by_id["bars"].pose == client.pose
        assert by_id["map"].encodings == host.encodings

    def test_wrong_trigger(self, cereal_pair):
        line, bars, rel, tables = cereal_pair
        spec = compose_integrated(line, bars, rel, tables)
        with pytest.raises(WrongTrigger):
            decompose(spec, DecomposeTrigger.DRAG_OUT)

    def test_nested_round_trip(self):
        players, stats = sc.players_table(), sc.stats_table()
        graph, bars = sc.graph_view(), sc.stats_bars()
        rel = infer_relationship(players, stats)
        spec = compose_nested(
            graph, stats, rel, "p2", bars, {"players": players, "stats": stats}
        )
        restored = decompose(spec, DecomposeTrigger.DRAG_OUT)
        assert {v.id for v in restored} == {"graph", "stats-bars"}
        by_id = {v.id: v for v in restored}
        assert by_id["stats-bars"].pose == bars.pose

    def test_overloaded_round_trip(self):
        table = sc.cereals_table()
        pcp = sc.cereal_pcp()
        rel = infer_relationship(table, table)
        gap = pcp_default_gap(pcp)
        client = spread_pcp_axes(pcp, 0, 2 * gap, table)
        spec = compose_overloaded(
            pcp, client, (0, 1), rel, table, active_regions={(pcp.id, 0)}
        )
        restored = decompose(spec, DecomposeTrigger.CLOSE_AXES)
        assert {v.id for v in restored} == {pcp.id, client.id}

    def test_partition_round_trip(self):
        table = sc.cereals_table()
        view = sc.cereal_scatter()
        step = view.half_extents[1] * 2 * Thresholds().bin_step_fraction
        spec = partition_axis(view, "y", 2 * step, table)
        restored = decompose(spec, DecomposeTrigger.COLLAPSE_HANDLE)
        assert [v.id for v in restored] == [view.id]
        assert restored[0].encodings == view.encodings

    def test_proximity_juxtapose_separate(self):
        a = sc.cereal_scatter(view_id="a")
        b = sc.cereal_scatter(view_id="b", pose=Pose(position=(1.0, 0, 0)))
        spec = juxtapose_views(a, b, gap=0.1)
        restored = decompose(spec, DecomposeTrigger.SEPARATE)
        assert {v.id for v in restored} == {"a", "b"}
        with pytest.raises(WrongTrigger):
            decompose(spec, DecomposeTrigger.COLLAPSE_HANDLE)


class TestAdmissibilityExhaustive:
    """Every compose operator rejects kinds its composite type cannot encode."""

    def test_all_kind_type_cells(self):
        protein = sc.cereal_measure_table("protein_t", "protein")
        calories = sc.cereal_measure_table("calories_t", "calories")
        tables = {"protein_t": protein, "calories_t": calories}
        a = ViewSpec(
            id="a", chart="barchart", table="protein_t",
            encodings={"value": "protein"},
        )
        b = ViewSpec(
            id="b", chart="barchart", table="calories_t",
            encodings={"value": "calories"}, pose=Pose(position=(0.8, 0, 0)),
        )
        constructors = {
            CompositeType.INTEGRATED: lambda rel: compose_integrated(
                a, b, rel, tables
            ),
            CompositeType.SUPERIMPOSED: lambda rel: compose_superimposed(
                a, b, rel, tables
            ),
            CompositeType.OVERLOADED: lambda rel: compose_overloaded(
                sc.cereal_pcp(table="protein_t"), b, (0, 1), rel, protein,
                active_regions={("pcp", 0)},
            ),
            CompositeType.NESTED: lambda rel: compose_nested(
                a, calories, rel, "almondy", b, tables
            ),
        }
        for kind in RelationshipKind:
            rel = Relationship(
                kind, "protein_t", "calories_t", "name", "name",
                RelationSource.DECLARED,
            )
            for ctype, build in constructors.items():
                if ctype in allowed_composites(kind):
                    continue  # positive paths are exercised elsewhere
                with pytest.raises(NotAdmissible):
                    build(rel)
