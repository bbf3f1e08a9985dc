"""Tabular data model: tables, inter-table relationships, and the
admissibility matrix that constrains which composite types a given
relationship can be rendered as.

Relationship inference is deterministic: witnesses are enumerated over
column pairs, classified by precedence (item-item > item-group >
item-dimension > none), and ties broken lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

Value = Union[str, int, float]


class RelationshipKind(Enum):
    NONE = "none"
    ITEM_ITEM = "item-item"
    ITEM_GROUP = "item-group"
    ITEM_DIMENSION = "item-dimension"


class CompositeType(Enum):
    JUXTAPOSED = "juxtaposed"
    INTEGRATED = "integrated"
    SUPERIMPOSED = "superimposed"
    OVERLOADED = "overloaded"
    NESTED = "nested"


# Canonical display/report order for composite types.
COMPOSITE_ORDER = (
    CompositeType.JUXTAPOSED,
    CompositeType.INTEGRATED,
    CompositeType.SUPERIMPOSED,
    CompositeType.OVERLOADED,
    CompositeType.NESTED,
)

# Which composite types can encode which data relationship. Item-group
# admits no overloaded composition (it adds attributes, not items);
# item-dimension admits no nested composition (it adds items, not
# attributes); disjoint data can only sit side by side.
CONSTRAINT_MATRIX: dict[RelationshipKind, frozenset[CompositeType]] = {
    RelationshipKind.NONE: frozenset({CompositeType.JUXTAPOSED}),
    RelationshipKind.ITEM_ITEM: frozenset(COMPOSITE_ORDER),
    RelationshipKind.ITEM_GROUP: frozenset(
        {
            CompositeType.JUXTAPOSED,
            CompositeType.INTEGRATED,
            CompositeType.SUPERIMPOSED,
            CompositeType.NESTED,
        }
    ),
    RelationshipKind.ITEM_DIMENSION: frozenset(
        {
            CompositeType.JUXTAPOSED,
            CompositeType.INTEGRATED,
            CompositeType.SUPERIMPOSED,
            CompositeType.OVERLOADED,
        }
    ),
}


class ColumnKind(Enum):
    CATEGORICAL = "categorical"
    QUANTITATIVE = "quantitative"


@dataclass(frozen=True)
class Column:
    name: str
    kind: ColumnKind


@dataclass(frozen=True)
class DataTable:
    """An immutable table with a designated key column.

    Rows are mappings column name -> value; values are text or finite
    numbers. The key column's values identify items and must be unique.
    """

    name: str
    key: str
    columns: tuple[Column, ...]
    rows: tuple[dict, ...]

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column_kind(self, name: str) -> ColumnKind:
        for c in self.columns:
            if c.name == name:
                return c.kind
        raise KeyError(name)

    def key_values(self) -> list[Value]:
        return [row[self.key] for row in self.rows]

    def sorted_keys(self) -> list[Value]:
        return sorted(self.key_values(), key=_sort_key)

    def row_by_key(self, item_id: Value) -> dict:
        for row in self.rows:
            if row[self.key] == item_id:
                return row
        raise KeyError(item_id)

    def values(self, column: str) -> list[Value]:
        return [row[column] for row in self.rows]

    def measure_columns(self, exclude: str | None = None) -> list[str]:
        """Quantitative columns, optionally excluding one (a witness key)."""
        return [
            c.name
            for c in self.columns
            if c.kind is ColumnKind.QUANTITATIVE and c.name != exclude
        ]


def _sort_key(v: Value):
    # Numbers sort before strings; within a type, natural order.
    return (isinstance(v, str), v)


class RelationSource(Enum):
    DECLARED = "declared"
    INFERRED = "inferred"


@dataclass(frozen=True)
class Relationship:
    """A directed relationship between two tables.

    Role convention: for ITEM_GROUP, ``table_a`` is the item side and
    ``table_b`` the table whose rows carry the attribute group; for
    ITEM_DIMENSION, ``table_a`` is the item side and ``table_b`` holds
    many rows per item. For ITEM_ITEM the order follows the call. Key
    columns are absent for NONE.
    """

    kind: RelationshipKind
    table_a: str
    table_b: str
    a_key: str | None = None
    b_key: str | None = None
    source: RelationSource = RelationSource.INFERRED

    def involves(self, table: str) -> bool:
        return table in (self.table_a, self.table_b)


class KindIsNone(Exception):
    pass


class TableMismatch(Exception):
    pass


def validate_table(table: DataTable) -> list[str]:
    """Return every invariant violation; an empty list means the table is ok."""
    violations: list[str] = []
    names = table.column_names()
    for name in sorted({n for n in names if names.count(n) > 1}):
        violations.append(f"duplicate column {name!r}")
    if table.key not in names:
        violations.append(f"key column {table.key!r} missing")
        return violations
    seen: set[Value] = set()
    for i, row in enumerate(table.rows):
        for col in names:
            if col not in row:
                violations.append(f"row {i}: missing cell for column {col!r}")
            elif row[col] is None:
                violations.append(f"row {i}: null value in column {col!r}")
            elif isinstance(row[col], float) and not _finite(row[col]):
                violations.append(f"row {i}: non-finite value in column {col!r}")
        for extra in sorted(set(row) - set(names)):
            violations.append(f"row {i}: unknown column {extra!r}")
        key_val = row.get(table.key)
        if key_val is not None:
            if key_val in seen:
                violations.append(f"duplicate key {key_val!r}")
            seen.add(key_val)
    return violations


def _finite(x: float) -> bool:
    return x == x and x not in (float("inf"), float("-inf"))


def _unique(values: list[Value]) -> bool:
    return len(values) == len(set(values))


@dataclass(frozen=True)
class _Witness:
    kind: RelationshipKind
    # item-side table name first; key columns aligned with that order
    table_a: str
    table_b: str
    a_key: str
    b_key: str
    tie: tuple = field(default=())


_PRECEDENCE = (
    RelationshipKind.ITEM_ITEM,
    RelationshipKind.ITEM_GROUP,
    RelationshipKind.ITEM_DIMENSION,
)


def infer_relationship(a: DataTable, b: DataTable) -> Relationship:
    """Infer the highest-precedence relationship between two tables.

    A column pair whose value sets are equal and unique on both sides is
    a one-to-one witness; it classifies as item-group when exactly one
    table keeps >= 2 quantitative measure columns besides the witness
    (that table is the group side), item-item otherwise. A column of one
    table that maps many-to-one onto the other table's key values, with
    some fan-out >= 2, witnesses item-dimension. Ties are broken by the
    lexicographically smallest witnessing column pair.
    """
    witnesses: list[_Witness] = []
    for col_a in a.column_names():
        vals_a = a.values(col_a)
        for col_b in b.column_names():
            vals_b = b.values(col_b)
            if _unique(vals_a) and _unique(vals_b) and set(vals_a) == set(vals_b):
                a_measures = len(a.measure_columns(exclude=col_a))
                b_measures = len(b.measure_columns(exclude=col_b))
                if (a_measures >= 2) != (b_measures >= 2):
                    if b_measures >= 2:
                        w = _Witness(
                            RelationshipKind.ITEM_GROUP,
                            a.name, b.name, col_a, col_b, (0, col_a, col_b),
                        )
                    else:
                        w = _Witness(
                            RelationshipKind.ITEM_GROUP,
                            b.name, a.name, col_b, col_a, (0, col_a, col_b),
                        )
                else:
                    w = _Witness(
                        RelationshipKind.ITEM_ITEM,
                        a.name, b.name, col_a, col_b, (0, col_a, col_b),
                    )
                witnesses.append(w)
    witnesses.extend(_dimension_witnesses(a, b, 0))
    witnesses.extend(_dimension_witnesses(b, a, 1))

    for kind in _PRECEDENCE:
        matches = [w for w in witnesses if w.kind is kind]
        if matches:
            best = min(matches, key=lambda w: w.tie)
            return Relationship(kind, best.table_a, best.table_b, best.a_key, best.b_key)
    return Relationship(RelationshipKind.NONE, a.name, b.name)


def _dimension_witnesses(item: DataTable, dim: DataTable, order: int) -> list[_Witness]:
    """Witnesses where each ``item`` key owns >= 1 ``dim`` rows via some column."""
    out = []
    item_keys = set(item.key_values())
    for col in dim.column_names():
        vals = dim.values(col)
        if set(vals) == item_keys and len(vals) > len(set(vals)):
            out.append(
                _Witness(
                    RelationshipKind.ITEM_DIMENSION,
                    item.name, dim.name, item.key, col, (order, item.key, col),
                )
            )
    return out


def allowed_composites(kind: RelationshipKind) -> frozenset[CompositeType]:
    return CONSTRAINT_MATRIX[kind]


def item_correspondences(
    rel: Relationship, a: DataTable, b: DataTable
) -> list[tuple]:
    """Resolve a relationship into per-item correspondences.

    Item-item and item-group yield ``(a_row_key, b_row_key)`` pairs;
    item-dimension yields ``(a_row_key, [b_row_key, ...])`` with the item
    side first. Results are sorted by the first element. Tables may be
    passed in either order and are matched by name.
    """
    if rel.kind is RelationshipKind.NONE:
        raise KindIsNone("no correspondences for a 'none' relationship")
    by_name = {a.name: a, b.name: b}
    if rel.table_a not in by_name or rel.table_b not in by_name:
        raise TableMismatch(
            f"relationship is over ({rel.table_a!r}, {rel.table_b!r}), "
            f"got ({a.name!r}, {b.name!r})"
        )
    ta, tb = by_name[rel.table_a], by_name[rel.table_b]

    if rel.kind in (RelationshipKind.ITEM_ITEM, RelationshipKind.ITEM_GROUP):
        b_by_witness = {row[rel.b_key]: row[tb.key] for row in tb.rows}
        pairs = [
            (row[ta.key], b_by_witness[row[rel.a_key]])
            for row in ta.rows
            if row[rel.a_key] in b_by_witness
        ]
        return sorted(pairs, key=lambda p: _sort_key(p[0]))

    groups: dict[Value, list[Value]] = {}
    for row in tb.rows:
        groups.setdefault(row[rel.b_key], []).append(row[tb.key])
    out = []
    for row in ta.rows:
        item = row[rel.a_key]
        if item in groups:
            out.append((row[ta.key], sorted(groups[item], key=_sort_key)))
    return sorted(out, key=lambda p: _sort_key(p[0]))
