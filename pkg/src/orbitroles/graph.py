"""Immutable undirected simple graph plus node attribute tables.

Edges are stored as sorted neighbor lists. External string ids map to
dense indices; every matrix downstream is aligned to that index order.
Directed inputs are symmetrized at load, but the original line order
(source cites target) is retained so citation direction can be recovered
for diversity scoring.
"""

from __future__ import annotations

import csv
import logging
from bisect import bisect_left
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Malformed edge-list or node-table input."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph over dense node indices [0, N).

    ``adjacency[v]`` is the ascending tuple of v's neighbors: no self
    loops, no duplicates, and u in adj(v) iff v in adj(u).
    ``directed_pairs`` optionally records the as-read (source, target)
    pairs of the input file; None for graphs with no direction info.
    """

    adjacency: tuple
    edge_count: int
    directed_pairs: tuple | None = None

    def __post_init__(self):
        total = sum(len(a) for a in self.adjacency)
        if total != 2 * self.edge_count:
            raise ValueError(
                f"adjacency lists sum to {total}, expected {2 * self.edge_count}"
            )

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        row = self.adjacency[u]
        i = bisect_left(row, v)
        return i < len(row) and row[i] == v

    def edges(self):
        """Yield each undirected edge once as (u, v) with u < v."""
        for u, row in enumerate(self.adjacency):
            for v in row:
                if v > u:
                    yield (u, v)

    def components(self) -> list:
        """Connected components as lists of node indices, ascending."""
        n = self.node_count
        seen = [False] * n
        out = []
        for start in range(n):
            if seen[start]:
                continue
            comp = [start]
            seen[start] = True
            frontier = [start]
            while frontier:
                u = frontier.pop()
                for w in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        frontier.append(w)
            comp.sort()
            out.append(comp)
        return out

    @staticmethod
    def from_edges(node_count: int, edges, directed_pairs=None) -> "Graph":
        """Build from an iterable of index pairs; dedups and symmetrizes."""
        adj = [set() for _ in range(node_count)]
        kept = 0
        for u, v in edges:
            if u == v:
                continue
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u}, {v}) outside [0, {node_count})")
            if v not in adj[u]:
                adj[u].add(v)
                adj[v].add(u)
                kept += 1
        return Graph(
            adjacency=tuple(tuple(sorted(a)) for a in adj),
            edge_count=kept,
            directed_pairs=tuple(directed_pairs) if directed_pairs is not None else None,
        )


@dataclass
class NodeTable:
    """Per-node external ids and optional discipline labels.

    Aligned 1:1 with the companion Graph's indices. A missing category is
    None, never the empty string.
    """

    external_ids: list
    categories: list = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.categories is None:
            self.categories = [None] * len(self.external_ids)
        if len(self.categories) != len(self.external_ids):
            raise ValueError("categories length does not match external_ids")
        for key, col in self.extra.items():
            if len(col) != len(self.external_ids):
                raise ValueError(f"extra column {key!r} has wrong length")
        if len(set(self.external_ids)) != len(self.external_ids):
            raise GraphFormatError("duplicate external ids in node table")
        self._index = {x: i for i, x in enumerate(self.external_ids)}

    def __len__(self):
        return len(self.external_ids)

    def index_of(self, external_id: str) -> int:
        return self._index[external_id]

    def __contains__(self, external_id: str) -> bool:
        return external_id in self._index


def load_edge_list(path, id_policy: str = "create", table: NodeTable | None = None):
    """Read a whitespace-separated edge list into (Graph, NodeTable).

    Lines hold two tokens (source id, target id); '#' lines are comments.
    Duplicate edges collapse, self loops are dropped with a counted
    warning. With ``id_policy='strict'`` every id must already exist in
    ``table``; with 'create', unseen ids get fresh indices (appended after
    the table's ids when a table is given, so isolated table nodes are
    retained with degree 0).
    """
    if id_policy not in ("strict", "create"):
        raise ValueError(f"unknown id_policy {id_policy!r}")
    if id_policy == "strict" and table is None:
        raise ValueError("strict id_policy requires a pre-loaded node table")

    ids: list = list(table.external_ids) if table is not None else []
    index = {x: i for i, x in enumerate(ids)}
    pairs = []
    seen_pairs = set()
    self_loops = 0
    any_line = False

    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            any_line = True
            tokens = line.split()
            if len(tokens) != 2:
                raise GraphFormatError(
                    f"{path}:{lineno}: expected two tokens, got {len(tokens)}"
                )
            endpoints = []
            for tok in tokens:
                if tok not in index:
                    if id_policy == "strict":
                        raise GraphFormatError(
                            f"{path}:{lineno}: id {tok!r} not in node table (strict mode)"
                        )
                    index[tok] = len(ids)
                    ids.append(tok)
                endpoints.append(index[tok])
            u, v = endpoints
            if u == v:
                self_loops += 1
                continue
            if (u, v) not in seen_pairs:
                seen_pairs.add((u, v))
                pairs.append((u, v))

    if not any_line:
        raise GraphFormatError(f"{path}: empty edge list")
    if self_loops:
        logger.warning("%s: dropped %d self-loop(s)", path, self_loops)

    graph = Graph.from_edges(len(ids), pairs, directed_pairs=pairs)
    if table is not None:
        out_table = NodeTable(
            external_ids=ids,
            categories=list(table.categories) + [None] * (len(ids) - len(table)),
            extra={
                k: list(col) + [""] * (len(ids) - len(table))
                for k, col in table.extra.items()
            },
        )
    else:
        out_table = NodeTable(external_ids=ids)
    ncomp = len(graph.components())
    logger.info(
        "%s: %d nodes, %d edges, %d component(s)",
        path,
        graph.node_count,
        graph.edge_count,
        ncomp,
    )
    return graph, out_table


def write_edge_list(graph: Graph, table: NodeTable, path) -> None:
    """Write one undirected edge per line using external ids."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u, v in graph.edges():
            fh.write(f"{table.external_ids[u]} {table.external_ids[v]}\n")


def load_node_table(path) -> NodeTable:
    """Read a CSV with header ``id[,category,...]`` into a NodeTable."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise GraphFormatError(f"{path}: empty node table") from None
        header = [h.strip() for h in header]
        if "id" not in header:
            raise GraphFormatError(f"{path}: header must name an 'id' column")
        id_col = header.index("id")
        cat_col = header.index("category") if "category" in header else None
        extra_cols = [
            (i, name)
            for i, name in enumerate(header)
            if i != id_col and i != cat_col
        ]

        ids, cats = [], []
        extra = {name: [] for _, name in extra_cols}
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise GraphFormatError(
                    f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}"
                )
            ids.append(row[id_col].strip())
            if cat_col is not None:
                cell = row[cat_col].strip()
                cats.append(cell if cell else None)
            else:
                cats.append(None)
            for i, name in extra_cols:
                extra[name].append(row[i])

    if not ids:
        raise GraphFormatError(f"{path}: node table has no rows")
    if len(set(ids)) != len(ids):
        dup = sorted({x for x in ids if ids.count(x) > 1})
        raise GraphFormatError(f"{path}: duplicate id(s): {dup[:5]}")
    return NodeTable(external_ids=ids, categories=cats, extra=extra)


def write_node_table(table: NodeTable, path) -> None:
    cols = ["id", "category"] + list(table.extra.keys())
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for i, ext in enumerate(table.external_ids):
            row = [ext, table.categories[i] if table.categories[i] is not None else ""]
            for k in table.extra:
                row.append(table.extra[k][i])
            writer.writerow(row)


