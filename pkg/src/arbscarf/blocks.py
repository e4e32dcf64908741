"""Block-partitioned constraint and ordinal matrices of a preference system.

Columns of the augmented system are indexed ``0..m``: column 0 is the
artificial controlling column, columns ``1..n`` are the singletons (column
``i`` is ``{i}``), and the remaining columns list the blocks ``S_1..S_n`` in
order. Rows are ``0..n`` with row 0 the controlling row.

Only the FFL engine runs on large instances, and it never needs the dense
matrices; :class:`BlockSystem` therefore materializes ``A`` and ``C`` lazily
and :class:`OrdinalView` answers entry queries directly from the layout.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import InvalidSystem
from .instance import PreferenceSystem, validate


def build_blocks(system: PreferenceSystem) -> tuple[tuple[int, ...], ...]:
    """``S_1..S_n`` as tuples of hyperedge ids, each sorted by its vertex's order.

    ``S_i`` holds the non-singleton edges whose largest vertex is ``i``,
    most preferred (by ``i``) first. ``S_1`` is always empty.
    """
    out: list[list[int]] = [[] for _ in range(system.n)]
    for eid, e in enumerate(system.hyperedges, start=1):
        if len(e) > 1:
            out[e[-1] - 1].append(eid)
    ranks = system.rank_maps
    for i, blk in enumerate(out, start=1):
        blk.sort(key=ranks[i - 1].__getitem__)
    return tuple(tuple(b) for b in out)


@dataclass(frozen=True)
class ColumnLayout:
    """Column index <-> hyperedge id, plus block boundaries.

    ``col_edge[0]`` is 0 (the artificial column). ``block_of_col[j]`` is the
    block index of column ``j`` (0 for the artificial and singleton columns).
    Block ``S_i`` occupies columns ``block_start[i] .. block_start[i+1] - 1``.
    """

    n: int
    m: int
    col_edge: tuple[int, ...]
    edge_col: tuple[int, ...]
    block_of_col: tuple[int, ...]
    block_start: tuple[int, ...]

    def block_columns(self, i: int) -> range:
        return range(self.block_start[i], self.block_start[i + 1])


def column_layout(system: PreferenceSystem) -> ColumnLayout:
    n, m = system.n, system.m
    blocks = build_blocks(system)
    singles = system.singletons
    col_edge = [0] + [singles[i] for i in range(1, n + 1)]
    block_of_col = [0] * (n + 1)
    block_start = [0, n + 1]
    for i, blk in enumerate(blocks, start=1):
        col_edge.extend(blk)
        block_of_col.extend([i] * len(blk))
        block_start.append(len(col_edge))
    if len(col_edge) != m + 1:
        raise InvalidSystem([f"layout has {len(col_edge) - 1} columns for {m} hyperedges"])
    edge_col = [0] * (m + 1)
    for j, eid in enumerate(col_edge):
        if j:
            edge_col[eid] = j
    return ColumnLayout(n, m, tuple(col_edge), tuple(edge_col), tuple(block_of_col), tuple(block_start))


@dataclass(frozen=True, eq=False)
class BlockSystem:
    """The augmented triple ``(A', b', C')`` with its column layout.

    ``A`` and ``C`` are dense ``(n+1) x (m+1)`` integer arrays built on first
    access. ``M`` is the controlling-column value, one above every other
    entry of ``C``.
    """

    system: PreferenceSystem
    layout: ColumnLayout

    @property
    def n(self) -> int:
        return self.layout.n

    @property
    def m(self) -> int:
        return self.layout.m

    @property
    def rows(self) -> int:
        return self.layout.n + 1

    @property
    def cols(self) -> int:
        return self.layout.m + 1

    @property
    def M(self) -> int:
        return self.layout.m + 1

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        lay = self.layout
        return tuple(lay.col_edge[lay.block_start[i]:lay.block_start[i + 1]]
                     for i in range(1, lay.n + 1))

    @property
    def b(self) -> np.ndarray:
        return np.ones(self.rows, dtype=np.int64)

    def support(self, j: int) -> tuple[int, ...]:
        """Rows where column ``j`` of ``A'`` is 1."""
        if j == 0:
            return (0,)
        return self.system.edge(self.layout.col_edge[j])

    @cached_property
    def A(self) -> np.ndarray:
        a = np.zeros((self.rows, self.cols), dtype=np.int64)
        for j in range(self.cols):
            a[list(self.support(j)), j] = 1
        a.setflags(write=False)
        return a

    @cached_property
    def view(self) -> "OrdinalView":
        return OrdinalView(self)

    @cached_property
    def C(self) -> np.ndarray:
        view = self.view
        c = np.empty((self.rows, self.cols), dtype=np.int64)
        for i in range(self.rows):
            c[i] = view.row(i)
        c.setflags(write=False)
        return c

    def edge_vector(self, xcols: Sequence) -> tuple:
        """Reindex a column vector (length ``m + 1``) by hyperedge id, dropping column 0."""
        col = self.layout.edge_col
        return tuple(xcols[col[eid]] for eid in range(1, self.m + 1))


def build_block_system(system: PreferenceSystem) -> BlockSystem:
    report = validate(system)
    if not report.ok:
        raise InvalidSystem(report.violations)
    return BlockSystem(system, column_layout(system))


class OrdinalView:
    """Entries of ``C'`` computed on demand from the layout.

    Row ``i >= 1``: the ``l``-th best edge of ``δ(i)`` gets ``|δ(i)| - l``;
    the other columns ``1..m`` get ``m-1, m-2, ..., |δ(i)|`` from left to
    right; column 0 gets ``M``. Row 0 is ``(0, m, m-1, ..., 1)``.
    """

    def __init__(self, bs: BlockSystem):
        self.bs = bs
        lay = bs.layout
        sysm = bs.system
        self.m = lay.m
        self.M = bs.M
        self._ranks = sysm.rank_maps
        self._col_edge = lay.col_edge
        self._deg = [0] + [len(d) for d in sysm.delta]
        # sorted column indices of δ(i), for counting members left of a column
        self._delta_cols = [()] + [tuple(sorted(lay.edge_col[e] for e in d)) for d in sysm.delta]

    def in_delta(self, i: int, j: int) -> bool:
        """Whether column ``j`` is an edge containing vertex ``i`` (rank-valued entry)."""
        return i > 0 and j > 0 and self._col_edge[j] in self._ranks[i - 1]

    def rank_value(self, i: int, j: int) -> int:
        """``c[i, j]`` for ``i >= 1`` and ``j`` an edge containing ``i``."""
        return self._deg[i] - 1 - self._ranks[i - 1][self._col_edge[j]]

    def value(self, i: int, j: int) -> int:
        if i == 0:
            return 0 if j == 0 else self.m + 1 - j
        if j == 0:
            return self.M
        r = self._ranks[i - 1].get(self._col_edge[j])
        if r is not None:
            return self._deg[i] - 1 - r
        left = bisect_left(self._delta_cols[i], j)
        return self.m - 1 - ((j - 1) - left)

    def compare(self, i: int, j: int, k: int) -> int:
        """Sign of ``c[i, j] - c[i, k]``."""
        a, b = self.value(i, j), self.value(i, k)
        return (a > b) - (a < b)

    def row(self, i: int) -> list[int]:
        if i == 0:
            return [0] + [self.m + 1 - j for j in range(1, self.m + 1)]
        out = [self.M]
        filler = self.m - 1
        ranks = self._ranks[i - 1]
        deg = self._deg[i]
        for j in range(1, self.m + 1):
            r = ranks.get(self._col_edge[j])
            if r is None:
                out.append(filler)
                filler -= 1
            else:
                out.append(deg - 1 - r)
        return out


def edge_name(e: Sequence[int]) -> str:
    return "{" + ",".join(map(str, e)) + "}"


def dump(bs: BlockSystem, *, augmented: bool = True) -> str:
    """Whitespace-separated grids of ``A`` and ``C`` under a row of edge names."""
    first = 0 if augmented else 1
    names = ["*" if j == 0 else edge_name(bs.support(j)) for j in range(first, bs.cols)]
    out = []
    for title, mat in (("A", bs.A), ("C", bs.C)):
        rows = mat[first:, first:]
        width = max(max(len(s) for s in names), max(len(str(v)) for v in rows.flat))
        out.append(title)
        out.append(" ".join(s.rjust(width) for s in names))
        for row in rows:
            out.append(" ".join(str(int(v)).rjust(width) for v in row))
    return "\n".join(out) + "\n"
