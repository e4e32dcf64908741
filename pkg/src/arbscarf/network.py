"""Network-matrix bases as directed trees.

A cardinal basis ``B`` of an arborescence instance corresponds to the digraph
arcs of its columns (column 0 has no arc and is ignored here). ``B`` is a
basis exactly when those arcs form a spanning tree ``T_B``, and the basis
representation of an entering arc ``(v, v')`` is read off the ``T_B`` path
from ``v`` to ``v'``: ``+1`` on forward arcs, ``-1`` on backward arcs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .blocks import ColumnLayout, column_layout
from .errors import InvariantViolation, NotABasis
from .instance import Arc, ArbInstance


def column_arcs(inst: ArbInstance, layout: Optional[ColumnLayout] = None) -> tuple[Optional[Arc], ...]:
    """Digraph arc of every column; entry 0 (the artificial column) is ``None``."""
    layout = layout or column_layout(inst.system)
    arcs = inst.edge_arcs
    return (None,) + tuple(arcs[eid - 1] for eid in layout.col_edge[1:])


@dataclass(frozen=True)
class MarkedPath:
    """Undirected tree path with a forward flag per arc.

    An arc is forward when the walk from ``start`` to ``end`` meets its tail
    first. ``vertices`` has one more entry than ``cols``.
    """

    cols: tuple[Hashable, ...]
    forward: tuple[bool, ...]
    vertices: tuple[int, ...]

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.cols)

    def reversed(self) -> "MarkedPath":
        return MarkedPath(self.cols[::-1], tuple(not f for f in self.forward[::-1]), self.vertices[::-1])

    def forward_cols(self) -> list:
        return [c for c, f in zip(self.cols, self.forward) if f]

    def backward_cols(self) -> list:
        return [c for c, f in zip(self.cols, self.forward) if not f]


class BasisTree:
    """Spanning tree on ``U`` whose arcs are keyed by column (or any label).

    Stored rooted at ``root``: ``parent[v]`` is ``(w, key)`` for the tree arc
    joining ``v`` to its parent ``w``. Arc orientation is kept in ``arcs``.
    The FFL engine mutates its own tree through :meth:`exchange`; everything
    else treats instances as read-only.
    """

    def __init__(self, root: int, parent: dict, arcs: dict):
        self.root = root
        self.parent = parent
        self.arcs = arcs

    @classmethod
    def from_arcs(cls, vertices: Iterable[int], arcs: Mapping[Hashable, Arc],
                  root: Optional[int] = None) -> "BasisTree":
        """Build from keyed arcs; raises :class:`NotABasis` with a cycle or on a size mismatch."""
        vertices = list(vertices)
        arcs = dict(arcs)
        if root is None:
            root = vertices[0]
        adj: dict[int, list] = {v: [] for v in vertices}
        uf = {v: v for v in vertices}

        def find(a):
            while uf[a] != a:
                uf[a] = uf[uf[a]]
                a = uf[a]
            return a

        for key, (t, h) in arcs.items():
            rt, rh = find(t), find(h)
            if rt == rh:
                partial = cls._rooted(t, adj)
                cyc = _path_keys(partial, t, h) + [key]
                raise NotABasis(cyc)
            uf[rt] = rh
            adj[t].append((h, key))
            adj[h].append((t, key))
        if len(arcs) != len(vertices) - 1:
            raise NotABasis((), f"{len(arcs)} arcs cannot span {len(vertices)} vertices")
        return cls(root, cls._rooted(root, adj), arcs)

    @staticmethod
    def _rooted(root: int, adj: dict) -> dict:
        parent = {}
        seen = {root}
        stack = [root]
        while stack:
            v = stack.pop()
            for w, key in adj[v]:
                if w not in seen:
                    seen.add(w)
                    parent[w] = (v, key)
                    stack.append(w)
        return parent

    def copy(self) -> "BasisTree":
        return BasisTree(self.root, dict(self.parent), dict(self.arcs))

    def keys(self) -> set:
        return set(self.arcs)

    def path(self, v: int, w: int) -> MarkedPath:
        """The tree path from ``v`` to ``w`` with forward/backward marks.

        Walks both endpoints towards the root in alternation and stops at the
        first shared vertex, so the cost is linear in the path length.
        """
        if v == w:
            return MarkedPath((), (), (v,))
        parent = self.parent
        up_v, up_w = [v], [w]
        seen_v, seen_w = {v: 0}, {w: 0}
        a, b = v, w
        meet = None
        while meet is None:
            moved = False
            if a in parent:
                a = parent[a][0]
                up_v.append(a)
                seen_v[a] = len(up_v) - 1
                moved = True
                if a in seen_w:
                    meet = a
                    break
            if b in parent:
                b = parent[b][0]
                up_w.append(b)
                seen_w[b] = len(up_w) - 1
                moved = True
                if b in seen_v:
                    meet = b
                    break
            if not moved:
                raise NotABasis((), f"vertices {v} and {w} are not connected")
        left = up_v[:seen_v[meet] + 1]
        right = up_w[:seen_w[meet] + 1]
        cols, fwd = [], []
        arcs = self.arcs
        for x in left[:-1]:
            key = parent[x][1]
            cols.append(key)
            fwd.append(arcs[key][0] == x)
        for x in reversed(right[:-1]):
            key = parent[x][1]
            cols.append(key)
            fwd.append(arcs[key][0] == parent[x][0])
        verts = left + right[-2::-1]
        return MarkedPath(tuple(cols), tuple(fwd), tuple(verts))

    def exchange(self, leaving: Hashable, entering: Hashable, arc: Arc,
                 path: Optional[MarkedPath] = None) -> None:
        """Swap one tree arc for ``arc`` in place, re-rooting the detached side.

        ``arc`` must reconnect the two components left by removing
        ``leaving``. Passing the tree path of ``arc`` (which contains
        ``leaving``) keeps the cost linear in that path.
        """
        t, h = self.arcs[leaving]
        parent = self.parent
        child = h if parent.get(h, (None, None))[1] == leaving else t
        if parent.get(child, (None, None))[1] != leaving:
            raise InvariantViolation(f"arc {leaving} is not in the tree")
        # the endpoint of the entering arc inside the detached subtree
        a, b = arc
        inside = None
        if path is not None:
            if path.start != a or path.end != b or leaving not in path.cols:
                raise InvariantViolation(f"path does not join arc {entering} through {leaving}")
            k = path.cols.index(leaving)
            inside, outside = (a, b) if path.vertices[k] == child else (b, a)
        else:
            for cand, other in ((a, b), (b, a)):
                x = cand
                while x in parent and x != child:
                    x = parent[x][0]
                if x == child:
                    inside, outside = cand, other
                    break
        if inside is None:
            raise InvariantViolation(f"arc {entering} does not reconnect the tree after removing {leaving}")
        prev, prev_key = outside, entering
        cur = inside
        while True:
            nxt, nxt_key = parent[cur]
            parent[cur] = (prev, prev_key)
            if cur == child:
                break
            prev, prev_key = cur, nxt_key
            cur = nxt
        del self.arcs[leaving]
        self.arcs[entering] = arc


def _path_keys(parent: dict, v: int, w: int) -> list:
    """Keys on the path ``v -> w`` in a forest rooted by ``parent`` (both in one tree)."""
    anc = []
    x = w
    seen = {x: 0}
    chain = [x]
    while x in parent:
        x = parent[x][0]
        seen[x] = len(chain)
        chain.append(x)
    x = v
    left = []
    while x not in seen:
        left.append(parent[x][1])
        x = parent[x][0]
    right = [parent[y][1] for y in chain[:seen[x]]]
    return left + right[::-1]


def basis_tree(inst: ArbInstance, B: Iterable[int], layout: Optional[ColumnLayout] = None,
               arcs: Optional[Sequence[Optional[Arc]]] = None) -> BasisTree:
    """The tree ``T_B`` of the non-artificial columns of ``B``, rooted at the instance root."""
    if arcs is None:
        arcs = column_arcs(inst, layout)
    keyed = {j: arcs[j] for j in sorted(B) if j != 0}
    return BasisTree.from_arcs(inst.tree.vertices, keyed, inst.tree.root)


def representation_vector(inst: ArbInstance, B: Iterable[int], j_t: int,
                          layout: Optional[ColumnLayout] = None, *,
                          tree: Optional[BasisTree] = None,
                          arcs: Optional[Sequence[Optional[Arc]]] = None) -> dict[int, int]:
    """Sparse ``A_B^{-1} A_{j_t}``: ``+1`` on forward and ``-1`` on backward path arcs."""
    if arcs is None:
        arcs = column_arcs(inst, layout)
    if tree is None:
        tree = basis_tree(inst, B, arcs=arcs)
    if j_t in tree.arcs:
        raise ValueError(f"column {j_t} is already basic")
    v, w = arcs[j_t]
    p = tree.path(v, w)
    return {c: (1 if f else -1) for c, f in zip(p.cols, p.forward)}


def is_augmenting(path: MarkedPath, x: Mapping) -> bool:
    """Forward arcs carry 1 and backward arcs carry 0."""
    return all(x.get(c, 0) == (1 if f else 0) for c, f in zip(path.cols, path.forward))


def is_descending(path: MarkedPath, x: Mapping) -> bool:
    """Forward arcs carry 0 and backward arcs carry 1."""
    return all(x.get(c, 0) == (0 if f else 1) for c, f in zip(path.cols, path.forward))


@dataclass(frozen=True)
class PivotClass:
    degenerate: bool
    x_changes: bool
    entering_rises: bool
    path_augmenting: bool
    path_descending_after: bool

    @property
    def conditions(self) -> tuple[bool, bool, bool, bool]:
        return (self.x_changes, self.entering_rises, self.path_augmenting, self.path_descending_after)


def classify_pivot(inst: ArbInstance, B: Iterable[int], B2: Iterable[int], x: Mapping, x2: Mapping,
                   j_t: int, layout: Optional[ColumnLayout] = None, *,
                   tree: Optional[BasisTree] = None,
                   arcs: Optional[Sequence[Optional[Arc]]] = None) -> PivotClass:
    """Evaluate the four equivalent non-degeneracy conditions of a cardinal pivot.

    ``x`` and ``x2`` map columns to values (missing means 0). The conditions
    are: the point moves; ``x_{j_t}`` goes from 0 to 1; the entering arc's
    path in ``T_B`` is ``x``-augmenting; that path is ``x2``-descending.
    Raises :class:`InvariantViolation` if they disagree.
    """
    if arcs is None:
        arcs = column_arcs(inst, layout)
    if tree is None:
        tree = basis_tree(inst, B, arcs=arcs)
    cols = set(B) | set(B2) | set(x) | set(x2)
    moved = any(x.get(c, 0) != x2.get(c, 0) for c in cols)
    rises = x.get(j_t, 0) == 0 and x2.get(j_t, 0) == 1
    v, w = arcs[j_t]
    p = tree.path(v, w)
    pc = PivotClass(not moved, moved, rises, is_augmenting(p, x), is_descending(p, x2))
    if len(set(pc.conditions)) != 1:
        raise InvariantViolation(f"pivot on column {j_t} classified inconsistently: {pc.conditions}")
    return pc


def network_matrix(vertices: Sequence[int], tree_arcs: Sequence[Arc], arcs: Sequence[Arc]) -> list[list[int]]:
    """Rows indexed by ``tree_arcs``, columns by ``arcs``; entries are path signs."""
    keyed = {k: a for k, a in enumerate(tree_arcs)}
    tree = BasisTree.from_arcs(vertices, keyed)
    out = [[0] * len(arcs) for _ in tree_arcs]
    for j, (v, w) in enumerate(arcs):
        p = tree.path(v, w)
        for k, f in zip(p.cols, p.forward):
            out[k][j] = 1 if f else -1
    return out


def inverse_identity_check(vertices: Sequence[int], tree1: Sequence[Arc], tree2: Sequence[Arc]) -> bool:
    """Whether the network matrix of ``tree2`` in ``tree1`` and vice versa multiply to ``I``."""
    n12 = network_matrix(vertices, tree1, tree2)
    n21 = network_matrix(vertices, tree2, tree1)
    n = len(tree1)
    for r in range(n):
        for c in range(n):
            s = sum(n12[r][k] * n21[k][c] for k in range(n))
            if s != (1 if r == c else 0):
                return False
    return True
