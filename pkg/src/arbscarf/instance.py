"""Hypergraphic preference systems and their underlying arborescence networks.

A :class:`PreferenceSystem` is the hypergraph plus strict per-vertex orders.
An :class:`ArbInstance` additionally carries the network it lives on: a
principal arborescence whose tree arcs are in bijection with the vertices of
the hypergraph, and one digraph arc per hyperedge whose tree path is directed
and consists exactly of the tree arcs of that hyperedge's vertices.

Vertices of the hypergraph are ``1..n``; hyperedge ids are ``1..m``; tree arc
ids are ``1..n``. Tree vertices carry arbitrary positive integer labels.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    BadInterval,
    InvalidSystem,
    NotArborescence,
    NotATree,
    NotDirectedPath,
    ParseError,
)

Edge = tuple[int, ...]
Arc = tuple[int, int]


@dataclass(frozen=True)
class PreferenceSystem:
    """Hypergraph on ``1..n`` with a strict order over ``δ(i)`` for each vertex.

    ``hyperedges[k]`` is hyperedge id ``k + 1`` as a sorted vertex tuple and
    ``prefs[i - 1]`` lists the ids containing vertex ``i``, most preferred
    first. Construction only normalizes; use :func:`validate` for checks.
    """

    n: int
    hyperedges: tuple[Edge, ...]
    prefs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "hyperedges", tuple(tuple(sorted(e)) for e in self.hyperedges))
        object.__setattr__(self, "prefs", tuple(tuple(p) for p in self.prefs))

    @property
    def m(self) -> int:
        return len(self.hyperedges)

    def edge(self, eid: int) -> Edge:
        return self.hyperedges[eid - 1]

    def pref(self, i: int) -> tuple[int, ...]:
        return self.prefs[i - 1]

    @cached_property
    def delta(self) -> tuple[tuple[int, ...], ...]:
        """``delta[i - 1]`` is the sorted tuple of edge ids containing ``i``."""
        out: list[list[int]] = [[] for _ in range(self.n)]
        for eid, e in enumerate(self.hyperedges, start=1):
            for v in e:
                if 1 <= v <= self.n:
                    out[v - 1].append(eid)
        return tuple(tuple(d) for d in out)

    @cached_property
    def singletons(self) -> dict[int, int]:
        """Vertex -> id of its singleton hyperedge, for vertices that have one."""
        out = {}
        for eid, e in enumerate(self.hyperedges, start=1):
            if len(e) == 1:
                out.setdefault(e[0], eid)
        return out

    @cached_property
    def rank_maps(self) -> tuple[dict[int, int], ...]:
        """``rank_maps[i - 1][eid]`` is the 0-based position of eid in ``prefs[i - 1]``."""
        return tuple({eid: pos for pos, eid in enumerate(p)} for p in self.prefs)

    def prefers(self, i: int, e: int, f: int) -> bool:
        """True iff vertex ``i`` strictly prefers edge ``e`` to edge ``f``."""
        r = self.rank_maps[i - 1]
        return r[e] < r[f]


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    system: PreferenceSystem

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(system: PreferenceSystem, *, repair: bool = False,
             require_singletons: bool = True) -> ValidationReport:
    """List every violated invariant of ``system``.

    With ``repair=True`` missing singletons are appended as new hyperedges and
    placed last in their vertex's order; the report then describes the
    repaired system, which is returned alongside it.
    """
    if repair:
        system = _repair_singletons(system)
    v: list[str] = []
    n = system.n
    if n < 1:
        v.append("system has no vertices")
    seen: dict[Edge, int] = {}
    for eid, e in enumerate(system.hyperedges, start=1):
        if not e:
            v.append(f"hyperedge {eid} is empty")
            continue
        if len(set(e)) != len(e):
            v.append(f"hyperedge {eid} repeats a vertex")
        bad = [x for x in e if not 1 <= x <= n]
        if bad:
            v.append(f"hyperedge {eid} has vertices outside 1..{n}: {bad}")
        if e in seen:
            v.append(f"duplicate hyperedge {list(e)} (ids {seen[e]} and {eid})")
        else:
            seen[e] = eid
    if len(system.prefs) != n:
        v.append(f"expected {n} preference lists, got {len(system.prefs)}")
    for i in range(1, min(n, len(system.prefs)) + 1):
        p = system.pref(i)
        delta = set(system.delta[i - 1])
        if len(set(p)) != len(p):
            v.append(f"preference list of vertex {i} has duplicate entries")
        for eid in p:
            if not 1 <= eid <= system.m:
                v.append(f"vertex {i} lists unknown hyperedge {eid}")
            elif eid not in delta:
                v.append(f"vertex {i} lists hyperedge {eid} which does not contain it")
        for eid in sorted(delta - set(p)):
            v.append(f"hyperedge {eid} missing from preferences of vertex {i}")
        if require_singletons:
            s = system.singletons.get(i)
            if s is None or s not in p:
                v.append(f"singleton absent at vertex {i}")
            elif p[-1] != s:
                v.append(f"singleton not least preferred at vertex {i}")
    return ValidationReport(tuple(v), system)


def _repair_singletons(system: PreferenceSystem) -> PreferenceSystem:
    hyperedges = list(system.hyperedges)
    prefs = [list(p) for p in system.prefs]
    singles = dict(system.singletons)
    for i in range(1, system.n + 1):
        if i not in singles:
            hyperedges.append((i,))
            singles[i] = len(hyperedges)
        if i - 1 < len(prefs) and singles[i] not in prefs[i - 1]:
            prefs[i - 1].append(singles[i])
    return PreferenceSystem(system.n, tuple(hyperedges), tuple(prefs))


def _require_valid(system: PreferenceSystem, require_singletons: bool = True) -> None:
    report = validate(system, require_singletons=require_singletons)
    if not report.ok:
        raise InvalidSystem(report.violations)


@dataclass(frozen=True)
class Arborescence:
    """Directed tree in which every vertex is reachable from ``root``.

    ``arcs[k]`` is tree arc id ``k + 1`` as ``(tail, head)``.
    """

    vertices: tuple[int, ...]
    arcs: tuple[Arc, ...]
    root: int

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arcs", tuple((int(t), int(h)) for t, h in self.arcs))
        vs = self.vertices
        if len(set(vs)) != len(vs):
            raise NotATree("duplicate vertex labels")
        if len(self.arcs) != len(vs) - 1:
            raise NotATree(f"{len(self.arcs)} arcs on {len(vs)} vertices")
        known = set(vs)
        for k, (t, h) in enumerate(self.arcs, start=1):
            if t not in known or h not in known:
                raise NotATree(f"tree arc {k} has an unknown endpoint")
            if t == h:
                raise NotATree(f"tree arc {k} is a loop")
        uf = {v: v for v in vs}

        def find(a):
            while uf[a] != a:
                uf[a] = uf[uf[a]]
                a = uf[a]
            return a

        for k, (t, h) in enumerate(self.arcs, start=1):
            rt, rh = find(t), find(h)
            if rt == rh:
                raise NotATree(f"tree arc {k} closes a cycle")
            uf[rt] = rh
        if self.root not in known:
            raise NotArborescence(f"root {self.root} is not a vertex")
        indeg = {v: 0 for v in vs}
        for _, h in self.arcs:
            indeg[h] += 1
        if indeg[self.root] != 0:
            raise NotArborescence(f"root {self.root} has an entering arc")
        bad = [v for v in vs if v != self.root and indeg[v] != 1]
        if bad:
            raise NotArborescence(f"vertices {bad[:5]} are not reachable from the root")

    @property
    def n(self) -> int:
        return len(self.arcs)

    def arc(self, aid: int) -> Arc:
        return self.arcs[aid - 1]

    @cached_property
    def parent(self) -> dict[int, tuple[int, int]]:
        """Vertex -> (parent vertex, id of the entering tree arc); root absent."""
        return {h: (t, k) for k, (t, h) in enumerate(self.arcs, start=1)}

    @cached_property
    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in self.vertices}
        for t, h in self.arcs:
            out[t].append(h)
        for c in out.values():
            c.sort()
        return out

    @cached_property
    def depth(self) -> dict[int, int]:
        out = {self.root: 0}
        stack = [self.root]
        while stack:
            v = stack.pop()
            for c in self.children[v]:
                out[c] = out[v] + 1
                stack.append(c)
        return out

    def directed_path(self, tail: int, head: int) -> list[int]:
        """Tree arc ids on the directed path ``tail -> head``, in path order.

        Returns ``None``-free results only; raises :class:`ValueError` when
        ``tail`` is not a proper ancestor of ``head``.
        """
        parent = self.parent
        out = []
        v = head
        while v != tail:
            if v not in parent:
                raise ValueError(f"{tail} is not an ancestor of {head}")
            v, aid = parent[v]
            out.append(aid)
        if not out:
            raise ValueError("empty path")
        out.reverse()
        return out

    def is_ancestor(self, u: int, v: int) -> bool:
        """True iff the directed path from the root to ``v`` passes through ``u``."""
        parent = self.parent
        while True:
            if v == u:
                return True
            if v not in parent:
                return False
            v = parent[v][0]


@dataclass(frozen=True)
class ArbInstance:
    """A preference system given together with its underlying network.

    ``arc_of_node[i - 1]`` is the tree arc of hypergraph vertex ``i`` and
    ``edge_arcs[eid - 1]`` the digraph arc representing hyperedge ``eid``.
    """

    system: PreferenceSystem
    tree: Arborescence
    arc_of_node: tuple[int, ...]
    edge_arcs: tuple[Arc, ...]

    def __post_init__(self):
        object.__setattr__(self, "arc_of_node", tuple(self.arc_of_node))
        object.__setattr__(self, "edge_arcs", tuple((int(t), int(h)) for t, h in self.edge_arcs))
        n = self.system.n
        if self.tree.n != n:
            raise InvalidSystem([f"tree has {self.tree.n} arcs but the system has {n} vertices"])
        if sorted(self.arc_of_node) != list(range(1, n + 1)):
            raise InvalidSystem(["node-to-arc map is not a bijection onto the tree arcs"])
        if len(self.edge_arcs) != self.system.m:
            raise InvalidSystem([f"{len(self.edge_arcs)} hyperedge arcs for {self.system.m} hyperedges"])
        node_of_arc = self.node_of_arc
        for eid, (t, h) in enumerate(self.edge_arcs, start=1):
            try:
                path = self.tree.directed_path(t, h)
            except (ValueError, KeyError):
                raise NotDirectedPath(eid) from None
            if tuple(sorted(node_of_arc[a] for a in path)) != self.system.edge(eid):
                raise InvalidSystem([f"arc of hyperedge {eid} spans a different vertex set"])

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def m(self) -> int:
        return self.system.m

    @cached_property
    def node_of_arc(self) -> dict[int, int]:
        return {a: i for i, a in enumerate(self.arc_of_node, start=1)}


def build_arb_instance(tree: Arborescence, arc_of_node: Sequence[int] | Mapping[int, int],
                       edge_arcs: Sequence[Arc], prefs: Sequence[Sequence[int]], *,
                       require_singletons: bool = True) -> ArbInstance:
    """Derive each hyperedge from its arc's tree path and assemble the instance.

    ``arc_of_node`` may be a sequence (vertex ``i`` at position ``i - 1``) or a
    mapping from vertex to tree arc id.
    """
    if not isinstance(tree, Arborescence):
        raise NotATree("expected an Arborescence")
    n = tree.n
    if isinstance(arc_of_node, Mapping):
        arc_of_node = [arc_of_node[i] for i in range(1, n + 1)]
    arc_of_node = tuple(arc_of_node)
    if sorted(arc_of_node) != list(range(1, n + 1)):
        raise InvalidSystem(["node-to-arc map is not a bijection onto the tree arcs"])
    node_of_arc = {a: i for i, a in enumerate(arc_of_node, start=1)}
    hyperedges = []
    for eid, (t, h) in enumerate(edge_arcs, start=1):
        try:
            path = tree.directed_path(t, h)
        except (ValueError, KeyError):
            raise NotDirectedPath(eid) from None
        hyperedges.append(tuple(sorted(node_of_arc[a] for a in path)))
    system = PreferenceSystem(n, tuple(hyperedges), tuple(tuple(p) for p in prefs))
    _require_valid(system, require_singletons)
    return ArbInstance(system, tree, arc_of_node, tuple(edge_arcs))


@dataclass(frozen=True)
class DepthFirstLabeling:
    """Maps from original labels to depth-first labels.

    ``vertex_perm[label]`` is the new label ``k`` of vertex ``v_k``;
    ``arc_perm[aid]`` the new id of a tree arc, which is also the new number
    of the hypergraph vertex sitting on that arc (``node_perm``).
    """

    vertex_perm: dict[int, int]
    arc_perm: dict[int, int]
    node_perm: dict[int, int]

    @cached_property
    def node_inverse(self) -> dict[int, int]:
        return {new: old for old, new in self.node_perm.items()}


def is_depth_first(inst: ArbInstance) -> bool:
    """Whether the labels already satisfy the depth-first conditions."""
    tree = inst.tree
    n = tree.n
    if sorted(tree.vertices) != list(range(1, n + 2)) or tree.root != n + 1:
        return False
    if inst.arc_of_node != tuple(range(1, n + 1)):
        return False
    for k, (t, h) in enumerate(tree.arcs, start=1):
        # an arc tail is the parent of its head, so comparing them is enough
        if h != k or t <= h:
            return False
    return True


def depth_first_relabel(inst: ArbInstance) -> tuple[ArbInstance, DepthFirstLabeling]:
    """Relabel so that ancestors get larger labels and ``f_i`` enters ``v_i``.

    Instances that are already depth-first come back unchanged. Otherwise
    vertices are numbered in post-order, children visited in ascending
    original label. Hyperedge ids are preserved; their vertex contents and
    the preference lists are renumbered.
    """
    tree = inst.tree
    if is_depth_first(inst):
        ident_v = {v: v for v in tree.vertices}
        ident_a = {a: a for a in range(1, tree.n + 1)}
        return inst, DepthFirstLabeling(ident_v, ident_a, dict(ident_a))
    order: list[int] = []
    children = tree.children
    stack = [(tree.root, 0)]
    while stack:
        v, k = stack.pop()
        ch = children[v]
        if k < len(ch):
            stack.append((v, k + 1))
            stack.append((ch[k], 0))
        else:
            order.append(v)
    vperm = {v: k for k, v in enumerate(order, start=1)}
    parent = tree.parent
    aperm = {parent[v][1]: vperm[v] for v in order if v != tree.root}
    n = tree.n
    new_arcs: list[Arc] = [(0, 0)] * n
    for aid, (t, h) in enumerate(tree.arcs, start=1):
        new_arcs[aperm[aid] - 1] = (vperm[t], vperm[h])
    node_perm = {i: aperm[a] for i, a in enumerate(inst.arc_of_node, start=1)}
    sys0 = inst.system
    new_edges = tuple(tuple(sorted(node_perm[x] for x in e)) for e in sys0.hyperedges)
    new_prefs: list[tuple[int, ...]] = [()] * n
    for i in range(1, n + 1):
        new_prefs[node_perm[i] - 1] = sys0.pref(i)
    new_tree = Arborescence(tuple(range(1, n + 2)), tuple(new_arcs), n + 1)
    new_sys = PreferenceSystem(n, new_edges, tuple(new_prefs))
    new_edge_arcs = tuple((vperm[t], vperm[h]) for t, h in inst.edge_arcs)
    out = ArbInstance(new_sys, new_tree, tuple(range(1, n + 1)), new_edge_arcs)
    return out, DepthFirstLabeling(vperm, aperm, node_perm)


def interval_instance(n: int, intervals: Sequence[tuple[int, int]],
                      prefs: Sequence[Sequence[int]], *,
                      add_singletons: bool = True) -> ArbInstance:
    """Embed an interval hypergraph on ``1..n`` into a path arborescence.

    Tree vertices are ``1..n+1`` rooted at ``n+1`` with ``f_i = (i+1, i)``, so
    interval ``[i, j]`` becomes the arc ``(j+1, i)``. Interval ``k`` (1-based)
    gets hyperedge id ``k``; ``prefs[i-1]`` orders the interval ids containing
    ``i``. With ``add_singletons`` every missing singleton is appended with the
    next free id and ranked last.
    """
    if n < 1:
        raise BadInterval("n must be positive")
    arcs = []
    for k, iv in enumerate(intervals, start=1):
        i, j = iv
        if not (1 <= i <= j <= n):
            raise BadInterval(f"interval {k} = [{i}, {j}] is outside 1..{n}")
        arcs.append((j + 1, i))
    if len(prefs) != n:
        raise BadInterval(f"expected {n} preference lists, got {len(prefs)}")
    prefs = [list(p) for p in prefs]
    if add_singletons:
        have = {i for (i, j) in intervals if i == j}
        for v in range(1, n + 1):
            if v not in have:
                arcs.append((v + 1, v))
                prefs[v - 1].append(len(arcs))
    tree = Arborescence(tuple(range(1, n + 2)), tuple((i + 1, i) for i in range(1, n + 1)), n + 1)
    return build_arb_instance(tree, tuple(range(1, n + 1)), arcs, prefs,
                              require_singletons=add_singletons)


def random_instance(seed: int, n: int, extra_edges: int) -> ArbInstance:
    """Deterministic random instance: tree, singletons, extra path hyperedges.

    The tree is a random recursive tree on ``n + 1`` shuffled labels; if it is
    too shallow to host ``extra_edges`` distinct paths of two or more arcs,
    later draws attach vertices to recent ones only, which deepens the tree. Preferences are
    uniform over the non-singleton edges, singleton last.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if extra_edges < 0 or extra_edges > n * (n - 1) // 2:
        raise ValueError(f"cannot place {extra_edges} distinct paths on {n} arcs")
    rng = random.Random(seed)
    labels = list(range(1, n + 2))
    rng.shuffle(labels)
    # random recursive trees first; if too shallow, attach each vertex within a
    # shrinking window of recent ones (window 1 is a path, which always suffices)
    attempt = 0
    while True:
        window = n if attempt < 4 else max(1, n >> (attempt - 3))
        attempt += 1
        par = [None] + [rng.randrange(max(0, t - window), t) for t in range(1, n + 1)]
        depth = [0] * (n + 1)
        for t in range(1, n + 1):
            depth[t] = depth[par[t]] + 1
        available = sum(d - 1 for d in depth if d > 1)
        if available >= extra_edges or window == 1:
            break
    arc_ids = list(range(1, n + 1))
    rng.shuffle(arc_ids)
    arc_of_pos = {t: arc_ids[t - 1] for t in range(1, n + 1)}  # position t -> arc id of its entering arc
    arcs: list[Arc] = [(0, 0)] * n
    for t in range(1, n + 1):
        arcs[arc_of_pos[t] - 1] = (labels[par[t]], labels[t])
    tree = Arborescence(tuple(labels), tuple(arcs), labels[0])
    nodes = list(range(1, n + 1))
    rng.shuffle(nodes)
    arc_of_node = [0] * n
    for k, node in enumerate(nodes, start=1):
        arc_of_node[node - 1] = k

    # extra paths: a head at depth >= 2 and an ancestor at least 2 steps up
    deep = [t for t in range(1, n + 1) if depth[t] > 1]
    weights = [depth[t] - 1 for t in deep]
    chosen: set[Arc] = set()
    if extra_edges and 2 * extra_edges > available:
        every = []
        for t in deep:
            a = par[t]
            for _ in range(depth[t] - 1):
                a = par[a]
                every.append((a, t))
        chosen_list = rng.sample(every, extra_edges)
    else:
        chosen_list = []
        cum = []
        s = 0
        for w in weights:
            s += w
            cum.append(s)
        while len(chosen_list) < extra_edges:
            t = rng.choices(deep, cum_weights=cum)[0]
            up = rng.randrange(2, depth[t] + 1)
            a = t
            for _ in range(up):
                a = par[a]
            if (a, t) not in chosen:
                chosen.add((a, t))
                chosen_list.append((a, t))

    edge_arcs: list[Arc] = []
    for t in range(1, n + 1):
        edge_arcs.append((labels[par[t]], labels[t]))
    for a, t in chosen_list:
        edge_arcs.append((labels[a], labels[t]))
    perm = list(range(len(edge_arcs)))
    rng.shuffle(perm)
    edge_arcs = [edge_arcs[p] for p in perm]

    # vertex content of each edge, to draw preferences
    node_of_arc = {a: i for i, a in enumerate(arc_of_node, start=1)}
    pos_of_label = {lab: t for t, lab in enumerate(labels)}
    delta: list[list[int]] = [[] for _ in range(n)]
    single = [0] * n
    for eid, (a, t) in enumerate(edge_arcs, start=1):
        ta, tt = pos_of_label[a], pos_of_label[t]
        members = []
        while tt != ta:
            members.append(node_of_arc[arc_of_pos[tt]])
            tt = par[tt]
        if len(members) == 1:
            single[members[0] - 1] = eid
        else:
            for v in members:
                delta[v - 1].append(eid)
    prefs = []
    for i in range(n):
        d = delta[i]
        rng.shuffle(d)
        prefs.append(tuple(d) + (single[i],))
    return build_arb_instance(tree, arc_of_node, edge_arcs, prefs)


# ---------------------------------------------------------------------------
# text format

_KEYWORDS = ("arb", "vertex", "treearc", "root", "nodearc", "edge", "pref")


def serialize_instance(inst: ArbInstance) -> str:
    tree = inst.tree
    lines = [f"arb {inst.n} {inst.m}"]
    lines += [f"vertex {v}" for v in tree.vertices]
    lines += [f"treearc {k} {t} {h}" for k, (t, h) in enumerate(tree.arcs, start=1)]
    lines.append(f"root {tree.root}")
    lines += [f"nodearc {i} {a}" for i, a in enumerate(inst.arc_of_node, start=1)]
    lines += [f"edge {k} {t} {h}" for k, (t, h) in enumerate(inst.edge_arcs, start=1)]
    lines += [f"pref {i} : " + " ".join(map(str, p)) for i, p in enumerate(inst.system.prefs, start=1)]
    return "\n".join(lines) + "\n"


def _tokens(line: str) -> list[tuple[str, int]]:
    out = []
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        out.append((tok, col + 1))
        col += len(tok)
    return out


def parse_instance(text: str, *, require_singletons: bool = True) -> ArbInstance:
    """Parse the line-oriented instance format; see :func:`serialize_instance`."""
    header: Optional[tuple[int, int]] = None
    vertices: list[int] = []
    treearcs: dict[int, Arc] = {}
    root: Optional[int] = None
    nodearc: dict[int, int] = {}
    edges: dict[int, Arc] = {}
    prefs: dict[int, list[int]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        kw, kwcol = toks[0]

        def ints(expected: int) -> list[int]:
            args = toks[1:]
            if len(args) != expected:
                raise ParseError(f"'{kw}' expects {expected} fields, got {len(args)}", lineno, kwcol)
            out = []
            for tok, c in args:
                try:
                    val = int(tok)
                except ValueError:
                    raise ParseError(f"expected an integer, got '{tok}'", lineno, c) from None
                if val < 1:
                    raise ParseError(f"ids must be positive, got {val}", lineno, c)
                out.append(val)
            return out

        if kw not in _KEYWORDS:
            raise ParseError(f"unknown keyword '{kw}'", lineno, kwcol)
        if header is None and kw != "arb":
            raise ParseError("instance must start with an 'arb <n> <m>' line", lineno, kwcol)
        if kw == "arb":
            if header is not None:
                raise ParseError("repeated 'arb' header", lineno, kwcol)
            n, m = ints(2)
            header = (n, m)
        elif kw == "vertex":
            (v,) = ints(1)
            vertices.append(v)
        elif kw == "treearc":
            k, t, h = ints(3)
            if k in treearcs:
                raise ParseError(f"tree arc {k} defined twice", lineno, kwcol)
            treearcs[k] = (t, h)
        elif kw == "root":
            if root is not None:
                raise ParseError("repeated 'root' line", lineno, kwcol)
            (root,) = ints(1)
        elif kw == "nodearc":
            i, a = ints(2)
            if i in nodearc:
                raise ParseError(f"node {i} mapped twice", lineno, kwcol)
            nodearc[i] = a
        elif kw == "edge":
            k, t, h = ints(3)
            if k in edges:
                raise ParseError(f"edge {k} defined twice", lineno, kwcol)
            edges[k] = (t, h)
        elif kw == "pref":
            if len(toks) < 3 or toks[2][0] != ":":
                raise ParseError("expected 'pref <i> : <edge ids>'", lineno, kwcol)
            try:
                i = int(toks[1][0])
            except ValueError:
                raise ParseError(f"expected an integer, got '{toks[1][0]}'", lineno, toks[1][1]) from None
            if i in prefs:
                raise ParseError(f"preferences of vertex {i} given twice", lineno, kwcol)
            ids = []
            for tok, c in toks[3:]:
                try:
                    ids.append(int(tok))
                except ValueError:
                    raise ParseError(f"expected an integer, got '{tok}'", lineno, c) from None
            prefs[i] = ids

    if header is None:
        raise ParseError("empty instance text")
    n, m = header

    def need(what: str, got: Iterable[int], count: int):
        got = sorted(got)
        if got != list(range(1, count + 1)):
            raise ParseError(f"expected {what} 1..{count}, got {got[:10]}")

    if len(vertices) != n + 1:
        raise ParseError(f"expected {n + 1} vertex lines, got {len(vertices)}")
    need("tree arcs", treearcs, n)
    need("nodearc lines for nodes", nodearc, n)
    need("edges", edges, m)
    need("pref lines for vertices", prefs, n)
    if root is None:
        raise ParseError("missing 'root' line")
    try:
        tree = Arborescence(tuple(vertices), tuple(treearcs[k] for k in range(1, n + 1)), root)
        return build_arb_instance(tree, [nodearc[i] for i in range(1, n + 1)],
                                  [edges[k] for k in range(1, m + 1)],
                                  [prefs[i] for i in range(1, n + 1)],
                                  require_singletons=require_singletons)
    except ParseError:
        raise
    except Exception as exc:  # structural errors are reported as parse errors too
        raise ParseError(f"{type(exc).__name__}: {exc}") from exc
