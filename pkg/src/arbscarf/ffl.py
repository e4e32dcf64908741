"""Polynomial Scarf run for arborescence instances.

The instance is first relabeled depth-first (ancestors get larger labels,
the root is ``v_{n+1}``, tree arc ``f_i`` enters ``v_i`` and carries vertex
``i``). Every iteration then does:

* a cardinal pivot with the first-forward-arc-leaving rule, resolved by
  inspecting the basis-tree path of the entering arc (no linear algebra);
* an ordinal pivot in which the leaving column is the singleton of the
  current separator ``i``, the reference row is 0 and the entering column is
  the first column right of ``max O`` beating the reduced utilities.

The separator strictly increases, so there are at most ``n`` iterations, and
the ordinal scan only moves right, so at most ``m`` columns are scanned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .blocks import BlockSystem, OrdinalView, build_block_system
from .errors import (
    IterationLimitExceeded,
    InvariantViolation,
    NoForwardArc,
    RightmostIsSingleton,
)
from .instance import ArbInstance, depth_first_relabel
from .network import BasisTree, MarkedPath, basis_tree, classify_pivot, column_arcs
from .scarf_core import OrdinalState, ScarfIteration, ScarfTrace, ordinal_pivot
from .verify import Matching, is_stable_matching

VERIFY_LIMIT = 200


@dataclass(frozen=True)
class NiceReport:
    """Outcome of :func:`check_nice_basis`; ``condition`` names the first failure."""

    ok: bool
    condition: Optional[str] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_nice_basis(inst: ArbInstance, B, x, i: int, *, bs: Optional[BlockSystem] = None,
                     tree: Optional[BasisTree] = None, arcs=None) -> NiceReport:
    """Test whether ``B`` (with 0/1 point ``x``) is ``i``-nice.

    ``inst`` must be depth-first labeled. The conditions, in order:

    - ``root-paths``: the ``T_B`` path from the root to every vertex is
      ``x``-augmenting;
    - ``tree-arcs``: the singleton columns ``i..n`` are all basic;
    - ``cuts``: for each ``q >= i``, removing ``f_q`` splits ``T_B`` like it
      splits the principal tree, i.e. no other basic arc crosses that cut.
    """
    n = inst.n
    bs = bs or build_block_system(inst.system)
    if arcs is None:
        arcs = column_arcs(inst, bs.layout)
    B = set(B)
    if tree is None:
        tree = basis_tree(inst, B, arcs=arcs)
    xv = x.__getitem__ if not isinstance(x, dict) else (lambda c: x.get(c, 0))

    # root-paths: an arc is fine when it is traversed forward with x=1 or backward with x=0
    good: dict[int, bool] = {tree.root: True}
    parent = tree.parent

    def ok_at(v: int) -> bool:
        chain = []
        while v not in good:
            chain.append(v)
            v = parent[v][0]
        flag = good[v]
        for w in reversed(chain):
            p, key = parent[w]
            fwd = tree.arcs[key][0] == p
            flag = flag and (xv(key) == (1 if fwd else 0))
            good[w] = flag
        return flag

    for v in inst.tree.vertices:
        if not ok_at(v):
            return NiceReport(False, "root-paths", f"root path to vertex {v} is not augmenting")
    missing = [q for q in range(i, n + 1) if q not in B]
    if missing:
        return NiceReport(False, "tree-arcs", f"singleton columns {missing} are not basic")
    support = bs.support
    for j in B:
        if j == 0 or j <= n:
            continue
        top = support(j)[-1]
        if top >= i:
            return NiceReport(False, "cuts", f"column {j} crosses the cut of tree arc {top}")
    return NiceReport(True)


def separator_of(O, bs: BlockSystem) -> int:
    """Block index of the rightmost column of ``O``."""
    j = max(O)
    blk = bs.layout.block_of_col[j]
    if blk == 0:
        raise RightmostIsSingleton(f"rightmost column {j} of the ordinal basis is not in a block")
    return blk


@dataclass
class FflState:
    """Mutable state of one run; owned by :class:`FflRun`."""

    B: set
    x: bytearray
    tree: BasisTree
    O: set
    u: list
    dislike: list
    separator: int
    pending: int


@dataclass
class FflResult:
    matching: Matching
    trace: ScarfTrace
    trace_lines: list[str]
    separators: list[int]
    scanned_columns: int
    verified: bool
    relabeled: ArbInstance
    basis: frozenset[int] = field(default_factory=frozenset)

    @property
    def iterations(self) -> int:
        return len(self.trace)


class FflRun:
    """One FFL run on a depth-first labeled instance.

    Use :func:`run_ffl` unless you need to drive iterations one at a time.
    """

    def __init__(self, inst: ArbInstance, verify: bool, record_utilities: bool = False):
        self.inst = inst
        self.verify = verify
        self.record_utilities = record_utilities
        self.bs = build_block_system(inst.system)
        self.view: OrdinalView = self.bs.view
        self.layout = self.bs.layout
        self.arcs = column_arcs(inst, self.layout)
        n, m = inst.n, inst.m
        self.n, self.m = n, m
        self.scanned = 0
        self.trace = ScarfTrace()
        self.lines: list[str] = []
        self.separators: list[int] = []
        tree = basis_tree(inst, range(n + 1), arcs=self.arcs)
        x = bytearray(m + 1)
        for j in range(n + 1):
            x[j] = 1
        u = [0] * (n + 1)
        dislike = list(range(n + 1))
        O = set(range(1, n + 2)) if m > n else set(range(n + 1))
        sep = 0
        if m > n:
            u[0] = self.view.value(0, n + 1)
            dislike[0] = n + 1
            sep = separator_of(O, self.bs)
        self.state = FflState(set(range(n + 1)), x, tree, O, u, dislike, sep, n + 1 if m > n else 0)
        self.done = m <= n
        self.odd_rows: set[int] = set()

    # -- cardinal side -----------------------------------------------------

    def leaving(self, path: MarkedPath) -> int:
        """First forward arc with ``x = 0``, else the first forward arc."""
        x = self.state.x
        first = None
        for c, f in zip(path.cols, path.forward):
            if f:
                if x[c] == 0:
                    return c
                if first is None:
                    first = c
        if first is None:
            raise NoForwardArc(f"path from {path.start} to {path.end} has no forward arc")
        return first

    def _cardinal(self, j_t: int, i: int) -> tuple[int, MarkedPath, bool]:
        st = self.state
        inst = self.inst
        v, w = self.arcs[j_t]
        support = self.bs.support(j_t)
        if support[-1] != i:
            raise InvariantViolation(f"entering column {j_t} has top vertex {support[-1]}, separator is {i}")
        f_tail = inst.tree.arcs[i - 1][0]
        if v != f_tail:
            raise InvariantViolation(f"entering arc {j_t} does not share its tail with tree arc {i}")
        path = st.tree.path(v, w)
        j_l = self.leaving(path)
        if j_l != i:
            raise InvariantViolation(f"leaving column {j_l} is not the separator's tree arc {i}")
        nondeg = st.x[j_l] == 1
        if self.verify:
            self._verify_cardinal(j_t, j_l, path)
            x_before = {c: st.x[c] for c in st.B}
        x = st.x
        if nondeg:
            for c, f in zip(path.cols, path.forward):
                if f:
                    x[c] = 0
                else:
                    if x[c] != 0:
                        raise InvariantViolation(f"backward arc {c} already at 1 on a non-degenerate pivot")
                    x[c] = 1
            x[j_t] = 1
        if self.verify:
            B_old = set(st.B)
            x_after = {c: x[c] for c in (st.B - {j_l}) | {j_t}}
            pc = classify_pivot(inst, B_old, (B_old - {j_l}) | {j_t}, x_before, x_after, j_t,
                                tree=st.tree, arcs=self.arcs)
            if pc.degenerate == nondeg:
                raise InvariantViolation(f"pivot on column {j_t} was resolved against its classification")
        st.tree.exchange(j_l, j_t, (v, w), path)
        st.B.discard(j_l)
        st.B.add(j_t)
        return j_l, path, nondeg

    def _verify_cardinal(self, j_t: int, j_l: int, path: MarkedPath) -> None:
        # A_B y = A_{j_t} with the combinatorial y, then the ratio test
        st = self.state
        y = {c: (1 if f else -1) for c, f in zip(path.cols, path.forward)}
        acc = np.zeros(self.n + 1, dtype=np.int64)
        for c, s in y.items():
            acc[list(self.bs.support(c))] += s
        want = np.zeros(self.n + 1, dtype=np.int64)
        want[list(self.bs.support(j_t))] = 1
        if not np.array_equal(acc, want):
            raise InvariantViolation(f"path representation of column {j_t} does not solve the basis system")
        pos = [c for c, s in y.items() if s > 0]
        best = min(st.x[c] for c in pos)
        if st.x[j_l] != best or y[j_l] != 1:
            raise InvariantViolation(f"leaving column {j_l} fails the ratio test")

    # -- ordinal side ------------------------------------------------------

    def _ordinal(self, i: int) -> int:
        """Separator-driven ordinal pivot with leaving column ``i``; returns ``j*`` (0 when done)."""
        st = self.state
        view = self.view
        if st.dislike[i] != i:
            raise InvariantViolation(f"singleton column {i} is not disliked by row {i}")
        j_r = max(st.O)
        if st.dislike[0] != j_r:
            raise InvariantViolation(f"rightmost column {j_r} is not disliked by the controlling row")
        if self.verify:
            C = self.bs.C
            gen_state = OrdinalState(frozenset(st.O), tuple(st.u), tuple(st.dislike))
        u = st.u
        old_ui = u[i]
        u[i] = view.rank_value(i, j_r)  # reduced utility of row i
        # rows whose utility is not a rank value must be compared explicitly
        odd = self.odd_rows
        odd.discard(i)
        odd_rows = sorted(odd)
        support = self.bs.support
        rank_value = view.rank_value
        j_star = 0
        j = j_r + 1
        m = self.m
        while j <= m:
            self.scanned += 1
            ok = True
            for r in support(j):
                if rank_value(r, j) <= u[r]:
                    ok = False
                    break
            if ok:
                for r in odd_rows:
                    if r not in support(j) and view.value(r, j) <= u[r]:
                        ok = False
                        break
            if ok:
                j_star = j
                break
            j += 1
        st.O.discard(i)
        if j_star:
            st.O.add(j_star)
            old_u0 = u[0]
            u[0] = view.value(0, j_star)
            st.dislike[i] = j_r
            st.dislike[0] = j_star
            if not view.in_delta(i, j_r):
                odd.add(i)
            if not (u[i] > old_ui and u[0] < old_u0):
                raise InvariantViolation("utility dynamics violated in the separator pivot")
        else:
            st.O.add(0)
            st.dislike[i] = j_r
            st.dislike[0] = 0
            u[0] = 0
        if self.verify:
            new, g_star, g_r, g_ir = ordinal_pivot(gen_state, self.bs, i)
            if (g_star, g_r, g_ir) != (j_star, j_r, 0):
                raise InvariantViolation(f"separator pivot gave (j*, j_r, i_r)=({j_star}, {j_r}, 0), "
                                         f"generic pivot gave ({g_star}, {g_r}, {g_ir})")
            if tuple(u) != new.u or set(new.O) != st.O:
                raise InvariantViolation("separator pivot disagrees with the generic ordinal pivot")
        return j_star

    # -- driver ------------------------------------------------------------

    def step(self) -> ScarfIteration:
        st = self.state
        i = st.separator
        j_t = st.pending
        k = len(self.trace) + 1
        nice = "unchecked"
        if self.verify:
            rep = check_nice_basis(self.inst, st.B, st.x, i, bs=self.bs, tree=st.tree, arcs=self.arcs)
            if not rep:
                raise InvariantViolation(f"iteration {k}: basis is not {i}-nice ({rep.condition}: {rep.detail})")
            nice = "ok"
        j_l, _, _ = self._cardinal(j_t, i)
        j_star = self._ordinal(i)
        self.separators.append(i)
        rec = ScarfIteration(j_t, j_l, j_t, 0, j_star, separator=i,
                             utilities=tuple(st.u) if self.record_utilities else None)
        self.trace.iterations.append(rec)
        self.lines.append(f"it={k} sep={i} jt={j_t} jl={j_l} j*={j_star} nice={nice}")
        if j_star == 0:
            if st.B != st.O:
                raise InvariantViolation("scan exhausted but the bases differ")
            self.done = True
        else:
            new_sep = self.layout.block_of_col[j_star]
            if new_sep <= i:
                raise InvariantViolation(f"separator moved from {i} to {new_sep}")
            st.separator = new_sep
            st.pending = j_star
        return rec


def run_ffl(inst: ArbInstance, *, verify: Optional[bool] = None,
            max_iterations: Optional[int] = None, record_utilities: Optional[bool] = None) -> FflResult:
    """Stable matching of an arborescence instance via the FFL Scarf run.

    ``verify`` defaults to on for ``n <= 200``; it adds per-iteration checks
    of the nice-basis invariant, the ratio test, the pivot classification
    and agreement with the generic ordinal pivot. Hyperedge ids are kept, so
    the returned matching is indexed like the input.
    """
    dfi, _ = depth_first_relabel(inst)
    if verify is None:
        verify = inst.n <= VERIFY_LIMIT
    if record_utilities is None:
        record_utilities = verify
    run = FflRun(dfi, verify, record_utilities)
    cap = inst.n if max_iterations is None else max_iterations
    while not run.done:
        if len(run.trace) >= cap:
            if max_iterations is None:
                raise InvariantViolation(f"more than {inst.n} iterations")
            raise IterationLimitExceeded(f"no dominating basis after {cap} iterations")
        run.step()
    st = run.state
    if run.scanned > inst.m + inst.n:
        raise InvariantViolation(f"scanned {run.scanned} columns")
    xcols = [st.x[j] if j in st.B else 0 for j in range(inst.m + 1)]
    matching = Matching(run.bs.edge_vector(xcols))
    report = is_stable_matching(inst.system, matching)
    if not report.stable:
        raise InvariantViolation("final point is not a stable matching")
    return FflResult(matching, run.trace, run.lines, run.separators, run.scanned, verify, dfi,
                     frozenset(st.B))
