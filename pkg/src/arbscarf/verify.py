"""Ground-truth checkers and oracles.

Everything here is exact: integral vectors are ints, fractional ones are
:class:`fractions.Fraction`, and tightness means equality.

A vector ``x`` over hyperedges is stable when every hyperedge ``e`` has a
vertex ``i`` in ``e`` whose weakly preferred mass
``sum(x[f] for f in δ(i) if f ⪰_i e)`` equals 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from . import _exact
from .errors import DimensionMismatch, TooLarge
from .instance import ArbInstance, PreferenceSystem, interval_instance

BRUTE_FORCE_CAP = 20


@dataclass(frozen=True)
class Matching:
    """0/1 vector over hyperedge ids; ``x[eid - 1]`` belongs to hyperedge ``eid``."""

    x: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(int(v) for v in self.x))
        if any(v not in (0, 1) for v in self.x):
            raise ValueError("a matching is a 0/1 vector")

    @classmethod
    def from_edges(cls, m: int, edges: Iterable[int]) -> "Matching":
        chosen = set(edges)
        return cls(tuple(1 if k in chosen else 0 for k in range(1, m + 1)))

    def edges(self) -> list[int]:
        return [k for k, v in enumerate(self.x, start=1) if v]


@dataclass(frozen=True)
class EdgeCheck:
    edge: int
    witness: Optional[int]
    value: Fraction  # best weakly-preferred mass over the edge's vertices

    def line(self) -> str:
        if self.witness is not None:
            return f"edge {self.edge}: witness {self.witness}"
        return f"edge {self.edge}: VIOLATED sum={self.value.numerator}/{self.value.denominator}"


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    edges: tuple[EdgeCheck, ...]
    overloaded: tuple[tuple[int, Fraction], ...] = ()

    def __bool__(self) -> bool:
        return self.stable

    @property
    def violated(self) -> list[int]:
        return [c.edge for c in self.edges if c.witness is None]

    def lines(self) -> list[str]:
        out = ["STABLE" if self.stable else "UNSTABLE"]
        for v, s in self.overloaded:
            out.append(f"vertex {v}: OVERLOADED sum={s.numerator}/{s.denominator}")
        out += [c.line() for c in self.edges]
        return out


def _as_vector(system: PreferenceSystem, x) -> tuple:
    if isinstance(x, Matching):
        x = x.x
    x = tuple(x)
    if len(x) != system.m:
        raise DimensionMismatch(f"vector has {len(x)} entries for {system.m} hyperedges")
    return x


def _stability(system: PreferenceSystem, x: Sequence) -> StabilityReport:
    # weakly preferred mass at each position of each vertex's list
    mass: list[dict[int, Fraction]] = []
    overloaded = []
    for i in range(1, system.n + 1):
        acc = Fraction(0)
        d = {}
        for eid in system.pref(i):
            acc += x[eid - 1]
            d[eid] = acc
        mass.append(d)
        if acc > 1:
            overloaded.append((i, acc))
    checks = []
    for eid, e in enumerate(system.hyperedges, start=1):
        best = Fraction(0)
        wit = None
        for i in e:
            s = mass[i - 1][eid]
            if s == 1 and wit is None:
                wit = i
            best = max(best, s)
        checks.append(EdgeCheck(eid, wit, best))
    bad_range = any(v < 0 or v > 1 for v in x)
    stable = not overloaded and not bad_range and all(c.witness is not None for c in checks)
    return StabilityReport(stable, tuple(checks), tuple(overloaded))


def is_stable_matching(system: PreferenceSystem, x: Union[Matching, Sequence[int]]) -> StabilityReport:
    """Integral check: ``e`` is fine at ``i`` when ``i`` is matched to ``e`` or better."""
    x = _as_vector(system, x)
    if any(v not in (0, 1) for v in x):
        raise ValueError("is_stable_matching expects a 0/1 vector; use is_fractional_stable")
    ranks = system.rank_maps
    best: list[Optional[int]] = [None] * system.n  # rank of the matched edge
    load = [0] * system.n
    for eid, e in enumerate(system.hyperedges, start=1):
        if x[eid - 1]:
            for i in e:
                load[i - 1] += 1
                r = ranks[i - 1][eid]
                if best[i - 1] is None or r < best[i - 1]:
                    best[i - 1] = r
    overloaded = tuple((i, Fraction(c)) for i, c in enumerate(load, start=1) if c > 1)
    if overloaded:
        return _stability(system, [Fraction(int(v)) for v in x])
    checks = []
    one, zero = Fraction(1), Fraction(0)
    for eid, e in enumerate(system.hyperedges, start=1):
        wit = None
        for i in e:
            b = best[i - 1]
            if b is not None and b <= ranks[i - 1][eid]:
                wit = i
                break
        checks.append(EdgeCheck(eid, wit, one if wit is not None else zero))
    return StabilityReport(all(c.witness is not None for c in checks), tuple(checks))


def is_fractional_stable(system: PreferenceSystem, x: Sequence) -> StabilityReport:
    x = _as_vector(system, x)
    return _stability(system, [Fraction(v) for v in x])


def is_dominating_basis(bs, B: Iterable[int]) -> bool:
    from .scarf_core import is_feasible_cardinal_basis, is_ordinal_basis

    B = list(B)
    return is_feasible_cardinal_basis(bs, B) and is_ordinal_basis(bs, B)


def matchings(system: PreferenceSystem) -> Iterable[Matching]:
    """Every matching (pairwise disjoint hyperedges), each exactly once."""
    n, m = system.n, system.m
    by_min: list[list[int]] = [[] for _ in range(n + 1)]
    for eid, e in enumerate(system.hyperedges, start=1):
        by_min[e[0]].append(eid)
    covered = [False] * (n + 2)
    chosen: list[int] = []

    def rec(v: int):
        while v <= n and covered[v]:
            v += 1
        if v > n:
            yield Matching.from_edges(m, chosen)
            return
        # leave v uncovered
        covered[v] = True
        yield from rec(v + 1)
        covered[v] = False
        for eid in by_min[v]:
            e = system.edge(eid)
            if any(covered[w] for w in e):
                continue
            for w in e:
                covered[w] = True
            chosen.append(eid)
            yield from rec(v + 1)
            chosen.pop()
            for w in e:
                covered[w] = False

    yield from rec(1)


def brute_force_stable_matchings(system: PreferenceSystem, cap: int = BRUTE_FORCE_CAP) -> set[Matching]:
    """All integral stable matchings, by exhaustive enumeration of matchings."""
    if system.m > cap:
        raise TooLarge(f"{system.m} hyperedges exceed the enumeration cap of {cap}")
    return {mt for mt in matchings(system) if _stability(system, [Fraction(v) for v in mt.x]).stable}


# ---------------------------------------------------------------------------
# the fractional relaxation Q(I)

@lru_cache(maxsize=64)
def upper_sets(system: PreferenceSystem) -> tuple[int, ...]:
    """Bitmask of ``e^⪰`` per hyperedge (bit ``k - 1`` is hyperedge ``k``).

    ``e^⪰`` holds ``e`` and every hyperedge some vertex of ``e`` strictly
    prefers to ``e``.
    """
    out = []
    for eid, e in enumerate(system.hyperedges, start=1):
        mask = 1 << (eid - 1)
        for i in e:
            for f in system.pref(i):
                if f == eid:
                    break
                mask |= 1 << (f - 1)
        out.append(mask)
    return tuple(out)


def _bits(mask: int) -> list[int]:
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


@dataclass(frozen=True)
class QConstraint:
    """One inequality of Q(I) evaluated at a point.

    ``kind`` is ``degree`` (x(δ(i)) <= 1), ``upper-set`` (x(e^⪰) >= 1),
    ``nonneg`` (x_e >= 0) or ``bound`` (x_e <= 1); ``index`` is the vertex or
    hyperedge id.
    """

    kind: str
    index: int
    support: tuple[int, ...]
    value: Fraction
    sense: str
    rhs: int

    @property
    def tight(self) -> bool:
        return self.value == self.rhs

    @property
    def satisfied(self) -> bool:
        return self.value <= self.rhs if self.sense == "<=" else self.value >= self.rhs

    def line(self) -> str:
        v = self.value
        val = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        state = "tight" if self.tight else ("ok" if self.satisfied else "VIOLATED")
        return f"{self.kind} {self.index}: {val} {self.sense} {self.rhs} {state}"


@dataclass(frozen=True)
class QReport:
    constraints: tuple[QConstraint, ...]

    @property
    def feasible(self) -> bool:
        return all(c.satisfied for c in self.constraints)

    @property
    def tight(self) -> list[QConstraint]:
        return [c for c in self.constraints if c.tight]

    @property
    def violations(self) -> list[QConstraint]:
        return [c for c in self.constraints if not c.satisfied]

    def get(self, kind: str, index: int) -> QConstraint:
        for c in self.constraints:
            if c.kind == kind and c.index == index:
                return c
        raise KeyError((kind, index))

    def lines(self) -> list[str]:
        return [c.line() for c in self.constraints]


def q_membership(system: PreferenceSystem, x: Sequence) -> QReport:
    """Evaluate the ``|V| + 3|E|`` inequalities of Q(I) at ``x``."""
    x = [Fraction(v) for v in _as_vector(system, x)]
    cons = []
    for i in range(1, system.n + 1):
        sup = tuple(sorted(system.delta[i - 1]))
        cons.append(QConstraint("degree", i, sup, sum((x[k - 1] for k in sup), Fraction(0)), "<=", 1))
    for eid, mask in enumerate(upper_sets(system), start=1):
        sup = tuple(_bits(mask))
        cons.append(QConstraint("upper-set", eid, sup, sum((x[k - 1] for k in sup), Fraction(0)), ">=", 1))
    for eid in range(1, system.m + 1):
        cons.append(QConstraint("nonneg", eid, (eid,), x[eid - 1], ">=", 0))
    for eid in range(1, system.m + 1):
        cons.append(QConstraint("bound", eid, (eid,), x[eid - 1], "<=", 1))
    return QReport(tuple(cons))


def tight_rank(system: PreferenceSystem, x: Sequence) -> int:
    """Rank of the coefficient rows of the constraints tight at ``x``."""
    rows = []
    for c in q_membership(system, x).tight:
        row = [0] * system.m
        for k in c.support:
            row[k - 1] = 1
        rows.append(row)
    return _exact.rank(rows) if rows else 0


def is_extreme_point_Q(system: PreferenceSystem, x: Sequence) -> bool:
    """Feasible in Q(I) with ``m`` linearly independent tight constraints."""
    if not q_membership(system, x).feasible:
        return False
    return tight_rank(system, x) == system.m


# nine intervals on [1, 9]: ids 1..9 are e1, e2, e3, f1, f2, f3, g1, g2, g3
COUNTEREXAMPLE_NAMES = ("e1", "e2", "e3", "f1", "f2", "f3", "g1", "g2", "g3")
_CE_INTERVALS = ((4, 7), (1, 3), (6, 9), (1, 5), (3, 6), (7, 9), (1, 2), (6, 7), (8, 9))
_CE_PREFS = (
    ("e2", "g1", "f1"),
    ("f1", "e2", "g1"),
    ("f2", "f1", "e2"),
    ("e1", "f2", "f1"),
    ("f1", "e1", "f2"),
    ("e1", "f2", "e3", "g2"),
    ("f3", "e1", "e3", "g2"),
    ("e3", "g3", "f3"),
    ("f3", "e3", "g3"),
)


def builtin_counterexample() -> tuple[ArbInstance, tuple[Fraction, ...]]:
    """Interval instance on 9 vertices and a fractional extreme point of its Q(I).

    There are no singleton hyperedges. The point is 0 on ``e1, e2, e3`` and
    1/2 on the other six intervals.
    """
    ids = {name: k for k, name in enumerate(COUNTEREXAMPLE_NAMES, start=1)}
    prefs = [[ids[s] for s in p] for p in _CE_PREFS]
    inst = interval_instance(9, _CE_INTERVALS, prefs, add_singletons=False)
    half = Fraction(1, 2)
    x = tuple(Fraction(0) if name.startswith("e") else half for name in COUNTEREXAMPLE_NAMES)
    return inst, x
