"""Generic Scarf engine on an augmented ``(A', b', C')`` triple.

Cardinal pivots use exact rationals and a lexicographic ratio test; ordinal
pivots follow the classical reference-row/reference-column procedure. The
engine works on any object exposing integer arrays ``A``, ``C`` and ``b``
with row 0 / column 0 being the controlling row / column, so it also runs on
hand-made 0/1 systems in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Protocol, Sequence

import numpy as np

from . import _exact
from .errors import InvariantViolation, IterationLimitExceeded, Unbounded


class ScarfSystem(Protocol):
    A: np.ndarray
    C: np.ndarray
    b: np.ndarray


@dataclass(frozen=True, eq=False)
class MatrixSystem:
    """Plain ``(A', b', C')`` triple, for systems that do not come from a hypergraph."""

    A: np.ndarray
    b: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", np.asarray(self.A, dtype=np.int64))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=np.int64))
        object.__setattr__(self, "C", np.asarray(self.C, dtype=np.int64))


def _shape(system: ScarfSystem) -> tuple[int, int]:
    rows, cols = system.A.shape
    return int(rows), int(cols)


# ---------------------------------------------------------------------------
# cardinal side

@dataclass(frozen=True, eq=False)
class CardinalState:
    """Feasible cardinal basis with its exact inverse.

    ``order[r]`` is the basis column sitting at row position ``r`` of the
    inverse; ``xb[r]`` is its value in the extreme point.
    """

    order: tuple[int, ...]
    binv: tuple[tuple[Fraction, ...], ...]
    xb: tuple[Fraction, ...]

    @property
    def B(self) -> frozenset[int]:
        return frozenset(self.order)

    def x(self, cols: int) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * cols
        for j, v in zip(self.order, self.xb):
            out[j] = v
        return tuple(out)

    def value(self, j: int) -> Fraction:
        try:
            return self.xb[self.order.index(j)]
        except ValueError:
            return Fraction(0)


def cardinal_state(system: ScarfSystem, B: Iterable[int]) -> CardinalState:
    """Factor ``A'_B``; raises :class:`ValueError` if singular or infeasible."""
    order = tuple(sorted(B))
    a = system.A
    sub = [[int(a[r, j]) for j in order] for r in range(a.shape[0])]
    inv = _exact.inverse(sub)
    if inv is None:
        raise ValueError(f"columns {list(order)} are linearly dependent")
    xb = _exact.matvec(inv, [int(v) for v in system.b])
    if any(v < 0 for v in xb):
        raise ValueError(f"columns {list(order)} give an infeasible point")
    return CardinalState(order, tuple(tuple(r) for r in inv), tuple(xb))


def initial_cardinal_state(system: ScarfSystem) -> CardinalState:
    rows, _ = _shape(system)
    one, zero = Fraction(1), Fraction(0)
    ident = tuple(tuple(one if r == k else zero for k in range(rows)) for r in range(rows))
    return CardinalState(tuple(range(rows)), ident, tuple(Fraction(int(v)) for v in system.b))


def representation(state: CardinalState, system: ScarfSystem, j: int) -> tuple[Fraction, ...]:
    """``y = A_B^{-1} A_j`` indexed by row position of the basis."""
    col = [int(v) for v in system.A[:, j]]
    return tuple(_exact.matvec(state.binv, col))


def leaving_candidates(state: CardinalState, system: ScarfSystem, j_t: int) -> list[int]:
    """Basis columns attaining the minimum ratio ``x_r / y_r`` over ``y_r > 0``."""
    y = representation(state, system, j_t)
    ratios = [(state.xb[r] / y[r], state.order[r]) for r in range(len(y)) if y[r] > 0]
    if not ratios:
        raise Unbounded(f"column {j_t} has no positive entry in the basis representation")
    best = min(q for q, _ in ratios)
    return sorted(j for q, j in ratios if q == best)


def cardinal_pivot(state: CardinalState, system: ScarfSystem, j_t: int,
                   rule: str = "lexicographic") -> tuple[CardinalState, int]:
    """Bring ``j_t`` into the basis; return the new state and the leaving column.

    ``rule="lexicographic"`` breaks ratio ties by comparing the rows of
    ``[x | A_B^{-1}] / y_r`` lexicographically, i.e. the right-hand side is
    perturbed to ``b + (ε, ε², ...)``. ``rule="lowest"`` takes the candidate
    with the smallest column index (no anti-cycling guarantee).
    """
    if j_t in state.order:
        raise ValueError(f"column {j_t} is already basic")
    y = representation(state, system, j_t)
    pos = [r for r in range(len(y)) if y[r] > 0]
    if not pos:
        raise Unbounded(f"column {j_t} has no positive entry in the basis representation")
    if rule == "lexicographic":
        def key(r):
            inv_y = 1 / y[r]
            return (state.xb[r] * inv_y,) + tuple(v * inv_y for v in state.binv[r])
        r = min(pos, key=key)
    elif rule == "lowest":
        best = min(state.xb[r] / y[r] for r in pos)
        r = min((r for r in pos if state.xb[r] / y[r] == best), key=lambda r: state.order[r])
    else:
        raise ValueError(f"unknown pivot rule {rule!r}")
    leaving = state.order[r]

    # eliminate column j_t with pivot row r
    pr = state.binv[r]
    yr = y[r]
    new_pr = tuple(v / yr for v in pr)
    theta = state.xb[r] / yr
    binv, xb = [], []
    for k, row in enumerate(state.binv):
        if k == r:
            binv.append(new_pr)
            xb.append(theta)
        elif y[k]:
            f = y[k]
            binv.append(tuple(v - f * w for v, w in zip(row, new_pr)))
            xb.append(state.xb[k] - f * theta)
        else:
            binv.append(row)
            xb.append(state.xb[k])
    order = list(state.order)
    order[r] = j_t
    return CardinalState(tuple(order), tuple(binv), tuple(xb)), leaving


def is_feasible_cardinal_basis(system: ScarfSystem, B: Iterable[int]) -> bool:
    B = list(B)
    rows, _ = _shape(system)
    if len(B) != rows or len(set(B)) != rows:
        return False
    try:
        cardinal_state(system, B)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------------------
# ordinal side

@dataclass(frozen=True)
class OrdinalState:
    """Ordinal basis ``O`` with utilities and the row -> disliked column map."""

    O: frozenset[int]
    u: tuple[int, ...]
    dislike: tuple[int, ...]

    def disliker(self, j: int) -> int:
        return self.dislike.index(j)


def utilities(C: np.ndarray, O: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Row minima of ``C`` over ``O`` and the columns attaining them."""
    cols = np.array(sorted(O), dtype=np.int64)
    sub = C[:, cols]
    arg = sub.argmin(axis=1)
    return tuple(int(v) for v in sub.min(axis=1)), tuple(int(cols[a]) for a in arg)


def ordinal_state(system: ScarfSystem, O: Iterable[int]) -> OrdinalState:
    O = frozenset(O)
    u, dislike = utilities(system.C, O)
    return OrdinalState(O, u, dislike)


def initial_ordinal_state(system: ScarfSystem) -> OrdinalState:
    rows, _ = _shape(system)
    return ordinal_state(system, range(1, rows + 1))


def is_ordinal_basis(system: ScarfSystem, O: Iterable[int]) -> bool:
    """Every column (inside ``O`` too) has a row whose entry is at most that row's utility."""
    O = list(O)
    rows, cols = _shape(system)
    if len(O) != rows or len(set(O)) != rows or not all(0 <= j < cols for j in O):
        return False
    C = system.C
    u = C[:, sorted(O)].min(axis=1)
    return bool((C <= u[:, None]).any(axis=0).all())


def ordinal_pivot(state: OrdinalState, system: ScarfSystem, j_l: int,
                  check: bool = True) -> tuple[OrdinalState, int, int, int]:
    """Replace ``j_l`` in ``O``; return ``(new_state, j_star, j_r, i_r)``.

    ``O - j_l`` must contain a non-identity column (always true inside a run).

    ``i_l`` dislikes ``j_l``; ``j_r`` minimizes row ``i_l`` over ``O - j_l``
    and is disliked by ``i_r``. The entering column maximizes row ``i_r``
    among columns outside ``O`` that beat the reduced utilities in every
    other row. With ``check`` the new utilities are recomputed from scratch
    and must differ from the old ones exactly at ``i_l`` (up) and ``i_r``
    (down).
    """
    if j_l not in state.O:
        raise ValueError(f"column {j_l} is not in the ordinal basis")
    C = system.C
    rows, cols = C.shape
    if all(j < rows for j in state.O - {j_l}):
        # the exceptional case: only identity columns remain and K may be empty
        raise ValueError("the remaining columns are all identity columns")
    i_l = state.disliker(j_l)
    rest = sorted(state.O - {j_l})
    row_l = C[i_l, rest]
    j_r = int(rest[int(row_l.argmin())])
    i_r = state.disliker(j_r)
    u_minus = np.array(state.u, dtype=np.int64)
    u_minus[i_l] = C[i_l, j_r]
    others = np.ones(rows, dtype=bool)
    others[i_r] = False
    mask = (C[others] > u_minus[others][:, None]).all(axis=0)
    mask[list(state.O)] = False
    K = np.flatnonzero(mask)
    if K.size == 0:
        raise InvariantViolation(f"no entering column when {j_l} leaves")
    j_star = int(K[int(C[i_r, K].argmax())])
    O2 = (state.O - {j_l}) | {j_star}
    u2, d2 = utilities(C, O2)
    new = OrdinalState(O2, u2, d2)
    if check:
        check_utility_dynamics(state, new, C, i_l, i_r, j_r, j_star)
    return new, j_star, j_r, i_r


def check_utility_dynamics(old: OrdinalState, new: OrdinalState, C: np.ndarray,
                           i_l: int, i_r: int, j_r: int, j_star: int) -> None:
    u, v = old.u, new.u
    if not (v[i_l] == C[i_l, j_r] and v[i_l] > u[i_l]):
        raise InvariantViolation(f"utility of row {i_l} went {u[i_l]} -> {v[i_l]}, expected increase to {C[i_l, j_r]}")
    if not (v[i_r] == C[i_r, j_star] and v[i_r] < u[i_r]):
        raise InvariantViolation(f"utility of row {i_r} went {u[i_r]} -> {v[i_r]}, expected decrease to {C[i_r, j_star]}")
    changed = [i for i in range(len(u)) if i not in (i_l, i_r) and u[i] != v[i]]
    if changed:
        raise InvariantViolation(f"utilities of rows {changed} changed during an ordinal pivot")
    if sorted(new.dislike) != sorted(new.O):
        raise InvariantViolation("disliked columns are not a bijection onto the ordinal basis")


# ---------------------------------------------------------------------------
# the alternating run

@dataclass(frozen=True)
class ScarfIteration:
    """One cardinal pivot followed by one ordinal pivot."""

    entering: int
    leaving: int
    ref_col: int
    ref_row: int
    entering_ordinal: int
    separator: Optional[int] = None
    utilities: Optional[tuple[int, ...]] = None


@dataclass
class ScarfTrace:
    iterations: list[ScarfIteration] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.iterations)

    def lines(self) -> list[str]:
        out = []
        for it in self.iterations:
            out.append(f"C {it.entering} -> {it.leaving}")
            out.append(f"O {it.leaving} -> {it.entering_ordinal} (ref {it.ref_col}, row {it.ref_row})")
        return out


@dataclass(frozen=True)
class ScarfResult:
    basis: frozenset[int]
    x: tuple[Fraction, ...]
    trace: ScarfTrace

    @property
    def iterations(self) -> int:
        return len(self.trace)


def default_iteration_cap(system: ScarfSystem) -> int:
    _, cols = _shape(system)
    return 2 ** min(cols - 1, 24)


def run_scarf(system: ScarfSystem, rule: str = "lexicographic", *,
              max_iterations: Optional[int] = None, record_utilities: bool = False,
              check: bool = True) -> ScarfResult:
    """Alternate cardinal and ordinal pivots from ``({0..n}, {1..n+1})`` until ``B = O``."""
    rows, cols = _shape(system)
    cap = default_iteration_cap(system) if max_iterations is None else max_iterations
    card = initial_cardinal_state(system)
    trace = ScarfTrace()
    if cols <= rows:
        # only the identity columns exist; the starting basis is dominating
        return ScarfResult(card.B, card.x(cols), trace)
    ordn = initial_ordinal_state(system)
    while True:
        B, O = card.B, ordn.O
        if B == O:
            break
        if len(trace) >= cap:
            raise IterationLimitExceeded(f"no dominating basis after {cap} iterations")
        if check and (len(B & O) < rows - 1 or B - O != {0}):
            raise InvariantViolation(f"not a Scarf pair: B-O={sorted(B - O)}, O-B={sorted(O - B)}")
        (j_t,) = O - B
        card, j_l = cardinal_pivot(card, system, j_t, rule)
        if j_l == 0:
            raise InvariantViolation("the controlling column left the cardinal basis")
        if card.B == O:
            raise InvariantViolation("run ended on a cardinal pivot")
        ordn, j_star, j_r, i_r = ordinal_pivot(ordn, system, j_l, check=check)
        trace.iterations.append(ScarfIteration(j_t, j_l, j_r, i_r, j_star,
                                               utilities=ordn.u if record_utilities else None))
    return ScarfResult(card.B, card.x(cols), trace)
