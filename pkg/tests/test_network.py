import itertools
import random

import pytest

from arbscarf.blocks import build_block_system
from arbscarf.errors import InvariantViolation, NotABasis
from arbscarf.instance import Arborescence, build_arb_instance, random_instance
from arbscarf.network import (
    BasisTree,
    MarkedPath,
    basis_tree,
    classify_pivot,
    column_arcs,
    inverse_identity_check,
    is_augmenting,
    is_descending,
    representation_vector,
)
from arbscarf.scarf_core import cardinal_state, is_feasible_cardinal_basis, leaving_candidates
from arbscarf.ffl import run_ffl
from cases import exact_solve, nice15_basis


def test_singleton_basis_is_principal_tree(ex26):
    t = basis_tree(ex26, range(5))
    arcs = column_arcs(ex26)
    assert {arcs[k] for k in t.arcs} == set(ex26.tree.arcs)


def test_nice15_basis_tree(nice15):
    B, x, jt, col = nice15_basis(nice15)
    t = basis_tree(nice15, B)
    assert len(t.arcs) == 14


def test_cycle_reported():
    tree = Arborescence((1, 2, 3, 4), ((1, 2), (2, 3), (3, 4)), 1)
    inst = build_arb_instance(tree, [1, 2, 3], [(1, 2), (2, 3), (3, 4), (1, 3)],
                              [[4, 1], [4, 2], [3]])
    col = build_block_system(inst.system).layout.edge_col
    with pytest.raises(NotABasis) as err:
        basis_tree(inst, [0, 1, 2, col[4]])
    assert set(err.value.cycle) == {1, 2, col[4]}


def test_nice15_path_marks(nice15):
    B, x, jt, col = nice15_basis(nice15)
    arcs = column_arcs(nice15)
    p = basis_tree(nice15, B).path(13, 11)
    assert [arcs[c] for c in p.cols] == [(13, 12), (12, 10), (10, 8), (9, 8), (11, 9)]
    assert p.forward == (True, True, True, False, False)
    assert p.start == 13 and p.end == 11
    assert p.vertices == (13, 12, 10, 8, 9, 11)


def test_single_arc_path(nice15):
    t = basis_tree(nice15, range(15))
    p = t.path(15, 14)
    assert p.cols == (14,) and p.forward == (True,)
    q = t.path(14, 15)
    assert q.forward == (False,)


def test_reverse_path(nice15):
    B, _, _, _ = nice15_basis(nice15)
    t = basis_tree(nice15, B)
    for v, w in [(13, 11), (1, 4), (15, 3), (9, 12)]:
        assert t.path(w, v) == t.path(v, w).reversed()


def test_nice15_representation(nice15):
    B, x, jt, col = nice15_basis(nice15)
    y = representation_vector(nice15, B, jt)
    # f12, {10,11}, {8,9} forward; f8 and {9,10} backward
    assert y == {12: 1, col[15]: 1, col[16]: 1, 8: -1, col[17]: -1}


def test_arbitrary_keys():
    t = BasisTree.from_arcs((1, 2), {"a": (1, 2)}, 1)
    p = t.path(1, 2)
    assert p.cols == ("a",) and p.forward == (True,)


@pytest.mark.parametrize("seed", range(20))
def test_representation_matches_solve(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 8)
    inst = random_instance(seed, n, rng.randint(1, n * (n - 1) // 2))
    bs = build_block_system(inst.system)
    arcs = column_arcs(inst, bs.layout)
    # a random spanning basis: swap entering arcs into the tree a few times
    B = set(range(inst.n + 1))
    tree = basis_tree(inst, B, arcs=arcs)
    for _ in range(4):
        j = rng.choice([c for c in range(1, bs.cols) if c not in B])
        y = representation_vector(inst, B, j, tree=tree, arcs=arcs)
        order = sorted(B)
        want = exact_solve(bs.A, order, j)
        got = [y.get(c, 0) for c in order]
        assert got == want
        out = rng.choice(list(y))
        tree.exchange(out, j, arcs[j])
        B = (B - {out}) | {j}


def test_augmenting_and_descending():
    p = MarkedPath(("a", "b"), (True, True), (1, 2, 3))
    assert is_augmenting(p, {"a": 1, "b": 1})
    assert not is_descending(p, {"a": 1, "b": 1})
    q = MarkedPath(("a",), (False,), (2, 1))
    assert is_descending(q, {"a": 1})
    assert not is_augmenting(q, {"a": 1})


def test_nice15_pivot_nondegenerate(nice15):
    B, x, jt, col = nice15_basis(nice15)
    y = representation_vector(nice15, B, jt)
    B2 = (B - {12}) | {jt}
    x2 = dict(x)
    for c, s in y.items():
        x2[c] = 0 if s > 0 else 1
    x2[jt] = 1
    del x2[12]
    pc = classify_pivot(nice15, B, B2, x, x2, jt)
    assert not pc.degenerate
    assert pc.conditions == (True, True, True, True)


def test_degenerate_classification(nice15):
    B, x, jt, col = nice15_basis(nice15)
    x = dict(x)
    x[col[15]] = x[12] = 1
    x[col[16]] = 0  # a forward arc at 0 makes the pivot degenerate
    x[8] = 1
    B2 = (B - {col[16]}) | {jt}
    x2 = {c: v for c, v in x.items() if c != col[16]}
    x2[jt] = 0
    pc = classify_pivot(nice15, B, B2, x, x2, jt)
    assert pc.degenerate and pc.conditions == (False, False, False, False)


def test_inconsistent_classification_raises(nice15):
    B, x, jt, col = nice15_basis(nice15)
    x2 = dict(x)
    x2[jt] = 1  # claims the entering arc rose without anything else moving
    with pytest.raises(InvariantViolation):
        classify_pivot(nice15, B, (B - {12}) | {jt}, x, x2, jt)


def test_inverse_identity_same_tree(nice15):
    arcs = list(nice15.tree.arcs)
    assert inverse_identity_check(nice15.tree.vertices, arcs, arcs)


def test_inverse_identity_ffl_tree():
    inst = random_instance(5, 12, 20)
    res = run_ffl(inst)
    d = res.relabeled
    arcs = column_arcs(d)
    final = [arcs[j] for j in sorted(res.basis) if j]
    assert inverse_identity_check(d.tree.vertices, list(d.tree.arcs), final)


def _random_tree(rng, verts):
    order = list(verts)
    rng.shuffle(order)
    out = []
    for k in range(1, len(order)):
        a, b = order[k], order[rng.randrange(k)]
        out.append((a, b) if rng.random() < 0.5 else (b, a))
    return out


def test_inverse_identity_random_pairs():
    rng = random.Random(0)
    verts = list(range(1, 11))
    for _ in range(50):
        assert inverse_identity_check(verts, _random_tree(rng, verts), _random_tree(rng, verts))


@pytest.mark.parametrize("seed", range(4))
def test_tree_iff_basis(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    inst = random_instance(seed, n, min(4, n * (n - 1) // 2))
    bs = build_block_system(inst.system)
    arcs = column_arcs(inst, bs.layout)
    for rest in itertools.combinations(range(1, bs.cols), n):
        B = (0,) + rest
        try:
            basis_tree(inst, B, arcs=arcs)
            tree_ok = True
        except NotABasis:
            tree_ok = False
        try:
            cardinal_state(bs, B)
            lin_ok = True
        except ValueError as exc:
            lin_ok = "infeasible" in str(exc)
        assert tree_ok == lin_ok


@pytest.mark.parametrize("seed", range(10))
def test_leaving_candidates_are_forward(seed):
    rng = random.Random(seed)
    inst = random_instance(seed, 7, 8)
    bs = build_block_system(inst.system)
    arcs = column_arcs(inst, bs.layout)
    st = cardinal_state(bs, range(inst.n + 1))
    from arbscarf.scarf_core import cardinal_pivot
    for _ in range(6):
        j = rng.choice([c for c in range(1, bs.cols) if c not in st.B])
        y = representation_vector(inst, st.B, j, arcs=arcs)
        for c in leaving_candidates(st, bs, j):
            assert y[c] == 1
        st, _ = cardinal_pivot(st, bs, j)
