import random

import pytest

from arbscarf.blocks import build_block_system
from arbscarf.errors import InvariantViolation, IterationLimitExceeded, NoForwardArc, RightmostIsSingleton
from arbscarf.ffl import FflRun, check_nice_basis, run_ffl, separator_of
from arbscarf.instance import PreferenceSystem, depth_first_relabel, interval_instance, random_instance
from arbscarf.network import MarkedPath, basis_tree, column_arcs
from arbscarf.scarf_core import cardinal_state, leaving_candidates
from arbscarf.verify import Matching, brute_force_stable_matchings, is_stable_matching
from cases import euler_cut_condition, nice15_basis


def _run_for(inst):
    d, _ = depth_first_relabel(inst)
    return FflRun(d, verify=False)


def test_nice15_leaving_arc(nice15):
    B, x, jt, col = nice15_basis(nice15)
    run = _run_for(nice15)
    st = run.state
    st.B = set(B)
    st.tree = basis_tree(nice15, B, arcs=run.arcs)
    for c in range(len(st.x)):
        st.x[c] = x.get(c, 0)
    path = st.tree.path(*run.arcs[jt])
    assert run.leaving(path) == 12


def test_first_forward_zero_leaves():
    inst = random_instance(1, 4, 2)
    run = _run_for(inst)
    run.state.x[2] = 0
    p = MarkedPath((1, 2, 3), (True, True, False), (0, 1, 2, 3))
    assert run.leaving(p) == 2
    run.state.x[2] = 1
    assert run.leaving(p) == 1
    with pytest.raises(NoForwardArc):
        run.leaving(MarkedPath((1,), (False,), (0, 1)))


def test_initial_separator(ex26):
    bs = build_block_system(ex26.system)
    assert separator_of(range(1, 6), bs) == 3
    with pytest.raises(RightmostIsSingleton):
        separator_of(range(0, 5), bs)


def test_all_singletons():
    s_inst = interval_instance(3, [], [[], [], []])
    res = run_ffl(s_inst)
    assert res.iterations == 0
    assert res.matching.x == (1, 1, 1)


def test_example_in_oracle(ex26):
    res = run_ffl(ex26)
    assert res.matching in brute_force_stable_matchings(ex26.system)
    assert res.verified


@pytest.mark.parametrize("n", [10, 100, 1000])
def test_iteration_bound(n):
    res = run_ffl(random_instance(n, n, 3 * n))
    assert res.iterations <= n
    assert all(a < b for a, b in zip(res.separators, res.separators[1:]))
    assert is_stable_matching(random_instance(n, n, 3 * n).system, res.matching).stable


def test_initial_basis_nice_everywhere(nice15):
    B = set(range(nice15.n + 1))
    x = {c: 1 for c in B}
    for i in range(1, nice15.n + 1):
        assert check_nice_basis(nice15, B, x, i).ok


def test_nice15_basis_is_12_nice(nice15):
    B, x, jt, col = nice15_basis(nice15)
    assert check_nice_basis(nice15, B, x, 12).ok
    rep = check_nice_basis(nice15, B, x, 11)
    assert rep.condition == "tree-arcs"


def test_dropping_last_tree_arc(ex26):
    d, _ = depth_first_relabel(ex26)
    bs = build_block_system(d.system)
    B = {0, 1, 2, 3, 8}  # column 8 is {3,4}, which replaces f_4
    x = {0: 1, 1: 1, 2: 1, 3: 0, 8: 1}
    rep = check_nice_basis(d, B, x, 4)
    assert not rep.ok and rep.condition == "tree-arcs"


def test_root_path_condition(nice15):
    B, x, jt, col = nice15_basis(nice15)
    x = dict(x)
    x[8] = 1
    x[col[16]] = 0
    assert check_nice_basis(nice15, B, x, 12).condition == "root-paths"


@pytest.mark.parametrize("seed", range(10))
def test_cuts_match_literal_check(seed):
    rng = random.Random(seed)
    inst, _ = depth_first_relabel(random_instance(seed, 8, 10))
    bs = build_block_system(inst.system)
    arcs = column_arcs(inst, bs.layout)
    B = set(range(inst.n + 1))
    tree = basis_tree(inst, B, arcs=arcs)
    for _ in range(5):
        j = rng.choice([c for c in range(inst.n + 1, bs.cols) if c not in B])
        p = tree.path(*arcs[j])
        out = rng.choice(list(p.cols))
        tree.exchange(out, j, arcs[j], p)
        B = (B - {out}) | {j}
        # orient x along root paths so only the tree-arcs and cuts conditions decide
        x = {0: 1}
        for v, (p, key) in tree.parent.items():
            if key is not None and v != tree.root:
                x[key] = 1 if tree.arcs[key][0] == p else 0
        for i in range(1, inst.n + 1):
            rep = check_nice_basis(inst, B, x, i, bs=bs, tree=tree, arcs=arcs)
            assert rep.condition != "root-paths"
            assert rep.ok == euler_cut_condition(inst, B, arcs, i)


def test_trace_format(ex26):
    res = run_ffl(ex26)
    assert res.trace_lines
    for k, line in enumerate(res.trace_lines, start=1):
        parts = line.split()
        assert parts[0] == f"it={k}"
        assert [p.split("=")[0] for p in parts] == ["it", "sep", "jt", "jl", "j*", "nice"]
        assert parts[-1] == "nice=ok"
    fast = run_ffl(ex26, verify=False)
    assert fast.trace_lines[0].endswith("nice=unchecked")


@pytest.mark.parametrize("seed", range(30))
def test_leaving_is_a_ratio_candidate(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    inst = random_instance(seed, n, rng.randint(1, min(10, n * (n - 1) // 2)))
    d, _ = depth_first_relabel(inst)
    run = FflRun(d, verify=True)
    while not run.done:
        st = run.state
        B_before = set(st.B)
        exact = cardinal_state(run.bs, B_before)
        cands = leaving_candidates(exact, run.bs, st.pending)
        rec = run.step()
        assert rec.leaving in cands
        assert rec.ref_row == 0


@pytest.mark.parametrize("seed", range(30))
def test_separator_pivot_moves_right(seed):
    inst = random_instance(seed, 9, 12)
    res = run_ffl(inst)
    d = res.relabeled
    layout = build_block_system(d.system).layout
    for it in res.trace.iterations:
        if it.entering_ordinal:
            assert it.entering_ordinal > it.ref_col
            assert layout.block_of_col[it.entering_ordinal] > it.separator


@pytest.mark.parametrize("seed", range(10))
def test_relabel_does_not_change_output(seed):
    inst = random_instance(seed, 10, 15)
    d, _ = depth_first_relabel(inst)
    assert run_ffl(inst).matching == run_ffl(d).matching


def test_iteration_cap(ex26):
    with pytest.raises(IterationLimitExceeded):
        run_ffl(ex26, max_iterations=0)
