import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from treeenergy import kernels
from treeenergy.trees import (
    CycleError,
    DisconnectedError,
    DuplicateEdgeError,
    FamilyParams,
    MalformedLineError,
    Tree,
    TreeError,
    _codes_of_order,
    all_trees,
    build_path,
    build_star,
    build_Ta,
    build_Tb,
    build_Tc,
    canonical_form,
    enumerate_constrained_trees,
    read_edgelist,
    tc_order_range,
    write_edgelist,
)

from conftest import random_tree

# unlabelled trees on n vertices (OEIS A000055)
FREE_TREE_COUNTS = [1, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320]


def test_tree_validation():
    with pytest.raises(TreeError):
        Tree(0)
    with pytest.raises(TreeError):
        Tree(3, ((0, 1),))
    with pytest.raises(TreeError):
        Tree(3, ((0, 1), (0, 1)))
    with pytest.raises(TreeError):
        Tree(4, ((0, 1), (1, 2), (2, 0)))
    with pytest.raises(TreeError):
        Tree(2, ((0, 5),))
    assert Tree(3, ((2, 1), (1, 0))).edges == ((0, 1), (1, 2))


def test_family_orders_and_degrees():
    for d in range(3, 8):
        for t in range(3, 12):
            a, b = build_Ta(d, t), build_Tb(d, t)
            assert a.n == b.n == 4 * d - 4 + t == FamilyParams(d, t).order
            for tr in (a, b):
                degs = sorted(tr.degrees, reverse=True)
                assert degs[0] == degs[1] == d and degs[2] < d
            # Ta: branching vertices far apart; Tb: adjacent
            hubs_b = [v for v, k in enumerate(b.degrees) if k == d]
            assert hubs_b[1] in b.adjacency[hubs_b[0]]
            hubs_a = [v for v, k in enumerate(a.degrees) if k == d]
            assert hubs_a[1] not in a.adjacency[hubs_a[0]]


def test_family_params_guard():
    with pytest.raises(TreeError):
        FamilyParams(2, 5)
    with pytest.raises(TreeError):
        build_Ta(3, 2)
    assert FamilyParams.from_order(3, 11) == FamilyParams(3, 3)


def test_tc_shapes():
    for d in range(3, 8):
        lo, hi = tc_order_range(d)
        assert (lo, hi) == (2 * d, 4 * d - 2)
        for n in range(lo, hi + 1):
            tc = build_Tc(d, n)
            assert tc.n == n
            degs = tc.degrees
            assert degs[0] == degs[1] == d and degs.count(d) == 2
        with pytest.raises(TreeError):
            build_Tc(d, hi + 1)
    # top of the range: only 2-branches; bottom: only pendants (a double star)
    assert build_Tc(3, 10).is_isomorphic(Tree(10, (
        (0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (1, 6), (6, 7), (1, 8), (8, 9))))
    assert build_Tc(4, 8).is_isomorphic(Tree(8, (
        (0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (1, 6), (1, 7))))


def test_canonical_form_invariant_under_relabelling(rng):
    for _ in range(50):
        n = int(rng.integers(2, 15))
        tr = random_tree(rng, n)
        perm = rng.permutation(n)
        other = Tree(n, tuple((int(perm[u]), int(perm[v])) for u, v in tr.edges))
        assert canonical_form(tr) == canonical_form(other)
        assert tr.is_isomorphic(other)


def test_canonical_form_separates():
    assert not build_path(5).is_isomorphic(build_star(5))
    assert not build_Ta(3, 5).is_isomorphic(build_Tb(3, 5))


@pytest.mark.parametrize("n", range(1, 15))
def test_free_tree_counts(n):
    assert sum(1 for _ in all_trees(n)) == FREE_TREE_COUNTS[n]


@pytest.mark.slow
def test_free_tree_counts_16():
    assert len(_codes_of_order(16)) == FREE_TREE_COUNTS[16]


def test_all_trees_pairwise_distinct():
    trees = list(all_trees(9))
    assert len({t.canonical for t in trees}) == len(trees)


@pytest.mark.parametrize("n", range(6, 9))
def test_prufer_matches_augmentation(n):
    for d in range(3, n // 2 + 1):
        a = sorted(t.canonical for t in enumerate_constrained_trees(n, d))
        b = sorted(t.canonical for t in enumerate_constrained_trees(n, d, method="prufer"))
        assert a == b


def test_prufer_class_counts_both_backends():
    for name in ("numba", "numpy"):
        fn = kernels.KERNELS[name]["prufer_classes"]
        assert [len(fn(n, 0)) for n in range(2, 8)] == FREE_TREE_COUNTS[2:8]


def test_enumeration_guards():
    with pytest.raises(TreeError):
        list(enumerate_constrained_trees(12, 3, method="prufer"))
    with pytest.raises(TreeError):
        list(all_trees(17))
    with pytest.raises(TreeError):
        list(enumerate_constrained_trees(8, 2))


def test_remove_vertices():
    comps = build_Ta(3, 3).remove_vertices([0])
    assert sorted(c.n for c in comps) == [2, 2, 6]


# ---------------------------------------------------------------------------
# edge lists
# ---------------------------------------------------------------------------

def test_edgelist_roundtrip_and_comments():
    tr = build_Tb(4, 5)
    assert read_edgelist(write_edgelist(tr)) == tr
    assert read_edgelist("# star\n0 1\n\n0 2\n") == build_star(3)
    assert read_edgelist(io.StringIO("")) == Tree(1)


@pytest.mark.parametrize("text,exc,line", [
    ("0 1\n1\n", MalformedLineError, 2),
    ("0 1\n1 a\n", MalformedLineError, 2),
    ("0 1\n-1 2\n", MalformedLineError, 2),
    ("0 1\n1 0\n", DuplicateEdgeError, 2),
    ("0 1\n1 2\n2 0\n", CycleError, 3),
    ("3 3\n", CycleError, 1),
    ("0 1\n2 3\n", DisconnectedError, None),
    ("0 1\n0 3\n", DisconnectedError, None),
])
def test_edgelist_errors(text, exc, line):
    with pytest.raises(exc) as info:
        read_edgelist(text)
    assert info.value.line == line
    if line is not None:
        assert f"line {line}" in str(info.value)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_edgelist_roundtrip_random(n, seed):
    tr = random_tree(np.random.default_rng(seed), n)
    assert read_edgelist(write_edgelist(tr)) == tr
