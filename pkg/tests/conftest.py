import itertools

import numpy as np
import pytest

from treeenergy.trees import Tree

# filled by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def brute_matchings(tree: Tree) -> list[int]:
    """m(T, k) by trying every edge subset; fine up to ~16 edges."""
    edges = tree.edges
    counts = [0] * (tree.n // 2 + 1)
    for k in range(len(counts)):
        for sub in itertools.combinations(edges, k):
            used = [v for e in sub for v in e]
            if len(set(used)) == len(used):
                counts[k] += 1
    return counts


def random_tree(rng: np.random.Generator, n: int) -> Tree:
    """Uniform labelled tree via a random Pruefer sequence."""
    if n == 1:
        return Tree(1)
    if n == 2:
        return Tree(2, ((0, 1),))
    seq = list(rng.integers(0, n, n - 2))
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(u for u in range(n) if degree[u] == 1)
        edges.append((leaf, int(v)))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = [x for x in range(n) if degree[x] == 1]
    edges.append((u, w))
    return Tree(n, tuple(edges))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
