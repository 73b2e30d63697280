"""Labelled trees, the two-branching-vertex families and exhaustive enumeration."""

from __future__ import annotations

import io
import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from . import kernels

__all__ = [
    "Tree",
    "FamilyParams",
    "TreeError",
    "EdgeListError",
    "MalformedLineError",
    "DuplicateEdgeError",
    "CycleError",
    "DisconnectedError",
    "build_path",
    "build_star",
    "build_Ta",
    "build_Tb",
    "build_Tc",
    "tc_order_range",
    "canonical_form",
    "rooted_code",
    "all_trees",
    "enumerate_constrained_trees",
    "read_edgelist",
    "write_edgelist",
    "ENUMERATION_CAP",
    "PRUFER_CAP",
]

# All unlabelled trees up to this order are generated by leaf augmentation;
# n = 16 takes a few seconds, each further order roughly triples the cost.
ENUMERATION_CAP = 16
# n**(n-2) labelled trees: 10**8 at n = 10 is the practical ceiling.
PRUFER_CAP = 10


class TreeError(ValueError):
    """Raised for structurally invalid trees or bad builder parameters."""


class EdgeListError(TreeError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class MalformedLineError(EdgeListError):
    pass


class DuplicateEdgeError(EdgeListError):
    pass


class CycleError(EdgeListError):
    pass


class DisconnectedError(EdgeListError):
    pass


@dataclass(frozen=True)
class Tree:
    """A labelled tree on vertices ``0..vertex_count-1``.

    Edges are stored normalised (``u < v``) and sorted, so two trees compare
    equal exactly when they have the same labelled edge set.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        n = self.vertex_count
        if n < 1:
            raise TreeError("a tree needs at least one vertex")
        norm = tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges))
        object.__setattr__(self, "edges", norm)
        if len(norm) != n - 1:
            raise TreeError(f"{n} vertices need {n - 1} edges, got {len(norm)}")
        if len(set(norm)) != len(norm):
            raise TreeError("parallel edges")
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v in norm:
            if u == v:
                raise TreeError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise TreeError(f"edge ({u}, {v}) out of range for {n} vertices")
            ru, rv = find(u), find(v)
            if ru == rv:
                raise TreeError(f"edge ({u}, {v}) closes a cycle")
            parent[ru] = rv

    @property
    def n(self) -> int:
        return self.vertex_count

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1.0
        return a

    @cached_property
    def canonical(self) -> str:
        return canonical_form(self)

    def is_isomorphic(self, other: "Tree") -> bool:
        return self.n == other.n and self.canonical == other.canonical

    def remove_vertices(self, drop: Iterable[int]) -> list["Tree"]:
        """Components left after deleting ``drop``, each relabelled from 0."""
        gone = set(drop)
        seen = set(gone)
        comps = []
        for s in range(self.n):
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            for v in comp:
                for w in self.adjacency[v]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
            comp.sort()
            relabel = {v: i for i, v in enumerate(comp)}
            edges = [(relabel[u], relabel[v]) for u, v in self.edges
                     if u in relabel and v in relabel]
            comps.append(Tree(len(comp), tuple(edges)))
        return comps


@dataclass(frozen=True)
class FamilyParams:
    """``(max_degree, path_param)``; the order is ``4*max_degree - 4 + path_param``."""

    max_degree: int
    path_param: int

    def __post_init__(self):
        if self.max_degree < 3 or self.path_param < 3:
            raise TreeError(
                f"family needs max_degree >= 3 and t >= 3, got ({self.max_degree}, {self.path_param})")

    @property
    def order(self) -> int:
        return 4 * self.max_degree - 4 + self.path_param

    @classmethod
    def from_order(cls, max_degree: int, n: int) -> "FamilyParams":
        return cls(max_degree, n + 4 - 4 * max_degree)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build_path(t: int) -> Tree:
    if t < 1:
        raise TreeError("path needs t >= 1")
    return Tree(t, tuple((i, i + 1) for i in range(t - 1)))


def build_star(n: int) -> Tree:
    if n < 1:
        raise TreeError("star needs n >= 1")
    return Tree(n, tuple((0, i) for i in range(1, n)))


def _hang_p2s(edges: list, anchor: int, count: int, next_id: int) -> int:
    for _ in range(count):
        edges.append((anchor, next_id))
        edges.append((next_id, next_id + 1))
        next_id += 2
    return next_id


def _as_params(p, t=None) -> FamilyParams:
    if isinstance(p, FamilyParams):
        return p
    return FamilyParams(int(p), int(t))


def build_Ta(p: FamilyParams | int, t: int | None = None) -> Tree:
    """P_t with Δ-1 pendant P_2's hung on each end.

    Numbering: spine 0..t-1, then the P_2's of vertex 0, then those of t-1;
    each P_2 is (attached vertex, leaf).
    """
    p = _as_params(p, t)
    return _family("a", p.max_degree, p.path_param)


def build_Tb(p: FamilyParams | int, t: int | None = None) -> Tree:
    """P_{t+2} with Δ-1 P_2's on vertex 0 and Δ-2 P_2's on vertex 1.

    Numbering: spine 0..t+1, then the P_2's of vertex 0, then those of vertex 1.
    """
    p = _as_params(p, t)
    return _family("b", p.max_degree, p.path_param)


def _family(kind: str, d: int, t: int) -> Tree:
    # unchecked: also used for the degenerate Δ = 2 members
    if kind == "a":
        edges = [(i, i + 1) for i in range(t - 1)]
        nxt = _hang_p2s(edges, 0, d - 1, t)
        _hang_p2s(edges, t - 1, d - 1, nxt)
    else:
        edges = [(i, i + 1) for i in range(t + 1)]
        nxt = _hang_p2s(edges, 0, d - 1, t + 2)
        _hang_p2s(edges, 1, d - 2, nxt)
    return Tree(4 * d - 4 + t, tuple(edges))


def tc_order_range(delta: int) -> tuple[int, int]:
    """Orders admitted by :func:`build_Tc`: ``2Δ`` (all pendants) to ``4Δ-2`` (all 2-branches)."""
    return 2 * delta, 4 * delta - 2


def build_Tc(delta: int, n: int) -> Tree:
    """Adjacent branching vertices u=0, v=1, each of degree Δ.

    Every other neighbour of u and v roots either a 2-branch or a single
    pendant vertex. 2-branches are used as far as the budget allows and
    the pendants are split between u and v with u taking the extra one.
    Numbering: u, v, then u's attachments (2-branches first), then v's.
    """
    lo, hi = tc_order_range(delta) if delta >= 3 else (0, -1)
    if delta < 3 or not lo <= n <= hi:
        raise TreeError(f"no T_c for delta={delta}, n={n}; need delta >= 3 and {lo} <= n <= {hi}")
    pendants = 2 * (delta - 1) - (n - 2 * delta)
    pend_u = (pendants + 1) // 2
    pend_v = pendants // 2
    edges = [(0, 1)]
    nxt = 2
    for anchor, pend in ((0, pend_u), (1, pend_v)):
        nxt = _hang_p2s(edges, anchor, delta - 1 - pend, nxt)
        for _ in range(pend):
            edges.append((anchor, nxt))
            nxt += 1
    return Tree(n, tuple(edges))


# ---------------------------------------------------------------------------
# canonical forms
# ---------------------------------------------------------------------------

def _centers(adj) -> list[int]:
    n = len(adj)
    if n <= 2:
        return list(range(n))
    rem = [len(a) for a in adj]
    layer = [v for v in range(n) if rem[v] == 1]
    alive = n
    while alive > 2:
        alive -= len(layer)
        nxt = []
        for v in layer:
            rem[v] = 0
            for w in adj[v]:
                if rem[w] > 0:
                    rem[w] -= 1
                    if rem[w] == 1:
                        nxt.append(w)
        layer = nxt
    return sorted(layer)


def rooted_code(adj, root: int, codes: dict | None = None) -> str:
    """AHU parenthesis code of the tree rooted at ``root``.

    If ``codes`` is given it is filled with the code of every rooted subtree.
    """
    parent = {root: -1}
    order = [root]
    for v in order:
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    out = {} if codes is None else codes
    for v in reversed(order):
        out[v] = "(" + "".join(sorted(out[w] for w in adj[v] if parent.get(w) == v)) + ")"
    return out[root]


def canonical_form(tree: Tree) -> str:
    """Centre-rooted AHU code; equal strings iff the trees are isomorphic."""
    adj = tree.adjacency
    return min(rooted_code(adj, c) for c in _centers(adj))


def _tree_from_code(code: str) -> Tree:
    edges = []
    stack = []
    nxt = 0
    for ch in code:
        if ch == "(":
            if stack:
                edges.append((stack[-1], nxt))
            stack.append(nxt)
            nxt += 1
        else:
            stack.pop()
    return Tree(nxt, tuple(edges))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

_levels: dict[int, tuple[str, ...]] = {1: ("()",)}
_levels_lock = threading.Lock()


def _codes_of_order(n: int) -> tuple[str, ...]:
    with _levels_lock:
        top = max(_levels)
        while top < n:
            found = set()
            for code in _levels[top]:
                base = _tree_from_code(code)
                for v in range(base.n):
                    grown = Tree(base.n + 1, base.edges + ((v, base.n),))
                    found.add(grown.canonical)
            top += 1
            _levels[top] = tuple(sorted(found))
        return _levels[n]


def all_trees(n: int) -> Iterator[Tree]:
    """One tree per isomorphism class on n vertices, in canonical-code order.

    Every tree on n vertices arises from one on n-1 vertices by hanging a
    leaf, so the classes are grown level by level and deduplicated by
    canonical code.
    """
    if not 1 <= n <= ENUMERATION_CAP:
        raise TreeError(f"enumeration supports 1 <= n <= {ENUMERATION_CAP}, got {n}")
    for code in _codes_of_order(n):
        yield _tree_from_code(code)


def _two_max(tree: Tree, delta: int) -> bool:
    degs = tree.degrees
    return max(degs) == delta and degs.count(delta) == 2


def _tree_from_prufer(n: int, seq) -> Tree:
    return Tree(n, tuple(kernels._prufer_decode_py(n, list(seq))))


def enumerate_constrained_trees(n: int, delta: int, method: str = "augment") -> Iterator[Tree]:
    """Trees on n vertices whose maximum degree is ``delta``, attained by exactly two vertices.

    ``method="augment"`` filters the leaf-augmentation classes;
    ``method="prufer"`` sweeps all Pruefer sequences and deduplicates by
    canonical code, which is only feasible for ``n <= PRUFER_CAP``.
    """
    if delta < 3:
        raise TreeError("delta must be >= 3")
    if n < 3:
        raise TreeError("n must be >= 3")
    if method == "augment":
        for tree in all_trees(n):
            if _two_max(tree, delta):
                yield tree
    elif method == "prufer":
        if n > PRUFER_CAP:
            raise TreeError(f"Pruefer sweep supports n <= {PRUFER_CAP}, got {n}")
        reps = [_tree_from_prufer(n, s) for s in kernels.prufer_classes(n, delta)]
        yield from sorted(reps, key=lambda t: t.canonical)
    else:
        raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# edge-list IO
# ---------------------------------------------------------------------------

def read_edgelist(text: str | io.TextIOBase) -> Tree:
    """Parse ``u v`` lines (0-based ids, ``#`` comments). No edges means a single vertex."""
    if not isinstance(text, str):
        text = text.read()
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    parent: dict[int, int] = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLineError(f"expected 'u v', got {raw!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLineError(f"non-integer vertex id in {raw!r}", lineno) from None
        if u < 0 or v < 0:
            raise MalformedLineError(f"negative vertex id in {raw!r}", lineno)
        if u == v:
            raise CycleError(f"self-loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge {key[0]} {key[1]}", lineno)
        ru, rv = find(u), find(v)
        if ru == rv:
            raise CycleError(f"edge {u} {v} closes a cycle", lineno)
        parent[ru] = rv
        seen.add(key)
        edges.append(key)
    if not edges:
        return Tree(1)
    n = max(max(e) for e in edges) + 1
    if len(edges) != n - 1:
        missing = sorted(set(range(n)) - set(parent))
        detail = f"; ids never used: {missing}" if missing else ""
        raise DisconnectedError(
            f"{len(edges)} edges over ids 0..{n - 1} do not form a connected tree{detail}")
    return Tree(n, tuple(edges))


def write_edgelist(tree: Tree) -> str:
    return "".join(f"{u} {v}\n" for u, v in tree.edges)
