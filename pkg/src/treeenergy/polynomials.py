"""Exact matching polynomials of trees and forests.

A :class:`MatchingPolynomial` stores the k-matching counts ``m(G, k)``; read
as a polynomial in ``y = x**2`` it is the signless ``m+(G, x)``.  All
arithmetic is on Python integers.  Signed intermediate results (differences
of family polynomials) use the plain tuple helpers :func:`padd`,
:func:`psub`, :func:`pmul`, :func:`pshift`.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .trees import Tree, _centers, canonical_form, rooted_code

__all__ = [
    "MatchingPolynomial",
    "PathRatio",
    "padd",
    "psub",
    "pmul",
    "pscale",
    "pshift",
    "ppow",
    "matching_polynomial",
    "matching_polynomial_edge_recursion",
    "matching_polynomial_vertex_recursion",
    "path_mplus",
    "eval_mplus",
    "closed_form_path",
    "log_closed_form_path",
    "path_lambdas",
    "path_ratio",
    "path_ratio_bounds_exact",
    "path_ratio_bounds_sweep",
]


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient k multiplies y**k)
# ---------------------------------------------------------------------------

def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def padd(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] += v
    return _trim(out)


def psub(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return padd(a, [-v for v in b])


def pmul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return _trim(out)


def pscale(a: Sequence[int], k: int) -> tuple[int, ...]:
    return _trim([k * v for v in a])


def pshift(a: Sequence[int], k: int = 1) -> tuple[int, ...]:
    """Multiply by ``y**k``."""
    return _trim([0] * k + list(a)) if any(a) else ()


def ppow(a: Sequence[int], e: int) -> tuple[int, ...]:
    out: tuple[int, ...] = (1,)
    base = tuple(a)
    while e:
        if e & 1:
            out = pmul(out, base)
        base = pmul(base, base)
        e >>= 1
    return out


# ---------------------------------------------------------------------------
# MatchingPolynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatchingPolynomial:
    """k-matching counts of a graph of order ``n`` (``coeffs[k] = m(G, k)``).

    ``coeffs`` is padded with zeros to length ``n // 2 + 1``.  The path
    convention ``m+(P_{-1}) = 0`` is represented by ``n = -1`` and empty
    coefficients.
    """

    coeffs: tuple[int, ...]
    n: int

    def __post_init__(self):
        c = [int(v) for v in self.coeffs]
        if self.n == -1:
            if any(c):
                raise ValueError("order -1 is reserved for the zero polynomial")
            object.__setattr__(self, "coeffs", ())
            return
        if self.n < 0:
            raise ValueError("order must be >= -1")
        size = self.n // 2 + 1
        if any(c[size:]):
            raise ValueError(f"order {self.n} admits at most {size} coefficients")
        c = (c + [0] * size)[:size]
        if any(v < 0 for v in c):
            raise ValueError("matching counts are nonnegative")
        if c[0] != 1:
            raise ValueError("m(G, 0) must be 1")
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def zero(cls) -> "MatchingPolynomial":
        return cls((), -1)

    @property
    def is_zero(self) -> bool:
        return self.n == -1

    @property
    def matching_number(self) -> int:
        return max((k for k, c in enumerate(self.coeffs) if c), default=0)

    def __add__(self, other: "MatchingPolynomial") -> "MatchingPolynomial":
        """Coefficientwise sum; the order is the larger of the two.

        Used for the edge recursion ``m+(G) = m+(G-e) + x**2 m+(G-u-v)``
        where the second operand comes from :meth:`shift_x2`.
        """
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        return _raw(padd(self.coeffs, other.coeffs), max(self.n, other.n))

    def __mul__(self, other: "MatchingPolynomial") -> "MatchingPolynomial":
        """Disjoint union: ``m+(G1 ∪ G2) = m+(G1) m+(G2)``."""
        if self.is_zero or other.is_zero:
            return MatchingPolynomial.zero()
        return MatchingPolynomial(pmul(self.coeffs, other.coeffs), self.n + other.n)

    def scale(self, k: int) -> tuple[int, ...]:
        return pscale(self.coeffs, k)

    def shift_x2(self) -> "MatchingPolynomial":
        """``x**2 * m+``; order grows by 2 so the result can be added to an order-(n+2) polynomial."""
        if self.is_zero:
            return self
        return _raw(pshift(self.coeffs), self.n + 2)

    def log_coeffs(self) -> np.ndarray:
        return np.array([math.log(c) if c > 0 else -np.inf for c in self.coeffs])

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "coeffs": [str(c) for c in self.coeffs]})

    @classmethod
    def from_json(cls, text: str) -> "MatchingPolynomial":
        obj = json.loads(text)
        return cls(tuple(int(c) for c in obj["coeffs"]), int(obj["n"]))


def _raw(coeffs, n) -> MatchingPolynomial:
    # sums and shifts of matching polynomials need not have constant term 1
    p = object.__new__(MatchingPolynomial)
    size = n // 2 + 1
    c = (list(coeffs) + [0] * size)[:size]
    object.__setattr__(p, "coeffs", tuple(c))
    object.__setattr__(p, "n", n)
    return p


# ---------------------------------------------------------------------------
# matching polynomials of trees
# ---------------------------------------------------------------------------

# rooted AHU code -> (m+ of the rooted subtree, m+ of the subtree minus its root)
_rooted_memo: dict[str, tuple[tuple[int, ...], tuple[int, ...]]] = {}
_rooted_lock = threading.Lock()


def _rooted_pair(code: str, kids: list[str]):
    hit = _rooted_memo.get(code)
    if hit is not None:
        return hit
    pairs = [_rooted_memo[k] for k in kids]
    without_root: tuple[int, ...] = (1,)
    for full, _ in pairs:
        without_root = pmul(without_root, full)
    # deleting the root together with child i leaves child i's own children
    # and every other child subtree whole
    total = without_root
    for i, (_, minus) in enumerate(pairs):
        term = minus
        for j, (full, _) in enumerate(pairs):
            if j != i:
                term = pmul(term, full)
        total = padd(total, pshift(term))
    pair = (total, without_root)
    with _rooted_lock:
        _rooted_memo.setdefault(code, pair)
    return pair


def matching_polynomial(tree: Tree) -> MatchingPolynomial:
    """Exact ``m+(T)`` by vertex deletion at each root, bottom-up.

    For a vertex v with child subtrees S_i,
    ``m+(S_v) = prod m+(S_i) + x**2 * sum_i m+(S_i - c_i) prod_{j != i} m+(S_j)``,
    which is vertex deletion at v combined with the product rule over the
    components of ``S_v - v``.  Subtrees are memoised by rooted canonical
    code, so isomorphic branches are computed once.
    """
    adj = tree.adjacency
    root = _centers(adj)[0]
    codes: dict[int, str] = {}
    rooted_code(adj, root, codes)
    parent = {root: -1}
    order = [root]
    for v in order:
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    for v in reversed(order):
        kids = [codes[w] for w in adj[v] if parent.get(w) == v]
        _rooted_pair(codes[v], kids)
    return MatchingPolynomial(_rooted_memo[codes[root]][0], tree.n)


def matching_polynomial_vertex_recursion(tree: Tree) -> MatchingPolynomial:
    """``m+(G) = m+(G-v) + x**2 sum_{w ~ v} m+(G-v-w)`` applied top-down on forests."""
    return MatchingPolynomial(_forest_vertex(tree), tree.n)


def matching_polynomial_edge_recursion(tree: Tree) -> MatchingPolynomial:
    """``m+(G) = m+(G-e) + x**2 m+(G-u-v)`` applied top-down on forests."""
    return MatchingPolynomial(_forest_edge(tree), tree.n)


_forest_memo_v: dict[str, tuple[int, ...]] = {}
_forest_memo_e: dict[str, tuple[int, ...]] = {}


def _product_over(comps, fn) -> tuple[int, ...]:
    out: tuple[int, ...] = (1,)
    for c in comps:
        out = pmul(out, fn(c))
    return out


def _forest_vertex(tree: Tree) -> tuple[int, ...]:
    if tree.n <= 1:
        return (1,)
    key = canonical_form(tree)
    hit = _forest_memo_v.get(key)
    if hit is not None:
        return hit
    v = max(range(tree.n), key=lambda u: (tree.degrees[u], -u))
    total = _product_over(tree.remove_vertices([v]), _forest_vertex)
    for w in tree.adjacency[v]:
        total = padd(total, pshift(_product_over(tree.remove_vertices([v, w]), _forest_vertex)))
    _forest_memo_v[key] = total
    return total


def _forest_edge(tree: Tree) -> tuple[int, ...]:
    if tree.n <= 1:
        return (1,)
    key = canonical_form(tree)
    hit = _forest_memo_e.get(key)
    if hit is not None:
        return hit
    u, v = tree.edges[0]
    # G - e splits into the two sides of the edge
    side_u = _side(tree, u, v)
    comps_minus_e = [_induced(tree, side_u), _induced(tree, set(range(tree.n)) - side_u)]
    total = _product_over(comps_minus_e, _forest_edge)
    total = padd(total, pshift(_product_over(tree.remove_vertices([u, v]), _forest_edge)))
    _forest_memo_e[key] = total
    return total


def _side(tree: Tree, u: int, v: int) -> set[int]:
    seen = {u, v}
    stack = [u]
    while stack:
        a = stack.pop()
        for b in tree.adjacency[a]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    seen.discard(v)
    return seen


def _induced(tree: Tree, keep: set[int]) -> Tree:
    order = sorted(keep)
    relabel = {v: i for i, v in enumerate(order)}
    return Tree(len(order), tuple((relabel[a], relabel[b]) for a, b in tree.edges
                                  if a in relabel and b in relabel))


# ---------------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------------

def path_mplus(t: int) -> MatchingPolynomial:
    """``m+(P_t)`` from ``m+(P_t) = m+(P_{t-1}) + x**2 m+(P_{t-2})`` with
    ``m+(P_{-1}) = 0`` and ``m+(P_0) = m+(P_1) = 1``."""
    if t < -1:
        raise ValueError("path_mplus needs t >= -1")
    if t == -1:
        return MatchingPolynomial.zero()
    prev, cur = (), (1,)
    for _ in range(t):
        prev, cur = cur, padd(cur, pshift(prev))
    return MatchingPolynomial(cur, t)


def eval_mplus(p: MatchingPolynomial, x: float) -> tuple[float, int]:
    """``m+(p, x)`` as ``(mantissa, exponent)`` with value ``mantissa * 2**exponent``.

    The sum is formed exactly in rational arithmetic (a float is a dyadic
    rational), so the mantissa is correctly rounded; ``mantissa`` lies in
    [0.5, 1) except for the zero polynomial, which returns ``(0.0, 0)``.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    if p.is_zero or not any(p.coeffs):
        return 0.0, 0
    num, den = Fraction(x).as_integer_ratio()
    y_num, y_den = num * num, den * den
    deg = len(p.coeffs) - 1
    total = sum(c * y_num ** k * y_den ** (deg - k) for k, c in enumerate(p.coeffs))
    value = Fraction(total, y_den ** deg)
    exp = value.numerator.bit_length() - value.denominator.bit_length()
    if Fraction(2) ** exp > value:
        exp -= 1
    mant = float(value / Fraction(2) ** exp) / 2.0
    return mant, exp + 1


def path_lambdas(x: float) -> tuple[float, float]:
    """Roots of ``lambda**2 - lambda - x**2``; the small one via Vieta to avoid cancellation."""
    lam1 = (1.0 + math.sqrt(1.0 + 4.0 * x * x)) / 2.0
    return lam1, -x * x / lam1


def closed_form_path(t: int, x: float) -> float:
    """``(lam1**(t+1) - lam2**(t+1)) / sqrt(1 + 4x**2)``; overflows like the true value."""
    if t == -1:
        return 0.0
    return math.exp(log_closed_form_path(t, x))


def log_closed_form_path(t: int, x: float) -> float:
    """Natural log of the closed form, for t >= 0.

    Written as ``lam1**(t+1) * (1 - q**(t+1)) / sqrt(...)`` with
    ``q = lam2/lam1`` in (-1, 0), so no large power is ever formed.
    """
    if t < 0:
        raise ValueError("log_closed_form_path needs t >= 0")
    if x <= 0:
        raise ValueError("x must be > 0")
    lam1, lam2 = path_lambdas(x)
    m = t + 1
    q = lam2 / lam1
    if m % 2 == 0:
        log_one_minus = math.log(-math.expm1(m * math.log(-q)))
    else:
        log_one_minus = math.log1p((-q) ** m)
    return m * math.log(lam1) + log_one_minus - 0.5 * math.log1p(4.0 * x * x)


@dataclass(frozen=True)
class PathRatio:
    """``rho = m+(P_{t-4}, x) / m+(P_{t-3}, x)``."""

    x: float
    rho: float


def path_ratio(t: int, x: float) -> PathRatio:
    """Iterate ``r_k = 1 / (1 + x**2 r_{k-1})`` from ``r_0 = m+(P_{-1})/m+(P_0) = 0``.

    The map is a contraction for x > 0 and stays inside (0, 1], so large t is
    cheap and never touches big coefficients.
    """
    if t < 4:
        raise ValueError("path_ratio needs t >= 4")
    if x <= 0:
        raise ValueError("x must be > 0")
    rho = float(kernels.path_ratio_values(t - 3, np.array([x]))[0])
    return PathRatio(x, rho)


def path_ratio_bounds_exact(t: int, x: float) -> tuple[bool, bool]:
    """Exact check of the parity bounds on ``rho`` at a float ``x > 0``.

    Even t: ``2/(1+sqrt(1+4x**2)) < rho <= 1``;
    odd t: ``1/(1+x**2) <= rho < 2/(1+sqrt(1+4x**2))``.
    Returns ``(lower_holds, upper_holds)``.
    """
    if t < 4:
        raise ValueError("need t >= 4")
    for tt, res in path_ratio_bounds_sweep(t, x):
        if tt == t:
            return res
    raise AssertionError("unreachable")


def path_ratio_bounds_sweep(t_max: int, x: float):
    """Yield ``(t, (lower_holds, upper_holds))`` for t = 4..t_max in one pass.

    ``rho`` is carried as an unreduced integer fraction (a float x is a dyadic
    rational) and the irrational bound ``2/(1+s)``, ``s = sqrt(1+4x**2)``,
    is compared after squaring, so the verdicts are exact.
    """
    if x <= 0:
        raise ValueError("x must be > 0")
    p, q = Fraction(x).as_integer_ratio()
    y_num, y_den = p * p, q * q
    d_num, d_den = y_den + 4 * y_num, y_den
    num, den = 0, 1  # r_0 = m+(P_-1)/m+(P_0)
    for t in range(4, t_max + 1):
        num, den = den * y_den, den * y_den + y_num * num
        # rho > 2/(1+s)  <=>  s > (2 den - num)/num  <=>  D num^2 > (2 den - num)^2
        a = 2 * den - num
        lhs = d_num * num * num
        rhs = a * a * d_den
        if t % 2 == 0:
            yield t, (lhs > rhs, num <= den)
        else:
            yield t, (num * (y_den + y_num) >= den * y_den, lhs < rhs)
