"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The public names at the bottom of the module are bound to the backend picked
in :mod:`treeenergy._backend`.  Both flavours are always importable so the
benchmark and the test-suite can compare them inside one process.
"""

import math

import numpy as np

from ._backend import BACKEND, njit

__all__ = [
    "log_poly_y",
    "path_ratio_values",
    "path_ratio_recip",
    "tridiagonalize",
    "tql_eigenvalues",
    "symmetric_eigenvalues",
    "prufer_classes",
    "canonical_code_u64",
    "KERNELS",
]

EPS = np.finfo(np.float64).eps
_TINY = float(np.finfo(np.float64).tiny)


# ---------------------------------------------------------------------------
# log of a positive polynomial in y = x**2
# ---------------------------------------------------------------------------

@njit
def _softplus(z):
    if z > 0.0:
        return z + math.log1p(math.exp(-z))
    return math.log1p(math.exp(z))


@njit
def _log_poly_y_nb(logb, x):
    out = np.empty(x.shape[0])
    m = logb.shape[0]
    for i in range(x.shape[0]):
        xi = x[i]
        if m == 1 or xi == 0.0:
            out[i] = logb[0]
            continue
        lx2 = 2.0 * math.log(xi)
        top = -np.inf
        for j in range(1, m):
            if logb[j] > -np.inf:
                v = logb[j] - logb[0] + j * lx2
                if v > top:
                    top = v
        if top == -np.inf:
            out[i] = logb[0]
            continue
        s = 0.0
        for j in range(1, m):
            if logb[j] > -np.inf:
                s += math.exp(logb[j] - logb[0] + j * lx2 - top)
        out[i] = logb[0] + _softplus(top + math.log(s))
    return out


def _log_poly_y_np(logb, x):
    x = np.asarray(x, dtype=np.float64)
    if logb.shape[0] == 1:
        return np.full(x.shape, logb[0])
    rel = logb[1:] - logb[0]
    j = np.arange(1, logb.shape[0], dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        lx2 = 2.0 * np.log(x)
        terms = rel[None, :] + j[None, :] * lx2[:, None]
        terms[:, ~np.isfinite(rel)] = -np.inf
        top = terms.max(axis=1)
        safe_top = np.where(np.isfinite(top), top, 0.0)
        ls = safe_top + np.log(np.exp(terms - safe_top[:, None]).sum(axis=1))
        sp = np.where(ls > 0, ls + np.log1p(np.exp(-np.abs(ls))), np.log1p(np.exp(np.minimum(ls, 0.0))))
    sp = np.where(np.isfinite(top) & (x > 0), sp, 0.0)
    return logb[0] + sp


# ---------------------------------------------------------------------------
# consecutive path ratio  m+(P_{k-1}) / m+(P_k)
# ---------------------------------------------------------------------------

@njit
def _path_ratio_nb(steps, x):
    # steps outermost: the inner loop over points vectorises
    y = x * x
    r = np.zeros(x.shape[0])
    for _ in range(steps):
        for i in range(x.shape[0]):
            r[i] = 1.0 / (1.0 + y[i] * r[i])
    return r


def _path_ratio_np(steps, x):
    y = np.asarray(x, dtype=np.float64) ** 2
    r = np.zeros_like(y)
    for _ in range(steps):
        r = 1.0 / (1.0 + y * r)
    return r


# same recurrence in u = 1/x: r_k = w / (w + r_{k-1}), w = u**2; no overflow as u -> 0
@njit
def _path_ratio_recip_nb(steps, u):
    w = np.maximum(u * u, _TINY)  # w == 0 would give 0/0 at the second step
    r = np.zeros(u.shape[0])
    for _ in range(steps):
        for i in range(u.shape[0]):
            r[i] = w[i] / (w[i] + r[i])
    return r


def _path_ratio_recip_np(steps, u):
    w = np.maximum(np.asarray(u, dtype=np.float64) ** 2, _TINY)
    r = np.zeros_like(w)
    for _ in range(steps):
        r = w / (w + r)
    return r


# ---------------------------------------------------------------------------
# symmetric eigenvalues: Householder tridiagonalisation + implicit QL
# ---------------------------------------------------------------------------

@njit
def _tridiagonalize_nb(a):
    a = a.copy()
    n = a.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    for i in range(n - 1, 0, -1):
        l = i - 1
        h = 0.0
        if l > 0:
            scale = 0.0
            for k in range(l + 1):
                scale += abs(a[i, k])
            if scale == 0.0:
                e[i] = a[i, l]
            else:
                for k in range(l + 1):
                    a[i, k] /= scale
                    h += a[i, k] * a[i, k]
                f = a[i, l]
                g = -math.sqrt(h) if f >= 0.0 else math.sqrt(h)
                e[i] = scale * g
                h -= f * g
                a[i, l] = f - g
                f = 0.0
                for j in range(l + 1):
                    g = 0.0
                    for k in range(j + 1):
                        g += a[j, k] * a[i, k]
                    for k in range(j + 1, l + 1):
                        g += a[k, j] * a[i, k]
                    e[j] = g / h
                    f += e[j] * a[i, j]
                hh = f / (h + h)
                for j in range(l + 1):
                    f = a[i, j]
                    g = e[j] - hh * f
                    e[j] = g
                    for k in range(j + 1):
                        a[j, k] -= f * e[k] + g * a[i, k]
        else:
            e[i] = a[i, l]
    for i in range(n):
        d[i] = a[i, i]
    # e[i] couples rows i-1 and i; shift so e[i] couples i and i+1
    sub = np.zeros(n)
    for i in range(1, n):
        sub[i - 1] = e[i]
    return d, sub


def _tridiagonalize_np(a):
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1:, k]
        norm = np.sqrt(x @ x)
        if norm == 0.0:
            continue
        alpha = -math.copysign(norm, x[0])
        v = x.copy()
        v[0] -= alpha
        vv = v @ v
        if vv == 0.0:
            continue
        block = a[k + 1:, k + 1:]
        p = block @ v * (2.0 / vv)
        q = p - ((v @ p) / vv) * v
        block -= np.outer(v, q) + np.outer(q, v)
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = a[k, k + 1] = alpha
    d = np.diag(a).copy()
    sub = np.zeros(n)
    sub[: n - 1] = np.diag(a, -1)
    return d, sub


@njit
def _tql_nb(d, e):
    d = d.copy()
    e = e.copy()
    n = d.shape[0]
    if n > 0:
        e[n - 1] = 0.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 60:
                raise ValueError("implicit QL did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(d)


def _tql_np(d, e):
    # Same recurrence as the numba kernel on Python floats; the QL sweep is
    # inherently sequential so there is nothing to vectorise here.
    d = [float(v) for v in d]
    e = [float(v) for v in e]
    n = len(d)
    if n:
        e[n - 1] = 0.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= EPS * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 60:
                raise ValueError("implicit QL did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(np.array(d))


# ---------------------------------------------------------------------------
# Pruefer-sequence sweep with 64-bit AHU canonical codes (n <= 32)
# ---------------------------------------------------------------------------

@njit
def _rooted_code_nb(n, nbr, deg, root):
    order = np.empty(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    order[0] = root
    parent[root] = root
    head, tail = 0, 1
    while head < tail:
        v = order[head]
        head += 1
        for k in range(deg[v]):
            w = nbr[v, k]
            if parent[w] == -1:
                parent[w] = v
                order[tail] = w
                tail += 1
    val = np.zeros(n, dtype=np.uint64)
    ln = np.zeros(n, dtype=np.int64)
    keys = np.empty(n, dtype=np.uint64)
    kids = np.empty(n, dtype=np.int64)
    for idx in range(n - 1, -1, -1):
        v = order[idx]
        nk = 0
        for k in range(deg[v]):
            w = nbr[v, k]
            if parent[w] == v and w != root:
                kids[nk] = w
                keys[nk] = val[w] << np.uint64(64 - ln[w])
                nk += 1
        # insertion sort, descending
        for a in range(1, nk):
            kk = keys[a]
            cw = kids[a]
            b = a - 1
            while b >= 0 and keys[b] < kk:
                keys[b + 1] = keys[b]
                kids[b + 1] = kids[b]
                b -= 1
            keys[b + 1] = kk
            kids[b + 1] = cw
        code = np.uint64(1)
        total = 1
        for a in range(nk):
            w = kids[a]
            code = (code << np.uint64(ln[w])) | val[w]
            total += ln[w]
        code = code << np.uint64(1)
        val[v] = code
        ln[v] = total + 1
    return val[root]


@njit
def _canonical_u64_nb(n, eu, ev):
    nbr = np.zeros((n, n), dtype=np.int64)
    deg = np.zeros(n, dtype=np.int64)
    for i in range(eu.shape[0]):
        a, b = eu[i], ev[i]
        nbr[a, deg[a]] = b
        deg[a] += 1
        nbr[b, deg[b]] = a
        deg[b] += 1
    if n == 1:
        return np.uint64(2)
    # peel leaves to find the centre(s)
    rem = deg.copy()
    alive = n
    layer = np.empty(n, dtype=np.int64)
    gone = np.zeros(n, dtype=np.bool_)
    while alive > 2:
        nl = 0
        for v in range(n):
            if not gone[v] and rem[v] == 1:
                layer[nl] = v
                nl += 1
        for a in range(nl):
            v = layer[a]
            gone[v] = True
            alive -= 1
            for k in range(deg[v]):
                w = nbr[v, k]
                if not gone[w]:
                    rem[w] -= 1
    best = np.uint64(0)
    for v in range(n):
        if not gone[v]:
            c = _rooted_code_nb(n, nbr, deg, v)
            if c > best:
                best = c
    return best


@njit
def _prufer_decode_nb(n, seq, eu, ev):
    deg = np.ones(n, dtype=np.int64)
    for a in seq:
        deg[a] += 1
    for i in range(n - 2):
        a = seq[i]
        for j in range(n):
            if deg[j] == 1:
                eu[i] = j
                ev[i] = a
                deg[j] -= 1
                deg[a] -= 1
                break
    u = -1
    for j in range(n):
        if deg[j] == 1:
            if u < 0:
                u = j
            else:
                eu[n - 2] = u
                ev[n - 2] = j
                break


@njit
def _prufer_classes_nb(n, delta):
    seen = dict()
    seen[np.uint64(0)] = np.int64(-1)
    reps = []
    m = n - 2
    seq = np.zeros(max(m, 0), dtype=np.int64)
    cnt = np.zeros(n, dtype=np.int64)
    eu = np.empty(n - 1, dtype=np.int64)
    ev = np.empty(n - 1, dtype=np.int64)
    total = n ** m
    for idx in range(total):
        r = idx
        for p in range(m - 1, -1, -1):
            seq[p] = r % n
            r //= n
        if delta > 0:
            for j in range(n):
                cnt[j] = 0
            for a in seq:
                cnt[a] += 1
            top = 0
            hits = 0
            for j in range(n):
                dj = cnt[j] + 1
                if dj > top:
                    top = dj
                    hits = 1
                elif dj == top:
                    hits += 1
            if top != delta or hits != 2:
                continue
        _prufer_decode_nb(n, seq, eu, ev)
        code = _canonical_u64_nb(n, eu, ev)
        if code not in seen:
            seen[code] = np.int64(len(reps))
            reps.append(seq.copy())
    out = np.zeros((len(reps), max(m, 0)), dtype=np.int64)
    for i in range(len(reps)):
        out[i, :] = reps[i]
    return out


def _prufer_decode_py(n, seq):
    deg = [1] * n
    for a in seq:
        deg[a] += 1
    edges = []
    for a in seq:
        j = deg.index(1)
        edges.append((j, a))
        deg[j] -= 1
        deg[a] -= 1
    u, w = [j for j in range(n) if deg[j] == 1]
    edges.append((u, w))
    return edges


def _canonical_u64_py(n, edges):
    """Same encoding as the numba kernel, written with Python ints."""
    if n == 1:
        return 2
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    rem = [len(x) for x in adj]
    alive = set(range(n))
    while len(alive) > 2:
        layer = [v for v in alive if rem[v] == 1]
        for v in layer:
            alive.discard(v)
            for w in adj[v]:
                if w in alive:
                    rem[w] -= 1

    def rooted(root):
        parent = {root: root}
        order = [root]
        for v in order:
            for w in adj[v]:
                if w not in parent:
                    parent[w] = v
                    order.append(w)
        code = {}
        for v in reversed(order):
            kids = sorted(
                (code[w] for w in adj[v] if parent.get(w) == v and w != root),
                key=lambda c: c[0] << (64 - c[1]),
                reverse=True,
            )
            val, ln = 1, 1
            for cv, cl in kids:
                val = (val << cl) | cv
                ln += cl
            code[v] = (val << 1, ln + 1)
        return code[root][0]

    return max(rooted(c) for c in alive)


def _prufer_classes_np(n, delta):
    m = n - 2
    if m <= 0:
        return np.zeros((1, max(m, 0)), dtype=np.int64)
    # sequences in lexicographic order, built as a digit table
    idx = np.arange(n ** m, dtype=np.int64)
    digits = np.empty((idx.size, m), dtype=np.int64)
    for p in range(m - 1, -1, -1):
        digits[:, p] = idx % n
        idx //= n
    if delta > 0:
        degs = 1 + np.stack([(digits == j).sum(axis=1) for j in range(n)], axis=1)
        top = degs.max(axis=1)
        keep = (top == delta) & ((degs == top[:, None]).sum(axis=1) == 2)
        digits = digits[keep]
    seen = set()
    reps = []
    for row in digits:
        seq = row.tolist()
        code = _canonical_u64_py(n, _prufer_decode_py(n, seq))
        if code not in seen:
            seen.add(code)
            reps.append(seq)
    return np.array(reps, dtype=np.int64).reshape(len(reps), m)


def _canonical_code_nb_wrapper(n, edges):
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return int(_canonical_u64_nb(n, e[:, 0].copy(), e[:, 1].copy()))


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _eig_nb(a):
    d, e = _tridiagonalize_nb(np.ascontiguousarray(a, dtype=np.float64))
    return _tql_nb(d, e)


def _eig_np(a):
    d, e = _tridiagonalize_np(a)
    return _tql_np(d, e)


KERNELS = {
    "numba": {
        "log_poly_y": _log_poly_y_nb,
        "path_ratio_values": _path_ratio_nb,
        "path_ratio_recip": _path_ratio_recip_nb,
        "tridiagonalize": _tridiagonalize_nb,
        "tql_eigenvalues": _tql_nb,
        "symmetric_eigenvalues": _eig_nb,
        "prufer_classes": _prufer_classes_nb,
        "canonical_code_u64": _canonical_code_nb_wrapper,
    },
    "numpy": {
        "log_poly_y": _log_poly_y_np,
        "path_ratio_values": _path_ratio_np,
        "path_ratio_recip": _path_ratio_recip_np,
        "tridiagonalize": _tridiagonalize_np,
        "tql_eigenvalues": _tql_np,
        "symmetric_eigenvalues": _eig_np,
        "prufer_classes": _prufer_classes_np,
        "canonical_code_u64": _canonical_u64_py,
    },
}

_active = KERNELS[BACKEND]


def log_poly_y(logb, x):
    """log(sum_j b_j x**(2j)) from ``logb[j] = log b_j``; ``b_0`` must be positive.

    Accurate in the relative sense for small x: the constant term is split off
    and the remainder goes through ``log1p``.
    """
    return _active["log_poly_y"](np.asarray(logb, dtype=np.float64),
                                 np.ascontiguousarray(x, dtype=np.float64))


def path_ratio_values(steps, x):
    return _active["path_ratio_values"](int(steps), np.ascontiguousarray(x, dtype=np.float64))


def path_ratio_recip(steps, u):
    """``path_ratio_values(steps, 1/u)`` computed without forming 1/u."""
    return _active["path_ratio_recip"](int(steps), np.ascontiguousarray(u, dtype=np.float64))


def tridiagonalize(a):
    return _active["tridiagonalize"](np.ascontiguousarray(a, dtype=np.float64))


def tql_eigenvalues(d, e):
    return _active["tql_eigenvalues"](np.asarray(d, dtype=np.float64), np.asarray(e, dtype=np.float64))


def symmetric_eigenvalues(a):
    """All eigenvalues of a real symmetric matrix, ascending."""
    return _active["symmetric_eigenvalues"](a)


def prufer_classes(n, delta=0):
    """One Pruefer sequence per isomorphism class of labelled trees on n vertices.

    ``delta > 0`` keeps only trees whose maximum degree is ``delta`` and is
    attained by exactly two vertices.  Sequences are returned in order of
    first appearance in the lexicographic sweep.
    """
    if not 2 <= n <= 32:
        raise ValueError("prufer sweep supports 2 <= n <= 32")
    return _active["prufer_classes"](int(n), int(delta))


def canonical_code_u64(n, edges):
    return _active["canonical_code_u64"](n, edges)
