"""Numba vs pure-numpy kernel timings.

Both flavours live side by side in ``treeenergy.kernels.KERNELS`` so the
per-kernel part runs in one process.  ``--end-to-end`` also times a CLI
workload in subprocesses with ``TREEENERGY_BACKEND`` set each way.

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end] [--json out.json]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from treeenergy import kernels
from treeenergy.polynomials import matching_polynomial
from treeenergy.trees import build_Ta


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    if a.dtype.kind == "f":
        return bool(np.allclose(a, b, rtol=1e-12, atol=1e-12))
    return bool(np.array_equal(np.sort(a, axis=None), np.sort(b, axis=None)))


def workloads():
    rng = np.random.default_rng(7)
    tree = build_Ta(5, 120)
    logc = np.log(np.array([float(c) for c in matching_polynomial(tree).coeffs]))
    xs = np.sort(rng.uniform(1e-3, 50.0, 21 * 2000))
    adj = tree.adjacency_matrix()
    sym = rng.standard_normal((300, 300))
    sym = sym + sym.T
    return [
        ("log_poly_y  n=136, 42k pts", "log_poly_y", (logc, xs)),
        ("path_ratio  117 steps, 42k pts", "path_ratio_values", (117, xs)),
        ("path_ratio_recip  117 steps", "path_ratio_recip", (117, 1.0 / xs)),
        ("eigen  Ta(5,120) adjacency", "symmetric_eigenvalues", (adj,)),
        ("eigen  dense 300x300", "symmetric_eigenvalues", (sym,)),
        ("prufer_classes  n=8", "prufer_classes", (8, 0)),
    ]


def bench(repeat):
    rows = []
    for label, name, args in workloads():
        nb, np_ = kernels.KERNELS["numba"][name], kernels.KERNELS["numpy"][name]
        nb(*args)  # compile
        t_nb, out_nb = _best_of(lambda: nb(*args), repeat)
        t_np, out_np = _best_of(lambda: np_(*args), max(1, repeat if name != "prufer_classes" else 1))
        if name == "prufer_classes":
            agree = len(out_nb) == len(out_np)
        else:
            agree = _same(out_nb, out_np)
        rows.append({"kernel": label, "numba_s": t_nb, "numpy_s": t_np,
                     "speedup": t_np / t_nb if t_nb > 0 else float("inf"), "agree": agree})
    return rows


def end_to_end():
    cmd = [sys.executable, "-m", "treeenergy", "compare", "--delta", "5", "--t-range", "3:120",
           "--no-cross-check", "--format", "csv"]
    out = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, TREEENERGY_BACKEND=backend)
        subprocess.run(cmd, env=env, check=True, capture_output=True)  # warm caches
        t0 = time.perf_counter()
        res = subprocess.run(cmd, env=env, check=True, capture_output=True, text=True)
        out[backend] = (time.perf_counter() - t0, res.stdout)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    ap.add_argument("--json")
    args = ap.parse_args()

    rows = bench(args.repeat)
    print(f"{'kernel':34s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s}  agree")
    for r in rows:
        print(f"{r['kernel']:34s} {r['numba_s']:11.5f} {r['numpy_s']:11.5f} {r['speedup']:8.1f}  {r['agree']}")
    report = {"kernels": rows}
    if args.end_to_end:
        e2e = end_to_end()
        same = e2e["numba"][1] == e2e["numpy"][1]
        print(f"\ncompare --delta 5 --t-range 3:120: numba {e2e['numba'][0]:.2f}s, "
              f"numpy {e2e['numpy'][0]:.2f}s, identical output: {same}")
        report["end_to_end"] = {k: v[0] for k, v in e2e.items()}
        report["end_to_end"]["identical_output"] = same
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2)
    if not all(r["agree"] for r in rows):
        sys.exit(1)


if __name__ == "__main__":
    main()
