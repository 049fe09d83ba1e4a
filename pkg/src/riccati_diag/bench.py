"""Timing of the numba kernels against the pure-numpy fallback."""

from __future__ import annotations

import json
import time

import numpy as np

from . import _kernels


def _random_hermitian(n: int, rng) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def _best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1e3


def bench_kernels(sizes=(4, 8, 16, 32), repeat: int = 5, seed: int = 0) -> list[dict]:
    """Best-of-``repeat`` wall milliseconds per kernel, backend and size."""
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        a = _random_hermitian(n, rng)
        m = 4 * n
        op = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        b = rng.standard_normal(m) + 0j
        cases = {
            "jacobi_eigh": {
                "numpy": lambda: _kernels.jacobi_eigh_numpy(a, 1e-15, 50 * n * n),
                "numba": lambda: _kernels.jacobi_eigh_numba(a, 1e-15, 50 * n * n),
            },
            "gauss_solve": {
                "numpy": lambda: _kernels.gauss_solve_numpy(op, b, 1e-13),
                "numba": lambda: _kernels.gauss_solve_numba(op, b, 1e-13),
            },
        }
        for kernel, impls in cases.items():
            row = {"kernel": kernel, "n": m if kernel == "gauss_solve" else n}
            for name, fn in impls.items():
                if name == "numba" and not _kernels.HAVE_NUMBA:
                    row[name + "_ms"] = None
                    continue
                fn()  # warm-up / JIT compile
                row[name + "_ms"] = _best_of(fn, repeat)
            if row.get("numba_ms"):
                row["speedup"] = row["numpy_ms"] / row["numba_ms"]
            rows.append(row)
    return rows


def run_bench(args) -> int:
    rows = bench_kernels(args.sizes, args.repeat)
    pipeline = None
    if args.path:
        from .io import load_matrix_file
        from .reduction import riccati_diagonalize

        mf = load_matrix_file(args.path)
        riccati_diagonalize(mf.matrix)
        pipeline = {"n": mf.matrix.n, "ms": _best_of(lambda: riccati_diagonalize(mf.matrix), args.repeat)}
    if args.json:
        print(json.dumps({"backend": _kernels.backend(), "kernels": rows, "pipeline": pipeline}, indent=2))
        return 0
    print(f"active backend: {_kernels.backend()}")
    print(f"{'kernel':<12} {'n':>4} {'numpy ms':>11} {'numba ms':>11} {'speedup':>8}")
    for r in rows:
        nb = "n/a" if r["numba_ms"] is None else f"{r['numba_ms']:.4f}"
        sp = f"{r['speedup']:.1f}x" if "speedup" in r else "-"
        print(f"{r['kernel']:<12} {r['n']:>4} {r['numpy_ms']:>11.4f} {nb:>11} {sp:>8}")
    if pipeline:
        print(f"riccati_diagonalize n={pipeline['n']}: {pipeline['ms']:.3f} ms")
    return 0
