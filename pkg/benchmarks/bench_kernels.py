"""Compare the numba kernels with the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py --sizes 4 8 16 32 --repeat 5
"""

import argparse

from riccati_diag.bench import run_bench


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("path", nargs="?", help="optional matrix file to time the full pipeline on")
    p.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--json", action="store_true")
    raise SystemExit(run_bench(p.parse_args()))


if __name__ == "__main__":
    main()
