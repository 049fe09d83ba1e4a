"""Command-line front end: ``riccati-diag diagonalize|oracle|riccati|bench``.

Exit codes: 0 ok, 1 parse error, 2 not Hermitian, 3 no convergence,
4 no spectral gap, 64 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import cubic3, flag, oracle, reduction, riccati
from .core import block_split, build_unitary, max_norm
from .errors import (
    BadSplitIndex,
    NoConvergence,
    NoSpectralGap,
    NotHermitian,
    RiccatiDiagError,
    SingularLinearization,
    SingularShift,
    SingularV,
)
from .io import MatrixFile, ParseError, RunReport, load_matrix_file, matrix_to_pairs

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_NOT_HERMITIAN = 2
EXIT_NO_CONVERGENCE = 3
EXIT_NO_GAP = 4
EXIT_USAGE = 64

DIAG_METHODS = ("reduction", "cubic3", "flag")
RICCATI_METHODS = ("newton", "sylvester", "approx2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _finite(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# commands


def cmd_diagonalize(mf: MatrixFile, args) -> RunReport:
    h = mf.matrix
    method = args.method or "reduction"
    if method not in DIAG_METHODS:
        raise UsageError(f"diagonalize: unknown method {method!r} (choose from {', '.join(DIAG_METHODS)})")
    tol = args.tol or mf.tolerance.get("riccati", reduction.DEFAULT_TOL)
    rep = RunReport("diagonalize", mf.digest, method, label=mf.label)
    if method == "reduction":
        try:
            res = reduction.riccati_diagonalize(h, tol)
        except NoConvergence as exc:
            rep.exit_status = EXIT_NO_CONVERGENCE
            rep.message = str(exc)
            partial = exc.partial or {}
            rep.eigenvalues = sorted(float(x) for x in partial.get("eigenvalues_found", []))
            rep.step_residuals = [float(s.residual_norm) for s in partial.get("steps", ())]
            return rep
        rep.eigenvalues = [float(x) for x in res.eigenvalues]
        rep.max_offdiag = float(res.max_offdiag)
        rep.step_residuals = [float(s.residual_norm) for s in res.steps]
        rep.extra = {
            "unitary": matrix_to_pairs(res.unitary.u),
            "column_eigenvalues": [float(x) for x in res.column_eigenvalues],
            "seeds": [s.seed for s in res.steps],
        }
    elif method == "cubic3":
        if h.n != 3:
            raise UsageError("--method cubic3 needs a 3x3 matrix")
        t = cubic3.eigenvalues_3x3(h)
        rep.eigenvalues = [float(x) for x in t.sorted()]
        rep.extra = {"triple": [t.lambda1, t.lambda2, t.lambda3]}
    else:
        if h.n != 3:
            raise UsageError("--method flag needs a 3x3 matrix")
        sol = flag.flag_solve(h, tol)
        diag, off = flag.flag_eigenvalues(sol.coordinate, h)
        rep.eigenvalues = sorted(float(x) for x in diag)
        rep.max_offdiag = float(off)
        c = sol.coordinate
        rep.extra = {
            "coordinate": [[c.x.real, c.x.imag], [c.y.real, c.y.imag], [c.z.real, c.z.imag]],
            "residual": float(sol.residuals.max_abs()),
            "seed": sol.seed,
            "iterations": sol.iterations,
        }
        if not sol.converged:
            rep.exit_status = EXIT_NO_CONVERGENCE
            rep.message = "flag solve did not converge (experimental method)"
    return rep


def cmd_oracle(mf: MatrixFile, args) -> RunReport:
    h = mf.matrix
    rep = RunReport("oracle", mf.digest, "jacobi", label=mf.label)
    try:
        spec = oracle.jacobi_eigensolve(h)
    except NoConvergence as exc:
        rep.exit_status = EXIT_NO_CONVERGENCE
        rep.message = str(exc)
        return rep
    rep.eigenvalues = [float(x) for x in spec.eigenvalues]
    rep.max_offdiag = float(oracle.conjugation_residual(h, spec))
    scale = max(1.0, float(np.max(np.abs(spec.eigenvalues))))
    if h.n <= oracle.CHAR_POLY_MAX_N:
        cp = oracle.char_poly(h)
        roots = np.sort(oracle.poly_roots(cp).real)
        rep.extra["char_poly"] = [float(c.real) for c in cp.coefficients]
        rep.extra["char_poly_deviation"] = float(np.max(np.abs(roots - spec.eigenvalues)) / scale)
    if args.compare:
        try:
            res = reduction.riccati_diagonalize(h, args.tol or reduction.DEFAULT_TOL)
        except NoConvergence as exc:
            rep.exit_status = EXIT_NO_CONVERGENCE
            rep.message = str(exc)
            return rep
        rep.extra["riccati_eigenvalues"] = [float(x) for x in res.eigenvalues]
        rep.extra["compare_deviation"] = float(np.max(np.abs(res.eigenvalues - spec.eigenvalues)) / scale)
    return rep


def cmd_riccati(mf: MatrixFile, args) -> RunReport:
    h = mf.matrix
    method = args.method or "newton"
    if method not in RICCATI_METHODS:
        raise UsageError(f"riccati: unknown method {method!r} (choose from {', '.join(RICCATI_METHODS)})")
    k = args.split if args.split is not None else h.n - 1
    try:
        part = block_split(h, k)
    except BadSplitIndex as exc:
        raise UsageError(str(exc)) from None
    tol = args.tol or mf.tolerance.get("riccati", reduction.DEFAULT_TOL)
    rep = RunReport("riccati", mf.digest, method, label=mf.label)
    gapped = riccati.spectral_gap_check(part)
    try:
        if method == "sylvester":
            sol = riccati.sylvester_integral(part)
        elif method == "approx2":
            z0 = riccati.sylvester_integral(part).z if gapped else np.zeros(part.v.shape)
            sol = riccati.approx_ii(part, z0)
        else:
            z0 = riccati.sylvester_integral(part).z if gapped else np.zeros(part.v.shape)
            sol = riccati.newton_refine(part, z0, tol)
    except NoSpectralGap as exc:
        rep.exit_status = EXIT_NO_GAP
        rep.message = str(exc)
        return rep
    except NoConvergence as exc:
        rep.exit_status = EXIT_NO_CONVERGENCE
        rep.message = str(exc)
        rep.extra = {"z": matrix_to_pairs(exc.best), "residual_norm": _finite(exc.residual)}
        return rep
    except (SingularLinearization, SingularV, SingularShift, ValueError) as exc:
        rep.exit_status = EXIT_NO_CONVERGENCE
        rep.message = str(exc)
        return rep
    top, bottom = riccati.scaled_blocks(part, sol.z)
    u = build_unitary(sol.z, part)
    rep.step_residuals = [float(sol.residual_norm)]
    rep.extra = {
        "split": k,
        "gapped": gapped,
        "z": matrix_to_pairs(sol.z),
        "residual_norm": float(sol.residual_norm),
        "sylvester_residual": float(max_norm(sol.z @ part.h_plus - part.h_minus @ sol.z - part.v)),
        "iterations": sol.iterations,
        "method_tag": sol.method.value,
        "unitary": matrix_to_pairs(u.u),
        "block_plus": matrix_to_pairs(top),
        "block_minus": matrix_to_pairs(bottom),
    }
    conj = u.u.conj().T @ h.data @ u.u
    rep.max_offdiag = float(max_norm(conj[k:, :k]))
    return rep


COMMANDS = {"diagonalize": cmd_diagonalize, "oracle": cmd_oracle, "riccati": cmd_riccati}


def run_file(command: str, path, args) -> RunReport:
    t0 = time.perf_counter()
    try:
        mf = load_matrix_file(path, args.hermiticity_tol)
    except ParseError as exc:
        rep = RunReport(command, "", args.method or "", exit_status=EXIT_PARSE, message=f"{path}: {exc}")
    except NotHermitian as exc:
        rep = RunReport(command, "", args.method or "", exit_status=EXIT_NOT_HERMITIAN, message=f"{path}: {exc}")
    except RiccatiDiagError as exc:
        rep = RunReport(command, "", args.method or "", exit_status=EXIT_PARSE, message=f"{path}: {exc}")
    else:
        rep = COMMANDS[command](mf, args)
    rep.timing_ms = (time.perf_counter() - t0) * 1e3
    rep.max_offdiag = _finite(rep.max_offdiag)
    return rep


def _print_human(rep: RunReport, out) -> None:
    for x in rep.eigenvalues:
        print(_fmt(x), file=out)
    print(file=out)
    print(f"# command: {rep.command}", file=out)
    print(f"# method: {rep.method}", file=out)
    if rep.label:
        print(f"# label: {rep.label}", file=out)
    if rep.max_offdiag is not None:
        print(f"# max_offdiag: {_fmt(rep.max_offdiag)}", file=out)
    if rep.step_residuals:
        print("# step_residuals: " + " ".join(_fmt(r) for r in rep.step_residuals), file=out)
    for key in ("residual_norm", "sylvester_residual", "char_poly_deviation", "compare_deviation", "residual"):
        if key in rep.extra and rep.extra[key] is not None:
            print(f"# {key}: {_fmt(rep.extra[key])}", file=out)
    if "compare_deviation" in rep.extra:
        print(f"max deviation: {_fmt(rep.extra['compare_deviation'])}", file=out)
    print(f"# timing_ms: {rep.timing_ms:.3f}", file=out)
    print(f"# exit_status: {rep.exit_status}", file=out)
    if rep.message:
        print(f"# message: {rep.message}", file=out)


def _common(p: argparse.ArgumentParser, methods) -> None:
    p.add_argument("path", nargs="?", help="matrix file (JSON)")
    p.add_argument("--method", choices=methods, default=None)
    p.add_argument("--split", type=int, default=None, help="block split index k (riccati)")
    p.add_argument("--tol", type=float, default=None, help="relative Riccati residual tolerance")
    p.add_argument("--hermiticity-tol", type=float, default=None)
    p.add_argument("--json", action="store_true", help="emit the machine-readable report")
    p.add_argument("--batch", metavar="DIR", default=None, help="process every *.json file in DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="riccati-diag", description="Riccati diagonalization of Hermitian matrices")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(sub.add_parser("diagonalize", help="full Riccati pipeline"), DIAG_METHODS)
    po = sub.add_parser("oracle", help="Jacobi + characteristic polynomial baseline")
    _common(po, None)
    po.add_argument("--compare", action="store_true", help="also run the Riccati pipeline and report the deviation")
    _common(sub.add_parser("riccati", help="solve the block Riccati equation for one split"), RICCATI_METHODS)
    pb = sub.add_parser("bench", help="time numba kernels against the numpy fallback")
    pb.add_argument("path", nargs="?", help="optional matrix file to time the full pipeline on")
    pb.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32])
    pb.add_argument("--repeat", type=int, default=5)
    pb.add_argument("--json", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench":
        from .bench import run_bench

        return run_bench(args)
    if args.command != "oracle":
        args.compare = False
    if args.split is not None and args.split < 1:
        parser.error(f"--split must be >= 1, got {args.split}")
    if args.batch:
        paths = sorted(Path(args.batch).glob("*.json"))
        if not paths:
            parser.error(f"no *.json files in {args.batch}")
    elif args.path:
        paths = [Path(args.path)]
    else:
        parser.error("a matrix file path or --batch DIR is required")
    reports = []
    for p in paths:
        try:
            reports.append(run_file(args.command, p, args))
        except UsageError as exc:
            parser.error(str(exc))
    out = sys.stdout
    if args.json:
        if args.batch:
            out.write("[\n" + ",\n".join(r.to_json() for r in reports) + "\n]\n")
        else:
            out.write(reports[0].to_json() + "\n")
    else:
        for i, r in enumerate(reports):
            if args.batch:
                print(f"== {paths[i].name}", file=out)
            _print_human(r, out)
    for r in reports:
        if r.exit_status == EXIT_PARSE or r.exit_status == EXIT_NOT_HERMITIAN:
            print(r.message, file=sys.stderr)
    return max(r.exit_status for r in reports)


if __name__ == "__main__":
    raise SystemExit(main())
