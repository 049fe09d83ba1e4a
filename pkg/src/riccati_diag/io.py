"""Matrix files and run reports.

A matrix file is a JSON object::

    {"n": 2,
     "entries": [[[1, 0], [2, 1]],
                 [[2, -1], [5, 0]]],
     "label": "optional",
     "tolerance": {"hermiticity": 1e-12, "riccati": 1e-10}}

with every entry an explicit ``[re, im]`` pair, row-major.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .core import DEFAULT_HERMITICITY_TOL, HermitianMatrix, validate_hermitian


class ParseError(ValueError):
    pass


@dataclass
class MatrixFile:
    matrix: HermitianMatrix
    digest: str
    label: str | None = None
    tolerance: dict[str, float] = field(default_factory=dict)


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {json.dumps(x)}")
    if not math.isfinite(x):
        raise ParseError(f"{where}: non-finite value")
    return float(x)


def parse_matrix_text(text: str, hermiticity_tol: float | None = None) -> MatrixFile:
    """Parse matrix-file text; raises :class:`ParseError` or ``NotHermitian``."""
    if not text.strip():
        raise ParseError("empty file")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object with 'n' and 'entries'")
    n = obj.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError(f"'n' must be a positive integer, got {json.dumps(n)}")
    rows = obj.get("entries")
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"'entries' must be a list of {n} rows")
    data = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"entries row {i + 1}: expected {n} entries")
        for j, pair in enumerate(row):
            where = f"entries row {i + 1}, column {j + 1}"
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"{where}: expected a [re, im] pair, got {json.dumps(pair)}")
            data[i, j] = complex(_number(pair[0], where), _number(pair[1], where))
    tol = obj.get("tolerance") or {}
    if not isinstance(tol, dict):
        raise ParseError("'tolerance' must be an object")
    tolerance = {k: _number(v, f"tolerance.{k}") for k, v in tol.items()}
    label = obj.get("label")
    htol = hermiticity_tol or tolerance.get("hermiticity", DEFAULT_HERMITICITY_TOL)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return MatrixFile(validate_hermitian(data, htol), digest, label, tolerance)


def load_matrix_file(path, hermiticity_tol: float | None = None) -> MatrixFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_matrix_text(text, hermiticity_tol)


def matrix_to_pairs(a) -> list[list[list[float]]]:
    a = np.atleast_2d(np.asarray(a, dtype=np.complex128))
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


def pairs_to_matrix(p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64)
    return arr[..., 0] + 1j * arr[..., 1]


def write_matrix_file(path, a, label: str | None = None) -> None:
    a = np.asarray(a, dtype=np.complex128)
    obj: dict[str, Any] = {"n": int(a.shape[0]), "entries": matrix_to_pairs(a)}
    if label is not None:
        obj["label"] = label
    Path(path).write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")


@dataclass
class RunReport:
    command: str
    input_digest: str
    method: str
    eigenvalues: list[float] = field(default_factory=list)
    max_offdiag: float | None = None
    step_residuals: list[float] = field(default_factory=list)
    timing_ms: float = 0.0
    exit_status: int = 0
    label: str | None = None
    message: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self, *, timing: bool = True) -> dict[str, Any]:
        d = asdict(self)
        if not timing:
            d.pop("timing_ms")
        return d

    def to_json(self, *, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing=timing), sort_keys=True, indent=2, allow_nan=False)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RunReport":
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))
