"""Quadratic operators generated by skew-symmetric matrices.

With linear functionals f_k(x) = sum_i a_ki * x_i the validity
conditions hold exactly when the coefficient matrix is skew-symmetric
(a_ki = -a_ik) with every entry bounded by 1 in magnitude.  The skew
part is what makes the weighted balance vanish identically:
sum_k x_k f_k(x) = x^T A x = 0 for skew A.  Conversely a matrix with a
nonzero symmetric part admits a concrete point where that sum is
nonzero; ``symmetry_defect_witness`` constructs the smallest such
witness deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import json

import numpy as np

from .errors import BoundViolation, NotSkew
from .generating import GeneratingMap, VolterraOperator
from .simplex import SparsePoint, vertex

#: Tolerance for skew-symmetry, zero diagonal and the entry bound.
MATRIX_TOLERANCE = 1e-12

#: Largest dimension for which a dense evaluation cache is built.
_DENSE_LIMIT = 512


@dataclass(frozen=True)
class SkewMatrix:
    """Canonical sparse store of a skew-symmetric coefficient matrix.

    Only entries with row < column are stored; the mirrored entries are
    implied with opposite sign and the diagonal is implied zero, so
    skew-symmetry cannot be broken after validation.
    """

    entries: Mapping[tuple[int, int], float]
    dimension: int

    def coefficient(self, k: int, i: int) -> float:
        if k == i:
            return 0.0
        if k < i:
            return self.entries.get((k, i), 0.0)
        return -self.entries.get((i, k), 0.0)

    def to_triples(self) -> list[list[float]]:
        return [[k, i, v] for (k, i), v in sorted(self.entries.items())]


def _cells_from_raw(raw) -> dict[tuple[int, int], float]:
    """Normalize a dense numpy array or an iterable of (k, i, value)
    triples into a cell map with 1-based indices.

    A two-dimensional numpy array is read densely (zeros skipped); any
    other iterable must yield index-index-value triples.
    """
    cells: dict[tuple[int, int], float] = {}
    if isinstance(raw, np.ndarray):
        if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
            raise ValueError(f"dense matrix must be square, got shape {raw.shape}")
        for r in range(raw.shape[0]):
            for c in range(raw.shape[1]):
                v = float(raw[r, c])
                if v != 0.0:
                    cells[(r + 1, c + 1)] = v
        return cells
    for item in raw:
        k, i, v = item
        k, i = int(k), int(i)
        if k < 1 or i < 1:
            raise ValueError(f"matrix indices must be positive, got ({k}, {i})")
        key = (k, i)
        v = float(v)
        if key in cells and cells[key] != v:
            raise ValueError(f"conflicting duplicate entries for cell {key}")
        cells[key] = v
    return cells


def validate_matrix(raw) -> SkewMatrix:
    """Check skew-symmetry, zero diagonal and the unit entry bound.

    Either orientation of a pair may be given; when both are present
    they must be consistent within MATRIX_TOLERANCE.  Returns the
    canonical upper-triangular store.
    """
    cells = _cells_from_raw(raw)
    store: dict[tuple[int, int], float] = {}
    seen: set[tuple[int, int]] = set()
    for (k, i), v in sorted(cells.items()):
        if k == i:
            if abs(v) > MATRIX_TOLERANCE:
                raise NotSkew((k, i), f"diagonal entry {v!r} is not zero")
            continue
        lo, hi = (k, i) if k < i else (i, k)
        if (lo, hi) in seen:
            continue
        seen.add((lo, hi))
        upper = cells.get((lo, hi))
        lower = cells.get((hi, lo))
        if upper is not None and lower is not None and abs(upper + lower) > MATRIX_TOLERANCE:
            raise NotSkew((lo, hi), f"a[{lo},{hi}]={upper!r} but a[{hi},{lo}]={lower!r}")
        value = upper if upper is not None else -lower
        if abs(value) > 1.0 + MATRIX_TOLERANCE:
            raise BoundViolation((lo, hi), value)
        if value != 0.0:
            store[(lo, hi)] = value
    dimension = max((hi for (_, hi) in store), default=0)
    return SkewMatrix(entries=store, dimension=dimension)


def quadratic_operator(a: SkewMatrix) -> VolterraOperator:
    """The operator with linear generating map f_k(x) = sum_i a_ki x_i."""
    n = a.dimension
    dense = None
    if 0 < n <= _DENSE_LIMIT:
        dense = np.zeros((n + 1, n + 1))
        for (k, i), v in a.entries.items():
            dense[k, i] = v
            dense[i, k] = -v

    def evaluate(k: int, x: SparsePoint) -> float:
        if dense is not None:
            if k > n:
                return 0.0
            return sum(dense[k, i] * m for i, m in x.items() if i <= n)
        return sum(a.coefficient(k, i) * m for i, m in x.items())

    def batch(ks: Sequence[int], x: SparsePoint) -> np.ndarray:
        if dense is not None:
            idx = [i for i in x.support if i <= n]
            out = np.zeros(len(ks))
            if idx:
                masses = np.array([x.mass(i) for i in idx])
                inside = [p for p, k in enumerate(ks) if k <= n]
                if inside:
                    rows = [ks[p] for p in inside]
                    out[inside] = dense[np.ix_(rows, idx)] @ masses
            return out
        return np.array([evaluate(k, x) for k in ks])

    gmap = GeneratingMap(evaluate=evaluate, batch=batch)
    return VolterraOperator(gmap, label=f"quadratic(n={n})")


def symmetry_defect_witness(raw) -> tuple[SparsePoint, float] | None:
    """A point where sum_k x_k f_k(x) != 0 for a non-skew matrix.

    Scans the diagonal first: a nonzero b_ii gives the vertex e^(i)
    with value b_ii.  Otherwise the smallest pair (i, j) with
    b_ij + b_ji != 0 gives the uniform point on {i, j} with value
    (b_ii + b_jj + b_ij + b_ji) / 4.  Returns None exactly when the
    symmetric part vanishes within MATRIX_TOLERANCE.
    """
    cells = _cells_from_raw(raw)
    if not cells:
        return None
    top = max(max(k, i) for (k, i) in cells)
    for i in range(1, top + 1):
        v = cells.get((i, i), 0.0)
        if abs(v) > MATRIX_TOLERANCE:
            return vertex(i), v
    for i in range(1, top + 1):
        for j in range(i + 1, top + 1):
            s = cells.get((i, j), 0.0) + cells.get((j, i), 0.0)
            if abs(s) > MATRIX_TOLERANCE:
                value = (s + cells.get((i, i), 0.0) + cells.get((j, j), 0.0)) / 4.0
                witness = SparsePoint((i, j), (0.5, 0.5))
                return witness, value
    return None


def save_matrix(a: SkewMatrix, path: str | Path) -> None:
    Path(path).write_text(json.dumps(a.to_triples(), indent=2) + "\n")


def load_matrix(path: str | Path) -> SkewMatrix:
    """Read a JSON list of [k, i, value] triples and validate it."""
    with Path(path).open("r", encoding="utf-8") as handle:
        return validate_matrix(json.load(handle))
