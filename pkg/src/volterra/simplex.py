"""Finite-support arithmetic on the infinite-dimensional simplex.

The simplex is the set of nonnegative summable sequences with unit total
mass, indexed by the positive integers.  Everything handled here has
finite support, so a point is stored exactly as a sparse index -> mass
map instead of a truncated sequence.  A face is the sub-simplex supported
inside a finite index set; the relative interior of a face consists of
the points whose mass is strictly positive on every index of the face.

Uniform sampling on a face uses the flat Dirichlet distribution realized
through normalized exponentials: g_i ~ Exp(1), mass_i = g_i / sum(g).
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import NegativeMass, SumOutOfTolerance

#: Absolute tolerance on the input mass total accepted by make_point.
SUM_TOLERANCE = 1e-9


class SparsePoint:
    """Immutable finite-support point of the simplex.

    Entries are sorted by index, strictly positive, and normalized to
    unit total at construction.  Build instances through
    :func:`make_point`, :func:`vertex` or :func:`sample_face`; operator
    application bypasses renormalization internally so that image mass
    totals remain observable to the caller.
    """

    __slots__ = ("_indices", "_masses", "_lookup")

    def __init__(self, indices: Iterable[int], masses: Iterable[float]):
        self._indices = tuple(indices)
        self._masses = tuple(masses)
        self._lookup = dict(zip(self._indices, self._masses))

    @property
    def support(self) -> tuple[int, ...]:
        """Indices carrying strictly positive mass, ascending."""
        return self._indices

    @property
    def max_index(self) -> int:
        return self._indices[-1] if self._indices else 0

    def mass(self, index: int) -> float:
        return self._lookup.get(index, 0.0)

    def items(self) -> Iterator[tuple[int, float]]:
        return iter(zip(self._indices, self._masses))

    def as_dict(self) -> dict[int, float]:
        return dict(self._lookup)

    def total(self) -> float:
        return float(sum(self._masses))

    def __contains__(self, index: int) -> bool:
        return index in self._lookup

    def __len__(self) -> int:
        return len(self._indices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoint):
            return NotImplemented
        return self._indices == other._indices and self._masses == other._masses

    def __hash__(self) -> int:
        return hash((self._indices, self._masses))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {m:.6g}" for k, m in self.items())
        return f"SparsePoint({{{body}}})"


def make_point(entries: Mapping[int, float] | Iterable[tuple[int, float]]) -> SparsePoint:
    """Validate, canonicalize and renormalize a point of the simplex.

    Accepts an index -> mass mapping or an iterable of (index, mass)
    pairs; duplicate indices accumulate.  Zero masses are dropped, the
    remaining masses are divided by their total so the stored sum is 1
    in working precision.

    Raises NegativeMass for any mass below zero and SumOutOfTolerance
    when the input total deviates from 1 by more than ``SUM_TOLERANCE``.
    """
    if isinstance(entries, Mapping):
        pairs = entries.items()
    else:
        pairs = entries
    acc: dict[int, float] = {}
    for index, mass in pairs:
        k = int(index)
        if k != index or k < 1:
            raise ValueError(f"index must be a positive integer, got {index!r}")
        m = float(mass)
        if m < 0.0:
            raise NegativeMass(k, m)
        acc[k] = acc.get(k, 0.0) + m
    total = float(sum(acc.values()))
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise SumOutOfTolerance(total, SUM_TOLERANCE)
    kept = sorted((k, m / total) for k, m in acc.items() if m > 0.0)
    return SparsePoint((k for k, _ in kept), (m for _, m in kept))


def vertex(n: int) -> SparsePoint:
    """The extremal point e^(n): all mass on index n."""
    if n < 1:
        raise ValueError(f"vertex index must be >= 1, got {n}")
    return SparsePoint((n,), (1.0,))


@dataclass(frozen=True)
class FaceSpec:
    """A finite index set defining a face of the simplex."""

    indices: tuple[int, ...]

    def __post_init__(self):
        if not self.indices:
            raise ValueError("a face needs at least one index")
        prev = 0
        for k in self.indices:
            if int(k) != k or k < 1:
                raise ValueError(f"face index must be a positive integer, got {k!r}")
            if k <= prev:
                raise ValueError("face indices must be strictly increasing")
            prev = k

    @classmethod
    def of(cls, indices: Iterable[int]) -> "FaceSpec":
        return cls(tuple(sorted({int(k) for k in indices})))

    @classmethod
    def prefix(cls, n: int) -> "FaceSpec":
        """The face on indices 1..n."""
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> "FaceSpec":
        """Parse ``"1..5"`` ranges and ``"1,3,7"`` lists (mixable)."""
        indices: set[int] = set()
        for token in text.replace(" ", "").split(","):
            if not token:
                continue
            if ".." in token:
                lo, hi = token.split("..")
                indices.update(range(int(lo), int(hi) + 1))
            else:
                indices.add(int(token))
        if not indices:
            raise ValueError(f"cannot parse face from {text!r}")
        return cls.of(indices)

    def __contains__(self, index: int) -> bool:
        pos = bisect_left(self.indices, index)
        return pos < len(self.indices) and self.indices[pos] == index

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def covers(self, p: SparsePoint) -> bool:
        """True iff the support of ``p`` lies inside this face."""
        return all(k in self for k in p.support)

    def vertices(self) -> list[SparsePoint]:
        return [vertex(k) for k in self.indices]

    def barycenter(self) -> SparsePoint:
        m = 1.0 / len(self.indices)
        return SparsePoint(self.indices, (m,) * len(self.indices))


def in_relative_interior(p: SparsePoint, face: FaceSpec) -> bool:
    """True iff ``p`` has strictly positive mass exactly on the face."""
    return p.support == face.indices


def l1_distance(p: SparsePoint, q: SparsePoint) -> float:
    """Sum of |p_k - q_k| over the union of supports."""
    s = 0.0
    for k, m in p.items():
        s += abs(m - q.mass(k))
    for k, m in q.items():
        if k not in p:
            s += m
    return s


def sample_face_rng(face: FaceSpec, rng: np.random.Generator) -> SparsePoint:
    """Draw one flat-Dirichlet point in the relative interior of ``face``."""
    n = len(face.indices)
    while True:
        g = rng.exponential(size=n)
        masses = g / g.sum()
        # Guards against (astronomically unlikely) underflow to zero mass,
        # which would break relative-interior membership.
        if np.all(masses > 0.0):
            return SparsePoint(face.indices, (float(m) for m in masses))


def sample_face(face: FaceSpec, seed: int) -> SparsePoint:
    """Uniform point in riS_face; deterministic for a given seed."""
    return sample_face_rng(face, np.random.default_rng(seed))


def point_to_obj(p: SparsePoint) -> dict[str, float]:
    """JSON form: decimal index strings mapping to masses."""
    return {str(k): m for k, m in p.items()}


def point_from_obj(obj: Mapping[str, float]) -> SparsePoint:
    return make_point((int(k), float(v)) for k, v in obj.items())


def save_point(p: SparsePoint, path: str | Path) -> None:
    Path(path).write_text(json.dumps(point_to_obj(p), indent=2, sort_keys=True) + "\n")


def load_point(path: str | Path) -> SparsePoint:
    with Path(path).open("r", encoding="utf-8") as handle:
        return point_from_obj(json.load(handle))
