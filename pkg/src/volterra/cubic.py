"""Cubic stochastic operators and the builtin worked operators.

A cubic stochastic operator acts through a symmetric nonnegative
coefficient family p_{ijl,k},

    (Vx)_k = sum_{i,j,l} p_{ijl,k} x_i x_j x_l,
    sum_k p_{ijl,k} = 1,   p invariant under permutations of (i, j, l),

so the image is automatically a probability vector.  Such an operator
leaves every face of the simplex invariant exactly when each output
distribution is supported inside its own triple (p_{ijl,k} = 0 for
k outside {i, j, l}); those operators additionally admit the grouped
per-coordinate form

    (Vx)_k = x_k * ( x_k^2 + 3 x_k sum_{i!=k} p_{ikk,k} x_i
                     + 3 sum_{i!=k} p_{iik,k} x_i^2
                     + 6 sum_{i<j, both!=k} p_{ijk,k} x_i x_j ),

with the weights 1/3/6 matching the number of ordered arrangements of
each sorted triple.  ``cubic_apply`` evaluates the definition as a
brute-force ordered sum and serves as the oracle for the grouped form.

Tensors are stored over a finite face; the two infinite-family builtin
operators are formula-driven instead and valid on any finite support:

    example31: f_k(x) = x_k - sum_i x_i^2          (pairwise condition holds)
    example32: f_k(x) = x_k^2 + 3*sum_{i<k} x_i
                        - 3*sum_{i<j<k} x_i x_j - 1  (bijective, pairwise
                                                      condition fails)

plus the one-dimensional counterexample V(x) = x(1 - sin(pi x)) on the
face {1, 2}, which is not injective.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    NegativeCoefficient,
    NormalizationFailure,
    NotVolterra,
    PermutationInconsistency,
    RowSumViolation,
    UndefinedTriple,
)
from .generating import NORMALIZATION_TOLERANCE, GeneratingMap, VolterraOperator
from .simplex import FaceSpec, SparsePoint

#: Tolerance for row sums and permutation consistency of tensors.
TENSOR_TOLERANCE = 1e-12

Triple = tuple[int, int, int]


@dataclass(frozen=True)
class CubicTensor:
    """Sorted-triple store of cubic coefficients.

    ``coefficients`` maps each sorted triple (i <= j <= l) to its output
    distribution {k: p_{ijl,k}}; permutation symmetry is realized by the
    sorted key.  A missing fully degenerate triple (i, i, i) defaults to
    the identity row {i: 1}; any other missing triple is an error when
    referenced.
    """

    coefficients: Mapping[Triple, Mapping[int, float]]
    dimension: int

    def outputs(self, i: int, j: int, l: int) -> Mapping[int, float]:
        key = tuple(sorted((i, j, l)))
        row = self.coefficients.get(key)
        if row is not None:
            return row
        if key[0] == key[2]:
            return {key[0]: 1.0}
        raise UndefinedTriple(key)


def _normalize_raw_triples(raw) -> Iterable[tuple[Triple, Mapping]]:
    if isinstance(raw, Mapping):
        for key, outputs in raw.items():
            yield tuple(int(v) for v in key), outputs
        return
    for item in raw:
        if isinstance(item, Mapping):
            yield tuple(int(v) for v in item["triple"]), item["outputs"]
        else:
            key, outputs = item
            yield tuple(int(v) for v in key), outputs


def validate_tensor(raw) -> CubicTensor:
    """Canonicalize raw triples into a sorted-triple tensor store.

    Accepts a mapping {(i,j,l): {k: p}}, an iterable of
    ((i,j,l), outputs) pairs, or the JSON shape
    [{"triple": [i,j,l], "outputs": {"k": p}}, ...].  Triples given in
    any index order are sorted; repeated (permuted) triples must agree
    within TENSOR_TOLERANCE.  Every output distribution must be
    nonnegative and sum to 1 within TENSOR_TOLERANCE.
    """
    store: dict[Triple, dict[int, float]] = {}
    dimension = 0
    for key, outputs in _normalize_raw_triples(raw):
        if len(key) != 3 or any(v < 1 for v in key):
            raise ValueError(f"triple must hold three positive indices, got {key}")
        triple: Triple = tuple(sorted(key))  # type: ignore[assignment]
        row: dict[int, float] = {}
        total = 0.0
        for k, p in outputs.items():
            k = int(k)
            if k < 1:
                raise ValueError(f"output index must be positive, got {k}")
            p = float(p)
            if p < 0.0:
                raise NegativeCoefficient(triple, k, p)
            total += p
            if p > 0.0:
                row[k] = p
        if abs(total - 1.0) > TENSOR_TOLERANCE:
            raise RowSumViolation(triple, total)
        if triple in store:
            previous = store[triple]
            for k in set(previous) | set(row):
                a, b = previous.get(k, 0.0), row.get(k, 0.0)
                if abs(a - b) > TENSOR_TOLERANCE:
                    raise PermutationInconsistency(triple, k, (a, b))
        else:
            store[triple] = row
        dimension = max(dimension, triple[2], max(row, default=0))
    return CubicTensor(coefficients=store, dimension=dimension)


@dataclass(frozen=True)
class VolterraCheck:
    """Face-invariance verdict; truthy iff the tensor is Volterra."""

    ok: bool
    offender: tuple[Triple, int, float] | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_volterra(p: CubicTensor) -> VolterraCheck:
    """True iff every output distribution is supported inside its triple."""
    for triple in sorted(p.coefficients):
        for k, value in sorted(p.coefficients[triple].items()):
            if k not in triple:
                return VolterraCheck(False, (triple, k, value))
    return VolterraCheck(True)


def cubic_apply(p: CubicTensor, x: SparsePoint) -> SparsePoint:
    """Evaluate the defining ordered triple sum (the oracle form).

    Iterates every ordered (i, j, l) over the support of x, so it is
    cubic in the support size; use the grouped form for anything large.
    """
    support = x.support
    if support and support[-1] > p.dimension:
        raise UndefinedTriple((support[-1],) * 3)
    masses = dict(x.items())
    rows: dict[Triple, Mapping[int, float]] = {}
    out: dict[int, float] = {}
    for i in support:
        mi = masses[i]
        for j in support:
            mij = mi * masses[j]
            for l in support:
                w = mij * masses[l]
                key = tuple(sorted((i, j, l)))
                row = rows.get(key)
                if row is None:
                    row = p.outputs(i, j, l)
                    rows[key] = row
                for k, coef in row.items():
                    out[k] = out.get(k, 0.0) + coef * w
    total = sum(out.values())
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise NormalizationFailure(total, NORMALIZATION_TOLERANCE)
    kept = sorted((k, v) for k, v in out.items() if v > 0.0)
    return SparsePoint((k for k, _ in kept), (v for _, v in kept))


@dataclass(frozen=True)
class CanonicalCubicCoeffs:
    """Grouped coefficient families of a face-invariant cubic operator.

    Per output index k: ``p_ikk[k][i]`` weights the 3*x_k*x_i term
    (triple (i,k,k)), ``p_iik[k][i]`` the 3*x_i^2 term (triple (i,i,k)),
    and ``p_ijk[k][(i,j)]`` with i < j the 6*x_i*x_j term (all indices
    distinct).  The x_k^2 term always carries coefficient 1: face
    invariance forces the (k,k,k) row to put all its mass on k.
    """

    dimension: int
    p_ikk: Mapping[int, Mapping[int, float]]
    p_iik: Mapping[int, Mapping[int, float]]
    p_ijk: Mapping[int, Mapping[tuple[int, int], float]]

    def bracket(self, k: int, x: SparsePoint) -> float:
        """The grouped factor multiplying x_k in (Vx)_k."""
        xk = x.mass(k)
        others = [(i, m) for i, m in x.items() if i != k]
        fam_ikk = self.p_ikk.get(k, {})
        fam_iik = self.p_iik.get(k, {})
        fam_ijk = self.p_ijk.get(k, {})
        linear = sum(fam_ikk.get(i, 0.0) * m for i, m in others)
        squares = sum(fam_iik.get(i, 0.0) * m * m for i, m in others)
        cross = 0.0
        for (i, mi), (j, mj) in combinations(others, 2):
            c = fam_ijk.get((i, j), 0.0)
            if c:
                cross += c * mi * mj
        return xk * xk + 3.0 * xk * linear + 3.0 * squares + 6.0 * cross


def tensor_to_canonical(p: CubicTensor) -> CanonicalCubicCoeffs:
    """Extract the grouped families from a face-invariant tensor.

    Requires every non-degenerate triple within the tensor's dimension
    to be defined (UndefinedTriple otherwise) and the tensor to be
    Volterra (NotVolterra otherwise).
    """
    check = is_volterra(p)
    if not check:
        raise NotVolterra(*check.offender)
    n = p.dimension
    p_ikk: dict[int, dict[int, float]] = {}
    p_iik: dict[int, dict[int, float]] = {}
    p_ijk: dict[int, dict[tuple[int, int], float]] = {}
    for k in range(1, n + 1):
        for i in range(1, n + 1):
            if i == k:
                continue
            c = p.outputs(i, k, k).get(k, 0.0)
            if c:
                p_ikk.setdefault(k, {})[i] = c
            c = p.outputs(i, i, k).get(k, 0.0)
            if c:
                p_iik.setdefault(k, {})[i] = c
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                if k in (i, j):
                    continue
                c = p.outputs(i, j, k).get(k, 0.0)
                if c:
                    p_ijk.setdefault(k, {})[(i, j)] = c
    return CanonicalCubicCoeffs(dimension=n, p_ikk=p_ikk, p_iik=p_iik, p_ijk=p_ijk)


def canonical_apply(c: CanonicalCubicCoeffs, x: SparsePoint) -> SparsePoint:
    """Evaluate the grouped per-coordinate form of a cubic operator."""
    if x.support and x.support[-1] > c.dimension:
        raise UndefinedTriple((x.support[-1],) * 3)
    raw = [(k, x.mass(k) * c.bracket(k, x)) for k in x.support]
    total = sum(v for _, v in raw)
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise NormalizationFailure(total, NORMALIZATION_TOLERANCE)
    kept = [(k, v) for k, v in raw if v > 0.0]
    return SparsePoint((k for k, _ in kept), (v for _, v in kept))


def operator_from_tensor(p: CubicTensor) -> VolterraOperator:
    """Wrap a face-invariant tensor as a generating-map operator.

    The generating map is the grouped bracket minus one, which is exact
    at vertices (bracket(e^(k)) = 1) and defined for every index of the
    tensor's face.
    """
    canon = tensor_to_canonical(p)
    domain = FaceSpec.prefix(p.dimension)

    def batch(ks: Sequence[int], x: SparsePoint) -> list[float]:
        return [canon.bracket(k, x) - 1.0 for k in ks]

    gmap = GeneratingMap(
        evaluate=lambda k, x: batch((k,), x)[0],
        batch=batch,
        declared_domain=domain,
    )
    return VolterraOperator(gmap, label=f"cubic_tensor(n={p.dimension})")


@dataclass(frozen=True)
class QuadraticTable:
    """Coefficients q_{ij,k} of a collapsed degree-two form."""

    pairs: Mapping[tuple[int, int], Mapping[int, float]]
    dimension: int

    def image(self, x: SparsePoint) -> SparsePoint:
        out: dict[int, float] = {}
        support = x.support
        for a in range(len(support)):
            i = support[a]
            mi = x.mass(i)
            for b in range(a, len(support)):
                j = support[b]
                w = mi * x.mass(j) * (1.0 if i == j else 2.0)
                for k, q in self.pairs.get((i, j), {}).items():
                    out[k] = out.get(k, 0.0) + q * w
        kept = sorted((k, v) for k, v in out.items() if v > 0.0)
        return SparsePoint((k for k, _ in kept), (v for _, v in kept))


def reduce_if_index_independent(
    p: CubicTensor, samples: int = 100, seed: int = 0
) -> QuadraticTable | None:
    """Collapse p_{ijl,k} to q_{ij,k} when it does not depend on l.

    Since sum_l x_l = 1 on the simplex, such a tensor acts as the
    degree-two form sum_{i,j} q_{ij,k} x_i x_j.  Returns None when some
    value varies with l (beyond TENSOR_TOLERANCE) or when the tensor is
    not fully defined over its face.  The collapsed image is verified
    against ``cubic_apply`` on sampled points before returning.
    """
    n = p.dimension
    table: dict[tuple[int, int], dict[int, float]] = {}
    try:
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                reference = dict(p.outputs(i, j, 1))
                for l in range(2, n + 1):
                    row = p.outputs(i, j, l)
                    for k in set(reference) | set(row):
                        if abs(reference.get(k, 0.0) - row.get(k, 0.0)) > TENSOR_TOLERANCE:
                            return None
                table[(i, j)] = reference
    except UndefinedTriple:
        return None
    result = QuadraticTable(pairs=table, dimension=n)

    rng = np.random.default_rng(seed)
    face = FaceSpec.prefix(n)
    from .simplex import l1_distance, sample_face_rng

    for _ in range(samples):
        x = sample_face_rng(face, rng)
        if l1_distance(cubic_apply(p, x), result.image(x)) > 1e-10:
            raise ArithmeticError(
                "collapsed quadratic form disagrees with the triple sum"
            )
    return result


# ---------------------------------------------------------------------------
# Builtin operators
# ---------------------------------------------------------------------------


def example31(dimension: int | None = None) -> VolterraOperator:
    """The cubic operator with generating map f_k(x) = x_k - sum_i x_i^2.

    Satisfies the pairwise bijectivity condition: for any two points the
    pair functional equals -sum_i (x_i - y_i)^2 <= 0.  With ``dimension``
    given, the operator is restricted to the face 1..dimension (matching
    its explicit tensor from :func:`example31_tensor`); otherwise it is
    valid on every finite support.
    """
    domain = None if dimension is None else FaceSpec.prefix(dimension)

    def batch(ks: Sequence[int], x: SparsePoint) -> list[float]:
        sq = sum(m * m for _, m in x.items())
        return [x.mass(k) - sq for k in ks]

    gmap = GeneratingMap(
        evaluate=lambda k, x: batch((k,), x)[0], batch=batch, declared_domain=domain
    )
    return VolterraOperator(gmap, label="example31")


def example31_tensor(dimension: int) -> CubicTensor:
    """Explicit tensor of :func:`example31` over the face 1..dimension.

    For pairwise distinct i, j, k the coefficients are p_{ikk,k} = 1,
    p_{iik,k} = 0 and p_{ijk,k} = 1/3; all rows are supported inside
    their triples.
    """
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    third = 1.0 / 3.0
    raw: dict[Triple, dict[int, float]] = {}
    for a in range(1, dimension + 1):
        raw[(a, a, a)] = {a: 1.0}
        for b in range(a + 1, dimension + 1):
            raw[(a, a, b)] = {a: 1.0}
            raw[(a, b, b)] = {b: 1.0}
            for c in range(b + 1, dimension + 1):
                raw[(a, b, c)] = {a: third, b: third, c: third}
    return validate_tensor(raw)


def _prefix_sums(x: SparsePoint) -> tuple[tuple[int, ...], list[float], list[float]]:
    """Support plus cumulative mass and mass-square sums before each slot."""
    support = x.support
    cum = [0.0]
    cum_sq = [0.0]
    for _, m in x.items():
        cum.append(cum[-1] + m)
        cum_sq.append(cum_sq[-1] + m * m)
    return support, cum, cum_sq


def example32() -> VolterraOperator:
    """The triangular cubic bijection of the simplex.

    Coordinates are ordered: (Vx)_k = x_k*(x_k^2 + 3*C_k(x)) where
    C_k(x) = sum_{i<k} x_i - sum_{i<j<k} x_i x_j depends only on earlier
    coordinates, so

        f_k(x) = x_k^2 + 3*sum_{i<k} x_i - 3*sum_{i<j<k} x_i x_j - 1.

    The operator is a bijection of the simplex (each coordinate solves a
    strictly increasing cubic given the earlier ones) yet the pairwise
    condition fails at the vertex pair (e^(1), e^(2)) with value 1.
    """

    def batch(ks: Sequence[int], x: SparsePoint) -> list[float]:
        support, cum, cum_sq = _prefix_sums(x)
        out = []
        for k in ks:
            pos = bisect_left(support, k)
            s1 = cum[pos]
            pairs = (s1 * s1 - cum_sq[pos]) / 2.0
            xk = x.mass(k)
            out.append(xk * xk + 3.0 * s1 - 3.0 * pairs - 1.0)
        return out

    gmap = GeneratingMap(evaluate=lambda k, x: batch((k,), x)[0], batch=batch)
    return VolterraOperator(gmap, label="example32")


def image_tail_sum(k: int, x: SparsePoint) -> float:
    """Closed form of the image tail sum_{i>=k} (Vx)_i for example32.

    Evaluates

        T_k^3 + 3*P_k*T_k^2 + 3*Q_k*T_k,

    with T_k = sum_{i>=k} x_i, P_k = sum_{i<k} x_i and
    Q_k = sum_{i<=j<k} x_i x_j (diagonal included).  The telescoping
    identity  tail(k) = (Vx)_k + tail(k+1)  recovers, term by term, that
    the image masses of example32 sum to 1.
    """
    if k < 1:
        raise ValueError("index must be >= 1")
    support, cum, cum_sq = _prefix_sums(x)
    pos = bisect_left(support, k)
    prefix = cum[pos]
    tail = math.fsum(m for i, m in x.items() if i >= k)
    q = (prefix * prefix + cum_sq[pos]) / 2.0
    return tail**3 + 3.0 * prefix * tail * tail + 3.0 * q * tail


def prefix_positivity_value(x: SparsePoint, n: int) -> float:
    """The nonnegative combination sum_{i<=n} x_i - sum_{i<j<=n} x_i x_j.

    Evaluated through its telescoped form

        sum_{k<n} x_k * (1 - sum_{k<i<=n} x_i) + x_n,

    every term of which is nonnegative on the simplex; the direct
    double sum is computed as a cross-check and must agree to 1e-12.
    This is the quantity 3*C_k(x) / 3 guaranteeing example32 images stay
    nonnegative.
    """
    if n < 1:
        raise ValueError("index must be >= 1")
    in_range = [(i, m) for i, m in x.items() if i <= n]

    direct = 0.0
    running = 0.0
    for _, m in in_range:
        direct += m - m * running
        running += m

    telescoped = x.mass(n)
    tail_after = 0.0
    for i, m in reversed(in_range):
        if i < n:
            telescoped += m * (1.0 - tail_after)
        tail_after += m
    if abs(direct - telescoped) > 1e-12:
        raise ArithmeticError(
            f"telescoped form {telescoped!r} disagrees with direct sum {direct!r}"
        )
    return telescoped


def _sinpi(t: float) -> float:
    """sin(pi*t) with exact zeros at integers and exact 1 at half-integers."""
    n = math.floor(t)
    r = t - n
    if r > 0.5:
        r = 1.0 - r
    v = math.sin(math.pi * r)
    return -v if n % 2 else v


def sine_example() -> VolterraOperator:
    """The non-injective map V(x) = x(1 - sin(pi x)) on the face {1, 2}.

    In simplex coordinates f_1(x) = -sin(pi x_1) and
    f_2(x) = x_1 sin(pi x_1) / x_2, extended by continuity to the value
    pi at the vertex e^(1).  The weighted balance holds by construction,
    but f_1 = -1 exactly at the barycenter, so the strict interior bound
    fails there: the barycenter and e^(2) share the image e^(2).
    """
    domain = FaceSpec.of((1, 2))

    def batch(ks: Sequence[int], x: SparsePoint) -> list[float]:
        x1 = x.mass(1)
        x2 = x.mass(2)
        s = _sinpi(x1)
        out = []
        for k in ks:
            if k == 1:
                out.append(-s)
            elif k == 2:
                out.append(x1 * s / x2 if x2 > 0.0 else math.pi)
            else:
                out.append(0.0)
        return out

    gmap = GeneratingMap(
        evaluate=lambda k, x: batch((k,), x)[0], batch=batch, declared_domain=domain
    )
    return VolterraOperator(gmap, label="sine")


def tensor_to_obj(p: CubicTensor) -> list[dict]:
    return [
        {"triple": list(triple), "outputs": {str(k): v for k, v in sorted(row.items())}}
        for triple, row in sorted(p.coefficients.items())
    ]


def save_tensor(p: CubicTensor, path: str | Path) -> None:
    Path(path).write_text(json.dumps(tensor_to_obj(p), indent=2) + "\n")


def load_tensor(path: str | Path) -> CubicTensor:
    """Read and validate the JSON triple list format."""
    with Path(path).open("r", encoding="utf-8") as handle:
        return validate_tensor(json.load(handle))
