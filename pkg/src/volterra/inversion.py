"""Numerical inverses of Volterra-type operators.

Two routes are provided.  The triangular route is exact-by-structure
for the builtin operator ``example32``: its k-th image coordinate is
g(x_k) = x_k^3 + 3*C_k*x_k with C_k >= 0 depending only on earlier
coordinates, and g is strictly increasing on [0, 1], so coordinates are
recovered in order by bisection.  The fixed-point route is a damped
coordinate iteration

    x_k  <-  normalize( (1-lam)*x_k + lam * y_k / (1 + f_k(x)) )

started at the target itself, with lam halved whenever the residual
would increase.  It carries no convergence guarantee; failures raise
``NonConvergence`` with the best iterate so no wrong answer is ever
returned silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cubic import example32
from .errors import NonConvergence, ResidualTooLarge
from .generating import VolterraOperator, apply
from .simplex import SparsePoint, l1_distance, make_point


@dataclass(frozen=True)
class InversionResult:
    preimage: SparsePoint
    residual: float
    iterations: int
    method: str
    converged: bool = True

    def to_obj(self) -> dict:
        return {
            "preimage": {str(k): m for k, m in self.preimage.items()},
            "residual": self.residual,
            "iterations": self.iterations,
            "method": self.method,
            "converged": self.converged,
        }


def solve_monotone_cubic(c: float, target: float, tol: float = 1e-13) -> float:
    """Root of t^3 + 3*c*t = target on [0, 1] for c >= 0, target in [0, 1+3c].

    Bisection: the map is strictly increasing, so the bracket never
    breaks and no cancellation-prone closed form is needed.
    """
    if c < 0.0:
        raise ValueError(f"linear coefficient must be nonnegative, got {c!r}")
    if target <= 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid * mid * mid + 3.0 * c * mid < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def invert_triangular(
    y: SparsePoint, root_tol: float = 1e-13, residual_tol: float = 1e-10
) -> InversionResult:
    """Sequential inverse of ``example32`` at the target y.

    Solves x_1 = y_1^(1/3), then for each subsequent index the strictly
    increasing cubic t^3 + 3*C_k*t = y_k with
    C_k = sum_{i<k} x_i - sum_{i<j<k} x_i x_j (nonnegative on the
    simplex).  Indices with zero target mass solve to exactly zero, so
    the preimage support equals the target support.  The forward image
    of the result is checked against y; a miss raises ResidualTooLarge
    carrying the best point found.
    """
    op = example32()
    m = y.max_index
    solved: list[tuple[int, float]] = []
    s1 = 0.0  # sum of solved coordinates
    pairs = 0.0  # sum of products over solved index pairs
    for k in range(1, m + 1):
        yk = y.mass(k)
        if yk == 0.0:
            t = 0.0
        elif k == 1:
            t = float(np.cbrt(yk))
        else:
            c = s1 - pairs
            t = solve_monotone_cubic(max(c, 0.0), yk, tol=root_tol)
        if t > 0.0:
            solved.append((k, t))
        pairs += t * s1
        s1 += t
    preimage = make_point(solved)
    residual = l1_distance(apply(op, preimage), y)
    if residual > residual_tol:
        raise ResidualTooLarge(
            "triangular inverse misses the target", preimage, residual, m
        )
    return InversionResult(
        preimage=preimage, residual=residual, iterations=m, method="triangular"
    )


def invert_fixed_point(
    op: VolterraOperator,
    y: SparsePoint,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    damping: float = 0.5,
) -> InversionResult:
    """Damped fixed-point search for a preimage of y under op.

    Starts at x = y (feasible, and close to the preimage when the
    generating map is small).  Each sweep mixes the current iterate with
    y_k / (1 + f_k(x)) over the support of y and renormalizes; a sweep
    that would increase the residual is rejected and the damping factor
    halved instead.  Support never extends beyond the support of y.
    """
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")
    if not 0.0 < damping <= 1.0:
        raise ValueError(f"damping must lie in (0, 1], got {damping!r}")
    support = y.support
    lam = damping
    x = y
    residual = l1_distance(apply(op, x), y)
    best_x, best_residual = x, residual
    iterations = 0
    while residual > tol:
        if iterations >= max_iter or lam < 1e-14:
            raise NonConvergence(
                f"fixed-point inversion of {op.label!r} stalled",
                best_x,
                best_residual,
                iterations,
            )
        iterations += 1
        fvals = op.map.values(support, x)
        mixed = []
        for k, fk in zip(support, fvals):
            denom = 1.0 + float(fk)
            candidate = y.mass(k) / denom if denom > 1e-12 else x.mass(k)
            mixed.append((k, (1.0 - lam) * x.mass(k) + lam * candidate))
        total = sum(v for _, v in mixed)
        trial = make_point((k, v / total) for k, v in mixed)
        trial_residual = l1_distance(apply(op, trial), y)
        if trial_residual < residual:
            x, residual = trial, trial_residual
            if residual < best_residual:
                best_x, best_residual = x, residual
        else:
            lam *= 0.5
    return InversionResult(
        preimage=x, residual=residual, iterations=iterations, method="fixed_point"
    )


def verify_inverse(
    op: VolterraOperator, x: SparsePoint, y: SparsePoint, tol: float
) -> bool:
    """True iff applying op to x lands within tol (l1) of y."""
    return l1_distance(apply(op, x), y) <= tol
