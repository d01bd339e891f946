"""Trajectory iteration and fixed-point diagnostics.

Repeated application of a valid operator stays on the simplex and never
grows the support, so trajectories are exact sequences of sparse
points.  Convergence is only declared after ten consecutive steps of
l1 size below tolerance, guarding against slow oscillation; the search
for fixed points is heuristic (candidates are verified, completeness is
not claimed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TrajectoryError, VolterraError
from .generating import VolterraOperator, apply, is_fixed_point
from .simplex import FaceSpec, SparsePoint, l1_distance, sample_face_rng

#: Step size below which a trajectory step counts toward convergence.
STEP_TOLERANCE = 1e-12
#: Consecutive sub-tolerance steps required to declare convergence.
SETTLE_STEPS = 10


@dataclass(frozen=True)
class Trajectory:
    points: tuple[SparsePoint, ...]
    operator_label: str
    steps: int
    converged: bool
    limit: SparsePoint | None

    def to_records(self) -> list[dict]:
        return [
            {"t": t, "x": {str(k): m for k, m in p.items()}}
            for t, p in enumerate(self.points)
        ]


def iterate(op: VolterraOperator, x0: SparsePoint, steps: int) -> Trajectory:
    """Apply op repeatedly from x0, stopping early once settled.

    Application errors are wrapped in TrajectoryError carrying the
    failing step index.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    points = [x0]
    quiet = 0
    converged = False
    for t in range(steps):
        try:
            nxt = apply(op, points[-1])
        except VolterraError as exc:
            raise TrajectoryError(t, exc) from exc
        moved = l1_distance(nxt, points[-1])
        points.append(nxt)
        quiet = quiet + 1 if moved < STEP_TOLERANCE else 0
        if quiet >= SETTLE_STEPS:
            converged = True
            break
    return Trajectory(
        points=tuple(points),
        operator_label=op.label,
        steps=len(points) - 1,
        converged=converged,
        limit=points[-1] if converged else None,
    )


def detect_fixed_points_on_face(
    op: VolterraOperator,
    face: FaceSpec,
    starts: int = 20,
    seed: int = 0,
    tol: float = 1e-9,
    max_steps: int = 500,
) -> list[SparsePoint]:
    """Verified fixed-point candidates found by iterating sampled starts.

    The face's vertices and barycenter are always probed in addition to
    the sampled starting points (interior fixed points such as uniform
    ones are often repelling and unreachable by iteration, but the
    barycenter probe catches the symmetric ones exactly).  Candidates
    are deduplicated within an l1 radius of 10*tol and each returned
    point passes ``is_fixed_point`` at tol.
    """
    if starts < 1:
        raise ValueError("starts must be >= 1")
    rng = np.random.default_rng(seed)
    probes: list[SparsePoint] = list(face.vertices())
    probes.append(face.barycenter())
    probes.extend(sample_face_rng(face, rng) for _ in range(starts))

    found: list[SparsePoint] = []

    def consider(candidate: SparsePoint) -> None:
        if not is_fixed_point(op, candidate, tol):
            return
        for existing in found:
            if l1_distance(existing, candidate) <= 10.0 * tol:
                return
        found.append(candidate)

    for start in probes:
        if is_fixed_point(op, start, tol):
            consider(start)
            continue
        trajectory = iterate(op, start, max_steps)
        if trajectory.converged and trajectory.limit is not None:
            consider(trajectory.limit)
    return found
