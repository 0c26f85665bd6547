"""Equal-angle (isoclinic) rotations and their invariant planes.

When every plane of a rotation turns by the same angle ``alpha`` the matrix
collapses to ``cos(alpha) I + sin(alpha) J`` with ``J = sum(b a^T - a b^T)``.
``J`` is skew with ``J @ J = -I``, so for any nonzero ``u`` the plane
span{u, Ju} is invariant, whatever ``alpha`` is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (
    DimensionError,
    _frozen,
    as_square,
    as_vector,
    check_orthonormal,
    gram_schmidt,
    matvec,
    norm,
)
from .rotation import PlaneSpec, RotationSpec, SpecError, plane_generator, rotation_nd

INVARIANCE_TOL = 1e-9
ANGLE_EQ_TOL = 1e-12
GENERAL_POSITION_MIN = 0.1
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class Plane:
    """An ordered orthonormal pair spanning a 2-D subspace."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        u, v = as_vector(self.u, "u"), as_vector(self.v, "v")
        check_orthonormal([u, v], ["u", "v"])
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)


def build_J(a, b, c, d) -> np.ndarray:
    """``b a^T - a b^T + d c^T - c d^T`` for an orthonormal frame of R^4."""
    frame = [as_vector(x, name) for x, name in zip((a, b, c, d), "abcd")]
    if any(x.size != 4 for x in frame):
        raise DimensionError("build_J needs four vectors in R^4")
    check_orthonormal(frame, list("abcd"))
    a, b, c, d = frame
    return plane_generator(a, b) + plane_generator(c, d)


def complex_structure(planes: Sequence[PlaneSpec]) -> np.ndarray:
    """``sum_k (b_k a_k^T - a_k b_k^T)`` over the given planes."""
    if not planes:
        raise ValueError("need at least one plane")
    J = np.zeros((planes[0].dim, planes[0].dim))
    for p in planes:
        J += plane_generator(p.a, p.b)
    return J


def isoclinic_rotation(frame: Sequence, alpha: float) -> np.ndarray:
    """``cos(alpha) I + sin(alpha) J`` for the frame ``(a, b, c, d)``."""
    if len(frame) != 4:
        raise DimensionError(f"frame must hold four vectors, got {len(frame)}")
    J = build_J(*frame)
    return math.cos(alpha) * np.eye(4) + math.sin(alpha) * J


def invariant_plane(u, J) -> Plane:
    """The plane span{u, Ju}, returned as ``(u/|u|, Ju/|Ju|)``."""
    u = as_vector(u, "u")
    J = as_square(J, "J")
    if J.shape[0] != u.size:
        raise DimensionError(f"J is {J.shape[0]}x{J.shape[0]} but u has dim {u.size}")
    length = norm(u)
    if length < 1e-12:
        raise ValueError(f"u is (numerically) zero: |u| = {length:.3e}")
    Ju = matvec(J, u)
    return Plane(u / length, Ju / norm(Ju))


def invariance_residuals(R, U, V) -> np.ndarray:
    """Per-plane residual of ``R`` leaving span{u_i, v_i} invariant.

    ``U`` and ``V`` hold orthonormal pairs as rows.  The residual of a plane is
    the larger of |Ru - P Ru| and |Rv - P Rv|, ``P`` the projector onto it.
    """
    R = as_square(R, "R")
    U = np.atleast_2d(np.asarray(U, dtype=np.float64))
    V = np.atleast_2d(np.asarray(V, dtype=np.float64))
    if U.shape != V.shape or U.shape[1] != R.shape[0]:
        raise DimensionError(
            f"R is {R.shape[0]}x{R.shape[0]}, plane arrays have shapes {U.shape} and {V.shape}"
        )
    out = []
    for W in (U @ R.T, V @ R.T):
        proj = np.sum(W * U, axis=1)[:, None] * U + np.sum(W * V, axis=1)[:, None] * V
        out.append(np.linalg.norm(W - proj, axis=1))
    return np.maximum(out[0], out[1])


def is_invariant_plane(R, plane: Plane, tol: float = INVARIANCE_TOL) -> bool:
    R = as_square(R, "R")
    if R.shape[0] != plane.u.size:
        raise DimensionError(f"R is {R.shape[0]}x{R.shape[0]} but plane lives in R^{plane.u.size}")
    return bool(invariance_residuals(R, plane.u, plane.v)[0] < tol)


def _angle_gap(x: float, y: float) -> float:
    d = math.fmod(x - y, TWO_PI)
    d = abs(d)
    return min(d, TWO_PI - d)


def angles_equal(x: float, y: float, tol: float = ANGLE_EQ_TOL) -> bool:
    """Equality of two angles modulo 2*pi."""
    return _angle_gap(x, y) <= tol


def sample_general_position_planes(spec: RotationSpec, count: int,
                                   rng: np.random.Generator,
                                   min_component: float = GENERAL_POSITION_MIN):
    """Random orthonormal pairs whose vectors reach into every plane of ``spec``.

    Pairs are resampled until both spanning vectors have a component of norm
    above ``min_component`` in each plane.  Returns two ``(count, n)`` arrays.
    """
    n = spec.dim
    bases = [np.stack([p.a, p.b]) for p in spec.planes]
    U = np.empty((count, n))
    V = np.empty((count, n))
    filled = 0
    while filled < count:
        u, v = gram_schmidt(list(rng.standard_normal((2, n))))
        if all(
            np.linalg.norm(B @ w) > min_component for B in bases for w in (u, v)
        ):
            U[filled], V[filled] = u, v
            filled += 1
    return U, V


@dataclass(frozen=True, eq=False)
class InvariantPlaneReport:
    """Outcome of :func:`classify_invariant_planes`.

    ``kind`` is ``"all_J_planes"`` when all angles agree, ``"none_extra"``
    otherwise.  For ``none_extra`` the uniqueness of the rotation planes is
    supported by random sampling only: ``falsification_passed`` counts sampled
    planes that turned out invariant (expected 0).
    """

    kind: str
    angles: tuple[float, ...]
    J: np.ndarray | None
    witness_planes: tuple[Plane, ...]
    witness_residuals: tuple[float, ...]
    falsification_samples: int = 0
    falsification_passed: int = 0
    notes: tuple[str, ...] = field(default=())


def _real_eigen(angle: float) -> bool:
    return angles_equal(angle, 0.0) or angles_equal(angle, math.pi)


def classify_invariant_planes(spec: RotationSpec, samples: int = 1000, seed: int = 0,
                              tol: float = INVARIANCE_TOL) -> InvariantPlaneReport:
    """Classify the invariant planes of a rotation whose planes fill the space.

    Equal angles: every span{u, Ju} is invariant; ``samples`` such planes are
    generated from random ``u`` and verified.  Otherwise the rotation planes
    themselves are the witnesses and ``samples`` random general-position
    planes are checked for (non-)invariance.
    """
    if spec.axis is not None or 2 * len(spec.planes) != spec.dim:
        raise SpecError(
            f"classification needs planes covering all of R^{spec.dim} with no fixed "
            f"directions; got {len(spec.planes)} plane(s)"
            + (" and an axis" if spec.axis is not None else "")
        )
    if samples < 0:
        raise ValueError("samples must be non-negative")
    rng = np.random.default_rng(seed)
    R = rotation_nd(spec)
    angles = spec.angles
    notes: list[str] = []

    if all(angles_equal(t, angles[0]) for t in angles):
        J = _frozen(complex_structure(spec.planes))
        if _real_eigen(angles[0]):
            sign = "+I" if angles_equal(angles[0], 0.0) else "-I"
            notes.append(
                f"degenerate isoclinic case: R = {sign}, so every 2-D subspace is invariant"
            )
        witnesses = []
        while len(witnesses) < samples:
            u = rng.standard_normal(spec.dim)
            if norm(u) < 1e-12:
                continue
            witnesses.append(invariant_plane(u, J))
        residuals = _plane_residuals(R, witnesses)
        return InvariantPlaneReport(
            "all_J_planes", angles, J, tuple(witnesses), residuals, notes=tuple(notes)
        )

    witnesses = [Plane(p.a, p.b) for p in spec.planes]
    residuals = _plane_residuals(R, witnesses)
    passed = 0
    if samples:
        U, V = sample_general_position_planes(spec, samples, rng)
        passed = int(np.count_nonzero(invariance_residuals(R, U, V) < tol))
    for i in range(len(angles)):
        for j in range(i + 1, len(angles)):
            x, y = angles[i], angles[j]
            if angles_equal(x, -y) or (_real_eigen(x) and _real_eigen(y)):
                notes.append(
                    f"planes {i} and {j} share eigenvalues (angles {x:.6g}, {y:.6g}); "
                    "invariant planes mixing them exist but form a null set "
                    "that random sampling does not reach"
                )
    notes.append(
        "uniqueness of the rotation planes is supported by random sampling, not proved"
    )
    return InvariantPlaneReport(
        "none_extra", angles, None, tuple(witnesses), residuals,
        falsification_samples=samples, falsification_passed=passed, notes=tuple(notes),
    )


def _plane_residuals(R: np.ndarray, planes: Sequence[Plane]) -> tuple[float, ...]:
    if not planes:
        return ()
    U = np.stack([p.u for p in planes])
    V = np.stack([p.v for p in planes])
    return tuple(float(r) for r in invariance_residuals(R, U, V))
