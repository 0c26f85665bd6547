"""Rotation matrices assembled from planes of rotation and their angles.

Each plane is given by an ordered orthonormal pair ``(a, b)``.  A positive
angle turns ``a`` toward ``b``; in that plane the map contributes

    cos(angle) * (a a^T + b b^T) + sin(angle) * (b a^T - a b^T)

and all directions orthogonal to every plane are left fixed.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field
from typing import Sequence

import numpy as np

from .determinant import det_lu
from .linalg import (
    ORTHO_TOL,
    DimensionError,
    _frozen,
    as_square,
    as_vector,
    check_orthonormal,
    gram_schmidt,
    matmul_cayley,
    norm,
    orthonormality_defect,
    outer,
    transpose,
)

ROTATION_ORTHO_TOL = 1e-9
ROTATION_DET_TOL = 1e-8

J2 = _frozen(np.array([[0.0, -1.0], [1.0, 0.0]]))


class SpecError(ValueError):
    """A rotation specification is inconsistent."""


def plane_projector(a, b) -> np.ndarray:
    """``a a^T + b b^T``: orthogonal projector onto span{a, b} for orthonormal a, b."""
    return outer(a, a) + outer(b, b)


def plane_generator(a, b) -> np.ndarray:
    """``b a^T - a b^T``: quarter turn inside span{a, b}, zero on its complement."""
    return outer(b, a) - outer(a, b)


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.array([
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ])


@dataclass(frozen=True, eq=False)
class PlaneSpec:
    """One plane of rotation and its angle in radians.

    Unless ``strict`` is set, ``a`` and ``b`` only need to be independent: they
    are orthonormalized with Gram-Schmidt, keeping the direction of ``a`` and
    the side of ``b``.  With ``strict=True`` a pair that is not orthonormal
    within ``ORTHO_TOL`` is rejected.
    """

    a: np.ndarray
    b: np.ndarray
    angle: float
    strict: InitVar[bool] = False

    def __post_init__(self, strict: bool) -> None:
        a = as_vector(self.a, "a")
        b = as_vector(self.b, "b")
        if a.size != b.size:
            raise DimensionError(f"plane vectors have dims {a.size} and {b.size}")
        if a.size < 2:
            raise DimensionError("a plane needs ambient dimension >= 2")
        angle = float(self.angle)
        if not math.isfinite(angle):
            raise ValueError("angle must be finite")
        if strict:
            check_orthonormal([a, b], ["a", "b"])
        else:
            a, b = gram_schmidt([a, b])
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "angle", angle)

    @property
    def dim(self) -> int:
        return self.a.size

    def with_angle(self, angle: float) -> "PlaneSpec":
        return PlaneSpec(self.a, self.b, angle, strict=True)


@dataclass(frozen=True, eq=False)
class RotationSpec:
    """Dimension, mutually orthogonal planes, and an optional fixed axis.

    ``planes`` may hold PlaneSpec objects or ``(a, b, angle)`` tuples; tuples
    go through the same repair rule as PlaneSpec.  The axis, when present, is
    normalized (or checked for unit length when ``strict``) and must be
    orthogonal to every plane.
    """

    dim: int
    planes: tuple[PlaneSpec, ...] = ()
    axis: np.ndarray | None = None
    strict: InitVar[bool] = False
    _fixed_axis: np.ndarray | None = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self, strict: bool) -> None:
        n = int(self.dim)
        if n < 1:
            raise SpecError(f"dim must be positive, got {self.dim}")
        planes = tuple(
            p if isinstance(p, PlaneSpec) else PlaneSpec(*p, strict=strict)
            for p in self.planes
        )
        for k, p in enumerate(planes):
            if p.dim != n:
                raise SpecError(f"plane {k} lives in dim {p.dim}, spec dim is {n}")
        if 2 * len(planes) > n:
            raise SpecError(f"{len(planes)} planes do not fit in dimension {n}")

        vectors: list[np.ndarray] = []
        names: list[str] = []
        for k, p in enumerate(planes):
            vectors += [p.a, p.b]
            names += [f"a{k}", f"b{k}"]

        axis = self.axis
        if axis is not None:
            axis = as_vector(axis, "axis")
            if axis.size != n:
                raise SpecError(f"axis has dim {axis.size}, spec dim is {n}")
            if 2 * len(planes) + 1 > n:
                raise SpecError(f"no room for an axis next to {len(planes)} planes in dim {n}")
            if strict:
                if abs(norm(axis) - 1.0) > ORTHO_TOL:
                    raise SpecError(f"axis has norm {norm(axis):.12g}, expected 1 (strict mode)")
            else:
                length = norm(axis)
                if length == 0.0:
                    raise SpecError("axis is the zero vector")
                axis = _frozen(axis / length)
            vectors.append(axis)
            names.append("axis")

        if len(vectors) > 1:
            deviation, (i, j) = orthonormality_defect(vectors)
            if deviation > ORTHO_TOL:
                raise SpecError(
                    f"planes/axis are not mutually orthogonal: {names[i]} . {names[j]} "
                    f"= {deviation:.3e} (tolerance {ORTHO_TOL:.0e})"
                )

        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "planes", planes)
        object.__setattr__(self, "axis", axis)
        fixed = axis
        if fixed is None and n == 2 * len(planes) + 1:
            fixed = complete_axis(vectors, n)
        object.__setattr__(self, "_fixed_axis", fixed)

    @property
    def fixed_axis(self) -> np.ndarray | None:
        """The supplied axis or, for n = 2p + 1, the completed one."""
        return self._fixed_axis

    @property
    def angles(self) -> tuple[float, ...]:
        return tuple(p.angle for p in self.planes)

    def with_angles(self, angles: Sequence[float]) -> "RotationSpec":
        if len(angles) != len(self.planes):
            raise SpecError(f"expected {len(self.planes)} angles, got {len(angles)}")
        planes = tuple(p.with_angle(t) for p, t in zip(self.planes, angles))
        return RotationSpec(self.dim, planes, self.axis, strict=True)


def complete_axis(vectors: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Unit vector orthogonal to the ``n - 1`` orthonormal ``vectors``.

    Each standard basis vector is orthogonalized against ``vectors``; the
    candidate with the largest residual is kept.
    """
    if len(vectors) != n - 1:
        raise SpecError(f"need {n - 1} vectors to complete an axis in dim {n}, got {len(vectors)}")
    best: np.ndarray | None = None
    best_norm = -1.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        w = e
        for _ in range(2):
            for q in vectors:
                w = w - float(q @ w) * q
        r = norm(w)
        if r > best_norm:
            best, best_norm = w, r
    return _frozen(best / best_norm)


def rotation_2d(angle: float) -> np.ndarray:
    """``cos(angle) I + sin(angle) J`` with ``J`` the quarter turn."""
    angle = float(angle)
    if not math.isfinite(angle):
        raise ValueError("angle must be finite")
    return math.cos(angle) * np.eye(2) + math.sin(angle) * J2


def rotation_3d(a, b, angle: float, strict: bool = False) -> np.ndarray:
    """Rotation of R^3 by ``angle`` in span{a, b}; the axis ``a x b`` is fixed."""
    a, b = as_vector(a, "a"), as_vector(b, "b")
    if a.size != 3 or b.size != 3:
        raise DimensionError(f"rotation_3d needs vectors in R^3, got dims {a.size} and {b.size}")
    plane = PlaneSpec(a, b, angle, strict=strict)
    c = _cross(plane.a, plane.b)
    return (
        math.cos(plane.angle) * plane_projector(plane.a, plane.b)
        + math.sin(plane.angle) * plane_generator(plane.a, plane.b)
        + outer(c, c)
    )


def rodrigues_apply(c, angle: float, x) -> np.ndarray:
    """Rotate ``x`` about the unit axis ``c`` by ``angle`` (right-hand rule)."""
    c, x = as_vector(c, "c"), as_vector(x, "x")
    if c.size != 3 or x.size != 3:
        raise DimensionError(f"rodrigues_apply works in R^3, got dims {c.size} and {x.size}")
    length = norm(c)
    if abs(length - 1.0) > ORTHO_TOL:
        raise ValueError(f"axis must be a unit vector, |c| = {length:.12g}")
    ca, sa = math.cos(angle), math.sin(angle)
    return ca * x + (1.0 - ca) * float(c @ x) * c + sa * _cross(c, x)


def cross_matrix(a, b) -> np.ndarray:
    """``b a^T - a b^T``, which acts as ``x -> (a x b) x x`` for orthonormal a, b."""
    a, b = as_vector(a, "a"), as_vector(b, "b")
    if a.size != 3 or b.size != 3:
        raise DimensionError(f"cross_matrix needs vectors in R^3, got dims {a.size} and {b.size}")
    return plane_generator(a, b)


def rotation_4d(a, b, c, d, alpha: float, beta: float) -> np.ndarray:
    """Double rotation of R^4: ``alpha`` in span{a, b}, ``beta`` in span{c, d}.

    ``beta = 0`` gives a simple rotation fixing span{c, d} pointwise.
    """
    frame = [as_vector(v, name) for v, name in zip((a, b, c, d), "abcd")]
    if any(v.size != 4 for v in frame):
        raise DimensionError("rotation_4d needs four vectors in R^4")
    check_orthonormal(frame, list("abcd"))
    a, b, c, d = frame
    return (
        math.cos(alpha) * plane_projector(a, b)
        + math.sin(alpha) * plane_generator(a, b)
        + math.cos(beta) * plane_projector(c, d)
        + math.sin(beta) * plane_generator(c, d)
    )


def _fixed_complement(spec: RotationSpec) -> np.ndarray:
    F = np.eye(spec.dim)
    for p in spec.planes:
        F -= plane_projector(p.a, p.b)
    if spec.fixed_axis is not None:
        F -= outer(spec.fixed_axis, spec.fixed_axis)
    return F


def rotation_nd(spec: RotationSpec) -> np.ndarray:
    """Matrix of the rotation described by ``spec``.

    Sum over planes of the cos/sin terms, plus ``c c^T`` for the fixed axis,
    plus the projector onto whatever directions remain unspecified.
    """
    R = np.zeros((spec.dim, spec.dim))
    for p in spec.planes:
        R += math.cos(p.angle) * plane_projector(p.a, p.b)
        R += math.sin(p.angle) * plane_generator(p.a, p.b)
    if spec.fixed_axis is not None:
        R += outer(spec.fixed_axis, spec.fixed_axis)
    R += _fixed_complement(spec)
    return R


def apply_vector_form(spec: RotationSpec, x) -> np.ndarray:
    """Rotate ``x`` without forming the matrix.

    For each plane, ``y`` is the projection of ``x`` onto it and ``z`` is ``y``
    turned by a quarter turn inside the plane; the image is
    ``sum(cos * y + sin * z)`` plus the untouched remainder of ``x``.
    """
    x = as_vector(x, "x")
    if x.size != spec.dim:
        raise DimensionError(f"x has dim {x.size}, spec dim is {spec.dim}")
    out = np.zeros(spec.dim)
    rest = x.copy()
    for p in spec.planes:
        xa, xb = float(p.a @ x), float(p.b @ x)
        y = xa * p.a + xb * p.b
        z = xa * p.b - xb * p.a
        out += math.cos(p.angle) * y + math.sin(p.angle) * z
        rest -= y
    c = spec.fixed_axis
    if c is not None:
        along = float(c @ x) * c
        out += along
        rest -= along
    return out + rest


@dataclass(frozen=True)
class RotationReport:
    ortho_residual: float
    det_value: float
    is_rotation: bool


def verify_rotation(R) -> RotationReport:
    """Check ``R^T R = I`` (max entry error) and ``det R = 1`` (by LU)."""
    R = as_square(R, "R")
    residual = float(np.max(np.abs(matmul_cayley(transpose(R), R) - np.eye(R.shape[0]))))
    det_value = det_lu(R)
    ok = residual < ROTATION_ORTHO_TOL and abs(det_value - 1.0) < ROTATION_DET_TOL
    return RotationReport(residual, det_value, bool(ok))


def angle_between(x, y) -> float:
    """Angle in [0, pi] between two nonzero vectors."""
    x, y = as_vector(x, "x"), as_vector(y, "y")
    nx, ny = norm(x), norm(y)
    if nx == 0.0 or ny == 0.0:
        raise ValueError("angle with the zero vector is undefined")
    cos = max(-1.0, min(1.0, float(x @ y) / (nx * ny)))
    return math.acos(cos)


def reduce_angle(angle: float) -> float:
    """Angle mod 2*pi in [0, 2*pi); for display only."""
    return math.fmod(math.fmod(angle, 2 * math.pi) + 2 * math.pi, 2 * math.pi)
