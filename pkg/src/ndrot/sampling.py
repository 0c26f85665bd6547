"""Seeded random frames and rotation specs for self-tests and property tests."""

from __future__ import annotations

import math

import numpy as np

from .linalg import gram_schmidt
from .rotation import PlaneSpec, RotationSpec


def random_frame(n: int, k: int, rng: np.random.Generator) -> list[np.ndarray]:
    """``k`` orthonormal vectors in R^n."""
    return gram_schmidt(list(rng.standard_normal((k, n))))


def random_spec(n: int, rng: np.random.Generator, planes: int | None = None,
                angle_range: tuple[float, float] = (-math.pi, math.pi),
                with_axis: bool | None = None, skew: bool = False) -> RotationSpec:
    """Random rotation spec in R^n.

    ``planes`` defaults to a random count in ``1..n // 2``.  With ``skew`` the
    second vector of each plane is sheared toward the first before it is handed
    to the spec, so the Gram-Schmidt repair path is exercised.
    """
    p = int(rng.integers(1, n // 2 + 1)) if planes is None else planes
    if with_axis is None:
        with_axis = 2 * p + 1 <= n and bool(rng.integers(0, 2))
    frame = random_frame(n, 2 * p + (1 if with_axis else 0), rng)
    lo, hi = angle_range
    plane_specs = []
    for k in range(p):
        a, b = frame[2 * k], frame[2 * k + 1]
        if skew:
            scale = rng.uniform(0.5, 2.0)
            a, b = scale * a, b + rng.uniform(-1.0, 1.0) * a
        plane_specs.append(PlaneSpec(a, b, float(rng.uniform(lo, hi))))
    axis = frame[-1] if with_axis else None
    return RotationSpec(n, tuple(plane_specs), axis)
