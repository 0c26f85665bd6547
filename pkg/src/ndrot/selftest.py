"""Deterministic invariant suite behind ``ndrot selftest``.

Every check draws from its own generator seeded by ``(seed, index)``, so a run
is reproducible line for line.  ``MUTATIONS`` swaps one library routine for a
broken variant; a healthy suite must catch each of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import SimpleNamespace
from typing import Callable

import numpy as np

from . import determinant, isoclinic, linalg, rotation
from .sampling import random_frame, random_spec


def _default_ops() -> SimpleNamespace:
    return SimpleNamespace(
        matvec=linalg.matvec,
        matmul_cayley=linalg.matmul_cayley,
        matmul_colrow=linalg.matmul_colrow,
        matmul_rowcol=linalg.matmul_rowcol,
        gram_schmidt=linalg.gram_schmidt,
        det_permutation=determinant.det_permutation,
        det_lu=determinant.det_lu,
        parallelogram_area=determinant.parallelogram_area,
        rotation_3d=rotation.rotation_3d,
        rodrigues_apply=rotation.rodrigues_apply,
        rotation_nd=rotation.rotation_nd,
        apply_vector_form=rotation.apply_vector_form,
        build_J=isoclinic.build_J,
        isoclinic_rotation=isoclinic.isoclinic_rotation,
    )


def _rotation_without_complement(spec):
    R = rotation.rotation_nd(spec)
    return R - rotation._fixed_complement(spec)


MUTATIONS: dict[str, tuple[str, Callable]] = {
    "colrow-offset": ("matmul_colrow", lambda A, B: linalg.matmul_colrow(A, B) + 1e-6),
    "perm-sign": ("det_permutation", lambda A: -determinant.det_permutation(A)),
    "sin-sign": ("rotation_nd", lambda s: rotation.rotation_nd(s).T),
    "drop-complement": ("rotation_nd", _rotation_without_complement),
    "rodrigues-sign": (
        "rodrigues_apply",
        lambda c, t, x: rotation.rodrigues_apply(c, -t, x),
    ),
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_matmul(ops, rng):
    worst = 0.0
    for _ in range(50):
        m, n, k = rng.integers(1, 11, size=3)
        A = rng.uniform(-1, 1, (m, n))
        B = rng.uniform(-1, 1, (n, k))
        ref = ops.matmul_rowcol(A, B)
        worst = max(worst, linalg.max_rel_diff(ops.matmul_cayley(A, B), ref),
                    linalg.max_rel_diff(ops.matmul_colrow(A, B), ref))
    return worst < linalg.EQ_TOL, f"max rel diff {worst:.3e}"


def _check_linearity(ops, rng):
    worst = 0.0
    for _ in range(50):
        m, n = rng.integers(1, 11, size=2)
        A = rng.uniform(-1, 1, (m, n))
        u, v = rng.uniform(-1, 1, (2, n))
        al, be = rng.uniform(-1, 1, 2)
        lhs = ops.matvec(A, al * u + be * v)
        rhs = al * ops.matvec(A, u) + be * ops.matvec(A, v)
        worst = max(worst, linalg.max_rel_diff(lhs, rhs))
    return worst < linalg.EQ_TOL, f"max rel diff {worst:.3e}"


def _check_gram_schmidt(ops, rng):
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, n + 1))
        Q = np.column_stack(ops.gram_schmidt(list(rng.standard_normal((k, n)))))
        worst = max(worst, float(np.max(np.abs(Q.T @ Q - np.eye(k)))))
    return worst < linalg.ORTHO_TOL, f"max |Q^T Q - I| {worst:.3e}"


def _check_permutations(ops, rng):
    for n in range(1, 7):
        seen = set()
        for perm, sign in determinant.heap_permutations(n):
            if sign != determinant.permutation_sign([i + 1 for i in perm]):
                return False, f"sign mismatch at {perm}"
            seen.add(perm)
        if len(seen) != math.factorial(n):
            return False, f"n={n}: {len(seen)} permutations, expected {math.factorial(n)}"
    return True, "Heap enumeration complete with consistent signs for n = 1..6"


def _check_det_methods(ops, rng):
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 7))
        A = rng.uniform(-1, 1, (n, n))
        a, b = ops.det_permutation(A), ops.det_lu(A)
        worst = max(worst, abs(a - b) / max(1.0, abs(a), abs(b)))
    return worst < 1e-10, f"max rel diff {worst:.3e}"


def _check_product(ops, rng):
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 7))
        A = rng.uniform(-1, 1, (n, n))
        B = rng.uniform(-1, 1, (n, n))
        lhs = ops.det_permutation(ops.matmul_cayley(A, B))
        rhs = ops.det_permutation(A) * ops.det_permutation(B)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst < 1e-9, f"max residual {worst:.3e}"


def _check_antisymmetry(ops, rng):
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 5))
        A = rng.uniform(-1, 1, (n, n))
        i, j = rng.choice(n, size=2, replace=False)
        S = A.copy()
        S[:, [i, j]] = S[:, [j, i]]
        worst = max(worst, abs(ops.det_permutation(S) + ops.det_permutation(A)))
    return worst < 1e-12, f"max |det(swap) + det| {worst:.3e}"


def _check_area(ops, rng):
    worst = 0.0
    for _ in range(50):
        A = rng.uniform(-1, 1, (2, 2))
        u, v = rng.uniform(-1, 1, (2, 2))
        lhs = ops.parallelogram_area(ops.matvec(A, u), ops.matvec(A, v))
        rhs = abs(ops.det_permutation(A)) * ops.parallelogram_area(u, v)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst < 1e-10, f"max rel diff {worst:.3e}"


def _check_rotations(ops, rng):
    worst_o = worst_d = 0.0
    for _ in range(100):
        spec = random_spec(int(rng.integers(2, 10)), rng, skew=bool(rng.integers(0, 2)))
        R = ops.rotation_nd(spec)
        worst_o = max(worst_o, float(np.max(np.abs(R.T @ R - np.eye(spec.dim)))))
        worst_d = max(worst_d, abs(ops.det_lu(R) - 1.0))
    ok = worst_o < 1e-11 and worst_d < 1e-9
    return ok, f"max |R^T R - I| {worst_o:.3e}, max |det - 1| {worst_d:.3e}"


def _check_rodrigues(ops, rng):
    worst = 0.0
    for _ in range(50):
        c, a, b = random_frame(3, 3, rng)
        if np.dot(np.cross(a, b), c) < 0:
            a, b = b, a
        t = rng.uniform(-math.pi, math.pi)
        x = rng.uniform(-1, 1, 3)
        R = ops.rotation_3d(a, b, t)
        worst = max(worst, float(np.max(np.abs(ops.rodrigues_apply(c, t, x) - ops.matvec(R, x)))))
    return worst < 1e-12, f"max diff {worst:.3e}"


def _check_vector_form(ops, rng):
    worst = 0.0
    for _ in range(50):
        spec = random_spec(int(rng.integers(2, 10)), rng)
        x = rng.uniform(-1, 1, spec.dim)
        diff = ops.apply_vector_form(spec, x) - ops.matvec(ops.rotation_nd(spec), x)
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst < 1e-12, f"max diff {worst:.3e}"


def _check_generator_square(ops, rng):
    worst = 0.0
    for _ in range(50):
        a, b = random_frame(int(rng.integers(3, 9)), 2, rng)
        K = rotation.plane_generator(a, b)
        worst = max(worst, float(np.max(np.abs(K @ K + rotation.plane_projector(a, b)))))
    return worst < 1e-12, f"max |K^2 + P| {worst:.3e}"


def _check_constant_angle(ops, rng):
    worst = 0.0
    for _ in range(50):
        spec = random_spec(int(rng.integers(2, 10)), rng, angle_range=(0.01, math.pi - 0.01))
        R = ops.rotation_nd(spec)
        for p in spec.planes:
            s, t = rng.standard_normal(2)
            x = s * p.a + t * p.b
            worst = max(worst, abs(rotation.angle_between(ops.matvec(R, x), x) - p.angle))
    return worst < 1e-9, f"max angle error {worst:.3e} rad"


def _check_composition(ops, rng):
    worst = 0.0
    for _ in range(50):
        spec = random_spec(int(rng.integers(2, 10)), rng)
        other = spec.with_angles(rng.uniform(-math.pi, math.pi, len(spec.planes)))
        summed = spec.with_angles([x + y for x, y in zip(spec.angles, other.angles)])
        prod = ops.matmul_cayley(ops.rotation_nd(spec), ops.rotation_nd(other))
        worst = max(worst, float(np.max(np.abs(prod - ops.rotation_nd(summed)))))
    return worst < 1e-11, f"max diff {worst:.3e}"


def _check_isoclinic(ops, rng):
    worst_j = worst_r = 0.0
    for _ in range(20):
        frame = random_frame(4, 4, rng)
        J = ops.build_J(*frame)
        worst_j = max(worst_j, float(np.max(np.abs(J @ J + np.eye(4)))))
        t = rng.uniform(-math.pi, math.pi)
        spec = rotation.RotationSpec(4, ((frame[0], frame[1], t), (frame[2], frame[3], t)))
        diff = ops.isoclinic_rotation(frame, t) - ops.rotation_nd(spec)
        worst_r = max(worst_r, float(np.max(np.abs(diff))))
    ok = worst_j < 1e-12 and worst_r < 1e-12
    return ok, f"max |J^2 + I| {worst_j:.3e}, max |iso - R(t, t)| {worst_r:.3e}"


def _check_invariant_planes(ops, rng):
    worst = 0.0
    for _ in range(20):
        frame = random_frame(4, 4, rng)
        J = ops.build_J(*frame)
        U = rng.standard_normal((50, 4))
        planes = [isoclinic.invariant_plane(u, J) for u in U]
        P = np.stack([p.u for p in planes])
        Q = np.stack([p.v for p in planes])
        for t in rng.uniform(0, 2 * math.pi, 5):
            R = ops.isoclinic_rotation(frame, t)
            worst = max(worst, float(np.max(isoclinic.invariance_residuals(R, P, Q))))
    return worst < isoclinic.INVARIANCE_TOL, f"max residual {worst:.3e}"


def _check_falsification(ops, rng):
    frame = random_frame(4, 4, rng)
    spec = rotation.RotationSpec(
        4, ((frame[0], frame[1], math.pi / 3), (frame[2], frame[3], math.pi / 4))
    )
    R = ops.rotation_nd(spec)
    own = isoclinic.invariance_residuals(R, [frame[0], frame[2]], [frame[1], frame[3]])
    U, V = isoclinic.sample_general_position_planes(spec, 200, rng)
    passed = int(np.count_nonzero(isoclinic.invariance_residuals(R, U, V) < isoclinic.INVARIANCE_TOL))
    ok = bool(np.all(own < isoclinic.INVARIANCE_TOL)) and passed == 0
    return ok, f"rotation planes residual {float(np.max(own)):.3e}, {passed}/200 random planes invariant"


CHECKS: list[tuple[str, Callable]] = [
    ("matmul-triple-agreement", _check_matmul),
    ("matvec-linearity", _check_linearity),
    ("gram-schmidt-orthonormal", _check_gram_schmidt),
    ("permutation-signs", _check_permutations),
    ("det-perm-vs-lu", _check_det_methods),
    ("det-product-property", _check_product),
    ("det-column-swap", _check_antisymmetry),
    ("area-scaling", _check_area),
    ("rotation-validity", _check_rotations),
    ("rodrigues-equivalence", _check_rodrigues),
    ("vector-form-equivalence", _check_vector_form),
    ("plane-generator-square", _check_generator_square),
    ("constant-angle", _check_constant_angle),
    ("in-plane-composition", _check_composition),
    ("isoclinic-J", _check_isoclinic),
    ("isoclinic-invariant-planes", _check_invariant_planes),
    ("double-rotation-falsification", _check_falsification),
]


def run_selftest(seed: int = 0, mutation: str | None = None) -> list[CheckResult]:
    ops = _default_ops()
    if mutation is not None:
        if mutation not in MUTATIONS:
            raise KeyError(f"unknown mutation {mutation!r}; choose from {sorted(MUTATIONS)}")
        name, broken = MUTATIONS[mutation]
        setattr(ops, name, broken)
    results = []
    for index, (name, check) in enumerate(CHECKS):
        rng = np.random.default_rng([seed, index])
        try:
            ok, detail = check(ops, rng)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail))
    return results
