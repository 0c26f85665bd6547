"""Dense vector/matrix helpers built on the column view of matrix products.

Vectors and matrices are plain float64 numpy arrays.  ``as_vector`` and
``as_matrix`` are the validating constructors: they copy, reject NaN/Inf and
return read-only arrays.  The three product routines deliberately avoid ``@``
so each one follows its own definition:

* ``matmul_cayley``  -- column j of AB is A applied to column j of B
* ``matmul_colrow``  -- AB is the sum of outer products a_k b_k^T
* ``matmul_rowcol``  -- c_ij = sum_k a_ik b_kj, used as the reference
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

ORTHO_TOL = 1e-10
EQ_TOL = 1e-12

# A Gram-Schmidt projection coefficient above this fraction of the input
# norm triggers a second orthogonalization pass.
REORTHO_THRESHOLD = 0.5


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class LinearDependenceError(ValueError):
    """A vector lies (numerically) in the span of the preceding ones."""

    def __init__(self, index: int, residual: float):
        self.index = index
        self.residual = residual
        super().__init__(
            f"vector {index} is linearly dependent on vectors 0..{index - 1} "
            f"(relative residual {residual:.3e})"
        )


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def as_vector(x, name: str = "vector") -> np.ndarray:
    v = np.array(x, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"{name} must be a nonempty 1-D sequence, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return _frozen(v)


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.array(a, dtype=np.float64)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionError(f"{name} must be a nonempty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return _frozen(m)


def as_square(a, name: str = "matrix") -> np.ndarray:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got {m.shape[0]}x{m.shape[1]}")
    return m


def column(A, j: int) -> np.ndarray:
    A = as_matrix(A)
    return A[:, j]


def identity(n: int) -> np.ndarray:
    if n < 1:
        raise DimensionError(f"identity needs n >= 1, got {n}")
    return np.eye(n)


def transpose(A) -> np.ndarray:
    return as_matrix(A).T.copy()


def dot(u, v) -> float:
    u, v = as_vector(u, "u"), as_vector(v, "v")
    if u.size != v.size:
        raise DimensionError(f"dot of vectors of dim {u.size} and {v.size}")
    return math.fsum(u * v)


def norm(u) -> float:
    u = as_vector(u, "u")
    scale = np.max(np.abs(u))
    if scale == 0.0:
        return 0.0
    w = u / scale
    return float(scale * math.sqrt(math.fsum(w * w)))


def outer(u, v) -> np.ndarray:
    u, v = as_vector(u, "u"), as_vector(v, "v")
    return u[:, None] * v[None, :]


def matvec(A, x) -> np.ndarray:
    """Return ``Ax`` as the combination ``x_1 a_1 + ... + x_n a_n`` of columns."""
    A = as_matrix(A, "A")
    x = as_vector(x, "x")
    if A.shape[1] != x.size:
        raise DimensionError(
            f"matvec: A has {A.shape[1]} columns but x has dim {x.size}"
        )
    y = np.zeros(A.shape[0])
    for j in range(A.shape[1]):
        y += x[j] * A[:, j]
    return y


def _check_conformable(A: np.ndarray, B: np.ndarray, op: str) -> None:
    if A.shape[1] != B.shape[0]:
        raise DimensionError(
            f"{op}: A is {A.shape[0]}x{A.shape[1]}, B is {B.shape[0]}x{B.shape[1]}; "
            f"A.cols ({A.shape[1]}) != B.rows ({B.shape[0]})"
        )


def matmul_cayley(A, B) -> np.ndarray:
    """Product as composition: ``AB = [A b_1, ..., A b_k]``."""
    A, B = as_matrix(A, "A"), as_matrix(B, "B")
    _check_conformable(A, B, "matmul_cayley")
    C = np.empty((A.shape[0], B.shape[1]))
    for j in range(B.shape[1]):
        C[:, j] = matvec(A, B[:, j])
    return C


def matmul_colrow(A, B) -> np.ndarray:
    """Product by the column-row rule: ``AB = sum_k a_k b_k^T``."""
    A, B = as_matrix(A, "A"), as_matrix(B, "B")
    _check_conformable(A, B, "matmul_colrow")
    C = np.zeros((A.shape[0], B.shape[1]))
    for k in range(A.shape[1]):
        C += outer(A[:, k], B[k, :])
    return C


def matmul_rowcol(A, B) -> np.ndarray:
    """Entry-by-entry product ``c_ij = sum_k a_ik b_kj``."""
    A, B = as_matrix(A, "A"), as_matrix(B, "B")
    _check_conformable(A, B, "matmul_rowcol")
    rows = A.tolist()
    cols = B.T.tolist()
    return np.array(
        [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in rows]
    )


def gram_schmidt(vs: Sequence, tol: float = ORTHO_TOL) -> list[np.ndarray]:
    """Orthonormalize ``vs`` with modified Gram-Schmidt.

    The first output is ``vs[0] / |vs[0]|`` and each prefix of the output spans
    the same subspace as the matching prefix of the input.  A vector receives a
    second pass whenever one of its projection coefficients exceeds half of its
    original norm.

    Raises
    ------
    LinearDependenceError
        If a vector's residual after projection is below ``tol`` relative to
        its original norm (or it is zero).
    """
    if len(vs) == 0:
        raise ValueError("gram_schmidt needs at least one vector")
    vecs = [as_vector(v, f"vs[{i}]") for i, v in enumerate(vs)]
    dim = vecs[0].size
    for i, v in enumerate(vecs):
        if v.size != dim:
            raise DimensionError(f"vs[{i}] has dim {v.size}, expected {dim}")

    basis: list[np.ndarray] = []
    for i, v in enumerate(vecs):
        original = norm(v)
        if original == 0.0:
            raise LinearDependenceError(i, 0.0)
        w = v.copy()
        needs_second_pass = False
        for q in basis:
            h = float(q @ w)
            if abs(h) > REORTHO_THRESHOLD * original:
                needs_second_pass = True
            w -= h * q
        if needs_second_pass:
            for q in basis:
                w -= float(q @ w) * q
        residual = norm(w) / original
        if residual < tol:
            raise LinearDependenceError(i, residual)
        basis.append(_frozen(w / norm(w)))
    return basis


def is_close(a: float, b: float, tol: float = EQ_TOL) -> bool:
    """Absolute comparison below magnitude 1, relative above it."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def max_rel_diff(A, B) -> float:
    """Largest entrywise ``|a - b| / max(1, |a|, |b|)``."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    scale = np.maximum(1.0, np.maximum(np.abs(A), np.abs(B)))
    return float(np.max(np.abs(A - B) / scale))


class NotOrthonormalError(ValueError):
    """A frame that must be orthonormal is not, within tolerance."""

    def __init__(self, message: str, pair: tuple[int, int], deviation: float):
        self.pair = pair
        self.deviation = deviation
        super().__init__(message)


def orthonormality_defect(vectors: Sequence) -> tuple[float, tuple[int, int]]:
    """Worst ``|q_i . q_j - delta_ij|`` over all pairs, and the pair achieving it."""
    Q = np.column_stack([as_vector(v) for v in vectors])
    G = Q.T @ Q - np.eye(Q.shape[1])
    i, j = np.unravel_index(int(np.argmax(np.abs(G))), G.shape)
    return float(abs(G[i, j])), (int(min(i, j)), int(max(i, j)))


def check_orthonormal(vectors: Sequence, names: Sequence[str] | None = None,
                      tol: float = ORTHO_TOL) -> None:
    vecs = [as_vector(v) for v in vectors]
    dims = {v.size for v in vecs}
    if len(dims) != 1:
        raise DimensionError(f"frame vectors have mixed dimensions {sorted(dims)}")
    if names is None:
        names = [f"v{i}" for i in range(len(vecs))]
    deviation, (i, j) = orthonormality_defect(vecs)
    if deviation > tol:
        what = f"|{names[i]}|^2 - 1" if i == j else f"{names[i]} . {names[j]}"
        raise NotOrthonormalError(
            f"frame is not orthonormal: worst pair ({names[i]}, {names[j]}) "
            f"with {what} off by {deviation:.3e} (tolerance {tol:.0e})",
            (i, j),
            deviation,
        )
