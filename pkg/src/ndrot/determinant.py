"""Determinants by permutation expansion and by LU elimination."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .linalg import DimensionError, as_matrix, as_square, as_vector, matmul_cayley

MAX_PERMUTATION_N = 10
PERMUTATION_PRODUCT_MAX_N = 7
LU_PIVOT_TOL = 1e-14

_CACHE_MAX_N = 8
_CHUNK = 40320


@dataclass(frozen=True)
class Permutation:
    """An ordering of ``1..n`` together with its parity (+1 even, -1 odd)."""

    order: tuple[int, ...]
    parity: int

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "Permutation":
        return cls(tuple(int(i) for i in order), permutation_sign(order))


def _validate_order(order: Sequence[int]) -> tuple[int, ...]:
    items = tuple(order)
    n = len(items)
    if n == 0:
        raise ValueError("empty permutation")
    if sorted(items) != list(range(1, n + 1)):
        raise ValueError(f"{items} is not a permutation of 1..{n}")
    return items


def permutation_sign(p: Permutation | Sequence[int]) -> int:
    """Sign of a permutation of ``1..n`` by counting inversions."""
    order = p.order if isinstance(p, Permutation) else p
    items = _validate_order(order)
    inversions = sum(
        1
        for i in range(len(items))
        for j in range(i + 1, len(items))
        if items[i] > items[j]
    )
    return -1 if inversions % 2 else 1


def heap_permutations(n: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield every permutation of ``0..n-1`` with its sign (Heap's algorithm).

    Consecutive permutations differ by one transposition, so the sign just
    flips at each step.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a = list(range(n))
    c = [0] * n
    sign = 1
    yield tuple(a), sign
    i = 1
    while i < n:
        if c[i] < i:
            if i % 2 == 0:
                a[0], a[i] = a[i], a[0]
            else:
                a[c[i]], a[i] = a[i], a[c[i]]
            sign = -sign
            yield tuple(a), sign
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1


def _permutation_chunks(n: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    perms: list[tuple[int, ...]] = []
    signs: list[int] = []
    for perm, sign in heap_permutations(n):
        perms.append(perm)
        signs.append(sign)
        if len(perms) == _CHUNK:
            yield np.array(perms, dtype=np.intp), np.array(signs, dtype=np.float64)
            perms, signs = [], []
    if perms:
        yield np.array(perms, dtype=np.intp), np.array(signs, dtype=np.float64)


@lru_cache(maxsize=None)
def _permutation_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    perms, signs = zip(*_permutation_chunks(n))
    table = np.concatenate(perms)
    sign_arr = np.concatenate(signs)
    table.flags.writeable = False
    sign_arr.flags.writeable = False
    return table, sign_arr


def det_permutation(A) -> float:
    """Sum of ``sign(p) * a[0, p0] * ... * a[n-1, p(n-1)]`` over all n! permutations.

    Restricted to n <= 10; use :func:`det_lu` for anything larger.
    """
    A = as_square(A, "A")
    n = A.shape[0]
    if n > MAX_PERMUTATION_N:
        raise ValueError(
            f"det_permutation is capped at n <= {MAX_PERMUTATION_N} "
            f"(got n = {n}, {math.factorial(n)} terms); use det_lu instead"
        )
    if n <= _CACHE_MAX_N:
        chunks: Iterator = iter([_permutation_table(n)])
    else:
        chunks = _permutation_chunks(n)
    rows = np.arange(n)
    terms: list[float] = []
    for perms, signs in chunks:
        terms.extend((signs * np.prod(A[rows, perms], axis=1)).tolist())
    return math.fsum(terms)


def det_lu(A) -> float:
    """Determinant via Gaussian elimination with partial pivoting.

    Returns exactly 0.0 once a pivot's magnitude drops below ``LU_PIVOT_TOL``.
    """
    U = np.array(as_square(A, "A"))
    n = U.shape[0]
    det = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(U[k:, k])))
        if abs(U[p, k]) < LU_PIVOT_TOL:
            return 0.0
        if p != k:
            U[[k, p]] = U[[p, k]]
            det = -det
        pivot = U[k, k]
        det *= pivot
        if k + 1 < n:
            factors = U[k + 1 :, k] / pivot
            U[k + 1 :, k:] -= np.outer(factors, U[k, k:])
    return float(det)


@dataclass(frozen=True)
class ProductReport:
    lhs: float
    rhs: float
    residual: float
    method: str


def check_product_property(A, B) -> ProductReport:
    """Compare ``det(AB)`` with ``det(A) det(B)``.

    The product is formed column by column (``A b_1, ..., A b_n``).  The
    residual is ``|lhs - rhs| / max(1, |rhs|)``.
    """
    A, B = as_square(A, "A"), as_square(B, "B")
    if A.shape != B.shape:
        raise DimensionError(f"A is {A.shape[0]}x{A.shape[0]} but B is {B.shape[0]}x{B.shape[0]}")
    if A.shape[0] <= PERMUTATION_PRODUCT_MAX_N:
        det, method = det_permutation, "perm"
    else:
        det, method = det_lu, "lu"
    lhs = det(matmul_cayley(A, B))
    rhs = det(A) * det(B)
    return ProductReport(lhs, rhs, abs(lhs - rhs) / max(1.0, abs(rhs)), method)


def parallelogram_area(u, v) -> float:
    """Area of the parallelogram spanned by two vectors of the plane."""
    u, v = as_vector(u, "u"), as_vector(v, "v")
    if u.size != 2 or v.size != 2:
        raise DimensionError(f"parallelogram_area needs 2-D vectors, got {u.size} and {v.size}")
    return abs(det_permutation(as_matrix(np.column_stack([u, v]))))
