"""``ndrot`` command line.

Exit codes: 0 success / verified, 1 verification failed, 2 parse error,
3 invalid spec or other semantic error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import io
from .determinant import MAX_PERMUTATION_N, check_product_property, det_lu, det_permutation
from .isoclinic import INVARIANCE_TOL, classify_invariant_planes
from .linalg import EQ_TOL, as_square, matvec
from .rotation import apply_vector_form, rotation_nd, verify_rotation
from .selftest import MUTATIONS, run_selftest

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_SEMANTIC = 3


class CommandError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_spec(path: str, strict: bool = False):
    sf = io.load_spec(path)
    try:
        return sf.to_spec(strict=strict), sf.seed
    except ValueError as exc:
        raise CommandError(f"{path}: invalid spec: {exc}", EXIT_SEMANTIC) from None


def _load_square(path: str) -> np.ndarray:
    M = io.load_matrix(path)
    if M.shape[0] != M.shape[1]:
        raise CommandError(f"{path}: matrix is {M.shape[0]}x{M.shape[1]}, not square", EXIT_SEMANTIC)
    return as_square(M)


def _emit(arr, output: str) -> None:
    if output == "json":
        sys.stdout.write(io.format_json(arr))
    elif np.ndim(arr) == 1:
        sys.stdout.write(io.format_vector_text(arr))
    else:
        sys.stdout.write(io.format_matrix_text(arr))


def cmd_build(args) -> int:
    spec, _ = _load_spec(args.spec, strict=args.strict)
    _emit(rotation_nd(spec), args.output)
    return EXIT_OK


def _parse_vector(text: str) -> np.ndarray:
    try:
        values = [float(tok) for tok in text.split(",")]
    except ValueError:
        raise CommandError(f"--vector: cannot parse {text!r} as comma-separated numbers", EXIT_PARSE) from None
    if not np.all(np.isfinite(values)):
        raise CommandError("--vector: entries must be finite", EXIT_PARSE)
    return np.array(values)


def cmd_apply(args) -> int:
    spec, _ = _load_spec(args.spec, strict=args.strict)
    x = _parse_vector(args.vector)
    if x.size != spec.dim:
        raise CommandError(f"--vector has {x.size} entries, spec dim is {spec.dim}", EXIT_SEMANTIC)
    y = apply_vector_form(spec, x)
    check = matvec(rotation_nd(spec), x)
    gap = float(np.max(np.abs(y - check)))
    if gap > EQ_TOL:
        raise CommandError(
            f"internal error: vector form and matrix form disagree by {gap:.3e}", EXIT_FAILED
        )
    _emit(y, args.output)
    return EXIT_OK


def _load_for_verify(path: str) -> np.ndarray:
    text = Path(path).read_text() if Path(path).is_file() else None
    if text is not None and text.lstrip().startswith("{"):
        spec, _ = _load_spec(path)
        return rotation_nd(spec)
    return _load_square(path)


def cmd_verify(args) -> int:
    R = _load_for_verify(args.path)
    report = verify_rotation(R)
    print(f"ortho_residual {report.ortho_residual:.6e}")
    print(f"det_value {io.format_entry(report.det_value)}")
    print(f"is_rotation {'true' if report.is_rotation else 'false'}")
    return EXIT_OK if report.is_rotation else EXIT_FAILED


def _format_plane(plane) -> str:
    return "u = [" + io.format_vector_text(plane.u).strip() + "]  v = [" + io.format_vector_text(plane.v).strip() + "]"


def cmd_invariant(args) -> int:
    spec, file_seed = _load_spec(args.spec)
    seed = args.seed if args.seed is not None else (file_seed if file_seed is not None else 0)
    try:
        report = classify_invariant_planes(spec, samples=args.samples, seed=seed)
    except ValueError as exc:
        raise CommandError(f"{args.spec}: {exc}", EXIT_SEMANTIC) from None
    print(f"classification {report.kind}")
    print(f"seed {seed}")
    if report.J is not None:
        print("J")
        sys.stdout.write(io.format_matrix_text(report.J))
    label = "witness planes" if report.kind == "all_J_planes" else "rotation planes"
    print(f"{label} {len(report.witness_planes)}")
    all_ok = True
    for k, (plane, res) in enumerate(zip(report.witness_planes, report.witness_residuals)):
        ok = res < INVARIANCE_TOL
        all_ok &= ok
        print(f"  [{k}] {_format_plane(plane)}  residual {res:.3e} {'invariant' if ok else 'NOT-invariant'}")
    if report.kind == "none_extra":
        print(
            f"random general-position planes: {report.falsification_passed} of "
            f"{report.falsification_samples} invariant"
        )
        all_ok &= report.falsification_passed == 0
    for note in report.notes:
        print(f"note: {note}")
    return EXIT_OK if all_ok else EXIT_FAILED


def cmd_det(args) -> int:
    A = _load_square(args.matrix)
    n = A.shape[0]
    if args.method in ("perm", "both") and n > MAX_PERMUTATION_N:
        raise CommandError(
            f"--method {args.method}: permutation expansion is capped at n <= {MAX_PERMUTATION_N} "
            f"(matrix is {n}x{n}); use --method lu",
            EXIT_SEMANTIC,
        )
    values = {}
    if args.method in ("perm", "both"):
        values["perm"] = det_permutation(A)
    if args.method in ("lu", "both"):
        values["lu"] = det_lu(A)
    for name, value in values.items():
        print(f"det_{name} {value:.15g}")
    if len(values) == 2:
        a, b = values["perm"], values["lu"]
        print(f"relative_difference {abs(a - b) / max(1.0, abs(a), abs(b)):.3e}")
    return EXIT_OK


def cmd_det_product(args) -> int:
    A, B = _load_square(args.a), _load_square(args.b)
    if A.shape != B.shape:
        raise CommandError(f"A is {A.shape[0]}x{A.shape[0]}, B is {B.shape[0]}x{B.shape[0]}", EXIT_SEMANTIC)
    report = check_product_property(A, B)
    print(f"method {report.method}")
    print(f"lhs det(AB) {report.lhs:.15g}")
    print(f"rhs det(A)det(B) {report.rhs:.15g}")
    print(f"residual {report.residual:.3e}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = run_selftest(seed=args.seed, mutation=args.mutate)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    failures = [r for r in results if not r.passed]
    print(f"{len(results) - len(failures)}/{len(results)} checks passed (seed {args.seed})")
    if failures:
        print(f"first failure: {failures[0].name}: {failures[0].detail}")
        return EXIT_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ndrot",
        description="Build and check rotation matrices from planes and angles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="print the rotation matrix of a spec file")
    p.add_argument("spec")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--strict", action="store_true", help="reject non-orthonormal plane vectors")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("apply", help="rotate a vector without forming the matrix")
    p.add_argument("spec")
    p.add_argument("--vector", required=True, help="comma-separated entries, e.g. 1,0,0")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("verify", help="check orthogonality and det = 1 of a matrix or spec file")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("invariant", help="classify invariant planes of a full-rank plane spec")
    p.add_argument("spec")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("det", help="determinant by permutation expansion and/or LU")
    p.add_argument("matrix")
    p.add_argument("--method", choices=("perm", "lu", "both"), default="both")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("det-product", help="compare det(AB) with det(A) det(B)")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_det_product)

    p = sub.add_parser("selftest", help="run the seeded invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mutate", choices=sorted(MUTATIONS), default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", 0) < 0:
        parser.error("--samples must be non-negative")
    try:
        return args.func(args)
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
