"""Spec-file and matrix-file formats used by the command line.

Spec files are JSON objects::

    {"dim": 3,
     "planes": [{"a": [1, 0, 0], "b": [0, 1, 0], "angle_degrees": 90}],
     "axis": [0, 0, 1],          # optional
     "seed": 7}                  # optional

Each plane carries exactly one of ``angle_degrees`` / ``angle_radians``.

Matrix files are either JSON nested arrays or text with one row per line and
whitespace-separated entries (blank lines and ``#`` comments are skipped).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .rotation import PlaneSpec, RotationSpec

ZERO_CUTOFF = 1e-12
SIG_DIGITS = 12
_SPEC_KEYS = {"dim", "planes", "axis", "seed"}
_PLANE_KEYS = {"a", "b", "angle_degrees", "angle_radians"}


class ParseError(ValueError):
    """Input is not well-formed; the message names the line or field."""


@dataclass(frozen=True)
class SpecFile:
    dim: int
    planes: tuple[dict, ...]
    axis: tuple[float, ...] | None
    seed: int | None

    def to_spec(self, strict: bool = False) -> RotationSpec:
        planes = []
        for k, p in enumerate(self.planes):
            if len(p["a"]) != self.dim or len(p["b"]) != self.dim:
                raise ValueError(
                    f"planes[{k}]: vectors have lengths {len(p['a'])} and {len(p['b'])}, "
                    f"dim is {self.dim}"
                )
            planes.append(PlaneSpec(p["a"], p["b"], p["angle"], strict=strict))
        if self.axis is not None and len(self.axis) != self.dim:
            raise ValueError(f"axis has length {len(self.axis)}, dim is {self.dim}")
        return RotationSpec(self.dim, tuple(planes), self.axis, strict=strict)


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _number_list(value, where: str) -> tuple[float, ...]:
    if not isinstance(value, list) or not value:
        raise ParseError(f"field '{where}' must be a nonempty list of numbers")
    for i, x in enumerate(value):
        if not _is_number(x):
            raise ParseError(f"field '{where}[{i}]' must be a finite number, got {x!r}")
    return tuple(float(x) for x in value)


def _load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def parse_spec(text: str, source: str = "<spec>") -> SpecFile:
    data = _load_json(text, source)
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be a JSON object")
    unknown = sorted(set(data) - _SPEC_KEYS)
    if unknown:
        raise ParseError(f"{source}: unknown field(s) {', '.join(unknown)}")
    if "dim" not in data:
        raise ParseError(f"{source}: missing field 'dim'")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"{source}: field 'dim' must be a positive integer, got {dim!r}")
    raw_planes = data.get("planes", [])
    if not isinstance(raw_planes, list):
        raise ParseError(f"{source}: field 'planes' must be a list")
    planes = []
    for k, p in enumerate(raw_planes):
        where = f"planes[{k}]"
        if not isinstance(p, dict):
            raise ParseError(f"{source}: field '{where}' must be an object")
        unknown = sorted(set(p) - _PLANE_KEYS)
        if unknown:
            raise ParseError(f"{source}: unknown field(s) {', '.join(f'{where}.{u}' for u in unknown)}")
        for key in ("a", "b"):
            if key not in p:
                raise ParseError(f"{source}: missing field '{where}.{key}'")
        has_deg, has_rad = "angle_degrees" in p, "angle_radians" in p
        if has_deg == has_rad:
            raise ParseError(
                f"{source}: field '{where}' needs exactly one of angle_degrees / angle_radians"
            )
        key = "angle_degrees" if has_deg else "angle_radians"
        if not _is_number(p[key]):
            raise ParseError(f"{source}: field '{where}.{key}' must be a finite number")
        angle = math.radians(p[key]) if has_deg else float(p[key])
        planes.append({
            "a": _number_list(p["a"], f"{where}.a"),
            "b": _number_list(p["b"], f"{where}.b"),
            "angle": angle,
        })
    axis = data.get("axis")
    if axis is not None:
        axis = _number_list(axis, "axis")
    seed = data.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or seed < 0):
        raise ParseError(f"{source}: field 'seed' must be a non-negative integer")
    return SpecFile(dim, tuple(planes), axis, seed)


def load_spec(path) -> SpecFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from None
    return parse_spec(text, str(path))


def parse_matrix(text: str, source: str = "<matrix>") -> np.ndarray:
    stripped = text.lstrip()
    if stripped.startswith("["):
        data = _load_json(text, source)
        if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
            raise ParseError(f"{source}: JSON matrix must be a nonempty list of rows")
        rows = [_number_list(r, f"row {i}") for i, r in enumerate(data)]
        if len({len(r) for r in rows}) != 1:
            raise ParseError(f"{source}: rows have unequal lengths {[len(r) for r in rows]}")
        return np.array(rows)

    rows: list[list[float]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            row = [float(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"{source}: line {lineno}: non-numeric entry") from None
        if not all(math.isfinite(x) for x in row):
            raise ParseError(f"{source}: line {lineno}: non-finite entry")
        if rows and len(row) != len(rows[0]):
            raise ParseError(
                f"{source}: line {lineno}: {len(row)} entries, expected {len(rows[0])}"
            )
        rows.append(row)
    if not rows:
        raise ParseError(f"{source}: no matrix rows found")
    return np.array(rows)


def load_matrix(path) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from None
    return parse_matrix(text, str(path))


def format_entry(x: float) -> str:
    """Fixed-point text with 12 significant digits; tiny values print as zero."""
    if abs(x) < ZERO_CUTOFF:
        return "0." + "0" * SIG_DIGITS
    exponent = math.floor(math.log10(abs(x)))
    decimals = max(0, SIG_DIGITS - 1 - exponent)
    return f"{x:.{decimals}f}"


def format_matrix_text(M) -> str:
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    return "\n".join(" ".join(format_entry(x) for x in row) for row in M) + "\n"


def format_vector_text(v) -> str:
    return " ".join(format_entry(x) for x in np.asarray(v, dtype=np.float64)) + "\n"


def format_json(arr) -> str:
    return json.dumps(np.asarray(arr, dtype=np.float64).tolist()) + "\n"
