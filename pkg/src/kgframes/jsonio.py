"""JSON wire formats shared by every module's I/O.

Complex scalars serialize as {"re": float, "im": float}; matrices as
row-major nested arrays of such scalars.  Parsers raise
:class:`SpecFormatError` whose message names the offending field and
index, so the CLI can report exactly what is wrong with an input file.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpecFormatError
from .gframe import CoefficientVector, FrameBounds, GFrameSystem

__all__ = [
    "FrameSpecFile",
    "complex_to_json",
    "json_to_complex",
    "matrix_to_json",
    "json_to_matrix",
    "vector_to_json",
    "json_to_vector",
    "system_to_json",
    "json_to_system",
    "bounds_to_json",
    "coefficients_to_json",
    "parse_frame_spec",
    "frame_spec_to_json",
]


def complex_to_json(z: complex) -> dict:
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def json_to_complex(obj, field: str) -> complex:
    if isinstance(obj, bool):
        raise SpecFormatError(field, "expected a complex scalar, got a boolean")
    if isinstance(obj, (int, float)):
        return complex(float(obj), 0.0)
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise SpecFormatError(field, f"unknown keys {sorted(extra)} in complex scalar")
        try:
            re = float(obj.get("re", 0.0))
            im = float(obj.get("im", 0.0))
        except (TypeError, ValueError):
            raise SpecFormatError(field, "re/im must be numbers") from None
        return complex(re, im)
    raise SpecFormatError(field, f"expected a number or {{re, im}} object, got {type(obj).__name__}")


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[complex_to_json(z) for z in row] for row in m]


def json_to_matrix(obj, field: str) -> np.ndarray:
    if not isinstance(obj, list):
        raise SpecFormatError(field, "expected a list of rows")
    rows = []
    width = None
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise SpecFormatError(f"{field}[{i}]", "expected a list of entries")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SpecFormatError(
                f"{field}[{i}]", f"row has {len(row)} entries, expected {width}"
            )
        rows.append([json_to_complex(z, f"{field}[{i}][{j}]") for j, z in enumerate(row)])
    if not rows:
        raise SpecFormatError(field, "matrix has no rows")
    arr = np.asarray(rows, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise SpecFormatError(field, "matrix contains non-finite entries")
    return arr


def vector_to_json(v) -> list:
    v = np.asarray(v, dtype=np.complex128)
    return [complex_to_json(z) for z in v]


def json_to_vector(obj, field: str) -> np.ndarray:
    if not isinstance(obj, list):
        raise SpecFormatError(field, "expected a list of scalars")
    return np.asarray(
        [json_to_complex(z, f"{field}[{i}]") for i, z in enumerate(obj)],
        dtype=np.complex128,
    )


def system_to_json(sys: GFrameSystem) -> dict:
    return {
        "ambient_dim": sys.ambient_dim,
        "blocks": [
            {"dim": m, "matrix": matrix_to_json(op)}
            for m, op in zip(sys.block_dims, sys.operators)
        ],
    }


def json_to_system(obj, field: str = "system") -> GFrameSystem:
    if not isinstance(obj, dict):
        raise SpecFormatError(field, "expected an object")
    if "ambient_dim" not in obj:
        raise SpecFormatError(f"{field}.ambient_dim", "missing")
    try:
        n = int(obj["ambient_dim"])
    except (TypeError, ValueError):
        raise SpecFormatError(f"{field}.ambient_dim", "must be an integer") from None
    if n < 0:
        raise SpecFormatError(f"{field}.ambient_dim", "must be nonnegative")
    blocks = obj.get("blocks")
    if not isinstance(blocks, list) or not blocks:
        raise SpecFormatError(f"{field}.blocks", "expected a nonempty list")
    dims, ops = [], []
    for i, blk in enumerate(blocks):
        if not isinstance(blk, dict):
            raise SpecFormatError(f"{field}.blocks[{i}]", "expected an object")
        try:
            m = int(blk["dim"])
        except KeyError:
            raise SpecFormatError(f"{field}.blocks[{i}].dim", "missing") from None
        except (TypeError, ValueError):
            raise SpecFormatError(f"{field}.blocks[{i}].dim", "must be an integer") from None
        mat = json_to_matrix(blk.get("matrix"), f"{field}.blocks[{i}].matrix")
        if mat.shape != (m, n):
            raise SpecFormatError(
                f"{field}.blocks[{i}].matrix",
                f"has shape {mat.shape}, expected ({m}, {n})",
            )
        dims.append(m)
        ops.append(mat)
    return GFrameSystem(n, tuple(dims), tuple(ops))


def bounds_to_json(bounds: FrameBounds) -> dict:
    return {
        "lower": bounds.lower,
        "upper": bounds.upper,
        "bessel": bounds.is_bessel,
        "g_frame": bounds.is_g_frame,
        "k_g_frame": bounds.is_k_g_frame,
        "parseval": bounds.is_parseval,
        "tightness": bounds.tightness,
    }


def coefficients_to_json(coeff: CoefficientVector) -> dict:
    return {"blocks": [vector_to_json(b) for b in coeff.blocks]}


@dataclass(frozen=True, eq=False)
class FrameSpecFile:
    """Parsed frame-spec document: one or two systems plus operators."""

    system: GFrameSystem
    K: np.ndarray | None = None
    system2: GFrameSystem | None = None
    K2: np.ndarray | None = None
    U: np.ndarray | None = None
    V: np.ndarray | None = None
    alpha: complex | None = None
    beta: complex | None = None
    n_power: int | None = None


_SPEC_FIELDS = {"system", "K", "system2", "K2", "U", "V", "alpha", "beta", "n_power"}


def parse_frame_spec(obj) -> FrameSpecFile:
    """Parse a frame-spec dict, validating every dimension consistency rule."""
    if not isinstance(obj, dict):
        raise SpecFormatError("document", "expected a JSON object at top level")
    unknown = set(obj) - _SPEC_FIELDS
    if unknown:
        raise SpecFormatError("document", f"unknown fields {sorted(unknown)}")
    if "system" not in obj:
        raise SpecFormatError("system", "missing")
    system = json_to_system(obj["system"], "system")
    n = system.ambient_dim

    def square(field: str) -> np.ndarray | None:
        if obj.get(field) is None:
            return None
        mat = json_to_matrix(obj[field], field)
        if mat.shape != (n, n):
            raise SpecFormatError(field, f"has shape {mat.shape}, expected ({n}, {n})")
        return mat

    system2 = None
    if obj.get("system2") is not None:
        system2 = json_to_system(obj["system2"], "system2")
        if system2.ambient_dim != n or system2.block_dims != system.block_dims:
            raise SpecFormatError("system2", "ambient or block dimensions differ from system")

    scalars = {}
    for field in ("alpha", "beta"):
        scalars[field] = (
            json_to_complex(obj[field], field) if obj.get(field) is not None else None
        )
    n_power = None
    if obj.get("n_power") is not None:
        try:
            n_power = int(obj["n_power"])
        except (TypeError, ValueError):
            raise SpecFormatError("n_power", "must be an integer") from None
        if n_power < 1:
            raise SpecFormatError("n_power", "must be at least 1")

    return FrameSpecFile(
        system=system,
        K=square("K"),
        system2=system2,
        K2=square("K2"),
        U=square("U"),
        V=square("V"),
        alpha=scalars["alpha"],
        beta=scalars["beta"],
        n_power=n_power,
    )


def frame_spec_to_json(spec: FrameSpecFile) -> dict:
    out: dict = {"system": system_to_json(spec.system)}
    if spec.K is not None:
        out["K"] = matrix_to_json(spec.K)
    if spec.system2 is not None:
        out["system2"] = system_to_json(spec.system2)
    if spec.K2 is not None:
        out["K2"] = matrix_to_json(spec.K2)
    if spec.U is not None:
        out["U"] = matrix_to_json(spec.U)
    if spec.V is not None:
        out["V"] = matrix_to_json(spec.V)
    if spec.alpha is not None:
        out["alpha"] = complex_to_json(spec.alpha)
    if spec.beta is not None:
        out["beta"] = complex_to_json(spec.beta)
    if spec.n_power is not None:
        out["n_power"] = spec.n_power
    return out
