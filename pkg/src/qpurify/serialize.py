"""JSON schemas for states, classification reports and purification reports.

Complex numbers are always two-element [re, im] arrays.  State files carry
either a dense matrix ({"kind": "dense", "matrix": ...}) or normal-form
parameters ({"kind": "w_param", "p": ..., "alpha": ..., ...}); the two are
accepted interchangeably everywhere.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .canonical import WCanonicalForm, reconstruct
from .protocol import PurificationReport
from .ranges import ProductRay, RangeClass, Subspace
from .states import DensityMatrix, StateError, validate_density


class ParseError(ValueError):
    pass


def complex_to_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def matrix_to_pairs(mat: np.ndarray) -> list:
    return [[complex_to_pair(z) for z in row] for row in np.asarray(mat, dtype=complex)]


def vector_to_pairs(vec: np.ndarray) -> list:
    return [complex_to_pair(z) for z in np.asarray(vec, dtype=complex)]


def pairs_to_matrix(data: Any, shape: tuple[int, int]) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape != (*shape, 2):
        raise ParseError(f"expected {shape} matrix of [re, im] pairs, "
                         f"got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_json(state: DensityMatrix) -> dict:
    return {"kind": "dense", "matrix": matrix_to_pairs(state.matrix)}


def form_to_json(form: WCanonicalForm) -> dict:
    return {
        "kind": "w_param",
        "p": form.p,
        "alpha": form.alpha,
        "beta": form.beta,
        "gamma": form.gamma,
        "u_a": matrix_to_pairs(form.u_a),
        "u_b": matrix_to_pairs(form.u_b),
    }


def parse_state(obj: Any, tol: float = 1e-9) -> DensityMatrix:
    """Build a validated density matrix from a parsed JSON object."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("state object must be a dict with a 'kind' field")
    kind = obj["kind"]
    try:
        if kind == "dense":
            matrix = pairs_to_matrix(obj["matrix"], (4, 4))
            return validate_density(matrix, tol=tol)
        if kind == "w_param":
            identity = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
            form = WCanonicalForm(
                u_a=pairs_to_matrix(obj.get("u_a", identity), (2, 2)),
                u_b=pairs_to_matrix(obj.get("u_b", identity), (2, 2)),
                p=float(obj["p"]),
                alpha=float(obj["alpha"]),
                beta=float(obj["beta"]),
                gamma=float(obj["gamma"]),
            )
            return reconstruct(form, tol=tol)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, StateError) as exc:
        raise ParseError(f"invalid {kind!r} state: {exc}") from exc
    raise ParseError(f"unknown state kind {kind!r}")


def load_state(path: str, tol: float = 1e-9) -> DensityMatrix:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {path}: {exc}") from exc
    return parse_state(obj, tol=tol)


def ray_to_json(ray: ProductRay) -> dict:
    return {"factor_a": vector_to_pairs(ray.factor_a),
            "factor_b": vector_to_pairs(ray.factor_b)}


def classification_to_json(sub: Subspace, cls: RangeClass,
                           verdicts: dict[int, bool],
                           tol: float) -> dict:
    lam_max = float(sub.kept_eigenvalues[0])
    return {
        "rank": sub.dim,
        "class": cls.kind.value,
        "product_rays": [ray_to_json(r) for r in cls.rays],
        "margins": {
            "kept_min_relative": float(sub.kept_eigenvalues[-1]) / lam_max,
            "dropped_max_relative": sub.dropped_max / lam_max,
        },
        "purifiable": {f"n{n}": bool(v) for n, v in sorted(verdicts.items())},
        "tolerance": tol,
    }


def report_to_json(report: PurificationReport, tol: float) -> dict:
    out: dict[str, Any] = {
        "verdict": report.verdict,
        "probability": report.probability,
        "tolerance": tol,
    }
    if report.reason is not None:
        out["reason"] = report.reason
    if report.operators is not None:
        out["operators"] = {
            "m": matrix_to_pairs(report.operators.m_aa),
            "n": matrix_to_pairs(report.operators.n_bb),
            "system_order": "AA'|BB'",
        }
    if report.output_state is not None:
        out["output_vector"] = vector_to_pairs(report.output_state)
    if report.schmidt_margin is not None:
        out["schmidt_margin"] = report.schmidt_margin
    return out


def _format_scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    raise TypeError(f"unsupported JSON scalar {type(value)}")


def dumps_17g(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON text with every float printed to 17 significant
    digits (bit-faithful for finite doubles)."""
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {dumps_17g(v, indent + 2)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = [dumps_17g(v, indent + 2) for v in obj]
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(inner) + "]"
        return ("[\n" + ",\n".join(f"{pad}  {s}" for s in inner)
                + "\n" + pad + "]")
    return _format_scalar(obj)
