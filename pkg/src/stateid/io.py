"""JSON file formats for matrices, SDP problems, protocol inputs and reports.

A matrix is ``{"dim": d, "re": [[...]], "im": [[...]]}``.  Reports are
written with sorted keys so identical runs give identical bytes; wall-clock
numbers live under the single top-level key ``"timing"``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from . import linmat
from .sdp import Constraint, SdpProblem, SdpSolution
from .smp import P1Input, P2Input


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def read_json(path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

def matrix_to_obj(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_obj(obj, hermitian: bool = True) -> np.ndarray:
    if not isinstance(obj, dict) or not {"dim", "re"} <= obj.keys():
        raise InputError("matrix object needs 'dim' and 're' fields")
    d = obj["dim"]
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"matrix entries are not numeric: {exc}") from exc
    if not isinstance(d, int) or re.shape != (d, d) or im.shape != (d, d):
        raise InputError(f"matrix arrays must be {d}x{d}")
    m = re + 1j * im
    if not hermitian:
        return m
    try:
        return linmat.as_hermitian(m)
    except linmat.LinmatError as exc:
        raise InputError(str(exc)) from exc


def load_matrix(path) -> np.ndarray:
    return matrix_from_obj(read_json(path))


def load_states(path, names) -> dict[str, np.ndarray]:
    """A JSON object mapping state names to density-matrix objects."""
    obj = read_json(path)
    if not isinstance(obj, dict):
        raise InputError("state file must be a JSON object")
    missing = [n for n in names if n not in obj]
    if missing:
        raise InputError(f"state file lacks {', '.join(missing)}")
    out = {}
    for n in names:
        m = matrix_from_obj(obj[n])
        try:
            out[n] = linmat.as_density(m)
        except linmat.LinmatError as exc:
            raise InputError(f"{n}: {exc}") from exc
    return out


# ---------------------------------------------------------------------------
# SDP problems
# ---------------------------------------------------------------------------

def problem_from_obj(obj) -> SdpProblem:
    """``{"sense", "blocks": [d...], "objective": {blk: M}, "constraints": [...]}``.

    Each constraint is ``{"coeffs": {blk: M}, "relation": "<=", "rhs": r}``;
    block keys are decimal strings.
    """
    try:
        blocks = [int(d) for d in obj["blocks"]]
        objective = [np.zeros((d, d), dtype=complex) for d in blocks]
        for k, v in obj.get("objective", {}).items():
            objective[int(k)] = matrix_from_obj(v)
        cons = [Constraint({int(k): matrix_from_obj(v) for k, v in c["coeffs"].items()},
                           c["relation"], float(c["rhs"])) for c in obj.get("constraints", [])]
        return SdpProblem(tuple(blocks), tuple(objective), tuple(cons), obj.get("sense", "maximize"))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"malformed problem: {exc}") from exc


def load_problem(path) -> SdpProblem:
    return problem_from_obj(read_json(path))


def solution_to_obj(sol: SdpSolution) -> dict:
    return {
        "status": sol.status.value,
        "primal_value": sol.primal_value,
        "dual_value": sol.dual_value,
        "gap": sol.gap,
        "max_residual": sol.max_residual,
        "iterations": sol.iterations,
        "dual_multipliers": [float(v) for v in sol.dual_multipliers],
        "primal_blocks": [matrix_to_obj(b) for b in sol.primal_blocks],
    }


# ---------------------------------------------------------------------------
# protocol inputs (indices are 1-based in files)
# ---------------------------------------------------------------------------

def _bitstring(v, name: str) -> list[int]:
    if isinstance(v, str):
        if set(v) - {"0", "1"}:
            raise InputError(f"{name} must be a string of 0/1")
        return [int(c) for c in v]
    if isinstance(v, list):
        return [int(c) for c in v]
    raise InputError(f"{name} must be a bit string")


def p1_from_obj(obj) -> P1Input:
    try:
        return P1Input(int(obj["n"]), _bitstring(obj["x"], "x"), _bitstring(obj["s"], "s"),
                       _bitstring(obj["y"], "y"))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed P1 input: {exc}") from exc


def p2_from_obj(obj) -> P2Input:
    try:
        matching = [(int(i) - 1, int(j) - 1) for i, j in obj["matching"]]
        return P2Input(int(obj["n"]), matching, _bitstring(obj["edge_bits"], "edge_bits"),
                       _bitstring(obj["y"], "y"))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed P2 input: {exc}") from exc


def p1_to_obj(inp: P1Input) -> dict:
    return {"n": inp.n, "x": "".join(map(str, inp.x)), "s": "".join(map(str, inp.s)),
            "y": "".join(map(str, inp.y))}


def p2_to_obj(inp: P2Input) -> dict:
    return {"n": inp.n, "matching": [[i + 1, j + 1] for i, j in inp.matching],
            "edge_bits": "".join(map(str, inp.edge_bits)), "y": "".join(map(str, inp.y))}


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _clean(v):
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return _clean(v.tolist())
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        f = float(v)
        return f if math.isfinite(f) else repr(f)
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return v


def dumps_report(report: dict) -> str:
    return json.dumps(_clean(report), sort_keys=True, indent=2) + "\n"


def emit_report(report: dict, path=None) -> str:
    text = dumps_report(report)
    if path is None:
        return text
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write report to {path}: {exc}") from exc
    return text


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}
