"""JSON problem files.

A problem is a JSON object::

    {
      "ambient_dim": n,
      "controls": {"C": MATRIX, "Cprime": MATRIX},
      "k_operator": MATRIX,
      "lambda": [MATRIX, ...],
      "omega": [MATRIX, ...],                       # optional: weaving pair
      "expansion": {"basis": MATRIX,                # optional
                    "coefficients": [[i, j, k, value], ...],
                    "M": value},
      "atoms": {"H": [MATRIX, ...], "W": [MATRIX, ...]}   # optional
    }

where ``MATRIX = {"rows": r, "cols": c, "entries": [[re, im], ...]}`` lists
entries in row-major order. Indices in ``coefficients`` are 0-based.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .exceptions import FrameError
from .model import ControlledInstance, GFrameFamily, WeavingInstance, build_controlled_instance, build_weaving_instance
from .numerics import DEFAULT_TOL, Tolerances
from .theorems import AtomicSystem, ScalarExpansion


class ProblemParseError(ValueError):
    """Malformed problem file (exit code 2)."""


class ProblemValidationError(ValueError):
    """Well-formed file describing an invalid instance (exit code 3)."""


@dataclass
class Problem:
    instance: Union[WeavingInstance, ControlledInstance]
    expansion: Optional[ScalarExpansion] = None
    atoms: Optional[AtomicSystem] = None
    digest: str = ""


def encode_matrix(M) -> dict:
    M = np.asarray(M, dtype=np.complex128)
    flat = M.reshape(-1)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "entries": [[float(z.real), float(z.imag)] for z in flat]}


def decode_matrix(obj, where: str) -> np.ndarray:
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemParseError(f"{where}: matrix needs rows, cols and entries ({exc})") from None
    if rows < 1 or cols < 1 or not isinstance(entries, list) or len(entries) != rows * cols:
        raise ProblemParseError(f"{where}: expected {rows}x{cols}={rows * cols} entries, "
                                f"got {len(entries) if isinstance(entries, list) else 'none'}")
    try:
        arr = np.array([complex(float(re), float(im)) for re, im in entries], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ProblemParseError(f"{where}: entries must be [re, im] pairs ({exc})") from None
    if not np.all(np.isfinite(arr)):
        raise ProblemParseError(f"{where}: non-finite entry")
    return arr.reshape(rows, cols)


def _family(items, where: str) -> GFrameFamily:
    if not isinstance(items, list) or not items:
        raise ProblemParseError(f"{where}: expected a nonempty list of matrices")
    members = [decode_matrix(M, f"{where}[{j}]") for j, M in enumerate(items)]
    try:
        return GFrameFamily(tuple(members))
    except FrameError as exc:
        raise ProblemValidationError(f"{where}: {exc}") from None


def digest_of(data: dict) -> str:
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def problem_from_dict(data: dict, tol: Tolerances = DEFAULT_TOL) -> Problem:
    if not isinstance(data, dict):
        raise ProblemParseError("top level must be a JSON object")
    for key in ("ambient_dim", "controls", "k_operator", "lambda"):
        if key not in data:
            raise ProblemParseError(f"missing field '{key}'")
    try:
        n = int(data["ambient_dim"])
        C = decode_matrix(data["controls"]["C"], "controls.C")
        Cp = decode_matrix(data["controls"]["Cprime"], "controls.Cprime")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ProblemParseError):
            raise
        raise ProblemParseError(f"controls: {exc}") from None
    K = decode_matrix(data["k_operator"], "k_operator")
    lam = _family(data["lambda"], "lambda")
    om = _family(data["omega"], "omega") if data.get("omega") is not None else None
    for name, M in (("controls.C", C), ("controls.Cprime", Cp), ("k_operator", K)):
        if M.shape != (n, n):
            raise ProblemValidationError(f"{name}: shape {M.shape} does not match ambient_dim {n}")
    try:
        if om is None:
            inst = build_controlled_instance(lam, C, Cp, K, tol)
        else:
            inst = build_weaving_instance(lam, om, C, Cp, K, tol)
    except FrameError as exc:
        raise ProblemValidationError(f"instance: {exc}") from None

    expansion = atoms = None
    if data.get("expansion") is not None:
        e = data["expansion"]
        try:
            basis = decode_matrix(e["basis"], "expansion.basis")
            coeffs = {(int(i), int(j), int(k)): float(v) for i, j, k, v in e["coefficients"]}
            expansion = ScalarExpansion(basis, coeffs, float(e["M"]))
        except ProblemParseError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemParseError(f"expansion: {exc}") from None
    if data.get("atoms") is not None:
        a = data["atoms"]
        try:
            H = [decode_matrix(M, f"atoms.H[{j}]") for j, M in enumerate(a["H"])]
            W = [decode_matrix(M, f"atoms.W[{j}]") for j, M in enumerate(a["W"])]
        except (KeyError, TypeError) as exc:
            raise ProblemParseError(f"atoms: {exc}") from None
        atoms = AtomicSystem(tuple(H), tuple(W))
    return Problem(inst, expansion, atoms, digest_of(data))


def read_problem(path, tol: Tolerances = DEFAULT_TOL) -> Problem:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ProblemParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise ProblemParseError(f"{path}: {exc.strerror}") from None
    return problem_from_dict(data, tol)


def parse_problem(path, tol: Tolerances = DEFAULT_TOL) -> Union[WeavingInstance, ControlledInstance]:
    return read_problem(path, tol).instance


def problem_to_dict(inst, expansion: ScalarExpansion | None = None, atoms: AtomicSystem | None = None) -> dict:
    if isinstance(inst, WeavingInstance):
        lam, om = inst.lambda_family, inst.omega_family
    else:
        lam, om = inst.family, None
    data = {
        "ambient_dim": lam.ambient_dim,
        "controls": {"C": encode_matrix(inst.controls.C), "Cprime": encode_matrix(inst.controls.Cp)},
        "k_operator": encode_matrix(inst.k_op.K),
        "lambda": [encode_matrix(M) for M in lam.members],
    }
    if om is not None:
        data["omega"] = [encode_matrix(M) for M in om.members]
    if expansion is not None:
        data["expansion"] = {
            "basis": encode_matrix(expansion.basis),
            "coefficients": [[i, j, k, v] for (i, j, k), v in sorted(expansion.coefficients.items())],
            "M": expansion.M,
        }
    if atoms is not None:
        data["atoms"] = {"H": [encode_matrix(F) for F in atoms.local_frames_H],
                         "W": [encode_matrix(F) for F in atoms.local_frames_W]}
    return data


def write_json_atomic(path, data: dict) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_problem(path, inst, expansion=None, atoms=None) -> str:
    """Write a problem file; returns its digest."""
    data = problem_to_dict(inst, expansion, atoms)
    write_json_atomic(path, data)
    return digest_of(data)
