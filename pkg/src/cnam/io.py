"""JSON interchange formats for matrices, states, POVMs and channels.

A matrix is ``{"rows": r, "cols": c, "re": [...], "im": [...]}`` with real
and imaginary parts in row-major order. ``im`` may be omitted for real
matrices. A state document is a matrix document with an optional ``dims``
list. A POVM document is ``{"elements": [matrix, ...]}`` (a bare list is
also accepted) and a channel document is
``{"kraus": [matrix, ...], "dim_in": n, "dim_out": m}``.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import KrausChannel
from .measurement import Povm
from .states import DensityMatrix, validate_density


class FormatError(ValueError):
    """A document does not follow the interchange format."""


def matrix_to_dict(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": m.real.ravel().tolist(),
        "im": m.imag.ravel().tolist(),
    }


def matrix_from_dict(doc) -> np.ndarray:
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc.get("im", np.zeros(rows * cols)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix document: {exc}") from None
    if re.shape != (rows * cols,) or im.shape != (rows * cols,):
        raise FormatError(f"expected {rows * cols} entries in re and im")
    return (re + 1j * im).reshape(rows, cols)


def state_to_dict(rho: DensityMatrix) -> dict:
    doc = matrix_to_dict(rho.matrix)
    doc["dims"] = list(rho.dims)
    return doc


def state_from_dict(doc, tol: float | None = None) -> DensityMatrix:
    m = matrix_from_dict(doc)
    dims = doc.get("dims") if isinstance(doc, dict) else None
    kwargs = {} if tol is None else {"tol": tol}
    return validate_density(m, dims, **kwargs)


def povm_to_dict(m: Povm) -> dict:
    return {"elements": [matrix_to_dict(e) for e in m]}


def povm_from_dict(doc, tol: float | None = None) -> Povm:
    elements = doc["elements"] if isinstance(doc, dict) and "elements" in doc else doc
    if not isinstance(elements, list):
        raise FormatError("POVM document needs an 'elements' list")
    mats = tuple(matrix_from_dict(e) for e in elements)
    return Povm(mats) if tol is None else Povm(mats, tol)


def channel_to_dict(ch: KrausChannel) -> dict:
    return {"kraus": [matrix_to_dict(k) for k in ch.kraus], "dim_in": ch.dim_in, "dim_out": ch.dim_out}


def channel_from_dict(doc, tol: float | None = None) -> KrausChannel:
    if not isinstance(doc, dict) or "kraus" not in doc:
        raise FormatError("channel document needs a 'kraus' list")
    ks = tuple(matrix_from_dict(k) for k in doc["kraus"])
    for key, axis in (("dim_in", 1), ("dim_out", 0)):
        if key in doc and any(k.shape[axis] != int(doc[key]) for k in ks):
            raise FormatError(f"Kraus operators do not match {key}={doc[key]}")
    return KrausChannel(ks) if tol is None else KrausChannel(ks, tol)


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None


def dump_json(doc, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=1))
