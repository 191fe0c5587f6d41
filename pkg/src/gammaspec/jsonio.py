"""JSON encoding: complex numbers as ``[re, im]`` pairs."""

from __future__ import annotations

import json

import numpy as np

from .errors import InputError


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(c, (int, float)) for c in v):
        return complex(v[0], v[1])
    raise InputError("complex numbers are encoded as [re, im]", got=v)


def encode_point(x) -> list[list[float]]:
    return [encode_complex(c) for c in np.asarray(x, dtype=complex).reshape(-1)]


def _at(pointer: str, err: InputError) -> InputError:
    """Prefix the JSON pointer carried by ``err``."""
    err.details["pointer"] = pointer + err.details.get("pointer", "")
    return err


def decode_point(v) -> np.ndarray:
    if not isinstance(v, (list, tuple)):
        raise InputError("a point is a list of [re, im] pairs", pointer="")
    out = []
    for i, c in enumerate(v):
        try:
            out.append(decode_complex(c))
        except InputError as e:
            raise _at(f"/{i}", e) from None
    return np.array(out, dtype=complex)


def encode_matrix(m) -> list[list[list[float]]]:
    m = np.asarray(m, dtype=complex)
    return [[encode_complex(c) for c in row] for row in m]


def decode_matrix(v) -> np.ndarray:
    if not isinstance(v, (list, tuple)) or not v or not all(isinstance(r, (list, tuple)) for r in v):
        raise InputError("a matrix is a list of rows of [re, im] pairs", pointer="")
    rows = []
    for i, r in enumerate(v):
        try:
            rows.append(decode_point(r))
        except InputError as e:
            raise _at(f"/{i}", e) from None
    if len({len(r) for r in rows}) != 1:
        raise InputError("matrix rows have different lengths", pointer="")
    return np.array(rows, dtype=complex)


def encode_tuple(t) -> dict:
    out = {"operators": [encode_matrix(m) for m in t.ops]}
    if t.edge_mask is not None:
        out["edge_mask"] = encode_matrix(t.edge_mask)
    return out


def decode_tuple(d: dict, cls):
    if not isinstance(d, dict) or not isinstance(d.get("operators"), list):
        raise InputError("a tuple is an object with an 'operators' list", pointer="")
    ops = []
    for k, m in enumerate(d["operators"]):
        try:
            op = decode_matrix(m)
        except InputError as e:
            raise _at(f"/operators/{k}", e) from None
        if op.ndim != 2 or op.shape[0] != op.shape[1] or op.size == 0:
            raise InputError("operators must be non-empty square matrices",
                             shape=list(op.shape), pointer=f"/operators/{k}")
        ops.append(op)
    mask = d.get("edge_mask")
    try:
        mask = None if mask is None else decode_matrix(mask)
    except InputError as e:
        raise _at("/edge_mask", e) from None
    return cls(tuple(ops), mask)


def _default(o):
    if isinstance(o, (complex, np.complexfloating)):
        return encode_complex(o)
    if isinstance(o, np.ndarray):
        if np.iscomplexobj(o):
            return encode_matrix(o) if o.ndim == 2 else encode_point(o)
        return o.tolist()
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(f"cannot encode {type(o).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators."""
    return json.dumps(obj, default=_default, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)
