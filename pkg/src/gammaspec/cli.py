"""JSON-in, JSON-out command line front end.

The payload is read from standard input (or ``--in``) and the result is
written to standard output as a single JSON document. Exit codes: 0 for
any computed verdict, 2 for malformed input, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from .boundary import boundary_slice_check, k1_membership, k_membership
from .config import DEFAULT, ToleranceConfig
from .errors import GammaError, InputError, NumericalFailure
from .jsonio import (decode_matrix, decode_point, decode_tuple, dumps,
                     encode_point, encode_tuple)
from .membership import DOMAIN_DIM, membership, membership_oracle, oracle_routes
from .models import (BlockUnitary3, IsometryModelCoeffs5, IsometryModelCoeffs7,
                     build_gamma5_unitary, build_gamma7_unitary, build_pure_isometry,
                     validate_model_coeffs, wold_decompose)
from .mu import BlockStructure, mu_estimate, mu_membership, mu_torus, pi_map
from .probes import von_neumann_probe
from .sampling import sample
from .tuples import (CLASSIFY_KINDS, OperatorTuple, Tuple2, Tuple3, Tuple5, Tuple7,
                     classify_tuple, contraction_probe, eta_family_classify, rho_eval,
                     rho_multipliers, solve_fundamental)
from .verify import verify

__all__ = ["main", "run_command", "COMMANDS"]

_TUPLES = {7: Tuple7, 5: Tuple5, 3: Tuple3, 2: Tuple2}
_STRUCT_RE = re.compile(r"^\(\s*(\d+)\s*;\s*(\d+)\s*;\s*([\d\s,]+)\)$")


# ---------------------------------------------------------------- payload access

def _at(pointer: str, err: InputError) -> InputError:
    err.details["pointer"] = pointer + err.details.get("pointer", "")
    return err


def _req(payload: dict, key: str):
    if key not in payload:
        raise InputError(f"missing field {key!r}", pointer=f"/{key}")
    return payload[key]


def _field(payload: dict, key: str, decode, default=None, required: bool = True):
    if key not in payload:
        if required:
            raise InputError(f"missing field {key!r}", pointer=f"/{key}")
        return default
    try:
        return decode(payload[key])
    except InputError as e:
        raise _at(f"/{key}", e) from None


def _choice(options):
    def decode(v):
        if v not in options:
            raise InputError(f"expected one of {sorted(options)}", got=v, pointer="")
        return v
    return decode


def _bool(v):
    if not isinstance(v, bool):
        raise InputError("expected a boolean", got=v, pointer="")
    return v


def _int(v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError("expected an integer", got=v, pointer="")
    return v


def _point_for(n: int):
    def decode(v):
        if v == "zeros":
            return np.zeros(n, dtype=complex)
        x = decode_point(v)
        if x.shape != (n,):
            raise InputError(f"expected {n} coordinates", got=len(x), pointer="")
        return x
    return decode


def _matrix(v):
    if isinstance(v, str) and v.startswith("identity"):
        m = re.fullmatch(r"identity(\d+)", v)
        if not m:
            raise InputError("identity matrices are written as identity<n>", pointer="")
        return np.eye(int(m.group(1)), dtype=complex)
    return decode_matrix(v)


def _structure(v) -> BlockStructure:
    if isinstance(v, str):
        m = _STRUCT_RE.match(v.strip())
        if not m:
            raise InputError("structure strings look like '(3;2;1,2)'", got=v, pointer="")
        r = [int(t) for t in m.group(3).split(",") if t.strip()]
        return BlockStructure.from_dict({"n": int(m.group(1)), "s": int(m.group(2)), "r": r})
    if isinstance(v, dict) and "n" in v and "r" in v:
        return BlockStructure.from_dict(v)
    raise InputError("structure is {n, s, r} or a string like '(3;2;1,2)'", pointer="")


def _tuple(v) -> OperatorTuple:
    if isinstance(v, dict) and "scalar" in v:
        try:
            x = decode_point(v["scalar"])
        except InputError as e:
            raise _at("/scalar", e) from None
        cls = _TUPLES.get(len(x))
        if cls is None:
            raise InputError("scalar tuples have 2, 3, 5 or 7 entries", pointer="/scalar")
        return cls.scalar(x)
    if not isinstance(v, dict) or not isinstance(v.get("operators"), list):
        raise InputError("a tuple is {operators: [...]} or {scalar: [...]}", pointer="")
    cls = _TUPLES.get(len(v["operators"]))
    if cls is None:
        raise InputError("tuples have 2, 3, 5 or 7 operators", pointer="/operators")
    return decode_tuple(v, cls)


def _matrix_list(v):
    if not isinstance(v, list):
        raise InputError("expected a list of matrices", pointer="")
    out = []
    for i, m in enumerate(v):
        try:
            out.append(_matrix(m))
        except InputError as e:
            raise _at(f"/{i}", e) from None
    return out


# ---------------------------------------------------------------- commands

def _member(p, cfg, seed):
    dom = _field(p, "domain", _choice(DOMAIN_DIM))
    x = _field(p, "point", _point_for(DOMAIN_DIM[dom]))
    return membership(dom, x, _field(p, "closed", _bool, False, False), cfg).to_dict()


def _oracle(p, cfg, seed):
    dom = _field(p, "domain", _choice(DOMAIN_DIM))
    x = _field(p, "point", _point_for(DOMAIN_DIM[dom]))
    closed = _field(p, "closed", _bool, False, False)
    route = _field(p, "route", _choice(("mu", "slice", "closed_form")), None, False)
    routes = oracle_routes(dom, x, closed, cfg)
    if route is not None and route not in routes:
        raise InputError(f"route {route!r} is not available for {dom}", pointer="/route")
    return {"verdict": membership_oracle(dom, x, closed, cfg, route),
            "routes": {k: v.to_dict() for k, v in routes.items()}}


def _structure_matrix(p):
    st = _field(p, "structure", _structure)
    a = _field(p, "matrix", _matrix)
    if a.shape != (st.n, st.n):
        raise InputError(f"matrix must be {st.n}x{st.n}", pointer="/matrix")
    return st, a


def _pi(p, cfg, seed):
    st, a = _structure_matrix(p)
    return {"structure": st.to_dict(), "point": encode_point(pi_map(st, a))}


def _mu(p, cfg, seed):
    st, a = _structure_matrix(p)
    _, angles = mu_torus(st, a, cfg)
    return {"mu": mu_estimate(st, a, cfg), "angles": list(angles),
            "membership": mu_membership(st, a, _field(p, "closed", _bool, False, False), cfg)}


def _rho(p, cfg, seed):
    variant = _req(p, "variant")
    ops = _field(p, "tuple", _tuple)
    if "params" in p and "scalings" in p:
        raise InputError("give either params or scalings", pointer="/params")
    if "params" in p:
        sc = rho_multipliers(variant, _field(p, "params", decode_point))
    else:
        sc = _field(p, "scalings", decode_point, None, False)
    val, lam = rho_eval(variant, ops, sc, cfg)
    return {"value": val, "min_eigenvalue": lam}


def _classify(p, cfg, seed):
    extra = ("CONTRACTION", "VON_NEUMANN", "ETA_UNITARY", "ETA_ISOMETRY")
    kind = _field(p, "kind", _choice(CLASSIFY_KINDS + extra))
    tup = _field(p, "tuple", _tuple)
    if kind == "CONTRACTION":
        return contraction_probe(tup, cfg, _field(p, "grid", _int, 16, False)).to_dict()
    if kind == "VON_NEUMANN":
        return von_neumann_probe(tup, _field(p, "polys", _int, 50, False), seed=seed,
                                 cfg=cfg).to_dict()
    if kind.startswith("ETA_"):
        return eta_family_classify(tup, kind[4:], _field(p, "etas", _int, 16, False),
                                   cfg).to_dict()
    return classify_tuple(kind, tup, _field(p, "with_spectrum", _bool, False, False),
                          cfg, seed).to_dict()


def _fundamental(p, cfg, seed):
    tup = _field(p, "triple", _tuple)
    if not isinstance(tup, Tuple3):
        raise InputError("the triple needs three operators", pointer="/triple")
    return solve_fundamental(tup, cfg).to_dict()


def _wold(p, cfg, seed):
    return wold_decompose(_field(p, "tuple", _tuple), cfg).to_dict()


def _blocks(v):
    if isinstance(v, dict) and "matrix" in v:
        try:
            u = _matrix(v["matrix"])
        except InputError as e:
            raise _at("/matrix", e) from None
        if u.shape[0] % 3:
            raise InputError("block unitary size must be a multiple of 3", pointer="/matrix")
        return BlockUnitary3.from_matrix(u, u.shape[0] // 3)
    if not isinstance(v, list) or len(v) != 3:
        raise InputError("blocks form a 3x3 array of matrices", pointer="")
    rows = []
    for i, row in enumerate(v):
        if not isinstance(row, list) or len(row) != 3:
            raise InputError("blocks form a 3x3 array of matrices", pointer=f"/{i}")
        try:
            rows.append(tuple(_matrix_list(row)))
        except InputError as e:
            raise _at(f"/{i}", e) from None
    return BlockUnitary3(tuple(rows))


def _coeffs(v):
    if not isinstance(v, dict):
        raise InputError("coefficients are {A: [6 matrices]} or {B1, B2, C1, C2}", pointer="")
    if "A" in v:
        try:
            a = _matrix_list(v["A"])
        except InputError as e:
            raise _at("/A", e) from None
        if len(a) != 6:
            raise InputError("A holds six matrices", pointer="/A")
        return IsometryModelCoeffs7(tuple(a))
    mats = {}
    for k in ("B1", "B2", "C1", "C2"):
        if k not in v:
            raise InputError(f"missing coefficient {k}", pointer=f"/{k}")
        try:
            mats[k] = _matrix(v[k])
        except InputError as e:
            raise _at(f"/{k}", e) from None
    return IsometryModelCoeffs5(**mats)


def _build(p, cfg, seed):
    kind = _field(p, "kind", _choice(("gamma7_unitary", "gamma5_unitary", "pure_isometry",
                                      "validate_coeffs")))
    if kind in ("gamma7_unitary", "gamma5_unitary"):
        u = _field(p, "blocks", _blocks)
        build = build_gamma7_unitary if kind == "gamma7_unitary" else build_gamma5_unitary
        return {"tuple": encode_tuple(build(u, cfg))}
    coeffs = _field(p, "coeffs", _coeffs)
    if kind == "validate_coeffs":
        return validate_model_coeffs(coeffs, cfg).to_dict()
    n = _field(p, "n", _int, 32, False)
    return {"tuple": encode_tuple(build_pure_isometry(coeffs, n, cfg))}


def _sample(p, cfg, seed):
    from .sampling import SAMPLE_KINDS
    kind = _field(p, "kind", _choice(SAMPLE_KINDS))
    count = _field(p, "count", _int)
    seed = _field(p, "seed", _int, seed, False)
    opts = {k: _field(p, k, _int) for k in ("dim", "n", "max_dim") if k in p}
    items = sample(kind, count, seed, cfg, **opts)
    enc = [encode_tuple(t) if isinstance(t, OperatorTuple) else encode_point(t) for t in items]
    return {"kind": kind, "count": count, "seed": seed, "items": enc}


def _verify(p, cfg, seed):
    suite = _req(p, "suite")
    counts = p.get("counts")
    if counts is not None and not isinstance(counts, dict):
        raise InputError("counts is an object of integers", pointer="/counts")
    return verify(suite, _field(p, "seed", _int, seed, False), counts, cfg)


def _boundary(p, cfg, seed):
    check = _field(p, "check", _choice(("K", "K1", "BW7", "BW5", "BSYM", "BTETRA")))
    n = {"K": 7, "K1": 5, "BW7": 7, "BW5": 5, "BSYM": 2, "BTETRA": 3}[check]
    x = _field(p, "point", _point_for(n))
    if check == "K":
        return k_membership(x, cfg).to_dict()
    if check == "K1":
        return k1_membership(x, cfg).to_dict()
    return boundary_slice_check(check, x, cfg).to_dict()


COMMANDS = {
    "member": _member, "oracle": _oracle, "pi": _pi, "mu": _mu, "rho": _rho,
    "classify": _classify, "fundamental": _fundamental, "wold": _wold, "build": _build,
    "sample": _sample, "verify": _verify, "boundary": _boundary,
}


def run_command(command: str, payload, cfg: ToleranceConfig | None = None,
                seed: int = 0) -> tuple[int, dict]:
    """Dispatch one request; returns ``(exit_code, document)``."""
    cfg = cfg or DEFAULT
    try:
        if command not in COMMANDS:
            raise InputError(f"unknown command {command!r}", allowed=sorted(COMMANDS), pointer="")
        if not isinstance(payload, dict):
            raise InputError("payload must be a JSON object", pointer="")
        return 0, COMMANDS[command](payload, cfg, seed)
    except InputError as e:
        return 2, _error_doc(e)
    except NumericalFailure as e:
        return 3, _error_doc(e)


def _error_doc(e: GammaError) -> dict:
    details = dict(e.details)
    pointer = details.pop("pointer", "")
    return {"error": {"type": type(e).__name__, "message": str(e), "pointer": pointer,
                      "details": details}}


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{what} is not valid JSON: {e.msg}", pointer="",
                         line=e.lineno, column=e.colno) from None


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="gammaspec", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--in", dest="infile", help="payload file (default: standard input)")
    parser.add_argument("--config", help="JSON file of tolerance overrides")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    try:
        cfg = DEFAULT
        if args.config:
            with open(args.config) as fh:
                overrides = _load_json(fh.read(), "config")
            if not isinstance(overrides, dict):
                raise InputError("config must be a JSON object", pointer="")
            cfg = ToleranceConfig.from_dict(overrides)
        if args.infile:
            with open(args.infile) as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
        payload = _load_json(text, "payload") if text.strip() else {}
    except InputError as e:
        code, doc = 2, _error_doc(e)
    except (OSError, TypeError) as e:
        code, doc = 2, {"error": {"type": type(e).__name__, "message": str(e), "pointer": "",
                                  "details": {}}}
    else:
        code, doc = run_command(args.command, payload, cfg, args.seed)
    sys.stdout.write(dumps(doc) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
