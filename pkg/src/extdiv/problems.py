"""JSON problem files: parsing with field-precise diagnostics, and canonical hashing."""

from __future__ import annotations

import hashlib
import json
from typing import Any, List, Mapping, Optional

from .division import DivisionProblem
from .exterior import ExtElement, OmegaSystem
from .residua import LogResidueProblem, ResidueProblem
from .ring import Ideal, Poly, RingCtx


class ProblemError(ValueError):
    """Invalid problem input; ``field`` names the offending JSON path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


def problem_hash(data: Any) -> str:
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _require(data: Mapping, key: str, where: str = ""):
    if not isinstance(data, Mapping):
        raise ProblemError(where or "<root>", "expected a JSON object")
    if key not in data:
        raise ProblemError(f"{where}{key}", "missing field")
    return data[key]


def _int(data: Mapping, key: str, minimum: int = 0) -> int:
    v = _require(data, key)
    if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
        raise ProblemError(key, f"expected an integer >= {minimum}, got {v!r}")
    return v


def parse_ring(data: Mapping, order: Optional[str] = None) -> RingCtx:
    ring_data = _require(data, "ring")
    variables = _require(ring_data, "variables", "ring.")
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise ProblemError("ring.variables", "expected a list of names")
    try:
        return RingCtx(tuple(variables), order or ring_data.get("order", "grevlex"))
    except ValueError as exc:
        raise ProblemError("ring", str(exc)) from None


def parse_poly_field(text: Any, ring: RingCtx, field: str) -> Poly:
    if isinstance(text, int) and not isinstance(text, bool):
        text = str(text)
    if not isinstance(text, str):
        raise ProblemError(field, f"expected a polynomial string, got {text!r}")
    try:
        return ring.parse(text)
    except ValueError as exc:
        raise ProblemError(field, str(exc)) from None


def parse_poly_list(data: Mapping, key: str, ring: RingCtx) -> List[Poly]:
    items = _require(data, key)
    if not isinstance(items, list):
        raise ProblemError(key, "expected a list of polynomial strings")
    return [parse_poly_field(t, ring, f"{key}[{i}]") for i, t in enumerate(items)]


def parse_ext(data: Any, ring: RingCtx, m: int, field: str) -> ExtElement:
    if not isinstance(data, Mapping):
        raise ProblemError(field, "expected an object with 'degree' and 'terms'")
    degree = data.get("degree")
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 0:
        raise ProblemError(f"{field}.degree", f"expected a non-negative integer, got {degree!r}")
    if degree > m:
        raise ProblemError(f"{field}.degree", f"degree {degree} exceeds m = {m}")
    terms = data.get("terms")
    if not isinstance(terms, list):
        raise ProblemError(f"{field}.terms", "expected a list")
    acc = ExtElement.zero(ring, m, degree)
    for i, t in enumerate(terms):
        where = f"{field}.terms[{i}]"
        if not isinstance(t, Mapping) or "index" not in t or "coeff" not in t:
            raise ProblemError(where, "expected an object with 'index' and 'coeff'")
        index = t["index"]
        if not isinstance(index, list) or not all(isinstance(j, int) for j in index):
            raise ProblemError(f"{where}.index", "expected a list of integers")
        if len(index) != degree:
            raise ProblemError(f"{where}.index", f"index {index} does not have length {degree}")
        coeff = parse_poly_field(t["coeff"], ring, f"{where}.coeff")
        try:
            acc = acc + ExtElement.basis(ring, m, index, coeff)
        except ValueError as exc:
            raise ProblemError(f"{where}.index", str(exc)) from None
    return acc


def parse_omegas(data: Mapping, ring: RingCtx, m: int) -> OmegaSystem:
    items = _require(data, "omegas")
    if not isinstance(items, list) or not items:
        raise ProblemError("omegas", "expected a non-empty list")
    omegas = []
    for i, w in enumerate(items):
        e = parse_ext(w, ring, m, f"omegas[{i}]")
        if e.degree != 1:
            raise ProblemError(f"omegas[{i}].degree", "omegas must have degree 1")
        omegas.append(e)
    if len(omegas) > m:
        raise ProblemError("omegas", f"k = {len(omegas)} exceeds m = {m}")
    return OmegaSystem(omegas, m=m, ring=ring)


def parse_division(data: Mapping, order: Optional[str] = None) -> DivisionProblem:
    ring = parse_ring(data, order)
    m = _int(data, "m", 1)
    sys = parse_omegas(data, ring, m)
    eta = parse_ext(_require(data, "eta"), ring, m, "eta")
    r = _int(data, "r", 1)
    try:
        return DivisionProblem(sys, eta, r)
    except ValueError as exc:
        raise ProblemError("r" if "r =" in str(exc) else "eta", str(exc)) from None


def parse_residue(data: Mapping, order: Optional[str] = None) -> ResidueProblem:
    base = parse_division(data, order)
    fs = parse_poly_list(data, "fs", base.ring)
    if not fs:
        raise ProblemError("fs", "need at least one polynomial")
    if Ideal(base.ring, fs).is_unit():
        raise ProblemError("fs", "ideal is not proper")
    return ResidueProblem(base, tuple(fs))


def parse_log_residue(data: Mapping, order: Optional[str] = None) -> LogResidueProblem:
    ring = parse_ring(data, order)
    fs = parse_poly_list(data, "fs", ring)
    if not fs:
        raise ProblemError("fs", "need at least one polynomial")
    if Ideal(ring, fs).is_unit():
        raise ProblemError("fs", "ideal is not proper")
    eta = parse_ext(_require(data, "eta"), ring, ring.nvars, "eta")
    if eta.degree < len(fs):
        raise ProblemError("eta.degree", "degree of eta must be at least the number of fs")
    return LogResidueProblem(tuple(fs), eta)


def parse_optional_poly(data: Mapping, key: str, ring: RingCtx) -> Optional[Poly]:
    if key not in data or data[key] is None:
        return None
    return parse_poly_field(data[key], ring, key)


def optional_int(data: Mapping, key: str, minimum: int = 0) -> Optional[int]:
    if key not in data or data[key] is None:
        return None
    return _int(data, key, minimum)
