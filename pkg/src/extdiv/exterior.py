"""Exterior algebra of the free module R^m.

Basis elements of the q-th exterior power are labelled by strictly increasing
1-based index tuples.  Signs come from the parity of the inversions needed to
sort a concatenated index sequence.
"""

from __future__ import annotations

import threading
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .ring import FreeVector, Ideal, Poly, RingCtx

MultiIndex = Tuple[int, ...]


def multiindices(q: int, m: int) -> List[MultiIndex]:
    """All strictly increasing q-tuples from 1..m, in lexicographic order."""
    if q < 0 or q > m:
        return []
    return list(combinations(range(1, m + 1), q))


def check_multiindex(index: Sequence[int], m: int) -> MultiIndex:
    index = tuple(index)
    for a, b in zip(index, index[1:]):
        if a >= b:
            raise ValueError(f"index not strictly increasing: {list(index)}")
    if index and (index[0] < 1 or index[-1] > m):
        raise ValueError(f"index {list(index)} out of range 1..{m}")
    return index


def permutation_sign(seq: Sequence[int]) -> int:
    """(-1)^(number of inversions); 0 if seq has a repeated entry."""
    if len(set(seq)) != len(seq):
        return 0
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv % 2 else 1


def merge(I: MultiIndex, J: MultiIndex) -> Tuple[int, MultiIndex]:
    """e_I ^ e_J = sign * e_{I u J}."""
    sign = permutation_sign(I + J)
    if not sign:
        return 0, ()
    return sign, tuple(sorted(I + J))


def multiindex_complement(J: Sequence[int], k: int) -> Tuple[MultiIndex, int]:
    """The complement J' of J in 1..k and the sign with e_J ^ e_J' = sign * e_{1..k}."""
    J = check_multiindex(J, k)
    rest = tuple(i for i in range(1, k + 1) if i not in J)
    return rest, permutation_sign(J + rest)


class ExtElement:
    """An element of the q-th exterior power of R^m."""

    __slots__ = ("ring", "m", "degree", "terms")

    def __init__(self, ring: RingCtx, m: int, degree: int, terms: Optional[Mapping] = None):
        self.ring = ring
        self.m = m
        self.degree = degree
        clean: Dict[MultiIndex, Poly] = {}
        if terms and 0 <= degree <= m:
            for idx, c in terms.items():
                idx = check_multiindex(idx, m)
                if len(idx) != degree:
                    raise ValueError(f"index {list(idx)} does not have length {degree}")
                if not isinstance(c, Poly):
                    c = ring.const(c)
                if c:
                    clean[idx] = clean[idx] + c if idx in clean else c
            clean = {i: c for i, c in clean.items() if c}
        self.terms = clean

    @classmethod
    def _raw(cls, ring, m, degree, terms):
        e = cls.__new__(cls)
        e.ring, e.m, e.degree, e.terms = ring, m, degree, terms
        return e

    @classmethod
    def zero(cls, ring: RingCtx, m: int, degree: int) -> "ExtElement":
        return cls._raw(ring, m, degree, {})

    @classmethod
    def scalar(cls, ring: RingCtx, m: int, value) -> "ExtElement":
        if not isinstance(value, Poly):
            value = ring.const(value)
        return cls(ring, m, 0, {(): value})

    @classmethod
    def basis(cls, ring: RingCtx, m: int, index: Sequence[int], coeff=1) -> "ExtElement":
        index = tuple(index)
        return cls(ring, m, len(index), {index: coeff})

    @classmethod
    def one_form(cls, coeffs: Sequence[Poly]) -> "ExtElement":
        coeffs = list(coeffs)
        ring = coeffs[0].ring
        return cls(ring, len(coeffs), 1, {(i + 1,): c for i, c in enumerate(coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, index: Sequence[int]) -> Poly:
        return self.terms.get(tuple(index), self.ring.zero())

    def coefficients(self) -> List[Poly]:
        return [self.terms[i] for i in sorted(self.terms)]

    def _check(self, other: "ExtElement") -> None:
        if other.m != self.m:
            raise ValueError(f"rank mismatch: {self.m} vs {other.m}")
        if other.ring != self.ring:
            raise ValueError("elements belong to different rings")

    def __add__(self, other: "ExtElement") -> "ExtElement":
        self._check(other)
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        terms = dict(self.terms)
        for i, c in other.terms.items():
            s = terms[i] + c if i in terms else c
            if s:
                terms[i] = s
            else:
                terms.pop(i, None)
        return ExtElement._raw(self.ring, self.m, self.degree, terms)

    def __neg__(self) -> "ExtElement":
        return ExtElement._raw(self.ring, self.m, self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        return self + (-other)

    def __mul__(self, c) -> "ExtElement":
        """Multiplication by a ring element."""
        if isinstance(c, ExtElement):
            return NotImplemented
        terms = {}
        for i, a in self.terms.items():
            v = a * c
            if v:
                terms[i] = v
        return ExtElement._raw(self.ring, self.m, self.degree, terms)

    __rmul__ = __mul__

    def wedge(self, other: "ExtElement") -> "ExtElement":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, ExtElement):
            return NotImplemented
        return (self.m, self.degree, self.terms) == (other.m, other.degree, other.terms)

    def __hash__(self):
        return hash((self.m, self.degree, frozenset(self.terms.items())))

    def map_coefficients(self, fn) -> "ExtElement":
        return ExtElement(self.ring, self.m, self.degree, {i: fn(c) for i, c in self.terms.items()})

    def flatten(self) -> FreeVector:
        """Coordinates in the lexicographically ordered basis, as a vector of length C(m, q)."""
        idx = multiindices(self.degree, self.m)
        if not idx:
            raise ValueError(f"exterior power of degree {self.degree} vanishes for m={self.m}")
        return FreeVector(self.coefficient(i) for i in idx)

    @classmethod
    def from_vector(cls, v: FreeVector, m: int, degree: int) -> "ExtElement":
        idx = multiindices(degree, m)
        if len(idx) != v.rank:
            raise ValueError("vector length does not match C(m, degree)")
        return cls(v.ring, m, degree, dict(zip(idx, v.entries)))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx in sorted(self.terms):
            label = "e" + "".join(str(i) for i in idx) if idx else "1"
            parts.append(f"({self.terms[idx]})*{label}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"ExtElement(m={self.m}, degree={self.degree}, {self})"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "terms": [
                {"index": list(i), "coeff": str(self.terms[i])} for i in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, ring: RingCtx, m: int) -> "ExtElement":
        if not isinstance(data, Mapping) or "degree" not in data or "terms" not in data:
            raise ValueError("exterior element needs 'degree' and 'terms'")
        degree = data["degree"]
        if not isinstance(degree, int) or degree < 0:
            raise ValueError(f"invalid degree {degree!r}")
        terms: Dict[MultiIndex, Poly] = {}
        for t in data["terms"]:
            idx = check_multiindex(t["index"], m)
            if len(idx) != degree:
                raise ValueError(f"index {list(idx)} does not have length {degree}")
            c = ring.parse(str(t["coeff"]))
            terms[idx] = terms[idx] + c if idx in terms else c
        return cls(ring, m, degree, terms)


def wedge(a: ExtElement, b: ExtElement) -> ExtElement:
    a._check(b)
    degree = a.degree + b.degree
    if degree > a.m:
        return ExtElement.zero(a.ring, a.m, degree)
    acc: Dict[MultiIndex, Poly] = {}
    for I, ca in a.terms.items():
        for J, cb in b.terms.items():
            sign, K = merge(I, J)
            if not sign:
                continue
            v = ca * cb
            if sign < 0:
                v = -v
            acc[K] = acc[K] + v if K in acc else v
    return ExtElement._raw(a.ring, a.m, degree, {K: c for K, c in acc.items() if c})


def wedge_all(elements: Iterable[ExtElement], ring: RingCtx, m: int) -> ExtElement:
    acc = ExtElement.scalar(ring, m, 1)
    for e in elements:
        acc = wedge(acc, e)
    return acc


class DualVector:
    """An element g of the dual module, acting by <g, e_i> = entries[i-1]."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Poly]):
        self.entries = tuple(entries)

    @classmethod
    def basis(cls, ring: RingCtx, m: int, i: int) -> "DualVector":
        return cls(ring.const(1) if j == i else ring.zero() for j in range(1, m + 1))

    @property
    def m(self) -> int:
        return len(self.entries)

    def pair(self, i: int) -> Poly:
        return self.entries[i - 1]

    def evaluate(self, omega: ExtElement) -> Poly:
        """<g, omega> for a one-form omega."""
        if omega.degree != 1:
            raise ValueError("can only pair with degree-1 elements")
        acc = omega.ring.zero()
        for (i,), c in omega.terms.items():
            acc = acc + c * self.entries[i - 1]
        return acc

    def __eq__(self, other):
        if not isinstance(other, DualVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "DualVector(" + ", ".join(str(e) for e in self.entries) + ")"


def interior(alpha: DualVector, eta: ExtElement) -> ExtElement:
    """alpha ⌋ eta, contracting the first slot."""
    if eta.degree < 1:
        raise ValueError("cannot contract scalar")
    if alpha.m != eta.m:
        raise ValueError(f"rank mismatch: {alpha.m} vs {eta.m}")
    acc: Dict[MultiIndex, Poly] = {}
    for I, c in eta.terms.items():
        for t, i in enumerate(I):
            g = alpha.entries[i - 1]
            if not g:
                continue
            v = g * c
            if t % 2:
                v = -v
            rest = I[:t] + I[t + 1:]
            acc[rest] = acc[rest] + v if rest in acc else v
    return ExtElement._raw(eta.ring, eta.m, eta.degree - 1, {K: c for K, c in acc.items() if c})


def coefficient_ideal(eta: ExtElement) -> Ideal:
    return Ideal(eta.ring, eta.coefficients())


class OmegaSystem:
    """The one-forms omega_1..omega_k of R^m with lazily cached Omega and I(Omega)."""

    def __init__(self, omegas: Sequence[ExtElement], m: Optional[int] = None, ring: Optional[RingCtx] = None):
        self.omegas = tuple(omegas)
        if not self.omegas and (m is None or ring is None):
            raise ValueError("an empty system needs explicit m and ring")
        self.m = self.omegas[0].m if m is None else m
        self.ring = self.omegas[0].ring if ring is None else ring
        for w in self.omegas:
            if w.degree != 1:
                raise ValueError("omegas must have degree 1")
            if w.m != self.m:
                raise ValueError(f"rank mismatch: omega of rank {w.m} in system of rank {self.m}")
        if self.k > self.m:
            raise ValueError(f"k = {self.k} exceeds m = {self.m}")
        self._lock = threading.Lock()
        self._Omega: Optional[ExtElement] = None
        self._I: Optional[Ideal] = None

    @property
    def k(self) -> int:
        return len(self.omegas)

    @property
    def Omega(self) -> ExtElement:
        if self._Omega is None:
            with self._lock:
                if self._Omega is None:
                    self._Omega = wedge_all(self.omegas, self.ring, self.m)
        return self._Omega

    @property
    def I_Omega(self) -> Ideal:
        if self._I is None:
            Omega = self.Omega
            with self._lock:
                if self._I is None:
                    self._I = coefficient_ideal(Omega)
        return self._I

    def omega_J(self, J: Sequence[int]) -> ExtElement:
        J = check_multiindex(J, self.k)
        return wedge_all((self.omegas[j - 1] for j in J), self.ring, self.m)

    def omega_Js(self, r: int) -> Dict[MultiIndex, ExtElement]:
        return {J: self.omega_J(J) for J in multiindices(r, self.k)}


def omega_J(sys: OmegaSystem, J: Sequence[int]) -> ExtElement:
    return sys.omega_J(J)
