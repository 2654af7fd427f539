"""Koszul complexes, regular sequences and cohomological depth."""

from __future__ import annotations

from typing import List, Optional, Sequence

from .exterior import ExtElement, multiindices, wedge
from .ring import FreeVector, Ideal, Poly, Submodule, is_nzd_mod, syzygy_basis


class DegenerateIdealError(ValueError):
    """Raised when a depth query is made on the zero or the unit ideal."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def boundary_matrix(omega: FreeVector, i: int) -> List[List[Poly]]:
    """Matrix of eta -> omega ^ eta from degree i to degree i+1 of the exterior algebra of R^r.

    Row t is the image of the t-th basis element of degree i (lexicographic
    order), written in the lexicographic basis of degree i+1.
    """
    r = omega.rank
    if not 0 <= i < r:
        raise ValueError(f"boundary index {i} out of range 0..{r - 1}")
    w = ExtElement.one_form(omega.entries)
    rows = []
    for I in multiindices(i, r):
        image = wedge(w, ExtElement.basis(omega.ring, r, I))
        rows.append(list(image.flatten().entries))
    return rows


def _rows(omega: FreeVector, i: int) -> List[FreeVector]:
    return [FreeVector(row) for row in boundary_matrix(omega, i)]


def cohomology_vanishes(omega: FreeVector, i: int) -> bool:
    """True iff ker d_i = im d_{i-1}, tested by lifting every kernel generator."""
    r = omega.rank
    if not 0 <= i < r:
        raise ValueError(f"cohomology index {i} out of range 0..{r - 1}")
    kernel = syzygy_basis(_rows(omega, i), omega.ring)
    if i == 0:
        return not kernel
    image = Submodule(_rows(omega, i - 1), omega.ring)
    return all(image.contains(v) for v in kernel)


def koszul_depth(omega: FreeVector, cap: Optional[int] = None) -> int:
    """Largest p <= cap such that the Koszul cohomology vanishes in every degree below p."""
    ideal = Ideal(omega.ring, omega.entries)
    if ideal.is_zero():
        raise DegenerateIdealError("zero_ideal", "Koszul depth is undefined for the zero ideal")
    if ideal.is_unit():
        raise DegenerateIdealError("unit_ideal", "Koszul depth is undefined for the unit ideal")
    r = omega.rank
    cap = r if cap is None else min(cap, r)
    p = 0
    while p < cap and cohomology_vanishes(omega, p):
        p += 1
    return p


def is_regular_sequence(seq: Sequence[Poly], modulo: Optional[Ideal] = None) -> bool:
    """Check the sequence in the given order; permutations are not assumed regular."""
    seq = list(seq)
    if not seq:
        return True
    ring = seq[0].ring
    base = modulo if modulo is not None else Ideal(ring)
    if (base + seq).is_unit():
        return False
    current = base
    for a in seq:
        if not is_nzd_mod(a, current):
            return False
        current = current + [a]
    return True
