"""Ideals of QQ[x_1..x_n]: reduced Gröbner bases, membership, quotients, dimension."""

from __future__ import annotations

import threading
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Union

from . import _engine
from .poly import Poly, RingCtx


def _as_vec(p: Poly):
    return {(0, m): _engine.to_engine(c) for m, c in p.terms.items()}


def _as_poly(vec, ring: RingCtx) -> Poly:
    return Poly._raw(ring, {m: _engine.to_fraction(c) for (_, m), c in vec.items()})


def groebner(gens: Sequence[Poly], ctx: RingCtx) -> List[Poly]:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    The output is monic and sorted by decreasing leading monomial, so it is a
    canonical form of the ideal for the ring's monomial order.
    """
    vecs = [(_as_vec(g), None) for g in gens if g]
    if not vecs:
        return []
    gb = _engine.buchberger(vecs, ctx.key, product_criterion=True)
    gb = _engine.interreduce(gb, ctx.key)
    return [_as_poly(e.vec, ctx) for e in gb]


def reduce(f: Poly, basis: Sequence[Poly]) -> Poly:
    """Remainder of full multivariate division of ``f`` by ``basis``."""
    ring = f.ring
    key = _engine.pot_key(ring.key)
    elems = [_engine.Elem(_as_vec(g), None, key) for g in basis if g]
    rem, _ = _engine.reduce_vec(_as_vec(f), None, _engine.make_index(elems), key)
    return _as_poly(rem, ring)


class Ideal:
    """Finitely generated ideal with a lazily computed reduced Gröbner basis."""

    def __init__(self, ring: RingCtx, generators: Iterable[Poly] = ()):
        self.ring = ring
        gens = tuple(generators)
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator lies in a different ring")
        self.generators = gens
        self._gb: Optional[tuple] = None
        self._lock = threading.Lock()

    @classmethod
    def parse(cls, ring: RingCtx, texts: Iterable[str]) -> "Ideal":
        return cls(ring, [ring.parse(t) for t in texts])

    @property
    def gb(self) -> tuple:
        gb = self._gb
        if gb is None:
            with self._lock:
                if self._gb is None:
                    self._gb = tuple(groebner(self.generators, self.ring))
                gb = self._gb
        return gb

    def is_zero(self) -> bool:
        return not self.gb

    def is_unit(self) -> bool:
        return len(self.gb) == 1 and self.gb[0].is_constant()

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self).is_zero()

    def __contains__(self, f: Poly) -> bool:
        return self.contains(f)

    def __add__(self, other: Union["Ideal", Iterable[Poly]]) -> "Ideal":
        extra = other.generators if isinstance(other, Ideal) else tuple(other)
        return Ideal(self.ring, self.generators + tuple(extra))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.gb == other.gb

    def __hash__(self):
        return hash((self.ring, self.gb))

    def __repr__(self) -> str:
        return "Ideal(" + ", ".join(str(g) for g in self.generators) + ")"


def normal_form(f: Poly, I: Ideal) -> Poly:
    return reduce(f, I.gb)


def ideal_quotient(I: Ideal, f: Poly) -> Ideal:
    """Generators of (I : f) = {g : g*f in I}, read off the syzygies of [f, *gb(I)]."""
    from .module import FreeVector, syzygy_basis

    if f.is_zero():
        raise ValueError("zero divisor query")
    ring = I.ring
    gens = [FreeVector([f])] + [FreeVector([g]) for g in I.gb]
    syz = syzygy_basis(gens, ring)
    quotient = Ideal(ring, [s[0] for s in syz if s[0]])
    if not I.gb:
        return quotient
    # (I : f) always contains I; adding I keeps the generator list honest when syz is sparse
    return quotient + I.gb


def is_nzd_mod(f: Poly, I: Ideal) -> bool:
    """True iff f is a non-zero-divisor on R/I, with f not in I and I proper."""
    if I.is_unit() or f.is_zero() or I.contains(f):
        return False
    return ideal_quotient(I, f) == I


def krull_dimension(I: Ideal) -> Union[int, str]:
    """Dimension of R/I via maximal independent sets of the leading-term ideal.

    Returns ``"empty"`` for the unit ideal.
    """
    n = I.ring.nvars
    if I.is_unit():
        return "empty"
    leads = [g.leading_monomial() for g in I.gb]
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in leads]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0
