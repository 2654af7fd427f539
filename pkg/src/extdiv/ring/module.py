"""Submodules of free modules R^N: membership with explicit lifts, and syzygies."""

from __future__ import annotations

import threading
from typing import Iterable, List, Optional, Sequence

from . import _engine
from .poly import Poly, RingCtx


class FreeVector:
    """An element of R^N, stored as a tuple of N polynomials."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Poly]):
        self.entries = tuple(entries)
        if not self.entries:
            raise ValueError("FreeVector needs at least one entry")
        ring = self.entries[0].ring
        if any(e.ring != ring for e in self.entries):
            raise ValueError("entries belong to different rings")

    @classmethod
    def zero(cls, ring: RingCtx, rank: int) -> "FreeVector":
        return cls([ring.zero()] * rank)

    @property
    def ring(self) -> RingCtx:
        return self.entries[0].ring

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def _check(self, other: "FreeVector") -> None:
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "FreeVector") -> "FreeVector":
        self._check(other)
        return FreeVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "FreeVector") -> "FreeVector":
        self._check(other)
        return FreeVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "FreeVector":
        return FreeVector(-a for a in self.entries)

    def __mul__(self, c) -> "FreeVector":
        return FreeVector(a * c for a in self.entries)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FreeVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "FreeVector(" + ", ".join(str(e) for e in self.entries) + ")"

    def to_vec(self, offset: int = 0):
        out = {}
        for i, p in enumerate(self.entries):
            for m, c in p.terms.items():
                out[(offset + i, m)] = c
        return out


def _from_vec(vec, ring: RingCtx, rank: int, offset: int = 0) -> FreeVector:
    buckets: List[dict] = [{} for _ in range(rank)]
    for (pos, m), c in vec.items():
        buckets[pos - offset][m] = c
    return FreeVector(Poly._raw(ring, b) for b in buckets)


def combine(coeffs: Sequence[Poly], gens: Sequence[FreeVector]) -> FreeVector:
    """Sum of coeffs[t] * gens[t]."""
    acc = None
    for c, g in zip(coeffs, gens):
        term = g * c
        acc = term if acc is None else acc + term
    return acc


def _check_ranks(gens: Sequence[FreeVector], rank: Optional[int] = None) -> int:
    ranks = {g.rank for g in gens}
    if rank is not None:
        ranks.add(rank)
    if len(ranks) > 1:
        raise ValueError(f"rank mismatch among vectors: {sorted(ranks)}")
    return ranks.pop() if ranks else 0


class Submodule:
    """Submodule of R^N spanned by ``gens``; lifts targets onto the generators.

    The Gröbner basis (with cofactors) is computed once, on first use, so
    repeated lifts against the same generators stay cheap.
    """

    def __init__(self, gens: Sequence[FreeVector], ring: RingCtx, rank: Optional[int] = None):
        self.gens = list(gens)
        self.ring = ring
        self.rank = _check_ranks(self.gens, rank)
        self._gb = None
        self._lock = threading.Lock()

    def _basis(self):
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    zero = (0,) * self.ring.nvars
                    tracked = [
                        (_engine.vec_in(g.to_vec()), {(t, zero): _engine.ONE})
                        for t, g in enumerate(self.gens)
                    ]
                    gb = _engine.buchberger(
                        tracked, self.ring.key, product_criterion=(self.rank == 1), top=True
                    )
                    self._gb = _engine.make_index(gb)
        return self._gb

    def lift(self, target: FreeVector) -> Optional[List[Poly]]:
        if target.rank != self.rank:
            raise ValueError(f"rank mismatch: target {target.rank} vs generators {self.rank}")
        if target.is_zero() or not self.gens:
            if target.is_zero():
                return [self.ring.zero() for _ in self.gens]
            return None
        key = _engine.top_key(self.ring.key)
        rem, cof = _engine.reduce_vec(_engine.vec_in(target.to_vec()), {}, self._basis(), key)
        if rem:
            return None
        coeffs = [{} for _ in self.gens]
        for (t, m), c in cof.items():
            coeffs[t][m] = -_engine.to_fraction(c)
        out = [Poly._raw(self.ring, c) for c in coeffs]
        if combine(out, self.gens) != target:
            raise AssertionError("lift failed to reproduce the target")
        return out

    def contains(self, target: FreeVector) -> bool:
        return self.lift(target) is not None


def module_lift(
    target: FreeVector, gens: Sequence[FreeVector], ctx: RingCtx
) -> Optional[List[Poly]]:
    """Coefficients c with sum c[t]*gens[t] == target, or None if target is outside the span."""
    _check_ranks(list(gens), target.rank)
    return Submodule(gens, ctx, target.rank).lift(target)


def syzygy_basis(gens: Sequence[FreeVector], ctx: RingCtx) -> List[FreeVector]:
    """Generators of the relations {c : sum c[i]*gens[i] = 0}.

    Each generator g_i is augmented to (g_i, e_i) in R^N + R^t.  The module
    order lets the first block dominate and is term-over-position inside each
    block, so the reduced Gröbner basis elements with no first-block component
    generate the syzygies.
    """
    gens = list(gens)
    if not gens:
        return []
    N = _check_ranks(gens)
    t = len(gens)
    zero = (0,) * ctx.nvars
    aug = []
    for i, g in enumerate(gens):
        vec = _engine.vec_in(g.to_vec())
        vec[(N + i, zero)] = _engine.ONE
        aug.append((vec, None))
    gb = _engine.buchberger(aug, ctx.key, product_criterion=False, top=True, split=N)
    gb = _engine.interreduce(gb, ctx.key, top=True, split=N)
    pot = _engine.pot_key(ctx.key)
    out = []
    for e in gb:
        if e.lt[0] >= N:
            # scale so the leading coefficient in position-over-term order is 1
            lc = e.vec[max(e.vec, key=pot)]
            vec = {k: c / lc for k, c in e.vec.items()}
            out.append(_from_vec(_engine.vec_out(vec), ctx, t, offset=N))
    return out
