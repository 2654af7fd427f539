"""Buchberger's algorithm over free modules.

Working vectors are dicts ``{(position, exponents): mpq}``; callers convert
to and from ``Fraction`` with the helpers below.  Two module orders are
available: position over term (position 0 most significant) and term over
position, optionally split into two blocks for elimination.  An ideal is the
rank-one case.  Elements optionally carry a cofactor vector that records how
they were built from the input generators.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from gmpy2 import mpq

from .poly import monomial_divides, monomial_lcm, monomial_quotient

Term = Tuple[int, tuple]
Vec = Dict[Term, mpq]
ONE = mpq(1)


def to_engine(c) -> mpq:
    return mpq(c.numerator, c.denominator)


def to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def vec_in(vec) -> Vec:
    return {t: to_engine(c) for t, c in vec.items()}


def vec_out(vec: Vec) -> dict:
    return {t: to_fraction(c) for t, c in vec.items()}


def _neg_flat(mono_key: Callable, m: tuple) -> list:
    out = []
    for part in mono_key(m):
        if isinstance(part, tuple):
            out.extend(-x for x in part)
        else:
            out.append(-part)
    return out


def pot_key(mono_key: Callable) -> Callable[[Term], tuple]:
    """Position over term: earlier positions dominate."""

    def key(t: Term):
        return (-t[0], mono_key(t[1]))

    def heap(t: Term):
        return (t[0], *_neg_flat(mono_key, t[1]))

    key.heap = heap
    return key


def top_key(mono_key: Callable, split: Optional[int] = None) -> Callable[[Term], tuple]:
    """Term over position: the monomial decides, position breaks ties.

    With ``split`` the positions below it form a block that dominates the rest,
    which makes the order an elimination order for the trailing block.
    """
    if split is None:
        split = 1 << 62

    def key(t: Term):
        return (t[0] < split, mono_key(t[1]), -t[0])

    def heap(t: Term):
        return (t[0] >= split, *_neg_flat(mono_key, t[1]), t[0])

    key.heap = heap
    return key


def module_key(mono_key: Callable, top: bool = False, split: Optional[int] = None):
    return top_key(mono_key, split) if top else pot_key(mono_key)


def lead(vec: Vec, key) -> Term:
    return max(vec, key=key)


def axpy(target: Vec, src: Vec, mono: tuple, coeff: Fraction) -> None:
    """target -= coeff * x^mono * src, in place."""
    for (pos, m), c in src.items():
        t = (pos, tuple(a + b for a, b in zip(m, mono)))
        v = target.get(t, 0) - coeff * c
        if v:
            target[t] = v
        else:
            target.pop(t, None)


def scale(vec: Vec, coeff: Fraction) -> Vec:
    return {t: c * coeff for t, c in vec.items()}


class Elem:
    __slots__ = ("vec", "cof", "lt", "lc", "sugar")

    def __init__(self, vec: Vec, cof: Optional[Vec], key, sugar: Optional[int] = None):
        self.vec = vec
        self.cof = cof
        self.lt = lead(vec, key)
        self.lc = vec[self.lt]
        self.sugar = max(sum(m) for _, m in vec) if sugar is None else sugar

    def make_monic(self) -> None:
        if self.lc != 1:
            inv = ONE / self.lc
            self.vec = scale(self.vec, inv)
            if self.cof is not None:
                self.cof = scale(self.cof, inv)
            self.lc = ONE


class _Index:
    """Reducers bucketed by leading position."""

    def __init__(self, elems=()):
        self.by_pos: Dict[int, List[Elem]] = {}
        for e in elems:
            self.add(e)

    def add(self, e: Elem) -> None:
        self.by_pos.setdefault(e.lt[0], []).append(e)

    def find(self, t: Term) -> Optional[Elem]:
        for g in self.by_pos.get(t[0], ()):
            if monomial_divides(g.lt[1], t[1]):
                return g
        return None


def reduce_vec(
    vec: Vec,
    cof: Optional[Vec],
    reducers: _Index,
    key,
    full: bool = True,
    hkey=None,
) -> Tuple[Vec, Optional[Vec]]:
    """Divide ``vec`` by the reducers; returns (remainder, updated cofactor).

    With ``full=False`` only leading terms are reduced.  ``hkey`` is the
    heap form of ``key``; terms are visited in decreasing order through a heap.
    """
    if hkey is None:
        hkey = key.heap
    work = dict(vec)
    wcof = dict(cof) if cof is not None else None
    rem: Vec = {}
    heap = [(hkey(t), t) for t in work]
    heapq.heapify(heap)
    while heap:
        _, t = heapq.heappop(heap)
        c = work.get(t)
        if c is None:
            continue
        g = reducers.find(t)
        if g is None:
            if not full:
                rem.update(work)
                break
            rem[t] = c
            del work[t]
            continue
        q = monomial_quotient(t[1], g.lt[1])
        coeff = c / g.lc
        for (pos, m), gc in g.vec.items():
            u = (pos, tuple(a + b for a, b in zip(m, q)))
            old = work.get(u)
            if old is None:
                work[u] = -coeff * gc
                heapq.heappush(heap, (hkey(u), u))
            else:
                v = old - coeff * gc
                if v:
                    work[u] = v
                else:
                    del work[u]
        if wcof is not None and g.cof is not None:
            axpy(wcof, g.cof, q, coeff)
    return rem, wcof


def _spair(f: Elem, g: Elem, L: tuple):
    qf = monomial_quotient(L, f.lt[1])
    qg = monomial_quotient(L, g.lt[1])
    vec: Vec = {}
    axpy(vec, f.vec, qf, -ONE / f.lc)
    axpy(vec, g.vec, qg, ONE / g.lc)
    cof = None
    if f.cof is not None:
        cof = {}
        axpy(cof, f.cof, qf, -ONE / f.lc)
        axpy(cof, g.cof, qg, ONE / g.lc)
    sugar = max(f.sugar - sum(f.lt[1]), g.sugar - sum(g.lt[1])) + sum(L)
    return vec, cof, sugar


def buchberger(
    gens: List[Tuple[Vec, Optional[Vec]]],
    mono_key: Callable,
    product_criterion: bool,
    top: bool = False,
    split: Optional[int] = None,
) -> List[Elem]:
    """Gröbner basis (not yet reduced) of the module spanned by ``gens``.

    Pairs are handled with the Gebauer–Möller update; the coprime-leading-term
    criterion is only valid for ideals and is enabled by ``product_criterion``.
    Selection follows the sugar strategy, ties broken by smallest lcm.
    """
    key = module_key(mono_key, top, split)
    hkey = key.heap
    basis: List[Elem] = []
    active: List[int] = []
    pairs: Dict[Tuple[int, int], Term] = {}
    sugars: Dict[Tuple[int, int], int] = {}

    def disjoint(a: tuple, b: tuple) -> bool:
        return product_criterion and all(not (x and y) for x, y in zip(a, b))

    def update(hi: int) -> None:
        h = basis[hi]
        hpos, hm = h.lt
        cand = []
        for gi in active:
            g = basis[gi]
            if g.lt[0] == hpos:
                cand.append((gi, monomial_lcm(hm, g.lt[1])))
        kept = []
        for idx, (gi, L) in enumerate(cand):
            if disjoint(hm, basis[gi].lt[1]):
                kept.append((gi, L))
                continue
            rest = cand[idx + 1:]
            if any(monomial_divides(L2, L) for _, L2 in rest):
                continue
            if any(monomial_divides(L2, L) for _, L2 in kept):
                continue
            kept.append((gi, L))
        for (i, j), (pos, L) in list(pairs.items()):
            if pos != hpos or not monomial_divides(hm, L):
                continue
            Li = monomial_lcm(basis[i].lt[1], hm)
            Lj = monomial_lcm(basis[j].lt[1], hm)
            if Li != L and Lj != L:
                del pairs[(i, j)]
        for gi, L in kept:
            if not disjoint(hm, basis[gi].lt[1]):
                g = basis[gi]
                pairs[(gi, hi)] = (hpos, L)
                sugars[(gi, hi)] = max(g.sugar - sum(g.lt[1]), h.sugar - sum(hm)) + sum(L)
        active[:] = [
            gi for gi in active
            if not (basis[gi].lt[0] == hpos and monomial_divides(hm, basis[gi].lt[1]))
        ]
        active.append(hi)

    def add(vec: Vec, cof: Optional[Vec], sugar: Optional[int] = None) -> None:
        e = Elem(vec, cof, key, sugar)
        e.make_monic()
        basis.append(e)
        update(len(basis) - 1)

    for vec, cof in gens:
        if not vec:
            continue
        rem, rcof = reduce_vec(vec, cof, _Index(basis[i] for i in active), key, hkey=hkey)
        if rem:
            add(rem, rcof, max(sum(m) for _, m in vec))

    while pairs:
        (i, j) = min(pairs, key=lambda p: (sugars[p], key(pairs[p])))
        pos, L = pairs.pop((i, j))
        sugars.pop((i, j))
        svec, scof, sugar = _spair(basis[i], basis[j], L)
        if not svec:
            continue
        rem, rcof = reduce_vec(svec, scof, _Index(basis[a] for a in active), key, hkey=hkey)
        if rem:
            add(rem, rcof, sugar)

    return [basis[i] for i in active]


def interreduce(
    elems: List[Elem], mono_key: Callable, top: bool = False, split: Optional[int] = None
) -> List[Elem]:
    """Reduced Gröbner basis from any Gröbner basis, sorted by decreasing leading term."""
    key = module_key(mono_key, top, split)
    elems = sorted(elems, key=lambda e: key(e.lt))
    minimal: List[Elem] = []
    for e in elems:
        if any(m.lt[0] == e.lt[0] and monomial_divides(m.lt[1], e.lt[1]) for m in minimal):
            continue
        minimal.append(e)
    out = []
    for e in minimal:
        others = _Index(m for m in minimal if m is not e)
        rem, rcof = reduce_vec(e.vec, e.cof, others, key)
        r = Elem(rem, rcof, key, e.sugar)
        r.make_monic()
        out.append(r)
    out.sort(key=lambda e: key(e.lt), reverse=True)
    return out


def make_index(elems) -> _Index:
    return _Index(elems)
