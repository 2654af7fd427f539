"""Exterior divisibility by products of one-forms.

Given one-forms omega_1..omega_k of R^m and eta of degree p, decide whether
eta = sum_J omega_J ^ gamma_J over the r-subsets J of 1..k, and compute the
gamma_J.  The obstruction is the family of products omega_I ^ eta over the
s-subsets I with r + s = k + 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exterior import (
    DualVector,
    ExtElement,
    MultiIndex,
    OmegaSystem,
    interior,
    multiindices,
    wedge,
)
from .koszul import koszul_depth
from .ring import FreeVector, Ideal, Poly, Submodule, krull_dimension, syzygy_basis

Depth = Union[int, str]
INFINITE = "infinite"
DEFAULT_N_MAX = 16


class DegenerateOmegaError(ValueError):
    """Omega = omega_1 ^ ... ^ omega_k vanishes, so the criteria carry no information."""


@dataclass(frozen=True)
class DivisionProblem:
    sys: OmegaSystem
    eta: ExtElement
    r: int

    def __post_init__(self):
        k, m, p = self.sys.k, self.sys.m, self.eta.degree
        if self.eta.m != m:
            raise ValueError(f"eta has rank {self.eta.m}, omegas have rank {m}")
        if self.eta.ring != self.sys.ring:
            raise ValueError("eta and omegas live over different rings")
        if k < 1:
            raise ValueError("need at least one omega")
        if not 1 <= self.r <= k:
            raise ValueError(f"r = {self.r} must lie in 1..{k}")
        if p > m:
            raise ValueError(f"degree p = {p} exceeds m = {m}")
        if p < self.r:
            raise ValueError(f"degree p = {p} is smaller than r = {self.r}")

    @property
    def k(self) -> int:
        return self.sys.k

    @property
    def m(self) -> int:
        return self.sys.m

    @property
    def p(self) -> int:
        return self.eta.degree

    @property
    def s(self) -> int:
        return self.sys.k + 1 - self.r

    @property
    def ring(self):
        return self.sys.ring


@dataclass
class Representation:
    """a^n * eta = sum_J omega_J ^ gammas[J]; plain representability when n = 0."""

    gammas: Dict[MultiIndex, ExtElement]
    scalar_a: Poly
    exponent_n: int = 0

    def to_json(self) -> dict:
        return {
            "n": self.exponent_n,
            "a": str(self.scalar_a),
            "gammas": {
                ",".join(str(j) for j in J): g.to_json() for J, g in sorted(self.gammas.items())
            },
        }


@dataclass
class ConditionBReport:
    holds: bool
    witnesses: List[Tuple[MultiIndex, ExtElement]] = field(default_factory=list)
    vacuous: bool = False
    degenerate: bool = False


@dataclass
class DepthReport:
    ideal: Ideal
    depth_value: Depth
    method: str = "codim"
    dc_holds: Optional[bool] = None
    # p - r = depth - 1 with s + p > m lies past the proven bound
    outside_verified_criterion: bool = False


# -- condition (B) ---------------------------------------------------------


def check_condition_B(prob: DivisionProblem) -> ConditionBReport:
    degenerate = prob.sys.Omega.is_zero()
    if prob.s + prob.p > prob.m:
        return ConditionBReport(holds=True, vacuous=True, degenerate=degenerate)
    witnesses = []
    for I in multiindices(prob.s, prob.k):
        w = wedge(prob.sys.omega_J(I), prob.eta)
        if w:
            witnesses.append((I, w))
    return ConditionBReport(holds=not witnesses, witnesses=witnesses, degenerate=degenerate)


# -- depth -----------------------------------------------------------------


def depth(I: Ideal, method: str = "codim") -> DepthReport:
    """Depth of I in QQ[x_1..x_n].

    ``codim`` uses depth = height = n - dim R/I (polynomial rings are
    Cohen-Macaulay); ``koszul`` uses the vanishing range of Koszul cohomology
    on the generators.
    """
    if I.is_unit():
        return DepthReport(I, INFINITE, method)
    if I.is_zero():
        return DepthReport(I, 0, method)
    if method == "codim":
        return DepthReport(I, I.ring.nvars - krull_dimension(I), method)
    if method == "koszul":
        gens = [g for g in I.generators if g]
        return DepthReport(I, koszul_depth(FreeVector(gens)), method)
    raise ValueError(f"unknown depth method {method!r}")


def depth_condition_holds(prob: DivisionProblem, method: str = "codim") -> DepthReport:
    report = depth(prob.sys.I_Omega, method)
    d = report.depth_value
    gap = prob.p - prob.r
    if d == INFINITE:
        report.dc_holds = True
    else:
        report.dc_holds = gap <= d - 2
        report.outside_verified_criterion = (
            not report.dc_holds and gap == d - 1 and prob.s + prob.p > prob.m
        )
    return report


# -- representations -------------------------------------------------------


class _Divider:
    """Lifts degree-p elements onto {omega_J ^ e_K} plus optional extra generators."""

    def __init__(self, prob: DivisionProblem, extra: Sequence[Tuple[object, ExtElement]] = ()):
        self.prob = prob
        ring, m, p, r = prob.ring, prob.m, prob.p, prob.r
        self.labels: List[Tuple[str, object, object]] = []
        vectors: List[FreeVector] = []
        e_K = {K: ExtElement.basis(ring, m, K) for K in multiindices(p - r, m)}
        for J, wJ in prob.sys.omega_Js(r).items():
            for K, eK in e_K.items():
                self.labels.append(("gamma", J, K))
                vectors.append(wedge(wJ, eK).flatten())
        for tag, elem in extra:
            self.labels.append(("extra", tag, None))
            vectors.append(elem.flatten())
        self.vectors = vectors
        self.submodule = Submodule(vectors, ring, rank=len(multiindices(p, m)))

    def gammas_from(self, coeffs: Sequence[Poly]) -> Tuple[Dict[MultiIndex, ExtElement], list]:
        prob = self.prob
        ring, m, q = prob.ring, prob.m, prob.p - prob.r
        gammas = {J: ExtElement.zero(ring, m, q) for J in multiindices(prob.r, prob.k)}
        extras = []
        for (kind, a, b), c in zip(self.labels, coeffs):
            if kind == "gamma":
                if c:
                    gammas[a] = gammas[a] + ExtElement.basis(ring, m, b, c)
            else:
                extras.append((a, c))
        return gammas, extras

    def lift(self, target: ExtElement):
        coeffs = self.submodule.lift(target.flatten())
        if coeffs is None:
            return None
        return self.gammas_from(coeffs)


def _all_constant(prob: DivisionProblem, target: ExtElement) -> bool:
    polys = [c for w in prob.sys.omegas for c in w.terms.values()]
    polys += list(target.terms.values())
    return all(c.is_constant() for c in polys)


def _linear_lift(divider: _Divider, target: ExtElement) -> Optional[List[Poly]]:
    """Exact Gaussian elimination over QQ for constant generators."""
    import sympy

    ring = divider.prob.ring
    vecs = divider.vectors
    b = target.flatten()
    rows = b.rank
    if not vecs:
        return [] if b.is_zero() else None
    A = sympy.Matrix(
        rows,
        len(vecs),
        lambda i, j: sympy.Rational(vecs[j][i].constant_value()),
    )
    rhs = sympy.Matrix(rows, 1, lambda i, _: sympy.Rational(b[i].constant_value()))
    try:
        sol, params = A.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    sol = sol.subs({t: 0 for t in params})
    out = []
    for v in sol:
        v = sympy.Rational(v)
        out.append(ring.const(Fraction(int(v.p), int(v.q))))
    return out


def solve_A(prob: DivisionProblem, method: str = "auto") -> Optional[Representation]:
    """Find gamma_J with eta = sum_J omega_J ^ gamma_J, or None if none exist.

    ``method`` is ``groebner`` (module lift), ``linear`` (constant coefficients
    only, Gaussian elimination over QQ) or ``auto`` (linear when possible).
    The depth condition is not consulted: a representation may exist without it.
    """
    divider = _Divider(prob)
    return _solve_with(divider, prob, prob.eta, method, prob.ring.one(), 0)


def _solve_with(divider, prob, target, method, a, n) -> Optional[Representation]:
    if method == "auto":
        method = "linear" if _all_constant(prob, target) else "groebner"
    if method == "linear":
        if not _all_constant(prob, target):
            raise ValueError("linear method needs constant coefficients")
        coeffs = _linear_lift(divider, target)
        if coeffs is None:
            return None
        gammas, _ = divider.gammas_from(coeffs)
    elif method == "groebner":
        lifted = divider.lift(target)
        if lifted is None:
            return None
        gammas, _ = lifted
    else:
        raise ValueError(f"unknown method {method!r}")
    rep = Representation(gammas, a, n)
    if not verify_representation(prob, rep):
        raise AssertionError("solver produced a representation that does not verify")
    return rep


def solve_A_prime(
    prob: DivisionProblem, a: Poly, n_max: int = DEFAULT_N_MAX
) -> Optional[Representation]:
    """Smallest n <= n_max with a^n * eta representable; None means inconclusive.

    Existence of some n is guaranteed when condition (B) holds and a lies in
    I(Omega), but no bound on n is known, so failure is not a disproof.
    """
    if a.is_zero():
        raise ValueError("a must be nonzero")
    if prob.sys.Omega.is_zero():
        raise DegenerateOmegaError("degenerate: Omega = 0")
    if not prob.sys.I_Omega.contains(a):
        warnings.warn("a is not in I(Omega); success is not guaranteed", stacklevel=2)
    divider = _Divider(prob)
    target = prob.eta
    for n in range(n_max + 1):
        if n:
            target = target * a
        rep = _solve_with(divider, prob, target, "groebner", a, n)
        if rep is not None:
            return rep
    return None


def representation_residual(prob: DivisionProblem, rep: Representation) -> ExtElement:
    """a^n * eta - sum_J omega_J ^ gamma_J."""
    acc = prob.eta * (rep.scalar_a ** rep.exponent_n)
    for J, g in rep.gammas.items():
        if len(J) != prob.r or g.degree != prob.p - prob.r:
            raise ValueError(f"gamma for {J} has inconsistent degree")
        acc = acc - wedge(prob.sys.omega_J(J), g)
    return acc


def verify_representation(prob: DivisionProblem, rep: Representation) -> bool:
    return representation_residual(prob, rep).is_zero()


# -- uniqueness on the common kernel ---------------------------------------


def common_kernel(sys: OmegaSystem) -> List[DualVector]:
    """Generators of the dual vectors g with <g, omega_i> = 0 for every i."""
    ring = sys.ring
    columns = [
        FreeVector(w.coefficient((t,)) for w in sys.omegas) for t in range(1, sys.m + 1)
    ]
    return [DualVector(v.entries) for v in syzygy_basis(columns, ring)]


def restrict_to_kernel(gamma: ExtElement, alphas: Sequence[DualVector]) -> Poly:
    """alpha_q ⌋ ... ⌋ alpha_1 ⌋ gamma, with alpha_1 contracted first."""
    if len(alphas) != gamma.degree:
        raise ValueError(f"expected {gamma.degree} dual vectors, got {len(alphas)}")
    acc = gamma
    for alpha in alphas:
        acc = interior(alpha, acc)
    return acc.coefficient(())


def uniqueness_check(prob: DivisionProblem, rep1: Representation, rep2: Representation) -> bool:
    """True iff the two representations agree on every tuple of kernel generators."""
    for rep in (rep1, rep2):
        if not verify_representation(prob, rep):
            raise ValueError("representation does not verify")
    if rep1.scalar_a ** rep1.exponent_n != rep2.scalar_a ** rep2.exponent_n:
        raise ValueError("representations are of different multiples of eta")
    if prob.sys.Omega.is_zero():
        raise DegenerateOmegaError("degenerate: Omega = 0, I(Omega) has no non-zero-divisor")
    kernel = common_kernel(prob.sys)
    q = prob.p - prob.r
    zero = ExtElement.zero(prob.ring, prob.m, q)
    for J in multiindices(prob.r, prob.k):
        diff = rep1.gammas.get(J, zero) - rep2.gammas.get(J, zero)
        for alphas in product(kernel, repeat=q):
            if restrict_to_kernel(diff, alphas):
                return False
    return True
