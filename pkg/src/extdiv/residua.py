"""Division modulo an ideal (f_1, ..., f_l): algebraic and logarithmic residues.

Quotient rings are never built; everything "mod f" is expressed with normal
forms and by adding the generators f_i * e_L to the lifting problem.
"""

from __future__ import annotations

import random
import re
import warnings
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .division import (
    DEFAULT_N_MAX,
    INFINITE,
    ConditionBReport,
    DegenerateOmegaError,
    DivisionProblem,
    _Divider,
    common_kernel,
    depth,
    restrict_to_kernel,
)
from .exterior import DualVector, ExtElement, MultiIndex, OmegaSystem, multiindices, wedge
from .koszul import is_regular_sequence
from .ring import Ideal, Poly, normal_form

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


@dataclass(frozen=True)
class ResidueProblem:
    base: DivisionProblem
    fs: Tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "fs", tuple(self.fs))
        if not self.fs:
            raise ValueError("need at least one f")
        if self.ideal_F.is_unit():
            raise ValueError("ideal is not proper")

    @property
    def ideal_F(self) -> Ideal:
        cached = self.__dict__.get("_ideal_F")
        if cached is None:
            cached = Ideal(self.base.ring, self.fs)
            object.__setattr__(self, "_ideal_F", cached)
        return cached


@dataclass
class ResidueRepresentation:
    """a^n * eta = sum_J omega_J ^ gammas[J] + sum_i fs[i] * xis[i]."""

    gammas: Dict[MultiIndex, ExtElement]
    xis: List[ExtElement]
    scalar_a: Poly
    exponent_n: int = 0

    def to_json(self) -> dict:
        return {
            "n": self.exponent_n,
            "a": str(self.scalar_a),
            "gammas": {
                ",".join(str(j) for j in J): g.to_json() for J, g in sorted(self.gammas.items())
            },
            "xis": [x.to_json() for x in self.xis],
        }


def differential(f: Poly) -> ExtElement:
    """df = sum_i (df/dx_i) e_i, with e_i standing for dx_i."""
    ring = f.ring
    return ExtElement(ring, ring.nvars, 1, {(i + 1,): f.diff(i) for i in range(ring.nvars)})


def reduce_form(eta: ExtElement, ideal: Ideal) -> ExtElement:
    return eta.map_coefficients(lambda c: normal_form(c, ideal))


def check_condition_B_mod(prob: ResidueProblem) -> ConditionBReport:
    base = prob.base
    degenerate = base.sys.Omega.is_zero()
    if base.s + base.p > base.m:
        return ConditionBReport(holds=True, vacuous=True, degenerate=degenerate)
    witnesses = []
    for I in multiindices(base.s, base.k):
        reduced = reduce_form(wedge(base.sys.omega_J(I), base.eta), prob.ideal_F)
        if reduced:
            witnesses.append((I, reduced))
    return ConditionBReport(holds=not witnesses, witnesses=witnesses, degenerate=degenerate)


def _residue_divider(prob: ResidueProblem) -> _Divider:
    base = prob.base
    extra = []
    for i, f in enumerate(prob.fs):
        for L in multiindices(base.p, base.m):
            extra.append(((i, L), ExtElement.basis(base.ring, base.m, L, f)))
    return _Divider(base, extra)


def _solve_mod(divider: _Divider, prob: ResidueProblem, target, a, n):
    lifted = divider.lift(target)
    if lifted is None:
        return None
    gammas, extras = lifted
    base = prob.base
    xis = [ExtElement.zero(base.ring, base.m, base.p) for _ in prob.fs]
    for (i, L), c in extras:
        if c:
            xis[i] = xis[i] + ExtElement.basis(base.ring, base.m, L, c)
    rep = ResidueRepresentation(gammas, xis, a, n)
    if not verify_residue_representation(prob, rep):
        raise AssertionError("solver produced a representation that does not verify")
    return rep


def solve_A_mod(prob: ResidueProblem) -> Optional[ResidueRepresentation]:
    """eta = sum_J omega_J ^ gamma_J + sum_i f_i xi_i, or None."""
    divider = _residue_divider(prob)
    return _solve_mod(divider, prob, prob.base.eta, prob.base.ring.one(), 0)


def solve_A_prime_mod(
    prob: ResidueProblem, a: Poly, n_max: int = DEFAULT_N_MAX
) -> Optional[ResidueRepresentation]:
    """Smallest n <= n_max giving a representation of a^n * eta; None is inconclusive."""
    base = prob.base
    if a.is_zero():
        raise ValueError("a must be nonzero")
    if base.sys.Omega.is_zero():
        raise DegenerateOmegaError("degenerate: Omega = 0")
    if not base.sys.I_Omega.contains(a):
        warnings.warn("a is not in I(Omega); success is not guaranteed", stacklevel=2)
    divider = _residue_divider(prob)
    target = base.eta
    for n in range(n_max + 1):
        if n:
            target = target * a
        rep = _solve_mod(divider, prob, target, a, n)
        if rep is not None:
            return rep
    return None


def residue_residual(prob: ResidueProblem, rep: ResidueRepresentation) -> ExtElement:
    base = prob.base
    acc = base.eta * (rep.scalar_a ** rep.exponent_n)
    for J, g in rep.gammas.items():
        acc = acc - wedge(base.sys.omega_J(J), g)
    for f, xi in zip(prob.fs, rep.xis):
        acc = acc - xi * f
    return acc


def verify_residue_representation(prob: ResidueProblem, rep: ResidueRepresentation) -> bool:
    if len(rep.xis) != len(prob.fs):
        return False
    return residue_residual(prob, rep).is_zero()


def residue_on_kernel(
    prob: ResidueProblem,
    rep: ResidueRepresentation,
    alphas: Sequence[DualVector],
    J: Optional[Sequence[int]] = None,
) -> Union[Poly, Dict[MultiIndex, Poly]]:
    """Normal form of gamma_J(alpha_1, ..., alpha_q) modulo (f).

    Returns one polynomial for a given J, otherwise a map over every J.
    Representatives depend on the monomial order.
    """
    q = prob.base.p - prob.base.r
    if len(alphas) != q:
        raise ValueError(f"expected {q} dual vectors, got {len(alphas)}")
    zero = ExtElement.zero(prob.base.ring, prob.base.m, q)

    def value(JJ):
        g = rep.gammas.get(tuple(JJ), zero)
        return normal_form(restrict_to_kernel(g, alphas), prob.ideal_F)

    if J is not None:
        return value(J)
    return {JJ: value(JJ) for JJ in multiindices(prob.base.r, prob.base.k)}


# -- depth additivity --------------------------------------------------------


@dataclass
class AdditivityReport:
    ell: int
    depth_total: Union[int, str]
    depth_quotient: Union[int, str]
    unit_ideal: bool = False
    confirmed: Optional[bool] = None
    sequence: List[Poly] = field(default_factory=list)
    attempts_used: int = 0


def depth_additivity_check(
    fs: Sequence[Poly], sys: OmegaSystem, attempts: int = 32, seed: int = 0
) -> AdditivityReport:
    """depth I(f, Omega) and the derived depth of I(Omega) mod (f), with a cross-check.

    The cross-check greedily builds a regular sequence modulo (f) out of random
    rational combinations of the coefficients of Omega; it confirms when the
    sequence reaches the derived length.
    """
    fs = list(fs)
    if not is_regular_sequence(fs):
        raise ValueError("hypothesis violated: fs is not a regular sequence")
    ell = len(fs)
    ring = sys.ring
    total = Ideal(ring, fs) + sys.I_Omega
    if total.is_unit():
        return AdditivityReport(ell, INFINITE, INFINITE, unit_ideal=True)
    d = depth(total).depth_value
    target = d - ell
    coeffs = [c for c in sys.Omega.coefficients() if c]
    modulo = Ideal(ring, fs)
    rng = random.Random(seed)
    seq: List[Poly] = []
    used = 0
    while len(seq) < target and used < attempts and coeffs:
        used += 1
        weights = [rng.randint(-5, 5) for _ in coeffs]
        if not any(weights):
            continue
        g = ring.zero()
        for w, c in zip(weights, coeffs):
            g = g + c * w
        if g and is_regular_sequence(seq + [g], modulo=modulo):
            seq.append(g)
    return AdditivityReport(
        ell, d, target, confirmed=(len(seq) == target), sequence=seq, attempts_used=used
    )


# -- logarithmic residues -----------------------------------------------------


@dataclass(frozen=True)
class LogResidueProblem:
    fs: Tuple[Poly, ...]
    eta: ExtElement

    def __post_init__(self):
        object.__setattr__(self, "fs", tuple(self.fs))
        if not self.fs:
            raise ValueError("need at least one f")
        ring = self.fs[0].ring
        if self.eta.m != ring.nvars:
            raise ValueError(f"eta must live in rank {ring.nvars} (one slot per variable)")
        if self.eta.degree < len(self.fs):
            raise ValueError("degree of eta must be at least the number of fs")

    @property
    def ring(self):
        return self.fs[0].ring

    @property
    def omegas(self) -> List[ExtElement]:
        return [differential(f) for f in self.fs]

    def residue_problem(self) -> ResidueProblem:
        sys = OmegaSystem(self.omegas, m=self.eta.m, ring=self.ring)
        return ResidueProblem(DivisionProblem(sys, self.eta, len(self.fs)), self.fs)


@dataclass
class LogResidueResult:
    representation: ResidueRepresentation
    kernel: List[DualVector]
    residues: Dict[Tuple[MultiIndex, Tuple[int, ...]], Poly]
    condition_B: ConditionBReport
    depth_quotient: Union[int, str, None]
    dc_holds: Optional[bool]


def quotient_depth(rp: ResidueProblem):
    """depth of I(Omega) modulo (f) as depth I(f, Omega) - len(fs), and whether (DC) holds.

    Both are None when fs is not a regular sequence, since the identity needs it.
    """
    fs = list(rp.fs)
    if not is_regular_sequence(fs):
        return None, None
    total = rp.ideal_F + rp.base.sys.I_Omega
    if total.is_unit():
        return INFINITE, True
    dq = depth(total).depth_value - len(fs)
    return dq, rp.base.p - rp.base.r <= dq - 2


def log_residue(prob: LogResidueProblem, n_max: int = DEFAULT_N_MAX) -> Optional[LogResidueResult]:
    """Represent eta with omega_i = df_i modulo (f) and evaluate the residue on the kernel.

    Falls back to powers of a coefficient of Omega that survives modulo (f)
    when no plain representation exists; None means nothing was found up to n_max.
    """
    rp = prob.residue_problem()
    for i, j in combinations(range(len(prob.fs)), 2):
        if Ideal(prob.ring, [prob.fs[i]]) == Ideal(prob.ring, [prob.fs[j]]):
            warnings.warn("f_%d and f_%d generate the same ideal (repeated factor)" % (i + 1, j + 1))
    report_b = check_condition_B_mod(rp)
    dq, dc = quotient_depth(rp)
    rep = solve_A_mod(rp)
    if rep is None:
        candidates = [c for c in rp.base.sys.Omega.coefficients() if normal_form(c, rp.ideal_F)]
        if not candidates:
            raise DegenerateOmegaError("degenerate: Omega vanishes modulo (f)")
        rep = solve_A_prime_mod(rp, candidates[0], n_max)
        if rep is None:
            return None
    kernel = common_kernel(rp.base.sys)
    q = rp.base.p - rp.base.r
    residues = {}
    for choice in product(range(len(kernel)), repeat=q):
        alphas = [kernel[c] for c in choice]
        for J, v in residue_on_kernel(rp, rep, alphas).items():
            residues[(J, choice)] = v
    return LogResidueResult(rep, kernel, residues, report_b, dq, dc)


# -- fraction form ------------------------------------------------------------


def _wrap(f: Poly) -> str:
    s = str(f)
    return s if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*|\d+", s) else f"({s})"


def _product_text(fs: Sequence[Poly]) -> str:
    parts = [_wrap(f) for f in fs]
    if all(len(p) == 1 or p.startswith("(") for p in parts):
        return "".join(parts)
    return "·".join(parts)


def _dlog(f: Poly) -> str:
    w = _wrap(f)
    return f"d{w}/{w}"


def _form_text(eta: ExtElement) -> str:
    names = eta.ring.variables
    terms = []
    for I in sorted(eta.terms):
        c = eta.terms[I]
        sign = "+"
        if len(c) == 1 and c.leading_coefficient() < 0:
            sign, c = "-", -c
        basis = "∧".join("d" + names[i - 1] for i in I)
        if not basis:
            terms.append((sign, str(c)))
        elif c == 1:
            terms.append((sign, basis))
        else:
            terms.append((sign, f"{_wrap(c)}·{basis}"))
    if not terms:
        return "0"
    text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text if len(terms) == 1 else f"({text})"


def _lhs(prob: LogResidueProblem, rep: ResidueRepresentation) -> str:
    prefix = ""
    if rep.exponent_n == 1:
        prefix = f"{_wrap(rep.scalar_a)}·"
    elif rep.exponent_n > 1:
        prefix = f"{_wrap(rep.scalar_a)}^{rep.exponent_n}·"
    fs = prob.fs
    denom = _wrap(fs[0]) if len(fs) == 1 else "(" + _product_text(fs) + ")"
    return f"{prefix}η/{denom}"


def fraction_form(prob: LogResidueProblem, rep: ResidueRepresentation) -> dict:
    """Structured pieces of the identity for eta / (f_1 ... f_k)."""
    fs = prob.fs
    gamma = rep.gammas.get(tuple(range(1, len(fs) + 1)))
    xis = []
    for j, xi in enumerate(rep.xis):
        if xi:
            others = [f for i, f in enumerate(fs) if i != j]
            xis.append(
                {
                    "name": "ξ" + str(j + 1).translate(_SUBSCRIPTS),
                    "value": _form_text(xi),
                    "denominator": _product_text(others) if others else "",
                }
            )
    return {
        "lhs": _lhs(prob, rep),
        "dlogs": [_dlog(f) for f in fs],
        "gamma": _form_text(gamma) if gamma is not None else "0",
        "xis": xis,
    }


def format_fraction_form(prob: LogResidueProblem, rep: ResidueRepresentation) -> str:
    """Text such as ``η/(xy) = dx/x ∧ dy/y``, followed by the values of any xi terms."""
    if len(rep.gammas) != 1:
        raise ValueError("fraction form needs r = k")
    parts = fraction_form(prob, rep)
    rhs = " ∧ ".join(parts["dlogs"])
    gamma = rep.gammas[tuple(range(1, len(prob.fs) + 1))]
    if gamma.degree == 0:
        c = gamma.coefficient(())
        if c.is_zero():
            rhs = "0"
        elif c != 1:
            rhs = f"{_wrap(c)}·{rhs}"
    elif gamma.is_zero():
        rhs = "0"
    else:
        rhs = f"{rhs} ∧ {parts['gamma']}"
    for xi in parts["xis"]:
        rhs += f" + {xi['name']}/{xi['denominator']}" if xi["denominator"] else f" + {xi['name']}"
    lines = [f"{parts['lhs']} = {rhs}"]
    for xi in parts["xis"]:
        lines.append(f"  {xi['name']} = {xi['value']}")
    return "\n".join(lines)
