"""Command-line front end: ``extdiv <verb> problem.json``.

Exit codes: 0 solved/true, 1 predicate false, 2 condition (B) fails,
3 nothing found within n_max (inconclusive), 4 degenerate, 64 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from .division import (
    DEFAULT_N_MAX,
    INFINITE,
    DegenerateOmegaError,
    check_condition_B,
    depth,
    depth_condition_holds,
    solve_A,
    solve_A_prime,
)
from .exterior import ExtElement
from .koszul import DegenerateIdealError, cohomology_vanishes, is_regular_sequence, koszul_depth
from .problems import (
    ProblemError,
    _int,
    optional_int,
    parse_division,
    parse_log_residue,
    parse_omegas,
    parse_optional_poly,
    parse_poly_list,
    parse_residue,
    parse_ring,
    problem_hash,
)
from .residua import (
    check_condition_B_mod,
    depth_additivity_check,
    format_fraction_form,
    fraction_form,
    log_residue,
    quotient_depth,
    solve_A_mod,
    solve_A_prime_mod,
)
from .ring import FreeVector, Ideal

EXIT_OK, EXIT_FALSE, EXIT_B_FAILS, EXIT_INCONCLUSIVE, EXIT_DEGENERATE, EXIT_INPUT = 0, 1, 2, 3, 4, 64

VERBS = (
    "check-b",
    "divide",
    "divide-power",
    "depth",
    "koszul",
    "regseq",
    "residue",
    "log-residue",
    "prop1-check",
)

Outcome = Tuple[int, dict, List[str]]


def resolve_n_max(flag: Optional[int], data: dict) -> int:
    if flag is not None:
        return flag
    from_file = optional_int(data, "n_max")
    if from_file is not None:
        return from_file
    env = os.environ.get("EXTDIV_NMAX")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ProblemError("EXTDIV_NMAX", f"expected an integer, got {env!r}") from None
        if value < 0:
            raise ProblemError("EXTDIV_NMAX", "must be non-negative")
        return value
    return DEFAULT_N_MAX


def _depth_json(d):
    return d if d is None or d == INFINITE else int(d)


def _label(J) -> str:
    return "ω" + "".join(str(j) for j in J) if len(J) == 1 else "ω_{" + ",".join(str(j) for j in J) + "}"


def _identity(lhs: str, gammas, extra: List[Tuple[str, ExtElement]] = ()) -> str:
    parts = []
    for J, g in sorted(gammas.items()):
        if g:
            parts.append(f"{_label(J)} ∧ ({g})")
    for name, x in extra:
        if x:
            parts.append(f"{name}·({x})")
    return f"{lhs} = " + (" + ".join(parts) if parts else "0")


def _b_json(report) -> dict:
    return {
        "condition_B": report.holds,
        "vacuous": report.vacuous,
        "witnesses": [
            {"index": list(I), "product": w.to_json()} for I, w in report.witnesses
        ],
    }


def _b_text(report) -> str:
    if report.vacuous:
        return "condition (B): holds (vacuous, s + p > m)"
    if report.holds:
        return "condition (B): holds"
    lines = ["condition (B): fails"]
    for I, w in report.witnesses:
        lines.append(f"  {_label(I)} ∧ η = {w}")
    return "\n".join(lines)


def _dc_json(report) -> dict:
    return {
        "depth": _depth_json(report.depth_value),
        "holds": report.dc_holds,
        "outside_verified_criterion": report.outside_verified_criterion,
    }


def _dc_text(report) -> str:
    verdict = "holds" if report.dc_holds else "fails"
    line = f"depth I(Ω) = {report.depth_value} ({report.method}); (DC) {verdict}"
    if report.outside_verified_criterion:
        line += " [p - r = depth - 1 with s + p > m: outside verified criterion]"
    return line


def _lhs(a, n) -> str:
    if n == 0:
        return "η"
    return f"({a})·η" if n == 1 else f"({a})^{n}·η"


# -- verbs -------------------------------------------------------------------


def run_check_b(data: dict, args) -> Outcome:
    prob = parse_division(data, args.order)
    report = check_condition_B(prob)
    dc = depth_condition_holds(prob)
    out = {**_b_json(report), "dc": _dc_json(dc)}
    text = [_b_text(report), _dc_text(dc)]
    if report.degenerate:
        out["status"] = "degenerate"
        text.insert(0, "status: degenerate (Ω = 0)")
        return EXIT_DEGENERATE, out, text
    out["status"] = "holds" if report.holds else "fails"
    text.insert(0, f"status: {out['status']}")
    return (EXIT_OK if report.holds else EXIT_B_FAILS), out, text


def run_divide(data: dict, args) -> Outcome:
    prob = parse_division(data, args.order)
    report = check_condition_B(prob)
    dc = depth_condition_holds(prob)
    rep = solve_A(prob)
    out = {**_b_json(report), "dc": _dc_json(dc)}
    out["representation"] = rep.to_json() if rep else None
    text = [_b_text(report), _dc_text(dc)]
    if rep is not None:
        out["status"] = "solved"
        text.append("identity: " + _identity("η", rep.gammas))
        code = EXIT_OK
    else:
        out["status"] = "no_representation"
        code = EXIT_B_FAILS if not report.holds else EXIT_INCONCLUSIVE
    text.insert(0, f"status: {out['status']}")
    return code, out, text


def _scalar_a(data: dict, args, ring):
    if args.a is not None:
        from .problems import parse_poly_field

        return parse_poly_field(args.a, ring, "--a")
    return parse_optional_poly(data, "a", ring)


def run_divide_power(data: dict, args) -> Outcome:
    prob = parse_division(data, args.order)
    a = _scalar_a(data, args, prob.ring)
    if a is None:
        raise ProblemError("a", "missing field (or pass --a)")
    if a.is_zero():
        raise ProblemError("a", "a must be nonzero")
    n_max = resolve_n_max(args.n_max, data)
    report = check_condition_B(prob)
    out = {**_b_json(report), "dc": _dc_json(depth_condition_holds(prob)), "n_max": n_max}
    out["a_in_I_Omega"] = prob.sys.I_Omega.contains(a)
    text = [_b_text(report)]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rep = solve_A_prime(prob, a, n_max)
    except DegenerateOmegaError:
        out.update(representation=None, status="degenerate")
        return EXIT_DEGENERATE, out, ["status: degenerate (Ω = 0)"] + text
    out["representation"] = rep.to_json() if rep else None
    if rep is not None:
        out["status"] = "solved"
        text.append("identity: " + _identity(_lhs(a, rep.exponent_n), rep.gammas))
        code = EXIT_OK
    elif not report.holds:
        out["status"] = "no_representation"
        code = EXIT_B_FAILS
    else:
        out["status"] = "inconclusive"
        text.append(f"no representation for n <= {n_max}; not a disproof")
        code = EXIT_INCONCLUSIVE
    text.insert(0, f"status: {out['status']}")
    return code, out, text


def run_depth(data: dict, args) -> Outcome:
    ring = parse_ring(data, args.order)
    ideal = Ideal(ring, parse_poly_list(data, "ideal", ring))
    rep = depth(ideal)
    out = {"depth": _depth_json(rep.depth_value), "method": rep.method, "status": "ok"}
    text = [f"depth = {rep.depth_value} (codim)"]
    code = EXIT_OK
    if args.cross_check:
        ks = depth(ideal, method="koszul")
        agree = ks.depth_value == rep.depth_value
        out["koszul_depth"] = _depth_json(ks.depth_value)
        out["agree"] = agree
        text.append(f"koszul depth = {ks.depth_value}; {'agree' if agree else 'DISAGREE'}")
        if not agree:
            out["status"] = "mismatch"
            code = EXIT_FALSE
    return code, out, text


def run_koszul(data: dict, args) -> Outcome:
    ring = parse_ring(data, args.order)
    seq = parse_poly_list(data, "sequence", ring)
    if not seq:
        raise ProblemError("sequence", "need at least one polynomial")
    cap = optional_int(data, "cap")
    omega = FreeVector(seq)
    try:
        d = koszul_depth(omega, cap)
    except DegenerateIdealError as exc:
        return EXIT_DEGENERATE, {"status": "degenerate", "reason": exc.code}, [f"status: degenerate ({exc})"]
    vanishing = [cohomology_vanishes(omega, i) for i in range(omega.rank)]
    out = {"depth": d, "vanishing": vanishing, "status": "ok"}
    text = [f"koszul depth = {d}", "cohomology vanishes: " + ", ".join(
        f"H^{i}={'0' if v else 'nonzero'}" for i, v in enumerate(vanishing))]
    code = EXIT_OK
    if args.cross_check:
        cd = depth(Ideal(ring, seq)).depth_value
        agree = cd == d
        out.update(codim_depth=_depth_json(cd), agree=agree)
        text.append(f"codim depth = {cd}; {'agree' if agree else 'DISAGREE'}")
        if not agree:
            out["status"] = "mismatch"
            code = EXIT_FALSE
    return code, out, text


def run_regseq(data: dict, args) -> Outcome:
    ring = parse_ring(data, args.order)
    seq = parse_poly_list(data, "sequence", ring)
    modulo = Ideal(ring, parse_poly_list(data, "modulo", ring)) if "modulo" in data else None
    ok = is_regular_sequence(seq, modulo)
    out = {"regular": ok, "status": "true" if ok else "false"}
    return (EXIT_OK if ok else EXIT_FALSE), out, [f"regular sequence: {ok}"]


def _residue_dc(prob) -> dict:
    dq, holds = quotient_depth(prob)
    return {"depth": _depth_json(dq), "holds": holds}


def run_residue(data: dict, args) -> Outcome:
    prob = parse_residue(data, args.order)
    a = _scalar_a(data, args, prob.base.ring)
    n_max = resolve_n_max(args.n_max, data)
    report = check_condition_B_mod(prob)
    out = {**_b_json(report), "dc": _residue_dc(prob)}
    text = [_b_text(report)]
    rep = solve_A_mod(prob)
    if rep is None and a is not None:
        if a.is_zero():
            raise ProblemError("a", "a must be nonzero")
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                rep = solve_A_prime_mod(prob, a, n_max)
        except DegenerateOmegaError:
            out.update(representation=None, status="degenerate")
            return EXIT_DEGENERATE, out, ["status: degenerate (Ω = 0)"] + text
    out["representation"] = rep.to_json() if rep else None
    if rep is not None:
        out["status"] = "solved"
        xis = [(f"({f})", x) for f, x in zip(prob.fs, rep.xis)]
        text.append("identity: " + _identity(_lhs(rep.scalar_a, rep.exponent_n), rep.gammas, xis))
        code = EXIT_OK
    elif not report.holds:
        out["status"] = "no_representation"
        code = EXIT_B_FAILS
    else:
        out["status"] = "inconclusive" if a is not None else "no_representation"
        code = EXIT_INCONCLUSIVE
    text.insert(0, f"status: {out['status']}")
    return code, out, text


def run_log_residue(data: dict, args) -> Outcome:
    prob = parse_log_residue(data, args.order)
    n_max = resolve_n_max(args.n_max, data)
    rp = prob.residue_problem()
    report = check_condition_B_mod(rp)
    dq, dc = quotient_depth(rp)
    out = {**_b_json(report), "dc": {"depth": _depth_json(dq), "holds": dc}, "n_max": n_max}
    text = [_b_text(report)]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            result = log_residue(prob, n_max)
    except DegenerateOmegaError:
        out.update(representation=None, status="degenerate")
        return EXIT_DEGENERATE, out, ["status: degenerate (Ω vanishes modulo f)"] + text
    if result is None:
        out["representation"] = None
        out["status"] = "no_representation" if not report.holds else "inconclusive"
        code = EXIT_B_FAILS if not report.holds else EXIT_INCONCLUSIVE
        return code, out, [f"status: {out['status']}"] + text
    rep = result.representation
    out["representation"] = rep.to_json()
    out["kernel"] = [[str(e) for e in v.entries] for v in result.kernel]
    out["residues"] = [
        {"J": list(J), "alphas": list(choice), "value": str(v)}
        for (J, choice), v in sorted(result.residues.items())
    ]
    out["fraction_form"] = {"text": format_fraction_form(prob, rep), **fraction_form(prob, rep)}
    out["status"] = "solved"
    text.append(format_fraction_form(prob, rep))
    for (J, choice), v in sorted(result.residues.items()):
        text.append(f"residue γ_{list(J)} on kernel generators {list(choice)}: {v}")
    return EXIT_OK, out, ["status: solved"] + text


def run_prop1(data: dict, args) -> Outcome:
    ring = parse_ring(data, args.order)
    m = _int(data, "m", 1)
    sys_ = parse_omegas(data, ring, m)
    fs = parse_poly_list(data, "fs", ring)
    attempts = optional_int(data, "attempts")
    seed = optional_int(data, "seed")
    try:
        rep = depth_additivity_check(fs, sys_, 32 if attempts is None else attempts, seed or 0)
    except ValueError as exc:
        raise ProblemError("fs", str(exc)) from None
    out = {
        "ell": rep.ell,
        "depth_total": _depth_json(rep.depth_total),
        "depth_quotient": _depth_json(rep.depth_quotient),
        "confirmed": rep.confirmed,
        "sequence": [str(g) for g in rep.sequence],
    }
    if rep.unit_ideal:
        out["status"] = "degenerate"
        return EXIT_DEGENERATE, out, ["status: degenerate (unit ideal, depth infinite)"]
    out["status"] = "confirmed" if rep.confirmed else "inconclusive"
    text = [
        f"status: {out['status']}",
        f"depth I(f, Ω) = {rep.depth_total}, depth I(Ω̄) = {rep.depth_quotient}, ℓ = {rep.ell}",
        "regular sequence modulo (f): " + (", ".join(out["sequence"]) or "(empty)"),
    ]
    return (EXIT_OK if rep.confirmed else EXIT_INCONCLUSIVE), out, text


HANDLERS: Dict[str, Callable[[dict, argparse.Namespace], Outcome]] = {
    "check-b": run_check_b,
    "divide": run_divide,
    "divide-power": run_divide_power,
    "depth": run_depth,
    "koszul": run_koszul,
    "regseq": run_regseq,
    "residue": run_residue,
    "log-residue": run_log_residue,
    "prop1-check": run_prop1,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extdiv", description=__doc__.splitlines()[0])
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("input", type=Path, help="problem file (JSON)")
    parser.add_argument("--order", choices=("grevlex", "lex"), help="override the monomial order")
    parser.add_argument("--n-max", type=int, dest="n_max", help="largest power of a to try")
    parser.add_argument("--a", help="the scalar a for power representations")
    parser.add_argument("--cross-check", action="store_true", help="verify depth via Koszul cohomology")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.n_max is not None and args.n_max < 0:
            raise ProblemError("--n-max", "must be non-negative")
        try:
            raw = args.input.read_text(encoding="utf-8")
        except OSError as exc:
            raise ProblemError("input", f"cannot read {args.input}: {exc.strerror}") from None
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ProblemError("input", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ProblemError("<root>", "expected a JSON object")
        code, out, text = HANDLERS[args.verb](data, args)
    except ProblemError as exc:
        print(f"extdiv: input error: {exc}", file=stderr)
        return EXIT_INPUT
    result = {"verb": args.verb, "problem_hash": problem_hash(data), **out}
    if args.format == "json":
        stdout.write(json.dumps(result, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        stdout.write("\n".join(text) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
