"""Command-line front end. All state lives in q-expansion files; output is
deterministic (sorted discriminants, 15 significant digits).

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 precision
error, 4 inconclusive."""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import local_factors as lf
from . import twoadic
from .arith import fundamental_discriminants, is_fundamental
from .errors import KZError, PrecisionError
from .kz import FAIL, INCONCLUSIVE, PASS, kz_constant, ramanujan_scan, report_kv, report_text, verify_report
from .kz import kohnen_condition_violations
from .lfunctions import NewformData, central_lvalue, root_number
from .qseries import (
    EtaQuotientSpec,
    QExpansion,
    eisenstein_F,
    eta_quotient,
    kohnen_plus_basis,
    proportionality,
    read_qexpansion,
    serialize,
    shimura_lift,
    theta_series,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_PRECISION, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4
LOCAL_TOL = 1e-12


class InputError(KZError):
    pass


def _fmt(x) -> str:
    if isinstance(x, complex):
        # values here are O(1); drop float dust from exact zeros
        re, im = (0.0 if abs(t) < 1e-14 else t for t in (x.real, x.imag))
        return f"{re:.15g}{im:+.15g}j"
    if isinstance(x, float):
        return format(x, ".15g")
    return str(x)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_form(path: str) -> QExpansion:
    if not Path(path).is_file():
        raise InputError(f"no such file: {path}")
    return read_qexpansion(path)


def _load_newform(path: str) -> NewformData:
    return NewformData.from_qexpansion(_load_form(path))


def _discriminants(args) -> list[int]:
    if args.d:
        Ds = []
        for chunk in args.d:
            for tok in chunk.split(","):
                D = int(tok)
                if not is_fundamental(D):
                    raise InputError(f"{D} is not a fundamental discriminant")
                Ds.append(D)
        return sorted(set(Ds), key=lambda D: (abs(D), D < 0))
    if args.d_min is None or args.d_max is None:
        raise InputError("give --d or both --d-min and --d-max")
    return fundamental_discriminants(args.d_min, args.d_max)


def _check_common(args) -> None:
    tol = getattr(args, "tol", None)
    if tol is not None and not tol > 0:
        raise InputError("--tol must be positive")
    prec = getattr(args, "prec", None)
    if prec is not None and prec < 16:
        raise InputError("--prec must be at least 16")


# --- construct ---------------------------------------------------------------


def cmd_construct(args) -> int:
    N = args.prec
    if args.eta:
        forms = [eta_quotient(EtaQuotientSpec.parse(args.eta), N)]
    elif args.theta:
        forms = [theta_series(N)]
    elif args.eisenstein:
        forms = [eisenstein_F(N)]
    else:
        if args.k is None:
            raise InputError("--plus-space needs --k")
        forms = kohnen_plus_basis(args.k, N, cuspidal=not args.include_eisenstein)
        if not forms:
            raise InputError(f"plus space of weight {args.k}+1/2 is zero")
    if args.out is None:
        sys.stdout.write("".join(serialize(f) for f in forms))
        return EXIT_PASS
    if len(forms) == 1:
        Path(args.out).write_text(serialize(forms[0]), encoding="utf-8")
    else:
        base = Path(args.out)
        for j, f in enumerate(forms):
            base.with_name(f"{base.stem}_{j}{base.suffix}").write_text(serialize(f), encoding="utf-8")
    return EXIT_PASS


# --- lvalue ------------------------------------------------------------------


def cmd_lvalue(args) -> int:
    f = _load_newform(args.newform)
    lines = []
    for D in _discriminants(args):
        res = central_lvalue(f, D, args.tol)
        lines.append(
            f"D={D} eps={root_number(f, D):+d} L={_fmt(res.value)} "
            f"L_err={_fmt(res.abs_error_bound)} terms={res.terms_used}"
        )
    _emit("\n".join(lines) + "\n" if lines else "", args.out)
    return EXIT_PASS if lines else EXIT_INCONCLUSIVE


# --- verify ------------------------------------------------------------------


def _parse_class(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    return tuple(sorted(int(p) for p in text.split(",") if p.strip()))


def cmd_verify(args) -> int:
    f = _load_newform(args.newform)
    g = _load_form(args.form)
    rep = verify_report(f, g, args.d_min, args.d_max, args.tol, _parse_class(args.cls), args.l_err)
    _emit(report_kv(rep) if args.format == "kv" else report_text(rep), args.out)
    return {PASS: EXIT_PASS, FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_INCONCLUSIVE}[rep.overall]


# --- local -------------------------------------------------------------------


def _local_quotient() -> tuple[list[str], bool]:
    lines = ["kind q s tau dclass e_phi e_phitilde quotient lfactor multiple residual"]
    ok = True
    for r in lf.sweep_rows():
        ok &= r["residual"] < LOCAL_TOL
        lines.append(
            " ".join(
                [r["kind"], str(r["q"]), _fmt(r["s"]), f"{r['tau']:+d}", r["dclass"]]
                + [_fmt(r[key]) for key in ("e_phi", "e_phitilde", "quotient", "lfactor", "multiple", "residual")]
            )
        )
    lines.append("# place 2")
    for r in (0.0, 0.4, 1.3):
        for D in (5, -3, 8, 12, -4):
            for chi in ((1, -1) if D % 4 == 1 else (1,)):
                res = lf.e2_quotient_check(r, D, chi)
                ok &= res < LOCAL_TOL
                lines.append(f"place2 r={_fmt(r)} D={D} chi_D(2)={chi:+d} case={lf.e2_case(D)} residual={_fmt(res)}")
    return lines, ok


def _local_arch() -> tuple[list[str], bool]:
    lines, ok = [], True
    for k in range(1, 9):
        for n in (1, 2):
            for D in (1, 5, 13):
                res = lf.arch_quotient_check(k, n, D)
                ok &= res < LOCAL_TOL
                lines.append(f"arch k={k} n={n} D={D} log_quotient={_fmt(lf.log_arch_quotient_closed(k, n, D))} residual={_fmt(res)}")
    return lines, ok


def _local_duplication() -> tuple[list[str], bool]:
    lines, ok = [], True
    for k in range(1, 21):
        res = lf.gamma_duplication_check(k)
        ok &= res < LOCAL_TOL
        lines.append(f"duplication k={k} rel_residual={_fmt(res)}")
    return lines, ok


def _local_gauss2() -> tuple[list[str], bool]:
    lines, ok = [], True
    named = (("chi_2", Fraction(1, 8)), ("chi_-2", Fraction(1, 8)), ("chi_-1", Fraction(1, 4)))
    for nu, t in named:
        lines.append(f"gauss2 nu={nu} t={t} value={_fmt(complex(twoadic.gauss_sum_2(nu, t)))}")
    for nu, t in twoadic.GAUSS_GRID:
        val = twoadic.gauss_sum_2(nu, t)
        pred = twoadic.gauss_sum_nonvanishing_predicted(nu, t)
        agree = (not val.is_zero()) == pred
        ok &= agree
        lines.append(f"gauss2 nu={nu} t={t} nonzero={int(not val.is_zero())} predicted={int(pred)} agree={int(agree)}")
    return lines, ok


def _whittaker_grid():
    for delta in twoadic.SQUARE_CLASSES:
        for Delta in (1, 2, 4):
            for kp in (0, 1):
                yield (delta, Fraction(1, Delta)), kp


def _local_whittaker() -> tuple[list[str], bool]:
    lines, ok = [], True
    for z, kp in _whittaker_grid():
        closed = twoadic.whittaker_F22_closed(z, kp)
        agree = closed == twoadic.whittaker_F22_series(z, kp)
        ok &= agree
        printed = twoadic.whittaker_F22_printed(z, kp)
        tab = "n/a" if printed is None else str(int(printed == closed))
        lines.append(f"whittaker delta={z[0]} Delta=1/{z[1].denominator} kp={kp} closed_eq_series={int(agree)} table_eq={tab}")
    return lines, ok


def _local_kohnen_vector() -> tuple[list[str], bool]:
    lines, ok = [], True
    for z, kp in _whittaker_grid():
        vanishes = twoadic.kohnen_vector_exact(z, kp).is_zero()
        pred = twoadic.kohnen_vanishing_predicted(z, kp)
        ok &= vanishes == pred
        lines.append(
            f"kohnen_vector z={twoadic.as_number(z)} kp={kp} vanishes={int(vanishes)} predicted={int(pred)}"
        )
    return lines, ok


def _local_special() -> tuple[list[str], bool]:
    lines, ok = [], True
    for q in (3, 5, 7):
        for tau in (1, -1):
            for dv, ds in ((0, 1), (0, -1), (1, 1)):
                for Dv in (-1, 0, 1, 2):
                    a = lf.special_whittaker_table(dv, ds, Dv, tau, q)
                    b = lf.special_whittaker_via_basis(dv, ds, Dv, tau, q)
                    ok &= abs(a - b) < LOCAL_TOL
                    lines.append(f"special q={q} tau={tau:+d} delta_val={dv} delta_sym={ds:+d} Delta_val={Dv} value={_fmt(a)} residual={_fmt(abs(a - b))}")
    return lines, ok


LOCAL_KINDS: dict[str, Callable[[], tuple[list[str], bool]]] = {
    "quotient": _local_quotient,
    "arch": _local_arch,
    "duplication": _local_duplication,
    "gauss2": _local_gauss2,
    "whittaker": _local_whittaker,
    "kohnen-vector": _local_kohnen_vector,
    "special": _local_special,
}


def cmd_local(args) -> int:
    kinds = list(LOCAL_KINDS) if args.kind == "all" else [args.kind]
    lines, ok = [], True
    for kind in kinds:
        body, good = LOCAL_KINDS[kind]()
        lines.extend(body)
        lines.append(f"summary kind={kind} status={PASS if good else FAIL}")
        ok &= good
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_PASS if ok else EXIT_FAIL


# --- shimura / scan ----------------------------------------------------------


def cmd_shimura(args) -> int:
    g = _load_form(args.form)
    lift = shimura_lift(g, args.d0, args.k, args.n)
    lines = [serialize(lift).rstrip("\n")]
    code = EXIT_PASS
    if args.compare:
        f = _load_form(args.compare)
        lam = proportionality(lift, f, min(args.n, f.precision))
        lines.append(f"# proportional={int(lam is not None)} factor={lam if lam is not None else 'none'}")
        code = EXIT_PASS if lam is not None and lam != 0 else EXIT_FAIL
    _emit("\n".join(lines) + "\n", args.out)
    return code


def cmd_scan(args) -> int:
    g = _load_form(args.form)
    k = args.k
    if g.weight != Fraction(2 * k + 1, 2):
        raise InputError(f"form has weight {g.weight}, not {k}+1/2")
    n_max = args.n_max or g.precision
    best, arg = ramanujan_scan(g, k, n_max)
    bad = kohnen_condition_violations(g, k)
    lines = [
        f"ramanujan max={_fmt(best)} at_n={arg} n_max={min(n_max, g.precision)}",
        f"kohnen_violations count={len(bad)} first={','.join(map(str, bad[:10])) or 'none'}",
    ]
    if args.newform:
        f = _load_newform(args.newform)
        lines.append(f"deligne_violations primes={','.join(map(str, f.deligne_violations())) or 'none'}")
        for S in ((),) + tuple((p,) for p in f.primes):
            r, e = kz_constant(f, S, 0)
            lines.append(f"kz_constant S={{{','.join(map(str, S))}}} t=0 value={r}*pi^{e}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_FAIL if bad else EXIT_PASS


# --- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kzcheck", description="Numerical checks of coefficient / central value identities.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a q-expansion file")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--eta", help='eta quotient, e.g. "1^24" or "1^2,11^2"')
    src.add_argument("--theta", action="store_true")
    src.add_argument("--eisenstein", action="store_true", help="weight-2 level-4 form F")
    src.add_argument("--plus-space", action="store_true", help="basis of the weight k+1/2 plus space")
    c.add_argument("--k", type=int)
    c.add_argument("--include-eisenstein", action="store_true", help="plus space without the cusp condition")
    c.add_argument("--prec", type=int, default=200)
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    lv = sub.add_parser("lvalue", help="central values L(f, D, k)")
    lv.add_argument("--newform", required=True)
    lv.add_argument("--d", action="append", help="discriminant(s), comma separated; repeatable")
    lv.add_argument("--d-min", type=int)
    lv.add_argument("--d-max", type=int)
    lv.add_argument("--tol", type=float, default=1e-10, help="absolute error target per value")
    lv.add_argument("--out")
    lv.set_defaults(func=cmd_lvalue)

    v = sub.add_parser("verify", help="ratio constancy and sign checks")
    v.add_argument("--newform", required=True)
    v.add_argument("--form", required=True, help="half-integral weight form")
    v.add_argument("--d-min", type=int, required=True)
    v.add_argument("--d-max", type=int, required=True)
    v.add_argument("--tol", type=float, default=1e-6, help="relative tolerance for ratio constancy")
    v.add_argument("--l-err", type=float, default=1e-10, help="absolute error target per L-value")
    v.add_argument("--class", dest="cls", help="declared class S, comma-separated primes")
    v.add_argument("--format", choices=("text", "kv"), default="text")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    lo = sub.add_parser("local", help="local constant sweeps and 2-adic tables")
    lo.add_argument("--kind", choices=("all",) + tuple(LOCAL_KINDS), default="all")
    lo.add_argument("--out")
    lo.set_defaults(func=cmd_local)

    sh = sub.add_parser("shimura", help="Shimura lift of a half-integral weight form")
    sh.add_argument("--form", required=True)
    sh.add_argument("--d0", type=int, default=1)
    sh.add_argument("--k", type=int, required=True)
    sh.add_argument("--n", type=int, default=50, help="number of lifted coefficients")
    sh.add_argument("--compare", help="integral weight form expected to be proportional")
    sh.add_argument("--out")
    sh.set_defaults(func=cmd_shimura)

    sc = sub.add_parser("scan", help="coefficient growth and plus-condition scan")
    sc.add_argument("--form", required=True)
    sc.add_argument("--k", type=int, required=True)
    sc.add_argument("--n-max", type=int)
    sc.add_argument("--newform")
    sc.add_argument("--out")
    sc.set_defaults(func=cmd_scan)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_INPUT
    try:
        _check_common(args)
        return args.func(args)
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (KZError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
