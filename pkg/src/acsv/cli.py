"""Command-line front end: ``acsv gb|spai|critical|heights|asympt|series``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import mpmath

from . import __version__
from .asympt import DegenerateSaddleError, NotSmoothError, SeriesWindow, select_contributions, smooth_leading_term
from .critical import PositiveDimensionalError, affine_critical_points
from .groebner import Ideal
from .oracle import coefficients
from .polyring import Direction, Polynomial, PolynomialSyntaxError, TermOrder, parse, parse_list, render
from .roots import CertificationError
from .spai import SpaiReport, StratumError, StratumSpec, algorithm1, algorithm2

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_POSITIVE_DIM = 3
EXIT_NOT_SMOOTH = 4
EXIT_SPAI = 10

DEFAULT_PREC = 128


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    variables: tuple
    polys: dict = field(default_factory=dict)
    direction: Direction | None = None
    prec: int = DEFAULT_PREC
    json: bool = False
    terms: int = 16
    order: str = "grevlex"
    exclude: str | None = None
    strata: str | None = None
    symbolic: bool = False

    def check(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise UsageError("variables must be distinct")
        if self.direction is not None and len(self.direction) != len(self.variables):
            raise UsageError("direction length must equal the number of variables")
        if not 64 <= self.prec <= 4096:
            raise UsageError("precision must lie in [64, 4096]")


def parse_polynomial(text: str, variables) -> Polynomial:
    return parse(text, tuple(variables))


def default_prec() -> int:
    env = os.environ.get("ACSV_PREC")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"ACSV_PREC is not an integer: {env!r}")
    return DEFAULT_PREC


# ---------------------------------------------------------------------------
# rendering helpers


def _univariate_str(coeffs, var: str) -> str:
    ring = (var,)
    x = Polynomial.var(ring, var)
    p = Polynomial.constant(ring, 0)
    for k, c in enumerate(coeffs):
        if c:
            p = p + x ** k * c
    return render(p)


def _num(z) -> tuple:
    z = mpmath.mpc(z)
    return float(z.real), float(z.imag)


def _ball_json(ball, min_poly=None, var="t") -> dict:
    re, im = _num(ball.center)
    out = {"approx_re": re, "approx_im": im, "radius": float(ball.radius)}
    if min_poly is not None:
        out["min_poly"] = _univariate_str(min_poly, var)
    return out


def spai_json(rep: SpaiReport) -> dict:
    ring = rep.saturated_ideal.ring
    wit = []
    for w in rep.witnesses:
        names = ring[:len(w.point.coords)]
        coords = [_ball_json(b, mp, v) for b, mp, v in zip(w.point.coords, w.point.min_polys, names)]
        wit.append({"chart": w.chart, "coords": coords})
    eta = "H" if "H" in ring else "eta"
    heights = []
    for e in rep.eta_values:
        re, im = _num(e.ball.center)
        heights.append({
            "eta_min_poly": _univariate_str(rep.eta_poly, eta) if rep.eta_poly else None,
            "eta_exact": None if e.exact is None else str(e.exact),
            "eta_approx": [re, im],
            "height": float(e.height),
        })
    return {
        "exists": rep.exists,
        "saturated_ideal": [render(g) for g in rep.saturated_ideal.groebner()],
        "witnesses": wit,
        "heights": heights,
        "heights_status": rep.heights_status,
    }


def point_json(pt, variables) -> dict:
    return {
        "coords": [_ball_json(b, mp, v) for b, mp, v in zip(pt.coords, pt.min_polys, variables)],
        "height": float(pt.height) if pt.height is not None else None,
        "min_polys": [_univariate_str(mp, v) for mp, v in zip(pt.min_polys, variables)],
    }


# ---------------------------------------------------------------------------
# subcommands


def _read_strata(path: str, variables) -> list:
    strata = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head, sep, body = line.partition(":")
            if not sep or not head.strip().startswith("codim="):
                raise UsageError(f"{path}:{lineno}: expected 'codim=<c>: p1; p2; ...'")
            c = int(head.strip()[len("codim="):])
            strata.append(StratumSpec(parse_list(body, variables), c))
    return strata


def run_gb(cfg: RunConfig, out) -> int:
    gens = parse_list(cfg.polys["gens"], cfg.variables)
    order = TermOrder.from_string(cfg.order, len(cfg.variables))
    basis = Ideal(cfg.variables, gens).groebner(order)
    lines = [render(g) for g in basis]
    if cfg.json:
        print(json.dumps({"order": cfg.order, "basis": lines}), file=out)
    else:
        for line in lines:
            print(line, file=out)
    return EXIT_OK


def _spai_reports(cfg: RunConfig, heights: bool = True) -> list:
    if cfg.strata:
        return algorithm2(_read_strata(cfg.strata, cfg.variables), cfg.direction,
                          heights=heights, prec=cfg.prec)
    Q = parse_polynomial(cfg.polys["poly"], cfg.variables)
    exclude = None
    if cfg.exclude:
        exclude = Ideal(cfg.variables, parse_list(cfg.exclude, cfg.variables))
    return [algorithm1(Q, cfg.direction, exclude=exclude, heights=heights,
                       symbolic=cfg.symbolic, prec=cfg.prec)]


def _spai_exit(reports) -> int:
    return EXIT_SPAI if any(r.exists for r in reports) else EXIT_OK


def run_spai(cfg: RunConfig, out) -> int:
    reports = _spai_reports(cfg)
    if cfg.json:
        body = [spai_json(r) for r in reports]
        print(json.dumps(body[0] if not cfg.strata else {"strata": body}), file=out)
    else:
        for i, rep in enumerate(reports):
            if cfg.strata:
                print(f"stratum {i}:", file=out)
            _print_spai(rep, out)
    return _spai_exit(reports)


def _print_spai(rep: SpaiReport, out) -> None:
    print("saturated ideal:", file=out)
    for g in rep.saturated_ideal.groebner():
        print(f"  {render(g)}", file=out)
    if rep.exists is None:
        print("exists: undecided (symbolic direction)", file=out)
        return
    print(f"exists: {'yes' if rep.exists else 'no'}", file=out)
    for w in rep.witnesses:
        cs = ", ".join(mpmath.nstr(b.center, 15) for b in w.point.coords)
        print(f"witness: ({cs})", file=out)
    for c in rep.positive_dimensional_charts:
        print(f"chart {c}: positive dimensional", file=out)
    _print_heights(rep, out)


def _print_heights(rep: SpaiReport, out) -> None:
    if rep.heights_status == "unconstrained":
        print("heights unconstrained", file=out)
    for e in rep.eta_values:
        eta = str(e.exact) if e.exact is not None else mpmath.nstr(e.ball.center, 15)
        print(f"eta = {eta}  height = {mpmath.nstr(e.height, 15)}", file=out)


def run_heights(cfg: RunConfig, out) -> int:
    reports = _spai_reports(cfg)
    if cfg.json:
        body = [{"heights": spai_json(r)["heights"], "status": r.heights_status} for r in reports]
        print(json.dumps(body[0] if not cfg.strata else {"strata": body}), file=out)
    else:
        for rep in reports:
            _print_heights(rep, out)
    return _spai_exit(reports)


def run_critical(cfg: RunConfig, out) -> int:
    Q = parse_polynomial(cfg.polys["poly"], cfg.variables)
    pts = affine_critical_points(Q, cfg.direction, cfg.prec)
    if cfg.json:
        print(json.dumps([point_json(p, cfg.variables) for p in pts]), file=out)
    else:
        for p in pts:
            cs = ", ".join(mpmath.nstr(b.center, 20) for b in p.coords)
            print(f"({cs})  height = {mpmath.nstr(p.height, 20)}", file=out)
    return EXIT_OK


def run_asympt(cfg: RunConfig, out) -> int:
    P = parse_polynomial(cfg.polys["num"], cfg.variables)
    Q = parse_polynomial(cfg.polys["poly"], cfg.variables)
    pts = affine_critical_points(Q, cfg.direction, cfg.prec)
    terms = [smooth_leading_term(P, Q, p, cfg.direction, cfg.prec) for p in pts]
    terms.sort(key=lambda t: -abs(t.base))
    values = coefficients(P, Q, cfg.direction, cfg.terms - 1)
    sel = select_contributions(terms, SeriesWindow(cfg.direction, 0, values))
    chosen = sel.terms if sel.conclusive else terms
    weights = {id(t.source): t.weight for t in sel.terms}
    if cfg.json:
        rows = []
        for t in chosen:
            re, im = _num(t.constant)
            bre, bim = _num(t.base)
            rows.append({
                "base_approx": [bre, bim],
                "poly_order": str(t.poly_order),
                "constant_re": re,
                "constant_im": im,
                "weight": weights.get(id(t.source)) if sel.conclusive else None,
                "source_point": [list(_num(b.center)) for b in t.source.coords],
            })
        print(json.dumps({"terms": rows, "oracle_relative_error": sel.relative_error,
                          "conclusive": sel.conclusive}), file=out)
    else:
        for t in chosen:
            w = weights.get(id(t.source)) if sel.conclusive else "?"
            print(f"weight {w}: {mpmath.nstr(t.constant, 15)} * ({mpmath.nstr(t.base, 15)})^n"
                  f" * n^({t.poly_order})", file=out)
        state = "" if sel.conclusive else " (inconclusive)"
        print(f"oracle relative error: {sel.relative_error:.3g}{state}", file=out)
    return EXIT_OK


def run_series(cfg: RunConfig, out) -> int:
    P = parse_polynomial(cfg.polys["num"], cfg.variables)
    Q = parse_polynomial(cfg.polys["poly"], cfg.variables)
    values = coefficients(P, Q, cfg.direction, cfg.terms)
    if cfg.json:
        print(json.dumps([str(v) for v in values]), file=out)
    else:
        for v in values:
            print(v, file=out)
    return EXIT_OK


RUNNERS = {
    "gb": run_gb,
    "spai": run_spai,
    "heights": run_heights,
    "critical": run_critical,
    "asympt": run_asympt,
    "series": run_series,
}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg.check()
        return RUNNERS[cfg.subcommand](cfg, out)
    except PolynomialSyntaxError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except PositiveDimensionalError as e:
        print(f"error: {e}", file=err)
        return EXIT_POSITIVE_DIM
    except (NotSmoothError, DegenerateSaddleError) as e:
        print(f"error: {e}", file=err)
        return EXIT_NOT_SMOOTH
    except (UsageError, StratumError, CertificationError, ValueError, OSError) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="acsv", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, direction=True):
        sp.add_argument("--vars", required=True, help="comma-separated variable names")
        if direction:
            sp.add_argument("--dir", required=True, help="comma-separated integer direction")
        sp.add_argument("--prec", type=int, default=None, help="working precision in bits")
        sp.add_argument("--json", action="store_true")

    g = sub.add_parser("gb", help="reduced Groebner basis")
    g.add_argument("--gens", required=True, help="generators separated by ';'")
    g.add_argument("--order", default="grevlex", help="grevlex, lex or elim:<k>")
    common(g, direction=False)

    for name, text in (("spai", "stationary points at infinity"), ("heights", "heights at infinity")):
        s = sub.add_parser(name, help=text)
        s.add_argument("--poly")
        s.add_argument("--exclude", help="generators of an affine locus to remove, ';'-separated")
        s.add_argument("--strata", help="file with lines 'codim=<c>: p1; p2; ...'")
        s.add_argument("--symbolic-dir", action="store_true")
        common(s)

    c = sub.add_parser("critical", help="affine critical points")
    c.add_argument("--poly", required=True)
    common(c)

    for name, text in (("asympt", "smooth-point leading terms"), ("series", "exact series coefficients")):
        a = sub.add_parser(name, help=text)
        a.add_argument("--num", default="1")
        a.add_argument("--poly", required=True)
        a.add_argument("--terms", type=int, default=16)
        common(a)
    return p


def config_from_args(args) -> RunConfig:
    variables = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    polys = {k: getattr(args, k) for k in ("gens", "poly", "num") if getattr(args, k, None)}
    direction = None
    if getattr(args, "dir", None):
        try:
            direction = Direction.parse(args.dir)
        except ValueError as e:
            raise UsageError(f"bad direction {args.dir!r}: {e}")
    if args.subcommand in ("spai", "heights") and not (polys.get("poly") or args.strata):
        raise UsageError("--poly or --strata is required")
    return RunConfig(
        subcommand=args.subcommand,
        variables=variables,
        polys=polys,
        direction=direction,
        prec=args.prec if args.prec is not None else default_prec(),
        json=args.json,
        terms=getattr(args, "terms", 16),
        order=getattr(args, "order", "grevlex"),
        exclude=getattr(args, "exclude", None),
        strata=getattr(args, "strata", None),
        symbolic=getattr(args, "symbolic_dir", False),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
