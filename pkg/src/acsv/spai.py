"""Stationary points at infinity.

The saturated critical ideal is built in the projective coordinates
``(Z : z_1 : ... : z_d)`` with the direction row ``y`` kept symbolic during
saturation, then specialised to ``y = r`` and sliced at ``Z = 0``.  A nontrivial
projective solution of the slice is a stationary point at infinity; adjoining
``eta`` with ``eta * Z^s = z^r`` records the limiting value of the monomial
``z^r`` and hence the height ``-log|eta|``.

Pipeline for one stratum (generators ``f``, codimension ``c``):

1. homogenize ``f`` with ``Z``;
2. adjoin the ``(c+1)``-minors of the matrix with rows ``y`` and
   ``z_j df_i/dz_j``, dehomogenized at ``y_k = 1`` (``k`` the first index with
   ``r_k != 0``);
3. saturate by ``Z`` and each ``z_j``, one variable at a time;
4. saturate by every excluded locus (homogenized);
5. adjoin the ``eta`` binomial and saturate by the coordinates again;
6. substitute ``y = r / r_k`` and ``Z = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
from gmpy2 import mpq

from .critical import AlgebraicPoint, PositiveDimensionalError, contains_zero, solve_zero_dim
from .groebner import (
    Ideal,
    _fresh,
    dimension,
    eliminate,
    radical_member,
    saturate,
    saturate_ideal,
    saturate_variable,
)
from .polyring import Direction, Polynomial, squarefree_part
from .roots import Ball, isolate_roots, mpf_of, squarefree

DEFAULT_PREC = 128


class StratumError(ValueError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass
class StratumSpec:
    """Generators of a (prime) stratum closure and its codimension."""

    generators: list
    codimension: int

    @property
    def ring(self) -> tuple:
        return self.generators[0].ring

    def check(self, index: int | None = None) -> None:
        if not self.generators:
            raise StratumError("stratum has no generators", index)
        d = len(self.ring)
        c = self.codimension
        if not 1 <= c <= d:
            raise StratumError(f"codimension {c} outside [1, {d}]", index)
        dim = dimension(Ideal(self.ring, self.generators))
        if dim != d - c:
            where = "" if index is None else f"stratum {index}: "
            raise StratumError(f"{where}dimension {dim} does not match codimension {c}", index)


@dataclass
class SpaiProblem:
    Q: Polynomial
    direction: Direction
    exclude: Ideal | None = None


@dataclass
class EtaValue:
    """A root of the eta eliminant; ``exact`` is set when the root is rational."""

    ball: Ball
    exact: mpq | None
    height: mpmath.mpf

    def __repr__(self) -> str:
        v = str(self.exact) if self.exact is not None else mpmath.nstr(self.ball.center, 15)
        return f"EtaValue({v}, height={mpmath.nstr(self.height, 15)})"


@dataclass
class Witness:
    """A projective point ``(Z : z_1 : ... : z_d)`` of the slice.

    ``chart`` is the index (in ``z_1..z_d``, from 0) of the first nonzero
    coordinate, which is normalised to 1.
    """

    chart: int
    point: AlgebraicPoint


@dataclass
class SpaiReport:
    saturated_ideal: Ideal
    exists: bool | None
    direction: Direction
    witnesses: list = field(default_factory=list)
    eta_values: list = field(default_factory=list)
    eta_poly: list | None = None
    heights_status: str = "skipped"
    positive_dimensional_charts: list = field(default_factory=list)

    @property
    def heights(self) -> list:
        return [e.height for e in self.eta_values]


# ---------------------------------------------------------------------------
# critical ideals


def _minors(rows: list, size: int) -> list:
    d = len(rows[0])
    out = []
    for cols in itertools.combinations(range(d), size):
        m = _det([[row[j] for j in cols] for row in rows])
        if m.terms:
            out.append(m)
    return out


def _det(m: list) -> Polynomial:
    n = len(m)
    if n == 1:
        return m[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        t = m[0][j] * _det(minor)
        if j % 2:
            t = -t
        total = t if total is None else total + t
    return total


def _jacobian_rows(gens: Sequence[Polynomial], zvars: Sequence[int]) -> list:
    ring = gens[0].ring
    zs = [Polynomial.var(ring, ring[i]) for i in zvars]
    return [[z * g.partial(i) for z, i in zip(zs, zvars)] for g in gens]


def critical_ideal(stratum: StratumSpec, symbolic_y: bool = False,
                   direction: Direction | None = None) -> Ideal:
    """Stratum generators plus all ``(c+1)``-minors of ``[y; z_j df_i/dz_j]``.

    With ``symbolic_y`` the ring is extended by ``y1..yd``; otherwise ``y``
    is the given direction.
    """
    c = stratum.codimension
    ring = stratum.ring
    d = len(ring)
    if c + 1 > d:
        raise StratumError(f"no ({c + 1})x({c + 1}) minors in a {c + 1}x{d} matrix")
    gens = list(stratum.generators)
    if symbolic_y:
        names = tuple(_fresh(ring, f"y{j + 1}") for j in range(d))
        ring = ring + names
        gens = [g.change_ring(ring) for g in gens]
        yrow = [Polynomial.var(ring, n) for n in names]
    else:
        if direction is None or len(direction) != d:
            raise ValueError("a direction of matching length is required")
        yrow = [Polynomial.constant(ring, x) for x in direction]
    rows = [yrow] + _jacobian_rows(gens, range(d))
    return Ideal(ring, gens + _minors(rows, c + 1))


def _homogenize_ideal(gens: Sequence[Polynomial], Z: str) -> list:
    """Homogenization of the ideal, via a degree-compatible basis."""
    ring = gens[0].ring
    if len(gens) == 1:
        return [gens[0].homogenize(Z)]
    return [g.homogenize(Z) for g in Ideal(ring, gens).groebner()]


# ---------------------------------------------------------------------------
# the saturation pipeline


@dataclass
class _Names:
    Z: str
    H: str | None
    ys: tuple
    zs: tuple


def _pivot(r: Direction) -> int:
    return next(i for i, x in enumerate(r) if x)


def _eta_generator(ring: tuple, names: _Names, r: Direction) -> Polynomial:
    """``eta * Z^s * z^{r-} - z^{r+}`` (or the mirror when ``s < 0``), ``s = sum r``."""
    Z = Polynomial.var(ring, names.Z)
    H = Polynomial.var(ring, names.H)
    zi = [ring.index(v) for v in names.zs]
    pos = [0] * len(ring)
    neg = [0] * len(ring)
    for i, x in zip(zi, r):
        if x > 0:
            pos[i] = x
        else:
            neg[i] = -x
    mpos = Polynomial.monomial(ring, pos)
    mneg = Polynomial.monomial(ring, neg)
    s = sum(r)
    if s >= 0:
        return H * Z ** s * mneg - mpos
    return H * mneg - Z ** (-s) * mpos


def _saturated(gens_h: list, rank: int, names: _Names, r: Direction | None,
               excluded: list, heights: bool) -> Ideal:
    """Run steps 2-5 of the pipeline; ``gens_h`` live in ``(Z,) + zs``."""
    base = gens_h[0].ring
    d = len(names.zs)
    extra = ((names.H,) if heights else ()) + names.ys
    ring = base + extra
    gens = [g.change_ring(ring) for g in gens_h]
    zvars = [ring.index(v) for v in names.zs]
    if r is None:
        yrow = [Polynomial.var(ring, y) for y in names.ys]
    else:
        k = _pivot(r)
        it = iter(names.ys)
        yrow = [Polynomial.constant(ring, 1) if j == k else Polynomial.var(ring, next(it))
                for j in range(d)]
    minors = _minors([yrow] + _jacobian_rows(gens, zvars), rank + 1) if rank < d else []
    I = Ideal(ring, gens + minors)
    coords = (names.Z,) + names.zs
    weights = [1 if v in coords else 0 for v in ring]
    for v in coords:
        I = saturate_variable(I, v, weights)
    for J in excluded:
        I = saturate_ideal(I, Ideal(ring, [g.change_ring(ring) for g in J]))
    if heights:
        I = Ideal(ring, I.groebner() + [_eta_generator(ring, names, r)])
        for v in coords:
            I = saturate(I, Polynomial.var(ring, v))
    return I


def _slice(I: Ideal, names: _Names, r: Direction | None, heights: bool) -> Ideal:
    ring = I.ring
    binding = {}
    if r is not None:
        k = _pivot(r)
        it = iter(names.ys)
        for j, x in enumerate(r):
            if j != k:
                binding[next(it)] = mpq(x, r[k])
    binding[names.Z] = 0
    gens = [g.substitute(binding) for g in I.generators]
    Z = Polynomial.var(ring, names.Z)
    if r is not None:
        out = (names.Z,) + names.zs + ((names.H,) if heights else ())
        return Ideal(out, [g.change_ring(out) for g in gens] + [Z.change_ring(out)])
    return Ideal(ring, gens + [Z])


def _names_for(vs: tuple, heights: bool, symbolic: bool) -> _Names:
    taken = tuple(vs)
    Z = "Z" if "Z" not in taken else _fresh(taken, "_Z")
    taken += (Z,)
    H = None
    if heights:
        H = "H" if "H" not in taken else _fresh(taken, "_H")
        taken += (H,)
    count = len(vs) if symbolic else len(vs) - 1
    ys = []
    for j in range(count):
        y = _fresh(taken, f"_y{j + 1}")
        ys.append(y)
        taken += (y,)
    return _Names(Z, H, tuple(ys), tuple(vs))


def _check_direction(vs: tuple, r: Direction) -> Direction:
    if not isinstance(r, Direction):
        r = Direction(tuple(r))
    if len(r) != len(vs):
        raise ValueError("direction length does not match the number of variables")
    return r


def _report(stratum_gens: list, codim: int, r: Direction, excluded: list,
            heights: bool, symbolic: bool, prec: int) -> SpaiReport:
    vs = stratum_gens[0].ring
    names = _names_for(vs, heights and not symbolic, symbolic)
    hring = (names.Z,) + vs
    gens_h = [g.change_ring(hring) for g in _homogenize_ideal(stratum_gens, names.Z)]
    exc_h = [[g.change_ring(hring) for g in _homogenize_ideal(J, names.Z)] for J in excluded]
    rr = None if symbolic else r
    I = _saturated(gens_h, codim, names, rr, exc_h, heights and not symbolic)
    S = _slice(I, names, rr, heights and not symbolic)
    if symbolic:
        return SpaiReport(S, None, r)
    rep = SpaiReport(S, exists_in(S, (names.Z,) + vs), r)
    if rep.exists:
        rep.witnesses, rep.positive_dimensional_charts = witnesses(S, names.Z, vs, prec)
    if heights:
        rep.eta_poly, rep.eta_values, rep.heights_status = _heights(S, names, prec)
    return rep


def algorithm1(problem: SpaiProblem | Polynomial, direction: Direction | None = None,
               exclude: Ideal | None = None, heights: bool = True,
               symbolic: bool = False, prec: int = DEFAULT_PREC) -> SpaiReport:
    """Saturated critical ideal at infinity of a smooth hypersurface ``V(Q)``.

    Accepts either a :class:`SpaiProblem` or ``Q`` plus keyword arguments.
    ``heights=False`` omits ``eta`` so the ideal lives in ``(Z, z)`` only.
    In ``symbolic`` mode ``y`` stays symbolic and no existence flag is given.
    """
    if isinstance(problem, SpaiProblem):
        Q, direction, exclude = problem.Q, problem.direction, problem.exclude
    else:
        Q = problem
    if not Q.terms:
        raise ValueError("Q must be nonzero")
    vs = Q.ring
    r = _check_direction(vs, direction)
    Q = squarefree_part(Q)
    excluded = []
    if exclude is not None:
        if exclude.ring != vs:
            raise ValueError("exclusion ideal lives in a different ring")
        if exclude.is_unit():
            raise ValueError("exclusion ideal is the unit ideal (empty locus)")
        excluded.append(list(exclude.groebner()))
    return _report([Q], 1, r, excluded, heights, symbolic, prec)


def algorithm2(strata: Sequence[StratumSpec], direction: Direction,
               heights: bool = True, prec: int = DEFAULT_PREC) -> list:
    """One report per stratum, saturating away every higher-codimension stratum."""
    if not strata:
        return []
    for i, s in enumerate(strata):
        s.check(i)
    vs = strata[0].ring
    if any(s.ring != vs for s in strata):
        raise StratumError("strata live in different rings")
    r = _check_direction(vs, direction)
    out = []
    for s in strata:
        higher = [t.generators for t in strata if t.codimension > s.codimension]
        out.append(_report(list(s.generators), s.codimension, r, higher, heights, False, prec))
    return out


# ---------------------------------------------------------------------------
# reading off the slice


def exists_in(S: Ideal, coords: Sequence[str]) -> bool:
    """True unless every projective coordinate lies in the radical of ``S``."""
    return not all(radical_member(Polynomial.var(S.ring, v), S) for v in coords)


def exists(report_or_ideal, coords: Sequence[str] | None = None) -> bool:
    if isinstance(report_or_ideal, SpaiReport):
        return bool(report_or_ideal.exists)
    S = report_or_ideal
    if coords is None:
        coords = [v for v in S.ring if v != "H"]
    return exists_in(S, coords)


def _rational_root(p: list, ball: Ball) -> mpq | None:
    if not ball.real:
        return None
    approx = Fraction(mpmath.nstr(ball.re, 40)).limit_denominator(10 ** 12)
    q = mpq(approx.numerator, approx.denominator)
    v = mpq(0)
    for c in reversed(p):
        v = v * q + c
    if v == 0 and q in ball:
        return q
    return None


def heights_at_infinity(saturated: Ideal, eta: str = "H", prec: int = DEFAULT_PREC):
    """Nonzero roots of the eta eliminant after removing the all-zero solution.

    Returns ``(status, [EtaValue])``; status is ``"ok"``, ``"none"`` (no
    nontrivial solutions) or ``"unconstrained"``.
    """
    coords = [v for v in saturated.ring if v != eta]
    Z = coords[0]
    names = _Names(Z, eta, (), tuple(coords[1:]))
    _, values, status = _heights(saturated, names, prec)
    return status, values


def _heights(S: Ideal, names: _Names, prec: int):
    ring = S.ring
    coords = [v for v in ring if v != names.H]
    irrelevant = Ideal(ring, [Polynomial.var(ring, v) for v in coords])
    pruned = saturate_ideal(S, irrelevant)
    if pruned.is_unit():
        return [mpq(1)], [], "none"
    E = eliminate(pruned, [names.H])
    gens = [g for g in E.groebner() if g.terms]
    if not gens:
        return None, [], "unconstrained"
    h = ring.index(names.H)
    g = gens[0]
    p = [mpq(0)] * (g.degree(h) + 1)
    for e, c in g.terms.items():
        p[e[h]] = c
    p = squarefree(p)
    nonzero = p[1:] if p[0] == 0 else p
    values = []
    with mpmath.workprec(prec):
        for b in isolate_roots(nonzero, prec):
            exact = _rational_root(nonzero, b)
            if exact is not None:
                val = -mpmath.log(abs(mpf_of(exact)))
            else:
                val = -mpmath.log(abs(b.center))
            values.append(EtaValue(b, exact, val))
    values.sort(key=lambda e: (-float(e.height), float(e.ball.re), float(e.ball.im)))
    return p, values, "ok"


def witnesses(S: Ideal, Z: str, zs: Sequence[str], prec: int = DEFAULT_PREC):
    """Projective points of the slice, one chart per first nonzero coordinate.

    Returns ``(points, charts_with_positive_dimension)``.
    """
    coords = (Z,) + tuple(zs)
    P = eliminate(S, list(coords), drop_ring=True)
    ring = P.ring
    out = []
    bad = []
    for i, v in enumerate(zs):
        gens = list(P.generators) + [Polynomial.var(ring, u) for u in zs[:i]]
        gens.append(Polynomial.var(ring, v) - 1)
        chart = Ideal(ring, gens)
        if chart.is_unit():
            continue
        try:
            pts = solve_zero_dim(chart, prec)
        except PositiveDimensionalError:
            bad.append(i)
            continue
        for pt in pts:
            if all(contains_zero(g, pt.coords) for g in P.generators):
                out.append(Witness(i, pt))
    return out, bad
