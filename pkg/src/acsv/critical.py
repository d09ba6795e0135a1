"""Affine critical points of the height function on a smooth hypersurface.

Zero-dimensional systems are solved exactly up to the last step: the radical
is brought into shape position (``x_i - f_i(t)`` plus a univariate ``p(t)``,
introducing a separating linear form ``t`` if needed), the roots of ``p`` are
isolated in certified disks, and the coordinates are obtained by evaluating
the ``f_i`` in ball arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
from gmpy2 import mpq

from .groebner import Ideal, dimension, eliminate, saturate
from .polyring import Direction, Polynomial, TermOrder, squarefree_part
from .roots import Ball, CertificationError, isolate_roots, mpc_of, mpf_of, squarefree

DEFAULT_PREC = 128


class PositiveDimensionalError(ValueError):
    def __init__(self, dim: int):
        super().__init__(f"critical locus is positive dimensional (dimension {dim})")
        self.dimension = dim


class InfiniteHeightError(ValueError):
    pass


@dataclass
class AlgebraicPoint:
    """A point with certified coordinate disks.

    ``min_polys[i]`` is the squarefree univariate eliminant (ascending mpq
    coefficients) satisfied by coordinate ``i``; it need not be irreducible.
    """

    coords: list
    min_polys: list = field(default_factory=list)
    height: mpmath.mpf | None = None
    height_radius: mpmath.mpf | None = None
    prec: int = DEFAULT_PREC

    @property
    def approx(self) -> list:
        return [b.center for b in self.coords]

    def is_real(self) -> bool:
        return all(b.real for b in self.coords)

    def conjugate(self) -> AlgebraicPoint:
        return AlgebraicPoint([b.conjugate() for b in self.coords], self.min_polys,
                              self.height, self.height_radius, self.prec)

    def matches(self, values: Sequence, tol) -> bool:
        return all(abs(b.center - mpc_of(v)) <= tol for b, v in zip(self.coords, values))

    def __repr__(self) -> str:
        cs = ", ".join(mpmath.nstr(b.center, 12) for b in self.coords)
        h = "" if self.height is None else f", height={mpmath.nstr(self.height, 12)}"
        return f"AlgebraicPoint(({cs}){h})"


# ---------------------------------------------------------------------------
# ball evaluation


def eval_univariate_ball(coeffs: Sequence, t: Ball) -> Ball:
    """Enclose ``f(t)`` for ``t`` in a disk, with Taylor remainder at the center."""
    c = [mpf_of(x) for x in coeffs]
    if not c:
        return Ball(mpmath.mpc(0), mpmath.mpf(0), True)
    center = mpmath.polyval(c[::-1], t.center)
    rad = mpmath.mpf(0)
    deriv = c
    fact = 1
    rho = t.radius
    for k in range(1, len(c)):
        deriv = [j * x for j, x in enumerate(deriv)][1:]
        fact *= k
        rad += abs(mpmath.polyval(deriv[::-1], t.center)) / fact * rho ** k
    rad += mpmath.mpf(2) ** (-mpmath.mp.prec + 16) * max(1, abs(center))
    if t.real:
        center = mpmath.mpc(center.real, 0)
    return Ball(center, rad, t.real)


def residual_bound(g: Polynomial, coords: Sequence[Ball]):
    """Return ``(|g(center)|, bound)`` where ``bound`` encloses ``|g(x) - g(center)|``."""
    val = mpmath.mpc(0)
    spread = mpmath.mpf(0)
    for e, c in g.terms.items():
        cc = mpf_of(c)
        t = cc
        hi = abs(cc)
        lo = abs(cc)
        for b, k in zip(coords, e):
            if k:
                t *= b.center ** k
                hi *= (abs(b.center) + b.radius) ** k
                lo *= abs(b.center) ** k
        val += t
        spread += hi - lo
    spread += mpmath.mpf(2) ** (-mpmath.mp.prec + 16) * (1 + spread + abs(val))
    return abs(val), spread


def contains_zero(g: Polynomial, coords: Sequence[Ball]) -> bool:
    v, b = residual_bound(g, coords)
    return v <= b


# ---------------------------------------------------------------------------
# zero-dimensional solving


def _univariate(p: Polynomial, i: int) -> list:
    deg = p.degree(i)
    out = [mpq(0)] * (deg + 1)
    for e, c in p.terms.items():
        out[e[i]] = c
    return out


def _eliminant(I: Ideal, i: int) -> list:
    """Squarefree generator of ``I`` intersected with ``Q[x_i]``."""
    J = eliminate(I, [i])
    gens = J.groebner(TermOrder.lex(I.nvars))
    if not gens:
        raise PositiveDimensionalError(1)
    return squarefree(_univariate(gens[-1], i))


def _count_solutions(I: Ideal) -> int:
    """Number of standard monomials of a zero-dimensional ideal."""
    order = I.default_order()
    lms = [g.leading(order)[0] for g in I.groebner()]
    n = I.nvars
    bounds = []
    for i in range(n):
        pure = [e[i] for e in lms if all(e[j] == 0 for j in range(n) if j != i)]
        bounds.append(min(pure))
    count = 0
    for e in itertools.product(*(range(b) for b in bounds)):
        if not any(all(x >= y for x, y in zip(e, lm)) for lm in lms):
            count += 1
    return count


def _shape(I: Ideal, last: int):
    """Return ``(p, [f_i])`` if the lex basis (``last`` smallest) is in shape position."""
    n = I.nvars
    perm = [i for i in range(n) if i != last] + [last]
    gb = I.groebner(TermOrder.lex(n, perm))
    uni = [g for g in gb if set(g.variables()) <= {last}]
    if len(uni) != 1:
        return None
    p = _univariate(uni[0], last)
    fs = {}
    for g in gb:
        if g is uni[0]:
            continue
        vs = [v for v in g.variables() if v != last]
        if len(vs) != 1:
            return None
        v = vs[0]
        lin = [e for e in g.terms if e[v]]
        if len(lin) != 1 or sum(lin[0]) != 1:
            return None
        coeff = g.terms[lin[0]]
        rest = [mpq(0)] * max(len(p), 1)
        for e, c in g.terms.items():
            if e[v] == 0:
                k = e[last]
                if k >= len(rest):
                    rest.extend([mpq(0)] * (k - len(rest) + 1))
                rest[k] = -c / coeff
        fs[v] = rest
    if len(fs) != n - 1:
        return None
    return p, fs


def radical_zero_dim(I: Ideal) -> tuple:
    """Radical of a zero-dimensional ideal plus the per-variable squarefree eliminants."""
    elims = [_eliminant(I, i) for i in range(I.nvars)]
    gens = list(I.generators)
    for i, u in enumerate(elims):
        x = Polynomial.var(I.ring, I.ring[i])
        gens.append(sum((x ** k * c for k, c in enumerate(u)), Polynomial.constant(I.ring, 0)))
    return Ideal(I.ring, gens), elims


def solve_zero_dim(I: Ideal, prec: int = DEFAULT_PREC) -> list:
    """All solutions of a zero-dimensional ideal, each coordinate in a certified disk."""
    dim = dimension(I)
    if dim == -1:
        return []
    if dim > 0:
        raise PositiveDimensionalError(dim)
    n = I.nvars
    R, elims = radical_zero_dim(I)
    N = _count_solutions(R)
    if n == 1:
        roots = _isolate(elims[0], prec)
        return [AlgebraicPoint([b], [elims[0]], prec=prec) for b in roots]
    shape = _shape(R, n - 1)
    if shape is not None and len(squarefree(shape[0])) - 1 == N:
        sep_ring, p, fs, tvar, form = R.ring, shape[0], shape[1], n - 1, None
    else:
        sep_ring, p, fs, tvar, form = _separate(R, N)
    tballs = _isolate(p, prec)
    if len(tballs) != N:
        raise CertificationError("separating polynomial has the wrong number of roots")
    points = []
    with mpmath.workprec(max(prec, mpmath.mp.prec)):
        for tb in tballs:
            coords = []
            for i in range(n):
                if form is None and i == tvar:
                    coords.append(tb)
                else:
                    coords.append(eval_univariate_ball(fs[i], tb))
            points.append(AlgebraicPoint(coords, list(elims), prec=prec))
    for pt in points:
        for g in I.generators:
            if not contains_zero(g, pt.coords):
                raise CertificationError(f"residual check failed for {g}")
    points.sort(key=lambda pt: [(float(b.re), float(b.im)) for b in pt.coords])
    return points


def _isolate(p: list, prec: int) -> list:
    return isolate_roots(p, prec)


def _separate(R: Ideal, N: int):
    """Adjoin ``t = sum c_i x_i`` with deterministic ``c`` until shape position holds."""
    n = R.nvars
    t = "_t"
    ring = R.ring + (t,)
    T = Polynomial.var(ring, t)
    xs = [Polynomial.var(ring, v) for v in R.ring]
    for k in itertools.count(1):
        if k > 50:
            raise CertificationError("no separating linear form found")
        form = sum((x * (k ** i) for i, x in enumerate(xs)), Polynomial.constant(ring, 0))
        J = Ideal(ring, [g.change_ring(ring) for g in R.generators] + [T - form])
        shape = _shape(J, n)
        if shape is None:
            continue
        p, fs = shape
        if len(squarefree(p)) - 1 != N:
            continue
        return ring, p, fs, n, form


# ---------------------------------------------------------------------------
# critical points


def critical_rows(Q: Polynomial, r: Sequence[int], pivot: int | None = None,
                  y: Sequence | None = None) -> list:
    """Binomial rows ``y_j z_k dQ/dz_k - y_k z_j dQ/dz_j`` for ``j != k``.

    ``k`` is the pivot coordinate (the first with nonzero direction entry by
    default).  ``y`` may hold polynomials (symbolic directions); it defaults to
    the integers ``r``.
    """
    d = len(r)
    if pivot is None:
        pivot = next(i for i, x in enumerate(r) if x)
    ys = list(y) if y is not None else [Polynomial.constant(Q.ring, x) for x in r]
    zs = [Polynomial.var(Q.ring, Q.ring[i]) for i in range(d)]
    a = [zs[i] * Q.partial(i) for i in range(d)]
    return [ys[j] * a[pivot] - ys[pivot] * a[j] for j in range(d) if j != pivot]


def affine_critical_ideal(Q: Polynomial, r: Direction) -> Ideal:
    """``<Q, rows>`` saturated by the product of the coordinates."""
    Q = squarefree_part(Q)
    if len(r) != Q.nvars:
        raise ValueError("direction length does not match the number of variables")
    I = Ideal(Q.ring, [Q] + critical_rows(Q, r.r))
    prod = Polynomial.constant(Q.ring, 1)
    for v in Q.ring:
        prod = prod * Polynomial.var(Q.ring, v)
    return saturate(I, prod)


def height(point: AlgebraicPoint | Sequence, r: Direction):
    """``-sum r_j log|z_j|`` and an enclosure radius from the coordinate disks."""
    coords = point.coords if isinstance(point, AlgebraicPoint) else [
        Ball(mpc_of(c), mpmath.mpf(0)) for c in point]
    h = mpmath.mpf(0)
    rad = mpmath.mpf(0)
    for b, rj in zip(coords, r):
        m = abs(b.center)
        if m <= b.radius or m == 0:
            raise InfiniteHeightError("coordinate may vanish; height is infinite")
        h -= rj * mpmath.log(m)
        rad += abs(rj) * (mpmath.log(m) - mpmath.log(m - b.radius)) if b.radius else 0
    return h, rad


def affine_critical_points(Q: Polynomial, r: Direction, prec: int = DEFAULT_PREC) -> list:
    """Critical points of the height on ``V(Q)`` in the torus, by descending height."""
    if not isinstance(r, Direction):
        r = Direction(tuple(r))
    I = affine_critical_ideal(Q, r)
    dim = dimension(I)
    if dim > 0:
        raise PositiveDimensionalError(dim)
    with mpmath.workprec(prec):
        pts = solve_zero_dim(I, prec)
        out = []
        for pt in pts:
            if any(abs(b.center) <= b.radius for b in pt.coords):
                continue
            pt.height, pt.height_radius = height(pt, r)
            out.append(pt)
    out.sort(key=lambda pt: (-pt.height, [(float(b.re), float(b.im)) for b in pt.coords]))
    return out
