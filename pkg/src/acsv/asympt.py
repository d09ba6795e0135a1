"""Leading-term asymptotics at smooth critical points.

At a smooth critical point ``z*`` of ``V(Q)`` with distinguished coordinate
``k`` (the one maximizing ``|z_j dQ/dz_j|``), ``V(Q)`` is locally the graph
``log z_k = g(w)`` over ``w_j = log z_j`` (``j != k``).  The phase
``phi(w) = sum_{j != k} r_j w_j + r_k g(w)`` is stationary at ``z*`` and

    a_{n r} ~ z*^{-n r} n^{(1-d)/2} (2 pi)^{(1-d)/2} det(-phi'')^{-1/2} (-P / (z_k dQ/dz_k)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .critical import AlgebraicPoint
from .polyring import Direction, Polynomial, divide_exact, squarefree_part
from .roots import mpc_of, mpf_of

DEFAULT_PREC = 128


class NotSmoothError(ValueError):
    pass


class DegenerateSaddleError(ValueError):
    pass


@dataclass
class AsymptoticTerm:
    """``weight * constant * base^n * n^poly_order``."""

    base: mpmath.mpc
    poly_order: Fraction
    constant: mpmath.mpc
    weight: int | None = 1
    source: AlgebraicPoint | None = None
    distinguished: int = 0

    def value(self, n: int, weighted: bool = True):
        v = self.constant * self.base ** n * mpmath.mpf(n) ** (mpmath.mpf(self.poly_order.numerator) / self.poly_order.denominator)
        if weighted:
            v *= self.weight if self.weight is not None else 0
        return v

    def is_conjugate_of(self, other: AsymptoticTerm, tol) -> bool:
        return (abs(self.base - mpmath.conj(other.base)) <= tol * abs(self.base)
                and abs(self.constant - mpmath.conj(other.constant)) <= tol * abs(self.constant)
                and self.poly_order == other.poly_order)

    def __repr__(self) -> str:
        return (f"AsymptoticTerm(base={mpmath.nstr(self.base, 12)}, poly_order={self.poly_order}, "
                f"constant={mpmath.nstr(self.constant, 12)}, weight={self.weight})")


@dataclass
class SeriesWindow:
    direction: Direction
    start: int
    values: list

    def __len__(self) -> int:
        return len(self.values)

    def indices(self) -> range:
        return range(self.start, self.start + len(self.values))


@dataclass
class Selection:
    terms: list
    relative_error: float
    conclusive: bool
    errors: list = field(default_factory=list)


# ---------------------------------------------------------------------------


def _coords(point) -> list:
    if isinstance(point, AlgebraicPoint):
        return [mpmath.mpc(c) for c in point.approx]
    return [mpc_of(c) for c in point]


def _ev(p: Polynomial, z: Sequence):
    return p.evaluate_with(z, mpf_of)


def _log_derivatives(Q: Polynomial, z: list):
    d = len(z)
    grad = [Q.partial(i) for i in range(d)]
    q1 = [z[i] * _ev(grad[i], z) for i in range(d)]
    q2 = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            v = z[i] * z[j] * _ev(grad[i].partial(j), z)
            if i == j:
                v += q1[i]
            q2[i][j] = q2[j][i] = v
    return q1, q2


def phase_hessian(Q: Polynomial, point, r: Direction, prec: int = DEFAULT_PREC):
    """Analytic Hessian of the log-parametrized phase; returns ``(k, others, M)``."""
    with mpmath.workprec(prec):
        z = _coords(point)
        d = len(z)
        q1, q2 = _log_derivatives(Q, z)
        scale = max(abs(v) for v in q1)
        if scale <= mpmath.mpf(2) ** (-prec // 2) * max(1, max(abs(c) for c in z)):
            raise NotSmoothError("gradient of Q vanishes at the point")
        k = max(range(d), key=lambda j: abs(q1[j]))
        others = [j for j in range(d) if j != k]
        L1 = {j: -q1[j] / q1[k] for j in others}
        M = mpmath.matrix(d - 1, d - 1)
        for a, i in enumerate(others):
            for b, j in enumerate(others):
                lij = -(q2[i][j] + q2[i][k] * L1[j] + q2[j][k] * L1[i]
                        + q2[k][k] * L1[i] * L1[j]) / q1[k]
                M[a, b] = r[k] * lij
        return k, others, M


def phase_hessian_fd(Q: Polynomial, point, r: Direction, k: int | None = None,
                     prec: int = DEFAULT_PREC, step=None):
    """Central finite-difference Hessian of ``phi(w)``, solving for ``z_k`` by Newton."""
    with mpmath.workprec(prec):
        z0 = _coords(point)
        d = len(z0)
        if k is None:
            k = phase_hessian(Q, point, r, prec)[0]
        others = [j for j in range(d) if j != k]
        Qk = Q.partial(k)
        h = step if step is not None else mpmath.mpf(2) ** (-prec // 4)
        tol = mpmath.mpf(2) ** (-prec + 8)

        def phi(w):
            z = list(z0)
            for j, wj in zip(others, w):
                z[j] = z0[j] * mpmath.exp(wj)
            zk = z0[k]
            for _ in range(200):
                z[k] = zk
                delta = _ev(Q, z) / _ev(Qk, z)
                zk -= delta
                if abs(delta) <= tol * abs(zk):
                    break
            z[k] = zk
            s = mpmath.log(zk / z0[k]) * r[k]
            for j, wj in zip(others, w):
                s += r[j] * wj
            return s

        m = d - 1
        H = mpmath.matrix(m, m)
        for a in range(m):
            for b in range(a, m):
                vals = []
                for sa, sb in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    w = [mpmath.mpf(0)] * m
                    w[a] += sa * h
                    w[b] += sb * h
                    vals.append(phi(w))
                H[a, b] = H[b, a] = (vals[0] - vals[1] - vals[2] + vals[3]) / (4 * h * h)
        return H


def _pole_order_check(Q: Polynomial, z: list, prec: int) -> Polynomial:
    sqf = squarefree_part(Q)
    rest = divide_exact(Q, sqf)
    if not rest.is_constant() and abs(_ev(rest, z)) <= mpmath.mpf(2) ** (-prec // 2):
        raise NotImplementedError("pole of order greater than one at the point")
    return sqf


def smooth_leading_term(P: Polynomial, Q: Polynomial, point, r: Direction,
                        prec: int = DEFAULT_PREC) -> AsymptoticTerm:
    if not isinstance(r, Direction):
        r = Direction(tuple(r))
    with mpmath.workprec(prec):
        z = _coords(point)
        d = len(z)
        _pole_order_check(Q, z, prec)
        k, others, M = phase_hessian(Q, point, r, prec)
        det = mpmath.det(-M) if d > 1 else mpmath.mpf(1)
        if abs(det) <= mpmath.mpf(2) ** (-prec // 2) * max(1, mpmath.mnorm(M, 1) ** (d - 1)):
            raise DegenerateSaddleError("phase Hessian is singular at the point")
        qk = z[k] * _ev(Q.partial(k), z)
        residue = -_ev(P, z) / qk
        const = (2 * mpmath.pi) ** (mpmath.mpf(1 - d) / 2) * residue / mpmath.sqrt(det)
        base = mpmath.mpc(1)
        for zj, rj in zip(z, r):
            base /= zj ** rj
        src = point if isinstance(point, AlgebraicPoint) else None
        return AsymptoticTerm(mpmath.mpc(base), Fraction(1 - d, 2), mpmath.mpc(const), 1, src, k)


# ---------------------------------------------------------------------------
# weights from the oracle


def _groups(terms: list, tol) -> list:
    """Indices of terms, conjugate pairs grouped so they share a weight."""
    used = set()
    out = []
    for i, t in enumerate(terms):
        if i in used:
            continue
        used.add(i)
        group = [i]
        if abs(mpmath.im(t.base)) > tol * abs(t.base):
            for j in range(i + 1, len(terms)):
                if j not in used and t.is_conjugate_of(terms[j], tol):
                    group.append(j)
                    used.add(j)
                    break
        out.append(group)
    return out


def select_contributions(terms: Sequence[AsymptoticTerm], window: SeriesWindow,
                         tolerance: float = 0.05, weight_range: tuple = (-4, 4)) -> Selection:
    """Integer weights (conjugates tied) that best fit the window tail.

    A weight vector fits when the relative error at the last index is within
    ``tolerance``.  Among fits the fewest nonzero weights win, then the
    smallest total weight, then the mean relative error over the tail half.
    Without a fit the result is inconclusive and weights are left unknown.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("no candidates")
    if len(window) < 8:
        raise ValueError("window needs at least 8 values")
    ns = [n for n in window.indices() if n > 0]
    vals = dict(zip(window.indices(), window.values))
    ns = [n for n in ns[len(ns) // 2:] if vals[n]]
    if not ns:
        raise ValueError("window tail is all zero")
    scale = max(abs(t.base) for t in terms)
    a = np.array([float(mpf_of(vals[n]) / scale ** n) for n in ns])
    cols = []
    for t in terms:
        cols.append(np.array([complex(t.value(n, weighted=False) / scale ** n) for n in ns]))
    groups = _groups(terms, mpmath.mpf(2) ** -40)
    lo, hi = weight_range
    best = None
    for ws in itertools.product(range(lo, hi + 1), repeat=len(groups)):
        if not any(ws):
            continue
        pred = np.zeros(len(ns), dtype=complex)
        for w, g in zip(ws, groups):
            if w:
                for i in g:
                    pred += w * cols[i]
        rel = np.abs(a - pred) / np.abs(a)
        fits = bool(rel[-1] <= tolerance)
        if fits:
            key = (0, sum(1 for w in ws if w), sum(abs(w) for w in ws), float(np.mean(rel)))
        else:
            key = (1, 0, 0, float(np.mean(rel)))
        if best is None or key < best[0]:
            best = (key, ws, rel)
    _, ws, rel = best
    err = float(rel[-1])
    conclusive = err <= tolerance
    chosen = []
    for w, g in zip(ws, groups):
        for i in g:
            t = terms[i]
            if not conclusive:
                chosen.append(AsymptoticTerm(t.base, t.poly_order, t.constant, None, t.source, t.distinguished))
            elif w:
                chosen.append(AsymptoticTerm(t.base, t.poly_order, t.constant, w, t.source, t.distinguished))
    return Selection(chosen, err, conclusive, [float(x) for x in rel])


def predict(terms: Sequence[AsymptoticTerm], n: int):
    return sum((t.value(n) for t in terms), mpmath.mpc(0))
