"""Certified isolation of the complex roots of a univariate rational polynomial.

Roots are approximated by Aberth-Ehrlich iteration in mpmath and then
enclosed in disks using the a posteriori bound

    |z_i - root_i| <= n |p(z_i)| / |lc(p) prod_{j != i} (z_i - z_j)|,

which holds for a squarefree polynomial of degree ``n`` as soon as the disks
are pairwise disjoint.  Real roots are counted with a Sturm sequence and
snapped onto the real axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from gmpy2 import mpq

MAX_PREC = 2048


class CertificationError(RuntimeError):
    pass


def mpf_of(q) -> mpmath.mpf:
    """Convert an exact rational (or int) to an mpf at the working precision."""
    q = mpq(q)
    return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def mpc_of(z) -> mpmath.mpc:
    """Convert ints, rationals and floats or mpmath numbers to an mpc."""
    if isinstance(z, (int, type(mpq(0)), Fraction)):
        return mpmath.mpc(mpf_of(mpq(z)))
    return mpmath.mpc(z)


# univariate polynomials are lists of mpq, constant term first


def trim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def monic(p: list) -> list:
    p = trim(p)
    lc = p[-1]
    return [c / lc for c in p]


def derivative(p: Sequence) -> list:
    return [c * k for k, c in enumerate(p)][1:]


def poly_divmod(a: Sequence, b: Sequence):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [mpq(0)] * max(len(a) - len(b) + 1, 1)
    r = [mpq(c) for c in a]
    lc = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        f = r[-1] / lc
        q[k] = f
        for i, c in enumerate(b):
            r[i + k] -= f * c
        r = trim(r)
    return trim(q), r


def poly_gcd(a: Sequence, b: Sequence) -> list:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return monic(a) if a else []


def squarefree(p: Sequence) -> list:
    p = trim(p)
    if len(p) <= 2:
        return monic(p)
    g = poly_gcd(p, derivative(p))
    return monic(poly_divmod(p, g)[0])


def sturm_sequence(p: Sequence) -> list:
    seq = [trim(p), trim(derivative(p))]
    while seq[-1] and len(seq[-1]) > 1:
        r = poly_divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _eval_q(p: Sequence, x) -> mpq:
    v = mpq(0)
    for c in reversed(p):
        v = v * x + c
    return v


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Sequence, a=None, b=None) -> int:
    """Number of distinct real roots in ``(a, b]`` (whole line when omitted)."""
    seq = sturm_sequence(p)
    if a is None:
        va = [(-1) ** (len(s) - 1) * s[-1] for s in seq]
    else:
        va = [_eval_q(s, mpq(a)) for s in seq]
    if b is None:
        vb = [s[-1] for s in seq]
    else:
        vb = [_eval_q(s, mpq(b)) for s in seq]
    return _sign_changes(va) - _sign_changes(vb)


def cauchy_bound(p: Sequence) -> mpq:
    p = trim(p)
    lc = abs(p[-1])
    return 1 + max(abs(c) / lc for c in p[:-1]) if len(p) > 1 else mpq(0)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ball:
    """Complex disk ``center`` +- ``radius``; ``real`` marks an exactly real value."""

    center: mpmath.mpc
    radius: mpmath.mpf
    real: bool = False

    def __contains__(self, z) -> bool:
        return abs(mpc_of(z) - self.center) <= self.radius

    def overlaps(self, other: Ball) -> bool:
        return abs(self.center - other.center) <= self.radius + other.radius

    def conjugate(self) -> Ball:
        return Ball(mpmath.conj(self.center), self.radius, self.real)

    def __complex__(self) -> complex:
        return complex(self.center)

    @property
    def re(self):
        return self.center.real

    @property
    def im(self):
        return self.center.imag


def _aberth(coeffs: list, maxiter: int = 500) -> list:
    n = len(coeffs) - 1
    lc = coeffs[-1]
    lc = mpf_of(lc)
    c = [mpmath.mpc(mpf_of(x)) / lc for x in coeffs]
    dc = [k * c[k] for k in range(1, n + 1)]
    bound = 1 + max(abs(x) for x in c[:-1])
    # deterministic, non-symmetric start points
    start = [bound * 0.5 * mpmath.expj(2 * mpmath.pi * k / n + 0.4) for k in range(n)]
    z = start
    tol = mpmath.mpf(2) ** (-mpmath.mp.prec + 8)
    for _ in range(maxiter):
        done = True
        new = []
        for i, zi in enumerate(z):
            pv = mpmath.polyval(c[::-1], zi)
            dv = mpmath.polyval(dc[::-1], zi)
            if pv == 0:
                new.append(zi)
                continue
            ratio = pv / dv if dv != 0 else mpmath.mpc(tol)
            s = sum(1 / (zi - zj) for j, zj in enumerate(z) if j != i)
            w = ratio / (1 - ratio * s)
            new.append(zi - w)
            if abs(w) > tol * max(1, abs(zi)):
                done = False
        z = new
        if done:
            break
    return z


def _inclusion_radii(coeffs: list, z: list) -> list:
    n = len(coeffs) - 1
    lc = mpf_of(coeffs[-1])
    c = [mpf_of(x) for x in coeffs]
    out = []
    slack = mpmath.mpf(2) ** (-mpmath.mp.prec + 20)
    for i, zi in enumerate(z):
        pv = abs(mpmath.polyval(c[::-1], zi))
        prod = abs(lc)
        for j, zj in enumerate(z):
            if j != i:
                prod *= abs(zi - zj)
        if prod == 0:
            out.append(mpmath.inf)
            continue
        out.append(n * pv / prod + slack * max(1, abs(zi)))
    return out


def isolate_roots(p: Sequence, prec: int = 128) -> list:
    """Certified disks, one per distinct complex root of ``p``.

    Precision doubles on failure up to ``MAX_PREC`` bits.  The result is
    ordered by real part, then imaginary part.
    """
    p = squarefree([mpq(c) for c in p])
    n = len(p) - 1
    if n < 1:
        return []
    nreal = count_real_roots(p)
    prec = max(int(prec), 53)
    while prec <= MAX_PREC:
        with mpmath.workprec(prec):
            if n == 1:
                z = [mpmath.mpc(mpf_of(-p[0] / p[1]))]
                radii = [mpmath.mpf(0)]
            else:
                z = _aberth(p)
                radii = _inclusion_radii(p, z)
            balls = [Ball(zi, ri) for zi, ri in zip(z, radii)]
            if _certified(balls):
                balls = _snap_real(p, balls, nreal)
                if balls is not None:
                    balls.sort(key=lambda b: (b.re, b.im))
                    return balls
        prec *= 2
    raise CertificationError(f"could not certify roots within {MAX_PREC} bits")


def _certified(balls: list) -> bool:
    for b in balls:
        if not mpmath.isfinite(b.radius):
            return False
    for i, a in enumerate(balls):
        for b in balls[i + 1:]:
            if a.overlaps(b):
                return False
    return True


def _snap_real(p: list, balls: list, nreal: int):
    """Mark disks meeting the real axis as real roots when the Sturm count agrees."""
    candidates = [b for b in balls if abs(b.im) <= b.radius]
    if len(candidates) != nreal:
        return None
    out = []
    for b in balls:
        if abs(b.im) <= b.radius:
            out.append(Ball(mpmath.mpc(b.re, 0), b.radius + abs(b.im), True))
        else:
            out.append(b)
    return out


def real_roots(p: Sequence, prec: int = 128) -> list:
    return [b for b in isolate_roots(p, prec) if b.real]
