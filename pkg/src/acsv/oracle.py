"""Exact power-series coefficients of P/Q along a direction, and a growth fit."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .polyring import Direction, Polynomial, RingMismatchError

DEFAULT_CAP = 400


@dataclass
class SeriesRequest:
    P: Polynomial
    Q: Polynomial
    direction: Direction
    count: int
    cap: int = DEFAULT_CAP

    def check(self) -> None:
        if self.P.ring != self.Q.ring:
            raise RingMismatchError("numerator and denominator rings differ")
        if len(self.direction) != self.Q.nvars:
            raise ValueError("direction length does not match the number of variables")
        if any(x < 0 for x in self.direction):
            raise ValueError("series directions must be nonnegative")
        if self.count < 0:
            raise ValueError("count must be nonnegative")
        if not self.Q.constant_coeff():
            raise ValueError("Q(0) = 0: no power series expansion at the origin")
        if self.count * max(self.direction) > self.cap:
            raise ValueError(f"N*max(r) = {self.count * max(self.direction)} exceeds cap {self.cap}")


def coefficients(req: SeriesRequest | Polynomial, Q: Polynomial | None = None,
                 direction=None, count: int | None = None) -> list:
    """``a_{n r}`` for ``n = 0..N`` by degree-by-degree series division.

    Accepts a :class:`SeriesRequest` or ``(P, Q, r, N)``.
    """
    if not isinstance(req, SeriesRequest):
        if not isinstance(direction, Direction):
            direction = Direction(tuple(direction))
        req = SeriesRequest(req, Q, direction, count)
    req.check()
    P, Q, r, N = req.P, req.Q, tuple(req.direction), req.count
    q0 = Q.constant_coeff()
    qterms = [(e, c) for e, c in Q.terms.items() if any(e)]
    top = tuple(N * x for x in r)
    pterms = {e: c for e, c in P.terms.items() if all(a <= b for a, b in zip(e, top))}
    a = {}
    for m in itertools.product(*(range(t + 1) for t in top)):
        s = pterms.get(m, mpq(0))
        for e, c in qterms:
            prev = tuple(x - y for x, y in zip(m, e))
            if min(prev) >= 0:
                v = a.get(prev)
                if v:
                    s -= c * v
        if s:
            a[m] = s / q0
    return [a.get(tuple(n * x for x in r), mpq(0)) for n in range(N + 1)]


def growth_estimate(values: Sequence, start: int = 0) -> tuple:
    """Fit ``log|a_n| ~ c + n log(rate) + alpha log n`` over the tail half.

    Returns ``(rate, alpha)``; an all-zero tail gives ``(0.0, nan)``.
    """
    n_all = np.arange(start, start + len(values))
    half = len(values) // 2
    ns, logs = [], []
    for n, v in zip(n_all[half:], values[half:]):
        if v and n > 0:
            ns.append(float(n))
            logs.append(_log_abs(v))
    if not ns and not any(values[half:]):
        return 0.0, math.nan
    if len(ns) < 8:
        raise ValueError("need at least 8 nonzero tail values")
    ns = np.array(ns)
    A = np.column_stack([np.ones_like(ns), ns, np.log(ns)])
    coef, *_ = np.linalg.lstsq(A, np.array(logs), rcond=None)
    return float(np.exp(coef[1])), float(coef[2])


def _log_abs(v) -> float:
    v = mpq(v)
    return math.log(abs(int(v.numerator))) - math.log(int(v.denominator))
