"""Buchberger's algorithm and the ideal operations built on it.

The engine works on raw ``{exponent: mpq}`` dicts.  Pairs are selected by the
normal strategy refined by sugar degree, and useless pairs are discarded with
the Gebauer-Moeller criteria (coprime leading terms, chain criterion).
Reduction keeps a max-heap of pending monomials so that each step only pays
for the terms it touches.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .polyring import Polynomial, RingMismatchError, TermOrder

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# low-level helpers on exponent tuples


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _disjoint(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _mask(e: tuple) -> int:
    m = 0
    for i, x in enumerate(e):
        if x:
            m |= 1 << i
    return m


class _Poly:
    """Basis element prepared for reduction: leading data plus the tail."""

    __slots__ = ("lm", "lc", "mask", "tail", "terms", "sugar")

    def __init__(self, terms: dict, key, sugar: int | None = None):
        lm = max(terms, key=key)
        lc = terms[lm]
        if lc != 1:
            inv = 1 / lc
            terms = {e: c * inv for e, c in terms.items()}
        self.terms = terms
        self.lm = lm
        self.lc = mpq(1)
        self.mask = _mask(lm)
        self.tail = [(e, c) for e, c in terms.items() if e != lm]
        self.sugar = max(sum(e) for e in terms) if sugar is None else sugar


class _Reducer:
    """Full or top reduction of dicts modulo a list of :class:`_Poly`."""

    def __init__(self, order: TermOrder):
        self.order = order
        self._nk: dict = {}

    def nkey(self, e):
        k = self._nk.get(e)
        if k is None:
            k = self._nk[e] = tuple(-x for x in self.order.key(e))
        return k

    def find(self, e, emask, basis):
        for g in basis:
            if g.mask & ~emask:
                continue
            if _divides(g.lm, e):
                return g
        return None

    def reduce(self, terms: dict, basis: Sequence[_Poly], full: bool = True) -> dict:
        work = dict(terms)
        nkey = self.nkey
        heap = [(nkey(e), e) for e in work]
        heapq.heapify(heap)
        rem: dict = {}
        while heap:
            _, e = heapq.heappop(heap)
            c = work.pop(e, None)
            if c is None:
                continue
            g = self.find(e, _mask(e), basis) if basis else None
            if g is None:
                rem[e] = c
                if not full:
                    rem.update(work)
                    return rem
                continue
            m = tuple(x - y for x, y in zip(e, g.lm))
            for e2, c2 in g.tail:
                t = tuple(x + y for x, y in zip(m, e2))
                v = work.get(t)
                if v is None:
                    work[t] = -c * c2
                    heapq.heappush(heap, (nkey(t), t))
                else:
                    v = v - c * c2
                    if v:
                        work[t] = v
                    else:
                        del work[t]
        return rem


# ---------------------------------------------------------------------------
# Buchberger


@dataclass
class GBStats:
    pairs: int = 0
    zero_reductions: int = 0
    criteria_skipped: int = 0


def _spoly(f: _Poly, g: _Poly) -> tuple:
    L = _lcm(f.lm, g.lm)
    mf = tuple(x - y for x, y in zip(L, f.lm))
    mg = tuple(x - y for x, y in zip(L, g.lm))
    out: dict = {}
    for e, c in f.tail:
        t = tuple(x + y for x, y in zip(mf, e))
        out[t] = out.get(t, 0) + c
    for e, c in g.tail:
        t = tuple(x + y for x, y in zip(mg, e))
        v = out.get(t, 0) - c
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    sugar = max(f.sugar + sum(mf), g.sugar + sum(mg))
    return out, sugar


def _buchberger(polys: list, order: TermOrder, stats: GBStats | None = None) -> list:
    """Reduced Groebner basis of nonzero term dicts, as a list of dicts."""
    key = order.key
    red = _Reducer(order)
    stats = stats if stats is not None else GBStats()

    # start from a reduced generating set, smallest leading terms first
    polys = [p for p in polys if p]
    if not polys:
        return []
    polys.sort(key=lambda t: key(max(t, key=key)))

    G: list[_Poly] = []  # current basis (elements may be dropped from G)
    pairs: list = []  # (sugar, lcm key, counter, i, j, lcm)
    allpolys: list[_Poly] = []
    counter = itertools.count()
    if order.kind == "grevlex":
        def select(p):
            return p[:3]
    else:
        # sugar misleads non-graded orders; fall back to the plain normal strategy
        def select(p):
            return (p[1], p[0], p[2])

    def update(h: _Poly) -> None:
        nonlocal G, pairs
        hi = len(allpolys)
        allpolys.append(h)
        lh = h.lm
        C = [gi for gi in G]
        D: list = []
        while C:
            gi = C.pop()
            lg = allpolys[gi].lm
            L = _lcm(lg, lh)
            if _disjoint(lg, lh):
                D.append(gi)
                continue
            redundant = False
            for gj in itertools.chain(C, D):
                if _divides(_lcm(allpolys[gj].lm, lh), L):
                    redundant = True
                    break
            if not redundant:
                D.append(gi)
            else:
                stats.criteria_skipped += 1
        E = []
        for gi in D:
            lg = allpolys[gi].lm
            if _disjoint(lg, lh):
                stats.criteria_skipped += 1
            else:
                E.append(gi)
        newpairs = []
        for p in pairs:
            _, _, _, i, j, L = p
            if (_divides(lh, L) and _lcm(allpolys[i].lm, lh) != L
                    and _lcm(allpolys[j].lm, lh) != L):
                stats.criteria_skipped += 1
                continue
            newpairs.append(p)
        for gi in E:
            g = allpolys[gi]
            L = _lcm(g.lm, lh)
            sug = max(g.sugar + sum(L) - sum(g.lm), h.sugar + sum(L) - sum(lh))
            newpairs.append((sug, key(L), next(counter), gi, hi, L))
        pairs = newpairs
        G = [gi for gi in G if not _divides(lh, allpolys[gi].lm)] + [hi]

    for p in polys:
        r = red.reduce(p, [allpolys[i] for i in G])
        if r:
            h = _Poly(r, key)
            if not any(h.lm) :
                return [{h.lm: mpq(1)}]
            update(h)

    while pairs:
        best = min(range(len(pairs)), key=lambda k: select(pairs[k]))
        _, _, _, i, j, _ = pairs.pop(best)
        stats.pairs += 1
        s, sugar = _spoly(allpolys[i], allpolys[j])
        r = red.reduce(s, [allpolys[k] for k in G]) if s else {}
        if not r:
            stats.zero_reductions += 1
            continue
        h = _Poly(r, key, sugar)
        if not any(h.lm):
            return [{h.lm: mpq(1)}]
        update(h)

    basis = [allpolys[i] for i in G]
    # interreduce: G is already minimal, reduce tails
    out = []
    for k, g in enumerate(basis):
        others = basis[:k] + basis[k + 1:]
        r = red.reduce(g.terms, others)
        out.append(_Poly(r, key).terms)
    out.sort(key=lambda t: key(max(t, key=key)), reverse=True)
    return out


# ---------------------------------------------------------------------------
# public API


def _terms_of(polys: Iterable[Polynomial], ring: tuple) -> list:
    out = []
    for p in polys:
        if p.ring != ring:
            raise RingMismatchError(f"ring mismatch: {p.ring} vs {ring}")
        if p.terms:
            out.append(dict(p.terms))
    return out


def groebner_basis_of(polys: Sequence[Polynomial], order: TermOrder | None = None,
                      stats: GBStats | None = None) -> list:
    """Reduced Groebner basis of the ideal generated by ``polys``."""
    polys = list(polys)
    if not polys:
        return []
    ring = polys[0].ring
    order = order or TermOrder.grevlex(len(ring))
    if order.nvars != len(ring):
        raise ValueError("term order size does not match the ring")
    return [Polynomial._raw(ring, t) for t in _buchberger(_terms_of(polys, ring), order, stats)]


def reduce(p: Polynomial, basis: Sequence[Polynomial], order: TermOrder | None = None) -> Polynomial:
    """Remainder of ``p`` on division by ``basis`` (fully reduced)."""
    order = order or TermOrder.grevlex(p.nvars)
    prepared = [_Poly(dict(g.terms), order.key) for g in basis if g.terms]
    for g in basis:
        if g.ring != p.ring:
            raise RingMismatchError("ring mismatch")
    r = _Reducer(order).reduce(p.terms, prepared)
    return Polynomial._raw(p.ring, r)


def spolynomial(f: Polynomial, g: Polynomial, order: TermOrder) -> Polynomial:
    s, _ = _spoly(_Poly(dict(f.terms), order.key), _Poly(dict(g.terms), order.key))
    return Polynomial._raw(f.ring, s)


def is_groebner(basis: Sequence[Polynomial], order: TermOrder) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    basis = [b for b in basis if b.terms]
    for f, g in itertools.combinations(basis, 2):
        if reduce(spolynomial(f, g, order), basis, order):
            return False
    return True


def is_reduced(basis: Sequence[Polynomial], order: TermOrder) -> bool:
    for k, g in enumerate(basis):
        lm, lc = g.leading(order)
        if lc != 1:
            return False
        others = [h.leading(order)[0] for j, h in enumerate(basis) if j != k]
        for e in g.terms:
            if any(_divides(o, e) for o in others):
                return False
    return True


def _fresh(ring: tuple, stem: str) -> str:
    name = stem
    i = 0
    while name in ring:
        i += 1
        name = f"{stem}{i}"
    return name


@dataclass
class Ideal:
    """Generators in a fixed ring, with reduced Groebner bases cached per order."""

    ring: tuple
    generators: list
    _gb: dict = field(default_factory=dict, repr=False, compare=False)

    def __init__(self, ring: Sequence[str], generators: Iterable[Polynomial] = ()):
        self.ring = tuple(ring)
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                g = Polynomial.constant(self.ring, g)
            if g.ring != self.ring:
                raise RingMismatchError(f"ring mismatch: {g.ring} vs {self.ring}")
            if g.terms:
                gens.append(g)
        self.generators = gens
        self._gb = {}

    @classmethod
    def parse(cls, text: str | Sequence[str], ring: Sequence[str]) -> Ideal:
        from .polyring import parse, parse_list
        if isinstance(text, str):
            return cls(ring, parse_list(text, ring))
        return cls(ring, [parse(t, ring) for t in text])

    @property
    def nvars(self) -> int:
        return len(self.ring)

    def default_order(self) -> TermOrder:
        return TermOrder.grevlex(self.nvars)

    def groebner(self, order: TermOrder | None = None) -> list:
        order = order or self.default_order()
        gb = self._gb.get(order)
        if gb is None:
            gb = self._gb[order] = groebner_basis_of(self.generators, order) if self.generators else []
        return gb

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def __contains__(self, p: Polynomial) -> bool:
        return member(p, self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        if self.ring != other.ring:
            return False
        return self.groebner() == other.groebner()

    def __hash__(self):
        return hash((self.ring, tuple(self.groebner())))

    def __add__(self, other: Ideal) -> Ideal:
        return Ideal(self.ring, self.generators + other.generators)

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.groebner()) + ">"

    def change_ring(self, ring: Sequence[str]) -> Ideal:
        return Ideal(ring, [g.change_ring(ring) for g in self.generators])

    def substitute(self, bindings) -> Ideal:
        return Ideal(self.ring, [g.substitute(bindings) for g in self.generators])


def groebner_basis(I: Ideal, order: TermOrder | None = None) -> list:
    return I.groebner(order)


def member(p: Polynomial, I: Ideal) -> bool:
    if p.ring != I.ring:
        raise RingMismatchError("ring mismatch")
    if not p.terms:
        return True
    gb = I.groebner()
    return not reduce(p, gb, I.default_order())


def eliminate(I: Ideal, keep: Sequence, drop_ring: bool = False) -> Ideal:
    """Elimination ideal ``I`` intersected with the subring of ``keep``.

    ``keep`` holds variable names or indices.  The result lives in the same
    ring unless ``drop_ring`` is set, in which case the ring shrinks to the
    kept variables.
    """
    idx = [I.ring.index(v) if isinstance(v, str) else v for v in keep]
    if not idx:
        raise ValueError("keep must be nonempty")
    gone = [i for i in range(I.nvars) if i not in idx]
    if not gone:
        out = Ideal(I.ring, I.generators)
    else:
        order = TermOrder.elim(I.nvars, len(gone), gone + sorted(idx))
        gb = I.groebner(order)
        kept = [g for g in gb if all(not any(e[i] for i in gone) for e in g.terms)]
        out = Ideal(I.ring, kept)
    if drop_ring:
        ring = tuple(I.ring[i] for i in sorted(idx))
        return out.change_ring(ring)
    return out


def saturate(I: Ideal, g: Polynomial) -> Ideal:
    """``I : g^oo`` via a fresh variable ``w`` and the generator ``1 - w*g``."""
    if not g.terms:
        raise ValueError("cannot saturate by the zero polynomial")
    if g.ring != I.ring:
        raise RingMismatchError("ring mismatch")
    w = _fresh(I.ring, "_w")
    ring = (w,) + I.ring
    W = Polynomial.var(ring, w)
    gens = [p.change_ring(ring) for p in I.generators] + [1 - W * g.change_ring(ring)]
    ext = Ideal(ring, gens)
    elim = eliminate(ext, list(range(1, len(ring))))
    return Ideal(I.ring, [p.change_ring(I.ring) for p in elim.generators])


def intersect(A: Ideal, B: Ideal) -> Ideal:
    """``A`` intersected with ``B`` through ``t*A + (1-t)*B`` and elimination of ``t``."""
    if A.ring != B.ring:
        raise RingMismatchError("ring mismatch")
    t = _fresh(A.ring, "_t")
    ring = (t,) + A.ring
    T = Polynomial.var(ring, t)
    gens = ([T * a.change_ring(ring) for a in A.generators]
            + [(1 - T) * b.change_ring(ring) for b in B.generators])
    elim = eliminate(Ideal(ring, gens), list(range(1, len(ring))))
    return Ideal(A.ring, [p.change_ring(A.ring) for p in elim.generators])


def saturate_ideal(I: Ideal, J: Ideal) -> Ideal:
    """``I : J^oo`` as the intersection of the saturations by each generator of ``J``."""
    gens = [g for g in J.groebner() if g.terms]
    if not gens:
        raise ValueError("cannot saturate by the zero ideal")
    if len(gens) == 1 and gens[0].is_constant():
        return Ideal(I.ring, I.generators)
    out = None
    for g in gens:
        s = saturate(I, g)
        out = s if out is None else intersect(out, s)
    return out


def radical_member(p: Polynomial, I: Ideal) -> bool:
    """Rabinowitsch trick: ``p`` is in rad(I) iff ``1`` is in ``I + <1 - w*p>``."""
    if p.ring != I.ring:
        raise RingMismatchError("ring mismatch")
    if not p.terms:
        return True
    w = _fresh(I.ring, "_w")
    ring = (w,) + I.ring
    W = Polynomial.var(ring, w)
    gens = [q.change_ring(ring) for q in I.generators] + [1 - W * p.change_ring(ring)]
    return Ideal(ring, gens).is_unit()


def dimension(I: Ideal) -> int:
    """Krull dimension from the leading monomials of the grevlex basis; -1 for the unit ideal."""
    gb = I.groebner()
    if not gb:
        return I.nvars
    if len(gb) == 1 and gb[0].is_constant():
        return -1
    order = I.default_order()
    masks = [_mask(g.leading(order)[0]) for g in gb]
    n = I.nvars
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            smask = 0
            for i in S:
                smask |= 1 << i
            if all(m & ~smask for m in masks):
                return size
    return 0


def ideal_equal(A: Ideal, B: Ideal) -> bool:
    return A == B


def weighted_degrees(p: Polynomial, weights: Sequence[int]) -> set:
    return {sum(x * w for x, w in zip(e, weights)) for e in p.terms}


def saturate_variable(I: Ideal, var, weights: Sequence[int] | None = None) -> Ideal:
    """``I : v^oo`` for a variable ``v``.

    When every generator is homogeneous for ``weights`` (positive on ``v``),
    one basis in :meth:`TermOrder.wrevlex` suffices: dividing each element by
    its largest power of ``v`` yields the saturation.  Otherwise this falls back
    to :func:`saturate`.
    """
    i = I.ring.index(var) if isinstance(var, str) else var
    V = Polynomial.var(I.ring, I.ring[i])
    if weights is None or not all(len(weighted_degrees(g, weights)) == 1 for g in I.generators):
        return saturate(I, V)
    order = TermOrder.wrevlex(weights, i)
    out = []
    for g in I.groebner(order):
        k = min(e[i] for e in g.terms)
        if k:
            g = Polynomial._raw(g.ring, {e[:i] + (e[i] - k,) + e[i + 1:]: c for e, c in g.terms.items()})
        out.append(g)
    return Ideal(I.ring, out)
