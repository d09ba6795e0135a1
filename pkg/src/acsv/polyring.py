"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
``gmpy2.mpq`` coefficients, tagged with the tuple of variable names of its
ring.  Term orders are represented by :class:`TermOrder`, whose ``key``
method turns an exponent tuple into a Python tuple that sorts ascending in
the order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from gmpy2 import mpq, mpz

MAX_VARS = 16

Rational = Union[int, Fraction, "mpq"]
Exponent = tuple


class RingMismatchError(ValueError):
    pass


class PolynomialSyntaxError(ValueError):
    """Raised by :func:`parse` with a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int, token: str | None = None):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column
        self.token = token


def to_mpq(c) -> mpq:
    if isinstance(c, str):
        return mpq(Fraction(c))
    return mpq(c)


# ---------------------------------------------------------------------------
# term orders


@dataclass(frozen=True)
class TermOrder:
    """A monomial order on exponent tuples of a fixed length.

    ``kind`` is ``"lex"``, ``"grevlex"``, ``"elim"`` or ``"wrevlex"``.  For
    ``"elim"`` the first ``block`` positions (after ``perm`` is applied) form a
    block compared first by grevlex; ties are broken by grevlex on the
    remaining positions.  ``perm`` lists variable indices from most to least
    significant.  ``"wrevlex"`` compares the ``weights``-degree first, then
    prefers the smaller exponent of variable ``block``, then grevlex.
    """

    kind: str
    nvars: int
    block: int = 0
    perm: tuple = ()
    weights: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "elim", "wrevlex"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if not self.perm:
            object.__setattr__(self, "perm", tuple(range(self.nvars)))
        if sorted(self.perm) != list(range(self.nvars)):
            raise ValueError("perm must be a permutation of the variable indices")
        if self.kind == "wrevlex" and len(self.weights) != self.nvars:
            raise ValueError("one weight per variable is required")
        if self.kind == "elim" and not 0 < self.block <= self.nvars:
            raise ValueError("elimination block size out of range")

    @classmethod
    def lex(cls, nvars: int, perm: Sequence[int] = ()) -> TermOrder:
        return cls("lex", nvars, 0, tuple(perm))

    @classmethod
    def grevlex(cls, nvars: int, perm: Sequence[int] = ()) -> TermOrder:
        return cls("grevlex", nvars, 0, tuple(perm))

    @classmethod
    def elim(cls, nvars: int, block: int, perm: Sequence[int] = ()) -> TermOrder:
        return cls("elim", nvars, block, tuple(perm))

    @classmethod
    def wrevlex(cls, weights: Sequence[int], last: int) -> TermOrder:
        """Weighted degree, then smallest exponent of ``last``, then grevlex.

        Nonnegative weights keep this a monomial order.  For ideals that are
        homogeneous for ``weights`` with ``weights[last] > 0``, a basis element
        is divisible by ``last`` iff its leading term is.
        """
        weights = tuple(int(w) for w in weights)
        if any(w < 0 for w in weights) or weights[last] <= 0:
            raise ValueError("weights must be nonnegative and positive on the last variable")
        return cls("wrevlex", len(weights), last, (), weights)

    @classmethod
    def from_string(cls, text: str, nvars: int) -> TermOrder:
        if text == "lex":
            return cls.lex(nvars)
        if text == "grevlex":
            return cls.grevlex(nvars)
        m = re.fullmatch(r"elim:(\d+)", text)
        if m:
            return cls.elim(nvars, int(m.group(1)))
        raise ValueError(f"unknown term order {text!r}")

    def __str__(self) -> str:
        s = self.kind if self.kind != "elim" else f"elim:{self.block}"
        if self.kind == "wrevlex":
            s += f"({','.join(map(str, self.weights))};{self.block})"
        if self.perm != tuple(range(self.nvars)):
            s += "[" + ",".join(map(str, self.perm)) + "]"
        return s

    def key(self, e: Exponent) -> tuple:
        cache = self._cache
        k = cache.get(e)
        if k is None:
            k = cache[e] = self._key(e)
        return k

    def _key(self, e: Exponent) -> tuple:
        p = [e[i] for i in self.perm]
        if self.kind == "lex":
            return tuple(p)
        if self.kind == "grevlex":
            return (sum(p),) + tuple(-x for x in reversed(p))
        if self.kind == "wrevlex":
            w = sum(x * y for x, y in zip(e, self.weights))
            return (w, -e[self.block], sum(e)) + tuple(-x for x in reversed(e))
        a, b = p[: self.block], p[self.block:]
        return ((sum(a),) + tuple(-x for x in reversed(a))
                + (sum(b),) + tuple(-x for x in reversed(b)))

    def compare(self, a: Exponent, b: Exponent) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def eliminates(self) -> tuple:
        """Indices of the eliminated block (empty unless ``kind == 'elim'``)."""
        if self.kind != "elim":
            return ()
        return tuple(self.perm[: self.block])


# ---------------------------------------------------------------------------
# directions


@dataclass(frozen=True)
class Direction:
    r: tuple

    def __post_init__(self):
        r = tuple(int(x) for x in self.r)
        if not r or all(x == 0 for x in r):
            raise ValueError("direction must have a nonzero entry")
        object.__setattr__(self, "r", r)

    @property
    def norm1(self) -> int:
        return sum(abs(x) for x in self.r)

    @property
    def unit(self) -> tuple:
        n = self.norm1
        return tuple(Fraction(x, n) for x in self.r)

    def __len__(self) -> int:
        return len(self.r)

    def __iter__(self):
        return iter(self.r)

    def __getitem__(self, i):
        return self.r[i]

    def scaled(self, k: int) -> Direction:
        return Direction(tuple(k * x for x in self.r))

    @classmethod
    def parse(cls, text: str) -> Direction:
        return cls(tuple(int(t) for t in text.split(",")))


# ---------------------------------------------------------------------------
# polynomials


def _grevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


class Polynomial:
    """Immutable sparse polynomial over the rationals."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Sequence[str], terms: Mapping | None = None):
        ring = tuple(ring)
        if len(ring) > MAX_VARS:
            raise ValueError(f"at most {MAX_VARS} variables are supported")
        if len(set(ring)) != len(ring):
            raise ValueError("variable names must be distinct")
        n = len(ring)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError("exponent length does not match the ring")
            if any(x < 0 for x in e):
                raise ValueError("negative exponent")
            c = to_mpq(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: tuple, terms: dict) -> Polynomial:
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # constructors -----------------------------------------------------------

    @classmethod
    def constant(cls, ring: Sequence[str], c) -> Polynomial:
        ring = tuple(ring)
        return cls(ring, {(0,) * len(ring): c})

    @classmethod
    def var(cls, ring: Sequence[str], name: str) -> Polynomial:
        ring = tuple(ring)
        i = ring.index(name)
        e = [0] * len(ring)
        e[i] = 1
        return cls._raw(ring, {tuple(e): mpq(1)})

    @classmethod
    def monomial(cls, ring: Sequence[str], exp: Sequence[int], c=1) -> Polynomial:
        return cls(ring, {tuple(exp): c})

    @classmethod
    def parse(cls, text: str, ring: Sequence[str]) -> Polynomial:
        return parse(text, ring)

    # basic queries ----------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.ring)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_coeff(self) -> mpq:
        return self.terms.get((0,) * self.nvars, mpq(0))

    def coeff(self, exp: Sequence[int]) -> mpq:
        return self.terms.get(tuple(exp), mpq(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var: int | str) -> int:
        i = self._index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def variables(self) -> tuple:
        """Indices of variables that actually occur."""
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return tuple(sorted(used))

    def leading(self, order: TermOrder | None = None):
        """Return ``(exponent, coefficient)`` of the leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key if order is not None else _grevlex_key
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def _index(self, var: int | str) -> int:
        if isinstance(var, str):
            return self.ring.index(var)
        if not 0 <= var < self.nvars:
            raise IndexError("variable index out of range")
        return var

    def _check(self, other: Polynomial) -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.ring, other)

    # arithmetic -------------------------------------------------------------

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Polynomial._raw(self.ring, t)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            c = to_mpq(other)
            if not c:
                return Polynomial._raw(self.ring, {})
            return Polynomial._raw(self.ring, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Polynomial._raw(self.ring, {e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return divide_exact(self, other)
        c = to_mpq(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (1 / c)

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            c = to_mpq(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == ({(0,) * self.nvars: c} if c else {})

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # calculus and substitution ---------------------------------------------

    def partial(self, var: int | str) -> Polynomial:
        i = self._index(var)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        return Polynomial._raw(self.ring, t)

    def substitute(self, bindings: Mapping) -> Polynomial:
        """Simultaneously substitute polynomials or rationals for variables.

        Keys may be variable names or indices.  The ring is unchanged.
        """
        if not bindings:
            return self
        subs = {}
        for k, v in bindings.items():
            i = self._index(k)
            subs[i] = self._coerce(v) if isinstance(v, Polynomial) else to_mpq(v)
        out = Polynomial._raw(self.ring, {})
        powcache: dict = {}
        for e, c in self.terms.items():
            rest = list(e)
            scalar = c
            polyfactor = None
            for i, v in subs.items():
                k = e[i]
                rest[i] = 0
                if not k:
                    continue
                if isinstance(v, Polynomial):
                    pk = powcache.get((i, k))
                    if pk is None:
                        pk = powcache[(i, k)] = v ** k
                    polyfactor = pk if polyfactor is None else polyfactor * pk
                else:
                    scalar = scalar * v ** k
            if not scalar:
                continue
            term = Polynomial._raw(self.ring, {tuple(rest): scalar})
            if polyfactor is not None:
                term = term * polyfactor
            out = out + term
        return out

    def evaluate(self, point: Sequence):
        """Evaluate at a point given as a sequence of numbers (any numeric type)."""
        total = 0
        for e, c in self.terms.items():
            v = c if not isinstance(point[0], float) else float(c)
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total = total + v
        return total

    def evaluate_with(self, point: Sequence, convert):
        """Evaluate with coefficients mapped through ``convert`` (e.g. ``mpmath.mpf``)."""
        total = convert(0)
        for e, c in self.terms.items():
            v = convert(c)
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total += v
        return total

    # ring changes ----------------------------------------------------------

    def change_ring(self, ring: Sequence[str]) -> Polynomial:
        """Map into another ring by variable name; occurring variables must exist."""
        ring = tuple(ring)
        if ring == self.ring:
            return self
        pos = {name: j for j, name in enumerate(ring)}
        idx = []
        for i, name in enumerate(self.ring):
            idx.append(pos.get(name))
        t = {}
        for e, c in self.terms.items():
            f = [0] * len(ring)
            for i, k in enumerate(e):
                if k:
                    j = idx[i]
                    if j is None:
                        raise RingMismatchError(f"variable {self.ring[i]} not in target ring")
                    f[j] = k
            t[tuple(f)] = c
        return Polynomial._raw(ring, t)

    def homogenize(self, newvar: str, position: int = 0) -> Polynomial:
        """Homogenize with a new variable inserted at ``position`` of the ring."""
        if not self.terms:
            raise ValueError("cannot homogenize the zero polynomial")
        if newvar in self.ring:
            raise ValueError(f"variable {newvar} already in ring")
        ring = self.ring[:position] + (newvar,) + self.ring[position:]
        D = self.total_degree()
        t = {}
        for e, c in self.terms.items():
            t[e[:position] + (D - sum(e),) + e[position:]] = c
        return Polynomial._raw(ring, t)

    def dehomogenize(self, var: str) -> Polynomial:
        """Set ``var`` to 1 and drop it from the ring."""
        i = self.ring.index(var)
        ring = self.ring[:i] + self.ring[i + 1:]
        t: dict = {}
        for e, c in self.terms.items():
            f = e[:i] + e[i + 1:]
            t[f] = t.get(f, 0) + c
        return Polynomial._raw(ring, {e: c for e, c in t.items() if c})

    def homogenize_in(self, variables: Sequence, newvar: str, degree: int | None = None,
                      position: int = 0) -> Polynomial:
        """Homogenize with respect to a subset of variables only.

        The other variables are treated as coefficients.  ``degree`` defaults
        to the largest degree in ``variables``.
        """
        idx = [self._index(v) for v in variables]
        if not self.terms:
            return Polynomial._raw(self.ring[:position] + (newvar,) + self.ring[position:], {})
        D = max(sum(e[i] for i in idx) for e in self.terms) if degree is None else degree
        ring = self.ring[:position] + (newvar,) + self.ring[position:]
        t = {}
        for e, c in self.terms.items():
            k = D - sum(e[i] for i in idx)
            if k < 0:
                raise ValueError("degree smaller than the polynomial's degree")
            t[e[:position] + (k,) + e[position:]] = c
        return Polynomial._raw(ring, t)

    # normalisation ---------------------------------------------------------

    def monic(self, order: TermOrder | None = None) -> Polynomial:
        if not self.terms:
            return self
        _, c = self.leading(order)
        return self * (1 / c)

    def primitive(self) -> Polynomial:
        """Scale to coprime integer coefficients with positive grevlex-leading coefficient."""
        if not self.terms:
            return self
        den = mpz(1)
        for c in self.terms.values():
            den = den * c.denominator // _gcd(den, c.denominator)
        num = mpz(0)
        for c in self.terms.values():
            num = _gcd(num, (c * den).numerator)
        s = den / mpq(num)
        if self.leading()[1] < 0:
            s = -s
        return self * s

    # rendering -------------------------------------------------------------

    def sorted_terms(self, order: TermOrder | None = None) -> list:
        key = order.key if order is not None else _grevlex_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Polynomial({render(self)!r}, ring={self.ring})"


def _gcd(a, b):
    from gmpy2 import gcd
    return gcd(a, b)


# ---------------------------------------------------------------------------
# rendering and parsing


def _render_coeff(c: mpq) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def render(p: Polynomial, order: TermOrder | None = None) -> str:
    """Deterministic text form, terms in descending grevlex order."""
    if not p.terms:
        return "0"
    parts = []
    for i, (e, c) in enumerate(p.sorted_terms(order)):
        mono = "*".join(
            name if k == 1 else f"{name}^{k}" for name, k in zip(p.ring, e) if k
        )
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _render_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_render_coeff(a)}*{mono}"
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    tokens = []
    line, col0 = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        start = m.start(m.lastindex)
        # line/column bookkeeping
        seg = text[pos:start]
        for i, ch in enumerate(seg):
            if ch == "\n":
                line += 1
                col0 = pos + i + 1
        kind = {1: "num", 2: "id", 3: "op"}[m.lastindex]
        tokens.append((kind, m.group(m.lastindex), line, start - col0 + 1))
        pos = m.end()
    tail_nl = text.count("\n") + 1
    last_col = len(text) - (text.rfind("\n") + 1) + 1
    tokens.append(("eof", "", tail_nl, last_col))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: tuple):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, msg, tok):
        kind, val, line, col = tok
        if kind == "eof" and self.i > 0:
            # dangling operator: point at the last real token
            _, val, line, col = self.tokens[self.i - 1]
            msg = f"unexpected end of input after {val!r}"
        raise PolynomialSyntaxError(msg, line, col, val or None)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "eof":
            self.error("empty expression", self.peek())
        p = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            self.error(f"unexpected token {tok[1]!r}", tok)
        return p

    def expr(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            p = self.term()
            if tok[1] == "-":
                p = -p
        else:
            p = self.term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                q = self.term()
                p = p + q if tok[1] == "+" else p - q
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                q = self.factor()
                if tok[1] == "*":
                    p = p * q
                else:
                    if not q.is_constant() or q.is_zero():
                        self.error("division only by nonzero constants", tok)
                    p = p * (1 / q.constant_coeff())
            elif tok[0] in ("num", "id") or (tok[0] == "op" and tok[1] == "("):
                self.error("implicit multiplication is not allowed; use '*'", tok)
            else:
                return p

    def factor(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            t = self.take()
            if t[0] != "num":
                self.i -= 1
                self.error("exponent must be a nonnegative integer", t)
            base = base ** int(t[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val = tok[0], tok[1]
        if kind == "num":
            return Polynomial.constant(self.ring, int(val))
        if kind == "id":
            if val not in self.ring:
                self.i -= 1
                raise PolynomialSyntaxError(f"unknown identifier {val!r}", tok[2], tok[3], val)
            return Polynomial.var(self.ring, val)
        if kind == "op" and val == "(":
            p = self.expr()
            close = self.take()
            if close[0] != "op" or close[1] != ")":
                self.i -= 1
                self.error("expected ')'", close)
            return p
        if kind == "op" and val in "+-":
            # unary sign inside a factor, e.g. x*-y
            p = self.factor()
            return -p if val == "-" else p
        self.i -= 1
        self.error(f"unexpected token {val!r}" if val else "unexpected end of input", tok)


def parse(text: str, ring: Sequence[str]) -> Polynomial:
    """Parse a polynomial written with ``+ - * / ^``, parentheses and rationals."""
    return _Parser(text, tuple(ring)).parse()


def parse_list(text: str, ring: Sequence[str]) -> list:
    """Parse ``;``-separated polynomials."""
    return [parse(part, ring) for part in text.split(";") if part.strip()]


# ---------------------------------------------------------------------------
# division and gcd


def divide_exact(a: Polynomial, b: Polynomial) -> Polynomial:
    """Return ``a / b``; raise ``ValueError`` if ``b`` does not divide ``a``."""
    q, r = divmod_lex(a, b)
    if r:
        raise ValueError("inexact polynomial division")
    return q


def divmod_lex(a: Polynomial, b: Polynomial):
    """Multivariate division of ``a`` by a single ``b`` under lex."""
    a._check(b)
    if not b.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    order = TermOrder.lex(a.nvars)
    be, bc = b.leading(order)
    rem = dict(a.terms)
    quo: dict = {}
    out: dict = {}
    bterms = list(b.terms.items())
    while rem:
        e = max(rem, key=order.key)
        c = rem[e]
        if all(x >= y for x, y in zip(e, be)):
            m = tuple(x - y for x, y in zip(e, be))
            f = c / bc
            quo[m] = f
            for e2, c2 in bterms:
                t = tuple(x + y for x, y in zip(m, e2))
                v = rem.get(t, 0) - f * c2
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        else:
            out[e] = c
            del rem[e]
    return Polynomial._raw(a.ring, quo), Polynomial._raw(a.ring, out)


def _coeffs_in(p: Polynomial, i: int) -> dict:
    """View ``p`` as univariate in variable ``i``: degree -> coefficient polynomial."""
    out: dict = {}
    for e, c in p.terms.items():
        k = e[i]
        f = e[:i] + (0,) + e[i + 1:]
        out.setdefault(k, {})[f] = c
    return {k: Polynomial._raw(p.ring, t) for k, t in out.items()}


def _from_coeffs(coeffs: dict, i: int, ring: tuple) -> Polynomial:
    t = {}
    for k, q in coeffs.items():
        for e, c in q.terms.items():
            t[e[:i] + (k,) + e[i + 1:]] = c
    return Polynomial._raw(ring, t)


def _normalize(p: Polynomial) -> Polynomial:
    if not p.terms:
        return p
    return p.primitive()


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor over Q, normalised by :meth:`Polynomial.primitive`.

    Recursive primitive PRS in the highest-index occurring variable.
    """
    a._check(b)
    if not a.terms:
        return _normalize(b)
    if not b.terms:
        return _normalize(a)
    occurring = set(a.variables()) | set(b.variables())
    if not occurring:
        return Polynomial.constant(a.ring, 1)
    return _normalize(_gcd_rec(a, b, max(occurring)))


def _content(p: Polynomial, i: int) -> Polynomial:
    g = None
    for q in _coeffs_in(p, i).values():
        g = q if g is None else gcd(g, q)
        if g.is_constant():
            return Polynomial.constant(p.ring, 1)
    return g


def _pseudo_rem(a: Polynomial, b: Polynomial, i: int) -> Polynomial:
    db = b.degree(i)
    lc = _coeffs_in(b, i)[db]
    xi = Polynomial.var(a.ring, a.ring[i])
    r = a
    while r.terms and r.degree(i) >= db:
        dr = r.degree(i)
        lr = _coeffs_in(r, i)[dr]
        r = r * lc - b * lr * xi ** (dr - db)
    return r


def _gcd_rec(a: Polynomial, b: Polynomial, i: int) -> Polynomial:
    if a.degree(i) < b.degree(i):
        a, b = b, a
    if b.degree(i) == 0:
        return gcd(_content(a, i), b) if not b.is_constant() else Polynomial.constant(a.ring, 1)
    ca, cb = _content(a, i), _content(b, i)
    c = gcd(ca, cb)
    a, b = divide_exact(a, ca), divide_exact(b, cb)
    while b.terms and b.degree(i) > 0:
        r = _pseudo_rem(a, b, i)
        if not r.terms:
            break
        a, b = b, divide_exact(r, _content(r, i))
        b = _normalize(b)
    if b.terms and b.degree(i) == 0:
        return c
    g = divide_exact(b, _content(b, i))
    return c * g


def squarefree_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of ``p`` (up to a constant)."""
    if not p.terms:
        raise ValueError("squarefree part of the zero polynomial")
    g = p
    for i in p.variables():
        g = gcd(g, p.partial(i))
        if g.is_constant():
            return _normalize(p)
    return _normalize(divide_exact(p, g))


