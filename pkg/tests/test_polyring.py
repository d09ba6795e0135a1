from __future__ import annotations

import random

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from acsv.polyring import (
    Direction,
    Polynomial,
    PolynomialSyntaxError,
    RingMismatchError,
    TermOrder,
    divide_exact,
    gcd,
    parse,
    squarefree_part,
)

XY = ("x", "y")
QA = "2 - x*y^2 - 2*x*y - x + y"


def P(text, ring=XY):
    return parse(text, ring)


def to_sympy(p: Polynomial):
    syms = sp.symbols(p.ring)
    expr = 0
    for e, c in p.terms.items():
        t = sp.Rational(int(c.numerator), int(c.denominator))
        for s, k in zip(syms, e):
            t *= s ** k
        expr += t
    return sp.expand(expr)


def random_poly(rng, ring, maxdeg=5, nterms=6):
    terms = {}
    for _ in range(rng.randint(1, nterms)):
        e = [0] * len(ring)
        budget = rng.randint(0, maxdeg)
        for _ in range(budget):
            e[rng.randrange(len(ring))] += 1
        c = rng.randint(-9, 9)
        if c:
            terms[tuple(e)] = mpq(c)
    return Polynomial(ring, terms)


def test_arith_examples():
    assert P("1 - x") + P("x") == P("1")
    assert P("x - 1") * P("x + 1") == P("x^2 - 1")
    assert P(QA).substitute({"x": 0, "y": 0}) == P("2")
    assert P("x + y") ** 3 == P("x^3 + 3*x^2*y + 3*x*y^2 + y^3")
    assert (P("x") - P("x")).terms == {}


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        P("x") + parse("x", ("x", "z"))


def test_partial_examples():
    assert P(QA).partial("x") == P("-y^2 - 2*y - 1")
    assert P("3").partial("y") == P("0")
    assert P("x^2").partial(0) == P("2*x")


def test_partial_matches_sympy():
    rng = random.Random(3)
    for _ in range(50):
        p = random_poly(rng, ("x", "y", "z"))
        for i, s in enumerate(sp.symbols("x y z")):
            assert to_sympy(p.partial(i)) == sp.expand(sp.diff(to_sympy(p), s))


def test_homogenize_examples():
    Z = ("Z", "x", "y")
    assert P("1 - x - y").homogenize("Z") == parse("Z - x - y", Z)
    h = P(QA).homogenize("Z")
    assert h == parse("2*Z^3 - x*y^2 - 2*x*y*Z - x*Z^2 + y*Z^2", Z)
    assert h.is_homogeneous() and h.dehomogenize("Z") == P(QA)
    assert P("x").homogenize("Z") == parse("x", Z)
    with pytest.raises(ValueError):
        P("0").homogenize("Z")


def test_homogenize_roundtrip_500():
    rng = random.Random(11)
    for _ in range(500):
        ring = ("x", "y", "z")[: rng.randint(1, 3)]
        p = random_poly(rng, ring)
        if not p.terms:
            continue
        h = p.homogenize("Z")
        assert h.is_homogeneous()
        assert h.total_degree() == p.total_degree()
        assert h.dehomogenize("Z") == p


def test_squarefree_examples():
    assert squarefree_part(P("(1 - x)^2*(1 + y)")) == squarefree_part(P("(1 - x)*(1 + y)"))
    q = P("1 - x - y - x*y^2")
    s = squarefree_part(q)
    assert divide_exact(q, s).is_constant()
    assert squarefree_part(P("x^2*y^3")) == P("x*y")
    with pytest.raises(ValueError):
        squarefree_part(P("0"))


def test_squarefree_against_sympy():
    rng = random.Random(5)
    x, y = sp.symbols("x y")
    for _ in range(30):
        a = random_poly(rng, XY, maxdeg=2, nterms=3)
        b = random_poly(rng, XY, maxdeg=2, nterms=3)
        if a.is_constant() or b.is_constant():
            continue
        p = a ** 2 * b
        s = squarefree_part(p)
        expected = sp.sqf_part(sp.Poly(to_sympy(p), x, y))
        ratio = sp.cancel(to_sympy(s) / expected.as_expr())
        assert ratio.is_number and ratio != 0


def test_squarefree_has_no_repeated_factor():
    rng = random.Random(8)
    for _ in range(20):
        a = random_poly(rng, XY, maxdeg=2, nterms=3)
        b = random_poly(rng, XY, maxdeg=2, nterms=3)
        if a.is_constant() or b.is_constant():
            continue
        p = a ** 2 * b
        s = squarefree_part(p)
        assert gcd(gcd(s, s.partial(0)), s.partial(1)).is_constant()
        divide_exact(p, s)
        # s^2 divides p exactly when every irreducible factor of p is repeated
        all_repeated = all(m >= 2 for _, m in sp.factor_list(to_sympy(p))[1])
        try:
            divide_exact(p, s ** 2)
            divides = True
        except ValueError:
            divides = False
        assert divides == all_repeated


def test_substitute_examples():
    ring = ("x", "y", "y1", "y2")
    p = parse("y1*x - y2*y", ring)
    assert p.substitute({"y1": 1, "y2": 1}) == parse("x - y", ring)
    ring = ("Z", "x", "y", "H")
    q = parse("H*Z^2 - x*y", ring)
    assert q.substitute({"Z": 0}) == parse("-x*y", ring)
    assert q.substitute({}) == q


def test_substitute_is_simultaneous():
    p = P("x + 2*y")
    assert p.substitute({"x": P("y"), "y": P("x")}) == P("y + 2*x")


def test_parse_errors():
    with pytest.raises(PolynomialSyntaxError) as e:
        P("x*")
    assert e.value.column == 2 and e.value.line == 1
    with pytest.raises(PolynomialSyntaxError) as e:
        P("x + q")
    assert e.value.token == "q"
    with pytest.raises(PolynomialSyntaxError):
        P("2x")


def test_parse_render_fixed_point():
    rng = random.Random(2)
    for _ in range(100):
        p = random_poly(rng, ("x", "y", "z")) * mpq(1, rng.randint(1, 5))
        text = str(p)
        assert parse(text, ("x", "y", "z")) == p
        assert str(parse(text, ("x", "y", "z"))) == text


def test_render_order():
    assert str(P(QA)) == "-x*y^2 - 2*x*y - x + y + 2"
    assert str(P("1/2")) == "1/2"


def test_direction():
    d = Direction((1, 2, -1))
    assert d.norm1 == 4
    assert sum(abs(u) for u in d.unit) == 1
    assert d.scaled(3).r == (3, 6, -3)
    with pytest.raises(ValueError):
        Direction((0, 0))


monomials = st.tuples(*[st.integers(0, 4)] * 3)


@settings(max_examples=1000, deadline=None)
@given(monomials, monomials, monomials, st.sampled_from(["lex", "grevlex", "elim:1"]))
def test_term_order_total_transitive_multiplicative(a, b, c, name):
    order = TermOrder.from_string(name, 3)
    k = order.key
    if k(a) < k(b) and k(b) < k(c):
        assert k(a) < k(c)
    if k(a) < k(b):
        ab = tuple(x + y for x, y in zip(a, c))
        bc = tuple(x + y for x, y in zip(b, c))
        assert k(ab) < k(bc)
    assert (k(a) == k(b)) == (a == b)
    assert k((0, 0, 0)) <= k(a)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_derivation_rule(seed):
    rng = random.Random(seed)
    p = random_poly(rng, ("x", "y"), maxdeg=4)
    q = random_poly(rng, ("x", "y"), maxdeg=4)
    for i in range(2):
        assert (p * q).partial(i) == p.partial(i) * q + p * q.partial(i)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_arith_commutative_associative(seed):
    rng = random.Random(seed)
    a, b, c = (random_poly(rng, ("x", "y"), maxdeg=3) for _ in range(3))
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
