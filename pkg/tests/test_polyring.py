"""Base polynomial layer: field arithmetic, grading, orders, parsing."""

import random

import pytest
import sympy

from semidual.polyring import (
    PolyParseError,
    PolyRing,
    Polynomial,
    PrimeField,
    hilbert_numerator,
    intpoly_mul,
    intpoly_str,
    is_prime,
    leading_term,
    parse_polynomial,
)

F = PrimeField(101)


def test_prime_field_basics():
    assert F.p == 101
    assert F.normalize(-1) == 100
    assert F.normalize(202) == 0
    inv = F.inv(7)
    assert (inv * 7) % 101 == 1
    with pytest.raises(ValueError):
        PrimeField(100)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_is_prime_small_cases():
    primes = {2, 3, 5, 7, 11, 101, 32003}
    for n in range(2, 120):
        assert is_prime(n) == all(n % d for d in range(2, n)), n
    assert all(is_prime(p) for p in primes)


def test_poly_arithmetic_matches_sympy():
    S = PolyRing(F, ("x", "y"))
    x, y = S.variable(0), S.variable(1)
    f = x**3 + 2 * x * y + 5
    g = y**2 - x + 7
    sx, sy = sympy.symbols("x y")
    sf = sx**3 + 2 * sx * sy + 5
    sg = sy**2 - sx + 7
    prod = f * g
    spoly = sympy.Poly(sympy.expand(sf * sg), sx, sy)
    # compare coefficient by coefficient mod 101, both inclusions
    for exps, c in prod.terms:
        sc = spoly.coeff_monomial(sx ** exps[0] * sy ** exps[1])
        assert int(sc) % 101 == c
    for mono in spoly.monoms():
        sc = int(spoly.coeff_monomial(sx ** mono[0] * sy ** mono[1]))
        ours = dict(prod.terms).get(tuple(mono), 0)
        assert sc % 101 == ours


def test_poly_identities():
    S = PolyRing(F, ("x", "y"))
    x, y = S.variable(0), S.variable(1)
    f = x + y
    assert (f - f).is_zero
    assert (f * S.zero()).is_zero
    assert f * S.one() == f
    assert -(-f) == f
    assert f**0 == S.one()
    assert f**3 == f * f * f
    assert (x + 1) * (x - 1) == x**2 - 1


def test_weighted_grading():
    S = PolyRing(F, ("x", "y", "z"), weights=(3, 4, 5))
    x, y, z = (S.variable(i) for i in range(3))
    assert (y * y).wdeg() == 8
    assert (x * z).wdeg() == 8
    assert (y * y - x * z).is_homogeneous()
    assert (y * y - x * z).homogeneous_degree() == 8
    assert not (x + y).is_homogeneous()
    with pytest.raises(ValueError):
        (x + y).homogeneous_degree()
    assert S.zero().is_homogeneous()
    assert S.zero().wdeg() == -1


def test_monomials_of_wdeg_counts_semigroup():
    # a weighted degree-d basis of F[x,y,z] counts solutions of
    # 3a + 4b + 5c = d; cross-check a brute-force count
    S = PolyRing(F, ("x", "y", "z"), weights=(3, 4, 5))
    for d in range(0, 16):
        got = len(S.monomials_of_wdeg(d))
        want = sum(
            1
            for a in range(d // 3 + 1)
            for b in range(d // 4 + 1)
            for c in range(d // 5 + 1)
            if 3 * a + 4 * b + 5 * c == d
        )
        assert got == want, d


def test_order_is_degree_compatible():
    S = PolyRing(F, ("x", "y"))
    x, y = S.variable(0), S.variable(1)
    f = x + x * y + y**3
    c, exps = f.leading()
    assert S.wdeg(exps) == 3
    lt = leading_term(f)
    assert lt == (c, exps)


def test_constant_coefficient():
    S = PolyRing(F, ("x", "y"))
    x = S.variable(0)
    assert (x + 5).constant_coefficient() == 5
    assert x.constant_coefficient() == 0
    assert S.zero().constant_coefficient() == 0


def test_parse_polynomial_round_trip():
    S = PolyRing(F, ("x", "y", "z"), weights=(3, 4, 5))
    rng = random.Random(7)
    for _ in range(25):
        terms = {}
        for _ in range(rng.randint(1, 5)):
            e = tuple(rng.randint(0, 3) for _ in range(3))
            terms[e] = rng.randint(1, 100)
        f = S.from_dict(terms)
        assert parse_polynomial(str(f), S) == f
    assert parse_polynomial("0", S).is_zero
    with pytest.raises(PolyParseError):
        parse_polynomial("x +", S)
    with pytest.raises(PolyParseError):
        parse_polynomial("q", S)


def test_hilbert_numerator_polynomial():
    # numerator of a rank-one free module is 1; shifting a generator
    # multiplies by t^d
    assert hilbert_numerator([0]) == {0: 1}
    assert hilbert_numerator([2]) == {2: 1}
    assert hilbert_numerator([0, 1]) == {0: 1, 1: 1}
    prod = intpoly_mul({0: 1, 1: -1}, {0: 1, 1: 1})
    assert prod == {0: 1, 2: -1}
    assert intpoly_str({0: 1, 2: -1}) in ("1 - t^2", "1 + -1*t^2", "1 - 1*t^2")
