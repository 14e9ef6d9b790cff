import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_ramified_fields
from omideals.arith import ArithError, NumberField, resultant, val_p
from omideals.montes import improve_approximation, montes_factorize
from omideals.valuation import cross_value, valuation, value_of_phi, vp, vp_poly

FIELDS = random_ramified_fields(seed=21, count=20, max_degree=14)
CASES = [(K, D) for K, p in FIELDS for D in [montes_factorize(K, p)]]


def test_vp_of_p_is_ramification_index(K20):
    for K, D in CASES + [(K20, montes_factorize(K20, 2))]:
        for P in D:
            assert vp(P, K.from_int(P.p)) == P.e
            assert vp(P, K.from_int(P.p ** 3 * 7)) == 3 * P.e


def test_integers():
    K = NumberField((2, 0, 1))
    (P,) = montes_factorize(K, 2)
    assert vp(P, K.from_int(Fraction(3, 8))) == -6
    assert vp(P, K.theta()) == 1


def test_zero_is_rejected():
    K = NumberField((2, 0, 1))
    (P,) = montes_factorize(K, 2)
    with pytest.raises(ArithError, match="zero"):
        vp(P, K.from_int(0))
    with pytest.raises(ArithError, match="zero"):
        vp(P, K.elem([2, 0, 1]))
    with pytest.raises(ArithError, match="zero in K"):
        vp_poly(P, (2, 0, 1))


@pytest.mark.parametrize("idx", range(len(CASES)))
def test_resultant_identity(idx):
    K, D = CASES[idx]
    rng = random.Random(idx)
    for _ in range(6):
        g = [rng.randint(-50, 50) for _ in range(rng.randint(1, K.n))]
        if not any(g):
            continue
        total = sum(P.f * vp(P, K.elem(g)) for P in D)
        assert total == val_p(resultant(K.f, tuple(g)), D.p)


def test_resultant_identity_with_high_contact(K20):
    # g = phi_P has large valuation at P, which forces refinement rounds
    D = montes_factorize(K20, 2)
    for P in D:
        g = P.phi_p
        res = valuation(P, K20.elem(g))
        assert res.levels_used == P.r + 1
        assert sum(Q.f * vp_poly(Q, g) for Q in D) == val_p(resultant(K20.f, g), 2)
    P = D.primes[0]
    sharper = improve_approximation(P, 4 * P.h)
    res = valuation(P, K20.elem(sharper.phi_p))
    assert res.improvements_performed >= 1 and res.value == vp_poly(P, sharper.phi_p)


_K, _D = CASES[0]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=1, max_size=8),
       st.lists(st.integers(-30, 30), min_size=1, max_size=8))
def test_multiplicative_and_ultrametric(a, b):
    x, y = _K.elem(a), _K.elem(b)
    if x.is_zero or y.is_zero:
        return
    for P in _D:
        vx, vy = vp(P, x), vp(P, y)
        assert vp(P, _K.mul(x, y)) == vx + vy
        s = _K.add(x, y)
        if not s.is_zero:
            vs = vp(P, s)
            assert vs >= min(vx, vy)
            if vx != vy:
                assert vs == min(vx, vy)


def test_value_of_phi_small():
    (P,) = montes_factorize(NumberField((2, 0, 1)), 2)
    assert value_of_phi(P, 1) == Fraction(1, 2)
    (Q, _) = montes_factorize(NumberField((1, 0, 1)), 5)
    assert value_of_phi(Q, 1) == Q.h
    with pytest.raises(ArithError):
        value_of_phi(P, 5)


def test_value_of_phi_matches_vp(K20):
    for K, D in CASES + [(K20, montes_factorize(K20, 2))]:
        for P in D:
            for i in range(1, P.r + 2):
                assert P.e * value_of_phi(P, i) == vp_poly(P, P.om.level(i).phi)


def test_cross_value_matches_vp(K20):
    checked = 0
    for K, D in CASES + [(K20, montes_factorize(K20, 2))]:
        for P in D:
            for Q in D:
                if P == Q:
                    continue
                for i in range(1, Q.r + 2):
                    want = Fraction(vp_poly(P, Q.om.level(i).phi), P.e)
                    assert cross_value(P, Q, i) == want
                    checked += 1
    assert checked > 20


def test_cross_value_stable_under_improvement(K20):
    P, Q = montes_factorize(K20, 2).primes
    base = [cross_value(P, Q, i) for i in range(1, Q.r + 1)]
    P2, Q2 = improve_approximation(P, 3 * P.h), improve_approximation(Q, 3 * Q.h)
    assert [cross_value(P2, Q2, i) for i in range(1, Q.r + 1)] == base


def test_cross_value_guards():
    D = montes_factorize(NumberField((1, 0, 1)), 5)
    P, Q = D.primes
    assert cross_value(P, Q, 1) == 0
    with pytest.raises(ArithError):
        cross_value(P, P, 1)
