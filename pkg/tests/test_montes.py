import json
from collections import Counter
from fractions import Fraction
from math import ceil

import pytest

from conftest import random_ramified_fields, random_small_fields
from omideals import ffield as ff
from omideals.arith import ArithError, NumberField, pderiv, psub, resultant
from omideals.montes import improve_approximation, montes_factorize, okutsu_frame
from omideals.pbasis import mu
from omideals.valuation import vp_poly


def _fe(D):
    return Counter((P.f, P.e) for P in D)


def test_split_prime():
    D = montes_factorize(NumberField((1, 0, 1)), 5)
    assert _fe(D) == Counter({(1, 1): 2})
    assert [P.label for P in D] == ["p1", "p2"]
    assert all(P.depth == 0 for P in D)


def test_inert_prime_has_empty_frame():
    (P,) = montes_factorize(NumberField((1, 1, 1)), 2)
    assert (P.e, P.f) == (1, 2)
    assert okutsu_frame(P) == ([], 0)


def test_sqrt_minus_two_frame():
    (P,) = montes_factorize(NumberField((2, 0, 1)), 2)
    assert (P.e, P.f) == (2, 1)
    assert okutsu_frame(P) == ([(0, 1)], 1)


def test_deg20_decomposition(K20):
    D = montes_factorize(K20, 2)
    assert sorted((P.f, P.e) for P in D) == [(1, 4), (2, 8)]


@pytest.mark.slow
def test_deg1000_decomposition_at_two(K1000):
    D = montes_factorize(K1000, 2)
    assert _fe(D) == Counter([(1, 10), (1, 38), (4, 10), (4, 38), (20, 38)])


def test_rejects_bad_input():
    K = NumberField((2, 0, 1))
    with pytest.raises(ArithError):
        montes_factorize(K, 6)
    with pytest.raises(ArithError):
        NumberField((1, 2, 1))


def test_improve_identity_and_congruence():
    (P,) = montes_factorize(NumberField((2, 0, 1)), 2)
    assert improve_approximation(P, P.h) is P
    Q = improve_approximation(P, 5)
    assert Q.h >= 5 and Q.label == P.label and P.h < 5
    assert Q.om.levels[:-1] == P.om.levels[:-1]
    nu = mu(Q) + Fraction(Q.h, Q.e)
    diff = psub(Q.phi_p, Q.f_poly)
    assert all(c % 2 ** ceil(nu) == 0 for c in diff)


def test_cross_values_stabilize(K20):
    P, Q = montes_factorize(K20, 2).primes
    seen = []
    target = P.h
    for _ in range(4):
        target *= 2
        P2 = improve_approximation(P, target)
        seen.append(vp_poly(Q, P2.phi_p))
    assert len(set(seen)) == 1


def test_fundamental_identity_random():
    for K, p in random_ramified_fields(seed=3, count=25, max_degree=16):
        D = montes_factorize(K, p)
        assert sum(P.e * P.f for P in D) == K.n
        for P in D:
            assert P.core.divides(K.f)
            for Q in D:
                if Q is not P:
                    assert not P.core.divides(Q.phi_p)


def test_dedekind_case_matches_factorization():
    checked = 0
    for K in random_small_fields(seed=8, count=30, max_degree=7):
        disc = resultant(K.f, pderiv(K.f))
        for p in (2, 3, 5, 7, 11, 13):
            if disc % p == 0:
                continue
            F = ff.PrimeField(p)
            want = Counter((len(g) - 1, 1) for g, m in ff.ff_factor(F, ff.reduce_int_poly(F, K.f)) for _ in range(m))
            assert _fe(montes_factorize(K, p)) == want
            checked += 1
    assert checked > 50


def test_refinement_lists(K20):
    for K, p in [(K20, 2)] + random_ramified_fields(seed=4, count=15, max_degree=16):
        for P in montes_factorize(K, p):
            for L in P.om.levels:
                slopes = [abs(lam) for _, lam in L.refinements]
                assert slopes == sorted(set(slopes))
                assert all(abs(lam) < abs(L.slope) for lam in slopes)


def test_deterministic(K20):
    a = [json.dumps(P.om.to_json(), sort_keys=True) for P in montes_factorize(NumberField(K20.f), 2)]
    b = [json.dumps(P.om.to_json(), sort_keys=True) for P in montes_factorize(NumberField(K20.f), 2)]
    assert a == b


def test_terminal_level_shape():
    for K, p in random_ramified_fields(seed=9, count=10, max_degree=14):
        for P in montes_factorize(K, p):
            T = P.terminal
            assert T.e == 1 and T.f == 1
            assert len(P.phi_p) - 1 == P.om.m(P.r + 1)
