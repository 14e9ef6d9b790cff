import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_ramified_fields
from omideals.arith import ArithError, NumberField
from omideals.crt import NotIntegralError, ResidueTarget, crt_idempotents, crt_solve, reduce
from omideals.montes import montes_factorize
from omideals.valuation import vp

RANDOM = random_ramified_fields(seed=41, count=10, max_degree=12)
CUBIC = NumberField((6, 0, 0, 1))  # x^3 + 6: 2 and 3 both totally ramified


def _congruent(K, P, x, y, a):
    d = K.sub(x, y)
    return d.is_zero or vp(P, d) >= a


def test_reduce_integers():
    K = NumberField((1, 0, 1))
    for P in montes_factorize(K, 5):
        F = P.residue_field
        assert reduce(P, K.from_int(Fraction(3, 7))) == F.mul(F.from_int(3), F.inv(F.from_int(7)))
        assert reduce(P, K.from_int(10)) == F.zero


def test_reduce_rejects_non_integral():
    K = NumberField((2, 0, 1))
    (P,) = montes_factorize(K, 2)
    with pytest.raises(NotIntegralError):
        reduce(P, K.elem([0, 1], 2))


def test_reduce_theta_in_split_field():
    K = NumberField((1, 0, 1))
    roots = sorted(reduce(P, K.theta()) for P in montes_factorize(K, 5))
    assert roots == [2, 3]


@pytest.mark.slow
def test_reduce_theta_deg1000(K1000):
    (P,) = [Q for Q in montes_factorize(K1000, 5) if Q.f == 4]
    F = P.residue_field
    z = reduce(P, K1000.theta())
    assert F.is_zero(F.add(F.add(F.pow(z, 4), F.mul(F.from_int(2), F.pow(z, 2))), F.from_int(3)))


def _integral_samples(K, p, rng, count):
    D = montes_factorize(K, p)
    out = []
    while len(out) < count:
        den = rng.choice([1, 1, p, p * p])
        x = K.elem([rng.randint(-30, 30) for _ in range(K.n)], den)
        if x.is_zero or all(vp(P, x) >= 0 for P in D):
            out.append(x)
    return D, out


@pytest.mark.parametrize("idx", range(len(RANDOM)))
def test_reduce_is_ring_homomorphism(idx):
    K, p = RANDOM[idx]
    rng = random.Random(idx)
    D, xs = _integral_samples(K, p, rng, 12)
    for P in D:
        F = P.residue_field
        for x, y in zip(xs[::2], xs[1::2]):
            assert reduce(P, K.add(x, y)) == F.add(reduce(P, x), reduce(P, y))
            assert reduce(P, K.mul(x, y)) == F.mul(reduce(P, x), reduce(P, y))
        for x in xs:
            assert F.is_zero(reduce(P, x)) == (x.is_zero or vp(P, x) >= 1)


def test_reduce_kernel_deg20(K20):
    D = montes_factorize(K20, 2)
    for P in D:
        for k in range(1, 4):
            x = K20.pow(K20.theta(), k)
            y = K20.add(x, K20.from_int(1))
            assert P.residue_field.is_zero(reduce(P, y)) == (vp(P, y) >= 1)


def test_idempotents_single_prime():
    K = NumberField((2, 0, 1))
    D = montes_factorize(K, 2)
    assert crt_idempotents(D, {D.primes[0]: 3}, K) == {D.primes[0]: K.from_int(1)}


def _check_idempotents(K, D, exps):
    cs = crt_idempotents(D, exps, K, check=True)
    one = K.from_int(1)
    for P, c in cs.items():
        assert reduce(P, c) == P.residue_field.one
        assert _congruent(K, P, c, one, exps[P])
        for Q in D:
            if Q != P:
                assert c.is_zero or vp(Q, c) >= exps[Q]


def test_idempotents_two_primes():
    K = NumberField((1, 0, 1))
    D = montes_factorize(K, 5)
    _check_idempotents(K, D, {P: 1 for P in D})
    _check_idempotents(K, D, {P: 3 for P in D})


def test_idempotents_deg6(K6):
    D = montes_factorize(K6, 3)
    _check_idempotents(K6, D, dict(zip(D, (3, 4, 1, 2, 1))))


def test_idempotents_deg20(K20):
    D = montes_factorize(K20, 2)
    _check_idempotents(K20, D, {P: 2 for P in D})


def test_idempotents_random():
    for K, p in RANDOM:
        D = montes_factorize(K, p)
        _check_idempotents(K, D, {P: 1 + k % 3 for k, P in enumerate(D)})


def test_single_target_returns_it():
    K = NumberField((1, 0, 1))
    P = montes_factorize(K, 5).primes[0]
    beta = K.elem([3, 4])
    assert crt_solve([ResidueTarget(P, 1, beta)], K) == beta


def test_deg6_system(K6):
    D = montes_factorize(K6, 3)
    t = K6.theta()
    # published order p2, p1, p1', p1'', p1''' matched to our labels
    labels = ["p5", "p3", "p4", "p1", "p2"]
    targets = [ResidueTarget(D.by_label(lab), a, K6.pow(t, k))
               for k, (lab, a) in enumerate(zip(labels, (1, 1, 2, 3, 4)))]
    alpha = crt_solve(targets, K6)
    for tg in targets:
        assert _congruent(K6, tg.prime, alpha, tg.target, tg.exponent)
    den = alpha.den
    while den % 3 == 0:
        den //= 3
    assert den == 1


def test_two_rational_primes():
    K = CUBIC
    t = K.theta()
    targets = [ResidueTarget(P, a, tgt)
               for p, a, tgt in [(2, 2, K.from_int(1)), (3, 3, K.add(t, K.from_int(2))),
                                 (5, 1, K.pow(t, 2)), (7, 2, K.from_int(5))]
               for P in montes_factorize(K, p)]
    alpha = crt_solve(targets, K)
    assert len(targets) >= 6
    for tg in targets:
        assert _congruent(K, tg.prime, alpha, tg.target, tg.exponent)


def test_targets_with_denominators(K20):
    D = montes_factorize(K20, 2)
    P, Q = D.primes
    # phi_P / 2^k is integral at both primes for small k
    x = K20.elem(P.om.level(2).phi, 2)
    assert all(vp(R, x) >= 0 for R in D)
    targets = [ResidueTarget(P, 3, x), ResidueTarget(Q, 2, K20.theta())]
    alpha = crt_solve(targets, K20)
    for tg in targets:
        assert _congruent(K20, tg.prime, alpha, tg.target, tg.exponent)


def test_non_integral_target_rejected(K20):
    P = montes_factorize(K20, 2).primes[0]
    with pytest.raises(ArithError, match="integral"):
        crt_solve([ResidueTarget(P, 1, K20.from_int(Fraction(1, 2))),
                   ResidueTarget(montes_factorize(K20, 2).primes[1], 1, K20.from_int(1))], K20)


def test_duplicate_targets():
    K = NumberField((1, 0, 1))
    P, Q = montes_factorize(K, 5).primes
    with pytest.raises(ArithError, match="conflicting"):
        crt_solve([ResidueTarget(P, 1, K.from_int(1)), ResidueTarget(P, 1, K.from_int(2)),
                   ResidueTarget(Q, 1, K.from_int(0))], K)
    # compatible duplicates merge into the stronger congruence
    alpha = crt_solve([ResidueTarget(P, 1, K.from_int(1)), ResidueTarget(P, 2, K.from_int(26)),
                       ResidueTarget(Q, 1, K.from_int(0))], K)
    assert _congruent(K, P, alpha, K.from_int(26), 2)


def test_bad_exponent():
    K = NumberField((1, 0, 1))
    P = montes_factorize(K, 5).primes[0]
    with pytest.raises(ArithError):
        crt_solve([ResidueTarget(P, 0, K.from_int(1))], K)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=3, max_size=3), st.integers(1, 4), st.integers(1, 4))
def test_solution_denominator_is_bounded(coeffs, a2, a3):
    K = CUBIC
    x = K.elem(coeffs)
    targets = [ResidueTarget(P, a2, x) for P in montes_factorize(K, 2)]
    targets += [ResidueTarget(P, a3, K.from_int(1)) for P in montes_factorize(K, 3)]
    alpha = crt_solve(targets, K)
    den = alpha.den
    while den % 2 == 0:
        den //= 2
    while den % 3 == 0:
        den //= 3
    assert den == 1
    for tg in targets:
        assert _congruent(K, tg.prime, alpha, tg.target, tg.exponent)


def test_idempotent_claim_checked():
    # check=True verifies red(p^-M P(theta)) * xi = 1 inside every idempotent
    for K, p in RANDOM:
        D = montes_factorize(K, p)
        crt_idempotents(D, {P: 1 for P in D}, K, check=True)
