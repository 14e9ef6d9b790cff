"""Fractional ideals in factored form, pseudo-generators, prime generators and
two-element representations.  No inversion in K is ever performed."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .arith import (AlgElem, ArithError, IntPoly, NumberField, ONE, factor_integer, frac_ceil,
                    frac_floor, make_elem, pmul, prem, resultant, shrink)
from .montes import Decomposition, PrimeIdeal, improve_approximation, montes_factorize
from .omtype import VerificationError
from .valuation import cross_value, value_of_phi, vp, vp_capped


def _prime_key(P: PrimeIdeal) -> tuple:
    return (P.p, P.label)


@dataclass(frozen=True)
class FracIdeal:
    """prod P^{a_P}; ``items`` is sorted by (p, label) and has no zero exponents."""

    field: NumberField
    items: tuple = ()
    gens: tuple = ()

    @classmethod
    def from_map(cls, field: NumberField, exps: Mapping[PrimeIdeal, int], gens: Iterable = ()):
        items = tuple(sorted(((P, a) for P, a in exps.items() if a), key=lambda t: _prime_key(t[0])))
        return cls(field, items, tuple(gens))

    @property
    def factored(self) -> dict:
        return dict(self.items)

    def exponent(self, P: PrimeIdeal) -> int:
        return self.factored.get(P, 0)

    @property
    def primes_below(self) -> list[int]:
        return sorted({P.p for P, _ in self.items})

    @property
    def is_integral(self) -> bool:
        return all(a > 0 for _, a in self.items)

    def __eq__(self, other) -> bool:
        return isinstance(other, FracIdeal) and self.items == other.items

    def __hash__(self) -> int:
        return hash(self.items)

    def __repr__(self) -> str:
        body = " ".join(f"{P.label}@{P.p}^{a}" for P, a in self.items)
        return f"FracIdeal({body or '(1)'})"


@dataclass(frozen=True)
class TwoElementRep:
    ell: Fraction
    alpha: AlgElem


# -- factorization -------------------------------------------------------


def candidate_primes(field: NumberField, gens: list[AlgElem]) -> list[int]:
    """Prime factors of N = gcd(a_i N_i) and M = lcm(b_i), alpha_i = (a_i/b_i) g_i(theta)."""
    M = math.lcm(*(g.scalar.denominator for g in gens))
    rational = [g for g in gens if g.num == ONE]
    N = 0
    if rational:
        # N divides the norm of any rational generator, so the others add nothing
        for g in rational:
            N = math.gcd(N, abs(g.scalar.numerator))
    else:
        for g in gens:
            N = math.gcd(N, abs(g.scalar.numerator) * abs(resultant(field.f, g.num)))
            if N == 1:
                break
    if N == 0:
        raise ArithError("a generator is a zero divisor in K")
    ps = set(factor_integer(N)) if N > 1 else set()
    ps |= set(factor_integer(M)) if M > 1 else set()
    return sorted(ps)


def factor_ideal(field: NumberField, gens: Iterable[AlgElem]) -> FracIdeal:
    """Prime ideal factorization of the fractional ideal generated by gens."""
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        raise ArithError("the zero ideal has no factorization")
    exps: dict[PrimeIdeal, int] = {}
    # rational generators first: their valuation is immediate and caps the rest
    order = sorted(gens, key=lambda g: g.num != ONE)
    for p in candidate_primes(field, gens):
        for P in montes_factorize(field, p):
            a = vp(P, order[0])
            for g in order[1:]:
                a = vp_capped(P, g, a)
            if a:
                exps[P] = a
    return FracIdeal.from_map(field, exps, gens)


def prime_power(field: NumberField, p: int) -> FracIdeal:
    """pZ_K = prod P^{e(P/p)}."""
    return FracIdeal.from_map(field, {P: P.e for P in montes_factorize(field, p)},
                              (field.from_int(p),))


def _combine(a: FracIdeal, b: FracIdeal, op) -> FracIdeal:
    if a.field is not b.field:
        raise ArithError("ideals of different fields")
    fa, fb = a.factored, b.factored
    return FracIdeal.from_map(a.field, {P: op(fa.get(P, 0), fb.get(P, 0)) for P in set(fa) | set(fb)})


def ideal_add(a: FracIdeal, b: FracIdeal) -> FracIdeal:
    return _combine(a, b, min)


def ideal_mul(a: FracIdeal, b: FracIdeal) -> FracIdeal:
    return _combine(a, b, lambda x, y: x + y)


def ideal_intersect(a: FracIdeal, b: FracIdeal) -> FracIdeal:
    return _combine(a, b, max)


def ideal_div_test(a: FracIdeal, b: FracIdeal) -> bool:
    """True iff b divides a (a is contained in b)."""
    fa, fb = a.factored, b.factored
    return all(fa.get(P, 0) >= fb.get(P, 0) for P in set(fa) | set(fb))


# -- pseudo-generators ---------------------------------------------------


def _min_ramified_level(P: PrimeIdeal) -> int:
    for i in range(1, P.r + 1):
        if P.om.e_prod(i) == P.e:
            return i
    raise VerificationError("ramification index is not reached by the type")


def pseudo_indices(P: PrimeIdeal) -> tuple[list[int], Fraction]:
    """(j_1..j_r', sum H) solving sum H_{i,j_i} = 1/e(P/p) mod Z by back-substitution."""
    om = P.om
    rr = _min_ramified_level(P)
    js = [0] * rr
    target = Fraction(1, P.e)
    total = Fraction(0)
    for i in range(rr, 0, -1):
        L = om.level(i)
        E = om.e_prod(i - 1)
        # levels below i contribute multiples of 1/E, so j_i is pinned mod e_i
        c = (target - _H(P, i, 0)) * E * L.e
        if c.denominator != 1:
            raise VerificationError("inconsistent ramification data in pseudo-generator")
        j = (L.l * int(c)) % L.e
        js[i - 1] = j
        H = _H(P, i, j)
        target -= H
        total += H
    if target.denominator != 1:
        raise VerificationError("pseudo-generator congruence has no solution")
    return js, total


def _H(P: PrimeIdeal, i: int, j: int) -> Fraction:
    if j == 0:
        return Fraction(0)
    L = P.om.level(i)
    return (L.u + j * (Fraction(L.h, L.e) + L.v_phi)) / P.om.e_prod(i - 1)


def pseudo_generator(P: PrimeIdeal, field: NumberField | None = None) -> AlgElem:
    """Integral pi with v_P(pi) = 1 (pi = p when P is unramified)."""
    if P.e == 1:
        return make_elem(ONE, P.p)
    K = field or NumberField(P.f_poly, check=False)
    js, total = pseudo_indices(P)
    factors = [(P.om.level(i).quot[j], 1) for i, j in enumerate(js, start=1) if j]
    g = K.product_of_powers(factors)
    return K.from_poly(g, Fraction(1, P.p ** frac_floor(total)))


# -- multipliers and generators -----------------------------------------


def _first_ref(P: PrimeIdeal):
    """(phi_{1,[P]}, lambda^0_{1,P}): first entry of Ref at level 1."""
    L = P.om.level(1)
    if L.refinements:
        return L.refinements[0]
    return L.phi, L.slope


@dataclass(frozen=True)
class Multiplier:
    """b = h(theta) g(theta) / p^N with h = (B_[P])^m and g = prod phi_l^{d_l}."""

    b: AlgElem
    h_poly: IntPoly
    g_poly: IntPoly
    N: int


def multiplier(P: PrimeIdeal, D: Decomposition, targets: Mapping[PrimeIdeal, int],
               field: NumberField | None = None, check: bool = True) -> Multiplier:
    """Integral b with v_P(b) = 0 and v_Q(b) >= targets[Q] for every Q != P over p.

    Missing targets default to 1.  The exponent m is taken from the general
    formula for every class, singleton classes included.
    """
    primes = list(D)
    if len(primes) == 1:
        return Multiplier(make_elem(ONE), ONE, ONE, 0)
    K = field or NumberField(P.f_poly, check=False)
    T = {Q: max(int(targets.get(Q, 1)), 0) for Q in primes}
    classes: dict[tuple, list[PrimeIdeal]] = {}
    for Q in primes:
        classes.setdefault(Q.om.psi0, []).append(Q)
    own = P.om.psi0
    N = 0
    ds: dict[PrimeIdeal, int] = {}
    for Lq in classes[own]:
        if Lq != P:
            x = cross_value(P, Lq, Lq.r + 1)
            ds[Lq] = x.denominator
            N += x.numerator
    m = 0
    for Q in primes:
        if Q.om.psi0 != own:
            lam0 = abs(_first_ref(Q)[1])
            m = max(m, frac_ceil(Fraction(N * Q.e + T[Q], Q.e) / lam0))
    h_facs = [(_first_ref(members[0])[0], m) for k, members in classes.items() if k != own and m]
    g_facs = []
    for Lq, d in ds.items():
        V1 = sum((d2 * Lq.e * cross_value(Lq, L2, L2.r + 1)
                  for L2, d2 in ds.items() if L2 != Lq), Fraction(0))
        need = (T[Lq] + N * Lq.e - V1) / d - Lq.om.level(Lq.r + 1).v_phi
        improved = improve_approximation(Lq, max(frac_ceil(need), 1))
        g_facs.append((improved.phi_p, d))
    h_poly = K.product_of_powers(h_facs)
    g_poly = K.product_of_powers(g_facs)
    b = K.from_poly(prem(pmul(h_poly, g_poly), K.f), Fraction(1, P.p ** N))
    if check:
        if vp_capped(P, b, 1) != 0:
            raise VerificationError(f"multiplier for {P.label} is not a unit at it")
        for Q in primes:
            if Q != P and vp_capped(Q, b, T[Q]) < T[Q]:
                raise VerificationError(f"multiplier for {P.label} too small at {Q.label}")
    return Multiplier(b, h_poly, g_poly, N)


def multipliers(D: Decomposition, targets: Mapping[PrimeIdeal, int],
                field: NumberField | None = None, check: bool = True) -> dict:
    """{P: b_P} for every P in D (see ``multiplier``)."""
    K = field or NumberField(D.primes[0].f_poly, check=False)
    return {P: multiplier(P, D, targets, K, check).b for P in D}


def _assemble(P: PrimeIdeal, D: Decomposition, bs: Mapping, K: NumberField, check: bool) -> AlgElem:
    alpha = K.mul(bs[P], pseudo_generator(P, K))
    for Q in D:
        if Q != P:
            alpha = K.add(alpha, bs[Q])
    if check:
        for Q in D:
            want = 1 if Q == P else 0
            if vp_capped(Q, alpha, want + 1) != want:
                raise VerificationError(f"generator of {P.label} fails at {Q.label}")
    return alpha


def generator(P: PrimeIdeal, D: Decomposition | None = None,
              field: NumberField | None = None, check: bool = True) -> AlgElem:
    """alpha with P = (p, alpha): v_P(alpha) = 1 and v_Q(alpha) = 0 for other Q | p."""
    K = field or NumberField(P.f_poly, check=False)
    D = D or montes_factorize(K, P.p)
    if len(D) == 1 and P.e == 1:
        return make_elem(ONE, P.p)
    bs = multipliers(D, {Q: 2 for Q in D}, field=K, check=check)
    return _assemble(P, D, bs, K, check)


def all_generators(D: Decomposition, field: NumberField, check: bool = True) -> dict:
    """generator(P) for every P in D, sharing one set of multipliers."""
    if len(D) == 1:
        (P,) = D
        return {P: generator(P, D, field, check)}
    bs = multipliers(D, {Q: 2 for Q in D}, field=field, check=check)
    return {P: _assemble(P, D, bs, field, check) for P in D}


# -- two-element representation -----------------------------------------


def _local_two_element(field: NumberField, p: int, exps: Mapping[PrimeIdeal, int]) -> tuple[int, AlgElem]:
    """(H, alpha) with a_p = (p^H, alpha) and v_P(alpha) = a_P for every P | p.

    The largest power p^k dividing a_p is pulled out first, leaving an
    integral ideal b with a_p = p^k b; negative exponents never need an inverse.
    """
    D = montes_factorize(field, p)
    a = {P: exps.get(P, 0) for P in D}
    H = max(frac_ceil(Fraction(x, P.e)) for P, x in a.items())
    k = min(frac_floor(Fraction(x, P.e)) for P, x in a.items())
    rest = {P: a[P] - k * P.e for P in D}
    beta = field.from_int(1)
    if any(rest.values()):
        # beta only matters modulo p^m Z[theta], where m e_P > rest_P for all P;
        # reducing after each product keeps the coefficients small
        depth = {p: max(b // P.e for P, b in rest.items()) + 1}
        gens = all_generators(D, field, check=False)
        for P, b in rest.items():
            if b:
                beta = shrink(field.mul(beta, _pow_reduced(field, gens[P], b, depth)), depth)
    return H, field.mul(beta, field.from_int(Fraction(p) ** k))


def _pow_reduced(field: NumberField, x: AlgElem, b: int, depth: dict[int, int]) -> AlgElem:
    """x^b reduced modulo p^depth[p] Z[theta] after every product."""
    out = field.from_int(1)
    x = shrink(x, depth)
    while b:
        if b & 1:
            out = shrink(field.mul(out, x), depth)
        b >>= 1
        if b:
            x = shrink(field.mul(x, x), depth)
    return out


def two_element(a: FracIdeal) -> TwoElementRep:
    """a = (ell, alpha) with ell the least positive rational in a."""
    K = a.field
    fa = a.factored
    by_p: dict[int, dict] = {}
    for P, x in fa.items():
        by_p.setdefault(P.p, {})[P] = x
    if not by_p:
        return TwoElementRep(Fraction(1), K.from_int(1))
    local = {p: _local_two_element(K, p, ex) for p, ex in sorted(by_p.items())}
    ell = Fraction(1)
    for p, (H, _) in local.items():
        ell *= Fraction(p) ** H
    if len(local) == 1:
        ((p, (H, alpha)),) = local.items()
        return TwoElementRep(ell, shrink(alpha, {p: H + 1}))
    alpha = K.from_int(0)
    for p, (_, ap) in local.items():
        w = Fraction(1)
        for q, (Hq, _) in local.items():
            if q != p:
                w *= Fraction(q) ** (Hq + 1)
        alpha = K.add(alpha, K.scale(ap, w))
    # v_P(alpha) = a_P survives any change by p^(H_p + 1) Z[theta]
    return TwoElementRep(ell, shrink(alpha, {p: H + 1 for p, (H, _) in local.items()}))


def value_of_phi_int(P: PrimeIdeal, i: int) -> int:
    """v_P(phi_i(theta)) as an integer."""
    x = P.e * value_of_phi(P, i)
    if x.denominator != 1:
        raise VerificationError("non-integral valuation of a phi-polynomial")
    return int(x)
