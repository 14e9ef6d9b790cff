"""Residue maps Z_K -> F_P and a Chinese remainder solver built from
small multipliers; only finite-field inversions are used."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import ffield as ff
from .arith import AlgElem, ArithError, NumberField, frac_ceil, shrink, val_p
from .ideal import multiplier
from .montes import Decomposition, PrimeIdeal, improve_approximation, montes_factorize
from .omtype import VerificationError, _axpy, index_of_coincidence
from .valuation import vp_capped


class NotIntegralError(ArithError):
    pass


@dataclass(frozen=True)
class ResidueTarget:
    prime: PrimeIdeal
    exponent: int
    target: AlgElem


# -- residue map ---------------------------------------------------------


def _z_product(P: PrimeIdeal, ts: Sequence[int], F):
    """prod z_k^{t_k} (k = 1..len(ts)) inside F."""
    om = P.om
    out = F.one
    for k, t in enumerate(ts, start=1):
        if t:
            z = ff.embed(F, om.zs[k], om.fields[k + 1])
            out = F.mul(out, F.pow(z, t))
    return out


def _lred(P: PrimeIdeal, g, N: int):
    """(lred(g(theta_P) / p^N), P'), P' possibly carrying an improved terminal level."""
    om = P.om
    F = P.residue_field
    if N < 0:
        return F.zero, P
    if N == 0:
        x = ff.reduce_to_f1(om.fields[1], om.psi0, g)
        return ff.embed(F, x, om.fields[1]), P
    if not ff.poly_divides(om.fields[0], om.psi0, om.residual(0, g)):
        raise NotIntegralError("element is not p-integral at this prime")
    r = P.r
    i = 1
    while True:
        R, s, u, W = om.residual_data(i, g)
        if W > N * om.e_prod(i):
            # v(g(theta_P)) >= W / (e_1...e_i) > N already
            return F.zero, P
        if ff.poly_divides(om.fields[i], om.psi(i), R):
            if i <= r:
                i += 1
                continue
            P = improve_approximation(P, 2 * P.h)
            om = P.om
            continue
        break
    L = om.level(i)
    E = om.e_prod(i)
    if W > N * E:
        return F.zero, P
    if W < N * E:
        raise NotIntegralError("element is not p-integral at this prime")
    vec = _axpy(s, L.log_phi, _axpy(u, L.log_pi, (-N,)))
    ts = om.gamma_decompose(vec, i)
    Fi1 = om.fields[i + 1]
    val = ff.poly_eval_in(Fi1, om.fields[i], R, om.zs[i])
    val = Fi1.mul(val, _z_product(P, ts, Fi1))
    return ff.embed(F, val, Fi1), P


def reduce(P: PrimeIdeal, alpha: AlgElem):
    """red_P(alpha) in the residue field F_P of P; alpha must be P-integral."""
    F = P.residue_field
    if alpha.is_zero:
        return F.zero
    p = P.p
    N = -val_p(alpha.scalar, p)
    unit = alpha.scalar * Fraction(p) ** N
    x, _ = _lred(P, alpha.num, N)
    F0 = P.om.fields[0]
    c = F0.mul(F0.from_int(unit.numerator), F0.inv(F0.from_int(unit.denominator)))
    return F.mul(ff.embed(F, c, F0), x)


# -- idempotents ---------------------------------------------------------


def _coincidence_level(P: PrimeIdeal, D: Decomposition) -> int:
    return max((index_of_coincidence(P.core, Q.core) for Q in D if Q != P), default=0)


def _unit_idempotent(P: PrimeIdeal, D: Decomposition, exps: Mapping[PrimeIdeal, int],
                     K: NumberField, check: bool) -> AlgElem:
    """c with red_P(c) = 1 and v_Q(c) >= exps[Q] for Q != P."""
    om = P.om
    p = P.p
    i = _coincidence_level(P, D)
    M = frac_ceil(Fraction(om.level(i + 1).v_phi, om.e_prod(i))) if i > 0 else 0
    targets = {Q: exps.get(Q, 0) + M * Q.e for Q in D if Q != P}
    mult = multiplier(P, D, targets, K, check)
    F1 = om.fields[1]
    zeta = ff.reduce_to_f1(F1, om.psi0, mult.h_poly)
    beta0 = K.from_poly(ff.lift_to_int(F1, F1.inv(zeta)))
    c = K.mul(mult.b, beta0)
    if i > 0:
        xi = reduce(P, K.from_poly(mult.g_poly, Fraction(1, p ** mult.N)))
        L = om.level(i)
        V = om.e_prod(i) * M
        log_pi_next = _axpy(L.l, L.log_phi, tuple(-L.lp * c_ for c_ in L.log_pi))
        vec = _axpy(V, log_pi_next, (-M,))
        ts = om.gamma_decompose(vec[:i + 1], i) if not any(vec[i + 1:]) else None
        if ts is None:
            raise VerificationError("p^-M pi^V is not a product of gammas")
        Fi1 = om.fields[i + 1]
        xi = ff.restrict(P.residue_field, xi, Fi1)
        xi2 = _z_product(P, ts, Fi1)
        zi = om.zs[i]
        target = Fi1.mul(Fi1.pow(zi, L.l * V // L.e), Fi1.inv(Fi1.mul(xi, xi2)))
        Pp = om.construct(i, V, om.coordinates(i, target))
        corr = K.from_poly(Pp, Fraction(1, p ** M))
        if check:
            claim = P.residue_field.mul(reduce(P, corr), ff.embed(P.residue_field, xi, Fi1))
            if claim != P.residue_field.one:
                raise VerificationError("residue of the correcting factor is not xi^-1")
        c = K.mul(c, corr)
    return c


def crt_idempotents(D: Decomposition, exponents: Mapping[PrimeIdeal, int],
                    field: NumberField | None = None, check: bool = True) -> dict:
    """c_P = 1 mod P^{a_P}, c_P = 0 mod Q^{a_Q} (Q != P), for each P with a_P >= 1."""
    primes = list(D)
    K = field or NumberField(primes[0].f_poly, check=False)
    out = {}
    for P in primes:
        a = exponents.get(P, 0)
        if a < 1:
            continue
        if len(primes) == 1:
            out[P] = K.from_int(1)
            continue
        c = _unit_idempotent(P, D, exponents, K, check)
        one = K.from_int(1)
        cm1 = K.sub(c, one)
        w = vp_capped(P, cm1, a) if not cm1.is_zero else a
        if w < a:
            m = -(-a // w)
            if m % 2 == 0:
                m += 1
            c = K.add(K.pow(cm1, m), one)
        if check:
            if reduce(P, c) != P.residue_field.one or (not K.sub(c, one).is_zero and vp_capped(P, K.sub(c, one), a) < a):
                raise VerificationError(f"idempotent for {P.label} is not 1 modulo P^a")
            for Q in primes:
                if Q != P and exponents.get(Q, 0) > 0 and vp_capped(Q, c, exponents[Q]) < exponents[Q]:
                    raise VerificationError(f"idempotent for {P.label} is not 0 at {Q.label}")
        out[P] = c
    return out


# -- solver --------------------------------------------------------------


def _merge(targets: Sequence[ResidueTarget], K: NumberField) -> list[ResidueTarget]:
    merged: dict = {}
    for t in targets:
        if t.exponent < 1:
            raise ArithError("exponents must be >= 1")
        prev = merged.get(t.prime)
        if prev is None:
            merged[t.prime] = t
            continue
        lo = min(prev.exponent, t.exponent)
        diff = K.sub(prev.target, t.target)
        if not diff.is_zero and vp_capped(t.prime, diff, lo) < lo:
            raise ArithError(f"conflicting targets for prime {t.prime.label} over {t.prime.p}")
        merged[t.prime] = t if t.exponent > prev.exponent else prev
    return list(merged.values())


def crt_solve(targets: Sequence[ResidueTarget], field: NumberField, check: bool = True) -> AlgElem:
    """alpha with v_P(alpha - target) >= a for every (P, a, target)."""
    K = field
    targets = _merge(targets, K)
    if not targets:
        return K.from_int(0)
    for t in targets:
        for Q in montes_factorize(K, t.prime.p):
            if not t.target.is_zero and vp_capped(Q, t.target, 0) < 0:
                raise ArithError("targets must be integral at every prime over p")
    if len(targets) == 1:
        return targets[0].target
    by_p: dict[int, list[ResidueTarget]] = {}
    for t in targets:
        by_p.setdefault(t.prime.p, []).append(t)
    local = {}
    for p, ts in sorted(by_p.items()):
        D = montes_factorize(K, p)
        exps = {t.prime: t.exponent for t in ts}
        cs = crt_idempotents(D, exps, K, check)
        acc = K.from_int(0)
        for t in ts:
            acc = K.add(acc, K.mul(cs[t.prime], t.target))
        local[p] = acc
    alpha = _integer_crt(local, by_p, K)
    # only alpha mod P^a matters; drop the excess digits the idempotents carry
    depth = {p: max(frac_ceil(Fraction(t.exponent, t.prime.e)) for t in ts) for p, ts in by_p.items()}
    alpha = shrink(alpha, depth)
    if check:
        for t in targets:
            d = K.sub(alpha, t.target)
            if not d.is_zero and vp_capped(t.prime, d, t.exponent) < t.exponent:
                raise VerificationError(f"CRT solution misses {t.prime.label} over {t.prime.p}")
    return alpha


def _integer_crt(local: Mapping[int, AlgElem], by_p: Mapping[int, list], K: NumberField) -> AlgElem:
    """sum w_p alpha_p with integer weights w_p = 1 mod p^k_p, 0 mod q^k_q."""
    if len(local) == 1:
        return next(iter(local.values()))
    ks = {}
    for p, ts in by_p.items():
        k = max(frac_ceil(Fraction(t.exponent, t.prime.e)) for t in ts)
        deficit = 0
        for q, aq in local.items():
            if q != p and not aq.is_zero:
                for t in ts:
                    deficit = max(deficit, -vp_capped(t.prime, aq, 0))
        ks[p] = k + frac_ceil(Fraction(deficit, min(t.prime.e for t in ts)))
    mods = {p: p ** k for p, k in ks.items()}
    total = math.prod(mods.values())
    alpha = K.from_int(0)
    for p, ap in local.items():
        rest = total // mods[p]
        w = rest * pow(rest, -1, mods[p])
        alpha = K.add(alpha, K.scale(ap, w))
    return alpha

