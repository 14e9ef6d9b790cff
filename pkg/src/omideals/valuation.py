"""p-adic valuations v_P on K*, read off the OM representation of P."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import ffield as ff
from .arith import AlgElem, ArithError, IntPoly, min_val, prem, val_p
from .montes import PrimeIdeal, improve_approximation
from .omtype import gc_phi, index_of_coincidence


@dataclass(frozen=True)
class ValuationResult:
    value: int
    levels_used: int
    improvements_performed: int
    prime: PrimeIdeal  # P itself, or P with an improved Montes approximation


def _poly_value(P: PrimeIdeal, g: IntPoly, cap: int | None = None) -> ValuationResult:
    """v_P(g(theta)) for a nonzero integer polynomial g not divisible by f.

    With ``cap`` the result is min(v_P, cap): refinement stops as soon as the
    lower bound read off the terminal level reaches the cap.
    """
    om = P.om
    e = P.e
    if not ff.poly_divides(om.fields[0], om.psi0, om.residual(0, g)):
        return ValuationResult(e * min_val(g, P.p), 0, 0, P)
    r = P.r
    for i in range(1, r + 1):
        R, _, _, W = om.residual_data(i, g)
        if not ff.poly_divides(om.fields[i], om.psi(i), R):
            return ValuationResult(_scaled(e, W, om.e_prod(i)), i, 0, P)
    improvements = 0
    while True:
        R, _, _, W = om.residual_data(r + 1, g)
        if not ff.poly_divides(om.fields[r + 1], om.psi(r + 1), R):
            return ValuationResult(_scaled(e, W, e), r + 1, improvements, P)
        if cap is not None and W >= cap:
            return ValuationResult(cap, r + 1, improvements, P)
        P = improve_approximation(P, 2 * P.h)
        om = P.om
        improvements += 1


def _scaled(e: int, W: int, E: int) -> int:
    q, rem = divmod(e * W, E)
    if rem:
        raise ArithError("non-integral valuation; type data is inconsistent")
    return q


def valuation(P: PrimeIdeal, alpha: AlgElem, cap: int | None = None) -> ValuationResult:
    """v_P(alpha) with bookkeeping (levels used, refinement rounds, improved P).

    With ``cap`` the value returned is min(v_P(alpha), cap).
    """
    if alpha.is_zero:
        raise ArithError("valuation of zero")
    g = alpha.num
    if not prem(g, P.f_poly):
        raise ArithError("element is zero in K")
    shift = P.e * val_p(alpha.scalar, P.p)
    res = _poly_value(P, g, None if cap is None else cap - shift)
    value = res.value + shift if cap is None else min(res.value + shift, cap)
    return ValuationResult(value, res.levels_used, res.improvements_performed, res.prime)


def vp(P: PrimeIdeal, alpha: AlgElem) -> int:
    return valuation(P, alpha).value


def vp_capped(P: PrimeIdeal, alpha: AlgElem, cap: int) -> int:
    """min(v_P(alpha), cap); cheap when alpha is very close to zero at P."""
    return valuation(P, alpha, cap).value


def vp_poly(P: PrimeIdeal, g: IntPoly) -> int:
    """v_P(g(theta)) for an integer polynomial g of any degree."""
    g = prem(g, P.f_poly)
    if not g:
        raise ArithError("element is zero in K")
    return _poly_value(P, g).value


def value_of_phi(P: PrimeIdeal, i: int) -> Fraction:
    """v(phi_i(theta_P)) normalized so that v(p) = 1."""
    if not 1 <= i <= P.r + 1:
        raise ArithError(f"level {i} out of range 1..{P.r + 1}")
    L = P.om.level(i)
    return (L.v_phi + Fraction(L.h, L.e)) / P.om.e_prod(i - 1)


def cross_value(P: PrimeIdeal, Q: PrimeIdeal, i: int) -> Fraction:
    """v_P(phi_{i,Q}(theta)) / e(P/p) for P != Q over the same p."""
    if P == Q:
        raise ArithError("cross_value needs two different primes; use value_of_phi")
    if P.p != Q.p:
        raise ArithError("primes lie over different rational primes")
    if not 1 <= i <= Q.r + 1:
        raise ArithError(f"level {i} out of range 1..{Q.r + 1}")
    j = index_of_coincidence(P.core, Q.core)
    if j == 0:
        return Fraction(0)
    if j > min(P.r, Q.r):
        raise ArithError("types of distinct primes coincide beyond their orders")
    if i < j:
        return value_of_phi(Q, i)
    phi_pq, lam_p, lam_q = gc_phi(P.core, Q.core)
    Lj = Q.om.level(j)
    base = Fraction(Lj.v_phi)
    E = Q.om.e_prod(j - 1)
    if i == j and Lj.phi == phi_pq:
        return (base + abs(lam_p)) / E
    hidden = (base + min(abs(lam_p), abs(lam_q))) / E
    if i == j:
        return hidden
    return Fraction(Q.om.m(i), Lj.m) * hidden
