"""Local exponents, Okutsu bases of the local rings and p-integral bases."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import (AlgElem, IntPoly, NumberField, ONE, X, frac_floor, pmul, ppow, prem,
                    val_p)
from .ideal import multiplier
from .montes import PrimeIdeal, montes_factorize
from .omtype import VerificationError
from .valuation import cross_value, value_of_phi


@dataclass(frozen=True)
class LocalBasis:
    prime: PrimeIdeal
    numerators: tuple  # g_m, deg g_m = m
    denominators: tuple  # nu_m, exponents of p


def mu(P: PrimeIdeal) -> Fraction:
    """sum_i (e_i f_i ... e_r f_r - 1) h_i / (e_1 ... e_i) over the core levels."""
    om = P.om
    r = P.r
    total = Fraction(0)
    tail = 1
    for i in range(r, 0, -1):
        L = om.level(i)
        tail *= L.e * L.f
        total += (tail - 1) * Fraction(L.h, om.e_prod(i))
    return total


def _frame(P: PrimeIdeal) -> tuple[list[IntPoly], list[int], list[Fraction]]:
    """(phi_0..phi_r, m_0..m_{r+1}, v(phi_i(theta_P))) with phi_0 = x."""
    om = P.om
    r = P.r
    phis = [X] + [om.level(i).phi for i in range(1, r + 1)]
    ms = [1] + [om.level(i).m for i in range(1, r + 1)] + [P.e * P.f]
    # a_0 > 0 only when f_0 > 1, and then psi_0 != y so v(theta_P) = 0
    vals = [Fraction(0)] + [value_of_phi(P, i) for i in range(1, r + 1)]
    return phis, ms, vals


def _digits(m: int, ms: list[int]) -> list[int]:
    out = []
    for i in range(len(ms) - 2, -1, -1):
        a, m = divmod(m, ms[i])
        out.append(a)
    out.reverse()
    return out


def okutsu_local_basis(P: PrimeIdeal) -> LocalBasis:
    """g_m = prod phi_i^{a_i} (mixed-radix digits of m) and nu_m = floor v(g_m(theta_P))."""
    phis, ms, vals = _frame(P)
    n_p = ms[-1]
    nums, dens = [], []
    for m in range(n_p):
        a = _digits(m, ms)
        g = ONE
        v = Fraction(0)
        for phi, ai, vi in zip(phis, a, vals):
            if ai:
                g = pmul(g, ppow(phi, ai))
                v += ai * vi
        nums.append(g)
        dens.append(frac_floor(v))
    if any(len(g) - 1 != m for m, g in enumerate(nums)):
        raise VerificationError("local basis numerators have the wrong degrees")
    if any(a > b for a, b in zip(dens, dens[1:])):
        raise VerificationError("local basis denominators are not monotone")
    return LocalBasis(P, tuple(nums), tuple(dens))


def local_exponent(P: PrimeIdeal) -> int:
    """exp(P) = floor(mu_P), cross-checked against the last local basis denominator."""
    e = frac_floor(mu(P))
    last = okutsu_local_basis(P).denominators[-1]
    if e != last:
        raise VerificationError(f"local exponent {e} differs from nu_(n-1) = {last}")
    return e


def cross_index(P: PrimeIdeal, Q: PrimeIdeal) -> int:
    """v_p(Res(f_P, f_Q)) = f(Q/p) v_Q(phi_P(theta))."""
    x = Q.f * Q.e * cross_value(Q, P, P.r + 1)
    if x.denominator != 1:
        raise VerificationError("non-integral resultant valuation")
    return int(x)


def local_index(field: NumberField, p: int) -> int:
    """v_p of the index (Z_K : Z[theta])."""
    D = list(montes_factorize(field, p))
    total = sum(sum(okutsu_local_basis(P).denominators) for P in D)
    for a in range(len(D)):
        for b in range(a + 1, len(D)):
            total += cross_index(D[a], D[b])
    return total


def p_integral_basis(field: NumberField, p: int) -> list[AlgElem]:
    """n integral elements spanning Z_K (x) Z_(p)."""
    K = field
    if local_index(K, p) == 0:
        return [K.from_poly(ppow(X, k)) for k in range(K.n)]
    D = montes_factorize(K, p)
    out = []
    for P in D:
        ex = local_exponent(P)
        b = multiplier(P, D, {Q: (ex + 1) * Q.e for Q in D if Q != P}, K).b
        LB = okutsu_local_basis(P)
        for g, nu in zip(LB.numerators, LB.denominators):
            out.append(K.mul(b, K.from_poly(prem(g, K.f), Fraction(1, p ** nu))))
    return out


def det_valuation(elements: list[AlgElem], n: int, p: int) -> int:
    """v_p(det) of the coefficient matrix of n elements in the power basis."""
    rows = []
    shift = 0
    for a in elements:
        num, d = a.integer_form()
        shift += val_p(d, p)
        rows.append(list(num) + [0] * (n - len(num)))
    return _int_det_valuation(rows, p) - shift


def _int_det_valuation(rows: list[list[int]], p: int) -> int:
    """v_p(det) for a nonsingular integer matrix by p-adic elimination.

    Entries are kept modulo p^k; each pivot of valuation v costs v digits of
    precision, and k is doubled whenever the remaining precision runs out.
    """
    k = 32
    while True:
        result = _det_valuation_mod(rows, p, k)
        if result is not None:
            return result
        k *= 2


def _det_valuation_mod(rows: list[list[int]], p: int, k: int) -> int | None:
    n = len(rows)
    mod = p ** k
    A = [[c % mod for c in row] for row in rows]
    total = 0
    for col in range(n):
        prec = k - total  # entries are exact modulo p^prec
        pp = p ** prec
        best, bv = None, None
        for r in range(col, n):
            c = A[r][col] % pp
            if c:
                v = _val(c, p)
                if bv is None or v < bv:
                    best, bv = r, v
                    if v == 0:
                        break
        if best is None or total + bv >= k:
            return None
        A[col], A[best] = A[best], A[col]
        total += bv
        pb = p ** bv
        inv = pow(A[col][col] // pb, -1, mod)
        prow = A[col]
        for r in range(col + 1, n):
            row = A[r]
            c = row[col] % pp
            if not c:
                continue
            t = (c // pb) * inv % mod
            for j in range(col, n):
                row[j] = (row[j] - t * prow[j]) % mod
    return total


def _val(c: int, p: int) -> int:
    v = 0
    while c % p == 0:
        c //= p
        v += 1
    return v


def index_from_basis(field: NumberField, p: int) -> int:
    """-v_p(det) of the p-integral basis, i.e. v_p of the index, computed from the basis."""
    return -det_valuation(p_integral_basis(field, p), field.n, p)

