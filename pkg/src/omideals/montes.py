"""Montes algorithm: the f-complete optimal types over p, one per prime ideal,
each closed by a terminal (r+1)-level carrying a Montes approximation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction

from sympy import isprime

from . import ffield as ff
from .arith import ONE, ArithError, IntPoly, NumberField, padd, phi_expansion
from .omtype import OMType, VerificationError, make_level
from .polygon import lower_envelope, principal_part

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PrimeIdeal:
    """OM representation [p; phi_1, ..., phi_r, phi_P] of a prime ideal."""

    p: int
    f_poly: IntPoly
    om: OMType  # order r + 1; the last level is the terminal one
    label: str = ""

    @property
    def r(self) -> int:
        return self.om.order - 1

    @property
    def core(self) -> OMType:
        """The f-complete optimal type of order r (terminal level dropped)."""
        return self.om.truncate(self.r)

    @property
    def terminal(self):
        return self.om.levels[-1]

    @property
    def phi_p(self) -> IntPoly:
        return self.terminal.phi

    @property
    def h(self) -> int:
        return self.terminal.h

    @property
    def e(self) -> int:
        return self.om.e_prod(self.r)

    @property
    def f(self) -> int:
        return self.om.f_prod(self.r)

    @property
    def residue_field(self):
        return self.om.fields[-1]

    @property
    def depth(self) -> int:
        return okutsu_frame(self)[1]

    def same_prime(self, other: "PrimeIdeal") -> bool:
        return self.p == other.p and self.f_poly == other.f_poly and self.label == other.label

    def __hash__(self) -> int:
        return hash((self.p, self.label, self.f_poly))

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeIdeal) and self.same_prime(other)

    def __repr__(self) -> str:
        return f"PrimeIdeal(p={self.p}, {self.label}, e={self.e}, f={self.f})"


@dataclass(frozen=True)
class Decomposition:
    p: int
    primes: tuple

    def __iter__(self):
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def by_label(self, label: str) -> PrimeIdeal:
        for P in self.primes:
            if P.label == label:
                return P
        raise KeyError(label)


@dataclass
class _Item:
    t: OMType  # type of order i - 1
    phi: IntPoly  # phi_i, a representative of t
    omega: int
    refs: tuple
    bound: Fraction | None


def _safe_phi(t: OMType, f: IntPoly, phi: IntPoly) -> IntPoly:
    """phi itself, or phi + p^K when phi divides f exactly (a_0 = 0).

    K is chosen with v_i(p^K) > v_i(phi), so phi + p^K is still a
    representative of t with the same residual data.
    """
    coeffs, _ = phi_expansion(f, phi, 1)
    if coeffs[0]:
        return phi
    i = t.order + 1
    v_phi = t.v(i, phi)
    K = v_phi // t.e_prod(i - 1) + 1
    log.debug("phi divides f exactly; perturbing by p^%d", K)
    return padd(phi, (t.p ** K,))


def attach_terminal(t: OMType, f: IntPoly, phi: IntPoly) -> OMType:
    """Close the f-complete type t with the level built from the representative phi."""
    phi = _safe_phi(t, f, phi)
    i = t.order + 1
    v_phi = t.v(i, phi)
    (a0, a1), _ = phi_expansion(f, phi, 2)
    u0 = t.v(i, a0)
    u1 = t.v(i, a1) + v_phi
    h = u0 - u1
    if h <= 0:
        raise VerificationError("terminal polygon has no negative slope")
    F = t.fields[-1]
    stub = t.extend(make_level(t, phi, v_phi, h, 1, (F.zero, F.one)), check=False)
    c0 = stub.residue(i, a0, u0)
    c1 = stub.residue(i, a1, u1)
    ratio = F.mul(c0, F.inv(c1))
    level = make_level(t, phi, v_phi, h, 1, (ratio, F.one), u=u1 - v_phi, s_end=1, quot=(ONE,))
    return t.extend(level)


def _process(item: _Item, f: IntPoly, complete: list, stack: list) -> None:
    t, omega = item.t, item.omega
    phi = _safe_phi(t, f, item.phi)
    i = t.order + 1
    v_phi = t.v(i, phi)
    coeffs, quots = phi_expansion(f, phi, omega + 1)
    pts = [(s, t.v(i, a) + s * v_phi) for s, a in enumerate(coeffs) if a]
    sides = principal_part(lower_envelope(pts))
    if sum(S.length for S in sides) != omega:
        raise VerificationError("principal polygon length differs from the residual order")
    if item.bound is not None and any(S.slope >= item.bound for S in sides):
        raise VerificationError("refinement produced a slope that is not steeper")
    F = t.fields[-1]
    branches = []
    for S in sides:
        stub = t.extend(make_level(t, phi, v_phi, S.h, S.e, (F.zero, F.one)), check=False)
        R = stub.residual(i, f, count=omega + 1)
        if len(R) - 1 != S.degree:
            raise VerificationError("residual degree differs from side degree")
        u_end = t.v(i, coeffs[S.s1])
        quot = (ONE,) + tuple(quots[S.s1 - j - 1] for j in range(1, S.e))
        for psi, mult in ff.ff_factor(F, R):
            branches.append((S, psi, mult, u_end, quot))
    for S, psi, mult, u_end, quot in branches:
        level = make_level(t, phi, v_phi, S.h, S.e, psi, u=u_end, s_end=S.s1,
                           quot=quot, refinements=item.refs)
        t2 = t.extend(level)
        if mult == 1:
            complete.append(t2)
            continue
        new_phi = t2.representative()
        if S.e * level.f > 1:
            stack.append(_Item(t2, new_phi, mult, (), None))
        else:
            refs = item.refs + ((phi, S.slope),) if len(branches) > 1 else item.refs
            stack.append(_Item(t, new_phi, mult, refs, S.slope))


def montes_factorize(field: NumberField, p: int) -> Decomposition:
    """Prime ideal decomposition of p in field (cached on the field)."""
    cached = field._decompositions.get(p)
    if cached is not None:
        return cached
    if not isprime(p):
        raise ArithError(f"{p} is not prime")
    f = field.f
    F0 = ff.PrimeField(p)
    complete: list[OMType] = []
    stack: list[_Item] = []
    for psi0, mult in ff.ff_factor(F0, ff.reduce_int_poly(F0, f)):
        t0 = OMType(p, psi0)
        if mult == 1:
            complete.append(t0)
        else:
            stack.append(_Item(t0, t0.representative(), mult, (), None))
    while stack:
        _process(stack.pop(), f, complete, stack)
    closed = [attach_terminal(t, f, t.representative()) for t in complete]
    primes = [PrimeIdeal(p, f, om) for om in closed]
    primes.sort(key=lambda P: (P.f, P.e, P.core.key()))
    primes = tuple(replace(P, label=f"p{k}") for k, P in enumerate(primes, start=1))
    if sum(P.e * P.f for P in primes) != field.n:
        raise VerificationError("fundamental identity sum e*f = n fails")
    dec = Decomposition(p, primes)
    field._decompositions[p] = dec
    return dec


def improve_approximation(P: PrimeIdeal, target_h: int) -> PrimeIdeal:
    """Refinement steps at level r+1 until h_{r+1} >= target_h (P is untouched)."""
    om = P.om
    core = P.core
    while om.levels[-1].h < target_h:
        h_old = om.levels[-1].h
        om = attach_terminal(core, P.f_poly, om.representative())
        if om.levels[-1].h <= h_old:
            raise VerificationError("refinement step did not increase the terminal slope")
    if om is P.om:
        return P
    return replace(P, om=om)


def okutsu_frame(P: PrimeIdeal) -> tuple[list[IntPoly], int]:
    r = P.r
    if r == 0:
        return [], 0
    last = P.om.level(r)
    depth = r if last.e * last.f > 1 else r - 1
    return [P.om.level(i).phi for i in range(1, depth + 1)], depth
