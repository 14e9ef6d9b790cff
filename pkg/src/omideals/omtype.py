"""Types: the level-by-level invariants (phi_i, lambda_i, psi_i, ...) of a
cluster of p-adic factors, with their valuations v_i and residual
polynomials R_i.

Residual twist convention
-------------------------
At level k the cloud of g = sum a_s phi_k^s has points (s, u_s) with
u_s = v_k(a_s) + s v_k(phi_k).  The residual coefficient attached to a point
is ``residue(k, a_s, u_s)``:

* k = 1: the class of a_s / p^{v_1(a_s)} in F_1 (x -> z_0);
* k >= 2: R_{k-1}(a_s)(z_{k-1}) * z_{k-1}^((s'' - l_{k-1} u_s) / e_{k-1}), where
  s'' is the left end of the contact segment of a_s at level k-1.

With this choice lred(g / (Phi_k^s pi_k^u)) = R_k(g)(z_k) and lred(gamma_k) = z_k,
so the CRT construction closes.  Representatives and ``construct`` invert
the same formula, and every representative is checked against its residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Sequence

from . import ffield as ff
from .arith import (ONE, ZERO, IntPoly, deg, min_val, padd, phi_adic, phi_expansion,
                    pmul, ppow, pscale, trim)
from .polygon import intercept_int


class TypeError_(ValueError):
    """Inconsistent type data (twist failure, bad log vector, ...)."""


class VerificationError(RuntimeError):
    """An internal self-check failed; indicates a bug rather than bad input."""


def bezout_pair(h: int, e: int) -> tuple[int, int]:
    """(l, l') with l*h - l'*e = 1 and 0 <= l < e (l = 0, l' = -1 when e = 1)."""
    if e == 1:
        return 0, -1
    l = pow(h, -1, e)
    return l, (l * h - 1) // e


def _pad(v: Sequence[int], n: int) -> tuple:
    return tuple(v) + (0,) * (n - len(v))


def _axpy(a: int, x: Sequence[int], y: Sequence[int]) -> tuple:
    n = max(len(x), len(y))
    x, y = _pad(x, n), _pad(y, n)
    return tuple(a * xi + yi for xi, yi in zip(x, y))


@dataclass(frozen=True, eq=False)
class Level:
    phi: IntPoly
    m: int
    v_phi: int
    h: int
    e: int
    l: int
    lp: int
    psi: tuple
    f: int
    u: int
    s_end: int
    quot: tuple
    log_phi: tuple
    log_pi: tuple
    log_gamma: tuple
    refinements: tuple = ()
    _vcache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def slope(self) -> Fraction:
        return Fraction(-self.h, self.e)


def log_vectors(prev: Level | None, v_phi: int, h: int, e: int) -> tuple[tuple, tuple, tuple]:
    """(log Phi_i, log pi_i, log gamma_i) from the previous level's vectors."""
    if prev is None:
        log_phi, log_pi = (0, 1), (1, 0)
    else:
        i = len(prev.log_phi)  # new vectors have length i + 1
        if v_phi % prev.e:
            raise TypeError_("e_{i-1} does not divide v_i(phi_i)")
        log_pi = _pad(_axpy(prev.l, prev.log_phi, tuple(-prev.lp * c for c in prev.log_pi)), i + 1)
        log_phi = _pad(tuple(-(v_phi // prev.e) * c for c in prev.log_pi), i) + (1,)
    log_gamma = tuple(e * a - h * b for a, b in zip(log_phi, log_pi))
    return log_phi, log_pi, log_gamma


class OMType:
    """A type of order r over the prime p.

    ``fields[k]`` is F_k (k = 0..r+1) and ``zs[k]`` is z_k in F_{k+1}.
    """

    def __init__(self, p: int, psi0: tuple, levels: Sequence[Level] = (),
                 fields: Sequence | None = None, zs: Sequence | None = None):
        self.p = p
        self.psi0 = tuple(psi0)
        self.levels = tuple(levels)
        if fields is None:
            F0 = ff.PrimeField(p)
            F1, z0 = ff.tower_extend(F0, self.psi0)
            fields, zs = [F0, F1], [z0]
            for L in self.levels:
                F, z = ff.tower_extend(fields[-1], L.psi)
                fields.append(F)
                zs.append(z)
        self.fields = tuple(fields)
        self.zs = tuple(zs)

    # -- structure ---------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.levels)

    @property
    def f0(self) -> int:
        return len(self.psi0) - 1

    def level(self, i: int) -> Level:
        return self.levels[i - 1]

    def extend(self, level: Level, check: bool = True) -> "OMType":
        F, z = ff.tower_extend(self.fields[-1], level.psi, check=check)
        return OMType(self.p, self.psi0, self.levels + (level,),
                      self.fields + (F,), self.zs + (z,))

    def truncate(self, i: int) -> "OMType":
        return OMType(self.p, self.psi0, self.levels[:i], self.fields[:i + 2], self.zs[:i + 1])

    def replace_last(self, level: Level) -> "OMType":
        return self.truncate(self.order - 1).extend(level)

    def e_prod(self, i: int) -> int:
        """e_1 ... e_i."""
        return prod(L.e for L in self.levels[:i])

    def f_prod(self, i: int) -> int:
        """f_0 f_1 ... f_i."""
        return self.f0 * prod(L.f for L in self.levels[:i])

    def m(self, i: int) -> int:
        """Degree m_i of phi_i (i = r+1 gives the degree of a representative)."""
        if i <= self.order:
            return self.level(i).m
        return self.f_prod(i - 1) * self.e_prod(i - 1)

    def psi(self, i: int) -> tuple:
        return self.psi0 if i == 0 else self.level(i).psi

    # -- valuations --------------------------------------------------------
    def v(self, i: int, g: IntPoly) -> int:
        """v_i(g) for 1 <= i <= r+1."""
        if not g:
            raise TypeError_("valuation of zero")
        if i == 1:
            return min_val(g, self.p)
        L = self.level(i - 1)
        cache = L._vcache
        hit = cache.get(g)
        if hit is None:
            hit = self._contact(i - 1, g, None)[0]
            cache[g] = hit
        return hit

    def cloud(self, i: int, g: IntPoly, count: int | None = None):
        """Level-i points [(s, u_s, a_s)] of g, zero coefficients omitted."""
        L = self.level(i)
        coeffs = phi_adic(g, L.phi) if count is None else phi_expansion(g, L.phi, count)[0]
        out = []
        for s, a in enumerate(coeffs):
            if a:
                out.append((s, self.v(i, a) + s * L.v_phi, a))
        return out

    def _contact(self, i: int, g: IntPoly, count: int | None):
        """(W, contact) with W = v_{i+1}(g) and contact the cloud points on the
        line of slope lambda_i, sorted by abscissa."""
        L = self.level(i)
        pts = self.cloud(i, g, count)
        W, touch = intercept_int([(s, u) for s, u, _ in pts], L.h, L.e)
        by_s = {s: (s, u, a) for s, u, a in pts}
        return W, [by_s[s] for s, _ in touch]

    # -- residues ----------------------------------------------------------
    def residue(self, k: int, a: IntPoly, U: int):
        """Residual coefficient in F_k of a level-k coefficient a at ordinate U."""
        if k == 1:
            v = min_val(a, self.p)
            b = tuple(c // self.p ** v for c in a) if v else a
            return ff.reduce_to_f1(self.fields[1], self.psi0, b)
        L = self.level(k - 1)
        R, s_left, _, _ = self.residual_data(k - 1, a)
        Fk, Fj = self.fields[k], self.fields[k - 1]
        z = self.zs[k - 1]
        val = ff.poly_eval_in(Fk, Fj, R, z)
        num = s_left - L.l * U
        if num % L.e:
            raise TypeError_("twist exponent is not integral")
        return Fk.mul(val, Fk.pow(z, num // L.e))

    def residual_data(self, i: int, g: IntPoly, count: int | None = None):
        """(R_i(g), s_left, u_left, W) with W = v_{i+1}(g); i >= 1."""
        L = self.level(i)
        W, contact = self._contact(i, g, count)
        s0, u0, _ = contact[0]
        s1 = contact[-1][0]
        Fi = self.fields[i]
        coeffs = [Fi.zero] * ((s1 - s0) // L.e + 1)
        for s, u, a in contact:
            coeffs[(s - s0) // L.e] = self.residue(i, a, u)
        return tuple(coeffs), s0, u0, W

    def residual(self, i: int, g: IntPoly, count: int | None = None) -> tuple:
        """R_i(g) over F_i (R_0 is the reduction of g / p^{v_1(g)})."""
        if i == 0:
            v = min_val(g, self.p)
            F0 = self.fields[0]
            return ff.reduce_int_poly(F0, tuple(c // self.p ** v for c in g))
        return self.residual_data(i, g, count)[0]

    def divides(self, g: IntPoly, i: int | None = None) -> bool:
        """Whether Trunc_i(t) divides g (default i = order)."""
        i = self.order if i is None else i
        R = self.residual(i, g)
        return ff.poly_divides(self.fields[i], self.psi(i), R)

    def ord_psi(self, i: int, R: tuple) -> int:
        F = self.fields[i]
        psi = self.psi(i)
        k = 0
        while R:
            q, r = ff.poly_divmod(F, R, psi)
            if r:
                break
            R, k = q, k + 1
        return k

    # -- constructions -----------------------------------------------------
    def lift_residue(self, k: int, c, U: int, W: int) -> IntPoly:
        """a with deg a < m_k, v_k(a) = W and residue(k, a, U) = c (c != 0)."""
        if k == 1:
            if W < 0:
                raise TypeError_("negative p-power in residue lift")
            return pscale(ff.lift_to_int(self.fields[1], c), self.p ** W)
        j = k - 1
        L = self.level(j)
        s_min = (L.l * W) % L.e
        num = L.l * U - s_min
        if num % L.e:
            raise TypeError_("twist exponent is not integral")
        Fk = self.fields[k]
        target = Fk.mul(c, Fk.pow(self.zs[j], num // L.e))
        return self.construct(j, W, self.coordinates(j, target))

    def coordinates(self, j: int, x) -> tuple:
        """Coordinates of x in F_{j+1} over F_j."""
        if self.fields[j + 1] is self.fields[j]:
            return (x,)
        return tuple(x)

    def construct(self, i: int, W: int, Phi: Sequence) -> IntPoly:
        """Polynomial P, deg P < m_{i+1}, v_{i+1}(P) = W, whose level-i residual
        coefficients at s = s_min + t e_i are Phi[t], s_min = l_i W mod e_i."""
        L = self.level(i)
        Fi = self.fields[i]
        s_min = (L.l * W) % L.e
        P = ZERO
        for t, c in enumerate(Phi):
            if Fi.is_zero(c):
                continue
            s = s_min + t * L.e
            num = W - s * L.h
            if num % L.e:
                raise TypeError_("lattice point is not integral")
            u = num // L.e
            a = self.lift_residue(i, c, u, u - s * L.v_phi)
            P = padd(P, pmul(a, ppow(L.phi, s)))
        return P

    def representative(self) -> IntPoly:
        """A monic phi_{r+1} of degree e_r f_r m_r with R_r(phi_{r+1}) ~ psi_r."""
        if self.order == 0:
            return trim(self.psi0)
        r = self.order
        L = self.level(r)
        e, f = L.e, L.f
        Fr = self.fields[r]
        kappa = self.residue(r, ONE, e * f * L.v_phi)
        phi = ppow(L.phi, e * f)
        for k in range(f):
            c = L.psi[k]
            if Fr.is_zero(c):
                continue
            W_k = (f - k) * (e * L.v_phi + L.h)
            U_k = W_k + k * e * L.v_phi
            A = self.lift_residue(r, Fr.mul(kappa, c), U_k, W_k)
            phi = padd(phi, pmul(A, ppow(L.phi, k * e)))
        if deg(phi) != e * f * L.m or phi[-1] != 1:
            raise VerificationError("representative has the wrong degree")
        R = self.residual(r, phi)
        if ff.poly_monic(Fr, R) != L.psi:
            raise VerificationError("representative does not reproduce psi_r")
        return phi

    # -- log vectors -------------------------------------------------------
    def gamma_decompose(self, vector: Sequence[int], s: int) -> list[int]:
        """Exponents t_1..t_s with p^{n_0} phi_1^{n_1} ... phi_s^{n_s} = prod gamma_i^{t_i}."""
        vec = list(_pad(vector, s + 1))
        if len(vec) != s + 1:
            raise TypeError_("log vector longer than the requested level")
        t = [0] * s
        for i in range(s, 0, -1):
            L = self.level(i)
            if vec[i] % L.e:
                raise TypeError_("valuation not zero / inconsistent log vector")
            ti = vec[i] // L.e
            t[i - 1] = ti
            for k, c in enumerate(L.log_gamma):
                vec[k] -= ti * c
        if any(vec):
            raise TypeError_("valuation not zero / inconsistent log vector")
        return t

    # -- serialization -----------------------------------------------------
    def key(self) -> tuple:
        """Canonical comparison key (deterministic across runs)."""
        F0 = self.fields[0]
        parts = [tuple(ff.poly_flatten(F0, self.psi0))]
        for i, L in enumerate(self.levels, start=1):
            parts.append((L.phi, L.h, L.e, tuple(ff.poly_flatten(self.fields[i], L.psi))))
        return tuple(parts)

    def to_json(self) -> dict:
        out = {"p": str(self.p), "psi0": [str(c) for c in self.psi0], "levels": []}
        for i, L in enumerate(self.levels, start=1):
            out["levels"].append({
                "phi": [str(c) for c in L.phi],
                "m": L.m,
                "v_phi": L.v_phi,
                "slope": f"-{L.h}/{L.e}",
                "psi": ff.poly_to_json(self.fields[i], L.psi),
                "f": L.f,
                "u": L.u,
                "s_end": L.s_end,
                "log_phi": list(L.log_phi),
                "log_pi": list(L.log_pi),
                "log_gamma": list(L.log_gamma),
                "refinements": [{"phi": [str(c) for c in ph], "slope": str(lam)}
                                for ph, lam in L.refinements],
            })
        return out


def make_level(t: OMType, phi: IntPoly, v_phi: int, h: int, e: int, psi: tuple,
               u: int = 0, s_end: int = 0, quot: tuple = (ONE,), refinements: tuple = ()) -> Level:
    """Level i = t.order + 1 on top of t, computing l, l' and log vectors."""
    g = gcd(h, e)
    if g != 1:
        raise TypeError_("slope must be in lowest terms")
    l, lp = bezout_pair(h, e)
    prev = t.levels[-1] if t.levels else None
    log_phi, log_pi, log_gamma = log_vectors(prev, v_phi, h, e)
    return Level(phi=phi, m=deg(phi), v_phi=v_phi, h=h, e=e, l=l, lp=lp, psi=tuple(psi),
                 f=len(psi) - 1, u=u, s_end=s_end, quot=tuple(quot), log_phi=log_phi,
                 log_pi=log_pi, log_gamma=log_gamma, refinements=tuple(refinements))


def index_of_coincidence(tp: OMType, tq: OMType) -> int:
    """0 if psi_0 differ, else the least level j where (phi_j, lambda_j, psi_j) differ."""
    if tp.p != tq.p:
        raise TypeError_("types over different primes")
    if tp.psi0 != tq.psi0:
        return 0
    for j in range(1, min(tp.order, tq.order) + 1):
        a, b = tp.level(j), tq.level(j)
        if a.phi != b.phi or a.h != b.h or a.e != b.e or a.psi != b.psi:
            return j
    return min(tp.order, tq.order) + 1


def gc_phi(tp: OMType, tq: OMType) -> tuple[IntPoly, Fraction, Fraction]:
    """Greatest common phi-polynomial at the index of coincidence, with the hidden slopes."""
    j = index_of_coincidence(tp, tq)
    if j == 0:
        raise TypeError_("types do not share a first level")
    a, b = tp.level(j), tq.level(j)
    ref_p = list(a.refinements) + [(a.phi, a.slope)]
    ref_q = list(b.refinements) + [(b.phi, b.slope)]
    k = -1
    for (fp, _), (fq, _) in zip(ref_p, ref_q):
        if fp != fq:
            break
        k += 1
    if k < 0:
        raise TypeError_("refinement lists share no phi-polynomial")
    return ref_p[k][0], ref_p[k][1], ref_q[k][1]
