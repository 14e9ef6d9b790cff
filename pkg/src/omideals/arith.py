"""Exact integer, rational and integer-polynomial arithmetic.

Integer polynomials are tuples of Python ints, lowest degree first, with no
trailing zeros; the zero polynomial is the empty tuple.  Rationals are
``fractions.Fraction``.  Elements of a number field K = Q[x]/(f) are
:class:`AlgElem` values ``scalar * g(theta)`` with ``g`` primitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import isprime
from sympy.ntheory import pollard_pm1, pollard_rho

from . import _kernels

IntPoly = tuple  # tuple[int, ...]

ZERO: IntPoly = ()
ONE: IntPoly = (1,)
X: IntPoly = (0, 1)


class ArithError(ValueError):
    """Raised on invalid arithmetic input (zero valuation, non-monic divisor...)."""


class FactorizationError(RuntimeError):
    """An integer could not be factored within the configured effort."""


# ---------------------------------------------------------------------------
# integers and rationals
# ---------------------------------------------------------------------------

def val_p(q, p: int) -> int:
    """Exact exponent of the prime p in the nonzero rational q."""
    q = Fraction(q)
    if q == 0:
        raise ArithError("valuation of zero")
    return _val_int(q.numerator, p) - _val_int(q.denominator, p)


def _val_int(n: int, p: int) -> int:
    n = abs(n)
    if n % p:
        return 0
    # strip large powers first, then finish one step at a time
    v = 0
    pk, k = p, 1
    while n % pk == 0:
        n //= pk
        v += k
        pk, k = pk * pk, k * 2
    while n % p == 0:
        n //= p
        v += 1
    return v


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def frac_ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def frac_floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def factor_integer(n: int, rho_steps: int = 200_000, rho_retries: int = 8) -> dict[int, int]:
    """Factor |n| by trial division and Pollard rho / p-1 with a hard effort bound.

    Raises FactorizationError instead of running unboundedly on hard composites.
    """
    n = abs(int(n))
    if n == 0:
        raise ArithError("cannot factor zero")
    out: dict[int, int] = {}
    for q in _small_primes():
        if q * q > n:
            break
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if isprime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        d = pollard_rho(m, retries=rho_retries, max_steps=rho_steps)
        if d is None:
            d = pollard_pm1(m, B=100_000, retries=4)
        if d is None or d in (1, m):
            raise FactorizationError(f"norm not factorable: {m}")
        stack.extend((d, m // d))
    return dict(sorted(out.items()))


@lru_cache(maxsize=1)
def _small_primes(bound: int = 1 << 16) -> tuple:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, bound + 1, i)))
    return tuple(i for i in range(bound + 1) if sieve[i])


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------

def trim(coeffs: Iterable[int]) -> IntPoly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def deg(a: IntPoly) -> int:
    """Degree, with -1 as the sentinel for the zero polynomial."""
    return len(a) - 1


def padd(a: IntPoly, b: IntPoly) -> IntPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def psub(a: IntPoly, b: IntPoly) -> IntPoly:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return trim(out)


def pneg(a: IntPoly) -> IntPoly:
    return tuple(-c for c in a)


def pscale(a: IntPoly, c: int) -> IntPoly:
    if c == 0:
        return ZERO
    return tuple(c * x for x in a)


def pshift(a: IntPoly, k: int) -> IntPoly:
    return (0,) * k + a if a else ZERO


def _pack(coeffs, nbytes: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(nbytes, "little") for c in coeffs), "little")


def _unpack(x: int, nbytes: int, n: int) -> list[int]:
    raw = x.to_bytes(nbytes * n, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(n)]


def _kronecker_mul(a: IntPoly, b: IntPoly) -> IntPoly:
    # split signs so that packed integers are non-negative
    bits = max(abs(c).bit_length() for c in a) + max(abs(c).bit_length() for c in b)
    bits += min(len(a), len(b)).bit_length() + 2
    nbytes = (bits + 7) // 8
    ap = _pack([c if c > 0 else 0 for c in a], nbytes)
    an = _pack([-c if c < 0 else 0 for c in a], nbytes)
    bp = _pack([c if c > 0 else 0 for c in b], nbytes)
    bn = _pack([-c if c < 0 else 0 for c in b], nbytes)
    n = len(a) + len(b) - 1
    pos = _unpack(ap * bp + an * bn, nbytes, n + 1)
    neg = _unpack(ap * bn + an * bp, nbytes, n + 1)
    return trim(x - y for x, y in zip(pos[:n], neg[:n]))


def pmul(a: IntPoly, b: IntPoly) -> IntPoly:
    if not a or not b:
        return ZERO
    if len(a) == 1:
        return pscale(b, a[0])
    if len(b) == 1:
        return pscale(a, b[0])
    if min(len(a), len(b)) > 24:
        return _kronecker_mul(a, b)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def ppow(a: IntPoly, e: int) -> IntPoly:
    result, base = ONE, a
    while e:
        if e & 1:
            result = pmul(result, base)
        e >>= 1
        if e:
            base = pmul(base, base)
    return result


def pdivmod(a: IntPoly, m: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Division by a monic polynomial; exploits sparsity of the divisor."""
    if not m or m[-1] != 1:
        raise ArithError("divisor must be monic")
    dm = len(m) - 1
    if len(a) <= dm:
        return ZERO, a
    if dm == 0:
        return a, ZERO
    terms = [(j, c) for j, c in enumerate(m[:-1]) if c]
    r = list(a)
    q = [0] * (len(a) - dm)
    for k in range(len(a) - 1, dm - 1, -1):
        c = r[k]
        if c:
            base = k - dm
            q[base] = c
            for j, mj in terms:
                r[base + j] -= c * mj
    return trim(q), trim(r[:dm])


def prem(a: IntPoly, m: IntPoly) -> IntPoly:
    return pdivmod(a, m)[1]


def pderiv(a: IntPoly) -> IntPoly:
    return trim(i * c for i, c in enumerate(a) if i)


def peval(a: IntPoly, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def content(a: IntPoly) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def primitive(a: IntPoly) -> tuple[int, IntPoly]:
    c = content(a)
    if c in (0, 1):
        return c, a
    return c, tuple(x // c for x in a)


def min_val(a: IntPoly, p: int) -> int:
    """v_1: minimum p-adic valuation of the coefficients of a nonzero polynomial."""
    best = None
    for c in a:
        if c:
            v = _val_int(c, p)
            if v == 0:
                return 0
            if best is None or v < best:
                best = v
    if best is None:
        raise ArithError("valuation of zero")
    return best


def phi_expansion(g: IntPoly, phi: IntPoly, count: int) -> tuple[list[IntPoly], list[IntPoly]]:
    """First ``count`` phi-adic coefficients a_0.. of g and quotients q_1..q_count.

    g = a_0 + a_1 phi + ... + a_{count-1} phi^{count-1} + q_count phi^count.
    """
    if count < 1:
        raise ArithError("count must be positive")
    if not phi or phi[-1] != 1 or len(phi) < 2:
        raise ArithError("phi must be monic of positive degree")
    coeffs, quots = [], []
    q = g
    for _ in range(count):
        if not q:
            coeffs.append(ZERO)
            quots.append(ZERO)
            continue
        q, a = _cached_divmod(q, phi)
        coeffs.append(a)
        quots.append(q)
    return coeffs, quots


def phi_adic(g: IntPoly, phi: IntPoly) -> list[IntPoly]:
    """All phi-adic coefficients of g."""
    if phi == X:
        return [(c,) if c else ZERO for c in g]
    out = []
    q = g
    while q:
        q, a = _cached_divmod(q, phi)
        out.append(a)
    return out


@lru_cache(maxsize=8192)
def _cached_divmod(a: IntPoly, m: IntPoly) -> tuple[IntPoly, IntPoly]:
    if m == X:
        return a[1:], (a[0],) if a and a[0] else ZERO
    return pdivmod(a, m)


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Res(f, g) with the Sylvester convention, so Res(f, g) = prod g(alpha) for monic f."""
    f, g = trim(f), trim(g)
    if not f and not g:
        raise ArithError("resultant of two zero polynomials")
    if not f or not g:
        return 0
    res = _resultant_q([Fraction(c) for c in f], [Fraction(c) for c in g])
    if res.denominator != 1:
        raise AssertionError("non-integral resultant")
    return res.numerator


def _qtrim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _qrem(a: list, b: list) -> list:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            c = c / lead
            for j in range(db):
                a[k - db + j] -= c * b[j]
            a[k] = 0
    return _qtrim(a[:db])


def _resultant_q(a: list, b: list) -> Fraction:
    # Res(A, B) = lc(A)^{deg B} prod_{A(alpha)=0} B(alpha)
    sign = 1
    acc = Fraction(1)
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return sign * acc * b[0] ** da
        if da == 0:
            return sign * acc * a[0] ** db
        if db >= da:
            r = _qrem(b, a)
            if not r:
                return Fraction(0)
            acc *= a[-1] ** (db - (len(r) - 1))
            b = r
            continue
        # swap: Res(A, B) = (-1)^{da db} Res(B, A)
        if da * db % 2:
            sign = -sign
        a, b = b, a


def sylvester_resultant(f: IntPoly, g: IntPoly) -> int:
    """Determinant of the Sylvester matrix (independent check of :func:`resultant`)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    if size == 0:
        return 1
    rows = []
    for i in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    return bareiss_det(rows)


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1


def is_squarefree_over_q(f: IntPoly) -> bool:
    """gcd(f, f') = 1 over Q, decided by reductions modulo word primes when possible."""
    df = pderiv(f)
    if not df:
        return len(f) <= 1
    for q in (2147483647, 2147483629, 2147483587, 1000000007, 998244353):
        if f[-1] % q == 0:
            continue
        fa = _kernels.as_array([c % q for c in f])
        da = _kernels.as_array([c % q for c in df])
        if len(_kernels._strip(da)) == 0:
            continue
        if len(_kernels.gcd(fa, da, q)) == 1:
            return True
    return resultant(f, df) != 0


# ---------------------------------------------------------------------------
# number field elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgElem:
    """alpha = scalar * g(theta) with g primitive of degree < n (content 1) and
    positive leading coefficient; the sign lives in the scalar."""

    num: IntPoly
    scalar: Fraction

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def den(self) -> int:
        return self.scalar.denominator

    def coefficients(self) -> list[Fraction]:
        return [self.scalar * c for c in self.num]

    def integer_form(self) -> tuple[IntPoly, int]:
        """(N, d) with alpha = N(theta)/d, N integral and d > 0 minimal."""
        s = self.scalar
        return pscale(self.num, s.numerator), s.denominator


def make_elem(g: Iterable[int], scalar=1) -> AlgElem:
    """Normalize scalar * g into the unique primitive form (g already reduced mod f)."""
    g = trim(int(c) for c in g)
    scalar = Fraction(scalar)
    if not g or scalar == 0:
        return AlgElem(ZERO, Fraction(0))
    c, g = primitive(g)
    if g[-1] < 0:
        c, g = -c, pneg(g)
    return AlgElem(g, scalar * c)


class NumberField:
    """K = Q[x]/(f) for a monic squarefree integer polynomial f."""

    def __init__(self, coeffs: Iterable[int], label: str | None = None, check: bool = True):
        f = trim(int(c) for c in coeffs)
        if len(f) < 2:
            raise ArithError("defining polynomial must have degree >= 1")
        if f[-1] != 1:
            raise ArithError("defining polynomial must be monic")
        if check and not is_squarefree_over_q(f):
            raise ArithError("defining polynomial is not squarefree")
        self.f: IntPoly = f
        self.n = len(f) - 1
        self.label = label
        self._decompositions: dict = {}

    def __repr__(self) -> str:
        return f"NumberField(deg={self.n}, label={self.label!r})"

    # construction
    def elem(self, num: Iterable, den=1) -> AlgElem:
        num = list(num)
        if any(isinstance(c, Fraction) and c.denominator != 1 for c in num):
            common = math.lcm(*(Fraction(c).denominator for c in num))
            num = [int(Fraction(c) * common) for c in num]
            den = Fraction(den) * common
        g = prem(trim(int(c) for c in num), self.f)
        return make_elem(g, Fraction(1) / Fraction(den))

    def from_int(self, a) -> AlgElem:
        return make_elem((1,), a) if a else make_elem(ZERO)

    def theta(self) -> AlgElem:
        if self.n == 1:
            return make_elem((-self.f[0],))
        return make_elem(X)

    def from_poly(self, g: IntPoly, scalar=1) -> AlgElem:
        return make_elem(prem(g, self.f), scalar)

    # ring operations
    def add(self, a: AlgElem, b: AlgElem) -> AlgElem:
        if a.is_zero:
            return b
        if b.is_zero:
            return a
        s, t = a.scalar, b.scalar
        d = math.lcm(s.denominator, t.denominator)
        ga = pscale(a.num, s.numerator * (d // s.denominator))
        gb = pscale(b.num, t.numerator * (d // t.denominator))
        return make_elem(padd(ga, gb), Fraction(1, d))

    def neg(self, a: AlgElem) -> AlgElem:
        return AlgElem(a.num, -a.scalar)

    def sub(self, a: AlgElem, b: AlgElem) -> AlgElem:
        return self.add(a, self.neg(b))

    def mul(self, a: AlgElem, b: AlgElem) -> AlgElem:
        if a.is_zero or b.is_zero:
            return make_elem(ZERO)
        return make_elem(prem(pmul(a.num, b.num), self.f), a.scalar * b.scalar)

    def scale(self, a: AlgElem, c) -> AlgElem:
        c = Fraction(c)
        if c == 0 or a.is_zero:
            return make_elem(ZERO)
        return AlgElem(a.num, a.scalar * c)

    def pow(self, a: AlgElem, e: int) -> AlgElem:
        if e < 0:
            raise ArithError("negative powers require inversion in K")
        result, base = self.from_int(1), a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def eval_poly(self, g: IntPoly, scalar=1) -> AlgElem:
        """g(theta) * scalar for an arbitrary integer polynomial g."""
        return make_elem(prem(g, self.f), scalar)

    def product_of_powers(self, factors: Sequence[tuple[IntPoly, int]]) -> IntPoly:
        """prod g_i(theta)^{k_i} as a polynomial reduced mod f, without content removal."""
        acc = ONE
        for g, k in factors:
            base = prem(g, self.f)
            e = k
            while e:
                if e & 1:
                    acc = prem(pmul(acc, base), self.f)
                e >>= 1
                if e:
                    base = prem(pmul(base, base), self.f)
        return acc


def shrink(alpha: AlgElem, depth: dict[int, int]) -> AlgElem:
    """An element congruent to alpha modulo prod p^depth[p] Z[theta].

    Writes alpha = N(theta)/d and reduces N symmetrically modulo
    prod p^(v_p(d) + depth[p]).  alpha is returned unchanged when d has a
    prime factor outside ``depth`` or some modulus exponent is not positive.
    """
    if alpha.is_zero or not depth:
        return alpha
    num, d = alpha.integer_form()
    rest = d
    M = 1
    for p, k in depth.items():
        v = _val_int(rest, p)
        rest //= p ** v
        if v + k < 1:
            return alpha
        M *= p ** (v + k)
    if rest != 1:
        return alpha
    half = M // 2
    return make_elem(((c + half) % M - half for c in num), Fraction(1, d))
