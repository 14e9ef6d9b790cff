"""Finite-field towers F_0 = GF(p) < F_1 < ... and polynomials over them.

A field object is either :class:`PrimeField` (elements are ints in [0, p))
or :class:`ExtField` = base[y]/(modulus) (elements are tuples of base
elements of length ``d``, coordinates in the basis 1, z, ..., z^{d-1}).
Extending by a linear polynomial does not create a new object: the root
already lives in the base.

Polynomials over a field are tuples of field elements, lowest degree first,
without trailing zeros.  All polynomial routines take the field as their
first argument.
"""

from __future__ import annotations

import random
from typing import Sequence

from . import _kernels
from .arith import IntPoly, trim

FACTOR_SEED = 0x0D1CE


class FieldError(ValueError):
    pass


class PrimeField:
    """GF(p)."""

    depth = 0
    degree = 1
    base = None

    def __init__(self, p: int):
        self.p = p
        self.q = p
        self.zero = 0
        self.one = 1
        self._word = p < _kernels.WORD_PRIME_LIMIT

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(p)")
        return pow(a, -1, self.p)

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        return pow(a, e, self.p)

    def from_int(self, n: int):
        return n % self.p

    def is_zero(self, a) -> bool:
        return a == 0

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def flatten(self, a) -> list[int]:
        return [a]

    def to_json(self, a):
        return a

    def pth_root(self, a):
        return a

    def chain(self) -> list:
        return [self]


class ExtField:
    """base[y]/(modulus) for a monic irreducible modulus of degree d >= 2."""

    def __init__(self, base, modulus: Sequence):
        self.base = base
        self.modulus = tuple(modulus)
        self.d = len(self.modulus) - 1
        self.p = base.p
        self.q = base.q ** self.d
        self.degree = base.degree * self.d
        self.depth = base.depth + 1
        bz, bo = base.zero, base.one
        self.zero = (bz,) * self.d
        self.one = (bo,) + (bz,) * (self.d - 1)
        self.gen = (bz, bo) + (bz,) * (self.d - 2)
        self._prime_base = isinstance(base, PrimeField)
        self._mod_body = self.modulus[:-1]

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.degree})"

    def _reduce(self, c: list):
        # c: list of base elements, length <= 2d-1
        b, d, body = self.base, self.d, self._mod_body
        if self._prime_base:
            p = self.p
            for k in range(len(c) - 1, d - 1, -1):
                t = c[k] % p
                if t:
                    for j in range(d):
                        c[k - d + j] -= t * body[j]
            return tuple(x % p for x in c[:d]) + (0,) * max(0, d - len(c))
        for k in range(len(c) - 1, d - 1, -1):
            t = c[k]
            if not b.is_zero(t):
                for j in range(d):
                    c[k - d + j] = b.sub(c[k - d + j], b.mul(t, body[j]))
        out = c[:d]
        return tuple(out) + (b.zero,) * (d - len(out))

    def add(self, a, b):
        if self._prime_base:
            p = self.p
            return tuple((x + y) % p for x, y in zip(a, b))
        f = self.base
        return tuple(f.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        if self._prime_base:
            p = self.p
            return tuple((x - y) % p for x, y in zip(a, b))
        f = self.base
        return tuple(f.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        if self._prime_base:
            p = self.p
            return tuple(-x % p for x in a)
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        d = self.d
        if self._prime_base:
            c = [0] * (2 * d - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        c[i + j] += x * y
            return self._reduce(c)
        f = self.base
        c = [f.zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if not f.is_zero(x):
                for j, y in enumerate(b):
                    if not f.is_zero(y):
                        c[i + j] = f.add(c[i + j], f.mul(x, y))
        return self._reduce(c)

    def scalar_mul(self, s, a):
        """Multiply by an element of the base field."""
        f = self.base
        return tuple(f.mul(s, x) for x in a)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in finite field")
        g, u = poly_xgcd_inv(self.base, poly_trim(self.base, a), self.modulus)
        return tuple(u) + (self.base.zero,) * (self.d - len(u))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def from_int(self, n: int):
        return (self.base.from_int(n),) + (self.base.zero,) * (self.d - 1)

    def is_zero(self, a) -> bool:
        return a == self.zero

    def random(self, rng: random.Random):
        return tuple(self.base.random(rng) for _ in range(self.d))

    def flatten(self, a) -> list[int]:
        out: list[int] = []
        for x in a:
            out.extend(self.base.flatten(x))
        return out

    def to_json(self, a):
        return [self.base.to_json(x) for x in a]

    def pth_root(self, a):
        return self.pow(a, self.q // self.p)

    def chain(self) -> list:
        return self.base.chain() + [self]


# ---------------------------------------------------------------------------
# embeddings between levels of one tower
# ---------------------------------------------------------------------------

def embed(F, x, src):
    """Image of x in F, where src is F or one of its subfields in the same tower."""
    if src is F:
        return x
    if F.base is None:
        raise FieldError("element does not come from a subfield of the target")
    y = embed(F.base, x, src)
    return (y,) + (F.base.zero,) * (F.d - 1)


def restrict(F, x, sub):
    """Inverse of :func:`embed`: x in F known to lie in the subfield ``sub``."""
    while F is not sub:
        if F.base is None:
            raise FieldError("target is not a subfield")
        if any(not F.base.is_zero(c) for c in x[1:]):
            raise FieldError("element is not in the requested subfield")
        x = x[0]
        F = F.base
    return x


def is_subfield(sub, F) -> bool:
    while F is not None:
        if F is sub:
            return True
        F = F.base
    return False


# ---------------------------------------------------------------------------
# polynomials over a field
# ---------------------------------------------------------------------------

def poly_trim(F, a) -> tuple:
    a = list(a)
    while a and F.is_zero(a[-1]):
        a.pop()
    return tuple(a)


def _use_kernel(F, *polys) -> bool:
    return isinstance(F, PrimeField) and F._word and min(len(a) for a in polys) > 40


def _arr(a):
    return _kernels.as_array(a)


def _tup(arr) -> tuple:
    return tuple(int(c) for c in arr)


def poly_add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return poly_trim(F, out)


def poly_sub(F, a, b):
    out = list(a) + [F.zero] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = F.sub(out[i], c)
    return poly_trim(F, out)


def poly_neg(F, a):
    return tuple(F.neg(c) for c in a)


def poly_scale(F, a, c):
    if F.is_zero(c):
        return ()
    return poly_trim(F, [F.mul(c, x) for x in a])


def poly_mul(F, a, b):
    if not a or not b:
        return ()
    if _use_kernel(F, a, b):
        return _tup(_kernels.mul(_arr(a), _arr(b), F.p))
    if isinstance(F, PrimeField):
        p = F.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return poly_trim(F, [c % p for c in out])
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            if not F.is_zero(y):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(F, out)


def poly_divmod(F, a, m):
    if not m:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(m):
        return (), tuple(a)
    if _use_kernel(F, m) or (isinstance(F, PrimeField) and F._word and len(a) > 200):
        q, r = _kernels.divmod_(_arr(a), _arr(m), F.p)
        return _tup(q), _tup(r)
    dm = len(m) - 1
    inv = F.inv(m[-1])
    r = list(a)
    q = [F.zero] * (len(a) - dm)
    for k in range(len(a) - 1, dm - 1, -1):
        c = r[k]
        if F.is_zero(c):
            continue
        c = F.mul(c, inv)
        q[k - dm] = c
        for j in range(dm):
            if not F.is_zero(m[j]):
                r[k - dm + j] = F.sub(r[k - dm + j], F.mul(c, m[j]))
        r[k] = F.zero
    return poly_trim(F, q), poly_trim(F, r[:dm])


def poly_rem(F, a, m):
    return poly_divmod(F, a, m)[1]


def poly_monic(F, a):
    if not a:
        return a
    inv = F.inv(a[-1])
    return tuple(F.mul(inv, c) for c in a)


def poly_gcd(F, a, b):
    """Monic gcd."""
    if _use_kernel(F, a, b) if a and b else False:
        return _tup(_kernels.gcd(_arr(a), _arr(b), F.p))
    a, b = poly_trim(F, a), poly_trim(F, b)
    while b:
        a, b = b, poly_rem(F, a, b)
    return poly_monic(F, a)


def poly_xgcd_inv(F, a, m):
    """(g, u) with g = gcd(a, m) monic and u*a = g (mod m)."""
    r0, r1 = tuple(m), tuple(a)
    s0, s1 = (), (F.one,)
    while r1:
        q, r = poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(F, s0, poly_mul(F, q, s1))
    inv = F.inv(r0[-1])
    return poly_scale(F, r0, inv), poly_rem(F, poly_scale(F, s0, inv), m)


def poly_powmod(F, a, e: int, m):
    if _use_kernel(F, m):
        return _tup(_kernels.powmod(_arr(poly_rem(F, a, m)), e, _arr(m), F.p))
    result, base = (F.one,), poly_rem(F, a, m)
    if len(m) == 1:
        return ()
    while e:
        if e & 1:
            result = poly_rem(F, poly_mul(F, result, base), m)
        e >>= 1
        if e:
            base = poly_rem(F, poly_mul(F, base, base), m)
    return result


def poly_eval(F, a, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_eval_in(E, F, a, x):
    """Evaluate a polynomial over F at an element x of the extension E."""
    acc = E.zero
    for c in reversed(a):
        acc = E.add(E.mul(acc, x), embed(E, c, F))
    return acc


def poly_deriv(F, a):
    out = []
    for i, c in enumerate(a):
        if i:
            out.append(F.mul(F.from_int(i), c))
    return poly_trim(F, out)


def poly_divides(F, d, a) -> bool:
    return not poly_rem(F, a, d)


def poly_flatten(F, a) -> list[int]:
    out: list[int] = []
    for c in a:
        out.extend(F.flatten(c))
    return out


def poly_to_json(F, a):
    return [F.to_json(c) for c in a]


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------

def _squarefree(F, g):
    """Squarefree decomposition of a monic g: list of (part, multiplicity)."""
    out = []
    c = poly_gcd(F, g, poly_deriv(F, g))
    w = poly_divmod(F, g, c)[0]
    i = 1
    while len(w) > 1:
        y = poly_gcd(F, w, c)
        fac = poly_divmod(F, w, y)[0]
        if len(fac) > 1:
            out.append((fac, i))
        w = y
        c = poly_divmod(F, c, y)[0]
        i += 1
    if len(c) > 1:
        p = F.p
        root = tuple(F.pth_root(c[k]) for k in range(0, len(c), p))
        for fac, m in _squarefree(F, root):
            out.append((fac, m * p))
    return out


def _distinct_degree(F, g):
    out = []
    y = (F.zero, F.one)
    h = y
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = poly_powmod(F, h, F.q, g)
        t = poly_gcd(F, g, poly_sub(F, h, y))
        if len(t) > 1:
            out.append((d, t))
            g = poly_divmod(F, g, t)[0]
            h = poly_rem(F, h, g)
    if len(g) > 1:
        out.append((len(g) - 1, g))
    return out


def _equal_degree(F, g, d: int, rng: random.Random):
    n = len(g) - 1
    if n == d:
        return [g]
    q = F.q
    while True:
        a = poly_trim(F, [F.random(rng) for _ in range(n)])
        if len(a) < 2:
            continue
        if q % 2:
            b = poly_powmod(F, a, (q ** d - 1) // 2, g)
            b = poly_sub(F, b, (F.one,))
        else:
            # trace map to GF(2): a + a^2 + ... + a^(2^(kd-1))
            k = (q.bit_length() - 1) * d
            b, t = a, a
            for _ in range(k - 1):
                t = poly_rem(F, poly_mul(F, t, t), g)
                b = poly_add(F, b, t)
        t = poly_gcd(F, b, g)
        if 1 < len(t) < len(g):
            other = poly_divmod(F, g, t)[0]
            return _equal_degree(F, t, d, rng) + _equal_degree(F, other, d, rng)


def factor_key(F, a):
    return (len(a), poly_flatten(F, a))


def ff_factor(F, g) -> list[tuple[tuple, int]]:
    """Monic irreducible factors with multiplicities, in canonical order."""
    g = poly_trim(F, g)
    if not g:
        raise FieldError("cannot factor the zero polynomial")
    g = poly_monic(F, g)
    rng = random.Random(FACTOR_SEED)
    out = []
    for part, m in _squarefree(F, g):
        for d, h in _distinct_degree(F, part):
            for fac in _equal_degree(F, h, d, rng):
                out.append((fac, m))
    out.sort(key=lambda fm: factor_key(F, fm[0]))
    return out


def is_irreducible(F, g) -> bool:
    g = poly_monic(F, poly_trim(F, g))
    n = len(g) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    y = (F.zero, F.one)
    powers = {}
    h = y
    for k in range(1, n + 1):
        h = poly_powmod(F, h, F.q, g)
        powers[k] = h
    if poly_sub(F, powers[n], y):
        return False
    for ell in _prime_divisors(n):
        t = poly_gcd(F, g, poly_sub(F, powers[n // ell], y))
        if len(t) > 1:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def tower_extend(F, psi, check: bool = True):
    """Adjoin a root of the monic irreducible psi over F; returns (F', z)."""
    psi = poly_trim(F, psi)
    if len(psi) < 2 or psi[-1] != F.one:
        raise FieldError("extension polynomial must be monic of positive degree")
    if len(psi) == 2:
        return F, F.neg(psi[0])
    if check and not is_irreducible(F, psi):
        raise FieldError("extension polynomial is reducible")
    E = ExtField(F, psi)
    return E, E.gen


# ---------------------------------------------------------------------------
# lifting and reduction between Z[x] and F_1
# ---------------------------------------------------------------------------

def lift_to_int(F1, c) -> IntPoly:
    """Least non-negative lift of an element of F_1 = GF(p)[y]/(psi_0) to Z[x]."""
    if isinstance(F1, PrimeField):
        return trim((c,))
    if not isinstance(F1.base, PrimeField):
        raise FieldError("lifting is defined for the first tower level only")
    return trim(c)


def lift_poly(F, a) -> IntPoly:
    """Lift of a polynomial over GF(p) with coefficients in [0, p-1]."""
    if not isinstance(F, PrimeField):
        raise FieldError("only prime-field polynomials lift coefficientwise")
    return trim(a)


def reduce_int_poly(F0: PrimeField, g: IntPoly) -> tuple:
    p = F0.p
    return poly_trim(F0, [c % p for c in g])


def reduce_to_f1(F1, psi0, g: IntPoly):
    """Image of g(x) in F_1 under x -> z_0."""
    F0 = F1 if isinstance(F1, PrimeField) else F1.base
    gb = reduce_int_poly(F0, g)
    if isinstance(F1, PrimeField):
        return poly_eval(F0, gb, F0.neg(psi0[0]))
    r = poly_rem(F0, gb, psi0)
    return tuple(r) + (0,) * (F1.d - len(r))


def resultant_mod(f: IntPoly, g: IntPoly, q: int) -> int:
    """Res(f, g) mod a prime q, f monic (Euclid over GF(q))."""
    F = PrimeField(q)
    a = reduce_int_poly(F, f)
    b = reduce_int_poly(F, g)
    if not b:
        return 0
    acc, sign = 1, 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return sign * acc * pow(b[0], da, q) % q
        if da == 0:
            return sign * acc * pow(a[0], db, q) % q
        if db >= da:
            r = poly_rem(F, b, a)
            if not r:
                return 0
            acc = acc * pow(a[-1], db - (len(r) - 1), q) % q
            b = r
            continue
        if da * db % 2:
            sign = -sign
        a, b = b, a
