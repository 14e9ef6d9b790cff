"""Word-size GF(p) polynomial kernels.

Polynomials are 1-d int64 arrays, lowest degree first, entries in [0, p).
Every routine here assumes p < 2**31 so that a single product of two
residues fits in a signed 64-bit integer.

Two implementations share one interface: numba-compiled loops, and a
pure-numpy path.  ``OMIDEALS_KERNELS=numpy`` forces the latter; the
default uses numba when it imports.  Both return identical arrays, so the
switch only affects speed.
"""

from __future__ import annotations

import os

import numpy as np

WORD_PRIME_LIMIT = 1 << 31

_requested = os.environ.get("OMIDEALS_KERNELS", "numba").strip().lower()

try:
    if _requested == "numpy":
        raise ImportError("numba disabled by OMIDEALS_KERNELS")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _strip(a):
    n = a.shape[0]
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return a[:n]


# ---------------------------------------------------------------------------
# pure numpy implementations
# ---------------------------------------------------------------------------

def _np_mul(a, b, p):
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if (p - 1) * (p - 1) * min(a.shape[0], b.shape[0]) < (1 << 62):
        return _strip(np.convolve(a, b) % p)
    # split into 16-bit limbs so every partial convolution stays exact
    mask = (1 << 16) - 1
    a_lo, a_hi = a & mask, a >> 16
    b_lo, b_hi = b & mask, b >> 16
    lo = np.convolve(a_lo, b_lo) % p
    mid = (np.convolve(a_lo, b_hi) + np.convolve(a_hi, b_lo)) % p
    hi = np.convolve(a_hi, b_hi) % p
    s16 = (1 << 16) % p
    s32 = (1 << 32) % p
    out = (lo + mid * s16 % p + hi * s32 % p) % p
    return _strip(out)


def _np_divmod(a, m, p):
    """Quotient and remainder of a by m; m must have an invertible leading term."""
    a = a.copy()
    dm = m.shape[0] - 1
    da = a.shape[0] - 1
    if da < dm:
        return np.zeros(0, dtype=np.int64), _strip(a)
    inv = pow(int(m[dm]), -1, p)
    q = np.zeros(da - dm + 1, dtype=np.int64)
    body = m[:dm]
    for k in range(da, dm - 1, -1):
        c = int(a[k])
        if c == 0:
            continue
        c = c * inv % p
        q[k - dm] = c
        if dm:
            seg = a[k - dm:k]
            seg -= body * c % p
            seg %= p
        a[k] = 0
    return _strip(q), _strip(a[:dm])


def _np_rem(a, m, p):
    return _np_divmod(a, m, p)[1]


def _np_monic(a, p):
    if a.shape[0] == 0:
        return a
    inv = pow(int(a[-1]), -1, p)
    return a * inv % p


def _np_gcd(a, b, p):
    a, b = _strip(a.copy()), _strip(b.copy())
    while b.shape[0]:
        a, b = b, _np_rem(a, b, p)
    return _np_monic(a, p)


def _np_powmod(a, bits, m, p):
    result = np.ones(1, dtype=np.int64)
    base = _np_rem(a, m, p)
    for bit in bits:
        result = _np_rem(_np_mul(result, result, p), m, p)
        if bit:
            result = _np_rem(_np_mul(result, base, p), m, p)
    return result


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_strip_len(a):
        n = a.shape[0]
        while n > 0 and a[n - 1] == 0:
            n -= 1
        return n

    @njit(cache=True)
    def _nb_inv(a, p):
        # extended Euclid on machine integers
        t, new_t = 0, 1
        r, new_r = p, a % p
        while new_r != 0:
            qq = r // new_r
            t, new_t = new_t, t - qq * new_t
            r, new_r = new_r, r - qq * new_r
        if t < 0:
            t += p
        return t

    @njit(cache=True)
    def _nb_mul(a, b, p):
        na, nb = a.shape[0], b.shape[0]
        if na == 0 or nb == 0:
            return np.zeros(0, dtype=np.int64)
        out = np.zeros(na + nb - 1, dtype=np.int64)
        room = ((1 << 62) // ((p - 1) * (p - 1) + 1))
        if room >= nb:
            for i in range(na):
                ai = a[i]
                if ai == 0:
                    continue
                for j in range(nb):
                    out[i + j] += ai * b[j]
            for k in range(out.shape[0]):
                out[k] %= p
        else:
            for i in range(na):
                ai = a[i]
                if ai == 0:
                    continue
                for j in range(nb):
                    out[i + j] = (out[i + j] + ai * b[j]) % p
        return out[:_nb_strip_len(out)]

    @njit(cache=True)
    def _nb_divmod(a, m, p):
        a = a.copy()
        dm = m.shape[0] - 1
        da = a.shape[0] - 1
        if da < dm:
            return np.zeros(0, dtype=np.int64), a[:_nb_strip_len(a)]
        inv = _nb_inv(m[dm], p)
        q = np.zeros(da - dm + 1, dtype=np.int64)
        for k in range(da, dm - 1, -1):
            c = a[k]
            if c == 0:
                continue
            c = c * inv % p
            q[k - dm] = c
            for j in range(dm):
                a[k - dm + j] = (a[k - dm + j] - c * m[j]) % p
            a[k] = 0
        r = a[:dm]
        return q[:_nb_strip_len(q)], r[:_nb_strip_len(r)]

    @njit(cache=True)
    def _nb_rem(a, m, p):
        return _nb_divmod(a, m, p)[1]

    @njit(cache=True)
    def _nb_gcd(a, b, p):
        a = a[:_nb_strip_len(a)].copy()
        b = b[:_nb_strip_len(b)].copy()
        while b.shape[0] > 0:
            r = _nb_rem(a, b, p)
            a = b
            b = r
        if a.shape[0] > 0:
            inv = _nb_inv(a[a.shape[0] - 1], p)
            for k in range(a.shape[0]):
                a[k] = a[k] * inv % p
        return a

    @njit(cache=True)
    def _nb_powmod(a, bits, m, p):
        result = np.ones(1, dtype=np.int64)
        base = _nb_rem(a, m, p)
        for idx in range(bits.shape[0]):
            result = _nb_rem(_nb_mul(result, result, p), m, p)
            if bits[idx]:
                result = _nb_rem(_nb_mul(result, base, p), m, p)
        return result


# ---------------------------------------------------------------------------
# public interface
# ---------------------------------------------------------------------------

def as_array(coeffs) -> np.ndarray:
    return np.asarray(coeffs, dtype=np.int64)


def _bits(e: int) -> np.ndarray:
    return np.array([int(c) for c in bin(e)[2:]], dtype=np.uint8)


def mul(a, b, p):
    return _nb_mul(a, b, p) if HAVE_NUMBA else _np_mul(a, b, p)


def divmod_(a, m, p):
    return _nb_divmod(a, m, p) if HAVE_NUMBA else _np_divmod(a, m, p)


def rem(a, m, p):
    return _nb_rem(a, m, p) if HAVE_NUMBA else _np_rem(a, m, p)


def gcd(a, b, p):
    return _nb_gcd(a, b, p) if HAVE_NUMBA else _np_gcd(a, b, p)


def powmod(a, e: int, m, p):
    if e == 0:
        return np.ones(1, dtype=np.int64) if m.shape[0] > 1 else np.zeros(0, dtype=np.int64)
    bits = _bits(e)
    if HAVE_NUMBA:
        return _nb_powmod(a, bits, m, p)
    return _np_powmod(a, bits, m, p)


# Both backends are importable for benchmarking and cross-checking.
NUMPY_IMPL = {"mul": _np_mul, "divmod": _np_divmod, "rem": _np_rem,
              "gcd": _np_gcd, "powmod": _np_powmod}
NUMBA_IMPL = ({"mul": _nb_mul, "divmod": _nb_divmod, "rem": _nb_rem,
               "gcd": _nb_gcd, "powmod": _nb_powmod} if HAVE_NUMBA else {})
