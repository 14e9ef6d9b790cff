import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIELDS
from omideals import _kernels as kn

PRIMES = [2, 3, 7, 65537, 2147483647]


def _ref_mul(a, b, p):
    out = [0] * max(len(a) + len(b) - 1, 0)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _ref_divmod(a, m, p):
    a = list(a)
    inv = pow(m[-1], -1, p)
    q = [0] * max(len(a) - len(m) + 1, 0)
    for k in range(len(a) - len(m), -1, -1):
        c = a[k + len(m) - 1] * inv % p
        q[k] = c
        for j, mj in enumerate(m):
            a[k + j] = (a[k + j] - c * mj) % p
    while a and a[-1] == 0:
        a.pop()
    while q and q[-1] == 0:
        q.pop()
    return q, a


def _poly(p, max_len=12, min_len=0):
    return st.lists(st.integers(0, p - 1), min_size=min_len, max_size=max_len)


@st.composite
def _case(draw):
    p = draw(st.sampled_from(PRIMES))
    a = draw(_poly(p))
    m = draw(_poly(p, 8, 1))
    if not m or m[-1] == 0:
        m = list(m) + [1]
    return p, a, m


BACKENDS = [kn.NUMPY_IMPL] + ([kn.NUMBA_IMPL] if kn.HAVE_NUMBA else [])


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda d: "numba" if d is kn.NUMBA_IMPL else "numpy")
@settings(max_examples=80, deadline=None)
@given(_case())
def test_kernels_match_reference(impl, case):
    p, a, m = case
    A, M = kn.as_array(a), kn.as_array(m)
    assert list(impl["mul"](A, M, p)) == _ref_mul(a, m, p)
    q, r = impl["divmod"](A, M, p)
    rq, rr = _ref_divmod(a, m, p)
    assert list(q) == rq and list(r) == rr
    assert list(impl["rem"](A, M, p)) == rr


@pytest.mark.skipif(not kn.HAVE_NUMBA, reason="numba unavailable")
@settings(max_examples=60, deadline=None)
@given(_case(), st.integers(1, 10**6))
def test_backends_agree_on_gcd_and_powmod(case, e):
    p, a, m = case
    A, M = kn.as_array(a), kn.as_array(m)
    g1 = kn.NUMPY_IMPL["gcd"](A, M, p)
    g2 = kn.NUMBA_IMPL["gcd"](A, M, p)
    assert np.array_equal(g1, g2)
    if len(m) > 1:
        bits = kn._bits(e)
        assert np.array_equal(kn.NUMPY_IMPL["powmod"](A, bits, M, p), kn.NUMBA_IMPL["powmod"](A, bits, M, p))


def _cli(env_value):
    env = dict(os.environ, OMIDEALS_KERNELS=env_value)
    cmd = [sys.executable, "-m", "omideals", "factor-prime", "--field",
           str(FIELDS / "deg20_two_primes.json"), "--p", "2,3,5"]
    return subprocess.run(cmd, capture_output=True, text=True, env=env, check=True).stdout


def test_backend_switch_changes_nothing_but_speed():
    env = dict(os.environ, OMIDEALS_KERNELS="numpy")
    probe = subprocess.run([sys.executable, "-c", "from omideals import _kernels; print(_kernels.BACKEND)"],
                           capture_output=True, text=True, env=env, check=True)
    assert probe.stdout.strip() == "numpy"
    assert _cli("numpy") == _cli("numba")
