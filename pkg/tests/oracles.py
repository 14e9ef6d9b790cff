"""Independent reference computations used as test oracles.

Nothing here touches the OM machinery: integrality is decided through
characteristic polynomials and the p-maximal order is found by exhaustive
search over (1/p)-overlattices.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


def mult_matrix(f: list[int], g: list[Fraction]) -> list[list[Fraction]]:
    """Matrix of multiplication by g(theta) on the power basis (rows = images)."""
    n = len(f) - 1
    rows = []
    cur = list(g) + [Fraction(0)] * (n - len(g))
    for _ in range(n):
        rows.append(cur[:])
        # multiply by theta: shift and reduce with the monic f
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        cur = [c - top * f[k] for k, c in enumerate(cur)]
    return rows


def _matmul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def charpoly(f: list[int], g: list[Fraction]) -> list[Fraction]:
    """Characteristic polynomial of g(theta), leading coefficient first (Faddeev-LeVerrier)."""
    A = mult_matrix(f, [Fraction(c) for c in g])
    n = len(A)
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        for i in range(n):
            M[i][i] += coeffs[-1]
        M = _matmul(A, M)
        c = -sum(M[i][i] for i in range(n)) / k
        coeffs.append(c)
    return coeffs


def is_integral(f: list[int], g: list[Fraction]) -> bool:
    A = mult_matrix(f, [Fraction(c) for c in g])
    if sum(A[i][i] for i in range(len(A))).denominator != 1:
        return False
    return all(c.denominator == 1 for c in charpoly(f, g))


def _hnf_basis(vectors: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """A Z-basis of the lattice spanned by rational vectors (via sympy HNF)."""
    from math import lcm
    d = lcm(*(c.denominator for v in vectors for c in v))
    M = sympy.Matrix([[int(c * d) for c in v] for v in vectors])
    from sympy.matrices.normalforms import hermite_normal_form
    H = hermite_normal_form(M.T).T
    rows = [[Fraction(int(H[i, j]), d) for j in range(n)] for i in range(H.rows)]
    return [r for r in rows if any(r)]


def p_maximal_index(f: list[int], p: int) -> int:
    """v_p((O : Z[theta])) by growing Z[theta] with integral elements of (1/p)O'."""
    n = len(f) - 1
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    index = 0
    while True:
        found = None
        for c in itertools.product(range(p), repeat=n):
            if not any(c):
                continue
            v = [sum(Fraction(c[i]) * basis[i][j] for i in range(n)) / p for j in range(n)]
            if is_integral(f, v):
                found = v
                break
        if found is None:
            return index
        basis = _hnf_basis(basis + [found], n)
        index += 1
