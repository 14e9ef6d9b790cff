"""Newton polygons: lower convex envelopes of integer point clouds."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class PolygonError(ValueError):
    pass


@dataclass(frozen=True)
class Side:
    """Segment from (s0, u0) to (s1, u1) of slope -h/e, gcd(h, e) = 1."""

    s0: int
    u0: int
    s1: int
    u1: int

    @property
    def slope(self) -> Fraction:
        return Fraction(self.u1 - self.u0, self.s1 - self.s0)

    @property
    def h(self) -> int:
        return -self.slope.numerator

    @property
    def e(self) -> int:
        return self.slope.denominator

    @property
    def degree(self) -> int:
        return (self.s1 - self.s0) // self.e

    @property
    def length(self) -> int:
        return self.s1 - self.s0


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple  # ((s, u), ...) left to right

    @property
    def sides(self) -> list[Side]:
        v = self.vertices
        return [Side(v[k][0], v[k][1], v[k + 1][0], v[k + 1][1]) for k in range(len(v) - 1)]


def _normalize(cloud: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    best: dict[int, int] = {}
    for s, u in cloud:
        if s not in best or u < best[s]:
            best[s] = u
    return sorted(best.items())


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_envelope(cloud: Iterable[tuple[int, int]]) -> NewtonPolygon:
    """Lower convex hull (monotone chain), collinear points dropped."""
    pts = _normalize(cloud)
    if not pts:
        raise PolygonError("empty point cloud")
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return NewtonPolygon(tuple(hull))


def principal_part(N: NewtonPolygon) -> list[Side]:
    """Sides of negative slope, ordered by increasing slope (steepest first)."""
    return [S for S in N.sides if S.slope < 0]


def first_touch(cloud: Sequence[tuple[int, int]], lam: Fraction):
    """Contact of the lowest line of slope lam with the cloud.

    Returns (contact, s, u, H): ``contact`` is the list of cloud points on the
    line, (s, u) is its leftmost point and H = u + s*|lam| the intercept.
    """
    pts = _normalize(cloud)
    if not pts:
        raise PolygonError("empty point cloud")
    mu = -Fraction(lam)
    H = min(u + s * mu for s, u in pts)
    contact = [(s, u) for s, u in pts if u + s * mu == H]
    s, u = contact[0]
    return contact, s, u, H


def intercept_int(cloud: Sequence[tuple[int, int]], h: int, e: int) -> tuple[int, list[tuple[int, int]]]:
    """Integer form of first_touch for slope -h/e: (min of e*u + h*s, contact points)."""
    best = None
    contact: list[tuple[int, int]] = []
    for s, u in cloud:
        w = e * u + h * s
        if best is None or w < best:
            best, contact = w, [(s, u)]
        elif w == best:
            contact.append((s, u))
    if best is None:
        raise PolygonError("empty point cloud")
    contact.sort()
    return best, contact


def side_of_slope(N: NewtonPolygon, h: int, e: int) -> Side | None:
    g = gcd(h, e)
    target = Fraction(-h // g, e // g)
    for S in N.sides:
        if S.slope == target:
            return S
    return None


def render_ascii(N: NewtonPolygon, cloud: Sequence[tuple[int, int]] = ()) -> str:
    """Small diagnostic plot: '*' cloud points, 'o' vertices."""
    pts = list(cloud) + list(N.vertices)
    if not pts:
        return ""
    smax = max(s for s, _ in pts)
    umin = min(u for _, u in pts)
    umax = max(u for _, u in pts)
    rows = []
    verts = set(N.vertices)
    cl = set(cloud)
    for u in range(umax, umin - 1, -1):
        line = []
        for s in range(smax + 1):
            line.append("o" if (s, u) in verts else "*" if (s, u) in cl else ".")
        rows.append(f"{u:>6} " + "".join(line))
    return "\n".join(rows)
