"""Exact projective-plane kernel.

Points and lines are homogeneous integer triples kept in canonical form
(content 1, first nonzero entry positive), so equality is component-wise
and both types hash. Every predicate is a sign-of-determinant computation
over arbitrary-precision integers; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import CollinearInput, DegenerateJoin, DegenerateMeet, InvalidInput

Triple = tuple[int, int, int]


def canonicalize(triple) -> Triple:
    """Reduce an integer triple by its gcd and normalize the leading sign.

    Idempotent and invariant under scaling by any nonzero integer. The zero
    triple is rejected: it names no projective object.
    """
    a, b, c = (int(v) for v in triple)
    if a == 0 and b == 0 and c == 0:
        raise InvalidInput("zero triple has no canonical form")
    g = gcd(gcd(abs(a), abs(b)), abs(c))
    a, b, c = a // g, b // g, c // g
    lead = a if a != 0 else (b if b != 0 else c)
    if lead < 0:
        a, b, c = -a, -b, -c
    return a, b, c


def _cross(u: Triple, v: Triple) -> Triple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


@dataclass(frozen=True, slots=True)
class ProjPoint:
    """Projective point; z == 0 encodes a point at infinity (a direction)."""

    x: int
    y: int
    z: int

    def __post_init__(self):
        x, y, z = canonicalize((self.x, self.y, self.z))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @classmethod
    def affine(cls, x, y) -> "ProjPoint":
        """Build a finite point from rational affine coordinates."""
        fx, fy = Fraction(x), Fraction(y)
        den = fx.denominator * fy.denominator // gcd(fx.denominator, fy.denominator)
        return cls(fx.numerator * (den // fx.denominator), fy.numerator * (den // fy.denominator), den)

    @classmethod
    def direction(cls, dx: int, dy: int) -> "ProjPoint":
        return cls(dx, dy, 0)

    @property
    def at_infinity(self) -> bool:
        return self.z == 0

    def to_affine(self) -> tuple[Fraction, Fraction]:
        if self.z == 0:
            raise InvalidInput(f"{self} is at infinity")
        return Fraction(self.x, self.z), Fraction(self.y, self.z)

    def triple(self) -> Triple:
        return self.x, self.y, self.z

    def __repr__(self):
        return f"[{self.x}:{self.y}:{self.z}]"


@dataclass(frozen=True, slots=True)
class ProjLine:
    """Projective line with locus a*X + b*Y + c*Z = 0; (0,0,1) is the line at infinity."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        a, b, c = canonicalize((self.a, self.b, self.c))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def is_line_at_infinity(self) -> bool:
        return self.a == 0 and self.b == 0

    def triple(self) -> Triple:
        return self.a, self.b, self.c

    def __repr__(self):
        return f"<{self.a}:{self.b}:{self.c}>"


LINE_AT_INFINITY = ProjLine(0, 0, 1)


def incident(p: ProjPoint, line: ProjLine) -> bool:
    return p.x * line.a + p.y * line.b + p.z * line.c == 0


def join(p: ProjPoint, q: ProjPoint) -> ProjLine:
    """Line through two distinct points (cross product of the triples)."""
    if p == q:
        raise DegenerateJoin(f"join of equal points {p}")
    return ProjLine(*_cross(p.triple(), q.triple()))


def meet(l1: ProjLine, l2: ProjLine) -> ProjPoint:
    """Common point of two distinct lines; parallel finite lines meet at infinity."""
    if l1 == l2:
        raise DegenerateMeet(f"meet of equal lines {l1}")
    return ProjPoint(*_cross(l1.triple(), l2.triple()))


def det3(p: ProjPoint, q: ProjPoint, r: ProjPoint) -> int:
    return (
        p.x * (q.y * r.z - q.z * r.y)
        - p.y * (q.x * r.z - q.z * r.x)
        + p.z * (q.x * r.y - q.y * r.x)
    )


def collinear(p: ProjPoint, q: ProjPoint, r: ProjPoint) -> bool:
    return det3(p, q, r) == 0


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def orientation(p: ProjPoint, q: ProjPoint, r: ProjPoint) -> int:
    """Orientation of three finite points: +1 counterclockwise, -1 clockwise, 0 collinear.

    Canonical form does not force z > 0, so the determinant sign is corrected
    by the signs of the z coordinates (scaling a row by a negative unit flips it).
    """
    if p.z == 0 or q.z == 0 or r.z == 0:
        raise InvalidInput("orientation requires finite points")
    return _sign(det3(p, q, r)) * _sign(p.z) * _sign(q.z) * _sign(r.z)


def strictly_between(a: ProjPoint, b: ProjPoint, m: ProjPoint) -> bool:
    """True iff m lies in the open segment (a, b).

    Requires a, b finite and distinct and m collinear with them. Any m at
    infinity is outside every segment.
    """
    if a.z == 0 or b.z == 0:
        raise InvalidInput("segment endpoints must be finite")
    if a == b:
        raise InvalidInput("degenerate segment")
    if not collinear(a, b, m):
        raise InvalidInput("betweenness asked for a point off the line")
    if m.at_infinity:
        return False
    ax, ay = a.to_affine()
    bx, by = b.to_affine()
    mx, my = m.to_affine()
    return (mx - ax) * (mx - bx) + (my - ay) * (my - by) < 0


def side_of(line: ProjLine, p: ProjPoint) -> int:
    """Sign of a finite point against a line, consistent across the plane."""
    if p.z == 0:
        raise InvalidInput("side_of requires a finite point")
    return _sign(p.x * line.a + p.y * line.b + p.z * line.c) * _sign(p.z)


def convex_hull(points: list[ProjPoint]) -> list[int]:
    """Counterclockwise hull as indices into ``points``, starting at the
    lexicographically smallest vertex.

    Monotone chain over exact affine coordinates; interior collinear points
    are dropped, so an all-collinear input yields its two endpoints.
    """
    if not points:
        raise InvalidInput("convex hull of empty set")
    if any(p.at_infinity for p in points):
        raise InvalidInput("convex hull requires finite points")
    order = sorted(range(len(points)), key=lambda i: points[i].to_affine())
    if points[order[0]] == points[order[-1]]:
        return [order[0]]

    def chain(indices):
        out = []
        for i in indices:
            while len(out) > 1 and orientation(points[out[-2]], points[out[-1]], points[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(reversed(order))
    return lower[:-1] + upper[:-1]


def is_general_position(points: list[ProjPoint]) -> tuple[bool, tuple[int, int, int] | None]:
    """Exhaustive triple scan; returns the first collinear triple as witness."""
    for t in combinations(range(len(points)), 3):
        if collinear(points[t[0]], points[t[1]], points[t[2]]):
            return False, t
    return True, None


def direction_of(line: ProjLine) -> ProjPoint:
    """The line's point at infinity; undefined for the line at infinity itself."""
    if line.is_line_at_infinity:
        raise InvalidInput("the line at infinity has no single direction")
    return ProjPoint(line.b, -line.a, 0)


def count_directions(points: list[ProjPoint]) -> int:
    """Number of distinct directions spanned by a finite point set."""
    distinct = set(points)
    if len(distinct) < 2:
        raise InvalidInput("need at least two distinct points")
    if any(p.at_infinity for p in points):
        raise InvalidInput("directions are defined for finite points")
    dirs = set()
    for p, q in combinations(sorted(distinct, key=ProjPoint.to_affine), 2):
        dirs.add(direction_of(join(p, q)))
    return len(dirs)


def all_collinear(points: list[ProjPoint]) -> bool:
    distinct = list(dict.fromkeys(points))
    if len(distinct) <= 2:
        return True
    base = join(distinct[0], distinct[1])
    return all(incident(p, base) for p in distinct[2:])
