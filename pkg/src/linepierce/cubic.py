"""Exact cubic-curve machinery.

A cubic is ten integer coefficients over the fixed monomial basis
(X^3, X^2*Y, X^2*Z, X*Y^2, X*Y*Z, X*Z^2, Y^3, Y^2*Z, Y*Z^2, Z^3), i.e.
exponent triples in lexicographic order. Null spaces come from fraction-free
(Bareiss) elimination over the integers; intermediate entries may grow, which
is why everything stays on arbitrary precision.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import (
    CollinearityMismatch,
    DegenerateInstance,
    InvalidInput,
    NoCommonCubic,
    PropagationFailure,
)
from .geom import ProjLine, ProjPoint, incident, join, meet
from .incidence import BipartiteConfiguration, Configuration, CyclicStructure

log = logging.getLogger(__name__)

MONOMIAL_EXPONENTS = (
    (3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
    (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3),
)


def monomial_row(p: ProjPoint) -> tuple[int, ...]:
    """The ten degree-3 monomials of the point's canonical coordinates."""
    x, y, z = p.x, p.y, p.z
    return (
        x * x * x, x * x * y, x * x * z, x * y * y, x * y * z,
        x * z * z, y * y * y, y * y * z, y * z * z, z * z * z,
    )


def _canonical_vector(vec) -> tuple[int, ...]:
    g = 0
    for v in vec:
        g = gcd(g, abs(v))
    if g == 0:
        raise InvalidInput("zero vector has no canonical form")
    out = [v // g for v in vec]
    for v in out:
        if v != 0:
            if v < 0:
                out = [-w for w in out]
            break
    return tuple(out)


def _row_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Bareiss fraction-free elimination; returns echelon rows and pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    prev = 1
    piv_cols = []
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if m[i][col] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        for i in range(r + 1, nrows):
            for j in range(col + 1, ncols):
                m[i][j] = (m[r][col] * m[i][j] - m[i][col] * m[r][j]) // prev
            m[i][col] = 0
        prev = m[r][col]
        piv_cols.append(col)
        r += 1
        if r == nrows:
            break
    return m[:r], piv_cols


def rank(rows) -> int:
    return len(_row_echelon([list(r) for r in rows])[1])


def kernel(rows, ncols: int = 10) -> list[tuple[int, ...]]:
    """Integer basis of the right null space; dimension is ncols - rank."""
    rows = [list(r) for r in rows]
    for r in rows:
        if len(r) != ncols:
            raise InvalidInput("ragged matrix")
    echelon, piv_cols = _row_echelon(rows)
    free_cols = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    for free in free_cols:
        sol = [Fraction(0)] * ncols
        sol[free] = Fraction(1)
        for i in reversed(range(len(piv_cols))):
            pc = piv_cols[i]
            acc = sum((Fraction(echelon[i][j]) * sol[j] for j in range(pc + 1, ncols)), Fraction(0))
            sol[pc] = -acc / echelon[i][pc]
        den = 1
        for v in sol:
            den = den * v.denominator // gcd(den, v.denominator)
        basis.append(_canonical_vector(int(v * den) for v in sol))
    return basis


@dataclass(frozen=True)
class Cubic:
    """Nonzero homogeneous degree-3 form, coefficients canonical."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != 10:
            raise InvalidInput("a cubic has ten coefficients")
        object.__setattr__(self, "coeffs", _canonical_vector(self.coeffs))

    def evaluate(self, p: ProjPoint) -> int:
        return sum(c * m for c, m in zip(self.coeffs, monomial_row(p)))

    def __repr__(self):
        return f"Cubic{self.coeffs}"


def on_cubic(cubic: Cubic, p: ProjPoint) -> bool:
    return cubic.evaluate(p) == 0


@dataclass(frozen=True)
class ChaslesInstance:
    """Two triples of lines meeting in nine distinct points, one per line pair."""

    ell: tuple[ProjLine, ProjLine, ProjLine]
    em: tuple[ProjLine, ProjLine, ProjLine]
    meets: tuple[ProjPoint, ...]  # row-major: (ell_a, em_b) at 3*a + b


def chasles_instance(ell, em) -> ChaslesInstance:
    ell, em = tuple(ell), tuple(em)
    if len(ell) != 3 or len(em) != 3:
        raise InvalidInput("need three lines per family")
    if len(set(ell)) != 3 or len(set(em)) != 3 or set(ell) & set(em):
        raise DegenerateInstance("the six lines must be pairwise distinct")
    meets = tuple(meet(la, mb) for la in ell for mb in em)
    if len(set(meets)) != 9:
        raise DegenerateInstance("intersection points collide")
    return ChaslesInstance(ell, em, meets)


def chasles_verify(inst: ChaslesInstance) -> bool:
    """Every cubic through eight of the nine meets vanishes on the ninth.

    Rank formulation: dropping any single row must not lower the rank, which
    quantifies over the whole pencil of cubics through the eight points.
    """
    rows = [monomial_row(p) for p in inst.meets]
    full = rank(rows)
    for leave_out in range(9):
        sub = rows[:leave_out] + rows[leave_out + 1:]
        if rank(sub) != full:
            return False
    return True


def _grid_instance(config, struct: CyclicStructure, line_spec, expected):
    """Build a claim grid from (x-position pair, r-label) line descriptions."""
    lines = []
    for (pa, pb), rlabel in line_spec:
        xa = struct.x_point(config, pa)
        xb = struct.x_point(config, pb)
        r = struct.r_point(config, rlabel)
        line = join(xa, xb)
        if not incident(r, line):
            raise CollinearityMismatch(
                f"positions {pa % struct.modulus},{pb % struct.modulus} and label "
                f"{rlabel % struct.modulus} are not collinear"
            )
        lines.append(line)
    inst = chasles_instance(lines[:3], lines[3:])
    want = []
    for kind, v in expected:
        want.append(struct.x_point(config, v) if kind == "x" else struct.r_point(config, v))
    if set(inst.meets) != set(want):
        raise DegenerateInstance("grid meets are not the expected nine points")
    return inst


def claim1_instance(i: int, struct: CyclicStructure, config) -> ChaslesInstance:
    """First claim grid: six consecutive x's and the r's labeled 5+2i, 7+2i, 9+2i."""
    n = struct.modulus
    spec = [
        ((n - 2 - i, n - 3 - i), 5 + 2 * i),
        ((n - 4 - i, n - 5 - i), 9 + 2 * i),
        ((n - 1 - i, n - 6 - i), 7 + 2 * i),
        ((n - 3 - i, n - 6 - i), 9 + 2 * i),
        ((n - 1 - i, n - 4 - i), 5 + 2 * i),
        ((n - 2 - i, n - 5 - i), 7 + 2 * i),
    ]
    expected = [("x", n - 1 - i - t) for t in range(6)]
    expected += [("r", 5 + 2 * i), ("r", 7 + 2 * i), ("r", 9 + 2 * i)]
    return _grid_instance(config, struct, spec, expected)


def claim2_instance(i: int, struct: CyclicStructure, config) -> ChaslesInstance:
    """Second claim grid: six x's skipping position n-4-i and r's labeled 7+2i, 8+2i, 9+2i."""
    n = struct.modulus
    spec = [
        ((n - 1 - i, n - 6 - i), 7 + 2 * i),
        ((n - 2 - i, n - 7 - i), 9 + 2 * i),
        ((n - 3 - i, n - 5 - i), 8 + 2 * i),
        ((n - 3 - i, n - 6 - i), 9 + 2 * i),
        ((n - 2 - i, n - 5 - i), 7 + 2 * i),
        ((n - 1 - i, n - 7 - i), 8 + 2 * i),
    ]
    expected = [("x", n - 1 - i - t) for t in (0, 1, 2, 4, 5, 6)]
    expected += [("r", 7 + 2 * i), ("r", 8 + 2 * i), ("r", 9 + 2 * i)]
    return _grid_instance(config, struct, spec, expected)


def _all_point_keys(struct: CyclicStructure):
    keys = [("x", pos) for pos in range(struct.modulus)]
    keys += [("r", lab) for lab in struct.labels()]
    return keys


def _resolve(config, struct, key) -> ProjPoint:
    kind, v = key
    return struct.x_point(config, v) if kind == "x" else struct.r_point(config, v)


def _claim_grid_keys(struct, family, i):
    n = struct.modulus
    if family == 1:
        keys = [("x", (n - 1 - i - t) % n) for t in range(6)]
        rlabs = (5 + 2 * i, 7 + 2 * i, 9 + 2 * i)
    else:
        keys = [("x", (n - 1 - i - t) % n) for t in (0, 1, 2, 4, 5, 6)]
        rlabs = (7 + 2 * i, 8 + 2 * i, 9 + 2 * i)
    keys += [("r", lab % n) for lab in rlabs]
    return keys


def _certify_by_claims(config, struct: CyclicStructure) -> Cubic:
    n = struct.modulus
    seed_keys = [("x", (n - 1 - t) % n) for t in range(7)] + [("r", 5), ("r", 7)]
    seed_rows = [monomial_row(_resolve(config, struct, k)) for k in seed_keys]
    seed_kernel = kernel(seed_rows)
    if not seed_kernel:
        raise NoCommonCubic("no cubic through the nine seed points")
    gamma = Cubic(seed_kernel[0])

    families = [1]
    if n % 2 == 0 and all(struct.has_label(8 + 2 * i) for i in range(n)):
        families.append(2)
    build = {1: claim1_instance, 2: claim2_instance}

    instances = []
    for family in families:
        for i in range(n):
            keys = _claim_grid_keys(struct, family, i)
            if any(k[0] == "r" and not struct.has_label(k[1]) for k in keys):
                continue
            try:
                inst = build[family](i, struct, config)
            except DegenerateInstance as exc:
                log.info("skipping degenerate claim %d grid at i=%d: %s", family, i, exc)
                continue
            if not chasles_verify(inst):
                raise PropagationFailure(f"claim {family} grid at i={i} fails the rank test")
            instances.append((family, i, keys))

    known = set(seed_keys)
    changed = True
    while changed:
        changed = False
        for family, i, keys in instances:
            missing = [k for k in keys if k not in known]
            if len(missing) != 1:
                continue
            point = _resolve(config, struct, missing[0])
            if not on_cubic(gamma, point):
                raise PropagationFailure(
                    f"claim {family} grid at i={i} certifies {missing[0]} but the seed cubic misses it"
                )
            known.add(missing[0])
            changed = True

    all_keys = _all_point_keys(struct)
    remaining = [k for k in all_keys if k not in known]
    if not remaining:
        return gamma

    # The certified set pins the cubic uniquely whenever its rank is nine;
    # then every cubic through the seed equals that one, which settles the
    # points the one-at-a-time propagation cannot reach.
    known_rows = [monomial_row(_resolve(config, struct, k)) for k in sorted(known)]
    closure = kernel(known_rows)
    if len(closure) != 1:
        raise PropagationFailure(
            f"propagation stalled with {len(remaining)} points left and a "
            f"{len(closure)}-dimensional cubic family"
        )
    unique = Cubic(closure[0])
    for key in remaining:
        if not on_cubic(unique, _resolve(config, struct, key)):
            raise NoCommonCubic(f"certified cubic misses {key}")
    if unique != gamma:
        raise PropagationFailure("seed cubic is not the unique cubic through the certified set")
    return unique


def _all_points(config) -> list[ProjPoint]:
    return list(config.base_points()) + list(config.piercers)


def certify_cubic(config: Configuration, struct: CyclicStructure, strategy: str = "direct") -> Cubic:
    """Produce one cubic through all of P and R.

    ``direct`` takes any member of the null space of the full monomial
    matrix. ``paper`` seeds a cubic through x_{n-1}..x_{n-7}, r_5, r_7 and
    certifies the remaining points through claim grids; for modulus < 8 the
    seed does not exist and the direct route is used instead.
    """
    if strategy not in ("direct", "paper"):
        raise InvalidInput(f"unknown strategy {strategy!r}")
    if strategy == "paper":
        if struct.modulus >= 8:
            return _certify_by_claims(config, struct)
        log.info("modulus %d below the seeded minimum 8; using direct strategy", struct.modulus)
    rows = [monomial_row(p) for p in _all_points(config)]
    basis = kernel(rows)
    if not basis:
        raise NoCommonCubic(f"{len(rows)} points admit no common cubic")
    return Cubic(basis[0])


def certify_bipartite_cubic(
    bconfig: BipartiteConfiguration, struct: CyclicStructure, strategy: str = "direct"
) -> Cubic:
    """Bipartite variant on modulus 2n; only the first claim family applies."""
    return certify_cubic(bconfig, struct, strategy)
