"""Piercing verification and the collinearity structure it forces.

Implements the hypothesis checks (incidence and outside-segment modes), the
relevance bookkeeping, the hull counting audit, and extraction of the cyclic
labeling x_i, x_j, r_k collinear iff i + j + k = 0 (mod n), together with the
bipartite variants on modulus 2n.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .errors import (
    ConvexPositionViolation,
    GeneralPositionViolation,
    InconsistentLabeling,
    InfinitePointInP,
    InvalidInput,
    PiercingViolation,
    StructureViolation,
    TheoremContradiction,
)
from .geom import (
    ProjPoint,
    collinear,
    convex_hull,
    incident,
    is_general_position,
    join,
    orientation,
    side_of,
    strictly_between,
)


class PierceMode(Enum):
    INCIDENCE = "incidence"
    OUTSIDE_SEGMENT = "outside_segment"

    @classmethod
    def parse(cls, text: str) -> "PierceMode":
        for mode in cls:
            if mode.value == text:
                return mode
        raise InvalidInput(f"unknown mode {text!r}")


@dataclass(frozen=True)
class Configuration:
    """A base point set P with a candidate piercing set R."""

    points: tuple[ProjPoint, ...]
    piercers: tuple[ProjPoint, ...]
    mode: PierceMode = PierceMode.INCIDENCE

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "piercers", tuple(self.piercers))
        if not self.points:
            raise InvalidInput("empty base point set")
        if len(set(self.points)) != len(self.points):
            raise InvalidInput("duplicate base points")
        if len(set(self.piercers)) != len(self.piercers):
            raise InvalidInput("duplicate piercing points")
        if set(self.points) & set(self.piercers):
            raise InvalidInput("piercing set must be disjoint from the base set")
        if self.mode is PierceMode.OUTSIDE_SEGMENT and any(p.at_infinity for p in self.points):
            raise InfinitePointInP("outside-segment mode needs finite base points")

    @property
    def n(self) -> int:
        return len(self.points)

    def base_points(self) -> tuple[ProjPoint, ...]:
        return self.points


@dataclass(frozen=True)
class BipartiteConfiguration:
    """Blue and green base points whose mixed lines are pierced by R."""

    blues: tuple[ProjPoint, ...]
    greens: tuple[ProjPoint, ...]
    piercers: tuple[ProjPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "blues", tuple(self.blues))
        object.__setattr__(self, "greens", tuple(self.greens))
        object.__setattr__(self, "piercers", tuple(self.piercers))
        if not (len(self.blues) == len(self.greens) == len(self.piercers)):
            raise InvalidInput("blue, green and piercing sets must have equal size")
        merged = self.blues + self.greens + self.piercers
        if len(set(merged)) != len(merged):
            raise InvalidInput("the three point sets must be pairwise disjoint and duplicate-free")

    @property
    def n(self) -> int:
        return len(self.blues)

    def base_points(self) -> tuple[ProjPoint, ...]:
        return self.blues + self.greens

    def is_blue(self, base_index: int) -> bool:
        return base_index < len(self.blues)


@dataclass(frozen=True)
class PierceReport:
    """Witness map of one verification run; empty violations means the hypothesis holds."""

    mode: PierceMode
    witnesses: dict[tuple[int, int], tuple[int, ...]]
    violations: tuple[tuple[int, int], ...]
    line_r_counts: dict[tuple[int, int], int]

    @property
    def ok(self) -> bool:
        return not self.violations

    def witnesses_for(self, i: int, j: int) -> tuple[int, ...]:
        return self.witnesses[(i, j) if i < j else (j, i)]


def _pair_witnesses(x, y, piercers, mode):
    line = join(x, y)
    on_line = [k for k, r in enumerate(piercers) if incident(r, line)]
    if mode is PierceMode.INCIDENCE:
        good = on_line
    else:
        good = [k for k in on_line if not strictly_between(x, y, piercers[k])]
    return tuple(good), len(on_line)


def verify_piercing(config: Configuration, mode: PierceMode | None = None) -> PierceReport:
    """Check the piercing hypothesis over every pair of base points.

    The report is deterministic: pairs are scanned in lexicographic index
    order and witness lists keep the piercer indexing of the configuration.
    """
    mode = config.mode if mode is None else mode
    points = config.points
    if mode is PierceMode.OUTSIDE_SEGMENT and any(p.at_infinity for p in points):
        raise InfinitePointInP("outside-segment mode needs finite base points")
    ok, witness = is_general_position(list(points))
    if not ok:
        raise GeneralPositionViolation(witness)
    witnesses = {}
    counts = {}
    violations = []
    for i, j in combinations(range(len(points)), 2):
        good, on_line = _pair_witnesses(points[i], points[j], config.piercers, mode)
        witnesses[(i, j)] = good
        counts[(i, j)] = on_line
        if not good:
            violations.append((i, j))
    return PierceReport(mode, witnesses, tuple(violations), counts)


def verify_bipartite(bconfig: BipartiteConfiguration) -> PierceReport:
    """Check that every blue-green line carries a piercer off the open segment.

    Pair keys are indices into ``bconfig.base_points()`` (blues first).
    """
    base = bconfig.base_points()
    ok, witness = is_general_position(list(base))
    if not ok:
        raise GeneralPositionViolation(witness)
    nb = len(bconfig.blues)
    witnesses = {}
    counts = {}
    violations = []
    for i in range(nb):
        for j in range(nb, len(base)):
            good, on_line = _pair_witnesses(base[i], base[j], bconfig.piercers, PierceMode.OUTSIDE_SEGMENT)
            witnesses[(i, j)] = good
            counts[(i, j)] = on_line
            if not good:
                violations.append((i, j))
    return PierceReport(PierceMode.OUTSIDE_SEGMENT, witnesses, tuple(violations), counts)


@dataclass(frozen=True)
class RelevanceTable:
    """For each base index the chosen witness per partner, and the one piercer never chosen."""

    choices: dict[int, dict[int, int]]
    non_relevant: dict[int, int]


def build_relevance(config: Configuration, mode: PierceMode = PierceMode.OUTSIDE_SEGMENT) -> RelevanceTable:
    """Choose one relevant piercer per ordered pair, lowest index first.

    Valid instances leave exactly one piercer unchosen per base point; any
    other count means the configuration cannot carry the structure.
    """
    report = verify_piercing(config, mode)
    if not report.ok:
        raise PiercingViolation(report)
    n = config.n
    if len(config.piercers) != n:
        raise StructureViolation(
            f"relevance needs |R| = |P|, got {len(config.piercers)} != {n}"
        )
    choices: dict[int, dict[int, int]] = {}
    non_relevant: dict[int, int] = {}
    for i in range(n):
        chosen = {}
        for j in range(n):
            if j != i:
                chosen[j] = min(report.witnesses_for(i, j))
        leftovers = set(range(n)) - set(chosen.values())
        if len(leftovers) != 1:
            raise StructureViolation(
                f"base point {i} has {len(leftovers)} non-relevant piercers, expected 1"
            )
        choices[i] = chosen
        non_relevant[i] = leftovers.pop()
    return RelevanceTable(choices, non_relevant)


@dataclass(frozen=True)
class HullAudit:
    """Exact counts behind the hull argument: a + b + 2c = 2|R'| and b + c = k."""

    k: int
    hull: tuple[int, ...]
    r_outside: tuple[int, ...]
    a: int
    b: int
    c: int


def _supports(line, points) -> bool:
    has_pos = has_neg = False
    for p in points:
        s = side_of(line, p)
        has_pos |= s > 0
        has_neg |= s < 0
        if has_pos and has_neg:
            return False
    return True


def outside_hull(points: list[ProjPoint], hull: list[int], r: ProjPoint) -> bool:
    """Strictly outside the closed hull; points at infinity always are."""
    if r.at_infinity:
        return True
    k = len(hull)
    return any(
        orientation(points[hull[t]], points[hull[(t + 1) % k]], r) < 0 for t in range(k)
    )


def hull_audit(config: Configuration) -> HullAudit:
    """Classify the supporting lines through piercers outside the hull.

    Counts a (single-vertex tangents), b (edge lines with one piercer) and
    c (edge lines with two); the identities a + b + 2c = 2|R'| and b + c = k
    are rechecked and any failure raises, since they are consequences of the
    hypothesis for |R| = |P|.
    """
    report = verify_piercing(config, PierceMode.OUTSIDE_SEGMENT)
    if not report.ok:
        raise PiercingViolation(report)
    points = list(config.points)
    if len(config.piercers) != len(points):
        raise StructureViolation("hull audit needs |R| = |P|")
    if len(points) < 3:
        raise InvalidInput("hull audit needs at least three base points")
    hull = convex_hull(points)
    k = len(hull)
    r_outside = [idx for idx, r in enumerate(config.piercers) if outside_hull(points, hull, r)]
    outside_set = set(r_outside)

    support_lines: dict = {}
    for ridx in r_outside:
        r = config.piercers[ridx]
        lines_r = {join(r, points[v]) for v in hull}
        lines_r = {line for line in lines_r if _supports(line, points)}
        if len(lines_r) != 2:
            raise TheoremContradiction(
                f"piercer {ridx} has {len(lines_r)} supporting lines, expected 2"
            )
        for line in lines_r:
            support_lines.setdefault(line, set()).add(ridx)

    edge_lines = {join(points[hull[t]], points[hull[(t + 1) % k]]) for t in range(k)}
    a = b = c = 0
    edge_lines_seen = set()
    for line, generators in support_lines.items():
        on_hull = sum(1 for v in hull if incident(points[v], line))
        r_on_line = [idx for idx, r in enumerate(config.piercers) if incident(r, line)]
        if not set(r_on_line) <= outside_set:
            raise TheoremContradiction(f"piercer inside the hull on supporting line {line}")
        if on_hull == 1:
            if len(r_on_line) != 1:
                raise TheoremContradiction(
                    f"vertex-supporting line {line} carries {len(r_on_line)} piercers"
                )
            a += 1
        elif on_hull == 2:
            edge_lines_seen.add(line)
            if len(r_on_line) == 1:
                b += 1
            elif len(r_on_line) == 2:
                c += 1
            else:
                raise TheoremContradiction(
                    f"edge line {line} carries {len(r_on_line)} piercers"
                )
        else:
            raise TheoremContradiction(f"supporting line {line} meets the hull {on_hull} times")

    if edge_lines_seen != edge_lines or b + c != k:
        raise TheoremContradiction("some hull edge line carries no outside piercer")
    if a + b + 2 * c != 2 * len(r_outside):
        raise TheoremContradiction("tangent incidence count does not match 2|R'|")
    return HullAudit(k, tuple(hull), tuple(sorted(r_outside)), a, b, c)


@dataclass(frozen=True)
class CyclicStructure:
    """Labeling certificate: x at position a, x at b and r labeled -(a+b) are collinear.

    ``x_order`` maps hull positions to indices into the base points;
    ``r_by_label`` maps residues to piercer indices (None where the residue
    class is absent, as for even labels in the bipartite case).
    """

    modulus: int
    x_order: tuple[int, ...]
    r_by_label: tuple[int | None, ...]

    def x_point(self, config, position: int) -> ProjPoint:
        return config.base_points()[self.x_order[position % self.modulus]]

    def r_point(self, config, label: int) -> ProjPoint:
        idx = self.r_by_label[label % self.modulus]
        if idx is None:
            raise InvalidInput(f"no piercer carries label {label % self.modulus}")
        return config.piercers[idx]

    def has_label(self, label: int) -> bool:
        return self.r_by_label[label % self.modulus] is not None

    def labels(self) -> list[int]:
        return [lab for lab, idx in enumerate(self.r_by_label) if idx is not None]


def _label_assignment(classes, candidates):
    """Deterministic backtracking over systems of distinct representatives."""
    order = sorted(classes, key=lambda s: (len(candidates[s]), s))
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def backtrack(depth: int):
        if depth == len(order):
            yield dict(assignment)
            return
        s = order[depth]
        for k in candidates[s]:
            if k not in used:
                used.add(k)
                assignment[s] = k
                yield from backtrack(depth + 1)
                used.discard(k)
                del assignment[s]

    yield from backtrack(0)


def _verify_labeling(xs, piercers, modulus, label_of, pair_filter):
    for a, b in combinations(range(len(xs)), 2):
        if not pair_filter(a, b):
            continue
        line = join(xs[a], xs[b])
        for k, r in enumerate(piercers):
            expected = label_of[k] is not None and (a + b + label_of[k]) % modulus == 0
            if incident(r, line) != expected:
                return False
    return True


def _extract_structure(xs, piercers, modulus, class_residues, pair_filter):
    pairs_by_class = {s: [] for s in class_residues}
    for a, b in combinations(range(len(xs)), 2):
        if pair_filter(a, b):
            pairs_by_class[(a + b) % modulus].append((a, b))
    candidates = {}
    for s in class_residues:
        cand = [
            k
            for k in range(len(piercers))
            if all(collinear(xs[a], xs[b], piercers[k]) for a, b in pairs_by_class[s])
        ]
        if not cand:
            raise InconsistentLabeling(f"no piercer is collinear with every pair of class {s}")
        candidates[s] = cand

    for assignment in _label_assignment(class_residues, candidates):
        label_of: list[int | None] = [None] * len(piercers)
        for s, k in assignment.items():
            label_of[k] = (-s) % modulus
        if _verify_labeling(xs, piercers, modulus, label_of, pair_filter):
            r_by_label: list[int | None] = [None] * modulus
            for k, lab in enumerate(label_of):
                if lab is not None:
                    r_by_label[lab] = k
            return tuple(r_by_label)
    raise InconsistentLabeling("no residue labeling satisfies the collinearity rule")


def extract_cyclic_structure(config: Configuration) -> CyclicStructure:
    """Recover the labeling r_0..r_{n-1} with x_i, x_j, r_k collinear iff i+j+k = 0 (mod n).

    Position 0 is the lexicographically smallest hull vertex and positions
    run counterclockwise. The returned certificate is rechecked against every
    triple before being handed out.
    """
    report = verify_piercing(config, PierceMode.OUTSIDE_SEGMENT)
    if not report.ok:
        raise PiercingViolation(report)
    n = config.n
    if len(config.piercers) != n:
        raise StructureViolation("structure extraction needs |R| = |P|")
    points = list(config.points)
    hull = convex_hull(points)
    if len(hull) != n:
        raise ConvexPositionViolation(
            f"hypothesis holds but only {len(hull)} of {n} base points are hull vertices"
        )
    xs = [points[i] for i in hull]
    r_by_label = _extract_structure(
        xs, config.piercers, n, list(range(n)), lambda a, b: True
    )
    return CyclicStructure(n, tuple(hull), r_by_label)


def tangency_check(config: Configuration, structure: CyclicStructure) -> bool:
    """True iff for every position i the line to the r labeled -2i supports the hull at x_i alone."""
    n = structure.modulus
    for pos in range(n):
        x = structure.x_point(config, pos)
        try:
            r = structure.r_point(config, -2 * pos)
        except InvalidInput:
            return False
        line = join(x, r)
        others = [p for p in config.base_points() if p != x]
        if any(incident(p, line) for p in others):
            return False
        if not _supports(line, others):
            return False
    return True


def check_alternation(bconfig: BipartiteConfiguration) -> bool:
    """True iff all base points are hull vertices and hull colors alternate."""
    base = list(bconfig.base_points())
    hull = convex_hull(base)
    if len(hull) != len(base):
        return False
    colors = [bconfig.is_blue(i) for i in hull]
    return all(colors[t] != colors[(t + 1) % len(colors)] for t in range(len(colors)))


def extract_bipartite_structure(bconfig: BipartiteConfiguration) -> CyclicStructure:
    """Bipartite labeling with odd residues mod 2n; only mixed-color pairs constrain it."""
    report = verify_bipartite(bconfig)
    if not report.ok:
        raise PiercingViolation(report)
    base = list(bconfig.base_points())
    modulus = len(base)
    hull = convex_hull(base)
    if len(hull) != modulus:
        raise ConvexPositionViolation(
            f"hypothesis holds but only {len(hull)} of {modulus} base points are hull vertices"
        )
    colors = [bconfig.is_blue(i) for i in hull]
    if not all(colors[t] != colors[(t + 1) % modulus] for t in range(modulus)):
        raise InconsistentLabeling("hull colors do not alternate")
    xs = [base[i] for i in hull]
    odd = [s for s in range(modulus) if s % 2 == 1]
    r_by_label = _extract_structure(
        xs, bconfig.piercers, modulus, odd, lambda a, b: (a + b) % 2 == 1
    )
    return CyclicStructure(modulus, tuple(hull), r_by_label)
