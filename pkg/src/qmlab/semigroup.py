"""Plane semigroups: lattice and sector, the constructive saturation bound and
a brute-force membership check, plus an invariant-point model of closing a
ring under the Serre-type derivative."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateLatticeError,
    InconclusiveError,
    InvalidRuleError,
    NonconvexSectorError,
    NonStationaryError,
    PreconditionError,
)

Point = tuple[Fraction, Fraction]


def _pt(p) -> Point:
    x, y = p
    return (Fraction(x), Fraction(y))


def _cross(u: Point, v: Point) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _dot(u: Point, v: Point) -> Fraction:
    return u[0] * v[0] + u[1] * v[1]


def parse_points(text: str) -> list[Point]:
    """"2,1;1,2;1/2,3" -> [(2, 1), (1, 2), (1/2, 3)]."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad point {chunk!r}")
        out.append((Fraction(parts[0].strip()), Fraction(parts[1].strip())))
    return out


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0, a


def _hermite_basis(vectors: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], tuple[int, int]] | None:
    """Basis ((g1, y1), (0, g2)) of the integer span, or None if rank < 2."""
    g1, w1 = 0, (0, 0)
    rest = []
    for v in vectors:
        if v[0] == 0:
            rest.append(v)
            continue
        if g1 == 0:
            g1, w1 = v[0], v
            continue
        s, t, g = _xgcd(g1, v[0])
        new_w1 = (g, s * w1[1] + t * v[1])
        # the complementary combination has zero first coordinate
        rest.append((0, (v[0] // g) * w1[1] - (g1 // g) * v[1]))
        g1, w1 = g, new_w1
    if g1 == 0:
        return None
    if g1 < 0:
        g1, w1 = -g1, (-w1[0], -w1[1])
    g2 = 0
    for _, y in rest:
        g2 = math.gcd(g2, y)
    if g2 == 0:
        return None
    return (w1[0], w1[1] % g2), (0, g2)


@dataclass(frozen=True)
class SemigroupInstance:
    generators: tuple[Point, ...]
    lattice_basis: tuple[Point, Point]
    lower_ray: Point
    upper_ray: Point
    flat: bool = False

    def new_coordinates(self, p) -> Point:
        """(x', y') with p = x' * lower_ray + y' * upper_ray."""
        p = _pt(p)
        u, v = self.lower_ray, self.upper_ray
        det = _cross(u, v)
        return (_cross(p, v) / det, _cross(u, p) / det)

    def from_new_coordinates(self, c) -> Point:
        u, v = self.lower_ray, self.upper_ray
        return (c[0] * u[0] + c[1] * v[0], c[0] * u[1] + c[1] * v[1])

    def in_sector(self, p) -> bool:
        p = _pt(p)
        return _cross(self.lower_ray, p) >= 0 and _cross(p, self.upper_ray) >= 0

    def lattice_coordinates(self, p) -> tuple[int, int] | None:
        (b1x, b1y), (_, b2y) = self.lattice_basis
        p = _pt(p)
        s = p[0] / b1x
        if s.denominator != 1:
            return None
        t = (p[1] - s * b1y) / b2y
        if t.denominator != 1:
            return None
        return int(s), int(t)

    def interior_generators(self) -> list[Point]:
        return [g for g in self.generators if g not in (self.lower_ray, self.upper_ray)]


def sector_and_lattice(generators: Iterable) -> SemigroupInstance:
    gens = tuple(dict.fromkeys(_pt(g) for g in generators if any(_pt(g))))
    if len(gens) < 2:
        raise DegenerateLatticeError("need at least two nonzero generators")
    scale = math.lcm(*(c.denominator for g in gens for c in g))
    ints = [(int(g[0] * scale), int(g[1] * scale)) for g in gens]
    hb = _hermite_basis(ints)
    if hb is None:
        raise DegenerateLatticeError("generators span a lattice of rank < 2")
    basis = tuple((Fraction(v[0], scale), Fraction(v[1], scale)) for v in hb)

    def shortest(ray_members):
        return min(ray_members, key=lambda g: _dot(g, g))

    for u in gens:
        if any(_cross(u, g) < 0 for g in gens):
            continue
        for v in gens:
            if _cross(u, v) > 0 and all(_cross(g, v) >= 0 for g in gens):
                lower = shortest([g for g in gens if _cross(u, g) == 0 and _dot(u, g) > 0])
                upper = shortest([g for g in gens if _cross(v, g) == 0 and _dot(v, g) > 0])
                return SemigroupInstance(gens, basis, lower, upper)
    for u in gens:
        if all(_cross(u, g) >= 0 for g in gens):
            opposite = [g for g in gens if _cross(u, g) == 0 and _dot(u, g) < 0]
            if opposite:
                return SemigroupInstance(gens, basis, u, shortest(opposite), flat=True)
    raise NonconvexSectorError("generators span a sector with angle > pi")


def _require_pointed(instance: SemigroupInstance) -> None:
    if instance.flat:
        raise NonconvexSectorError(
            "sector of angle exactly pi: the extremal generators are not a basis"
        )


def residue_orders(instance: SemigroupInstance) -> list[int]:
    """Least a_i > 0 with a_i P_i in the span of the two extremal generators."""
    out = []
    for g in instance.interior_generators():
        x, y = instance.new_coordinates(g)
        out.append(math.lcm(x.denominator, y.denominator))
    return out


def saturation_bound_coordinates(instance: SemigroupInstance, variant: str = "strict") -> Point:
    """(X0, Y0) in the coordinates where the extremal generators are (1,0), (0,1).

    Both maxima run over residue tuples with nonnegative entries of nonnegative
    coordinates, so they sit at the top corner of the residue box. "strict"
    uses residues < a_i on both axes; "printed" lets the ordinate use <= a_i.
    """
    _require_pointed(instance)
    if variant not in ("strict", "printed"):
        raise ValueError(f"unknown variant {variant!r}")
    x0 = y0 = Fraction(0)
    for g, a in zip(instance.interior_generators(), residue_orders(instance)):
        x, y = instance.new_coordinates(g)
        x0 += (a - 1) * x
        y0 += (a if variant == "printed" else a - 1) * y
    return (x0, y0)


def saturation_bound(instance: SemigroupInstance, variant: str = "strict") -> Point:
    """A point A with (A + S) intersect the lattice contained in the semigroup."""
    return instance.from_new_coordinates(saturation_bound_coordinates(instance, variant))


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    counterexample: Point | None
    checked: int

    def __bool__(self):
        return self.ok


DEFAULT_MAX_STATES = 2_000_000


def _window_targets(instance: SemigroupInstance, A: Point, radius) -> list[Point]:
    (b1x, b1y), (_, b2y) = instance.lattice_basis
    r = Fraction(radius)
    lo_x, hi_x = A[0] - r, A[0] + r
    lo_y, hi_y = A[1] - r, A[1] + r
    targets = []
    for s in range(math.ceil(lo_x / b1x), math.floor(hi_x / b1x) + 1):
        base = s * b1y
        for t in range(math.ceil((lo_y - base) / b2y), math.floor((hi_y - base) / b2y) + 1):
            p = (s * b1x, base + t * b2y)
            if instance.in_sector((p[0] - A[0], p[1] - A[1])):
                targets.append(p)
    return targets


def semigroup_members(
    instance: SemigroupInstance, level: Fraction, max_states: int = DEFAULT_MAX_STATES
) -> set[tuple[int, int]]:
    """Lattice coordinates of all nonnegative generator sums with height <= level.

    Height is the sum of the two new coordinates, positive on every generator.
    """
    _require_pointed(instance)
    steps = []
    for g in instance.generators:
        x, y = instance.new_coordinates(g)
        steps.append((instance.lattice_coordinates(g), x + y))
    seen = {(0, 0)}
    frontier = [((0, 0), Fraction(0))]
    while frontier:
        nxt = []
        for (s, t), h in frontier:
            for (ds, dt), dh in steps:
                hh = h + dh
                if hh > level:
                    continue
                key = (s + ds, t + dt)
                if key not in seen:
                    seen.add(key)
                    nxt.append((key, hh))
        if len(seen) > max_states:
            raise InconclusiveError(f"membership search exceeded {max_states} states")
        frontier = nxt
    return seen


def verify_bound(
    instance: SemigroupInstance,
    A,
    window_radius=10,
    max_states: int = DEFAULT_MAX_STATES,
) -> VerifyResult:
    """Check every lattice point of A + S in the box |P - A|_inf <= radius lies in G."""
    if window_radius < 1:
        raise PreconditionError("window radius must be at least 1")
    A = _pt(A)
    targets = _window_targets(instance, A, window_radius)
    if not targets:
        return VerifyResult(True, None, 0)
    height = lambda p: sum(instance.new_coordinates(p))  # noqa: E731
    targets.sort(key=lambda p: (height(p), p))
    members = semigroup_members(instance, height(targets[-1]), max_states)
    for p in targets:
        if instance.lattice_coordinates(p) not in members:
            return VerifyResult(False, p, len(targets))
    return VerifyResult(True, None, len(targets))


@dataclass(frozen=True)
class BoundReport:
    strict: Point
    printed: Point
    strict_ok: VerifyResult
    printed_ok: VerifyResult

    @property
    def chosen(self) -> str:
        return "strict" if self.strict_ok else "printed"

    @property
    def point(self) -> Point:
        return self.strict if self.strict_ok else self.printed

    @property
    def ok(self) -> bool:
        return bool(self.strict_ok or self.printed_ok)


def arbitrate_bound(instance: SemigroupInstance, window_radius=10) -> BoundReport:
    """Compute both residue-range variants and let the brute-force check decide."""
    strict = saturation_bound(instance, "strict")
    printed = saturation_bound(instance, "printed")
    return BoundReport(
        strict,
        printed,
        verify_bound(instance, strict, window_radius),
        verify_bound(instance, printed, window_radius),
    )


# invariant-point saturation model


@dataclass(frozen=True)
class InvariantPoint:
    """(half-weight, vanishing order + half-weight) with slope parameter kappa."""

    i1: Fraction
    i2: Fraction
    kappa: Fraction

    @property
    def xy(self) -> tuple[Fraction, Fraction]:
        return (self.i1, self.i2)

    def on_critical_line(self) -> bool:
        return self.i2 == (2 * self.kappa + 1) * self.i1


def invariant_point(k: int, order, kappa) -> InvariantPoint:
    if k < 0 or k % 2:
        raise PreconditionError(f"weight {k} must be even and nonnegative")
    kappa = Fraction(kappa)
    if kappa <= 0:
        raise PreconditionError("kappa must be positive")
    half = Fraction(k, 2)
    if Fraction(order) + half < 0:
        raise PreconditionError(f"pole of order {-order} exceeds half the weight {k}")
    return InvariantPoint(half, Fraction(order) + half, kappa)


JumpRule = Callable[[InvariantPoint], object]


def constant_rule(beta) -> JumpRule:
    beta = Fraction(beta)
    if beta < 0:
        raise InvalidRuleError(f"beta = {beta} < 0")
    return lambda p: beta


def dphi_step(p: InvariantPoint, jump_rule: JumpRule) -> InvariantPoint:
    beta = Fraction(0)
    if p.on_critical_line():
        beta = Fraction(jump_rule(p))
        if beta < 0:
            raise InvalidRuleError(f"jump rule returned beta = {beta} < 0 at {p.xy}")
    return InvariantPoint(p.i1 + 1, p.i2 + beta, p.kappa)


@dataclass(frozen=True)
class Stage:
    index: int
    occupied: frozenset[tuple[int, int]]
    missing_lines: frozenset[int]
    x_threshold: int | None
    y_threshold: int | None


@dataclass(frozen=True)
class SaturationState:
    stages: tuple[Stage, ...]
    n0: int
    window: tuple[int, int]
    kappa: Fraction

    @property
    def final(self) -> Stage:
        return self.stages[self.n0]

    def to_tsv(self) -> str:
        lines = ["stage\toccupied\tmissing_count\tmissing_lines\tx_threshold\ty_threshold"]
        for s in self.stages:
            lines.append(
                f"{s.index}\t{len(s.occupied)}\t{len(s.missing_lines)}\t"
                f"{_compress(s.missing_lines)}\t{_na(s.x_threshold)}\t{_na(s.y_threshold)}"
            )
        lines.append(f"n0\t{self.n0}")
        lines.append(f"window\t{self.window[0]}x{self.window[1]}")
        return "\n".join(lines)


def _na(v):
    return "-" if v is None else str(v)


def _compress(values: Iterable[int]) -> str:
    vals = sorted(values)
    if not vals:
        return "-"
    runs, start, prev = [], vals[0], vals[0]
    for v in vals[1:]:
        if v != prev + 1:
            runs.append((start, prev))
            start = v
        prev = v
    runs.append((start, prev))
    return ",".join(str(a) if a == b else f"{a}-{b}" for a, b in runs)


def _add_generator(grid: np.ndarray, t: tuple[int, int]) -> None:
    """Close the (already additively closed) grid under adding multiples of t."""
    dx, dy = t
    W, H = grid.shape
    while dx < W and dy < H:
        grid[dx:, dy:] |= grid[: W - dx, : H - dy]
        dx, dy = 2 * dx, 2 * dy


def _grid_stage(index: int, grid: np.ndarray) -> Stage:
    W, H = grid.shape
    occupied_rows = grid.any(axis=0)
    missing = frozenset(int(y) for y in np.nonzero(~occupied_rows)[0])
    full_right = [bool(grid[y + 1 :, y].all()) for y in range(H)]
    y_thr = None
    for y in range(H - 1, -1, -1):
        if not full_right[y]:
            break
        y_thr = y
    x_thr = None
    if y_thr is not None:
        x_thr = 0
        for y in range(y_thr):
            if y in missing:
                continue
            col = grid[:, y]
            empty = np.nonzero(~col)[0]
            # smallest x0 with col[x0:] all occupied
            x_thr = max(x_thr, int(empty[-1]) + 1 if len(empty) else 0)
    occupied = frozenset((int(x), int(y)) for x, y in zip(*np.nonzero(grid)))
    return Stage(index, occupied, missing, x_thr, y_thr)


DEFAULT_WINDOW = (200, 200)


def saturate(
    initial: Iterable,
    kappa,
    jump_rule: JumpRule,
    stage_cap: int = 20,
    window: tuple[int, int] = DEFAULT_WINDOW,
) -> SaturationState:
    """Close point sets under addition and the derivative step until no new
    horizontal line gets occupied for two consecutive stages."""
    kappa = Fraction(kappa)
    if kappa <= 0:
        raise PreconditionError("kappa must be positive")
    pts = []
    for p in initial:
        xy = p.xy if isinstance(p, InvariantPoint) else _pt(p)
        if any(c.denominator != 1 or c < 0 for c in xy):
            raise PreconditionError(f"invariant point {xy} must have nonnegative integer coordinates")
        pts.append((int(xy[0]), int(xy[1])))
    if not pts:
        raise PreconditionError("initial set is empty")
    if (2, 0) not in pts:
        raise PreconditionError("initial set must contain the omega point (2, 0)")
    W, H = window
    grid = np.zeros((W + 1, H + 1), dtype=bool)
    grid[0, 0] = True
    for p in pts:
        if p != (0, 0) and p[0] <= W and p[1] <= H and not grid[p]:
            _add_generator(grid, p)

    stages = [_grid_stage(0, grid)]
    slope = 2 * kappa + 1
    n0 = None
    while n0 is None:
        j = len(stages)
        if j > stage_cap:
            raise NonStationaryError(f"missing lines still changing after {stage_cap} stages")
        # the unit is killed by the derivative; on-line points jump instead of shifting
        src = grid.copy()
        src[0, 0] = False
        jumps = []
        for x in range(1, W + 1):
            y = slope * x
            if y.denominator == 1 and y <= H and grid[x, int(y)]:
                src[x, int(y)] = False
                jumps.append(dphi_step(InvariantPoint(Fraction(x), y, kappa), jump_rule))
        images = np.zeros_like(grid)
        images[1:, :] = src[:-1, :]
        for q in jumps:
            if q.i1.denominator == 1 and q.i2.denominator == 1 and q.i1 <= W and q.i2 <= H:
                images[int(q.i1), int(q.i2)] = True
        for x, y in zip(*np.nonzero(images & ~grid)):
            if not grid[x, y]:
                _add_generator(grid, (int(x), int(y)))
        stage = _grid_stage(j, grid)
        if not stage.missing_lines <= stages[-1].missing_lines:
            raise AssertionError("missing-line sets must shrink")
        stages.append(stage)
        if j >= 2 and stages[j].missing_lines == stages[j - 1].missing_lines == stages[j - 2].missing_lines:
            n0 = j - 2
    return SaturationState(tuple(stages), n0, window, kappa)



@dataclass(frozen=True)
class Scenario:
    initial: tuple[tuple[int, int], ...]
    kappa: Fraction
    beta: Fraction

    def run(self, stage_cap: int = 20, window: tuple[int, int] = DEFAULT_WINDOW) -> SaturationState:
        return saturate(self.initial, self.kappa, constant_rule(self.beta), stage_cap, window)


BUNDLED_SCENARIOS = {
    "no-jump": Scenario(((2, 0), (3, 0)), Fraction(1), Fraction(1)),
    "on-line-jump": Scenario(((2, 0), (3, 0), (1, 3)), Fraction(1), Fraction(1)),
    "steep-line": Scenario(((2, 0), (3, 0), (1, 5)), Fraction(2), Fraction(2)),
}
