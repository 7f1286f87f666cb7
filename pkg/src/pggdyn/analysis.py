"""Structural results: root-count census, one-or-two predictor, tangency locus.

The census table lists, for each combination of boundary-pinned
parameters, the set of equilibrium counts that random draws of the free
parameters can produce.  Entries were cross-checked against exact
rational-arithmetic sign scans; see the table literal below.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .equilibria import RootFinderConfig, find_equilibria
from .gain import incentive_part_second_derivative
from .montecarlo import (
    CHUNK,
    DEFAULT_AB_RANGES,
    SamplingRanges,
    _chunk_block,
    _open_uniform,
)
from .params import GameParameters

__all__ = [
    "Pin",
    "CensusCase",
    "CensusReport",
    "census_case",
    "census_check",
    "baseline_upturned",
    "incentive_part_concave",
    "OneOrTwo",
    "one_or_two",
    "TangencyPoint",
    "tangency_locus",
    "tangency_locus_q",
    "tangency_excluded_branch",
    "SingularAtHalf",
    "concavity_sensitivities",
]


class Pin(enum.Enum):
    """A parameter pinned to a boundary value for the census."""

    DELTA0 = ("delta", 0.0)
    OMEGA0 = ("omega", 0.0)
    OMEGA1 = ("omega", 1.0)
    MU0 = ("mu", 0.0)
    MU1 = ("mu", 1.0)
    Q0 = ("q", 0.0)

    @property
    def field_name(self) -> str:
        return self.value[0]

    @property
    def pinned_value(self) -> float:
        return self.value[1]


_CROSSED = ({Pin.OMEGA0, Pin.OMEGA1}, {Pin.MU0, Pin.MU1})

# Allowed equilibrium counts per pin combination, free parameters drawn
# from the strict interior.  Four cells differ from the source table;
# each correction is backed by an exact-arithmetic witness:
#   delta0+q0   {2}   -> {1,2}: for interior mu the quadratic has exactly
#                        one root in [0,1] (the second sits beyond 1).
#   omega0+mu1  {0,2} -> {0,1,2,3}: gain(0) = 1 - b*delta*q changes sign
#                        with the draw, so odd counts occur; never 4.
#   omega1+mu0  {1}   -> {1,2}: x = 0 is an exact root and an interior
#                        stable root generically coexists.
#   mu0+q0      {2,4} -> {2,3,4}: 0 and 1 are exact roots and the parity
#                        of the interior count is not constrained.
_CENSUS_TABLE: dict[frozenset, frozenset] = {
    frozenset({Pin.DELTA0}): frozenset({1}),
    frozenset({Pin.OMEGA0}): frozenset({0, 1, 2, 3}),
    frozenset({Pin.OMEGA1}): frozenset({1}),
    frozenset({Pin.MU0}): frozenset({0, 2, 4}),
    frozenset({Pin.MU1}): frozenset({0, 1, 2, 3, 4}),
    frozenset({Pin.Q0}): frozenset({1, 3}),
    frozenset({Pin.DELTA0, Pin.OMEGA0}): frozenset({1}),
    frozenset({Pin.DELTA0, Pin.OMEGA1}): frozenset({1}),
    frozenset({Pin.DELTA0, Pin.MU0}): frozenset({1, 2}),
    frozenset({Pin.DELTA0, Pin.MU1}): frozenset({1, 2}),
    frozenset({Pin.DELTA0, Pin.Q0}): frozenset({1, 2}),
    frozenset({Pin.OMEGA0, Pin.MU0}): frozenset({0, 2}),
    frozenset({Pin.OMEGA0, Pin.MU1}): frozenset({0, 1, 2, 3}),
    frozenset({Pin.OMEGA0, Pin.Q0}): frozenset({1, 3}),
    frozenset({Pin.OMEGA1, Pin.MU0}): frozenset({1, 2}),
    frozenset({Pin.OMEGA1, Pin.MU1}): frozenset({1}),
    frozenset({Pin.OMEGA1, Pin.Q0}): frozenset({1}),
    frozenset({Pin.MU0, Pin.Q0}): frozenset({2, 3, 4}),
    frozenset({Pin.MU1, Pin.Q0}): frozenset({1, 3}),
}

_CARVEOUT_BAND = 1e-12  # |mu - b q delta| band excluded from the omega=1 cell


@dataclass(frozen=True)
class CensusCase:
    """One cell of the census: pinned parameters and admissible counts."""

    constraints: frozenset
    allowed_counts: frozenset

    def __post_init__(self) -> None:
        for crossed in _CROSSED:
            if crossed <= self.constraints:
                names = " and ".join(sorted(p.name for p in crossed))
                raise ValueError(f"incompatible constraints: {names}")
        expected = _CENSUS_TABLE.get(frozenset(self.constraints))
        if expected is None:
            raise ValueError("constraints do not name a census table cell")
        if frozenset(self.allowed_counts) != expected:
            raise ValueError(
                f"allowed_counts {set(self.allowed_counts)} does not match the "
                f"table cell {set(expected)}"
            )

    @property
    def name(self) -> str:
        order = [Pin.DELTA0, Pin.OMEGA0, Pin.OMEGA1, Pin.MU0, Pin.MU1, Pin.Q0]
        return "+".join(p.name.lower() for p in order if p in self.constraints)


def census_case(*pins: Pin) -> CensusCase:
    key = frozenset(pins)
    if key not in _CENSUS_TABLE:
        for crossed in _CROSSED:
            if crossed <= key:
                names = " and ".join(sorted(p.name for p in crossed))
                raise ValueError(f"incompatible constraints: {names}")
        raise ValueError("constraints do not name a census table cell")
    return CensusCase(constraints=key, allowed_counts=_CENSUS_TABLE[key])


def all_census_cases() -> list[CensusCase]:
    """Every diagonal and off-diagonal cell, crossed pairs excluded."""
    return [CensusCase(k, v) for k, v in _CENSUS_TABLE.items()]


@dataclass
class CensusReport:
    case: CensusCase
    draws: int = 0
    observed: Counter = field(default_factory=Counter)
    carveout: Counter = field(default_factory=Counter)

    @property
    def passed(self) -> bool:
        return set(self.observed) <= set(self.case.allowed_counts)

    def merge(self, other: "CensusReport") -> "CensusReport":
        if other.case != self.case:
            raise ValueError("reports for different cases cannot merge")
        out = CensusReport(case=self.case)
        out.draws = self.draws + other.draws
        out.observed = self.observed + other.observed
        out.carveout = self.carveout + other.carveout
        return out


_CENSUS_CFG = RootFinderConfig(grid_points=1024)
_D_RANGE = (3, 12)


def _census_draw(case: CensusCase, seed: int, index: int,
                 ranges: SamplingRanges,
                 ab_ranges) -> GameParameters:
    block = _chunk_block(seed, index // CHUNK)
    u = block[index % CHUNK]
    d = _D_RANGE[0] + int(u[8] * (_D_RANGE[1] - _D_RANGE[0] + 1))
    d = min(d, _D_RANGE[1])
    kw = dict(
        d=d,
        omega=_open_uniform(u[0], *ranges.omega),
        mu=_open_uniform(u[1], *ranges.mu),
        delta=_open_uniform(u[2], *ranges.delta),
        c=_open_uniform(u[3], *ranges.c),
        r=_open_uniform(u[4], ranges.r[0], ranges.r[1] if ranges.r[1] is not None else float(d)),
        q=_open_uniform(u[5], *ranges.q),
        a_lev=_open_uniform(u[6], *ab_ranges[0]),
        b_lev=_open_uniform(u[7], *ab_ranges[1]),
        mode="census",
    )
    for pin in case.constraints:
        kw[pin.field_name] = pin.pinned_value
    return GameParameters(**kw)


def census_check(case: CensusCase, samples: int, seed: int,
                 ranges: SamplingRanges = SamplingRanges(),
                 ab_ranges=DEFAULT_AB_RANGES,
                 cfg: RootFinderConfig = _CENSUS_CFG,
                 start: int = 0) -> CensusReport:
    """Sample the cell and report observed root counts and a pass flag.

    The pinned values are substituted exactly; everything else is drawn
    from the strict interior.  For the omega=1 cells, draws inside the
    mu = b q delta band are tallied under ``carveout`` and do not count
    toward the pass flag (the count at exact equality is recorded by the
    tests, not asserted).
    """
    report = CensusReport(case=case)
    omega_one = Pin.OMEGA1 in case.constraints
    for i in range(start, start + samples):
        params = _census_draw(case, seed, i, ranges, ab_ranges)
        n = len(find_equilibria(params, cfg))
        report.draws += 1
        if omega_one:
            pivot = params.b_lev * params.q * params.delta
            if abs(params.mu - pivot) <= _CARVEOUT_BAND * max(1.0, pivot):
                report.carveout[n] += 1
                continue
        report.observed[n] += 1
    return report


# --- predictors --------------------------------------------------------


def baseline_upturned(params: GameParameters) -> bool:
    """True iff the quadratic side of the equilibrium balance opens upward:
    c (2 (d-1) q r - d + r) / d > 0, strictly."""
    p = params
    return p.c * (2.0 * (p.d - 1) * p.q * p.r - p.d + p.r) / p.d > 0.0


def incentive_part_concave(params: GameParameters, grid: int = 4096) -> bool:
    """True iff the incentive part's second derivative is negative at every
    point of a uniform grid on [0, 1] (endpoints included)."""
    xs = np.linspace(0.0, 1.0, grid + 1)
    return bool(np.all(incentive_part_second_derivative(xs, params) < 0.0))


class OneOrTwo(enum.Enum):
    ONE = 1
    TWO = 2
    INCONCLUSIVE = 0


def one_or_two(params: GameParameters, grid: int = 4096) -> OneOrTwo:
    """Predict whether the dynamics has exactly one or exactly two equilibria.

    Requires the upturned-quadratic and concave-incentive hypotheses;
    otherwise INCONCLUSIVE.  With them, mu >= b delta q (1-omega) forces a
    single equilibrium (the difference of the two sides is convex,
    non-positive at 0 and positive at 1).  For two equilibria the converse
    inequality alone is not sufficient: the convex difference must also be
    pushed below zero somewhere, which q r (d-1) > d - r certifies (the
    quadratic side is then negative just left of its interior zero while
    the incentive side is positive).  Draws failing the certificate return
    INCONCLUSIVE rather than overclaiming.
    """
    if not baseline_upturned(params) or not incentive_part_concave(params, grid):
        return OneOrTwo.INCONCLUSIVE
    p = params
    pivot = p.b_lev * p.delta * p.q * (1.0 - p.omega)
    if p.mu >= pivot:
        return OneOrTwo.ONE
    if p.q * p.r * (p.d - 1) > p.d - p.r:
        return OneOrTwo.TWO
    return OneOrTwo.INCONCLUSIVE


# --- tangency locus of the mirrored curvature humps --------------------


class SingularAtHalf(ValueError):
    """The locus formulas degenerate on the symmetry axis x = 1/2."""


@dataclass(frozen=True)
class TangencyPoint:
    """Locus values (q*, omega*) at which the curvature humps touch.

    The tangency condition is a quadratic in q; its two roots split into
    an admissible branch (this one: it reaches into the valid mutation
    range, peaking at (d+1)/(2(d-1)) on the symmetry axis) and an
    excluded branch that stays above 1/2 for every x.
    """

    x: float
    q_star: float
    omega_star: float


def _locus_sqrt(x: float, d: int) -> float:
    t = x * x - x
    return math.sqrt(d * (d - 4) * (1.0 - 2.0 * x) ** 2 + 4.0 * t * (t + 4.0) + 4.0)


def _check_locus_args(x: float, d: int) -> None:
    if d < 5:
        raise ValueError("tangency locus requires d >= 5")
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie strictly inside (0, 1)")


def tangency_locus(x: float, d: int) -> TangencyPoint:
    """Admissible branch of the tangency locus at abscissa x.

    Valid for d >= 5 and x in (0, 1) away from 1/2; the q value is
    regular on the symmetry axis but the omega expression is genuinely
    singular there.
    """
    _check_locus_args(x, d)
    if abs(x - 0.5) < 1e-9:
        raise SingularAtHalf("the omega formula is singular at x = 1/2")
    s = _locus_sqrt(x, d)
    q_star = (d + 1) * (d - 2.0 - 2.0 * x * (x - 1.0) - s) / (2.0 * (d - 2) * (d - 1))
    num = 2.0 * (x - 1.0) ** 3 * x ** d
    den = x * (1.0 - x) ** d * (-s + (d - 2) * (2.0 * x - 1.0)) + num
    if den == 0.0:
        raise SingularAtHalf("omega denominator vanished")
    return TangencyPoint(x=x, q_star=q_star, omega_star=num / den)


def tangency_locus_q(x: float, d: int) -> float:
    """q of the admissible branch alone; defined on all of (0, 1),
    including the symmetry axis where it peaks at (d+1)/(2(d-1))."""
    _check_locus_args(x, d)
    s = _locus_sqrt(x, d)
    return (d + 1) * (d - 2.0 - 2.0 * x * (x - 1.0) - s) / (2.0 * (d - 2) * (d - 1))


def tangency_excluded_branch(x: float, d: int) -> float:
    """The locus equation's second root for q; above 1/2 for every x, so
    it never names a valid mutation probability.  Its minimum sits on
    the symmetry axis at (d+1)/(2(d-2))."""
    _check_locus_args(x, d)
    s = _locus_sqrt(x, d)
    return (d + 1) * (d - 2.0 - 2.0 * x * (x - 1.0) + s) / (2.0 * (d - 2) * (d - 1))


def concavity_sensitivities(x: float, params: GameParameters) -> tuple[float, float]:
    """Partial derivatives of the normalised incentive curvature.

    Sensitivities of the leverage-free curvature (incentive part second
    derivative divided by the positive factor d * delta) with respect to
    omega and q.  The q-derivative equals
    (d-1) ((1-omega) x^(d-2) + omega (1-x)^(d-2)) and is positive; the
    omega-derivative vanishes at x = 1/2 and is negative to its left.
    """
    d, q, w = params.d, params.q, params.omega
    xm = (1.0 - x) ** (d - 2)
    xp = x ** (d - 2)
    d_omega = xp * ((d + 1) * x - (d - 1) * q) - xm * ((d + 1) * (1.0 - x) - (d - 1) * q)
    d_q = (d - 1) * ((1.0 - w) * xp + w * xm)
    return d_omega, d_q
