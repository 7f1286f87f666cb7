"""Bifurcation diagrams in the additive mutation rate.

The equilibrium condition is linear in mu, so each equilibrium abscissa x
(away from 1/2) corresponds to exactly one mu.  Plotting that inversion
over [0, 1] gives the bifurcation diagram: equilibria at a given mu0 are
the intersections of the curve with the horizontal line mu = mu0.  The
curve has a vertical asymptote at x = 1/2; saddle-node bifurcations sit
at its interior extrema.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .analysis import SingularAtHalf
from .equilibria import RootFinderConfig, find_equilibria
from .gain import compiled
from .params import GameParameters

__all__ = [
    "Side",
    "BifurcationSample",
    "DiagramSignature",
    "BifurcationDiagram",
    "SingularAtHalf",
    "mu_of_x",
    "build_diagram",
    "saddle_nodes",
    "horizontal_intersections",
]

_WINDOW_DEFAULT = 1e-6


class Side(enum.Enum):
    LEFT_OF_HALF = "left"
    RIGHT_OF_HALF = "right"


@dataclass(frozen=True)
class BifurcationSample:
    x: float
    mu_value: float
    side: Side


@dataclass(frozen=True)
class DiagramSignature:
    """Discrete shape descriptor; two diagrams are of the same type iff
    their signatures are equal."""

    left_criticals: int
    right_criticals: int
    endpoint_signs: tuple[int, int]
    axis_crossings: int


@dataclass(frozen=True)
class BifurcationDiagram:
    samples: tuple[BifurcationSample, ...]  # clipped to the unit mu-square
    critical_points: tuple[tuple[float, float], ...]
    signature: DiagramSignature


def _mu_free_part(pre, x):
    """Gain with the additive-mutation term removed (array path)."""
    x = np.asarray(x, dtype=float)
    return pre.value(x) + pre.mu * (2.0 * x - 1.0)


def _mu_free_scalar(pre, x: float) -> float:
    return pre.value_scalar(x) + pre.mu * (2.0 * x - 1.0)


def mu_of_x(x, params: GameParameters, exclusion_window: float = 1e-9):
    """The unique additive mutation rate making x an equilibrium.

    Defined on [0, 1] away from the asymptote at 1/2.
    """
    pre = compiled(params)
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa - 0.5) < exclusion_window):
        raise SingularAtHalf("mu_of_x undefined within the window at x = 1/2")
    out = _mu_free_part(pre, xa) / (2.0 * xa - 1.0)
    if np.ndim(x) == 0:
        return float(out)
    return out


def _curve_slope_numerator(pre, x):
    """F(x) = d * [N'(x)(2x-1) - 2 N(x)] where N is the mu-free gain part.

    Shares the sign of d(mu_of_x)/dx on each side of 1/2 and is smooth
    across it, so its sign changes locate the curve's extrema.
    """
    x = np.asarray(x, dtype=float)
    n_val = _mu_free_part(pre, x)
    n_der = pre.deriv1(x) + 2.0 * pre.mu
    return pre.d * (n_der * (2.0 * x - 1.0) - 2.0 * n_val)


def _curve_slope_numerator_scalar(pre, x: float) -> float:
    n_val = _mu_free_scalar(pre, x)
    n_der = pre.deriv1_scalar(x) + 2.0 * pre.mu
    return pre.d * (n_der * (2.0 * x - 1.0) - 2.0 * n_val)


def _bisect_scalar(f, lo, hi, flo, tol=1e-13):
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo < 0.0) != (fm < 0.0):
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _critical_points(params: GameParameters, grid: int,
                     exclusion_window: float) -> list[tuple[float, float]]:
    pre = compiled(params)
    xs = np.linspace(0.0, 1.0, grid + 1)
    keep = np.abs(xs - 0.5) >= max(exclusion_window, 1e-9)
    xs = xs[keep]
    fv = _curve_slope_numerator(pre, xs)
    out = []
    sgn = np.sign(fv)
    for i in np.flatnonzero(sgn[:-1] * sgn[1:] < 0.0):
        lo, hi = float(xs[i]), float(xs[i + 1])
        if lo < 0.5 < hi:
            continue
        xc = _bisect_scalar(lambda t: _curve_slope_numerator_scalar(pre, t),
                            lo, hi, float(fv[i]))
        if 0.0 < xc < 1.0 and abs(xc - 0.5) > exclusion_window:
            out.append((xc, _mu_free_scalar(pre, xc) / (2.0 * xc - 1.0)))
    return out


def _axis_crossings(params: GameParameters, grid: int) -> int:
    """Sign changes of the mu-free gain part on (0, 1): crossings of mu = 0."""
    pre = compiled(params)
    xs = np.linspace(0.0, 1.0, grid + 1)
    sgn = np.sign(_mu_free_part(pre, xs))
    return int(np.count_nonzero(sgn[:-1] * sgn[1:] < 0.0))


def build_diagram(params: GameParameters, grid: int = 1024,
                  exclusion_window: float = _WINDOW_DEFAULT) -> BifurcationDiagram:
    """Sample the inversion curve on both sides of 1/2 and classify it.

    Samples are clipped to mu in [0, 1] (presentation parity with the
    unit square); the signature records the extremum counts per side,
    the signs of the curve at x = 0 and x = 1, and the number of
    crossings of the mu = 0 axis.
    """
    if grid < 512:
        raise ValueError("grid must be >= 512")
    if exclusion_window <= 0.0:
        raise SingularAtHalf("exclusion_window must be positive")
    pre = compiled(params)
    half = grid // 2
    left = np.linspace(0.0, 0.5 - exclusion_window, half)
    right = np.linspace(0.5 + exclusion_window, 1.0, half)
    samples = []
    for xs, side in ((left, Side.LEFT_OF_HALF), (right, Side.RIGHT_OF_HALF)):
        mu = _mu_free_part(pre, xs) / (2.0 * xs - 1.0)
        for xi, mi in zip(xs, mu):
            if 0.0 <= mi <= 1.0:
                samples.append(BifurcationSample(float(xi), float(mi), side))
    criticals = _critical_points(params, max(grid, 2048), exclusion_window)
    mu0 = _mu_free_scalar(pre, 0.0) / -1.0
    mu1 = _mu_free_scalar(pre, 1.0)
    sig = DiagramSignature(
        left_criticals=sum(1 for x, _ in criticals if x < 0.5),
        right_criticals=sum(1 for x, _ in criticals if x > 0.5),
        endpoint_signs=(int(np.sign(mu0)), int(np.sign(mu1))),
        axis_crossings=_axis_crossings(params, max(grid, 2048)),
    )
    return BifurcationDiagram(
        samples=tuple(samples),
        critical_points=tuple(criticals),
        signature=sig,
    )


def horizontal_intersections(params: GameParameters, mu0: float,
                             grid: int = 4096,
                             exclusion_window: float = _WINDOW_DEFAULT) -> int:
    """Number of intersections of the diagram curve with the line mu = mu0."""
    pre = compiled(params)
    half = grid // 2
    count = 0
    for xs in (np.linspace(0.0, 0.5 - exclusion_window, half),
               np.linspace(0.5 + exclusion_window, 1.0, half)):
        vals = _mu_free_part(pre, xs) / (2.0 * xs - 1.0) - mu0
        sgn = np.sign(vals)
        count += int(np.count_nonzero(sgn[:-1] * sgn[1:] < 0.0))
        count += int(np.count_nonzero(sgn == 0.0))
    return count


def saddle_nodes(params: GameParameters, grid: int = 4096,
                 exclusion_window: float = _WINDOW_DEFAULT,
                 mu_window: tuple[float, float] | None = None) -> list[tuple[float, float]]:
    """Interior extrema of the inversion curve: the saddle-node points.

    Each returned (x, mu) is a parameter value where two equilibria merge
    or are born: moving mu across it changes the equilibrium count by
    exactly two.  By default the full curve is reported, so mu values can
    fall outside the unit square; pass ``mu_window=(0, 1)`` to keep only
    the presentable ones.
    """
    points = _critical_points(params, grid, exclusion_window)
    if mu_window is None:
        return points
    lo, hi = mu_window
    return [(x, m) for x, m in points if lo < m < hi]


def count_change_at(params: GameParameters, mu_star: float,
                    eps: float = 1e-4,
                    cfg: RootFinderConfig = RootFinderConfig(grid_points=2048)) -> int:
    """Equilibrium-count jump |n(mu*+eps) - n(mu*-eps)| across mu*.

    Counts through the root finder when both probes carry a valid
    mutation rate, and through the diagram's horizontal-line
    intersections otherwise (the two agree wherever both apply).
    """
    counts = []
    for mu in (mu_star - eps, mu_star + eps):
        if 0.0 < mu < 1.0:
            counts.append(len(find_equilibria(params.replace(mu=mu), cfg)))
        else:
            counts.append(horizontal_intersections(params, mu))
    return abs(counts[1] - counts[0])
