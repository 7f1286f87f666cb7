"""Equilibria of xdot = gain(x): isolation, refinement, classification.

The gain function is a polynomial of degree d+1, but it never has more
than four roots in [0, 1].  A sign-scan over a uniform grid followed by
bisection and a guarded Newton polish is therefore reliable and cheap;
near-tangencies are picked up separately through local minima of |gain|.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .gain import compiled, quadratic_coefficients
from .params import GameParameters

__all__ = [
    "Stability",
    "Equilibrium",
    "EquilibriumSet",
    "RootFinderConfig",
    "Method",
    "MoreThanFourRoots",
    "NotAnEquilibrium",
    "WrongMode",
    "find_equilibria",
    "classify",
    "quadratic_equilibria",
    "incentive_threshold",
    "small_incentive_threshold",
]

_DERIV_TOL = 1e-8  # slope classification band, scaled by the gain magnitude
_DEDUP_SEP = 1e-8


class MoreThanFourRoots(RuntimeError):
    """More than four distinct roots survived dedup and a 4x grid retry."""


class NotAnEquilibrium(ValueError):
    """classify() was handed a point whose residual is too large."""


class WrongMode(ValueError):
    """Operation requires a different parameter regime (e.g. delta = 0)."""


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    DEGENERATE = "degenerate"


class Method(enum.Enum):
    CLOSED_FORM = "closed_form"
    GRID_BISECTION = "grid_bisection"


@dataclass(frozen=True)
class Equilibrium:
    """A root of the gain function with its stability label.

    ``boundary`` marks roots that were clamped onto 0 or 1.
    """

    x: float
    stability: Stability
    residual: float
    slope: float
    boundary: bool = False


@dataclass(frozen=True)
class EquilibriumSet:
    roots: tuple[Equilibrium, ...]
    method: Method
    companion: float | None = None  # closed-form root discarded as outside [0,1]

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def abscissae(self) -> np.ndarray:
        return np.array([r.x for r in self.roots])

    def stability_labels(self) -> tuple[Stability, ...]:
        return tuple(r.stability for r in self.roots)


@dataclass(frozen=True)
class RootFinderConfig:
    """Knobs of the grid scan.  The effective grid never drops below 64*d."""

    grid_points: int = 4096
    tol_x: float = 1e-13
    tol_residual: float = 1e-10
    tangency_tol: float = 1e-7

    def __post_init__(self) -> None:
        if self.grid_points < 16:
            raise ValueError("grid_points must be >= 16")
        for name in ("tol_x", "tol_residual", "tangency_tol"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")


_DEFAULT_CFG = RootFinderConfig()


def _bisect(f, lo: float, hi: float, flo: float, tol_x: float) -> float:
    while hi - lo > tol_x:
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


def _newton_polish(pre, x: float, lo: float, hi: float) -> float:
    for _ in range(4):
        f = pre.value_scalar(x)
        df = pre.deriv1_scalar(x)
        if df == 0.0:
            break
        step = f / df
        x_new = x - step
        if not (lo <= x_new <= hi):
            break
        x = x_new
        if abs(step) < 1e-16:
            break
    return x


from functools import lru_cache


@lru_cache(maxsize=16)
def _grid(n: int) -> np.ndarray:
    xs = np.linspace(0.0, 1.0, n + 1)
    xs.setflags(write=False)
    return xs


def _isolate(pre, n: int, cfg: RootFinderConfig) -> tuple[list[float], list[float], float]:
    """Scan an (n+1)-node grid; return (simple roots, tangent roots, scale)."""
    xs = _grid(n)
    g = pre.value(xs)
    scale = max(1.0, float(np.max(np.abs(g))))

    roots: list[float] = []
    tangents: list[float] = []

    node_zero = np.abs(g) <= 1e-14 * scale
    for i in np.flatnonzero(node_zero):
        roots.append(float(xs[i]))

    sgn = np.sign(g)
    sgn[node_zero] = 0.0
    change = sgn[:-1] * sgn[1:] < 0.0
    for i in np.flatnonzero(change):
        lo, hi = float(xs[i]), float(xs[i + 1])
        x0 = _bisect(pre.value_scalar, lo, hi, float(g[i]), cfg.tol_x)
        roots.append(_newton_polish(pre, x0, lo, hi))

    # near-tangency: local minimum of |g| below threshold with no sign change
    absg = np.abs(g)
    interior = np.arange(1, n)
    cand = interior[
        (absg[interior] <= cfg.tangency_tol * scale)
        & (absg[interior] <= absg[interior - 1])
        & (absg[interior] <= absg[interior + 1])
        & (sgn[interior - 1] == sgn[interior + 1])
        & (sgn[interior - 1] != 0.0)
    ]
    for i in cand:
        lo, hi = float(xs[i - 1]), float(xs[i + 1])
        dlo = pre.deriv1_scalar(lo)
        dhi = pre.deriv1_scalar(hi)
        if (dlo < 0.0) == (dhi < 0.0):
            continue
        xc = _bisect(pre.deriv1_scalar, lo, hi, dlo, cfg.tol_x)
        if abs(pre.value_scalar(xc)) <= cfg.tangency_tol * scale:
            tangents.append(xc)

    return roots, tangents, scale


def _dedup(roots: list[float], tangents: list[float]) -> list[tuple[float, bool]]:
    """Merge points closer than the separation floor; simple roots win ties."""
    tagged = sorted([(x, False) for x in roots] + [(x, True) for x in tangents])
    out: list[tuple[float, bool]] = []
    for x, is_tan in tagged:
        if out and x - out[-1][0] < _DEDUP_SEP:
            if out[-1][1] and not is_tan:
                out[-1] = (x, False)
            continue
        out.append((x, is_tan))
    return out


def _label(slope: float, scale: float, force_degenerate: bool = False) -> Stability:
    if force_degenerate:
        return Stability.DEGENERATE
    band = _DERIV_TOL * scale
    if slope < -band:
        return Stability.STABLE
    if slope > band:
        return Stability.UNSTABLE
    return Stability.DEGENERATE


def _make_equilibrium(pre, x: float, scale: float, tol_x: float,
                      is_tangent: bool) -> Equilibrium:
    boundary = False
    if x <= tol_x:
        x, boundary = 0.0, True
    elif x >= 1.0 - tol_x:
        x, boundary = 1.0, True
    slope = float(pre.deriv1_scalar(x))
    residual = abs(pre.value_scalar(x))
    return Equilibrium(
        x=float(x),
        stability=_label(slope, scale, force_degenerate=is_tangent),
        residual=residual,
        slope=slope,
        boundary=boundary,
    )


def find_equilibria(params: GameParameters,
                    cfg: RootFinderConfig = _DEFAULT_CFG) -> EquilibriumSet:
    """All equilibria in [0, 1], ascending, with stability labels.

    Every sign change on the grid is refined by bisection to ``tol_x``
    and polished with guarded Newton steps; near-tangencies are refined
    through the derivative and reported once as degenerate.  If more
    than four distinct roots remain after one automatic 4x grid
    refinement, :class:`MoreThanFourRoots` is raised rather than
    truncating silently.
    """
    pre = compiled(params)
    n = max(cfg.grid_points, 64 * params.d)
    for attempt in range(2):
        roots, tangents, scale = _isolate(pre, n, cfg)
        merged = _dedup(roots, tangents)
        if len(merged) <= 4:
            break
        n *= 4
    else:
        raise MoreThanFourRoots(
            f"{len(merged)} distinct roots found for {params!r} after refinement"
        )
    eqs = [_make_equilibrium(pre, x, scale, cfg.tol_x, t) for x, t in merged]
    return EquilibriumSet(roots=tuple(eqs), method=Method.GRID_BISECTION)


def _gain_scale(params: GameParameters, n: int = 512) -> float:
    pre = compiled(params)
    xs = np.linspace(0.0, 1.0, n + 1)
    return max(1.0, float(np.max(np.abs(pre.value(xs)))))


def classify(x: float, params: GameParameters,
             cfg: RootFinderConfig = _DEFAULT_CFG) -> Equilibrium:
    """Stability of a point already known to be (near) a root.

    Raises :class:`NotAnEquilibrium` when |gain(x)| exceeds the residual
    tolerance at the gain's scale.
    """
    pre = compiled(params)
    scale = _gain_scale(params, min(max(cfg.grid_points, 64 * params.d), 8192))
    residual = abs(pre.value_scalar(x))
    if residual > cfg.tol_residual * scale:
        raise NotAnEquilibrium(
            f"|gain({x})| = {residual:.3e} exceeds {cfg.tol_residual:.1e} * {scale:.3e}"
        )
    slope = float(pre.deriv1_scalar(x))
    boundary = x in (0.0, 1.0)
    return Equilibrium(x=float(x), stability=_label(slope, scale),
                       residual=residual, slope=slope, boundary=boundary)


# --- closed forms for the incentive-free quadratic ---------------------


def _quadratic_scale(quad_a: float, quad_b: float, mu: float) -> float:
    vals = [abs(mu), abs(quad_a + quad_b + mu)]
    if quad_a != 0.0:
        vertex = -quad_b / (2.0 * quad_a)
        if 0.0 < vertex < 1.0:
            vals.append(abs((quad_a * vertex + quad_b) * vertex + mu))
    return max(1.0, *vals)


def _quadratic_equilibrium(x: float, quad_a: float, quad_b: float, mu: float,
                           scale: float) -> Equilibrium:
    slope = 2.0 * quad_a * x + quad_b
    residual = abs((quad_a * x + quad_b) * x + mu)
    return Equilibrium(x=x, stability=_label(slope, scale),
                       residual=residual, slope=slope, boundary=x in (0.0, 1.0))


def quadratic_equilibria(params: GameParameters) -> EquilibriumSet:
    """Closed-form equilibria of the incentive-free dynamics (delta = 0).

    Covers the three regimes: no mutation at all (roots 0 and 1), only
    multiplicative mutation (root 0, plus an interior root when q clears
    the admission threshold), and both mutations (a single interior
    root).  The quadratic's second root is reported as ``companion``
    when it falls outside [0, 1].
    """
    if params.delta != 0.0:
        raise WrongMode("closed-form equilibria require delta = 0")
    d, r, c, q, mu = params.d, params.r, params.c, params.q, params.mu
    quad_a, quad_b = quadratic_coefficients(params)
    scale = _quadratic_scale(quad_a, quad_b, mu)

    def build(xs: list[float], companion: float | None) -> EquilibriumSet:
        eqs = tuple(_quadratic_equilibrium(x, quad_a, quad_b, mu, scale)
                    for x in sorted(xs))
        return EquilibriumSet(roots=eqs, method=Method.CLOSED_FORM,
                              companion=companion)

    if mu == 0.0 and q == 0.0:
        return build([0.0, 1.0], None)

    if mu == 0.0:
        denom = d * (2.0 * q * r - 1.0) - 2.0 * q * r + r
        if denom == 0.0:
            return build([0.0], None)
        x1 = ((d - 2.0) * q * r + d * (q - 1.0) + r) / denom
        if q > (d - r) / ((d - 2.0) * r + d):
            return build([0.0, x1], None)
        return build([0.0], x1)

    # mu > 0: interior root from the stable closed form, companion outside
    big_e = (d - 2.0) * q * r + d * (q - 1.0) + r
    ce = c * big_e / d
    disc = ce * ce + 4.0 * c * mu * q * (r - 1.0) + 4.0 * mu * mu
    root_d = math.sqrt(disc)
    if ce <= 0.0:
        x1 = 2.0 * mu / (root_d - ce + 2.0 * mu)
    else:
        x1 = (root_d + ce) / (root_d + ce + 2.0 * c * q * (r - 1.0) + 2.0 * mu)
    companion = mu / (quad_a * x1) if quad_a != 0.0 else None
    return build([x1], companion)


def incentive_threshold(params: GameParameters) -> float:
    """Per-capita budget above which a stable equilibrium sits in (1/2, 1).

    max of mu / (b (1-omega) q) and
    (c / 2d) (d-r) / ((a omega + b (1-omega)) (1 - 2^-d)); the delta
    stored in ``params`` plays no role.
    """
    denom1 = params.b_lev * (1.0 - params.omega) * params.q
    branch1 = params.mu / denom1 if denom1 > 0.0 else math.inf
    mix = params.a_lev * params.omega + params.b_lev * (1.0 - params.omega)
    branch2 = (params.c / (2.0 * params.d)) * (params.d - params.r) / (
        mix * (1.0 - 0.5 ** params.d))
    return max(branch1, branch2)


def small_incentive_threshold(params: GameParameters) -> float:
    """Budget below which a stable equilibrium sits in (0, 1/2); min of the
    same two branch expressions as :func:`incentive_threshold`."""
    denom1 = params.b_lev * (1.0 - params.omega) * params.q
    branch1 = params.mu / denom1 if denom1 > 0.0 else math.inf
    mix = params.a_lev * params.omega + params.b_lev * (1.0 - params.omega)
    branch2 = (params.c / (2.0 * params.d)) * (params.d - params.r) / (
        mix * (1.0 - 0.5 ** params.d))
    return min(branch1, branch2)
