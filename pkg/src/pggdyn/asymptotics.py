"""Large-group limits of the gain function and its roots.

For x away from the interval ends, (1-x)^d and x^d die out as the group
size grows, so the incentive part flattens into a line g1 while the
quadratic side tends to a fixed parabola g2.  Roots of g1 - g2 then
approximate the finite-d equilibria, and the incentive-free interior
root has an explicit d -> infinity value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gain import baseline_part, gain, incentive_part
from .params import GameParameters

__all__ = [
    "LimitModel",
    "LimitRoot",
    "DegenerateQuadratic",
    "limit_model",
    "limit_roots",
    "no_incentive_limit",
    "incentive_limit_gap",
]

_LEAD_EPS = 1e-14


class DegenerateQuadratic(ValueError):
    """Leading coefficient below 1e-14; the caller gets the linear solve."""


@dataclass(frozen=True)
class LimitModel:
    """Linear incentive approximant and limiting quadratic.

    g1(x) = g1_slope * x + g1_intercept
    g2(x) = g2_coeffs[0] x^2 + g2_coeffs[1] x + g2_coeffs[2]
    """

    g1_slope: float
    g1_intercept: float
    g2_coeffs: tuple[float, float, float]

    def g1(self, x):
        return self.g1_slope * np.asarray(x, dtype=float) + self.g1_intercept

    def g2(self, x):
        x = np.asarray(x, dtype=float)
        a2, a1, a0 = self.g2_coeffs
        return (a2 * x + a1) * x + a0

    def difference(self, x):
        """g1(x) - g2(x): the limiting gain."""
        return self.g1(x) - self.g2(x)


@dataclass(frozen=True)
class LimitRoot:
    x: float
    derivative_magnitude: float


def limit_model(params: GameParameters) -> LimitModel:
    p = params
    return LimitModel(
        g1_slope=p.delta * (p.b_lev * (1.0 - p.omega) - p.a_lev * p.omega),
        g1_intercept=p.delta * (p.a_lev * (1.0 - p.q) * p.omega
                                - p.b_lev * p.q * (1.0 - p.omega)),
        g2_coeffs=(
            p.c * (2.0 * p.q * p.r - 1.0),
            p.c * (1.0 - p.q - p.q * p.r) + 2.0 * p.mu,
            -p.mu,
        ),
    )


def limit_roots(model: LimitModel) -> list[LimitRoot]:
    """Real roots of g1 - g2 inside [0, 1] with |d(g1-g2)/dx| at each.

    The difference is the quadratic -a2 x^2 + (slope - a1) x +
    (intercept - a0); if its leading coefficient is below 1e-14 in
    magnitude the linear equation is solved instead.
    """
    a2, a1, a0 = model.g2_coeffs
    lead = -a2
    lin = model.g1_slope - a1
    const = model.g1_intercept - a0

    def admit(x: float) -> LimitRoot | None:
        if not 0.0 <= x <= 1.0:
            return None
        return LimitRoot(x=x, derivative_magnitude=abs(2.0 * lead * x + lin))

    if abs(lead) < _LEAD_EPS:
        if lin == 0.0:
            raise DegenerateQuadratic("limiting gain is constant; no root structure")
        root = admit(-const / lin)
        return [root] if root else []

    disc = lin * lin - 4.0 * lead * const
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    # classic cancellation-free split
    if lin >= 0.0:
        t = -0.5 * (lin + sq)
    else:
        t = -0.5 * (lin - sq)
    roots = {t / lead}
    if t != 0.0:
        roots.add(const / t)
    elif disc == 0.0:
        pass
    out = [r for r in (admit(x) for x in sorted(roots)) if r is not None]
    return out


def no_incentive_limit(params: GameParameters) -> float:
    """d -> infinity value of the incentive-free interior equilibrium.

    2 mu / (sqrt(c^2 (q r + q - 1)^2 + 4 c mu q (r - 1) + 4 mu^2)
            - c (q r + q - 1) + 2 mu); below 1/2 for all valid draws.
    """
    if params.delta != 0.0:
        raise ValueError("the closed-form limit requires delta = 0")
    c, q, r, mu = params.c, params.q, params.r, params.mu
    e = q * r + q - 1.0
    root = math.sqrt(c * c * e * e + 4.0 * c * mu * q * (r - 1.0) + 4.0 * mu * mu)
    return 2.0 * mu / (root - c * e + 2.0 * mu)


def incentive_limit_gap(params: GameParameters, x) -> np.ndarray:
    """|gain(x) - (g1(x) - quadratic side at this d)|.

    Isolates the only genuinely approximated piece: the incentive hump
    versus its linear limit.  The quadratic side is closed form at every
    d, so comparing against it at the same d leaves the pure
    boundary-layer error, which vanishes like (1-x)^d and x^d.
    """
    model = limit_model(params)
    x = np.asarray(x, dtype=float)
    approx = model.g1(x) - baseline_part(x, params)
    return np.abs(gain(x, params) - approx)
