"""The gain function: right-hand side of the scalar cooperation dynamics.

Two independent evaluation paths are provided and cross-validated in the
test suite:

* :func:`gain` uses the closed form obtained after collapsing the binomial
  sums, i.e. a quadratic in x plus the two incentive terms built from
  (1-x)^d and x^d.
* :func:`gain_via_payoffs` sums the binomially weighted payoff table
  directly and never touches the simplified algebra; it is the designated
  oracle and is allowed to cost O(d) per point.

Equilibria of the dynamics xdot = gain(x) are the roots of the gain
function in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .params import GameParameters, PayoffTable, payoff_entries

__all__ = [
    "gain",
    "gain_via_payoffs",
    "gain_derivatives",
    "average_fitness",
    "evaluate_gain",
    "GainEvaluation",
    "incentive_part",
    "baseline_part",
    "incentive_part_second_derivative",
    "gain_at_zero",
    "gain_at_one",
    "quadratic_coefficients",
]

# Direct powers are exact enough up to this exponent; above it the
# exp-of-log path avoids churn through denormals for mid-interval x.
_DIRECT_POW_MAX = 64


def _unit_pow(y, d: int):
    """y**d for y in [0, 1] (small excursions tolerated), stable in d."""
    if d <= _DIRECT_POW_MAX:
        return np.power(y, d)
    y = np.clip(np.asarray(y, dtype=float), 0.0, None)
    with np.errstate(divide="ignore"):
        return np.exp(d * np.log(y))  # log(0) -> -inf -> exact 0; log(1) -> exact 1


def _unit_pow_scalar(y: float, d: int) -> float:
    if d <= _DIRECT_POW_MAX:
        return y ** d
    if y <= 1e-300:
        return 0.0
    if y >= 1.0:
        return y ** d
    return math.exp(d * math.log(y))


def quadratic_coefficients(params: GameParameters) -> tuple[float, float]:
    """Coefficients (A, B) of the incentive-free closed form A x^2 + B x + mu."""
    d, r, c, q, mu = params.d, params.r, params.c, params.q, params.mu
    quad_a = -(c / d) * (2.0 * r * q * (d - 1) + (r - d))
    quad_b = (c / d) * (r * q * (d - 1) + (r - d) * (1.0 - q)) - 2.0 * mu
    return quad_a, quad_b


@dataclass(frozen=True)
class _Compiled:
    """Per-parameter constants shared by the fast scalar and array paths."""

    d: int
    q: float
    mu: float
    quad_a: float
    quad_b: float
    inc_a: float  # a_lev * omega * delta
    inc_b: float  # b_lev * (1 - omega) * delta

    @staticmethod
    def of(params: GameParameters) -> "_Compiled":
        quad_a, quad_b = quadratic_coefficients(params)
        return _Compiled(
            d=params.d,
            q=params.q,
            mu=params.mu,
            quad_a=quad_a,
            quad_b=quad_b,
            inc_a=params.a_lev * params.omega * params.delta,
            inc_b=params.b_lev * (1.0 - params.omega) * params.delta,
        )

    # --- array paths -------------------------------------------------
    def value(self, x):
        x = np.asarray(x, dtype=float)
        out = self.quad_a * x * x + self.quad_b * x + self.mu
        if self.inc_a != 0.0 or self.inc_b != 0.0:
            out = out + self.inc_a * (1.0 - x - self.q) * (1.0 - _unit_pow(1.0 - x, self.d))
            out = out + self.inc_b * (x - self.q) * (1.0 - _unit_pow(x, self.d))
        return out

    def deriv1(self, x):
        x = np.asarray(x, dtype=float)
        out = 2.0 * self.quad_a * x + self.quad_b
        if self.inc_a != 0.0 or self.inc_b != 0.0:
            d = self.d
            pm = _unit_pow(1.0 - x, d - 1)
            px = _unit_pow(x, d - 1)
            out = out + self.inc_a * (-(1.0 - pm * (1.0 - x)) + (1.0 - x - self.q) * d * pm)
            out = out + self.inc_b * ((1.0 - px * x) - d * (x - self.q) * px)
        return out

    def deriv2(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, 2.0 * self.quad_a)
        if self.inc_a != 0.0 or self.inc_b != 0.0:
            d = self.d
            pm = _unit_pow(1.0 - x, d - 2)
            px = _unit_pow(x, d - 2)
            out = out - d * self.inc_a * pm * ((d + 1) * (1.0 - x) - (d - 1) * self.q)
            out = out - d * self.inc_b * px * ((d + 1) * x - (d - 1) * self.q)
        return out

    def deriv3(self, x):
        x = np.asarray(x, dtype=float)
        d = self.d
        shift = self.q * (d - 2) / (d + 1)
        lead = (d + 1) * d * (d - 1)
        pm = _unit_pow(1.0 - x, d - 3)
        px = _unit_pow(x, d - 3)
        return lead * (self.inc_a * pm * ((1.0 - x) - shift)
                       - self.inc_b * px * (x - shift))

    # --- scalar fast path (bisection / Newton / time stepping) -------
    def value_scalar(self, x: float) -> float:
        out = (self.quad_a * x + self.quad_b) * x + self.mu
        if self.inc_a != 0.0 or self.inc_b != 0.0:
            d = self.d
            out += self.inc_a * (1.0 - x - self.q) * (1.0 - _unit_pow_scalar(1.0 - x, d))
            out += self.inc_b * (x - self.q) * (1.0 - _unit_pow_scalar(x, d))
        return out

    def deriv1_scalar(self, x: float) -> float:
        out = 2.0 * self.quad_a * x + self.quad_b
        if self.inc_a != 0.0 or self.inc_b != 0.0:
            d = self.d
            pm = _unit_pow_scalar(1.0 - x, d - 1)
            px = _unit_pow_scalar(x, d - 1)
            out += self.inc_a * (-(1.0 - pm * (1.0 - x)) + (1.0 - x - self.q) * d * pm)
            out += self.inc_b * ((1.0 - px * x) - d * (x - self.q) * px)
        return out


@lru_cache(maxsize=256)
def _compiled_cached(params: GameParameters) -> _Compiled:
    return _Compiled.of(params)


def compiled(params: GameParameters) -> _Compiled:
    """Constant-folded evaluator for repeated calls with one parameter set."""
    return _compiled_cached(params)


def gain(x, params: GameParameters):
    """Closed-form gain at frequency x (scalar or array).

    For delta = 0 this is the quadratic A x^2 + B x + mu; otherwise the
    two incentive terms are added.  Powers are evaluated through a path
    that stays accurate for group sizes in the thousands.
    """
    return compiled(params).value(x)


def incentive_part(x, params: GameParameters):
    """The delta-dependent piece of the gain function."""
    x = np.asarray(x, dtype=float)
    pre = compiled(params)
    return (pre.inc_a * (1.0 - x - pre.q) * (1.0 - _unit_pow(1.0 - x, pre.d))
            + pre.inc_b * (x - pre.q) * (1.0 - _unit_pow(x, pre.d)))


def baseline_part(x, params: GameParameters):
    """Mutation-and-game quadratic moved to the other side of the
    equilibrium balance: gain(x) = incentive_part(x) - baseline_part(x)."""
    x = np.asarray(x, dtype=float)
    pre = compiled(params)
    return -(pre.quad_a * x * x + pre.quad_b * x + pre.mu)


def incentive_part_second_derivative(x, params: GameParameters):
    """Second derivative of the delta-dependent piece alone."""
    pre = compiled(params)
    x = np.asarray(x, dtype=float)
    d = pre.d
    pm = _unit_pow(1.0 - x, d - 2)
    px = _unit_pow(x, d - 2)
    return -d * (pre.inc_a * pm * ((d + 1) * (1.0 - x) - (d - 1) * pre.q)
                 + pre.inc_b * px * ((d + 1) * x - (d - 1) * pre.q))


def gain_derivatives(x, params: GameParameters, order: int):
    """Analytic derivative of the closed-form gain, order in {1, 2, 3}.

    The third derivative is free of the quadratic and mu contributions.
    """
    pre = compiled(params)
    if order == 1:
        return pre.deriv1(x)
    if order == 2:
        return pre.deriv2(x)
    if order == 3:
        return pre.deriv3(x)
    raise ValueError(f"order={order!r} not in {{1, 2, 3}}")


@dataclass(frozen=True)
class GainEvaluation:
    """Value and first three derivatives of the gain at one frequency."""

    x: float
    value: float
    d1: float
    d2: float
    d3: float


def evaluate_gain(x: float, params: GameParameters) -> GainEvaluation:
    pre = compiled(params)
    return GainEvaluation(
        x=float(x),
        value=float(pre.value(x)),
        d1=float(pre.deriv1(x)),
        d2=float(pre.deriv2(x)),
        d3=float(pre.deriv3(x)),
    )


def gain_at_zero(params: GameParameters) -> float:
    """gain(0) = mu - b_lev * delta * q * (1 - omega)."""
    return params.mu - params.b_lev * params.delta * params.q * (1.0 - params.omega)


def gain_at_one(params: GameParameters) -> float:
    """gain(1) = -q (a_lev delta omega + c (r - 1)) - mu, negative in strict mode."""
    return -params.q * (params.a_lev * params.delta * params.omega
                        + params.c * (params.r - 1.0)) - params.mu


@lru_cache(maxsize=512)
def _binomial_weights_setup(d: int) -> np.ndarray:
    if d - 1 <= _DIRECT_POW_MAX:
        return np.array([math.comb(d - 1, k) for k in range(d)], dtype=float)
    return np.array(
        [math.lgamma(d) - math.lgamma(k + 1) - math.lgamma(d - k) for k in range(d)]
    )


def _group_weights(x, d: int) -> np.ndarray:
    """Binomial weights C(d-1, k) x^k (1-x)^(d-1-k) as an (n, d) matrix."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    k = np.arange(d, dtype=float)
    setup = _binomial_weights_setup(d)
    if d - 1 <= _DIRECT_POW_MAX:
        return setup * np.power(x[:, None], k) * np.power(1.0 - x[:, None], d - 1 - k)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = (setup
                + k * np.log(x[:, None])
                + (d - 1 - k) * np.log(1.0 - x[:, None]))
    w = np.exp(logs)
    # log(0) rows: the endpoint weights are exact indicator vectors
    w[x == 0.0] = 0.0
    w[x == 1.0] = 0.0
    w[x == 0.0, 0] = 1.0
    w[x == 1.0, d - 1] = 1.0
    return w


def average_fitness(x, table: PayoffTable):
    """Binomially weighted average payoffs (f1, f2) at cooperator frequency x."""
    w = _group_weights(x, table.d)
    f1 = w @ table.a
    f2 = w @ table.b
    if np.ndim(x) == 0:
        return float(f1[0]), float(f2[0])
    return f1, f2


def gain_via_payoffs(x, params: GameParameters):
    """Gain evaluated directly from the payoff table (oracle path).

    Computes q[(1-x) f2 - x f1] + x (1-x)(f1 - f2) - mu (2x - 1) without
    any of the closed-form simplifications.
    """
    table = payoff_entries(params)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    f1, f2 = average_fitness(xa, table)
    out = (params.q * ((1.0 - xa) * f2 - xa * f1)
           + xa * (1.0 - xa) * (f1 - f2)
           - params.mu * (2.0 * xa - 1.0))
    if np.ndim(x) == 0:
        return float(out[0])
    return out
