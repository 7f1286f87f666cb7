"""Game parameters and payoff tables for d-player public goods games.

A group of ``d`` players decides between contributing (cooperation) and
free-riding (defection).  Contributions of cost ``c`` are multiplied by
``r`` and shared equally.  An institution may spend a per-capita budget
``delta``, split by a weight ``omega`` between rewarding cooperators
(leverage ``a_lev``) and punishing defectors (leverage ``b_lev``).  The
population evolves under an additive mutation rate ``mu`` and a
multiplicative (replication-error) probability ``q``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ParameterError",
    "GameParameters",
    "PayoffTable",
    "payoff_entries",
]


class ParameterError(ValueError):
    """A parameter lies outside its permitted range; names the field."""


def _check(ok: bool, field: str, value, requirement: str, mode: str) -> None:
    if not ok:
        raise ParameterError(
            f"{field}={value!r} violates {requirement} ({mode} mode)"
        )


@dataclass(frozen=True)
class GameParameters:
    """Full parameter tuple of the dynamics.

    Two validation modes exist.  ``strict`` keeps every parameter in the
    open interior of its range; ``census`` additionally admits the
    boundary values q=0, q=1/2, mu in {0,1}, omega in {0,1} and delta=0
    that the special-case analyses pin exactly.
    """

    d: int
    r: float
    c: float
    q: float
    mu: float
    delta: float
    a_lev: float
    b_lev: float
    omega: float
    mode: str = "strict"

    def __post_init__(self) -> None:
        m = self.mode
        if m not in ("strict", "census"):
            raise ParameterError(f"mode={m!r} violates mode in {{'strict','census'}}")
        _check(isinstance(self.d, (int, np.integer)) and not isinstance(self.d, bool),
               "d", self.d, "integer group size", m)
        _check(self.d >= 3, "d", self.d, "d >= 3", m)
        _check(1.0 < self.r < self.d, "r", self.r, "1 < r < d", m)
        _check(self.c > 0.0, "c", self.c, "c > 0", m)
        _check(self.a_lev > 0.0, "a_lev", self.a_lev, "a_lev > 0", m)
        _check(self.b_lev > 0.0, "b_lev", self.b_lev, "b_lev > 0", m)
        for name in ("r", "c", "q", "mu", "delta", "a_lev", "b_lev", "omega"):
            v = getattr(self, name)
            _check(isinstance(v, (int, float, np.floating)) and math.isfinite(v),
                   name, v, "finite number", m)
        if m == "strict":
            _check(0.0 < self.q < 0.5, "q", self.q, "0 < q < 1/2", m)
            _check(0.0 < self.mu < 1.0, "mu", self.mu, "0 < mu < 1", m)
            _check(self.delta > 0.0, "delta", self.delta, "delta > 0", m)
            _check(0.0 < self.omega < 1.0, "omega", self.omega, "0 < omega < 1", m)
        else:
            _check(0.0 <= self.q <= 0.5, "q", self.q, "0 <= q <= 1/2", m)
            _check(0.0 <= self.mu <= 1.0, "mu", self.mu, "0 <= mu <= 1", m)
            _check(self.delta >= 0.0, "delta", self.delta, "delta >= 0", m)
            _check(0.0 <= self.omega <= 1.0, "omega", self.omega, "0 <= omega <= 1", m)

    def replace(self, **changes) -> "GameParameters":
        """Copy with some fields changed; re-validates."""
        return dataclasses.replace(self, **changes)

    @property
    def is_strict(self) -> bool:
        return self.mode == "strict"


@dataclass(frozen=True)
class PayoffTable:
    """Per-composition payoffs (a_k, b_k) for k = 0 .. d-1.

    ``a[k]`` is the payoff of a cooperator, ``b[k]`` of a defector, in a
    group with k other cooperators.
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        if self.a.shape != self.b.shape or self.a.ndim != 1:
            raise ValueError("payoff arrays must be 1-d and equally long")

    @property
    def d(self) -> int:
        return self.a.size

    def entries(self):
        """Iterate (a_k, b_k) pairs."""
        return zip(self.a.tolist(), self.b.tolist())


def payoff_entries(params: GameParameters) -> PayoffTable:
    """Payoff table of the incentivised game.

    a_k = (k+1) c r / d - c + a_lev * omega * d * delta / (k+1)
    b_k = k r c / d       - b_lev * (1-omega) * d * delta / (d-k)

    With delta = 0 this reduces to the plain public goods game payoffs.
    """
    d = params.d
    k = np.arange(d, dtype=float)
    base_a = (k + 1.0) * params.c * params.r / d - params.c
    base_b = k * params.r * params.c / d
    reward = params.a_lev * params.omega * d * params.delta / (k + 1.0)
    fine = params.b_lev * (1.0 - params.omega) * d * params.delta / (d - k)
    return PayoffTable(a=base_a + reward, b=base_b - fine)
