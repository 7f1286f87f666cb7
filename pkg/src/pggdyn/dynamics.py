"""Time integration of the cooperation dynamics.

Two levels: the scalar equation xdot = gain(x) for the two-strategy
game, and the full n-strategy selection-mutation flow

    xdot_i = sum_j x_j f_j(x) Q[j, i] - x_i fbar(x) - mu (n x_i - 1)

whose defining property is that the simplex (frequencies summing to one)
is invariant.  Both use the classical fourth-order one-step scheme with
a fixed step; the right-hand sides are smooth and bounded on the state
space, so adaptivity buys nothing here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .gain import average_fitness, compiled
from .params import GameParameters, payoff_entries

__all__ = [
    "StepTooLarge",
    "NegativeFrequency",
    "Trajectory",
    "SimplexState",
    "integrate_scalar",
    "integrate_simplex",
    "pgg_fitness_kernel",
    "symmetric_mutation_matrix",
]

_EXCURSION = 1e-9


class StepTooLarge(RuntimeError):
    """A step left the invariant region by more than round-off allows."""


class NegativeFrequency(RuntimeError):
    """A simplex component dipped below -1e-9."""


@dataclass(frozen=True)
class Trajectory:
    """Times and cooperator frequencies of one scalar integration."""

    times: np.ndarray
    states: np.ndarray

    def final_state(self) -> float:
        return float(self.states[-1])


def integrate_scalar(x0: float, params: GameParameters, t_end: float,
                     dt: float = 1e-3) -> Trajectory:
    """Integrate xdot = gain(x) from x0 over [0, t_end] with fixed step dt.

    States are clamped onto [0, 1] only to absorb round-off; an excursion
    beyond 1e-9 raises :class:`StepTooLarge` (the caller may halve dt and
    retry, but an excursion usually means the flow genuinely exits, e.g.
    when no equilibrium exists).
    """
    if not 0.0 <= x0 <= 1.0:
        raise ValueError(f"x0={x0} outside [0, 1]")
    if dt <= 0.0 or t_end < 0.0:
        raise ValueError("need dt > 0 and t_end >= 0")
    pre = compiled(params)
    g = pre.value_scalar
    n_steps = int(round(t_end / dt))
    times = np.empty(n_steps + 1)
    states = np.empty(n_steps + 1)
    times[0] = 0.0
    states[0] = x = float(x0)
    for i in range(1, n_steps + 1):
        k1 = g(x)
        k2 = g(x + 0.5 * dt * k1)
        k3 = g(x + 0.5 * dt * k2)
        k4 = g(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if x < -_EXCURSION or x > 1.0 + _EXCURSION:
            raise StepTooLarge(
                f"state {x:.3e} left [0,1] at t={i * dt:.6g}; no clamping applied"
            )
        x = min(max(x, 0.0), 1.0)
        times[i] = i * dt
        states[i] = x
    return Trajectory(times=times, states=states)


def symmetric_mutation_matrix(n: int, q: float) -> np.ndarray:
    """Row-stochastic matrix with off-diagonal replication error q/(n-1)
    spread evenly; reduces to the two-strategy (1-q, q) form at n = 2."""
    m = np.full((n, n), q / (n - 1))
    np.fill_diagonal(m, 1.0 - q)
    return m


def pgg_fitness_kernel(params: GameParameters) -> Callable[[np.ndarray], np.ndarray]:
    """Fitness callable for the two-strategy public goods game."""
    table = payoff_entries(params)

    def kernel(freqs: np.ndarray) -> np.ndarray:
        f1, f2 = average_fitness(float(freqs[0]), table)
        return np.array([f1, f2])

    return kernel


@dataclass(frozen=True)
class SimplexState:
    """Population state of the n-strategy flow.

    ``payoff_kernel`` maps a frequency vector to a fitness vector; the
    mutation matrix must be row-stochastic.
    """

    frequencies: np.ndarray
    payoff_kernel: Callable[[np.ndarray], np.ndarray]
    mutation_matrix: np.ndarray
    mu: float

    def __post_init__(self) -> None:
        freqs = np.asarray(self.frequencies, dtype=float)
        object.__setattr__(self, "frequencies", freqs)
        qm = np.asarray(self.mutation_matrix, dtype=float)
        object.__setattr__(self, "mutation_matrix", qm)
        n = freqs.size
        if qm.shape != (n, n):
            raise ValueError("mutation matrix shape does not match frequencies")
        if abs(float(freqs.sum()) - 1.0) > 1e-9:
            raise ValueError(f"frequencies sum to {freqs.sum()!r}, not 1")
        if np.any(freqs < -_EXCURSION):
            raise NegativeFrequency(f"negative frequency in {freqs!r}")
        rowsum = qm.sum(axis=1)
        if np.max(np.abs(rowsum - 1.0)) > 1e-12:
            raise ValueError("mutation matrix rows must sum to 1 within 1e-12")

    @property
    def n(self) -> int:
        return self.frequencies.size

    def with_frequencies(self, freqs: np.ndarray) -> "SimplexState":
        return SimplexState(frequencies=freqs, payoff_kernel=self.payoff_kernel,
                            mutation_matrix=self.mutation_matrix, mu=self.mu)


def _simplex_rhs(freqs: np.ndarray, kernel, qm: np.ndarray, mu: float,
                 n: int) -> np.ndarray:
    f = np.asarray(kernel(freqs), dtype=float)
    weighted = freqs * f
    fbar = weighted.sum()
    return weighted @ qm - freqs * fbar - mu * (n * freqs - 1.0)


def integrate_simplex(state: SimplexState, t_end: float,
                      dt: float = 1e-3) -> list[SimplexState]:
    """Integrate the n-strategy flow; returns the state at every step.

    The frequency sum is a conserved quantity of the exact flow and of
    every stage of the scheme, so it is preserved to round-off; larger
    drift or a component below -1e-9 raises.
    """
    if dt <= 0.0 or t_end < 0.0:
        raise ValueError("need dt > 0 and t_end >= 0")
    kernel, qm, mu, n = (state.payoff_kernel, state.mutation_matrix,
                         state.mu, state.n)
    x = state.frequencies.astype(float).copy()
    out = [state]
    n_steps = int(round(t_end / dt))
    for i in range(1, n_steps + 1):
        k1 = _simplex_rhs(x, kernel, qm, mu, n)
        k2 = _simplex_rhs(x + 0.5 * dt * k1, kernel, qm, mu, n)
        k3 = _simplex_rhs(x + 0.5 * dt * k2, kernel, qm, mu, n)
        k4 = _simplex_rhs(x + dt * k3, kernel, qm, mu, n)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if abs(float(x.sum()) - 1.0) > _EXCURSION:
            raise StepTooLarge(f"simplex sum drifted to {x.sum()!r} at step {i}")
        if np.any(x < -_EXCURSION):
            raise NegativeFrequency(f"negative component at step {i}: {x!r}")
        out.append(state.with_frequencies(x.copy()))
    return out
