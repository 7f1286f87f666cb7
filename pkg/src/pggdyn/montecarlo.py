"""Random-parameter experiments: how many equilibria does a draw have?

Reproducibility contract: draws are generated by the Philox 4x64
counter-based generator, keyed by ``(seed, draw_index // CHUNK)``.  Each
chunk materialises a ``(CHUNK, SLOTS)`` block of uniforms and draw ``i``
reads row ``i % CHUNK``.  The histogram for a draw range is therefore a
pure function of ``(seed, range)``: shards merge associatively and the
result does not depend on how the range was split across workers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .equilibria import MoreThanFourRoots, RootFinderConfig, find_equilibria
from .params import GameParameters

__all__ = ["SamplingRanges", "CountHistogram", "sample_counts", "draw_parameters"]

CHUNK = 1024
SLOTS = 16  # uniforms reserved per draw; slots 0..8 are in use

_Interval = tuple[float, float]


@dataclass(frozen=True)
class SamplingRanges:
    """Uniform sampling intervals for the randomised experiments.

    ``r`` is drawn from (r[0], d) whenever its upper bound is None.
    """

    omega: _Interval = (0.0, 1.0)
    mu: _Interval = (0.0, 1.0)
    delta: _Interval = (0.0, 10.0)
    c: _Interval = (0.0, 5.0)
    r: tuple[float, float | None] = (1.0, None)
    q: _Interval = (0.0, 0.5)

    def __post_init__(self) -> None:
        for name in ("omega", "mu", "delta", "c", "q"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"range {name}=({lo}, {hi}) is empty")


DEFAULT_AB_RANGES: tuple[_Interval, _Interval] = ((0.0, 20.0), (0.0, 20.0))

# uniform variates can land exactly on an excluded endpoint; nudge inward
_EDGE = 1e-12


def _open_uniform(u: float, lo: float, hi: float) -> float:
    span = hi - lo
    return min(max(lo + u * span, lo + _EDGE * span), hi - _EDGE * span)


@lru_cache(maxsize=64)
def _chunk_block(seed: int, chunk_index: int) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=[seed, chunk_index]))
    block = gen.random((CHUNK, SLOTS))
    block.setflags(write=False)
    return block


def draw_parameters(d: int, seed: int, index: int,
                    ranges: SamplingRanges = SamplingRanges(),
                    ab_ranges: tuple[_Interval, _Interval] = DEFAULT_AB_RANGES,
                    _block: np.ndarray | None = None) -> GameParameters:
    """Strict-mode parameter draw number ``index`` of stream ``seed``."""
    if _block is None:
        _block = _chunk_block(seed, index // CHUNK)
    u = _block[index % CHUNK]
    r_hi = ranges.r[1] if ranges.r[1] is not None else float(d)
    return GameParameters(
        d=d,
        omega=_open_uniform(u[0], *ranges.omega),
        mu=_open_uniform(u[1], *ranges.mu),
        delta=_open_uniform(u[2], *ranges.delta),
        c=_open_uniform(u[3], *ranges.c),
        r=_open_uniform(u[4], ranges.r[0], r_hi),
        q=_open_uniform(u[5], *ranges.q),
        a_lev=_open_uniform(u[6], *ab_ranges[0]),
        b_lev=_open_uniform(u[7], *ab_ranges[1]),
    )


@dataclass
class CountHistogram:
    """Root-count frequencies of a batch of random draws."""

    counts: Counter = field(default_factory=Counter)
    draws: int = 0
    seed: int = 0
    d: int = 0

    def record(self, n_roots: int) -> None:
        self.counts[n_roots] += 1
        self.draws += 1

    def merge(self, other: "CountHistogram") -> "CountHistogram":
        if (other.seed, other.d) != (self.seed, self.d):
            raise ValueError("histograms from different runs cannot merge")
        out = CountHistogram(seed=self.seed, d=self.d)
        out.counts = self.counts + other.counts
        out.draws = self.draws + other.draws
        return out

    def frequency(self, n_roots: int) -> int:
        return self.counts.get(n_roots, 0)


_SWEEP_CFG = RootFinderConfig(grid_points=1024)


def sample_counts(d: int, draws: int, seed: int,
                  ranges: SamplingRanges = SamplingRanges(),
                  ab_ranges: tuple[_Interval, _Interval] = DEFAULT_AB_RANGES,
                  cfg: RootFinderConfig = _SWEEP_CFG,
                  start: int = 0) -> CountHistogram:
    """Tally equilibrium counts for ``draws`` random parameter draws.

    Deterministic in ``seed``; ``start`` selects the draw range
    [start, start+draws) so shards can be computed independently and
    merged.  A draw that still reports more than four roots after the
    finder's own refinement is retried once on a 4x denser grid before
    the error propagates.
    """
    hist = CountHistogram(seed=seed, d=d)
    block = None
    block_idx = -1
    for i in range(start, start + draws):
        if i // CHUNK != block_idx:
            block_idx = i // CHUNK
            block = _chunk_block(seed, block_idx)
        params = draw_parameters(d, seed, i, ranges, ab_ranges, _block=block)
        try:
            eqs = find_equilibria(params, cfg)
        except MoreThanFourRoots:
            retry = RootFinderConfig(
                grid_points=cfg.grid_points * 4,
                tol_x=cfg.tol_x,
                tol_residual=cfg.tol_residual,
                tangency_tol=cfg.tangency_tol,
            )
            eqs = find_equilibria(params, retry)
        hist.record(len(eqs))
    return hist
