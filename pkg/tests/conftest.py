"""Shared fixtures: the five reference parameter sets and random draws."""

import numpy as np
import pytest

from pggdyn import GameParameters

# Reference configurations demonstrating 0..4 equilibria.  In the
# four-root set q must read 0.0195: with 0.195 the equation provably has
# two roots (checked in exact rational arithmetic), so the widely-quoted
# 0.195 is a typo.
CAPTION_SETS = {
    0: dict(d=7, b_lev=17.64, a_lev=6.18, delta=0.48, r=1.16, omega=0.465,
            mu=0.415, q=0.4505, c=20.0),
    1: dict(d=6, b_lev=0.0001, a_lev=15.32, delta=1.0, r=5.57, omega=0.133,
            mu=0.643, q=0.3335, c=1.0),
    2: dict(d=5, b_lev=7.08, a_lev=3.04, delta=16.4, r=3.8, omega=0.133,
            mu=0.195, q=0.171, c=212.0),
    3: dict(d=6, b_lev=0.2, a_lev=1.1, delta=18.68, r=1.18, omega=0.039,
            mu=0.614, q=0.08, c=11.38),
    4: dict(d=11, b_lev=3.66, a_lev=6.04, delta=16.4, r=1.05, omega=0.133,
            mu=0.643, q=0.0195, c=174.0),
}

# Golden root abscissae, frozen from a one-off 1e6-point scan plus plain
# bisection (no Newton step), independent of the production refinement.
GOLDEN_ROOTS = {
    1: [0.56577354758589338],
    2: [0.099353884380406265, 0.75256645680865741],
    3: [0.20966649753156147, 0.57211148071606432, 0.91681306447552613],
    4: [0.010777975581133081, 0.067296735221790166,
        0.6196809687205479, 0.99743385576270871],
}

# incentive-free reference: group of 7, strong multiplication, both mutations
NO_INCENTIVE_REF = dict(d=7, c=10.0, r=5.0, q=0.25, mu=0.5, delta=0.0,
                        a_lev=1.0, b_lev=1.0, omega=0.5, mode="census")

# a draw whose saddle-node sits inside the valid mutation range; setting
# mu to the saddle value produces a genuine double root (found by a
# one-off random search, frozen here)
TANGENCY_WITNESS = dict(
    params=dict(d=4, r=1.3308964843842064, c=3.662631638143717,
                q=0.2370020832269715, mu=0.8877305072062435,
                delta=1.0836941374135884, a_lev=4.508504023933617,
                b_lev=1.1001631815376245, omega=0.016623841067148315),
    x=0.61038806271059798,
    mu=0.20239523408360657,
)


def caption_params(n: int) -> GameParameters:
    return GameParameters(**CAPTION_SETS[n])


@pytest.fixture(params=sorted(CAPTION_SETS))
def caption_case(request):
    return request.param, caption_params(request.param)


def random_strict(rng: np.random.Generator, d: int | None = None,
                  delta_hi: float = 10.0) -> GameParameters:
    """A strict-mode draw with the default experiment ranges."""
    if d is None:
        d = int(rng.integers(3, 13))
    return GameParameters(
        d=d,
        r=float(rng.uniform(1.000001, d - 1e-9)),
        c=float(rng.uniform(1e-6, 5.0)),
        q=float(rng.uniform(1e-9, 0.5)),
        mu=float(rng.uniform(1e-9, 1.0)),
        delta=float(rng.uniform(1e-6, delta_hi)),
        a_lev=float(rng.uniform(1e-6, 20.0)),
        b_lev=float(rng.uniform(1e-6, 20.0)),
        omega=float(rng.uniform(1e-9, 1.0)),
    )
