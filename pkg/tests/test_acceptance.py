"""Acceptance suite: one test per quantitative claim, at full size.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the one-line
verdict each criterion prints.  The full module is minutes-scale; the
cap sweep (10^5 draws per group size) dominates.
"""

import time

import numpy as np
import pytest

from pggdyn import (
    GameParameters,
    MoreThanFourRoots,
    OneOrTwo,
    RootFinderConfig,
    SimplexState,
    Stability,
    all_census_cases,
    census_check,
    count_change_at,
    draw_parameters,
    find_equilibria,
    gain,
    gain_at_one,
    gain_at_zero,
    gain_via_payoffs,
    horizontal_intersections,
    incentive_limit_gap,
    incentive_threshold,
    integrate_scalar,
    integrate_simplex,
    limit_model,
    limit_roots,
    mu_of_x,
    no_incentive_limit,
    one_or_two,
    pgg_fitness_kernel,
    quadratic_equilibria,
    sample_counts,
    saddle_nodes,
    small_incentive_threshold,
    symmetric_mutation_matrix,
)
from pggdyn.gain import compiled
from conftest import CAPTION_SETS, NO_INCENTIVE_REF, caption_params, random_strict

_SWEEP_CFG = RootFinderConfig(grid_points=1024)

_PATTERNS = {
    1: (Stability.STABLE,),
    2: (Stability.UNSTABLE, Stability.STABLE),
    3: (Stability.STABLE, Stability.UNSTABLE, Stability.STABLE),
    4: (Stability.UNSTABLE, Stability.STABLE, Stability.UNSTABLE,
        Stability.STABLE),
}


def _report(name: str, detail: str) -> None:
    print(f"PASS {name}: {detail}")


def test_c01_caption_reproduction():
    """Five reference parameter sets produce exactly 0..4 equilibria."""
    t0 = time.perf_counter()
    for n in sorted(CAPTION_SETS):
        eqs = find_equilibria(caption_params(n))
        assert len(eqs) == n, f"set {n}: got {len(eqs)} roots"
        for root in eqs:
            assert root.residual <= 1e-10
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    _report("caption-reproduction", f"counts 0..4 reproduced in {elapsed:.3f}s")


def test_c02_c05_root_cap_and_stability_ordering():
    """10^5 random strict draws per group size 3..12: never more than four
    roots (with the refine-retry oracle), and every simple-root stability
    sequence matches the canonical alternating pattern."""
    draws_per_d = 100_000
    retried = 0
    pattern_checked = 0
    for d in range(3, 13):
        for i in range(draws_per_d):
            p = draw_parameters(d, seed=2024, index=i)
            try:
                eqs = find_equilibria(p, _SWEEP_CFG)
            except MoreThanFourRoots:
                retried += 1
                eqs = find_equilibria(p, RootFinderConfig(grid_points=4096))
            assert len(eqs) <= 4, p
            labels = eqs.stability_labels()
            if labels and Stability.DEGENERATE not in labels:
                assert labels == _PATTERNS[len(labels)], p
                pattern_checked += 1
    _report("theorem-cap", f"10x{draws_per_d} draws, max 4 roots, "
            f"{retried} refine-retries")
    _report("stability-ordering", f"{pattern_checked} simple-root sequences, "
            "zero exceptions")


def test_c03_dual_path_algebra():
    """Closed form vs payoff-table oracle: 1000 draws x 1024 grid points."""
    rng = np.random.default_rng(3003)
    xs = np.linspace(0.0, 1.0, 1024)
    worst = 0.0
    for _ in range(1000):
        p = random_strict(rng, d=int(rng.integers(3, 41)))
        a = gain(xs, p)
        b = gain_via_payoffs(xs, p)
        rel = float(np.max(np.abs(a - b) / (1.0 + np.abs(a))))
        worst = max(worst, rel)
        assert rel <= 1e-9
    _report("dual-path", f"worst scaled discrepancy {worst:.2e}")


def test_c04_closed_form_agreement():
    """Incentive-free closed form vs the numeric finder over 10^4 draws."""
    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(10_000):
        p = random_strict(rng).replace(delta=0.0, mode="census")
        closed = quadratic_equilibria(p)
        assert len(closed) == 1
        x1 = closed.roots[0].x
        assert x1 < 0.5
        assert closed.companion is not None
        assert not 0.0 <= closed.companion <= 1.0
        numeric = find_equilibria(p, _SWEEP_CFG)
        assert len(numeric) == 1
        gap = abs(x1 - numeric.roots[0].x)
        worst = max(worst, gap)
        assert gap <= 1e-10
    _report("closed-form", f"worst |closed - numeric| = {worst:.2e}")


def _stable_high(eqs):
    return [r for r in eqs
            if r.stability is Stability.STABLE and 0.5 < r.x < 1.0]


def _largest_stable_above_half(params) -> float:
    hits = _stable_high(find_equilibria(params, _SWEEP_CFG))
    assert hits, params
    return hits[-1].x


def test_c06_sufficient_incentive():
    """Budget above the explicit bound: a stable equilibrium in (1/2, 1),
    moving up with the budget, down with both mutations; punishment beats
    reward at equal leverage.  Budget below the small bound: a stable
    equilibrium in (0, 1/2)."""
    rng = np.random.default_rng(606)
    step = 1e-3
    tie = 1e-9  # the sensitivity to mu and q vanishes as x* -> 1/2
    for _ in range(1000):
        p = random_strict(rng)
        strong = p.replace(delta=1.01 * incentive_threshold(p))
        assert _stable_high(find_equilibria(strong, _SWEEP_CFG)), strong

    def sweep(tag, n, perturb, expect_sign):
        moved = 0
        for _ in range(n):
            p = random_strict(rng)
            strong, shifted = perturb(p)
            diff = (_largest_stable_above_half(shifted)
                    - _largest_stable_above_half(strong)) * expect_sign
            assert diff > -tie, (tag, p)
            if diff > tie:
                moved += 1
        assert moved >= 0.9 * n, (tag, moved)

    def bump_delta(p):
        strong = p.replace(delta=1.01 * incentive_threshold(p))
        return strong, strong.replace(delta=strong.delta * (1 + step))

    def bump_mu(p):
        strong = p.replace(delta=1.01 * incentive_threshold(p))
        return strong, strong.replace(mu=min(strong.mu * (1 + step), 1 - 1e-12))

    def bump_q(p):
        side = (p.c * ((p.d - 2) * p.r + p.d) ** 2
                / (8 * (p.d - 1) * p.d * p.r))
        lever = min(p.b_lev * (1 - p.omega), p.a_lev * p.omega)
        strong = p.replace(delta=1.01 * max(incentive_threshold(p), side / lever))
        return strong, strong.replace(q=min(strong.q * (1 + step), 0.5 - 1e-12))

    sweep("delta", 300, bump_delta, +1.0)
    sweep("mu", 300, bump_mu, -1.0)
    sweep("q", 300, bump_q, -1.0)

    strict_triples = 0
    for _ in range(300):
        p = random_strict(rng)
        p_eq = p.replace(b_lev=p.a_lev)
        delta = 1.01 * (p_eq.c / (2 * p_eq.d)) * (p_eq.d - p_eq.r) / (
            p_eq.a_lev * (1 - 0.5 ** p_eq.d))
        xs = {}
        for name, omega in (("reward", 1.0), ("mixed", 0.5), ("punish", 0.0)):
            trial = GameParameters(
                d=p_eq.d, r=p_eq.r, c=p_eq.c, q=p_eq.q, mu=p_eq.mu,
                delta=delta, a_lev=p_eq.a_lev, b_lev=p_eq.a_lev, omega=omega,
                mode="census")
            xs[name] = _largest_stable_above_half(trial)
        assert xs["reward"] > 0.5 and xs["punish"] < 1.0
        assert xs["reward"] <= xs["mixed"] + tie <= xs["punish"] + 2 * tie
        if xs["reward"] + tie < xs["mixed"] < xs["punish"] - tie:
            strict_triples += 1
    assert strict_triples >= 270

    for _ in range(1000):
        p = random_strict(rng)
        weak = p.replace(delta=0.99 * small_incentive_threshold(p))
        stable_low = [r for r in find_equilibria(weak, _SWEEP_CFG)
                      if r.stability is Stability.STABLE and 0 < r.x < 0.5]
        assert stable_low, weak
    _report("sufficient-incentive",
            "1000 strong draws stable in (1/2,1); monotone in delta/mu/q; "
            "reward<mixed<punishment; 1000 weak draws stable in (0,1/2)")


def test_c07_census_table():
    """Every cell of the boundary-pin census passes at 10^4 draws."""
    for case in all_census_cases():
        report = census_check(case, samples=10_000, seed=777)
        assert report.passed, (case.name, dict(report.observed))
        observed = {k: report.observed[k] for k in sorted(report.observed)}
        print(f"  census {case.name}: observed {observed} "
              f"within {sorted(case.allowed_counts)}")
    _report("census-table", "19 cells x 10^4 draws, all within table")


def test_c08_one_or_two_predictor():
    """Predictor never contradicts the root finder; locus branch values."""
    rng = np.random.default_rng(808)
    contradictions = 0
    decided = {OneOrTwo.ONE: 0, OneOrTwo.TWO: 0}
    for _ in range(10_000):
        p = random_strict(rng)
        verdict = one_or_two(p, grid=1024)
        if verdict is OneOrTwo.INCONCLUSIVE:
            continue
        decided[verdict] += 1
        if len(find_equilibria(p, _SWEEP_CFG)) != verdict.value:
            contradictions += 1
    assert contradictions == 0
    assert decided[OneOrTwo.ONE] > 0 and decided[OneOrTwo.TWO] > 0

    from pggdyn import tangency_excluded_branch, tangency_locus_q
    xs = np.linspace(0.0, 1.0, 1003)[1:-1]
    for d in range(5, 21):
        assert min(tangency_excluded_branch(float(x), d) for x in xs) > 0.5
        assert tangency_locus_q(0.5, d) == pytest.approx(
            (d + 1) / (2 * (d - 1)), abs=1e-12)
    _report("one-or-two", f"decided {decided[OneOrTwo.ONE]} one / "
            f"{decided[OneOrTwo.TWO]} two, zero contradictions; "
            "excluded branch above 1/2 for d=5..20")


def test_c09_bifurcation_consistency():
    """Diagram intersections vs root finder at 64 spot values per draw."""
    rng = np.random.default_rng(909)
    draws = 0
    spots_checked = 0
    while draws < 100:
        p = random_strict(rng)
        mid = float(compiled(p).value_scalar(0.5))
        if abs(mid) < 1e-2:   # equilibrium too close to the inversion pole
            continue
        draws += 1
        guards = [m for _, m in saddle_nodes(p, grid=2048)]
        guards += [mu_of_x(0.0, p), mu_of_x(1.0, p)]
        spots = 0
        for u in rng.uniform(1e-4, 1.0 - 1e-4, size=400):
            if spots == 64:
                break
            mu0 = float(u)
            if any(abs(mu0 - g) < 1e-3 for g in guards):
                continue
            spots += 1
            got = horizontal_intersections(p, mu0)
            want = len(find_equilibria(p.replace(mu=mu0), _SWEEP_CFG))
            assert got == want, (p, mu0)
        assert spots == 64
        spots_checked += spots

        for mu0 in rng.uniform(-2.0, 2.0, size=64):
            assert horizontal_intersections(p, float(mu0)) <= 4
        from pggdyn import build_diagram
        assert build_diagram(p, grid=1024).signature.axis_crossings in (0, 2, 4)

        levels = sorted(m for _, m in saddle_nodes(p, grid=2048))
        for i, (_, mu_star) in enumerate(saddle_nodes(p, grid=2048)):
            if any(abs(mu_star - other) < 3e-4
                   for other in levels if other != mu_star):
                continue
            assert count_change_at(p, mu_star) == 2, (p, mu_star)
    _report("bifurcation-consistency",
            f"{spots_checked} spot counts matched exactly over 100 draws; "
            "cap<=4, axis crossings even, saddle jumps = 2")


def test_c10_dynamics_invariance():
    """Simplex conservation over t in [0,100] and caption-basin fates."""
    rng = np.random.default_rng(1010)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 9))
        m = rng.uniform(0.1, 1.0, size=(n, n))
        state = SimplexState(
            frequencies=rng.dirichlet(np.ones(n)),
            payoff_kernel=lambda f, m=m: m @ f,
            mutation_matrix=symmetric_mutation_matrix(
                n, float(rng.uniform(0.0, 0.5))),
            mu=float(rng.uniform(0.0, 0.5)),
        )
        out = integrate_simplex(state, t_end=100.0, dt=0.01)
        drift = max(abs(float(s.frequencies.sum()) - 1.0) for s in out)
        worst = max(worst, drift)
        assert drift <= 1e-9

    p = caption_params(4)
    xs = find_equilibria(p).abscissae()
    stable = [xs[1], xs[3]]
    targets = {
        xs[0] + 1e-3: stable[0],
        0.5 * (xs[1] + xs[2]): stable[0],
        xs[2] + 1e-3: stable[1],
        0.999: stable[1],
    }
    for x0, target in targets.items():
        traj = integrate_scalar(float(x0), p, t_end=120.0, dt=5e-4)
        assert traj.final_state() == pytest.approx(target, abs=1e-6)
    _report("dynamics-invariance",
            f"100 simplex runs, worst sum drift {worst:.2e}; "
            "caption basins land on predicted stable roots")


def test_c11_monte_carlo_majority():
    """One- and two-root draws dominate for every group size; reruns are
    identical under a fixed seed."""
    from pggdyn.cli import main as cli_main
    import tempfile, pathlib
    for d in range(3, 13):
        hist = sample_counts(d, draws=10_000, seed=1234)
        share = (hist.frequency(1) + hist.frequency(2)) / hist.draws
        assert share > 0.5, (d, dict(hist.counts))
        rerun = sample_counts(d, draws=10_000, seed=1234)
        assert rerun.counts == hist.counts
    with tempfile.TemporaryDirectory() as tmp:
        a = pathlib.Path(tmp, "a")
        b = pathlib.Path(tmp, "b")
        for out in (a, b):
            assert cli_main(["sample", "--d", "6", "--iters", "2000",
                             "--seed", "99", "--out", str(out)]) == 0
        assert (a.with_suffix(".csv").read_bytes()
                == b.with_suffix(".csv").read_bytes())
    _report("monte-carlo", "majority of one/two-root draws for d=3..12; "
            "byte-identical reruns")


def test_c12_asymptotics():
    """Limit objects approximate the finite-group system."""
    ref = GameParameters(**NO_INCENTIVE_REF)
    lim = no_incentive_limit(ref)
    x_far = quadratic_equilibria(ref.replace(d=10_000)).roots[0].x
    rel = abs(x_far - lim) / lim
    assert rel <= 1e-3

    xs = np.linspace(0.2, 0.8, 121)
    p = GameParameters(d=2000, r=3.0, c=2.0, q=0.3, mu=0.4, delta=2.0,
                       a_lev=1.0, b_lev=1.5, omega=0.4)
    gaps = [float(np.max(incentive_limit_gap(p.replace(d=d), xs)))
            for d in (50, 100, 500, 2000)]
    assert all(a >= b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-6

    rng = np.random.default_rng(1212)
    matched = 0
    attempts = 0
    while matched < 100 and attempts < 3000:
        attempts += 1
        pd = random_strict(rng, d=2000, delta_hi=5.0)
        model = limit_model(pd)
        roots = [r.x for r in limit_roots(model)]
        if any(min(x, 1 - x) < 0.05 for x in roots):
            continue
        if len(roots) == 2 and roots[1] - roots[0] < 0.05:
            continue
        if np.sign(model.difference(0.0)) != np.sign(gain_at_zero(pd)):
            continue
        if np.sign(model.difference(1.0)) != np.sign(gain_at_one(pd)):
            continue
        assert len(find_equilibria(pd)) == len(roots), pd
        matched += 1
    assert matched == 100
    _report("asymptotics", f"reference limit rel err {rel:.2e}; "
            f"gap ladder {','.join(f'{g:.1e}' for g in gaps)}; "
            "100 well-separated draws count-matched at d=2000")
