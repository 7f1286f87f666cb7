"""Replicator-mutator dynamics of d-player public goods games.

Equilibrium structure, stability, bifurcations, parameter sweeps and
large-group asymptotics for the cooperation dynamics with additive and
multiplicative mutation, with or without institutional incentives.
"""

from .params import GameParameters, ParameterError, PayoffTable, payoff_entries
from .gain import (
    GainEvaluation,
    average_fitness,
    baseline_part,
    evaluate_gain,
    gain,
    gain_at_one,
    gain_at_zero,
    gain_derivatives,
    gain_via_payoffs,
    incentive_part,
    incentive_part_second_derivative,
)
from .equilibria import (
    Equilibrium,
    EquilibriumSet,
    Method,
    MoreThanFourRoots,
    NotAnEquilibrium,
    RootFinderConfig,
    Stability,
    WrongMode,
    classify,
    find_equilibria,
    incentive_threshold,
    quadratic_equilibria,
    small_incentive_threshold,
)
from .analysis import (
    CensusCase,
    CensusReport,
    OneOrTwo,
    Pin,
    SingularAtHalf,
    TangencyPoint,
    all_census_cases,
    baseline_upturned,
    census_case,
    census_check,
    concavity_sensitivities,
    incentive_part_concave,
    one_or_two,
    tangency_excluded_branch,
    tangency_locus,
    tangency_locus_q,
)
from .bifurcation import (
    BifurcationDiagram,
    BifurcationSample,
    DiagramSignature,
    Side,
    build_diagram,
    count_change_at,
    horizontal_intersections,
    mu_of_x,
    saddle_nodes,
)
from .dynamics import (
    NegativeFrequency,
    SimplexState,
    StepTooLarge,
    Trajectory,
    integrate_scalar,
    integrate_simplex,
    pgg_fitness_kernel,
    symmetric_mutation_matrix,
)
from .montecarlo import CountHistogram, SamplingRanges, draw_parameters, sample_counts
from .asymptotics import (
    DegenerateQuadratic,
    LimitModel,
    LimitRoot,
    incentive_limit_gap,
    limit_model,
    limit_roots,
    no_incentive_limit,
)

__version__ = "0.1.0"
