"""Simulation laboratory for annealed leap-point tempering chains.

The package simulates the vanilla leap-point tempering chain on an
inverse-temperature ladder, flattens its signed temperature path through
the H/Z/W transformations, simulates the limiting reflecting skew
Brownian motion for comparison, and verifies the acceptance-rate,
excursion, occupation, and round-trip complexity predictions, plus the
exact reflecting-walk occupation bounds.
"""

from .chain import ChainState, LaneEnsemble, Trace, poissonize, run, step
from .config import ConfigError, RunConfig, default_config, parse_config
from .harness import (
    ExperimentReport,
    Metric,
    RoundTrip,
    acceptance_profile,
    complexity_scan,
    excursion_experiment,
    excursion_statistics,
    occupation_identity_test,
    oracle_equivalence_test,
    round_trips,
    w_value_table,
    weak_convergence_test,
)
from .demo import demo_scenario, marginal_density
from .ladder import (
    Ladder,
    SkewConstants,
    Spacing,
    build_ladder,
    ell,
    h,
    h_inverse,
    skew_constants,
)
from .model import (
    MixtureTarget,
    ModeSpec,
    SufficientStat,
    exact_accept_prob,
    information,
    log_accept_ratio,
    log_norm_const,
    sample_sufficient_stat,
    sample_tempered_coordinate,
)
from .randomwalk import (
    BirthDeathChain,
    JumpDecomposition,
    bound_sweep,
    exact_distribution,
    jump_decompose,
    lift_map,
    lifted_walk_distribution,
    occupation_experiment,
    verify_refrw_bound,
)
from .skewbm import (
    SkewBMConfig,
    marginal_sample,
    positive_fraction,
    simulate,
    stationary_occupation,
)
from .transform import TransformedPath, invert_to_X, to_H, to_W, to_Z

__version__ = "0.1.0"
