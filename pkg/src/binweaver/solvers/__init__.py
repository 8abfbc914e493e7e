from .dispatch import DispatcherTrace, largebins_observation, solve_master
from .exact import (
    BinRule,
    solve_bruteforce,
    solve_distinct_sums_dp,
    solve_zeta_mobius,
    split_items,
)
from .params import paper_parameters
from .sampling import (
    WitnessSearchConfig,
    sample_half_sets,
    solve_balanced_large_slack,
    solve_balanced_small_slack,
    solve_unbalanced_sampler,
)

__all__ = [
    "BinRule",
    "DispatcherTrace",
    "WitnessSearchConfig",
    "largebins_observation",
    "paper_parameters",
    "sample_half_sets",
    "solve_balanced_large_slack",
    "solve_balanced_small_slack",
    "solve_bruteforce",
    "solve_distinct_sums_dp",
    "solve_master",
    "solve_unbalanced_sampler",
    "solve_zeta_mobius",
    "split_items",
]
