"""Fragmented two-exchange market simulator with a bootstrap replication toolkit."""

try:
    from ._fragsim import (  # noqa: F401
        GreedyVariant,
        SimParams,
        ZiStrategy,
        bootstrap_ci,
        builtin_experiments,
        experiment_profile,
        one_sample_t_test,
        run_cell,
        run_simulation,
        sample_mixture,
        self_alignment,
        strategy_table,
        __version__,
    )
except ImportError:
    # Plain CMake builds leave the extension next to this package rather
    # than inside it.
    from _fragsim import (  # noqa: F401
        GreedyVariant,
        SimParams,
        ZiStrategy,
        bootstrap_ci,
        builtin_experiments,
        experiment_profile,
        one_sample_t_test,
        run_cell,
        run_simulation,
        sample_mixture,
        self_alignment,
        strategy_table,
        __version__,
    )
