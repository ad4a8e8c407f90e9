"""Mean passage times of the site-mutation random walk on Hamming classes.

The heavy lifting lives in the compiled ``_core`` module; this package
re-exports its public surface.
"""

from ._core import (  # noqa: F401
    AllCensoredError,
    EstimateReport,
    ModelParams,
    NonConvergenceError,
    PassageTimeReport,
    SeriesControl,
    SingularSystemError,
    __version__,
    class_distribution,
    ehrenfest_hitting_times,
    ehrenfest_hitting_times_exact,
    ergodic_residual,
    estimate_hitting_time,
    f_generating,
    g_generating,
    hitting_times,
    hitting_times_exact,
    lempot_residual,
    lempot_residual_exact,
    lumping_consistency,
    passage_time_explicit,
    passage_time_kac_series,
    phi,
    return_time_class,
    return_time_zero,
    stationary,
    stationary_exact,
    transition_matrix,
    traversal_time,
    vandermonde_check,
)
