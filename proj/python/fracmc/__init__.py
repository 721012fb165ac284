"""Monte Carlo solvers for linear Caputo fractional ODEs."""

from ._core import (
    __version__,
    eval_pair,
    g_density,
    mittag_leffler,
    preset_names,
    sample_inverse_time,
    solve_preset,
)

__all__ = [
    "__version__",
    "eval_pair",
    "g_density",
    "mittag_leffler",
    "preset_names",
    "sample_inverse_time",
    "solve_preset",
]
