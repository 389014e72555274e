"""Harmonic analysis on desk-scale abelian groups and compactness diagnostics for function families."""

from lca_pego import families  # noqa: F401  registers the builtin generators
from lca_pego.compactness import (
    FunctionFamily,
    aa_check,
    greedy_epsilon_net,
    oracle_cross_check,
    pego_check,
    sudakov_bound,
)
from lca_pego.errors import LcaPegoError
from lca_pego.groups import dual_of, make_group
from lca_pego.operator import make_operator, opnorm_exact, opnorm_power_iteration
from lca_pego.transform import GroupFunction, convolve, fourier, inverse_fourier, norm

__all__ = [
    "FunctionFamily",
    "GroupFunction",
    "LcaPegoError",
    "aa_check",
    "convolve",
    "dual_of",
    "fourier",
    "greedy_epsilon_net",
    "inverse_fourier",
    "make_group",
    "make_operator",
    "norm",
    "opnorm_exact",
    "opnorm_power_iteration",
    "oracle_cross_check",
    "pego_check",
    "sudakov_bound",
]
