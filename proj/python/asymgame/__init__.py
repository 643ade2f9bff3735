"""Belief dynamics, strategy values, optimality certificates and Monte-Carlo
simulation for a two-state zero-sum repeated game with one-sided information.

The heavy lifting lives in the compiled extension ``asymgame._core``; this
package re-exports its operations.
"""

from ._core import (
    alpha,
    certify,
    f_B,
    f_T,
    margin_curve,
    orbit,
    payoff_independence,
    perturb,
    phi,
    psi,
    respond,
    simulate,
    value,
    z_n,
)

__all__ = [
    "alpha",
    "certify",
    "f_B",
    "f_T",
    "margin_curve",
    "orbit",
    "payoff_independence",
    "perturb",
    "phi",
    "psi",
    "respond",
    "simulate",
    "value",
    "z_n",
]

__version__ = "0.1.0"
