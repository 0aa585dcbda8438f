"""Numerical tolerances used across the package.

All comparison thresholds live in one frozen record so that every module and
every test reads the same numbers.  Each field documents the check it guards
and whether it is relative or absolute.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Repo-wide numerical tolerances.

    Instances are immutable; pass a modified copy (dataclasses.replace) to
    individual operations when an analysis genuinely needs looser or tighter
    thresholds.
    """

    equilibrium_residual: float = 1e-8
    """Componentwise-relative vector-field residual accepted for any
    equilibrium this package reports."""

    uninfected_residual: float = 1e-9
    """Tighter residual bound for the uninfected equilibrium, whose first
    component is a plain scalar root."""

    t_star_radical: float = 1e-9
    """Relative agreement required between the quadratic-root T* and its
    independent radical closed form."""

    jacobian_agreement: float = 1e-10
    """Entrywise relative agreement between specialised equilibrium Jacobians
    and the general Jacobian."""

    char_coeff_agreement: float = 1e-8
    """Relative agreement expected between closed-form characteristic
    coefficients and the minor-expansion route."""

    char_coeff_integrity: float = 1e-6
    """Hard ceiling on the closed-vs-minor disagreement; beyond this the
    coefficients raise IntegrityError instead of returning."""

    r0_agreement: float = 1e-12
    """Relative agreement between the closed-form reproduction number and the
    next-generation spectral radius."""

    lyapunov_agreement: float = 1e-9
    """Relative agreement between the gradient-dot-field and collected forms
    of the uninfected Lyapunov derivative."""

    marginal_band: float = 1e-12
    """Absolute half-width around zero inside which a stability quantity is
    classified marginal rather than signed."""

    certificate_margin: float = 1e-9
    """Scaled slack allowed above zero before a grid point counts as a
    certificate violation."""

    bound_slack: float = 1e-6
    """Relative slack applied to invariant-region bounds during trajectory
    checking."""

    benign_dip: float = 1e-10
    """Absolute magnitude below which a negative trajectory component is
    logged as a benign integration dip, not a positivity violation."""


DEFAULT_TOLERANCES = Tolerances()
