"""Matched-illumination ESD design by spectral water-filling.

The optimal energy spectral density against known noise/channel PSDs is

    E_s(f) = max( (sqrt(P_n(f)/lambda) - P_n(f)) / P_h(f), 0 )

with the water level lambda fixed by the transmit-energy budget. The
allocated energy is strictly decreasing in lambda and reaches zero at
lambda = max_f 1/P_n(f), so a bracketing bisection on log(lambda) always
converges.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, UnboundedAllocationError
from .spectral import Scenario, SpectralDensity, integrate

__all__ = ["MiDesign", "esd_for_lambda", "solve_lambda", "design_mi"]

#: relative tolerance on the achieved energy
ENERGY_TOL = 1e-6

_MAX_ITER = 200


@dataclass(frozen=True)
class MiDesign:
    """Result of the water-filling design."""

    esd: SpectralDensity
    lagrange_lambda: float
    achieved_energy: float
    active_set: np.ndarray = field(repr=False)


def esd_for_lambda(
    scenario: Scenario, lam: float, *, zero_channel_floor: bool = False
) -> SpectralDensity:
    """Evaluate the water-filling ESD for a given water level.

    Bins where the channel PSD is zero but the water-filling numerator is
    positive would receive infinite energy; by default that raises
    :class:`UnboundedAllocationError`. With ``zero_channel_floor=True``
    those bins instead use a tiny floor of 1e-12 times the channel peak
    (warning emitted).
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    p_n = scenario.noise_psd.values
    p_h = scenario.channel_psd.values
    numer = np.sqrt(p_n / lam) - p_n
    hot = (numer > 0) & (p_h == 0)
    if np.any(hot):
        if not zero_channel_floor:
            raise UnboundedAllocationError(
                f"channel PSD vanishes on {np.flatnonzero(hot).tolist()} where "
                "the water-filling numerator is positive"
            )
        warnings.warn(
            "substituting a 1e-12*max(P_h) floor on zero-channel bins",
            stacklevel=2,
        )
        p_h = np.where(p_h == 0, 1e-12 * p_h.max(), p_h)
    values = np.zeros_like(p_n)
    pos = numer > 0
    values[pos] = numer[pos] / p_h[pos]
    return SpectralDensity(scenario.grid, values)


def _allocated(scenario: Scenario, lam: float, zero_channel_floor: bool) -> float:
    return integrate(
        esd_for_lambda(scenario, lam, zero_channel_floor=zero_channel_floor)
    )


def solve_lambda(
    scenario: Scenario,
    *,
    tol: float = ENERGY_TOL,
    max_iter: int = _MAX_ITER,
    zero_channel_floor: bool = False,
) -> float:
    """Find the water level matching the scenario's energy budget.

    Brackets lambda between max_f 1/P_n (zero allocation) and a lower
    value found by repeated halving, then bisects on log(lambda) until
    the allocated energy matches within ``tol`` relative.
    """
    energy = scenario.energy
    lam_hi = float(np.max(1.0 / scenario.noise_psd.values))
    lam_lo = lam_hi
    for _ in range(max_iter):
        lam_lo *= 0.5
        if _allocated(scenario, lam_lo, zero_channel_floor) >= energy:
            break
    else:
        raise ConvergenceError(
            f"could not bracket lambda below {lam_lo:.3e} "
            f"(allocation still < E={energy:.3e})"
        )
    for _ in range(max_iter):
        lam_mid = np.sqrt(lam_lo * lam_hi)
        alloc = _allocated(scenario, lam_mid, zero_channel_floor)
        if abs(alloc - energy) <= tol * energy:
            return float(lam_mid)
        if alloc > energy:
            lam_lo = lam_mid
        else:
            lam_hi = lam_mid
    raise ConvergenceError(
        f"lambda bisection did not reach |alloc-E| <= {tol:.1e}*E in "
        f"{max_iter} iterations (bracket [{lam_lo:.6e}, {lam_hi:.6e}])"
    )


def design_mi(
    scenario: Scenario, *, tol: float = ENERGY_TOL, zero_channel_floor: bool = False
) -> MiDesign:
    """Full matched-illumination design: solve the water level, evaluate
    the ESD, and report the active set."""
    lam = solve_lambda(scenario, tol=tol, zero_channel_floor=zero_channel_floor)
    esd = esd_for_lambda(scenario, lam, zero_channel_floor=zero_channel_floor)
    active = np.flatnonzero(esd.values > 0)
    return MiDesign(esd, lam, integrate(esd), active)
