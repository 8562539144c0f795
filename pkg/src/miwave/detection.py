"""Detection analytics and Monte Carlo validation.

The frequency-domain Neyman-Pearson receiver weights each bin by
S*(f_m) / (P_h |S|^2 + P_n); its performance is fully characterized by
the deflection metric

    d^2 = sigma_A^2 * integral |S|^2 / (P_h |S|^2 + P_n) df

through the ROC relation P_D = P_FA^(1/(1+d^2)). The Monte Carlo
harness simulates the bin-domain signal model x = A*s + h*s + n and
thresholds the same statistic empirically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import Scenario, SpectralDensity

__all__ = [
    "DetectionReport",
    "MonteCarloRoc",
    "detection_metric",
    "analytic_roc",
    "np_statistic",
    "monte_carlo_roc",
]


@dataclass(frozen=True)
class DetectionReport:
    d_squared: float
    roc: list  # (p_fa, p_d) pairs
    esd_used: SpectralDensity


@dataclass(frozen=True)
class MonteCarloRoc:
    trials: int
    thresholds: np.ndarray = field(repr=False)
    p_fa: np.ndarray = field(repr=False)
    p_d: np.ndarray = field(repr=False)
    p_fa_stderr: np.ndarray = field(repr=False)
    p_d_stderr: np.ndarray = field(repr=False)
    rng_seed: int = 0


def detection_metric(esd: SpectralDensity, scenario: Scenario) -> float:
    """Deflection metric d^2 of the NP receiver for a transmit ESD."""
    if esd.grid != scenario.grid:
        raise ValueError("ESD and scenario must share a grid")
    p_n = scenario.noise_psd.values
    p_h = scenario.channel_psd.values
    v = esd.values
    integrand = v / (p_h * v + p_n)
    return float(scenario.target_variance * np.sum(integrand) * esd.grid.spacing)


def analytic_roc(d_squared: float, p_fa_list) -> list:
    """ROC pairs (p_fa, p_d) with p_d = p_fa**(1/(1+d^2))."""
    if d_squared < 0:
        raise ValueError("d_squared must be nonnegative")
    p_fa = np.asarray(p_fa_list, dtype=float)
    if np.any(p_fa <= 0) or np.any(p_fa > 1):
        raise ValueError("p_fa values must lie in (0, 1]")
    p_d = p_fa ** (1.0 / (1.0 + d_squared))
    return list(zip(p_fa.tolist(), p_d.tolist()))


def np_statistic(x_bins, s_bins, scenario: Scenario) -> float:
    """NP test statistic |sum_m X_m S_m* / (P_h |S_m|^2 + P_n)|^2.

    Accumulates sequentially in bin order so an independent scalar-loop
    check reproduces it exactly.
    """
    x = np.asarray(x_bins, dtype=complex)
    s = np.asarray(s_bins, dtype=complex)
    n = scenario.grid.num_bins
    if x.shape != (n,) or s.shape != (n,):
        raise ValueError("x_bins and s_bins must match the scenario grid")
    denom = scenario.channel_psd.values * np.abs(s) ** 2 + scenario.noise_psd.values
    acc = 0j
    for m in range(n):
        acc += x[m] * np.conj(s[m]) / denom[m]
    return float(np.abs(acc) ** 2)


def _cn_samples(rng: np.random.Generator, var: np.ndarray, shape) -> np.ndarray:
    # circular complex normal CN(0, var) per bin
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def monte_carlo_roc(
    waveform_spectrum_bins,
    scenario: Scenario,
    trials: int,
    seed: int,
    p_fa_grid=(0.001, 0.01, 0.1, 0.5),
) -> MonteCarloRoc:
    """Empirical ROC of the NP receiver by direct simulation.

    Each trial draws per-bin channel and noise samples with variances
    P_h(f_m)*T and P_n(f_m)*T (the Fourier coefficient of a stationary
    process over a window of length T has variance PSD*T), plus a fresh
    target amplitude A ~ CN(0, sigma_A^2) under H1. Thresholds are the
    empirical H0 quantiles at the requested false-alarm rates.
    """
    if trials < 1000:
        raise ValueError("trials must be at least 1000")
    s = np.asarray(waveform_spectrum_bins, dtype=complex)
    if s.shape != (scenario.grid.num_bins,):
        raise ValueError("waveform spectrum must match the scenario grid")
    p_fa_grid = np.asarray(p_fa_grid, dtype=float)
    if np.any(p_fa_grid <= 0) or np.any(p_fa_grid >= 1):
        raise ValueError("p_fa grid values must lie in (0, 1)")

    rng = np.random.default_rng(seed)
    bin_var = scenario.grid.duration  # PSD -> Fourier-coefficient variance
    var_h = scenario.channel_psd.values * bin_var
    var_n = scenario.noise_psd.values * bin_var
    denom = scenario.channel_psd.values * np.abs(s) ** 2 + scenario.noise_psd.values
    weight = np.conj(s) / denom

    shape = (trials, s.size)
    clutter = _cn_samples(rng, var_h, shape) * s
    noise = _cn_samples(rng, var_n, shape)
    x0 = clutter + noise
    amp = _cn_samples(rng, np.array(scenario.target_variance), (trials, 1))
    x1 = amp * s + x0

    stat0 = np.abs(x0 @ weight) ** 2
    stat1 = np.abs(x1 @ weight) ** 2

    thresholds = np.quantile(stat0, 1.0 - p_fa_grid)
    p_fa_hat = np.mean(stat0[:, None] > thresholds[None, :], axis=0)
    p_d_hat = np.mean(stat1[:, None] > thresholds[None, :], axis=0)
    se = lambda p: np.sqrt(p * (1.0 - p) / trials)
    return MonteCarloRoc(
        trials=trials,
        thresholds=thresholds,
        p_fa=p_fa_hat,
        p_d=p_d_hat,
        p_fa_stderr=se(p_fa_hat),
        p_d_stderr=se(p_d_hat),
        rng_seed=int(seed),
    )
