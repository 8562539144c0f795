"""Frequency grids, spectral-density containers, and detection scenarios.

Everything downstream (water-filling, waveform synthesis, detection
analytics) works on a uniform baseband grid with bin spacing 1/T, so the
grid and the discrete Riemann integral live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FrequencyGrid",
    "SpectralDensity",
    "Scenario",
    "make_grid",
    "integrate",
    "build_parametric_psd",
    "PSD_KINDS",
]


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform baseband frequency grid over an operational band.

    Bins sit at f_m = m/T for integer m in [-M/2, M/2], where
    M = ceil(W*T) rounded up to even so the bin count M+1 is odd and the
    grid is symmetric about DC.

    Parameters
    ----------
    band_width : float
        Operational bandwidth W in Hz.
    duration : float
        Waveform duration T in seconds; sets the bin spacing 1/T.
    num_bins : int
        Number of bins, always odd and >= 3.
    """

    band_width: float
    duration: float
    num_bins: int

    def __post_init__(self) -> None:
        if self.band_width <= 0 or self.duration <= 0:
            raise ValueError("band_width and duration must be positive")
        if self.num_bins < 3 or self.num_bins % 2 == 0:
            raise ValueError("num_bins must be odd and >= 3")

    @property
    def spacing(self) -> float:
        """Bin spacing in Hz (1/T)."""
        return 1.0 / self.duration

    @property
    def half_order(self) -> int:
        """M/2: the largest harmonic index on the grid."""
        return (self.num_bins - 1) // 2

    @property
    def bin_indices(self) -> np.ndarray:
        """Integer harmonic indices m in [-M/2, M/2]."""
        h = self.half_order
        return np.arange(-h, h + 1)

    @property
    def bin_freqs(self) -> np.ndarray:
        """Bin center frequencies f_m = m/T in Hz."""
        return self.bin_indices / self.duration


def make_grid(band_width: float, duration: float) -> FrequencyGrid:
    """Build the frequency grid for a band W and duration T.

    M = ceil(W*T), rounded up to even so the M+1 bins are symmetric
    about DC. The outermost bins may slightly exceed W/2 (by at most
    1/T) because of the ceiling; the covered band is M/T in [W, W + 2/T].
    """
    if band_width <= 0 or duration <= 0:
        raise ValueError("band_width and duration must be positive")
    m = math.ceil(band_width * duration)
    if m % 2 == 1:
        m += 1
    m = max(m, 2)
    return FrequencyGrid(band_width, duration, m + 1)


@dataclass(frozen=True)
class SpectralDensity:
    """Nonnegative real density sampled on a :class:`FrequencyGrid`.

    Holds either a PSD (power/Hz, e.g. noise or channel) or an ESD
    (energy/Hz, e.g. a waveform's squared spectrum magnitude).
    """

    grid: FrequencyGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.num_bins,):
            raise ValueError(
                f"values length {v.shape} does not match grid bins "
                f"({self.grid.num_bins},)"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("density values must be finite")
        if np.any(v < 0):
            raise ValueError("density values must be nonnegative")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def scaled(self, factor: float) -> "SpectralDensity":
        return SpectralDensity(self.grid, self.values * factor)


def integrate(sd: SpectralDensity) -> float:
    """Riemann integral of the density: sum of values times 1/T."""
    return float(np.sum(sd.values)) * sd.grid.spacing


@dataclass(frozen=True)
class Scenario:
    """Point-target detection scenario: noise and channel PSDs plus
    target fluctuation variance and the transmit energy budget.

    The noise PSD must be strictly positive everywhere; channel (clutter)
    PSD may contain zero bins, which the water-filling design treats
    specially.
    """

    noise_psd: SpectralDensity
    channel_psd: SpectralDensity
    target_variance: float
    energy: float

    def __post_init__(self) -> None:
        if self.noise_psd.grid != self.channel_psd.grid:
            raise ValueError("noise and channel PSDs must share a grid")
        if np.any(self.noise_psd.values <= 0):
            raise ValueError("noise PSD must be strictly positive")
        if self.energy <= 0:
            raise ValueError("energy must be positive")
        if self.target_variance < 0:
            raise ValueError("target_variance must be nonnegative")

    @property
    def grid(self) -> FrequencyGrid:
        return self.noise_psd.grid

    @property
    def zero_channel_bins(self) -> np.ndarray:
        """Indices of bins where the channel PSD vanishes."""
        return np.flatnonzero(self.channel_psd.values == 0)

    def with_energy(self, energy: float) -> "Scenario":
        """Same scene with a different transmit energy budget."""
        return Scenario(
            self.noise_psd, self.channel_psd, self.target_variance, energy
        )


# ---------------------------------------------------------------------------
# Parametric PSD families
#
# The qualitative shapes (broad noise valley about DC, oscillatory clutter
# with a DC peak, flat clutter with a DC notch) are reproduced with small
# documented parameter sets; 'custom_table' interpolates a user table.
# ---------------------------------------------------------------------------

def _flat(f: np.ndarray, W: float, level: float = 1.0) -> np.ndarray:
    return np.full_like(f, float(level))


def _noise_valley(
    f: np.ndarray, W: float, n_min: float = 0.01, n_max: float = 1.0
) -> np.ndarray:
    # raised-cosine valley: n_min at DC, n_max at the band edges
    if n_min <= 0 or n_max <= 0:
        raise ValueError("noise levels must be positive")
    return n_min + (n_max - n_min) * 0.5 * (1.0 - np.cos(2.0 * np.pi * f / W))


def _clutter_peak(
    f: np.ndarray,
    W: float,
    floor: float = 0.05,
    peak_height: float = 1.0,
    peak_width: float = 1.5,
    osc_height: float = 0.3,
    osc_cycles: float = 4.0,
) -> np.ndarray:
    # Gaussian peak at DC plus a cos^2 ripple across the band
    gauss = peak_height * np.exp(-(f**2) / (2.0 * peak_width**2))
    ripple = osc_height * np.cos(2.0 * np.pi * f * osc_cycles / W) ** 2
    return floor + gauss + ripple


def _clutter_notch(
    f: np.ndarray,
    W: float,
    level: float = 0.5,
    notch_depth: float = 0.98,
    notch_width: float = 1.5,
) -> np.ndarray:
    if not 0 <= notch_depth <= 1:
        raise ValueError("notch_depth must lie in [0, 1]")
    return level * (1.0 - notch_depth * np.exp(-(f**2) / (2.0 * notch_width**2)))


def _custom_table(f: np.ndarray, W: float, freqs=None, values=None) -> np.ndarray:
    if freqs is None or values is None:
        raise ValueError("custom_table requires 'freqs' and 'values'")
    freqs = np.asarray(freqs, dtype=float)
    values = np.asarray(values, dtype=float)
    if freqs.ndim != 1 or freqs.shape != values.shape:
        raise ValueError("freqs and values must be 1-D arrays of equal length")
    if np.any(np.diff(freqs) <= 0):
        raise ValueError("table frequencies must be strictly increasing")
    return np.interp(f, freqs, values)


PSD_KINDS = {
    "flat": _flat,
    "noise_valley": _noise_valley,
    "clutter_peak": _clutter_peak,
    "clutter_notch": _clutter_notch,
    "custom_table": _custom_table,
}


def build_parametric_psd(
    kind: str, params: dict | None, grid: FrequencyGrid
) -> SpectralDensity:
    """Sample a named parametric PSD family on a grid.

    ``kind`` is one of ``flat``, ``noise_valley``, ``clutter_peak``,
    ``clutter_notch`` or ``custom_table``; ``params`` are keyword
    arguments of the family (see the builder functions in this module).
    Noise-type kinds must produce strictly positive samples.
    """
    try:
        builder = PSD_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown PSD kind {kind!r}") from None
    values = builder(grid.bin_freqs, grid.band_width, **(params or {}))
    if kind == "noise_valley" and np.any(values <= 0):
        raise ValueError("noise PSD must be strictly positive")
    return SpectralDensity(grid, values)
