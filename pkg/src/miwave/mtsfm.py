"""Multi-tone sinusoidal FM waveform model.

An MTSFM has instantaneous phase phi(t) = -sum_k beta_k cos(2*pi*k*t/T),
so the complex envelope sqrt(E/T)*exp(j*phi) is constant modulus by
construction. Its Fourier-series coefficients c_m (generalized Bessel
values) make it a multicarrier waveform: the spectrum is a superposition
of sinc carriers at m/T, which is what the spectral fitting exploits.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .spectral import FrequencyGrid, SpectralDensity

__all__ = [
    "MtsfmWaveform",
    "CoefficientSet",
    "phase",
    "modulation",
    "time_series",
    "coefficients",
    "spectrum",
    "esd_on_grid",
    "rms_bandwidth",
    "default_order_bound",
]

#: tail energy above which a coefficient set is flagged as truncated
TAIL_TOL = 1e-8


@dataclass(frozen=True)
class MtsfmWaveform:
    """Constant-modulus FM waveform with sine-harmonic modulation.

    Parameters
    ----------
    duration : float
        Pulse length T in seconds; support is [-T/2, T/2).
    energy : float
        Total energy E; envelope magnitude is sqrt(E/T).
    mod_indices : tuple of float
        Modulation indices beta_k for harmonics k = 1..K.
    """

    duration: float
    energy: float
    mod_indices: tuple

    def __post_init__(self) -> None:
        if self.duration <= 0 or self.energy <= 0:
            raise ValueError("duration and energy must be positive")
        beta = tuple(float(b) for b in self.mod_indices)
        if len(beta) < 1:
            raise ValueError("at least one modulation index is required")
        if not all(math.isfinite(b) for b in beta):
            raise ValueError("modulation indices must be finite")
        object.__setattr__(self, "mod_indices", beta)

    @property
    def num_harmonics(self) -> int:
        return len(self.mod_indices)

    @property
    def index_weight(self) -> float:
        """sum_k k*|beta_k|: bounds the instantaneous-frequency excursion
        (in units of 1/T) and hence the coefficient support."""
        return float(
            sum((k + 1) * abs(b) for k, b in enumerate(self.mod_indices))
        )


@dataclass(frozen=True)
class CoefficientSet:
    """Fourier-series coefficients c_m of the unit-modulus phase factor,
    for orders m in [-order_bound, order_bound]."""

    coeffs: np.ndarray = field(repr=False)
    order_bound: int
    energy_scale: float

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.order_bound, self.order_bound + 1)

    @property
    def tail_energy(self) -> float:
        """Unit-energy deficit 1 - sum |c_m|^2 outside the truncation."""
        return float(max(1.0 - np.sum(np.abs(self.coeffs) ** 2), 0.0))

    def at(self, m: int) -> complex:
        if abs(m) > self.order_bound:
            return 0j
        return complex(self.coeffs[m + self.order_bound])


def _check_support(w: MtsfmWaveform, t: np.ndarray) -> None:
    half = w.duration / 2.0
    if np.any(t < -half) or np.any(t > half):
        raise ValueError("t outside the waveform support [-T/2, T/2]")


def phase(w: MtsfmWaveform, t) -> np.ndarray | float:
    """Instantaneous phase phi(t) = -sum_k beta_k cos(2*pi*k*t/T)."""
    t_arr = np.asarray(t, dtype=float)
    _check_support(w, t_arr)
    k = np.arange(1, w.num_harmonics + 1)
    beta = np.array(w.mod_indices)
    out = -np.sum(
        beta * np.cos(2.0 * np.pi * np.multiply.outer(t_arr, k) / w.duration),
        axis=-1,
    )
    return out if out.ndim else float(out)


def modulation(w: MtsfmWaveform, t) -> np.ndarray | float:
    """Frequency modulation m(t) = sum_k b_k sin(2*pi*k*t/T), b_k = beta_k*k/T."""
    t_arr = np.asarray(t, dtype=float)
    _check_support(w, t_arr)
    k = np.arange(1, w.num_harmonics + 1)
    b = np.array(w.mod_indices) * k / w.duration
    out = np.sum(
        b * np.sin(2.0 * np.pi * np.multiply.outer(t_arr, k) / w.duration),
        axis=-1,
    )
    return out if out.ndim else float(out)


def max_instantaneous_freq(w: MtsfmWaveform) -> float:
    """Upper bound sum_k |b_k| on |m(t)| in Hz."""
    return w.index_weight / w.duration


def time_series(
    w: MtsfmWaveform,
    sample_rate: float,
    *,
    oversample_guard: float = 2.0,
    strict: bool = True,
):
    """Complex envelope samples on [-T/2, T/2) at a uniform rate.

    Returns ``(t, samples)``. The rate must exceed ``oversample_guard``
    times twice the instantaneous-frequency bound; below that a warning
    is issued, or ValueError when ``strict``.
    """
    if sample_rate <= 0:
        raise ValueError("sample_rate must be positive")
    nyq_guard = oversample_guard * 2.0 * max(max_instantaneous_freq(w), 1.0 / w.duration)
    if sample_rate < nyq_guard:
        msg = (
            f"sample_rate {sample_rate:.3g} Hz below Nyquist guard "
            f"{nyq_guard:.3g} Hz"
        )
        if strict:
            raise ValueError(msg)
        warnings.warn(msg, stacklevel=2)
    n = max(int(round(sample_rate * w.duration)), 2)
    t = -w.duration / 2.0 + np.arange(n) * (w.duration / n)
    samples = np.sqrt(w.energy / w.duration) * np.exp(1j * phase(w, t))
    return t, samples


def default_order_bound(w: MtsfmWaveform, guard: int = 16) -> int:
    """Truncation order ceil(sum_k k*|beta_k|) plus a guard for skirts."""
    return int(math.ceil(w.index_weight)) + guard


def _coeffs_fft(w: MtsfmWaveform, order_bound: int) -> np.ndarray:
    n = 1 << max(int(math.ceil(math.log2(8 * (2 * order_bound + 1)))), 6)
    t = -w.duration / 2.0 + np.arange(n) * (w.duration / n)
    g = np.exp(1j * phase(w, t))
    f = np.fft.fft(g) / n
    m = np.arange(-order_bound, order_bound + 1)
    # (-1)^m phase ramp accounts for the -T/2 origin of the samples
    return f[m % n] * (-1.0) ** m


def coefficients(
    w: MtsfmWaveform,
    order_bound: int | None = None,
    *,
    tail_tol: float = TAIL_TOL,
) -> CoefficientSet:
    """Fourier coefficients of exp(j*phi(t)) by dense FFT quadrature.

    With ``order_bound=None`` the truncation grows (guard doubling from
    16) until the Parseval tail is below ``tail_tol``. An explicit
    ``order_bound`` is honored as-is; a tail above ``tail_tol`` then
    only triggers a warning, since callers such as the spectral-fit
    objective deliberately truncate.
    """
    if order_bound is not None:
        if order_bound < 1:
            raise ValueError("order_bound must be >= 1")
        c = _coeffs_fft(w, order_bound)
        cs = CoefficientSet(c, order_bound, w.energy)
        if cs.tail_energy > tail_tol:
            warnings.warn(
                f"coefficient tail energy {cs.tail_energy:.2e} exceeds "
                f"{tail_tol:.1e}; order_bound {order_bound} truncates support",
                stacklevel=2,
            )
        return cs
    guard = 16
    base = int(math.ceil(w.index_weight))
    for _ in range(10):
        c = _coeffs_fft(w, base + guard)
        cs = CoefficientSet(c, base + guard, w.energy)
        if cs.tail_energy <= tail_tol:
            return cs
        guard *= 2
    warnings.warn(
        f"coefficient tail {cs.tail_energy:.2e} still above {tail_tol:.1e} "
        f"at order bound {base + guard // 2}",
        stacklevel=2,
    )
    return cs


def spectrum(w: MtsfmWaveform, coeffs: CoefficientSet, f) -> np.ndarray | complex:
    """Truncated multicarrier spectrum sqrt(E*T) * sum_m c_m sinc(T*f - m)."""
    f_arr = np.atleast_1d(np.asarray(f, dtype=float))
    m = coeffs.orders
    args = w.duration * f_arr[:, None] - m[None, :]
    out = np.sqrt(w.energy * w.duration) * (np.sinc(args) @ coeffs.coeffs)
    return out if np.ndim(f) else complex(out[0])


def esd_on_grid(
    w: MtsfmWaveform, grid: FrequencyGrid, coeffs: CoefficientSet | None = None
) -> SpectralDensity:
    """ESD sampled at the grid bins: E*T*|c_m|^2 at f = m/T.

    The sinc carriers are orthonormal and vanish at the other bins, so
    the on-grid ESD is exact. Energy beyond the grid's outermost bin is
    the out-of-band tail and simply missing from the integral.
    """
    if not math.isclose(grid.duration, w.duration, rel_tol=1e-12):
        raise ValueError("grid spacing must equal 1/T of the waveform")
    if coeffs is None:
        coeffs = coefficients(w)
    values = np.zeros(grid.num_bins)
    h = grid.half_order
    lo = min(h, coeffs.order_bound)
    m = np.arange(-lo, lo + 1)
    values[m + h] = (
        w.energy * w.duration * np.abs(coeffs.coeffs[m + coeffs.order_bound]) ** 2
    )
    return SpectralDensity(grid, values)


def rms_bandwidth(esd: SpectralDensity, energy: float) -> float:
    """RMS bandwidth sqrt((2*pi)^2/E * integral f^2 ESD df), in rad/s."""
    if energy <= 0:
        raise ValueError("energy must be positive")
    f = esd.grid.bin_freqs
    second_moment = np.sum(f**2 * esd.values) * esd.grid.spacing
    return float(2.0 * np.pi * np.sqrt(second_moment / energy))
