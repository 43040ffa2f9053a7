"""Band-limited windowed-DFT analysis and synthesis operators.

Analysis correlates a waveform against windowed complex exponentials at a
stride of half the window and splits each complex coefficient into four
non-negative planes ``[relu(re), relu(-re), relu(im), relu(-im)]``.
Synthesis is the matching transposed correlation with kernels scaled for the
missing conjugate half of the spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import ConsistencyError, DomainError

NUM_CHANNELS = 4


def sqrt_hann(n: int) -> np.ndarray:
    """Square root of the periodic Hann window; its square is COLA at hop n/2."""
    k = np.arange(n)
    return np.sqrt(0.5 - 0.5 * np.cos(2 * np.pi * k / n))


def bin_range(n: int, lo: float, hi: float) -> tuple[int, int]:
    """First and last integer DFT bin covering normalized band ``[lo, hi]``."""
    # round before ceil/floor so 0.6 * 80 / 2 lands on bin 24, not 24.000000000000004
    first = math.ceil(round(n * lo / 2, 9))
    last = math.floor(round(n * hi / 2, 9))
    return first, last


def num_filters(n: int, lo: float, hi: float, kappa: float = 1.0) -> int:
    first, last = bin_range(n, lo, hi)
    base = last - first + 1
    if kappa == 1:
        return base
    return math.floor(round(kappa * base, 9))


@dataclass(frozen=True, eq=False)
class KernelSet:
    window_len: int
    band: tuple[float, float]
    kappa: float
    for_synthesis: bool
    freqs: np.ndarray  # center frequencies in DFT-bin units
    real: np.ndarray  # (K_W, N)
    imag: np.ndarray  # (K_W, N)
    synthesis_scale: np.ndarray  # (K_W,)

    @property
    def num_filters(self) -> int:
        return self.real.shape[0]

    @property
    def hop(self) -> int:
        return self.window_len // 2

    def complex_kernels(self) -> np.ndarray:
        return self.real + 1j * self.imag


def build_kernels(
    n: int, lo: float, hi: float, kappa: float = 1.0, for_synthesis: bool = False, window: str = "sqrt_hann"
) -> KernelSet:
    """Windowed DFT basis for band ``[lo, hi]`` with window length ``n``.

    With ``kappa > 1`` the filter count grows to ``floor(kappa * K)`` and the
    center frequencies are spread evenly over the same bin range, endpoints
    included. Synthesis kernels carry a factor 2 for every filter that is not
    exactly at DC or Nyquist, and an extra ``K / K_W`` when overcomplete so the
    autoencoder path keeps unit gain.

    ``window="rect"`` drops the taper; it exists for spectral checks and does
    not give unit-gain resynthesis.
    """
    return _build_kernels(int(n), float(lo), float(hi), float(kappa), bool(for_synthesis), window)


@lru_cache(maxsize=256)
def _build_kernels(n, lo, hi, kappa, for_synthesis, window):
    if n < 2 or n % 2:
        raise DomainError(f"window length must be even and >= 2, got {n}")
    if not 0.0 <= lo < hi <= 1.0:
        raise DomainError(f"need 0 <= lo < hi <= 1, got [{lo}, {hi}]")
    if not kappa >= 1.0:
        raise DomainError(f"overcompleteness must be >= 1, got {kappa}")
    first, last = bin_range(n, lo, hi)
    base = last - first + 1
    if base < 1:
        raise DomainError(f"band [{lo}, {hi}] holds no DFT bin at window length {n}")
    k_w = num_filters(n, lo, hi, kappa)
    if k_w == base:
        freqs = np.arange(first, last + 1, dtype=np.float64)
    else:
        freqs = np.linspace(first, last, k_w)

    if window == "sqrt_hann":
        h = sqrt_hann(n)
    elif window == "rect":
        h = np.ones(n)
    else:
        raise DomainError(f"unknown window {window!r}")
    phase = 2 * np.pi * np.outer(freqs, np.arange(n)) / n
    norm = 1.0 / math.sqrt(n)
    real = h * np.cos(phase) * norm
    imag = -h * np.sin(phase) * norm

    scale = np.where((freqs == 0) | (freqs == n // 2), 1.0, 2.0)
    if k_w != base:
        scale = scale * (base / k_w)
    if for_synthesis:
        real = real * scale[:, None]
        imag = imag * scale[:, None]

    for a in (freqs, real, imag, scale):
        a.setflags(write=False)
    return KernelSet(n, (lo, hi), kappa, for_synthesis, freqs, real, imag, scale)


def num_frames(length: int, n: int) -> int:
    return (2 * length) // n


def encode_channels(cr: np.ndarray, ci: np.ndarray) -> np.ndarray:
    out = np.empty(cr.shape + (NUM_CHANNELS,))
    np.maximum(cr, 0.0, out=out[..., 0])
    np.maximum(-cr, 0.0, out=out[..., 1])
    np.maximum(ci, 0.0, out=out[..., 2])
    np.maximum(-ci, 0.0, out=out[..., 3])
    return out


def decode_channels(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return y[..., 0] - y[..., 1], y[..., 2] - y[..., 3]


def coefficients(y: np.ndarray) -> np.ndarray:
    """Complex coefficients carried by a 4-channel tensor."""
    cr, ci = decode_channels(y)
    return cr + 1j * ci


def analyze(x: np.ndarray, ks: KernelSet) -> np.ndarray:
    """Return the ``(floor(2D/N), K_W, 4)`` non-negative analysis tensor."""
    if ks.for_synthesis:
        raise ConsistencyError("analysis needs kernels built with for_synthesis=False")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DomainError("analysis expects a 1-D segment")
    if x.shape[0] < ks.window_len:
        raise DomainError(f"segment of {x.shape[0]} samples is shorter than window {ks.window_len}")
    t = num_frames(x.shape[0], ks.window_len)
    cr, ci = _kernels.strided_correlate(x, ks.real, ks.imag, ks.hop, t)
    return encode_channels(cr, ci)


def synthesize(y: np.ndarray, ks: KernelSet, length: int) -> np.ndarray:
    """Transposed strided correlation of a 4-channel tensor, truncated to ``length``."""
    if not ks.for_synthesis:
        raise ConsistencyError("synthesis needs kernels built with for_synthesis=True")
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 3 or y.shape[2] != NUM_CHANNELS or y.shape[1] != ks.num_filters:
        raise ConsistencyError(
            f"tensor shape {y.shape} does not match {ks.num_filters} filters x {NUM_CHANNELS} channels"
        )
    cr, ci = decode_channels(y)
    return _kernels.transposed_correlate(cr, ci, ks.real, ks.imag, ks.hop, int(length))


def frequency_response(ks: KernelSet, nfft: int = 8192) -> tuple[np.ndarray, np.ndarray]:
    """Power responses of each complex kernel over normalized frequency [0, 1].

    Returns ``(freqs, power)`` where ``power`` has shape ``(K_W, nfft//2 + 1)``
    and folds the negative-frequency half onto the positive axis.
    """
    spec = np.fft.fft(ks.complex_kernels(), n=nfft, axis=1)
    power = np.abs(spec) ** 2
    half = nfft // 2
    folded = power[:, : half + 1].copy()
    folded[:, 1:half] += power[:, : half : -1]
    return np.linspace(0.0, 1.0, half + 1), folded


def in_band_fraction(ks: KernelSet, nfft: int = 8192) -> np.ndarray:
    """Share of each kernel's energy that falls inside its nominal band."""
    f, p = frequency_response(ks, nfft)
    lo, hi = ks.band
    inside = (f >= lo) & (f <= hi)
    return p[:, inside].sum(axis=1) / p.sum(axis=1)
