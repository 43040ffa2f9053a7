"""Synthetic test signals and an additive-noise mixer for demos and tests."""

from __future__ import annotations

import numpy as np

from .errors import DomainError


def speech_shaped_noise(length: int, seed: int = 0, sample_rate: int = 16000, modulate: bool = True) -> np.ndarray:
    """Gaussian noise with a long-term speech-like spectrum, unit RMS.

    Flat up to 500 Hz and falling 9 dB per octave above, with a 100 Hz
    high-pass corner. ``modulate`` adds a 4 Hz syllable-rate envelope.
    """
    rng = np.random.default_rng(seed)
    spec = np.fft.rfft(rng.standard_normal(length))
    f = np.fft.rfftfreq(length, 1.0 / sample_rate)
    gain = np.ones_like(f)
    above = f > 500.0
    gain[above] = 10.0 ** (-9.0 * np.log2(f[above] / 500.0) / 20.0)
    gain *= f**2 / (f**2 + 100.0**2)
    x = np.fft.irfft(spec * gain, length)
    if modulate:
        x *= 1.0 + 0.8 * np.sin(2 * np.pi * 4.0 * np.arange(length) / sample_rate)
    return x / np.sqrt(np.mean(x * x))


def colored_noise(length: int, color: str = "white", seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    w = rng.standard_normal(length)
    if color == "white":
        x = w
    elif color == "pink":
        spec = np.fft.rfft(w)
        f = np.arange(spec.shape[0], dtype=np.float64)
        f[0] = 1.0
        x = np.fft.irfft(spec / np.sqrt(f), length)
    else:
        raise DomainError(f"unknown noise color {color!r}")
    return x / np.sqrt(np.mean(x * x))


def mix_at_snr(clean: np.ndarray, snr_db: float, color: str = "white", seed: int = 0):
    """Add noise scaled to the requested global SNR; returns ``(noisy, noise)``."""
    clean = np.asarray(clean, dtype=np.float64)
    p_s = np.mean(clean * clean)
    if p_s == 0:
        raise DomainError("cannot set an SNR against a silent signal")
    noise = colored_noise(clean.shape[0], color, seed)
    noise *= np.sqrt(p_s / 10.0 ** (snr_db / 10.0))
    return clean + noise, noise
