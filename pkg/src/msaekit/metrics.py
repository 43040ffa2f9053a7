"""Time-domain losses and evaluation measures."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

SNR_CAP_DB = 120.0


@dataclass(frozen=True)
class PmseParams:
    """Pre-emphasis ``beta`` and mu-law ``mu``; ``(0, 0)`` is plain MSE.

    The defaults are conventional speech-processing settings, not values
    taken from any reference system.
    """

    beta: float = 0.97
    mu: float = 255.0

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise DomainError(f"beta must lie in [0, 1), got {self.beta}")
        if self.mu < 0:
            raise DomainError(f"mu must be >= 0, got {self.mu}")


def _pair(s, s_hat):
    s = np.asarray(s, dtype=np.float64)
    s_hat = np.asarray(s_hat, dtype=np.float64)
    if s.shape != s_hat.shape:
        raise DomainError(f"length mismatch: {s.shape} vs {s_hat.shape}")
    if s.size == 0:
        raise DomainError("empty signals")
    return s, s_hat


def mse(s, s_hat) -> float:
    s, s_hat = _pair(s, s_hat)
    d = s - s_hat
    return float(np.mean(d * d))


def mu_law(v, mu: float):
    if mu < 0:
        raise DomainError(f"mu must be >= 0, got {mu}")
    v = np.asarray(v, dtype=np.float64)
    if mu == 0:
        return v.copy() if v.ndim else float(v)
    out = np.sign(v) * np.log1p(mu * np.abs(v)) / np.log1p(mu)
    return out if out.ndim else float(out)


def pre_emphasis(x, beta: float) -> np.ndarray:
    """``x[n] - beta * x[n-1]`` with ``x[-1] = 0``."""
    x = np.asarray(x, dtype=np.float64)
    if beta == 0:
        return x
    out = x.copy()
    out[1:] -= beta * x[:-1]
    return out


def pmse(s, s_hat, p: PmseParams = PmseParams(), weights=None) -> float:
    """Squared error between pre-emphasized, mu-law companded signals.

    ``weights`` (per sample) turns the mean into a weighted mean, e.g. with
    :func:`activity_weights` output.
    """
    s, s_hat = _pair(s, s_hat)
    a = mu_law(pre_emphasis(s, p.beta), p.mu)
    b = mu_law(pre_emphasis(s_hat, p.beta), p.mu)
    d = (a - b) ** 2
    if weights is None:
        return float(np.mean(d))
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != d.shape:
        raise DomainError(f"weights shape {w.shape} differs from signal shape {d.shape}")
    return float(np.mean(w * d))


def dual_path_loss(s, s_hat, x, x_hat, p: PmseParams = PmseParams()) -> float:
    return pmse(s, s_hat, p) + pmse(x, x_hat, p)


@dataclass(frozen=True)
class SpeechActivityWeights:
    prior: float
    n_active: int
    n_inactive: int
    w_active: float
    w_inactive: float

    def per_sample(self, is_active) -> np.ndarray:
        flags = np.asarray(is_active, dtype=bool)
        return np.where(flags, self.w_active, self.w_inactive)


def activity_weights(is_active, prior: float = 0.75) -> SpeechActivityWeights:
    """Sample weights that impose an active-speech prior on a batch.

    Batches that are all active or all inactive get unit weights.
    """
    if not 0.0 <= prior <= 1.0:
        raise DomainError(f"prior must lie in [0, 1], got {prior}")
    flags = np.asarray(is_active, dtype=bool).ravel()
    if flags.size == 0:
        raise DomainError("no samples to weight")
    m1 = int(flags.sum())
    m0 = int(flags.size - m1)
    if m1 == 0 or m0 == 0:
        return SpeechActivityWeights(prior, m1, m0, 1.0, 1.0)
    total = m0 + m1
    return SpeechActivityWeights(prior, m1, m0, prior * total / m1, (1 - prior) * total / m0)


def activity_flags(reference, sample_rate: int = 16000, frame_ms: float = 20.0, rel_threshold: float = 0.01):
    """Per-sample speech flags: a 20 ms frame is active when its RMS exceeds
    ``rel_threshold`` times the global RMS."""
    x = np.asarray(reference, dtype=np.float64)
    flen = max(1, int(round(frame_ms * sample_rate / 1000.0)))
    global_rms = math.sqrt(float(np.mean(x * x))) if x.size else 0.0
    flags = np.zeros(x.shape[0], dtype=bool)
    if global_rms == 0:
        return flags
    for start in range(0, x.shape[0], flen):
        seg = x[start : start + flen]
        flags[start : start + flen] = math.sqrt(float(np.mean(seg * seg))) > rel_threshold * global_rms
    return flags


def snr_db(reference, estimate) -> float:
    ref, est = _pair(reference, estimate)
    p_ref = float(np.sum(ref * ref))
    if p_ref == 0:
        raise DomainError("reference is all zero")
    p_err = float(np.sum((ref - est) ** 2))
    if p_err == 0:
        return SNR_CAP_DB
    return min(SNR_CAP_DB, 10.0 * math.log10(p_ref / p_err))


def reconstruction_error_db(x, x_hat) -> float:
    """``10 log10(|x - x_hat|^2 / |x|^2)``; 0 dB means the error is as loud as the signal."""
    return -snr_db(x, x_hat)


def segmental_snr_db(reference, estimate, frame_len: int = 320, lo: float = -10.0, hi: float = 35.0) -> float:
    """Mean per-frame SNR, each frame clamped to ``[lo, hi]`` dB; silent
    reference frames are skipped."""
    ref, est = _pair(reference, estimate)
    vals = []
    for start in range(0, ref.shape[0] - frame_len + 1, frame_len):
        r = ref[start : start + frame_len]
        e = r - est[start : start + frame_len]
        pr = float(np.sum(r * r))
        if pr == 0:
            continue
        pe = float(np.sum(e * e))
        v = hi if pe == 0 else 10.0 * math.log10(pr / pe)
        vals.append(min(hi, max(lo, v)))
    if not vals:
        raise DomainError("reference has no non-silent frame")
    return float(np.mean(vals))
