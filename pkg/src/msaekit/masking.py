"""Mask application, oracle masks and the frame-wise enhancement pipeline."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Protocol

import numpy as np

from .autoencoder import DEFAULT_CONFIG, EmbeddingTensor, MsaeConfig, decode, encode
from .errors import ConsistencyError, DomainError
from .signal_io import ProcessingFrame, Waveform, overlap_add, split_frames
from .xform import NUM_CHANNELS, coefficients

DEFAULT_FRAME_LEN = 20480


@dataclass(frozen=True)
class GainFloor:
    """Minimum mask value, given in amplitude decibels."""

    db_value: float = -50.0

    def __post_init__(self):
        if self.db_value > 0:
            raise DomainError(f"gain floor must be <= 0 dB, got {self.db_value}")

    @property
    def linear_value(self) -> float:
        if self.db_value == -np.inf:
            return 0.0
        return float(10.0 ** (self.db_value / 20.0))


def _data(z) -> np.ndarray:
    return z.data if isinstance(z, EmbeddingTensor) else np.asarray(z, dtype=np.float64)


def check_mask(m: np.ndarray, shape: tuple) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.shape != tuple(shape):
        raise ConsistencyError(f"mask shape {m.shape} does not match embedding shape {tuple(shape)}")
    if m.size and (np.isnan(m).any() or m.min() < 0.0 or m.max() > 1.0):
        raise DomainError("mask values must lie in [0, 1]")
    return m


def apply_mask(z, m: np.ndarray, floor: GainFloor = GainFloor()) -> EmbeddingTensor | np.ndarray:
    """Element-wise ``max(floor, m) * z``."""
    data = _data(z)
    m = check_mask(m, data.shape)
    out = np.maximum(floor.linear_value, m) * data
    if isinstance(z, EmbeddingTensor):
        return z.with_data(out)
    return out


def _broadcast(gain: np.ndarray) -> np.ndarray:
    return np.repeat(gain[..., None], NUM_CHANNELS, axis=-1)


@dataclass
class MaskStats:
    elements: int = 0
    zero_denominator: int = 0


def oracle_wiener_mask(z_target, z_noisy, stats: Optional[MaskStats] = None) -> np.ndarray:
    """Per-bin ``P_s / (P_s + P_n)`` with the noise taken as ``noisy - target``.

    One gain per (frame, bin) is copied to all four channels so the sign
    pattern of the complex coefficient is kept.
    """
    t, x = _data(z_target), _data(z_noisy)
    if t.shape != x.shape:
        raise ConsistencyError(f"target shape {t.shape} differs from noisy shape {x.shape}")
    cs = coefficients(t)
    cn = coefficients(x) - cs
    ps = np.abs(cs) ** 2
    pn = np.abs(cn) ** 2
    den = ps + pn
    zero = den == 0
    gain = np.divide(ps, den, out=np.zeros_like(ps), where=~zero)
    gain[zero & (ps > 0)] = 1.0
    if stats is not None:
        stats.elements += gain.size
        stats.zero_denominator += int(zero.sum())
    return _broadcast(np.clip(gain, 0.0, 1.0))


def oracle_amplitude_mask(z_target, z_noisy) -> np.ndarray:
    """Ideal ratio of complex moduli, ``min(1, |c_s| / |c_x|)``; 0 on empty bins."""
    t, x = _data(z_target), _data(z_noisy)
    if t.shape != x.shape:
        raise ConsistencyError(f"target shape {t.shape} differs from noisy shape {x.shape}")
    a_s = np.abs(coefficients(t))
    a_x = np.abs(coefficients(x))
    gain = np.divide(a_s, a_x, out=np.zeros_like(a_s), where=a_x > 0)
    return _broadcast(np.minimum(gain, 1.0))


class MaskSource(Protocol):
    """Maps an embedding to a mask of the same shape.

    Sources with ``needs_target = True`` also receive the embedding of the
    parallel target signal, scaled with the noisy frame's gain.
    """

    needs_target: bool

    def __call__(self, z: EmbeddingTensor, z_target: Optional[EmbeddingTensor] = None) -> np.ndarray: ...


class ConstantMask:
    needs_target = False

    def __init__(self, value: float = 1.0):
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"mask value must lie in [0, 1], got {value}")
        self.value = float(value)

    def __call__(self, z, z_target=None):
        return np.full(_data(z).shape, self.value)


class OracleWienerMask:
    needs_target = True

    def __call__(self, z, z_target=None):
        if z_target is None:
            raise DomainError("the oracle Wiener mask needs the target embedding")
        return oracle_wiener_mask(z_target, z)


class OracleAmplitudeMask:
    needs_target = True

    def __call__(self, z, z_target=None):
        if z_target is None:
            raise DomainError("the oracle amplitude mask needs the target embedding")
        return oracle_amplitude_mask(z_target, z)


MASK_SOURCES = {"wiener": OracleWienerMask, "iram": OracleAmplitudeMask}


def _samples(x) -> np.ndarray:
    return x.samples if isinstance(x, Waveform) else np.asarray(x, dtype=np.float64)


def enhance_frame(payload, mask_source: MaskSource, cfg: MsaeConfig, floor: GainFloor, target_payload=None):
    z = encode(payload, cfg)
    zt = encode(target_payload, cfg) if mask_source.needs_target else None
    m = check_mask(mask_source(z, zt), z.shape)
    return decode(apply_mask(z, m, floor), cfg, payload.shape[0])


def enhance(
    x,
    mask_source: MaskSource,
    cfg: MsaeConfig = DEFAULT_CONFIG,
    floor: GainFloor = GainFloor(),
    target=None,
    frame_len: int = DEFAULT_FRAME_LEN,
    threads: int = 1,
) -> np.ndarray:
    """Split, encode, mask, decode and overlap-add a whole signal.

    Output length equals input length. Frames are independent, so
    ``threads > 1`` runs them concurrently; results are gathered in frame
    order and do not depend on the thread count.
    """
    xs = _samples(x)
    cfg.check_length(frame_len)
    frames = split_frames(xs, frame_len)
    if mask_source.needs_target:
        if target is None:
            raise DomainError("this mask source needs a parallel target signal")
        ts = _samples(target)
        if ts.shape != xs.shape:
            raise ConsistencyError(f"target length {ts.shape[0]} differs from input length {xs.shape[0]}")
        targets = split_frames(ts, frame_len, gains=[f.original_gain for f in frames])
    else:
        targets = [None] * len(frames)

    def work(i):
        f = frames[i]
        tp = targets[i].payload if targets[i] is not None else None
        out = enhance_frame(f.payload, mask_source, cfg, floor, tp)
        return ProcessingFrame(out, f.original_gain, f.offset)

    if threads > 1 and len(frames) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            processed = list(pool.map(work, range(len(frames))))
    else:
        processed = [work(i) for i in range(len(frames))]
    return overlap_add(processed, xs.shape[0])


def autoencode_signal(x, cfg: MsaeConfig = DEFAULT_CONFIG, frame_len: int = DEFAULT_FRAME_LEN, threads: int = 1):
    """The enhancement pipeline with masking disabled."""
    return enhance(x, ConstantMask(1.0), cfg, GainFloor(0.0), frame_len=frame_len, threads=threads)
