"""WAV I/O and the split / normalize / overlap-add framing convention."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.io.wavfile as wavfile

from .errors import ConfigurationError, ConsistencyError, DomainError, UnsupportedFormatError, WavFormatError

DEFAULT_SAMPLE_RATE = 16000


@dataclass(frozen=True, eq=False)
class Waveform:
    samples: np.ndarray
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim != 1:
            raise DomainError("waveforms are mono, 1-D")
        if not np.all(np.isfinite(s)):
            raise DomainError("waveform contains NaN or Inf")
        if int(self.sample_rate) <= 0:
            raise DomainError(f"sample rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self):
        return self.samples.shape[0]


def require_rate(w: Waveform, rate: int = DEFAULT_SAMPLE_RATE) -> None:
    if w.sample_rate != rate:
        raise ConfigurationError(f"expected {rate} Hz audio, got {w.sample_rate} Hz (no resampling)")


def read_wav(path) -> Waveform:
    """Read channel 0 of a PCM16 or float32 WAV file as floats in [-1, 1]."""
    path = Path(path)
    with warnings.catch_warnings():
        warnings.simplefilter("error", wavfile.WavFileWarning)
        try:
            rate, data = wavfile.read(path)
        except wavfile.WavFileWarning as e:
            raise WavFormatError(f"{path}: {e}") from e
        except ValueError as e:
            raise WavFormatError(f"{path}: {e}") from e
        except EOFError as e:
            raise WavFormatError(f"{path}: truncated file") from e
    if data.ndim == 2:
        data = data[:, 0]
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32:
        samples = data.astype(np.float64)
    else:
        raise UnsupportedFormatError(f"{path}: unsupported sample type {data.dtype}")
    return Waveform(samples, rate)


def write_wav(path, w: Waveform, pcm16: bool = False) -> None:
    """Write ``w`` as float32 (default) or 16-bit PCM.

    16-bit output rounds to the nearest step of 1/32768 and clips to the
    representable range.
    """
    if pcm16:
        q = np.clip(np.round(w.samples * 32768.0), -32768, 32767).astype(np.int16)
        data = q
    else:
        data = w.samples.astype(np.float32)
    wavfile.write(Path(path), w.sample_rate, data)


# ---------------------------------------------------------------------------
# framing
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProcessingFrame:
    payload: np.ndarray
    original_gain: float
    offset: int


def rms(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(np.sqrt(np.mean(x * x))) if x.size else 0.0


def frame_offsets(length: int, frame_len: int) -> list[int]:
    """Start indices of 50%-overlapping frames that cover ``length`` samples."""
    hop = frame_len // 2
    if length <= frame_len:
        return [0]
    count = math.ceil((length - frame_len) / hop) + 1
    return [i * hop for i in range(count)]


def _check_frame_len(frame_len: int) -> None:
    if frame_len <= 0 or frame_len % 2:
        raise ConfigurationError(f"frame length must be positive and even, got {frame_len}")


def split_frames(
    w: Waveform | np.ndarray, frame_len: int, overlap: float = 0.5, gains: Sequence[float] | None = None
) -> list[ProcessingFrame]:
    """Cut into half-overlapping frames, each scaled to unit RMS.

    The final frame is zero-padded. Silent frames keep gain 0 and zero
    payload. When ``gains`` is given those gains are used instead of each
    frame's own RMS, so a parallel signal can share another signal's scaling.
    """
    _check_frame_len(frame_len)
    if overlap != 0.5:
        raise ConfigurationError(f"only 50% overlap is supported, got {overlap}")
    x = w.samples if isinstance(w, Waveform) else np.asarray(w, dtype=np.float64)
    if x.shape[0] == 0:
        raise DomainError("cannot frame an empty waveform")
    offsets = frame_offsets(x.shape[0], frame_len)
    if gains is not None and len(gains) != len(offsets):
        raise ConsistencyError(f"{len(gains)} gains for {len(offsets)} frames")
    frames = []
    for i, off in enumerate(offsets):
        seg = np.zeros(frame_len)
        chunk = x[off : off + frame_len]
        seg[: chunk.shape[0]] = chunk
        g = rms(seg) if gains is None else float(gains[i])
        payload = seg / g if g > 0 else np.zeros(frame_len)
        frames.append(ProcessingFrame(payload, g, off))
    return frames


def crossfade_weights(frame_len: int, first: bool, last: bool) -> np.ndarray:
    hop = frame_len // 2
    ramp = (np.arange(hop) + 0.5) / hop
    lead = np.ones(hop) if first else ramp
    trail = np.ones(hop) if last else ramp[::-1]
    return np.concatenate([lead, trail])


def overlap_add(frames: Iterable[ProcessingFrame], total_len: int) -> np.ndarray:
    """Restore gains and cross-fade frames back into a ``total_len`` signal.

    Overlapping halves use complementary linear ramps, so the weights at
    every sample sum to one.
    """
    frames = list(frames)
    if not frames:
        raise ConsistencyError("no frames to overlap-add")
    frame_len = frames[0].payload.shape[0]
    _check_frame_len(frame_len)
    hop = frame_len // 2
    for i, f in enumerate(frames):
        if f.payload.shape != (frame_len,):
            raise ConsistencyError(f"frame {i} has length {f.payload.shape[0]}, expected {frame_len}")
        if f.offset != i * hop:
            raise ConsistencyError(f"frame {i} starts at {f.offset}, expected {i * hop}")
    if frame_offsets(total_len, frame_len) != [f.offset for f in frames]:
        raise ConsistencyError(f"{len(frames)} frames do not cover {total_len} samples")
    out = np.zeros(frames[-1].offset + frame_len)
    n = len(frames)
    for i, f in enumerate(frames):
        wts = crossfade_weights(frame_len, i == 0, i == n - 1)
        out[f.offset : f.offset + frame_len] += f.payload * f.original_gain * wts
    return out[:total_len]
