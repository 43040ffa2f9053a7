"""STFT utilities and the oracle Wiener-filtered target signal.

The STFT pads ``hop`` zeros on both sides so every input sample sits under
two frames; with a sqrt-Hann window on analysis and synthesis the
overlap-added squared window is exactly one over the whole signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError
from .xform import sqrt_hann

DEFAULT_WIN = 512


@dataclass(frozen=True, eq=False)
class Stft:
    real: np.ndarray  # (frames, bins)
    imag: np.ndarray
    win_len: int
    hop: int
    length: int

    @property
    def complex(self) -> np.ndarray:
        return self.real + 1j * self.imag

    def with_complex(self, c: np.ndarray) -> "Stft":
        if c.shape != self.real.shape:
            raise ConsistencyError(f"spectrum shape {c.shape} differs from {self.real.shape}")
        return Stft(c.real.copy(), c.imag.copy(), self.win_len, self.hop, self.length)


def _check(win_len: int, hop: int | None) -> int:
    if win_len < 2 or win_len % 2:
        raise DomainError(f"window length must be even and >= 2, got {win_len}")
    if hop is None:
        hop = win_len // 2
    if hop != win_len // 2:
        raise DomainError(f"hop must be half the window ({win_len // 2}), got {hop}")
    return hop


def stft(x, win_len: int = DEFAULT_WIN, hop: int | None = None) -> Stft:
    hop = _check(win_len, hop)
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] < win_len:
        raise DomainError(f"signal of {x.shape[0]} samples is shorter than one window ({win_len})")
    n_frames = math.ceil(x.shape[0] / hop) + 1
    padded = np.zeros((n_frames + 1) * hop)
    padded[hop : hop + x.shape[0]] = x
    frames = np.lib.stride_tricks.sliding_window_view(padded, win_len)[::hop][:n_frames]
    spec = np.fft.rfft(frames * sqrt_hann(win_len), axis=1)
    return Stft(spec.real.copy(), spec.imag.copy(), win_len, hop, x.shape[0])


def istft(X: Stft, length: int | None = None) -> np.ndarray:
    """Matched-window overlap-add, normalized by the summed squared window."""
    length = X.length if length is None else int(length)
    win = sqrt_hann(X.win_len)
    frames = np.fft.irfft(X.complex, n=X.win_len, axis=1) * win
    n_frames = frames.shape[0]
    out = np.zeros((n_frames + 1) * X.hop)
    norm = np.zeros_like(out)
    for t in range(n_frames):
        out[t * X.hop : t * X.hop + X.win_len] += frames[t]
        norm[t * X.hop : t * X.hop + X.win_len] += win * win
    out = np.divide(out, norm, out=np.zeros_like(out), where=norm > 1e-12)
    y = out[X.hop : X.hop + length]
    if y.shape[0] < length:
        y = np.concatenate([y, np.zeros(length - y.shape[0])])
    return y


@dataclass
class WienerStats:
    bins: int
    zero_denominator: int
    mean_gain: float


def wiener_gain(S: np.ndarray, V: np.ndarray) -> np.ndarray:
    """``clip(|S|^2 / |V|^2, 0, 1)``, with 0 where ``V`` is empty."""
    ps = np.abs(S) ** 2
    pv = np.abs(V) ** 2
    g = np.divide(ps, pv, out=np.zeros_like(ps), where=pv > 0)
    return np.clip(g, 0.0, 1.0)


def wiener_target(s, v, win_len: int = DEFAULT_WIN, return_stats: bool = False):
    """Filter ``v`` bin-by-bin towards ``s`` and resynthesize."""
    s = np.asarray(s, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if s.shape != v.shape:
        raise ConsistencyError(f"clean length {s.shape[0]} differs from reverberant length {v.shape[0]}")
    S = stft(s, win_len)
    V = stft(v, win_len)
    g = wiener_gain(S.complex, V.complex)
    out = istft(V.with_complex(g * V.complex), v.shape[0])
    if return_stats:
        zero = int(np.count_nonzero((V.real == 0) & (V.imag == 0)))
        return out, WienerStats(int(g.size), zero, float(g.mean()))
    return out
