"""Multiscale encoder and decoder.

Branch ``b`` (1-based, lowest band first) analyzes band ``(w[b-1], w[b])``
with window ``2**(B-b) * N_o``. Its frames are repeated ``2**(B-b)`` times so
every branch runs at the base frame rate, then the branches are stacked along
the bin axis. Decoding max-pools each block back to its own rate, synthesizes
it and sums the branch outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .bands import BandPlan, constant_q_plan, uniform_plan
from .errors import ConfigurationError, ConsistencyError
from .xform import NUM_CHANNELS, KernelSet, analyze, bin_range, build_kernels, num_filters, synthesize


@dataclass(frozen=True)
class MsaeConfig:
    num_branches: int = 5
    quality_factor: Optional[float] = 2.0
    base_window: int = 40
    kappa: float = 1.5
    edges: Optional[tuple[float, ...]] = None
    plan: BandPlan = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.num_branches < 1:
            raise ConfigurationError(f"need at least one branch, got {self.num_branches}")
        if self.base_window < 2 or self.base_window % 2:
            raise ConfigurationError(f"base window must be even and >= 2, got {self.base_window}")
        if self.kappa < 1:
            raise ConfigurationError(f"overcompleteness must be >= 1, got {self.kappa}")
        if self.edges is not None:
            plan = BandPlan(tuple(self.edges))
            if plan.num_bands != self.num_branches:
                raise ConfigurationError(
                    f"{plan.num_bands} bands given for {self.num_branches} branches"
                )
        elif self.num_branches == 1:
            plan = uniform_plan(1)
        elif self.quality_factor is None:
            plan = uniform_plan(self.num_branches)
        else:
            plan = constant_q_plan(self.num_branches, self.quality_factor)
        object.__setattr__(self, "plan", plan)
        for b in range(1, self.num_branches + 1):
            n, lo, hi = self.branch(b)
            first, last = bin_range(n, lo, hi)
            if last < first:
                raise ConfigurationError(
                    f"branch {b} (window {n}, band [{lo:.6g}, {hi:.6g}]) holds no DFT bin"
                )

    @classmethod
    def from_ms(cls, num_branches=5, quality_factor=2.0, base_window_ms=2.5, kappa=1.5, sample_rate=16000):
        n_o = base_window_ms * sample_rate / 1000.0
        if abs(n_o - round(n_o)) > 1e-9:
            raise ConfigurationError(f"{base_window_ms} ms is not a whole number of samples at {sample_rate} Hz")
        return cls(num_branches, quality_factor, int(round(n_o)), kappa)

    def branch(self, b: int) -> tuple[int, float, float]:
        """``(window_len, lo, hi)`` for branch ``b``."""
        lo, hi = self.plan.band(b)
        return self.repeat(b) * self.base_window, lo, hi

    def repeat(self, b: int) -> int:
        return 2 ** (self.num_branches - b)

    def analysis_kernels(self, b: int) -> KernelSet:
        n, lo, hi = self.branch(b)
        return build_kernels(n, lo, hi, self.kappa, for_synthesis=False)

    def synthesis_kernels(self, b: int) -> KernelSet:
        n, lo, hi = self.branch(b)
        return build_kernels(n, lo, hi, self.kappa, for_synthesis=True)

    @property
    def bin_counts(self) -> tuple[int, ...]:
        return tuple(num_filters(*self.branch(b), self.kappa) for b in range(1, self.num_branches + 1))

    @property
    def total_bins(self) -> int:
        return sum(self.bin_counts)

    @property
    def required_multiple(self) -> int:
        return 2 ** (self.num_branches - 1) * self.base_window

    def num_frames(self, length: int) -> int:
        return (2 * length) // self.base_window

    def check_length(self, length: int) -> None:
        m = self.required_multiple
        if length <= 0 or length % m:
            raise ConfigurationError(f"segment length {length} must be a positive multiple of {m}")

    def embedding_shape(self, length: int) -> tuple[int, int, int]:
        return self.num_frames(length), self.total_bins, NUM_CHANNELS


DEFAULT_CONFIG = MsaeConfig()


@dataclass(frozen=True, eq=False)
class EmbeddingTensor:
    data: np.ndarray  # (T, K_T, 4), non-negative
    bin_counts: tuple[int, ...]

    @property
    def shape(self):
        return self.data.shape

    def blocks(self) -> list[np.ndarray]:
        bounds = np.cumsum((0,) + tuple(self.bin_counts))
        return [self.data[:, a:b] for a, b in zip(bounds[:-1], bounds[1:])]

    def with_data(self, data: np.ndarray) -> "EmbeddingTensor":
        if data.shape != self.data.shape:
            raise ConsistencyError(f"shape {data.shape} differs from {self.data.shape}")
        return EmbeddingTensor(data, self.bin_counts)


def encode_branches(x: np.ndarray, cfg: MsaeConfig) -> list[np.ndarray]:
    """Per-branch analysis tensors at each branch's own frame rate."""
    x = np.asarray(x, dtype=np.float64)
    cfg.check_length(x.shape[0])
    return [analyze(x, cfg.analysis_kernels(b)) for b in range(1, cfg.num_branches + 1)]


def encode(x: np.ndarray, cfg: MsaeConfig = DEFAULT_CONFIG) -> EmbeddingTensor:
    ys = encode_branches(x, cfg)
    zs = [np.repeat(y, cfg.repeat(b), axis=0) for b, y in enumerate(ys, start=1)]
    return EmbeddingTensor(np.concatenate(zs, axis=1), cfg.bin_counts)


def _as_array(z, cfg: MsaeConfig) -> np.ndarray:
    data = z.data if isinstance(z, EmbeddingTensor) else np.asarray(z, dtype=np.float64)
    if data.ndim != 3 or data.shape[1:] != (cfg.total_bins, NUM_CHANNELS):
        raise ConsistencyError(
            f"embedding shape {data.shape} does not match config ({cfg.total_bins} bins x {NUM_CHANNELS})"
        )
    if isinstance(z, EmbeddingTensor) and tuple(z.bin_counts) != cfg.bin_counts:
        raise ConsistencyError(f"branch layout {z.bin_counts} differs from config {cfg.bin_counts}")
    if data.shape[0] % cfg.repeat(1):
        raise ConsistencyError(f"{data.shape[0]} frames is not a multiple of {cfg.repeat(1)}")
    return data


def pool_branches(z, cfg: MsaeConfig) -> list[np.ndarray]:
    data = _as_array(z, cfg)
    bounds = np.cumsum((0,) + cfg.bin_counts)
    return [
        _kernels.max_pool_time(data[:, bounds[b - 1] : bounds[b]], cfg.repeat(b))
        for b in range(1, cfg.num_branches + 1)
    ]


def decode_branches(z, cfg: MsaeConfig, length: int) -> list[np.ndarray]:
    ys = pool_branches(z, cfg)
    return [synthesize(y, cfg.synthesis_kernels(b), length) for b, y in enumerate(ys, start=1)]


def decode(z, cfg: MsaeConfig = DEFAULT_CONFIG, length: Optional[int] = None) -> np.ndarray:
    data = _as_array(z, cfg)
    if length is None:
        length = data.shape[0] * cfg.base_window // 2
    out = np.zeros(length)
    for part in decode_branches(z, cfg, length):
        out += part
    return out


def magnitude(z) -> np.ndarray:
    """RMS over the channel axis, a ``T x K_T`` magnitude map."""
    data = z.data if isinstance(z, EmbeddingTensor) else np.asarray(z)
    return np.sqrt(np.mean(data * data, axis=-1))


def autoencode(x: np.ndarray, cfg: MsaeConfig = DEFAULT_CONFIG) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return decode(encode(x, cfg), cfg, x.shape[0])
