"""Flat ``key = value`` run configuration."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .autoencoder import MsaeConfig
from .errors import ConfigurationError
from .masking import GainFloor
from .metrics import PmseParams


@dataclass(frozen=True)
class RunConfig:
    branches: int = 5
    quality_factor: Optional[float] = 2.0
    base_window_ms: float = 2.5
    kappa: float = 1.5
    frame_len: int = 20480
    floor_db: float = -50.0
    stft_win: int = 512
    beta: float = 0.97
    mu: float = 255.0
    prior: float = 0.75
    sample_rate: int = 16000

    def msae(self) -> MsaeConfig:
        cfg = MsaeConfig.from_ms(self.branches, self.quality_factor, self.base_window_ms, self.kappa, self.sample_rate)
        cfg.check_length(self.frame_len)
        return cfg

    def floor(self) -> GainFloor:
        return GainFloor(self.floor_db)

    def pmse_params(self) -> PmseParams:
        return PmseParams(self.beta, self.mu)

    def validate(self) -> "RunConfig":
        self.msae()
        self.floor()
        self.pmse_params()
        if not 0.0 <= self.prior <= 1.0:
            raise ConfigurationError(f"prior must lie in [0, 1], got {self.prior}")
        if self.stft_win < 2 or self.stft_win % 2:
            raise ConfigurationError(f"stft_win must be even, got {self.stft_win}")
        return self

    def replace(self, **changes) -> "RunConfig":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)

    def to_text(self) -> str:
        lines = ["# msaekit run configuration"]
        for f in fields(self):
            v = getattr(self, f.name)
            lines.append(f"{f.name} = {'none' if v is None else repr(v)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw!r}")
            key, val = (p.strip() for p in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in types:
                raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
            try:
                values[key] = _parse(types[key], val)
            except ValueError as e:
                raise ConfigurationError(f"line {lineno}: bad value for {key}: {val!r}") from e
        return cls(**values)


def _parse(kind: str, val: str):
    if "Optional" in kind and val.lower() in ("none", ""):
        return None
    if "int" in kind:
        return int(val)
    return float(val)


DEFAULT_RUN = RunConfig()


def load(path) -> RunConfig:
    if str(path) == "default":
        return DEFAULT_RUN
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigurationError(f"cannot read config {path}: {e}") from e
    return RunConfig.from_text(text)


def save(cfg: RunConfig, path) -> None:
    Path(path).write_text(cfg.to_text())
