"""Band-edge design for splitting the spectrum across encoder branches.

Edges are normalized frequencies where 1.0 is Nyquist.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DomainError


@dataclass(frozen=True)
class BandPlan:
    edges: tuple[float, ...]
    quality_factor: Optional[float] = None

    def __post_init__(self):
        edges = tuple(float(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if len(edges) < 2:
            raise DomainError("a band plan needs at least two edges")
        if edges[0] != 0.0 or edges[-1] != 1.0:
            raise DomainError(f"edges must run from 0 to 1, got {edges[0]}..{edges[-1]}")
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise DomainError(f"edges must be strictly increasing: {edges}")

    @property
    def num_bands(self) -> int:
        return len(self.edges) - 1

    def band(self, b: int) -> tuple[float, float]:
        """Edges ``(lo, hi)`` of band ``b`` (1-based, 1 is the lowest)."""
        if not 1 <= b <= self.num_bands:
            raise DomainError(f"band index {b} outside 1..{self.num_bands}")
        return self.edges[b - 1], self.edges[b]

    def to_hz(self, sample_rate: int = 16000) -> list[float]:
        return [e * sample_rate / 2 for e in self.edges]


def constant_q_ratio(q: float) -> float:
    if not q > 0.5:
        raise DomainError(f"quality factor must exceed 0.5, got {q}")
    return (2 * q + 1) / (2 * q - 1)


def constant_q_plan(num_bands: int, q: float) -> BandPlan:
    """Edges with a constant center-to-width ratio, top edge at Nyquist.

    Each edge is the one above it divided by ``(2q+1)/(2q-1)``; the lowest
    edge is pinned to DC.

    >>> constant_q_plan(3, 1.5).edges
    (0.0, 0.25, 0.5, 1.0)
    """
    if num_bands < 1:
        raise DomainError(f"need at least one band, got {num_bands}")
    rho = constant_q_ratio(q)
    edges = [0.0] + [rho ** (b - num_bands) for b in range(1, num_bands + 1)]
    edges[-1] = 1.0
    return BandPlan(tuple(edges), float(q))


def uniform_plan(num_bands: int) -> BandPlan:
    if num_bands < 1:
        raise DomainError(f"need at least one band, got {num_bands}")
    return BandPlan(tuple(b / num_bands for b in range(num_bands + 1)))


def explicit_plan(edges: Sequence[float]) -> BandPlan:
    return BandPlan(tuple(edges))


def measured_q(plan: BandPlan, b: int) -> float:
    lo, hi = plan.band(b)
    return (hi + lo) / (2 * (hi - lo))
