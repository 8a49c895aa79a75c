"""Flat 1+1-dimensional Minkowski geometry.

Events, the classical causal order, piecewise-linear causal worldlines and
the proper-time (Lorentzian length) functional.  Metric signature is (-,+),
so the interval between nearby events is ``dt**2 - dx**2`` and an event q is
in the causal future of p exactly when ``q.t - p.t >= |q.x - p.x|``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

#: Absolute tolerance for event equality and lightlike-segment acceptance.
COORD_TOL = 1e-12


@dataclass(frozen=True)
class SpacetimePoint:
    """An event (t, x); both coordinates must be finite."""

    t: float
    x: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t) and math.isfinite(self.x)):
            raise ValueError(f"event coordinates must be finite, got ({self.t}, {self.x})")

    def almost_equal(self, other: "SpacetimePoint", tol: float = COORD_TOL) -> bool:
        return abs(self.t - other.t) <= tol and abs(self.x - other.x) <= tol


@dataclass(frozen=True)
class CausalCurve:
    """Piecewise-linear future-directed causal worldline.

    ``samples`` is a sequence of (parameter, event) pairs with strictly
    increasing parameters.  Every segment must be future-directed causal:
    dt > 0 and dt >= |dx|, where lightlike segments entered at floating-point
    precision are accepted with a slack of ``1e-12 * max(1, dt)``.
    A single-sample curve (a point) is allowed and has zero length.
    """

    samples: tuple[tuple[float, SpacetimePoint], ...]

    def __post_init__(self) -> None:
        if len(self.samples) < 1:
            raise ValueError("a curve needs at least one sample")
        for i in range(len(self.samples) - 1):
            s0, p0 = self.samples[i]
            s1, p1 = self.samples[i + 1]
            if not s1 > s0:
                raise ValueError(f"curve parameters must be strictly increasing (segment {i})")
            dt = p1.t - p0.t
            dx = p1.x - p0.x
            if dt <= 0.0:
                raise ValueError(f"segment {i} is not future-directed (dt={dt})")
            if dt < abs(dx) - COORD_TOL * max(1.0, abs(dt)):
                raise ValueError(f"segment {i} is spacelike (dt={dt}, dx={dx})")

    @classmethod
    def from_points(cls, points: list[SpacetimePoint]) -> "CausalCurve":
        """Build a curve from events, parametrised by sample index."""
        return cls(tuple((float(i), p) for i, p in enumerate(points)))

    @classmethod
    def straight(cls, p: SpacetimePoint, q: SpacetimePoint) -> "CausalCurve":
        """The straight worldline from p to q; collapses to a point when p == q."""
        if p.almost_equal(q, tol=0.0):
            return cls(((0.0, p),))
        return cls(((0.0, p), (1.0, q)))

    def endpoints(self) -> tuple[SpacetimePoint, SpacetimePoint]:
        return self.samples[0][1], self.samples[-1][1]

    def to_json(self) -> str:
        return json.dumps([[s, p.t, p.x] for s, p in self.samples])

    @classmethod
    def from_json(cls, text: str) -> "CausalCurve":
        rows = json.loads(text)
        return cls(tuple((float(s), SpacetimePoint(float(t), float(x))) for s, t, x in rows))


def causally_precedes(p: SpacetimePoint, q: SpacetimePoint) -> bool:
    """Classical causal order: q lies in the closed future light cone of p."""
    dt = q.t - p.t
    return dt >= 0.0 and dt >= abs(q.x - p.x)


def proper_time(curve: CausalCurve) -> float:
    """Lorentzian length of a causal polyline: sum of sqrt(dt^2 - dx^2) per segment.

    Exact for piecewise-linear curves; lightlike segments contribute zero.
    """
    total = 0.0
    for i in range(len(curve.samples) - 1):
        _, p0 = curve.samples[i]
        _, p1 = curve.samples[i + 1]
        dt = p1.t - p0.t
        dx = p1.x - p0.x
        total += math.sqrt(max(dt * dt - dx * dx, 0.0))
    return total


def max_proper_time(p: SpacetimePoint, q: SpacetimePoint) -> float:
    """Supremum of proper_time over causal curves from p to q.

    In flat 2D Minkowski space the straight timelike segment maximises proper
    time (reverse triangle inequality), so this is sqrt(dt^2 - dx^2).
    Raises ValueError when q is not in the causal future of p.
    """
    if not causally_precedes(p, q):
        raise ValueError(f"events are not causally ordered: ({p.t},{p.x}) -> ({q.t},{q.x})")
    dt = q.t - p.t
    dx = q.x - p.x
    return math.sqrt(max(dt * dt - dx * dx, 0.0))


def lerp(p: SpacetimePoint, q: SpacetimePoint, s: float) -> SpacetimePoint:
    """Affine interpolation between two events."""
    return SpacetimePoint(p.t + s * (q.t - p.t), p.x + s * (q.x - p.x))
