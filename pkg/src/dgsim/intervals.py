"""Finite unions of half-open intervals ``[a, b)`` on the real line.

These index the effects of position and momentum measurements.  The
half-open convention makes any partition of the line into cells exact on
a lattice: every lattice point belongs to exactly one cell, and a point
sitting on a left endpoint ``a`` is included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import IntervalError

Interval = tuple[float, float]


def _check_pair(pair) -> Interval:
    try:
        a, b = pair
        a, b = float(a), float(b)
    except (TypeError, ValueError) as exc:
        raise IntervalError(f"interval must be a pair of numbers, got {pair!r}") from exc
    if math.isnan(a) or math.isnan(b):
        raise IntervalError(f"interval endpoint is NaN: {pair!r}")
    if not a < b:
        raise IntervalError(f"interval [{a}, {b}) is empty or reversed")
    return a, b


def _merge(pairs: Iterable[Interval]) -> tuple[Interval, ...]:
    out: list[list[float]] = []
    for a, b in sorted(pairs):
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


@dataclass(frozen=True)
class IntervalSet:
    """A normalized (sorted, merged) union of half-open intervals.

    Build one with :meth:`of`; the empty set is ``IntervalSet(())``.
    """

    intervals: tuple[Interval, ...] = ()

    @classmethod
    def of(cls, *pairs: Sequence[float]) -> "IntervalSet":
        return cls(_merge(_check_pair(p) for p in pairs))

    @classmethod
    def real_line(cls) -> "IntervalSet":
        return cls(((-math.inf, math.inf),))

    @classmethod
    def coerce(cls, value) -> "IntervalSet":
        """Accept an IntervalSet, a single ``(a, b)`` pair, or a list of pairs."""
        if isinstance(value, IntervalSet):
            return value
        if value is None:
            raise IntervalError("interval set is None")
        seq = list(value)
        if len(seq) == 2 and all(np.isscalar(v) for v in seq):
            return cls.of(seq)
        return cls.of(*seq)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        mask = np.zeros(values.shape, dtype=bool)
        for a, b in self.intervals:
            mask |= (values >= a) & (values < b)
        return mask

    def indicator(self, values) -> np.ndarray:
        return self.contains(values).astype(float)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a1, b1 in self.intervals:
            for a2, b2 in other.intervals:
                a, b = max(a1, a2), min(b1, b2)
                if a < b:
                    out.append((a, b))
        return IntervalSet(_merge(out))

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(_merge(self.intervals + other.intervals))

    def complement(self) -> "IntervalSet":
        out = []
        lo = -math.inf
        for a, b in self.intervals:
            if lo < a:
                out.append((lo, a))
            lo = b
        if lo < math.inf:
            out.append((lo, math.inf))
        return IntervalSet(tuple(out))

    def is_disjoint(self, other: "IntervalSet") -> bool:
        return self.intersect(other).is_empty

    def issubset(self, other: "IntervalSet") -> bool:
        return self.intersect(other) == self

    def scaled(self, factor: float) -> "IntervalSet":
        """The set ``factor * B`` for ``factor > 0``."""
        if not factor > 0:
            raise IntervalError(f"scale factor must be positive, got {factor}")
        return IntervalSet(tuple((a * factor, b * factor) for a, b in self.intervals))

    @property
    def bounds(self) -> Interval:
        if self.is_empty:
            raise IntervalError("empty interval set has no bounds")
        return self.intervals[0][0], self.intervals[-1][1]

    def midpoint(self) -> float:
        """Midpoint of a single bounded interval (used as a partition cell value)."""
        if len(self.intervals) != 1:
            raise IntervalError("midpoint needs exactly one interval")
        a, b = self.intervals[0]
        if not (math.isfinite(a) and math.isfinite(b)):
            raise IntervalError(f"cell [{a}, {b}) is unbounded")
        return 0.5 * (a + b)

    def to_list(self) -> list[list[float]]:
        return [[a, b] for a, b in self.intervals]


def validate_partition(cells: Sequence) -> list[IntervalSet]:
    """Coerce ``cells`` to interval sets and check they are pairwise disjoint."""
    sets = [IntervalSet.coerce(c) for c in cells]
    if not sets:
        raise IntervalError("partition is empty")
    flat = sorted(iv for s in sets for iv in s.intervals)
    for (a1, b1), (a2, b2) in zip(flat, flat[1:]):
        if a2 < b1:
            raise IntervalError(f"partition cells overlap: [{a1}, {b1}) and [{a2}, {b2})")
    return sets


def lattice_partition(points: np.ndarray) -> list[IntervalSet]:
    """One cell per lattice point, ``[p - h/2, p + h/2)`` with ``h`` the spacing.

    The cell midpoints are the lattice points themselves, so partition sums
    of ``mid * prob`` reproduce lattice expectation values exactly.
    """
    points = np.sort(np.asarray(points, dtype=float))
    h = points[1] - points[0]
    edges = np.concatenate([points - 0.5 * h, [points[-1] + 0.5 * h]])
    return [IntervalSet(((float(a), float(b)),)) for a, b in zip(edges[:-1], edges[1:])]
