"""Bounded real sequences as lazy total functions, plus the standard test corpus.

A :class:`BoundedSequence` carries a declared sup-norm bound (violations are
test failures, never silently clamped) and, when the sequence takes finitely
many values on symbolically described index sets, an optional level-set map
``value -> SetDescription``.  Level sets are what make exact core computations
possible downstream.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import sets as sd
from .sets import SetDescription

__all__ = [
    "BoundedSequence",
    "OverlapError",
    "indicator",
    "signed_indicator",
    "affine",
    "combine",
    "corpus",
    "corpus_entry",
]

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


class OverlapError(ValueError):
    """Raised when the two parts of a signed indicator share an element."""


@dataclass(eq=False)
class BoundedSequence:
    """A total map ω → ℝ with declared bound ``|x_n| <= bound`` and a label."""

    fn: Callable[[int], float]
    bound: float
    label: str
    level_sets: tuple[tuple[float, SetDescription], ...] | None = None
    _cache: np.ndarray | None = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")

    def __call__(self, n: int) -> float:
        return float(self.fn(n))

    def prefix(self, horizon: int) -> np.ndarray:
        """Values ``x_0 … x_{horizon-1}``; cached and grown monotonically."""
        with self._lock:
            if self._cache is None or len(self._cache) < horizon:
                arr = np.fromiter(
                    (self.fn(n) for n in range(horizon)), dtype=np.float64, count=horizon
                )
                arr.setflags(write=False)
                self._cache = arr
            return self._cache[:horizon]

    def seed_prefix(self, values: np.ndarray) -> "BoundedSequence":
        """Pre-populate the prefix cache (used for transformed sequences)."""
        arr = np.asarray(values, dtype=np.float64).copy()
        arr.setflags(write=False)
        with self._lock:
            if self._cache is None or len(self._cache) < len(arr):
                self._cache = arr
        return self

    @property
    def structured(self) -> bool:
        return self.level_sets is not None


def indicator(s: SetDescription, label: str | None = None) -> BoundedSequence:
    """Characteristic sequence of the set: 1 on S, 0 elsewhere."""
    levels = ((1.0, s), (0.0, sd.complement(s)))
    return BoundedSequence(
        fn=lambda n: 1.0 if s.contains(n) else 0.0,
        bound=1.0,
        label=label or "indicator",
        level_sets=levels,
    )


def signed_indicator(
    f: SetDescription,
    g: SetDescription,
    label: str | None = None,
    check_horizon: int = 10_000,
    zero_set: SetDescription | None = None,
) -> BoundedSequence:
    """+1 on F, −1 on G, 0 elsewhere.  F and G must be disjoint.

    Disjointness is verified on the prefix below ``check_horizon``; a common
    element raises :class:`OverlapError`.  ``zero_set`` may name the
    complement of F ∪ G symbolically when the caller knows a sharper
    description than the generic complement node.
    """
    common = set(f.enumerate_prefix(check_horizon)) & set(g.enumerate_prefix(check_horizon))
    if common:
        raise OverlapError(f"sets share element {min(common)}")
    zero = zero_set if zero_set is not None else sd.complement(sd.Union(f, g))
    levels = ((1.0, f), (-1.0, g), (0.0, zero))

    def fn(n: int) -> float:
        if f.contains(n):
            return 1.0
        if g.contains(n):
            return -1.0
        return 0.0

    return BoundedSequence(fn=fn, bound=1.0, label=label or "signed_indicator", level_sets=levels)


def affine(x: BoundedSequence, mul: float, add: float, label: str | None = None) -> BoundedSequence:
    """Pointwise ``mul * x_n + add``; the declared bound follows the triangle inequality."""
    levels = None
    if x.level_sets is not None:
        if mul == 0.0:
            levels = ((float(add), sd.omega()),)
        else:
            levels = tuple((mul * v + add, s) for v, s in x.level_sets)
    return BoundedSequence(
        fn=lambda n: mul * x.fn(n) + add,
        bound=abs(mul) * x.bound + abs(add),
        label=label or f"{mul}*{x.label}+{add}",
        level_sets=levels,
    )


def combine(x: BoundedSequence, y: BoundedSequence, op: str, label: str | None = None) -> BoundedSequence:
    """Pointwise sum or difference; level sets compose when both sides have them."""
    if op not in ("add", "sub"):
        raise ValueError("op must be 'add' or 'sub'")
    sign = 1.0 if op == "add" else -1.0
    levels = None
    if x.level_sets is not None and y.level_sets is not None:
        merged: dict[float, list[SetDescription]] = {}
        for vx, sx in x.level_sets:
            for vy, sy in y.level_sets:
                merged.setdefault(vx + sign * vy, []).append(sd.Intersection(sx, sy))
        levels = tuple(sorted((v, sd.union_all(parts)) for v, parts in merged.items()))
    return BoundedSequence(
        fn=lambda n: x.fn(n) + sign * y.fn(n),
        bound=x.bound + y.bound,
        label=label or f"{x.label}{'+' if op == 'add' else '-'}{y.label}",
        level_sets=levels,
    )


# ---------------------------------------------------------------------------
# The fixed corpus.  Labels are the stable CLI-addressable names.


def _alternating() -> BoundedSequence:
    x = signed_indicator(sd.evens(), sd.odds(), label="alternating")
    return x


def _signed_blocks() -> BoundedSequence:
    pos = sd.GeometricBlocks(2, 0, 2)
    neg = sd.GeometricBlocks(2, 1, 2)
    # The two parities cover [1, ∞), so the zero set is exactly {0}.
    return signed_indicator(pos, neg, label="signed_blocks", zero_set=sd.explicit(0))


def _periodic_three() -> BoundedSequence:
    values = (0.0, 0.5, 1.0)
    levels = tuple((values[r], sd.ap(r, 3)) for r in range(3))
    return BoundedSequence(
        fn=lambda n: values[n % 3],
        bound=1.0,
        label="periodic_three_level",
        level_sets=levels,
    )


def _blockwise_three() -> BoundedSequence:
    values = (0.0, 1.0 / 3.0, 1.0)
    levels = tuple((values[r], sd.RootBlocks(r, 3)) for r in range(3))
    return BoundedSequence(
        fn=lambda n: values[math.isqrt(n) % 3],
        bound=1.0,
        label="blockwise_three_level",
        level_sets=levels,
    )


def _indicator_blocks() -> BoundedSequence:
    blocks = sd.GeometricBlocks(2, 0, 2)
    off = sd.Union(sd.GeometricBlocks(2, 1, 2), sd.explicit(0))
    levels = ((1.0, blocks), (0.0, off))
    return BoundedSequence(
        fn=lambda n: 1.0 if blocks.contains(n) else 0.0,
        bound=1.0,
        label="indicator_blocks",
        level_sets=levels,
    )


def _rotation_golden() -> BoundedSequence:
    return BoundedSequence(
        fn=lambda n: math.modf(n * GOLDEN)[0],
        bound=1.0,
        label="rotation_golden",
    )


def _alternating_decay() -> BoundedSequence:
    return BoundedSequence(
        fn=lambda n: (-1.0) ** (n % 2) / (n + 1.0),
        bound=1.0,
        label="alternating_decay",
    )


def corpus() -> list[BoundedSequence]:
    """The documented fixed corpus of bounded test sequences."""
    return [
        _alternating(),
        indicator(sd.evens(), label="indicator_evens"),
        indicator(sd.squares(), label="indicator_squares"),
        _signed_blocks(),
        _periodic_three(),
        _blockwise_three(),
        _indicator_blocks(),
        _rotation_golden(),
        _alternating_decay(),
    ]


def corpus_entry(label: str) -> BoundedSequence:
    for x in corpus():
        if x.label == label:
            return x
    raise KeyError(f"no corpus entry labeled {label!r}")
