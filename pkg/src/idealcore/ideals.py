"""The ideal catalog: exact membership decisions plus numeric positivity estimators.

Each catalog ideal pairs two decision channels:

* ``decide_in(S)``: a tri-state *exact* decision (``True``/``False``/``None``)
  on a :class:`~idealcore.sets.SetDescription`, derived from the structural
  density/cardinality analysis.  ``None`` means "not derivable", never a guess.
* ``positivity(hits, horizon)``: a numeric estimator on an index prefix
  (the indices below the horizon where some event happened), used by the
  cluster-point machinery and by membership queries on predicate sets.  Its
  rules are finite-horizon approximations and are documented per ideal.

``membership`` combines both channels into the four-way verdict
in-ideal / positive / in-dual-filter / inconclusive.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from . import sets as sd
from .maps import IndexMap, enumeration_map, identity_map
from .sets import Cardinality, SetDescription

__all__ = [
    "MembershipResult",
    "PositivityResult",
    "ClassificationReport",
    "Ideal",
    "FinIdeal",
    "DensityZeroIdeal",
    "ErdosUlamIdeal",
    "SummableIdeal",
    "TraceFinIdeal",
    "GeneratedIdeal",
    "ColumnBlockIdeal",
    "fin",
    "density_zero",
    "erdos_ulam",
    "summable",
    "fin_oplus_full",
    "countably_generated",
    "fin_times_empty",
    "membership",
    "exact_density",
    "empirical_density",
    "classify",
    "rk_below",
    "RkResult",
    "ideal_to_dict",
    "ideal_from_dict",
    "UnsupportedSetError",
]

DEFAULT_THETA = 1e-3
SUMMABLE_CUTOFF = 1e3


class UnsupportedSetError(ValueError):
    """Raised when an exact analysis is requested for a predicate set."""


class MembershipResult(enum.Enum):
    IN_IDEAL = "in_ideal"
    POSITIVE = "positive"
    IN_DUAL_FILTER = "in_dual_filter"
    INCONCLUSIVE = "inconclusive"


class PositivityResult(enum.Enum):
    POSITIVE = "positive"
    NULL = "null"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ClassificationReport:
    """Catalog metadata; the flags are known facts, not searched properties."""

    is_p_ideal: bool
    is_p_plus_ideal: bool
    is_tall: bool
    is_nowhere_tall: bool
    is_countably_generated: bool
    canonical_form: str

    def summary(self) -> str:
        parts = [
            "P-ideal" if self.is_p_ideal else "not a P-ideal",
            "tall" if self.is_tall else "not tall",
            "P+-ideal" if self.is_p_plus_ideal else "not a P+-ideal",
            "nowhere tall" if self.is_nowhere_tall else "somewhere tall",
            "countably generated" if self.is_countably_generated else "not countably generated",
        ]
        return ", ".join(parts) + f"; canonical form: {self.canonical_form}"


@lru_cache(maxsize=256)
def _member_mask(s: SetDescription, horizon: int) -> np.ndarray:
    mask = np.zeros(horizon, dtype=bool)
    idx = np.fromiter(s.enumerate_prefix(horizon), dtype=np.int64)
    if idx.size:
        mask[idx] = True
    mask.setflags(write=False)
    return mask


def _tail(hits: np.ndarray, horizon: int) -> np.ndarray:
    return hits[hits >= horizon // 2]


def _support(hits: np.ndarray, horizon: int) -> np.ndarray:
    tail = _tail(hits, horizon)
    return tail if tail.size else hits


def _max_running_ratio(hits: np.ndarray, horizon: int, weights: np.ndarray | None = None) -> float:
    """Max over n in [horizon/2, horizon) of (weighted) count of hits in [0, n) over the
    (weighted) measure of [0, n).  This is the documented upper-density estimate."""
    n0 = horizon // 2
    if weights is None:
        c0 = int(np.searchsorted(hits, n0, side="left"))
        best = c0 / n0 if n0 > 0 else 0.0
        window = hits[(hits >= n0) & (hits < horizon)]
        if window.size:
            # The running ratio peaks right after each hit, at n = h + 1.
            counts = np.searchsorted(hits, window, side="left") + 1
            best = max(best, float(np.max(counts / (window + 1))))
        return best
    totals = np.cumsum(weights)
    hit_weights = np.cumsum(weights[hits]) if hits.size else np.zeros(0)
    c0 = int(np.searchsorted(hits, n0, side="left"))
    mass0 = float(hit_weights[c0 - 1]) if c0 > 0 else 0.0
    best = mass0 / float(totals[n0 - 1]) if n0 > 0 else 0.0
    window_idx = np.nonzero((hits >= n0) & (hits < horizon))[0]
    if window_idx.size:
        ratios = hit_weights[window_idx] / totals[hits[window_idx]]
        best = max(best, float(np.max(ratios)))
    return best


@lru_cache(maxsize=16)
def _harmonic_weights(horizon: int) -> np.ndarray:
    w = 1.0 / (np.arange(horizon, dtype=np.float64) + 1.0)
    w.setflags(write=False)
    return w


class Ideal:
    """Base class for catalog ideals."""

    kind: str = "abstract"

    def __init__(self, label: str, theta: float = DEFAULT_THETA):
        self.label = label
        self.theta = float(theta)

    def decide_in(self, s: SetDescription) -> bool | None:
        """Exact tri-state decision of ``S ∈ I``; ``None`` when underivable."""
        raise NotImplementedError

    def positivity(
        self, hits: np.ndarray, horizon: int, theta: float | None = None
    ) -> tuple[PositivityResult, np.ndarray]:
        """Numeric positivity of an index prefix; returns (verdict, supporting hits)."""
        raise NotImplementedError

    def classify(self) -> ClassificationReport:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<Ideal {self.label}>"

    # Generic sound propagation through the boolean structure.  Used by the
    # density-style ideals; the trace ideals reduce to cardinality instead.
    def _propagate(self, s: SetDescription) -> bool | None:
        if isinstance(s, sd.Union):
            a, b = self.decide_in(s.left), self.decide_in(s.right)
            if a is False or b is False:
                return False
            if a is True and b is True:
                return True
        elif isinstance(s, sd.Intersection):
            if self.decide_in(s.left) is True or self.decide_in(s.right) is True:
                return True
            # Distribute over a union factor: A ∩ (U ∪ V) = (A ∩ U) ∪ (A ∩ V).
            for first, second in ((s.left, s.right), (s.right, s.left)):
                if isinstance(second, sd.Union):
                    distributed = sd.Union(
                        sd.Intersection(first, second.left),
                        sd.Intersection(first, second.right),
                    )
                    r = self.decide_in(distributed)
                    if r is not None:
                        return r
        elif isinstance(s, sd.Difference):
            a = self.decide_in(s.left)
            if a is True:
                return True
            if a is False and self.decide_in(s.right) is True:
                return False
        elif isinstance(s, sd.Complement):
            if self.decide_in(s.inner) is True:
                return False
        return None


class FinIdeal(Ideal):
    """Finite sets.  Numeric rule: positive iff a hit lands in the tail window."""

    kind = "fin"

    def __init__(self, theta: float = DEFAULT_THETA):
        super().__init__("Fin", theta)

    def decide_in(self, s: SetDescription) -> bool | None:
        card = s.cardinality()
        if card is Cardinality.FINITE:
            return True
        if card is Cardinality.INFINITE:
            return False
        return None

    def positivity(self, hits, horizon, theta=None):
        tail = _tail(hits, horizon)
        if tail.size:
            return PositivityResult.POSITIVE, tail
        return PositivityResult.NULL, tail

    def classify(self) -> ClassificationReport:
        return ClassificationReport(True, True, False, True, True, "Fin")


class DensityZeroIdeal(Ideal):
    """Sets of asymptotic density zero (the statistical-null ideal).

    Numeric rule: the upper-density estimate over the tail half-window is
    compared against the positivity threshold; estimates above ``theta`` are
    positive, below ``theta/10`` null, in between inconclusive.
    """

    kind = "density_zero"

    def __init__(self, theta: float = DEFAULT_THETA):
        super().__init__("DensityZero", theta)

    def decide_in(self, s: SetDescription) -> bool | None:
        if s.cardinality() is Cardinality.FINITE:
            return True
        d = s.density_bounds()
        if d is not None:
            if d.upper == 0:
                return True
            if d.exact or d.lower > 0:
                return d.upper == 0 if d.exact else False
        return self._propagate(s)

    def positivity(self, hits, horizon, theta=None):
        theta = self.theta if theta is None else theta
        support = _support(hits, horizon)
        if hits.size == 0:
            return PositivityResult.NULL, support
        est = _max_running_ratio(hits, horizon)
        if est > theta:
            return PositivityResult.POSITIVE, support
        if est < theta / 10.0:
            return PositivityResult.NULL, support
        return PositivityResult.INCONCLUSIVE, support

    def classify(self) -> ClassificationReport:
        return ClassificationReport(True, False, True, False, False, "Z")


class ErdosUlamIdeal(Ideal):
    """Weighted-density-zero ideal for a divergent weight sequence.

    The ``log`` preset (weights 1/(n+1)) is the logarithmic-density ideal; for
    it, exact decisions are available whenever the natural density limit
    exists, since the logarithmic density then agrees with it.  Custom weight
    callables get numeric decisions only; divergence of their sum is the
    caller's contract (presets are known divergent), positivity of the
    evaluated prefix is checked.
    """

    kind = "erdos_ulam"

    def __init__(self, weights: str | Callable[[int], float] = "log", theta: float = DEFAULT_THETA):
        if callable(weights):
            self.weight_fn = weights
            name = "custom"
        elif weights in ("log", "unit"):
            self.weight_fn = None
            name = weights
        else:
            raise ValueError("weights must be 'log', 'unit', or a callable")
        super().__init__(f"ErdosUlam({name})", theta)
        self.weights = name

    def _weight_array(self, horizon: int) -> np.ndarray:
        if self.weights == "log":
            return _harmonic_weights(horizon)
        if self.weights == "unit":
            return np.ones(horizon, dtype=np.float64)
        w = np.fromiter((self.weight_fn(n) for n in range(horizon)), dtype=np.float64, count=horizon)
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        return w

    def decide_in(self, s: SetDescription) -> bool | None:
        if s.cardinality() is Cardinality.FINITE:
            return True
        d = s.density_bounds()
        if self.weights == "unit":
            if d is not None:
                if d.upper == 0:
                    return True
                if d.exact or d.lower > 0:
                    return d.upper == 0 if d.exact else False
        elif self.weights == "log":
            if d is not None and d.has_limit:
                return d.value == 0
            if isinstance(s, sd.GeometricBlocks):
                # Blocks carry logarithmic mass 1/modulus, so never null.
                return False
        return self._propagate(s)

    def positivity(self, hits, horizon, theta=None):
        theta = self.theta if theta is None else theta
        support = _support(hits, horizon)
        if hits.size == 0:
            return PositivityResult.NULL, support
        est = _max_running_ratio(hits, horizon, self._weight_array(horizon))
        if est > theta:
            return PositivityResult.POSITIVE, support
        if est < theta / 10.0:
            return PositivityResult.NULL, support
        return PositivityResult.INCONCLUSIVE, support

    def classify(self) -> ClassificationReport:
        return ClassificationReport(True, False, True, False, False, f"Erdos-Ulam({self.weights})")


class SummableIdeal(Ideal):
    """Sets whose weight series converges (harmonic preset: sum of 1/(n+1)).

    Numeric rule (a documented heuristic): a partial sum above the divergence
    cutoff counts as positive; otherwise the estimator is inconclusive, since
    convergence cannot be witnessed on a prefix.
    """

    kind = "summable"

    def __init__(
        self,
        weights: str | Callable[[int], float] = "harmonic",
        cutoff: float = SUMMABLE_CUTOFF,
        theta: float = DEFAULT_THETA,
    ):
        if callable(weights):
            self.weight_fn = weights
            name = "custom"
        elif weights == "harmonic":
            self.weight_fn = None
            name = weights
        else:
            raise ValueError("weights must be 'harmonic' or a callable")
        super().__init__(f"Summable({name})", theta)
        self.weights = name
        self.cutoff = float(cutoff)

    def _weight_array(self, horizon: int) -> np.ndarray:
        if self.weights == "harmonic":
            return _harmonic_weights(horizon)
        w = np.fromiter((self.weight_fn(n) for n in range(horizon)), dtype=np.float64, count=horizon)
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        return w

    def decide_in(self, s: SetDescription) -> bool | None:
        if s.cardinality() is Cardinality.FINITE:
            return True
        if self.weights != "harmonic":
            return None  # custom weights decide numerically only
        if isinstance(s, sd.Squares):
            return True
        d = s.density_bounds()
        if d is not None:
            # A harmonically summable set must have upper density zero.
            if d.exact and d.upper > 0:
                return False
            if d.lower > 0:
                return False
        if isinstance(s, (sd.GeometricBlocks, sd.RootBlocks)):
            return False
        return self._propagate(s)

    def positivity(self, hits, horizon, theta=None):
        support = _support(hits, horizon)
        if hits.size == 0:
            return PositivityResult.NULL, support
        total = float(np.sum(self._weight_array(horizon)[hits]))
        if total > self.cutoff:
            return PositivityResult.POSITIVE, support
        return PositivityResult.INCONCLUSIVE, support

    def classify(self) -> ClassificationReport:
        return ClassificationReport(True, True, True, False, False, "summable(harmonic)")


class TraceFinIdeal(Ideal):
    """Sets with finite trace on a fixed infinite set T (a Fin⊕P(ω) copy)."""

    kind = "fin_oplus_full"

    def __init__(self, trace: SetDescription, theta: float = DEFAULT_THETA):
        if trace.cardinality() is not Cardinality.INFINITE:
            raise ValueError("trace set must be certifiably infinite")
        super().__init__("FinOplusFull", theta)
        self.trace = trace

    def decide_in(self, s: SetDescription) -> bool | None:
        card = sd.Intersection(s, self.trace).cardinality()
        if card is Cardinality.FINITE:
            return True
        if card is Cardinality.INFINITE:
            return False
        return None

    def positivity(self, hits, horizon, theta=None):
        mask = _member_mask(self.trace, horizon)
        traced = hits[mask[hits]] if hits.size else hits
        tail = _tail(traced, horizon)
        if tail.size:
            return PositivityResult.POSITIVE, tail
        return PositivityResult.NULL, tail

    def classify(self) -> ClassificationReport:
        cofinite = sd.complement(self.trace).cardinality() is Cardinality.FINITE
        form = "Fin" if cofinite else "Fin(+)P(omega) copy"
        return ClassificationReport(True, True, False, True, True, form)


class GeneratedIdeal(Ideal):
    """Ideal generated by finitely many sets together with Fin.

    ``S ∈ I`` iff ``S \\ (G_0 ∪ … ∪ G_m)`` is finite.  The union of the
    generators must be co-infinite, otherwise the ideal would be improper.
    """

    kind = "countably_generated"

    def __init__(self, generators: tuple[SetDescription, ...], theta: float = DEFAULT_THETA):
        union = sd.union_all(list(generators))
        if sd.complement(union).cardinality() is not Cardinality.INFINITE:
            raise ValueError("generator union must be co-infinite (proper ideal)")
        super().__init__("CountablyGenerated", theta)
        self.generators = tuple(generators)
        self._union = union

    def decide_in(self, s: SetDescription) -> bool | None:
        card = sd.Difference(s, self._union).cardinality()
        if card is Cardinality.FINITE:
            return True
        if card is Cardinality.INFINITE:
            return False
        return None

    def positivity(self, hits, horizon, theta=None):
        if self.generators:
            mask = _member_mask(self._union, horizon)
            outside = hits[~mask[hits]] if hits.size else hits
        else:
            outside = hits
        tail = _tail(outside, horizon)
        if tail.size:
            return PositivityResult.POSITIVE, tail
        return PositivityResult.NULL, tail

    def classify(self) -> ClassificationReport:
        form = "Fin" if self._union.cardinality() is Cardinality.FINITE else "Fin(+)P(omega) copy"
        return ClassificationReport(True, True, False, True, True, form)


def _pair_column(n: int) -> int:
    """First coordinate of the Cantor pairing inverse."""
    w = (math.isqrt(8 * n + 1) - 1) // 2
    t = w * (w + 1) // 2
    return n - t


class ColumnBlockIdeal(Ideal):
    """Sets covered by finitely many columns of the Cantor pairing (a Fin×{∅} copy).

    Exact decisions are limited to finite sets; coverage by infinitely many
    generators cannot be certified structurally, so most queries come back
    inconclusive.  The entry exists mainly for its classification metadata.
    """

    kind = "fin_times_empty"

    def __init__(self, theta: float = DEFAULT_THETA):
        super().__init__("FinTimesEmpty", theta)

    def generator(self, column: int) -> SetDescription:
        return sd.Predicate(lambda n, c=column: _pair_column(n) == c, name=f"column_{column}")

    def decide_in(self, s: SetDescription) -> bool | None:
        if s.cardinality() is Cardinality.FINITE:
            return True
        return None

    def positivity(self, hits, horizon, theta=None):
        support = _support(hits, horizon)
        if hits.size == 0:
            return PositivityResult.NULL, support
        cols = np.fromiter((_pair_column(int(h)) for h in hits), dtype=np.int64, count=hits.size)
        tail = _tail(hits, horizon)
        if tail.size == 0:
            return PositivityResult.NULL, support
        head_max = int(cols[hits < horizon // 2].max()) if np.any(hits < horizon // 2) else -1
        tail_max = int(cols[hits >= horizon // 2].max())
        if tail_max > head_max:
            # Fresh columns keep appearing: not coverable by the ones seen so far.
            return PositivityResult.POSITIVE, support
        return PositivityResult.INCONCLUSIVE, support

    def classify(self) -> ClassificationReport:
        return ClassificationReport(False, True, False, True, True, "Fin×{∅} copy")


# ---------------------------------------------------------------------------
# Catalog constructors


def fin(theta: float = DEFAULT_THETA) -> FinIdeal:
    return FinIdeal(theta)


def density_zero(theta: float = DEFAULT_THETA) -> DensityZeroIdeal:
    return DensityZeroIdeal(theta)


def erdos_ulam(weights: str | Callable[[int], float] = "log", theta: float = DEFAULT_THETA) -> ErdosUlamIdeal:
    return ErdosUlamIdeal(weights, theta)


def summable(weights: str | Callable[[int], float] = "harmonic", cutoff: float = SUMMABLE_CUTOFF) -> SummableIdeal:
    return SummableIdeal(weights, cutoff)


def fin_oplus_full(trace: SetDescription, theta: float = DEFAULT_THETA) -> TraceFinIdeal:
    return TraceFinIdeal(trace, theta)


def countably_generated(generators: list[SetDescription], theta: float = DEFAULT_THETA) -> GeneratedIdeal:
    return GeneratedIdeal(tuple(generators), theta)


def fin_times_empty(theta: float = DEFAULT_THETA) -> ColumnBlockIdeal:
    return ColumnBlockIdeal(theta)


# ---------------------------------------------------------------------------
# Operations


def membership(s: SetDescription, ideal: Ideal, horizon: int = 100_000) -> MembershipResult:
    """Four-way membership verdict of S against the ideal.

    Exact whenever the structural analysis decides both S and its complement;
    otherwise falls back to the numeric positivity estimator on the prefix
    below ``horizon`` (possible for predicate sets), which can return
    inconclusive.
    """
    comp = sd.complement(s)
    a = ideal.decide_in(s)
    b = ideal.decide_in(comp)
    if a is True:
        return MembershipResult.IN_IDEAL
    if b is True:
        return MembershipResult.IN_DUAL_FILTER
    if a is False:
        return MembershipResult.POSITIVE
    # Numeric fallback on the prefix.
    hits_s = np.fromiter(s.enumerate_prefix(horizon), dtype=np.int64)
    hits_c = np.fromiter(comp.enumerate_prefix(horizon), dtype=np.int64)
    vs, _ = ideal.positivity(hits_s, horizon)
    vc, _ = ideal.positivity(hits_c, horizon)
    if vs is PositivityResult.NULL:
        return MembershipResult.IN_IDEAL
    if vc is PositivityResult.NULL:
        return MembershipResult.IN_DUAL_FILTER
    if vs is PositivityResult.POSITIVE:
        return MembershipResult.POSITIVE
    return MembershipResult.INCONCLUSIVE


def exact_density(s: SetDescription):
    """Exact density: a Fraction when the limit exists, else (lower, upper).

    Raises :class:`UnsupportedSetError` when a predicate blocks the analysis.
    """
    d = s.density_bounds()
    if d is None:
        raise UnsupportedSetError("exact density is not derivable for predicate sets")
    if d.has_limit:
        return d.value
    return (d.lower, d.upper)


def empirical_density(s: SetDescription, horizon: int) -> tuple[float, float]:
    """(min, max) of the counting ratio |S ∩ [0, n)| / n over n in [horizon/2, horizon]."""
    if horizon < 2:
        raise ValueError("horizon must be at least 2")
    hits = np.fromiter(s.enumerate_prefix(horizon + 1), dtype=np.int64)
    ns = np.arange(horizon // 2, horizon + 1, dtype=np.int64)
    counts = np.searchsorted(hits, ns, side="left")
    ratios = counts / ns
    return float(np.min(ratios)), float(np.max(ratios))


def classify(ideal: Ideal) -> ClassificationReport:
    return ideal.classify()


@dataclass(frozen=True)
class RkResult:
    """Outcome of a Rudin–Keisler comparison query against the catalog."""

    status: str  # "witness" | "unknown"
    witness: IndexMap | None
    note: str

    @property
    def has_witness(self) -> bool:
        return self.status == "witness"


def rk_below(ideal_i: Ideal, ideal_j: Ideal) -> RkResult:
    """Witnessing map for I ≤_RK J, for the catalog pairs with a known construction.

    Returns the increasing enumeration of the trace set for (trace-finite, Fin)
    pairs and the identity for (Fin, Fin); every other pair is reported
    unknown rather than fabricating a map.
    """
    if isinstance(ideal_i, FinIdeal) and isinstance(ideal_j, FinIdeal):
        return RkResult("witness", identity_map(), "identity map")
    if isinstance(ideal_i, TraceFinIdeal) and isinstance(ideal_j, FinIdeal):
        h = enumeration_map(ideal_i.trace, label="trace-enumeration")
        return RkResult("witness", h, "increasing enumeration of the trace set")
    if isinstance(ideal_i, ErdosUlamIdeal) and isinstance(ideal_j, ErdosUlamIdeal):
        return RkResult(
            "unknown",
            None,
            "a witnessing map is known to exist for weighted-density pairs, "
            "but no construction is part of the catalog",
        )
    if isinstance(ideal_i, DensityZeroIdeal) and isinstance(ideal_j, FinIdeal):
        return RkResult("unknown", None, "no core-preserving matrix exists for this pair")
    return RkResult("unknown", None, "no witnessing map in the catalog for this pair")


# ---------------------------------------------------------------------------
# JSON codec


def ideal_to_dict(ideal: Ideal) -> dict:
    if isinstance(ideal, FinIdeal):
        return {"type": "fin"}
    if isinstance(ideal, DensityZeroIdeal):
        return {"type": "density_zero", "theta": ideal.theta}
    if isinstance(ideal, ErdosUlamIdeal):
        if ideal.weights == "custom":
            raise ValueError("custom weight callables have no JSON encoding")
        return {"type": "erdos_ulam", "weights": ideal.weights, "theta": ideal.theta}
    if isinstance(ideal, SummableIdeal):
        if ideal.weights == "custom":
            raise ValueError("custom weight callables have no JSON encoding")
        return {"type": "summable", "weights": ideal.weights, "cutoff": ideal.cutoff}
    if isinstance(ideal, TraceFinIdeal):
        return {"type": "fin_oplus_full", "trace": sd.set_to_dict(ideal.trace)}
    if isinstance(ideal, GeneratedIdeal):
        return {"type": "countably_generated", "generators": [sd.set_to_dict(g) for g in ideal.generators]}
    if isinstance(ideal, ColumnBlockIdeal):
        return {"type": "fin_times_empty"}
    raise ValueError(f"{type(ideal).__name__} has no JSON encoding")


def ideal_from_dict(d: dict) -> Ideal:
    kind = d.get("type")
    theta = float(d.get("theta", DEFAULT_THETA))
    if kind == "fin":
        return fin(theta)
    if kind in ("density_zero", "z"):
        return density_zero(theta)
    if kind == "erdos_ulam":
        return erdos_ulam(d.get("weights", "log"), theta)
    if kind == "summable":
        return summable(d.get("weights", "harmonic"), float(d.get("cutoff", SUMMABLE_CUTOFF)))
    if kind == "fin_oplus_full":
        return fin_oplus_full(sd.set_from_dict(d["trace"]), theta)
    if kind == "countably_generated":
        return countably_generated([sd.set_from_dict(g) for g in d.get("generators", [])], theta)
    if kind == "fin_times_empty":
        return fin_times_empty(theta)
    raise ValueError(f"unknown ideal type: {kind!r}")
