"""Symbolic subsets of the naturals with exact density and cardinality analysis.

A :class:`SetDescription` is an immutable expression tree over ω = {0, 1, 2, …}.
Every description answers membership queries and enumerates its prefix
``{n < N : n ∈ S}``.  Every non-predicate description additionally supports an
exact density analysis: the asymptotic density exists and is a rational, or the
set oscillates and its exact lower/upper densities are known (block families),
or only sound interval bounds on the lower/upper densities can be derived from
the components.

The analysis backs the exact membership decisions of the ideal catalog, so the
rules here are conservative: a value is reported as exact only when it is
provable from the structure of the description.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

__all__ = [
    "Cardinality",
    "DensityBounds",
    "SetDescription",
    "Explicit",
    "ArithmeticProgression",
    "Squares",
    "Blocks",
    "GeometricBlocks",
    "RootBlocks",
    "Union",
    "Intersection",
    "Difference",
    "Complement",
    "Predicate",
    "ap",
    "evens",
    "odds",
    "omega",
    "explicit",
    "squares",
    "complement",
    "union_all",
    "contains_predicate",
    "set_to_dict",
    "set_from_dict",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

# Residue-form moduli beyond this are not worth materializing.
_LCM_CAP = 10**6


class Cardinality(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class DensityBounds:
    """Lower/upper asymptotic density information.

    When ``exact`` is true, ``lower`` and ``upper`` are the true lower and
    upper densities of the set.  Otherwise they are sound outer bounds:
    ``lower <= d_lower(S)`` and ``d_upper(S) <= upper``.
    """

    lower: Fraction
    upper: Fraction
    exact: bool

    @property
    def has_limit(self) -> bool:
        return self.exact and self.lower == self.upper

    @property
    def value(self) -> Fraction:
        if not self.has_limit:
            raise ValueError("asymptotic density limit is not available")
        return self.lower


@dataclass(frozen=True)
class ResidueForm:
    """Eventually periodic normal form.

    For every ``n >= start``: ``n ∈ S`` iff ``n % modulus ∈ residues``.
    Below ``start`` membership is decided by the description itself.
    """

    modulus: int
    residues: frozenset[int]
    start: int

    def lift(self, modulus: int) -> "ResidueForm":
        if modulus % self.modulus != 0:
            raise ValueError("can only lift to a multiple of the modulus")
        factor = modulus // self.modulus
        residues = frozenset(
            r + i * self.modulus for r in self.residues for i in range(factor)
        )
        return ResidueForm(modulus, residues, self.start)


class SetDescription:
    """Base class for symbolic subsets of ω."""

    def contains(self, n: int) -> bool:
        raise NotImplementedError

    def __contains__(self, n: int) -> bool:
        return self.contains(n)

    def enumerate_prefix(self, horizon: int) -> tuple[int, ...]:
        """Return exactly ``{n < horizon : n ∈ S}``, sorted ascending."""
        return _prefix(self, int(horizon))

    def _enumerate(self, horizon: int) -> tuple[int, ...]:
        return tuple(n for n in range(horizon) if self.contains(n))

    def density_bounds(self) -> DensityBounds | None:
        """Density analysis; ``None`` when a predicate blocks it."""
        return _density(self)

    def residue_form(self) -> ResidueForm | None:
        return _residue_form(self)

    def cardinality(self) -> Cardinality:
        return _cardinality(self)

    # Set algebra sugar, mirroring the usual operator conventions.
    def __or__(self, other: "SetDescription") -> "SetDescription":
        return Union(self, other)

    def __and__(self, other: "SetDescription") -> "SetDescription":
        return Intersection(self, other)

    def __sub__(self, other: "SetDescription") -> "SetDescription":
        return Difference(self, other)

    def __invert__(self) -> "SetDescription":
        return complement(self)


@dataclass(frozen=True)
class Explicit(SetDescription):
    """A finite, explicitly listed set."""

    elements: tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.elements):
            raise ValueError("elements must be naturals")
        object.__setattr__(self, "elements", tuple(sorted(set(self.elements))))

    def contains(self, n: int) -> bool:
        return n in self.elements

    def _enumerate(self, horizon: int) -> tuple[int, ...]:
        return tuple(e for e in self.elements if e < horizon)


@dataclass(frozen=True)
class ArithmeticProgression(SetDescription):
    """``{offset, offset + step, offset + 2·step, …}``."""

    offset: int
    step: int

    def __post_init__(self):
        if self.offset < 0 or self.step < 1:
            raise ValueError("need offset >= 0 and step >= 1")

    def contains(self, n: int) -> bool:
        return n >= self.offset and (n - self.offset) % self.step == 0

    def _enumerate(self, horizon: int) -> tuple[int, ...]:
        return tuple(range(self.offset, horizon, self.step))


@dataclass(frozen=True)
class Squares(SetDescription):
    """The perfect squares {0, 1, 4, 9, …}."""

    def contains(self, n: int) -> bool:
        return n >= 0 and math.isqrt(n) ** 2 == n

    def _enumerate(self, horizon: int) -> tuple[int, ...]:
        return tuple(k * k for k in range(math.isqrt(max(horizon - 1, 0)) + 1) if k * k < horizon)


@dataclass(frozen=True)
class Blocks(SetDescription):
    """A finite union of half-open integer intervals ``[lo, hi)``."""

    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ivs = tuple((int(a), int(b)) for a, b in self.intervals)
        for a, b in ivs:
            if a < 0 or b <= a:
                raise ValueError(f"bad interval [{a}, {b})")
        for (_, b0), (a1, _) in zip(ivs, ivs[1:]):
            if a1 < b0:
                raise ValueError("intervals must be sorted and disjoint")
        object.__setattr__(self, "intervals", ivs)

    def contains(self, n: int) -> bool:
        return any(a <= n < b for a, b in self.intervals)

    def _enumerate(self, horizon: int) -> tuple[int, ...]:
        out: list[int] = []
        for a, b in self.intervals:
            out.extend(range(a, min(b, horizon)))
        return tuple(out)


@dataclass(frozen=True)
class GeometricBlocks(SetDescription):
    """Exponential block family ``∪ { [base^i, base^(i+1)) : i ≡ residue (mod modulus) }``.

    The counting ratio oscillates between the exact lower density
    ``(base−1)/(base^modulus − 1)`` (just before an included block starts) and
    the exact upper density ``(base−1)·base^(modulus−1)/(base^modulus − 1)``
    (at the end of an included block).  Note 0 is never a member.
    """

    base: int
    residue: int
    modulus: int

    def __post_init__(self):
        if self.base < 2 or self.modulus < 2 or not 0 <= self.residue < self.modulus:
            raise ValueError("need base >= 2, modulus >= 2, 0 <= residue < modulus")

    def _exponent(self, n: int) -> int:
        e, p = 0, 1
        while p * self.base <= n:
            p *= self.base
            e += 1
        return e

    def contains(self, n: int) -> bool:
        if n < 1:
            return False
        return self._exponent(n) % self.modulus == self.residue

    def _enumerate(self, horizon: int) -> tuple[int, ...]:
        out: list[int] = []
        i = self.residue
        while self.base**i < horizon:
            lo = self.base**i
            hi = min(self.base ** (i + 1), horizon)
            out.extend(range(lo, hi))
            i += self.modulus
        return tuple(out)

    def exact_bounds(self) -> tuple[Fraction, Fraction]:
        b, m = self.base, self.modulus
        lower = Fraction(b - 1, b**m - 1)
        upper = Fraction((b - 1) * b ** (m - 1), b**m - 1)
        return lower, upper


@dataclass(frozen=True)
class RootBlocks(SetDescription):
    """Square-root block family ``{n : isqrt(n) ≡ residue (mod modulus)}``.

    Block lengths grow like 2·isqrt(n), so the set has exact asymptotic
    density ``1/modulus`` while still containing arbitrarily long runs.
    """

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2 or not 0 <= self.residue < self.modulus:
            raise ValueError("need modulus >= 2, 0 <= residue < modulus")

    def contains(self, n: int) -> bool:
        return n >= 0 and math.isqrt(n) % self.modulus == self.residue

    def _enumerate(self, horizon: int) -> tuple[int, ...]:
        out: list[int] = []
        i = self.residue
        while i * i < horizon:
            out.extend(range(i * i, min((i + 1) * (i + 1), horizon)))
            i += self.modulus
        return tuple(out)


@dataclass(frozen=True)
class Union(SetDescription):
    left: SetDescription
    right: SetDescription

    def contains(self, n: int) -> bool:
        return self.left.contains(n) or self.right.contains(n)

    def _enumerate(self, horizon: int) -> tuple[int, ...]:
        return tuple(sorted(set(self.left.enumerate_prefix(horizon)) | set(self.right.enumerate_prefix(horizon))))


@dataclass(frozen=True)
class Intersection(SetDescription):
    left: SetDescription
    right: SetDescription

    def contains(self, n: int) -> bool:
        return self.left.contains(n) and self.right.contains(n)

    def _enumerate(self, horizon: int) -> tuple[int, ...]:
        return tuple(sorted(set(self.left.enumerate_prefix(horizon)) & set(self.right.enumerate_prefix(horizon))))


@dataclass(frozen=True)
class Difference(SetDescription):
    left: SetDescription
    right: SetDescription

    def contains(self, n: int) -> bool:
        return self.left.contains(n) and not self.right.contains(n)

    def _enumerate(self, horizon: int) -> tuple[int, ...]:
        return tuple(sorted(set(self.left.enumerate_prefix(horizon)) - set(self.right.enumerate_prefix(horizon))))


@dataclass(frozen=True)
class Complement(SetDescription):
    inner: SetDescription

    def contains(self, n: int) -> bool:
        return not self.inner.contains(n)

    def _enumerate(self, horizon: int) -> tuple[int, ...]:
        members = set(self.inner.enumerate_prefix(horizon))
        return tuple(n for n in range(horizon) if n not in members)


@dataclass(frozen=True, eq=False)
class Predicate(SetDescription):
    """Membership given only by a total function; no exact density derivable."""

    fn: Callable[[int], bool]
    name: str = "predicate"

    def contains(self, n: int) -> bool:
        return bool(self.fn(n))


# ---------------------------------------------------------------------------
# Construction helpers


def ap(offset: int, step: int) -> ArithmeticProgression:
    return ArithmeticProgression(offset, step)


def evens() -> ArithmeticProgression:
    return ArithmeticProgression(0, 2)


def odds() -> ArithmeticProgression:
    return ArithmeticProgression(1, 2)


def omega() -> ArithmeticProgression:
    return ArithmeticProgression(0, 1)


def explicit(*elements: int) -> Explicit:
    return Explicit(tuple(elements))


def squares() -> Squares:
    return Squares()


def complement(s: SetDescription) -> SetDescription:
    """Complement with double-negation elimination."""
    if isinstance(s, Complement):
        return s.inner
    return Complement(s)


def union_all(sets: list[SetDescription]) -> SetDescription:
    if not sets:
        return Explicit(())
    out = sets[0]
    for s in sets[1:]:
        out = Union(out, s)
    return out


def contains_predicate(s: SetDescription) -> bool:
    """True when a Predicate leaf blocks exact analysis anywhere in the tree."""
    if isinstance(s, Predicate):
        return True
    if isinstance(s, (Union, Intersection, Difference)):
        return contains_predicate(s.left) or contains_predicate(s.right)
    if isinstance(s, Complement):
        return contains_predicate(s.inner)
    return False


# ---------------------------------------------------------------------------
# Prefix cache


@lru_cache(maxsize=512)
def _prefix(s: SetDescription, horizon: int) -> tuple[int, ...]:
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    return s._enumerate(horizon)


# ---------------------------------------------------------------------------
# Residue normal forms


def _residue_form(s: SetDescription) -> ResidueForm | None:
    if isinstance(s, Explicit):
        start = (max(s.elements) + 1) if s.elements else 0
        return ResidueForm(1, frozenset(), start)
    if isinstance(s, Blocks):
        start = max((b for _, b in s.intervals), default=0)
        return ResidueForm(1, frozenset(), start)
    if isinstance(s, ArithmeticProgression):
        return ResidueForm(s.step, frozenset({s.offset % s.step}), s.offset)
    if isinstance(s, Complement):
        rf = _residue_form(s.inner)
        if rf is None:
            return None
        return ResidueForm(rf.modulus, frozenset(range(rf.modulus)) - rf.residues, rf.start)
    if isinstance(s, (Union, Intersection, Difference)):
        ra = _residue_form(s.left)
        rb = _residue_form(s.right)
        if ra is None or rb is None:
            return None
        m = math.lcm(ra.modulus, rb.modulus)
        if m > _LCM_CAP:
            return None
        ra, rb = ra.lift(m), rb.lift(m)
        if isinstance(s, Union):
            residues = ra.residues | rb.residues
        elif isinstance(s, Intersection):
            residues = ra.residues & rb.residues
        else:
            residues = ra.residues - rb.residues
        return ResidueForm(m, residues, max(ra.start, rb.start))
    return None


# ---------------------------------------------------------------------------
# Density analysis


def _bounds(lower: Fraction, upper: Fraction, exact: bool) -> DensityBounds:
    return DensityBounds(lower, upper, exact)


def _is_null(d: DensityBounds | None) -> bool:
    return d is not None and d.upper == 0


def _is_full(d: DensityBounds | None) -> bool:
    return d is not None and d.lower == 1


def _density(s: SetDescription) -> DensityBounds | None:
    rf = _residue_form(s)
    if rf is not None:
        d = Fraction(len(rf.residues), rf.modulus)
        return _bounds(d, d, True)
    if isinstance(s, Squares):
        return _bounds(_ZERO, _ZERO, True)
    if isinstance(s, GeometricBlocks):
        lower, upper = s.exact_bounds()
        return _bounds(lower, upper, True)
    if isinstance(s, RootBlocks):
        d = Fraction(1, s.modulus)
        return _bounds(d, d, True)
    if isinstance(s, Complement):
        d = _density(s.inner)
        if d is None:
            return None
        return _bounds(_ONE - d.upper, _ONE - d.lower, d.exact)
    if isinstance(s, Union):
        da, db = _density(s.left), _density(s.right)
        if da is None or db is None:
            return None
        # A symmetric difference with a null set leaves both densities intact.
        if _is_null(db):
            return da
        if _is_null(da):
            return db
        if _is_full(da) or _is_full(db):
            return _bounds(_ONE, _ONE, True)
        return _bounds(max(da.lower, db.lower), min(_ONE, da.upper + db.upper), False)
    if isinstance(s, Intersection):
        da, db = _density(s.left), _density(s.right)
        if da is None or db is None:
            return None
        if _is_null(da) or _is_null(db):
            return _bounds(_ZERO, _ZERO, True)
        if _is_full(db):
            return da
        if _is_full(da):
            return db
        return _bounds(max(_ZERO, da.lower + db.lower - 1), min(da.upper, db.upper), False)
    if isinstance(s, Difference):
        da, db = _density(s.left), _density(s.right)
        if da is None or db is None:
            return None
        if _is_null(db):
            return da
        if _is_null(da) or _is_full(db):
            return _bounds(_ZERO, _ZERO, True)
        return _bounds(max(_ZERO, da.lower - db.upper), min(da.upper, _ONE - db.lower), False)
    return None


# ---------------------------------------------------------------------------
# Cardinality analysis


def _has_long_runs(s: SetDescription) -> bool:
    """True when the set provably contains arbitrarily long integer runs."""
    return isinstance(s, (GeometricBlocks, RootBlocks))


def _squares_hit_residues(rf: ResidueForm) -> bool:
    return any((x * x) % rf.modulus in rf.residues for x in range(rf.modulus))


def _cardinality(s: SetDescription) -> Cardinality:
    rf = _residue_form(s)
    if rf is not None:
        return Cardinality.INFINITE if rf.residues else Cardinality.FINITE
    d = _density(s)
    if d is not None and d.lower > 0:
        return Cardinality.INFINITE
    if isinstance(s, (Squares, GeometricBlocks, RootBlocks)):
        return Cardinality.INFINITE
    if isinstance(s, (Explicit, Blocks)):
        return Cardinality.FINITE
    if isinstance(s, Complement):
        if _cardinality(s.inner) is Cardinality.FINITE:
            return Cardinality.INFINITE
        return Cardinality.UNKNOWN
    if isinstance(s, Union):
        ca, cb = _cardinality(s.left), _cardinality(s.right)
        if Cardinality.INFINITE in (ca, cb):
            return Cardinality.INFINITE
        if ca is cb is Cardinality.FINITE:
            return Cardinality.FINITE
        return Cardinality.UNKNOWN
    if isinstance(s, Difference):
        return _cardinality(Intersection(s.left, complement(s.right)))
    if isinstance(s, Intersection):
        return _intersection_cardinality(s.left, s.right)
    return Cardinality.UNKNOWN


def _intersection_factors(s: SetDescription) -> list[SetDescription]:
    if isinstance(s, Intersection):
        return _intersection_factors(s.left) + _intersection_factors(s.right)
    return [s]


def _intersection_cardinality(a: SetDescription, b: SetDescription) -> Cardinality:
    ca, cb = _cardinality(a), _cardinality(b)
    if Cardinality.FINITE in (ca, cb):
        return Cardinality.FINITE
    if a == b:
        return ca
    # Flatten nested intersections and combine the residue-form factors, so
    # chains like odds ∩ evens ∩ X come out finite regardless of X.
    factors = _intersection_factors(a) + _intersection_factors(b)
    combined: ResidueForm | None = None
    rest: list[SetDescription] = []
    for f in factors:
        rf = _residue_form(f)
        if rf is None:
            rest.append(f)
            continue
        if combined is None:
            combined = rf
        else:
            m = math.lcm(combined.modulus, rf.modulus)
            if m > _LCM_CAP:
                rest.append(f)
                continue
            lifted_a, lifted_b = combined.lift(m), rf.lift(m)
            combined = ResidueForm(
                m, lifted_a.residues & lifted_b.residues, max(lifted_a.start, lifted_b.start)
            )
    if combined is not None:
        if not combined.residues:
            return Cardinality.FINITE
        if not rest:
            return Cardinality.INFINITE
        if len(rest) == 1:
            y = rest[0]
            # Residue-class tails meet every set with unbounded runs.
            if _has_long_runs(y):
                return Cardinality.INFINITE
            if isinstance(y, Squares):
                return Cardinality.INFINITE if _squares_hit_residues(combined) else Cardinality.FINITE
    for x, y in ((a, b), (b, a)):
        if isinstance(x, Squares) and _has_long_runs(y):
            return Cardinality.INFINITE
    if isinstance(a, GeometricBlocks) and isinstance(b, GeometricBlocks):
        if a.base == b.base and a.modulus == b.modulus:
            return Cardinality.INFINITE if a.residue == b.residue else Cardinality.FINITE
    if isinstance(a, RootBlocks) and isinstance(b, RootBlocks):
        if a.modulus == b.modulus:
            return Cardinality.INFINITE if a.residue == b.residue else Cardinality.FINITE
    return Cardinality.UNKNOWN


# ---------------------------------------------------------------------------
# JSON codec (tagged union; Predicate sets are deliberately not serializable)


def set_to_dict(s: SetDescription) -> dict:
    if isinstance(s, Explicit):
        return {"type": "explicit", "elements": list(s.elements)}
    if isinstance(s, ArithmeticProgression):
        return {"type": "arithmetic_progression", "offset": s.offset, "step": s.step}
    if isinstance(s, Squares):
        return {"type": "squares"}
    if isinstance(s, Blocks):
        return {"type": "blocks", "intervals": [list(iv) for iv in s.intervals]}
    if isinstance(s, GeometricBlocks):
        return {"type": "geometric_blocks", "base": s.base, "residue": s.residue, "modulus": s.modulus}
    if isinstance(s, RootBlocks):
        return {"type": "root_blocks", "residue": s.residue, "modulus": s.modulus}
    if isinstance(s, Union):
        return {"type": "union", "left": set_to_dict(s.left), "right": set_to_dict(s.right)}
    if isinstance(s, Intersection):
        return {"type": "intersection", "left": set_to_dict(s.left), "right": set_to_dict(s.right)}
    if isinstance(s, Difference):
        return {"type": "difference", "left": set_to_dict(s.left), "right": set_to_dict(s.right)}
    if isinstance(s, Complement):
        return {"type": "complement", "of": set_to_dict(s.inner)}
    raise ValueError(f"{type(s).__name__} has no JSON encoding")


def set_from_dict(d: dict) -> SetDescription:
    kind = d.get("type")
    if kind in ("arithmetic_progression", "ap"):
        return ArithmeticProgression(int(d["offset"]), int(d["step"]))
    if kind == "explicit":
        return Explicit(tuple(int(e) for e in d["elements"]))
    if kind == "squares":
        return Squares()
    if kind == "blocks":
        return Blocks(tuple((int(a), int(b)) for a, b in d["intervals"]))
    if kind == "geometric_blocks":
        return GeometricBlocks(int(d["base"]), int(d["residue"]), int(d["modulus"]))
    if kind == "root_blocks":
        return RootBlocks(int(d["residue"]), int(d["modulus"]))
    if kind == "union":
        return Union(set_from_dict(d["left"]), set_from_dict(d["right"]))
    if kind == "intersection":
        return Intersection(set_from_dict(d["left"]), set_from_dict(d["right"]))
    if kind == "difference":
        return Difference(set_from_dict(d["left"]), set_from_dict(d["right"]))
    if kind == "complement":
        return complement(set_from_dict(d["of"]))
    raise ValueError(f"unknown set type: {kind!r}")
