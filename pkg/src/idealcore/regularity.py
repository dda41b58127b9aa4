"""Verdict-producing checkers for the matrix characterizations.

Every "for all sets E" quantifier is approximated by a finite, exactly
classified test family, so a Satisfied verdict means "no violation found over
the family at the horizon"; the checkers are falsifiers/corroborators, and
each verdict records the horizon and tolerances it used.  Limit conditions are
decided through the ideal-limit deviation test, limsup conditions through the
same cluster estimator that powers the core computations.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

import numpy as np

from . import sets as sd
from .asymptotics import CoreConfig, InconclusiveCellsError, ideal_lim_check, limsup_of_values
from .ideals import (
    FinIdeal,
    GeneratedIdeal,
    Ideal,
    MembershipResult,
    TraceFinIdeal,
    _member_mask,
    membership,
)
from .matrices import InfiniteMatrix, find_negative_entry, norm_estimate
from .sets import Cardinality, SetDescription

__all__ = [
    "CheckConfig",
    "Status",
    "ConditionReport",
    "Verdict",
    "TestFamily",
    "FamilyMisclassifiedError",
    "NegativeEntryError",
    "default_family",
    "silverman_toeplitz_check",
    "allen_check",
    "cfo_check",
    "leo_check",
]


class FamilyMisclassifiedError(ValueError):
    """A family set fails the membership slot it was claimed for."""


class NegativeEntryError(ValueError):
    def __init__(self, row: int, col: int, value: float):
        super().__init__(f"negative entry a[{row},{col}] = {value}")
        self.row, self.col, self.value = row, col, value


class Status(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CheckConfig:
    horizon: int = 10_000
    tol: float = 1e-2
    theta: float = 1e-3
    grid: float = 1e-2
    seed: int = 0
    norm_cap: float = 1e3  # uncertified row-sum sups above this flag a boundedness violation

    def core_config(self) -> CoreConfig:
        return CoreConfig(horizon=self.horizon, grid=self.grid, theta=self.theta)


@dataclass(frozen=True)
class ConditionReport:
    name: str
    ok: bool | None  # None = inconclusive
    margin: float
    details: dict
    witness_set: SetDescription | None = None
    witness_row: int | None = None

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "ok": self.ok,
            "margin": self.margin,
            "details": {k: v for k, v in sorted(self.details.items())},
        }
        if self.witness_set is not None:
            out["witness_set"] = sd.set_to_dict(self.witness_set)
        if self.witness_row is not None:
            out["witness_row"] = self.witness_row
        return out


@dataclass(frozen=True)
class Verdict:
    status: Status
    conditions: tuple[ConditionReport, ...]
    witness_set: SetDescription | None
    witness_row: int | None
    notes: tuple[str, ...]
    horizon: int
    tol: float

    def to_dict(self) -> dict:
        out = {
            "status": self.status.value,
            "conditions": [c.to_dict() for c in self.conditions],
            "notes": list(self.notes),
            "horizon": self.horizon,
            "tol": self.tol,
        }
        if self.witness_set is not None:
            out["witness"] = {"kind": "set", "set": sd.set_to_dict(self.witness_set)}
        elif self.witness_row is not None:
            out["witness"] = {"kind": "row", "row": self.witness_row}
        else:
            out["witness"] = None
        return out


@dataclass(frozen=True)
class TestFamily:
    """Finite stand-ins for the theorem quantifiers, exactly classified."""

    sets_in_ideal: tuple[SetDescription, ...]
    sets_positive: tuple[SetDescription, ...]
    sets_infinite: tuple[SetDescription, ...]

    def validate(self, ideal: Ideal) -> None:
        for s in self.sets_in_ideal:
            if membership(s, ideal) is not MembershipResult.IN_IDEAL:
                raise FamilyMisclassifiedError(f"{sd.set_to_dict(s)} is not in the ideal")
        for s in self.sets_positive:
            if membership(s, ideal) not in (
                MembershipResult.POSITIVE,
                MembershipResult.IN_DUAL_FILTER,
            ):
                raise FamilyMisclassifiedError(f"{sd.set_to_dict(s)} is not positive")
        for s in self.sets_infinite:
            if s.cardinality() is not Cardinality.INFINITE:
                raise FamilyMisclassifiedError(f"{sd.set_to_dict(s)} is not certifiably infinite")


def _default_pool(seed: int) -> list[SetDescription]:
    pool: list[SetDescription] = [
        sd.omega(),
        sd.evens(),
        sd.odds(),
        sd.squares(),
        sd.ap(0, 3),
        sd.ap(1, 3),
        sd.ap(1, 4),
        sd.GeometricBlocks(2, 0, 2),
        sd.explicit(0),
        sd.explicit(*range(10)),
        sd.explicit(5, 25, 125),
    ]
    rng = random.Random(seed)
    for _ in range(5):
        step = rng.choice([5, 6, 7, 9, 10, 11])
        count = rng.randint(1, step - 1)
        residues = sorted(rng.sample(range(step), count))
        pool.append(sd.union_all([sd.ap(r, step) for r in residues]))
    return pool


def default_family(ideal: Ideal, seed: int = 0) -> TestFamily:
    """Pool sets filtered by their exact classification against the ideal.

    Sets whose membership cannot be decided exactly are dropped rather than
    guessed at.
    """
    in_ideal, positive, infinite = [], [], []
    for s in _default_pool(seed):
        verdict = membership(s, ideal)
        if verdict is MembershipResult.IN_IDEAL:
            in_ideal.append(s)
        elif verdict in (MembershipResult.POSITIVE, MembershipResult.IN_DUAL_FILTER):
            positive.append(s)
        if s.cardinality() is Cardinality.INFINITE:
            infinite.append(s)
    return TestFamily(tuple(in_ideal), tuple(positive), tuple(infinite))


def _set_label(s: SetDescription) -> str:
    d = sd.set_to_dict(s)
    kind = d["type"]
    if kind == "arithmetic_progression":
        return f"ap({d['offset']},{d['step']})"
    if kind == "explicit":
        els = d["elements"]
        return f"explicit[{els[0]}..{els[-1]}]" if len(els) > 2 else f"explicit{els}"
    if kind == "geometric_blocks":
        return f"gblocks({d['base']},{d['residue']},{d['modulus']})"
    if kind == "union":
        return "union(...)"
    return kind


def _is_countably_generated(ideal: Ideal) -> bool:
    return isinstance(ideal, (FinIdeal, TraceFinIdeal, GeneratedIdeal))


def _matrix_nonnegative(a: InfiniteMatrix, horizon: int) -> bool:
    if a.nonnegative:
        return True
    return find_negative_entry(a, horizon) is None


def _col_mask(s: SetDescription, size: int) -> np.ndarray:
    return _member_mask(s, size)


def _lim_condition(
    name: str,
    values: np.ndarray,
    target: float,
    ideal_j: Ideal,
    cfg: CheckConfig,
    witness_set: SetDescription | None = None,
) -> ConditionReport:
    ok, info = ideal_lim_check(values, target, cfg.tol, ideal_j, cfg.theta)
    margin = float(info.get("witness_deviation", 0.0)) if ok is False else 0.0
    info["value_at_horizon"] = float(values[-1]) if len(values) else 0.0
    return ConditionReport(
        name=name,
        ok=ok,
        margin=margin,
        details=info,
        witness_set=witness_set if ok is False else None,
        witness_row=info.get("witness_index") if ok is False else None,
    )


def _limsup_condition(
    name: str,
    values: np.ndarray,
    ideal_j: Ideal,
    cfg: CheckConfig,
    witness_set: SetDescription,
) -> ConditionReport:
    details = {
        "value_at_horizon": float(values[-1]) if len(values) else 0.0,
        "horizon": len(values),
    }
    try:
        est = limsup_of_values(values, ideal_j, cfg.core_config())
    except InconclusiveCellsError as exc:
        details["inconclusive_cells"] = [list(w) for w in exc.cells]
        return ConditionReport(name=name, ok=None, margin=0.0, details=details)
    deviation = abs(est - 1.0)
    ok = deviation <= cfg.tol
    details["limsup_estimate"] = float(est)
    return ConditionReport(
        name=name,
        ok=ok,
        margin=(deviation if not ok else 0.0),
        details=details,
        witness_set=witness_set if not ok else None,
    )


def _assemble(
    conditions: list[ConditionReport],
    guard_ok: bool,
    notes: list[str],
    cfg: CheckConfig,
) -> Verdict:
    violated = [c for c in conditions if c.ok is False]
    witness_set = witness_row = None
    if violated:
        strongest = max(violated, key=lambda c: c.margin)
        witness_set, witness_row = strongest.witness_set, strongest.witness_row
        status = Status.VIOLATED
    elif any(c.ok is None for c in conditions):
        status = Status.INCONCLUSIVE
        notes = notes + ["some conditions were numerically inconclusive"]
    elif not guard_ok:
        status = Status.INCONCLUSIVE
    else:
        status = Status.SATISFIED
    if not guard_ok and status is Status.VIOLATED:
        # Conditions fail, but without the applicability guard the failure
        # does not refute the semantic property the theorem characterizes.
        status = Status.INCONCLUSIVE
    return Verdict(
        status=status,
        conditions=tuple(conditions),
        witness_set=witness_set,
        witness_row=witness_row,
        notes=tuple(notes),
        horizon=cfg.horizon,
        tol=cfg.tol,
    )


def silverman_toeplitz_check(
    a: InfiniteMatrix,
    ideal_i: Ideal,
    ideal_j: Ideal,
    family: TestFamily | None = None,
    cfg: CheckConfig | None = None,
) -> Verdict:
    """Regularity conditions: bounded norm, row sums with ideal limit 1, and
    vanishing ideal limit of absolute row sums over every family set in I.

    The characterization is only asserted under its applicability guard
    (nonnegative matrix, or I = Fin, or countably generated J); otherwise the
    conditions are still reported but the verdict is stamped inconclusive.
    """
    cfg = cfg or CheckConfig()
    family = family if family is not None else default_family(ideal_i, cfg.seed)
    family.validate(ideal_i)
    notes: list[str] = []
    guard_ok = (
        _is_countably_generated(ideal_j)
        or isinstance(ideal_i, FinIdeal)
        or _matrix_nonnegative(a, cfg.horizon)
    )
    if not guard_ok:
        notes.append(
            "applicability guard unmet (need a nonnegative matrix, I = Fin, or a "
            "countably generated J); conditions reported without the equivalence claim"
        )
    conditions: list[ConditionReport] = []

    sup, certified = norm_estimate(a, cfg.horizon)
    t1_ok = certified or sup <= cfg.norm_cap
    t1_row = None
    if not t1_ok:
        t1_row = int(max(range(cfg.horizon), key=a.row_abs_sum))
    conditions.append(
        ConditionReport(
            name="T1(bounded-norm)",
            ok=t1_ok,
            margin=(sup - cfg.norm_cap) if not t1_ok else 0.0,
            details={"sup_rowsum": float(sup), "certified": certified, "cap": cfg.norm_cap},
            witness_row=t1_row,
        )
    )

    row_sums = a.row_sums(cfg.horizon)
    conditions.append(_lim_condition("T2(row-sums)", row_sums, 1.0, ideal_j, cfg))

    support = a.max_support(cfg.horizon)
    for e in family.sets_in_ideal:
        mask = _col_mask(e, support)
        sums = a.masked_row_sums(mask, cfg.horizon, absolute=True)
        conditions.append(
            _lim_condition(f"T3[{_set_label(e)}]", sums, 0.0, ideal_j, cfg, witness_set=e)
        )
    return _assemble(conditions, guard_ok, notes, cfg)


def allen_check(
    a: InfiniteMatrix,
    family: TestFamily | None = None,
    cfg: CheckConfig | None = None,
) -> Verdict:
    """Knopp-core preservation conditions for the classical (Fin, Fin) case:
    regularity, absolute row sums converging to 1, and limsup of absolute row
    sums equal to 1 along every infinite family set."""
    cfg = cfg or CheckConfig()
    fin_ideal = FinIdeal()
    family = family if family is not None else default_family(fin_ideal, cfg.seed)
    base = silverman_toeplitz_check(a, fin_ideal, fin_ideal, family=family, cfg=cfg)
    conditions: list[ConditionReport] = [
        ConditionReport(
            name="A1(regular)",
            ok={Status.SATISFIED: True, Status.VIOLATED: False, Status.INCONCLUSIVE: None}[base.status],
            margin=max((c.margin for c in base.conditions if c.ok is False), default=0.0),
            details={"status": base.status.value},
            witness_set=base.witness_set,
            witness_row=base.witness_row,
        )
    ]
    abs_sums = a.row_sums(cfg.horizon, absolute=True)
    conditions.append(_lim_condition("A2(abs-row-sums)", abs_sums, 1.0, fin_ideal, cfg))
    support = a.max_support(cfg.horizon)
    for e in family.sets_infinite:
        mask = _col_mask(e, support)
        sums = a.masked_row_sums(mask, cfg.horizon, absolute=True)
        conditions.append(_limsup_condition(f"A3[{_set_label(e)}]", sums, fin_ideal, cfg, e))
    return _assemble(conditions, True, [], cfg)


def cfo_check(
    a: InfiniteMatrix,
    ideal_i: Ideal,
    ideal_j: Ideal,
    family: TestFamily | None = None,
    cfg: CheckConfig | None = None,
) -> Verdict:
    """Core preservation conditions for nonnegative matrices: regularity plus
    limsup of row sums over every positive family set equal to 1."""
    cfg = cfg or CheckConfig()
    neg = None if a.nonnegative else find_negative_entry(a, cfg.horizon)
    if neg is not None:
        raise NegativeEntryError(*neg)
    family = family if family is not None else default_family(ideal_i, cfg.seed)
    base = silverman_toeplitz_check(a, ideal_i, ideal_j, family=family, cfg=cfg)
    conditions: list[ConditionReport] = [
        ConditionReport(
            name="C1(regular)",
            ok={Status.SATISFIED: True, Status.VIOLATED: False, Status.INCONCLUSIVE: None}[base.status],
            margin=max((c.margin for c in base.conditions if c.ok is False), default=0.0),
            details={"status": base.status.value},
            witness_set=base.witness_set,
            witness_row=base.witness_row,
        )
    ]
    support = a.max_support(cfg.horizon)
    for e in family.sets_positive:
        mask = _col_mask(e, support)
        sums = a.masked_row_sums(mask, cfg.horizon, absolute=False)
        conditions.append(_limsup_condition(f"C2[{_set_label(e)}]", sums, ideal_j, cfg, e))
    return _assemble(conditions, True, [], cfg)


def leo_check(
    a: InfiniteMatrix,
    ideal_i: Ideal,
    ideal_j: Ideal,
    family: TestFamily | None = None,
    cfg: CheckConfig | None = None,
) -> Verdict:
    """Core preservation conditions for general matrices: regularity plus
    limsup of absolute row sums over every positive family set equal to 1.

    The conditions characterize core preservation when J is countably
    generated, and also for nonnegative matrices with arbitrary J.  Outside
    those cases (the characterization is known to fail when both ideals are
    the density-zero ideal) the verdict is stamped inconclusive and the
    conditions are reported as evidence only.
    """
    cfg = cfg or CheckConfig()
    family = family if family is not None else default_family(ideal_i, cfg.seed)
    guard_ok = _is_countably_generated(ideal_j) or _matrix_nonnegative(a, cfg.horizon)
    notes: list[str] = []
    if not guard_ok:
        notes.append(
            "the limsup conditions are not a characterization for this ideal pair "
            "(needs a countably generated J or a nonnegative matrix); "
            "verdict stamped inconclusive-as-characterization"
        )
    base = silverman_toeplitz_check(a, ideal_i, ideal_j, family=family, cfg=cfg)
    conditions: list[ConditionReport] = [
        ConditionReport(
            name="L1(regular)",
            ok={Status.SATISFIED: True, Status.VIOLATED: False, Status.INCONCLUSIVE: None}[base.status],
            margin=max((c.margin for c in base.conditions if c.ok is False), default=0.0),
            details={"status": base.status.value},
            witness_set=base.witness_set,
            witness_row=base.witness_row,
        )
    ]
    support = a.max_support(cfg.horizon)
    for e in family.sets_positive:
        mask = _col_mask(e, support)
        sums = a.masked_row_sums(mask, cfg.horizon, absolute=True)
        conditions.append(_limsup_condition(f"L2[{_set_label(e)}]", sums, ideal_j, cfg, e))
    return _assemble(conditions, guard_ok, notes, cfg)
