"""Ideal limsup/liminf, cluster sets, and cores of bounded sequences.

The numeric engine partitions the value range into grid cells of width
``grid`` and keeps a cell iff the index set hitting its slightly enlarged
window (width 1.5·grid, so boundary values are never lost to discretization)
is judged positive for the ideal.  Judgments are exact via set descriptions
when the sequence carries level sets, and use the ideal's numeric positivity
estimator otherwise.  Reported interval endpoints come from the witnessing
values themselves (exact level values, or values attained on the supporting
hits), not from cell boundaries, which keeps the discretization error well
inside the grid resolution.

``oracle_core`` is the independent verification path: it ignores the grid and
horizon entirely and decides the positivity of each level set symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ideals import Ideal, MembershipResult, PositivityResult, membership
from .sequences import BoundedSequence
from .sets import contains_predicate

__all__ = [
    "CoreConfig",
    "CoreInterval",
    "ClusterSet",
    "InconclusiveCellsError",
    "UnsupportedInstanceError",
    "cluster_points",
    "cluster_of_values",
    "ideal_limsup",
    "ideal_liminf",
    "limsup_of_values",
    "core",
    "oracle_core",
    "ideal_lim_check",
]


class InconclusiveCellsError(RuntimeError):
    """The positivity estimator was inconclusive where it changes the answer."""

    def __init__(self, message: str, cells: tuple[tuple[float, float], ...] = ()):
        super().__init__(message)
        self.cells = cells


class UnsupportedInstanceError(ValueError):
    """The symbolic oracle does not apply to this sequence/ideal pair."""


@dataclass(frozen=True)
class CoreConfig:
    """Truncation parameters for the numeric engine."""

    horizon: int = 100_000
    grid: float = 0.01
    theta: float = 1e-3

    def __post_init__(self):
        if self.horizon < 100:
            raise ValueError("horizon must be at least 100")
        if self.grid <= 0:
            raise ValueError("grid resolution must be positive")


@dataclass(frozen=True)
class ClusterSet:
    """Disjoint closed intervals approximating the cluster-point set."""

    points: tuple[tuple[float, float], ...]
    inconclusive: tuple[tuple[float, float], ...]
    exact: bool

    @property
    def sup(self) -> float:
        return max(hi for _, hi in self.points)

    @property
    def inf(self) -> float:
        return min(lo for lo, _ in self.points)


@dataclass(frozen=True)
class CoreInterval:
    lo: float
    hi: float
    method: str  # "exact" (symbolic oracle) or "numeric" (grid + horizon)
    horizon: int | None = None
    grid: float | None = None
    theta: float | None = None

    def as_tuple(self) -> tuple[float, float]:
        return (self.lo, self.hi)


_ENLARGE = 0.25  # each cell window is extended by this fraction of the grid step per side


def _cell_range(bound: float, grid: float) -> range:
    lo = math.floor(-bound / grid) - 1
    hi = math.ceil(bound / grid) + 1
    return range(lo, hi)


@dataclass
class _CellVerdict:
    status: str  # "pos" | "null" | "inc"
    wmin: float = math.nan
    wmax: float = math.nan


def _merge(cells: list[tuple[int, _CellVerdict]], grid: float):
    """Merge runs of adjacent cells; returns value intervals for positive runs."""
    points: list[tuple[float, float]] = []
    inconclusive: list[tuple[float, float]] = []
    run: list[tuple[int, _CellVerdict]] = []

    def flush():
        if not run:
            return
        status = run[0][1].status
        if status == "pos":
            points.append((min(c.wmin for _, c in run), max(c.wmax for _, c in run)))
        else:
            inconclusive.append((run[0][0] * grid, (run[-1][0] + 1) * grid))
        run.clear()

    prev_i = None
    for i, verdict in cells:
        if verdict.status == "null":
            flush()
            prev_i = None
            continue
        if run and (verdict.status != run[0][1].status or prev_i != i - 1):
            flush()
        run.append((i, verdict))
        prev_i = i
    flush()
    return tuple(points), tuple(inconclusive)


def cluster_of_values(
    values: np.ndarray, ideal: Ideal, cfg: CoreConfig, bound: float | None = None
) -> ClusterSet:
    """Numeric cluster-set estimate from a value prefix."""
    values = np.asarray(values, dtype=np.float64)
    if bound is None:
        bound = float(np.max(np.abs(values))) if values.size else 0.0
    horizon = len(values)
    order = np.argsort(values, kind="stable")
    sv = values[order]
    cells: list[tuple[int, _CellVerdict]] = []
    for i in _cell_range(bound, cfg.grid):
        wlo = (i - _ENLARGE) * cfg.grid
        whi = (i + 1 + _ENLARGE) * cfg.grid
        a = int(np.searchsorted(sv, wlo, side="left"))
        b = int(np.searchsorted(sv, whi, side="right"))
        if a == b:
            cells.append((i, _CellVerdict("null")))
            continue
        hits = np.sort(order[a:b])
        verdict, support = ideal.positivity(hits, horizon, cfg.theta)
        if verdict is PositivityResult.POSITIVE:
            witness = values[support]
            cells.append((i, _CellVerdict("pos", float(witness.min()), float(witness.max()))))
        elif verdict is PositivityResult.INCONCLUSIVE:
            cells.append((i, _CellVerdict("inc")))
        else:
            cells.append((i, _CellVerdict("null")))
    points, inconclusive = _merge(cells, cfg.grid)
    if not points and not inconclusive:
        raise InconclusiveCellsError("no cell survived; sequence prefix may be empty")
    return ClusterSet(points, inconclusive, exact=False)


def _structured_cluster(x: BoundedSequence, ideal: Ideal, cfg: CoreConfig) -> ClusterSet:
    decisions: list[tuple[float, str]] = []
    exact = True
    for value, level_set in x.level_sets:
        verdict = membership(level_set, ideal, horizon=cfg.horizon)
        if verdict in (MembershipResult.POSITIVE, MembershipResult.IN_DUAL_FILTER):
            decisions.append((value, "pos"))
        elif verdict is MembershipResult.IN_IDEAL:
            decisions.append((value, "null"))
        else:
            exact = False
            hits = np.fromiter(level_set.enumerate_prefix(cfg.horizon), dtype=np.int64)
            v, _ = ideal.positivity(hits, cfg.horizon, cfg.theta)
            if v is PositivityResult.POSITIVE:
                decisions.append((value, "pos"))
            elif v is PositivityResult.NULL:
                decisions.append((value, "null"))
            else:
                decisions.append((value, "inc"))
    cells: list[tuple[int, _CellVerdict]] = []
    for i in _cell_range(x.bound, cfg.grid):
        wlo = (i - _ENLARGE) * cfg.grid
        whi = (i + 1 + _ENLARGE) * cfg.grid
        in_window = [(v, s) for v, s in decisions if wlo <= v <= whi]
        pos = [v for v, s in in_window if s == "pos"]
        if pos:
            cells.append((i, _CellVerdict("pos", min(pos), max(pos))))
        elif any(s == "inc" for _, s in in_window):
            cells.append((i, _CellVerdict("inc")))
        else:
            cells.append((i, _CellVerdict("null")))
    points, inconclusive = _merge(cells, cfg.grid)
    if not points and not inconclusive:
        raise InconclusiveCellsError("no positively attained value")
    return ClusterSet(points, inconclusive, exact=exact)


def cluster_points(x: BoundedSequence, ideal: Ideal, cfg: CoreConfig | None = None) -> ClusterSet:
    """Cluster-point intervals of the sequence under the ideal."""
    cfg = cfg or CoreConfig()
    if x.level_sets is not None and len(x.level_sets) <= 64:
        return _structured_cluster(x, ideal, cfg)
    return cluster_of_values(x.prefix(cfg.horizon), ideal, cfg, bound=x.bound)


def _sup_of(cluster: ClusterSet) -> float:
    if not cluster.points:
        raise InconclusiveCellsError("only inconclusive cells survived", cluster.inconclusive)
    top = cluster.sup
    blocking = tuple(w for w in cluster.inconclusive if w[1] > top)
    if blocking:
        raise InconclusiveCellsError("inconclusive cells above the largest surviving value", blocking)
    return top


def _inf_of(cluster: ClusterSet) -> float:
    if not cluster.points:
        raise InconclusiveCellsError("only inconclusive cells survived", cluster.inconclusive)
    bottom = cluster.inf
    blocking = tuple(w for w in cluster.inconclusive if w[0] < bottom)
    if blocking:
        raise InconclusiveCellsError("inconclusive cells below the smallest surviving value", blocking)
    return bottom


def ideal_limsup(x: BoundedSequence, ideal: Ideal, cfg: CoreConfig | None = None) -> float:
    return _sup_of(cluster_points(x, ideal, cfg))


def ideal_liminf(x: BoundedSequence, ideal: Ideal, cfg: CoreConfig | None = None) -> float:
    return _inf_of(cluster_points(x, ideal, cfg))


def limsup_of_values(
    values: np.ndarray, ideal: Ideal, cfg: CoreConfig, bound: float | None = None
) -> float:
    """Ideal limsup estimate for a derived value prefix (row sums and the like)."""
    return _sup_of(cluster_of_values(values, ideal, cfg, bound=bound))


def core(x: BoundedSequence, ideal: Ideal, cfg: CoreConfig | None = None) -> CoreInterval:
    """The core interval [ideal liminf, ideal limsup] at the configured truncation."""
    cfg = cfg or CoreConfig()
    cluster = cluster_points(x, ideal, cfg)
    return CoreInterval(
        lo=_inf_of(cluster),
        hi=_sup_of(cluster),
        method="numeric",
        horizon=cfg.horizon,
        grid=cfg.grid,
        theta=cfg.theta,
    )


def oracle_core(x: BoundedSequence, ideal: Ideal) -> CoreInterval:
    """Exact core for finitely-valued sequences over exactly decidable level sets.

    Independent of the grid/horizon machinery: a value is a cluster point iff
    its level set is positive, decided symbolically.  Raises
    :class:`UnsupportedInstanceError` whenever exactness cannot be guaranteed.
    """
    if x.level_sets is None:
        raise UnsupportedInstanceError(f"{x.label}: no level-set structure")
    positives: list[float] = []
    for value, level_set in x.level_sets:
        if contains_predicate(level_set):
            raise UnsupportedInstanceError(f"{x.label}: predicate level set for value {value}")
        verdict = membership(level_set, ideal)
        if verdict is MembershipResult.INCONCLUSIVE:
            raise UnsupportedInstanceError(
                f"{x.label}: membership of the level set of {value} is undecided"
            )
        if verdict in (MembershipResult.POSITIVE, MembershipResult.IN_DUAL_FILTER):
            positives.append(value)
    if not positives:
        raise UnsupportedInstanceError(f"{x.label}: no positively attained value")
    return CoreInterval(lo=min(positives), hi=max(positives), method="exact")


def ideal_lim_check(
    values: np.ndarray,
    target: float,
    tol: float,
    ideal: Ideal,
    theta: float | None = None,
) -> tuple[bool | None, dict]:
    """Does the ideal limit of the value prefix equal ``target`` within ``tol``?

    The deviation index set {n : |v_n − target| > tol} is judged by the
    ideal's positivity estimator: a null deviation set confirms the limit, a
    positive one refutes it (with a witness index), otherwise inconclusive.
    """
    values = np.asarray(values, dtype=np.float64)
    horizon = len(values)
    deviations = np.abs(values - target)
    dev_idx = np.nonzero(deviations > tol)[0]
    verdict, support = ideal.positivity(dev_idx, horizon, theta)
    info: dict = {
        "target": target,
        "tol": tol,
        "deviation_count": int(dev_idx.size),
        "horizon": horizon,
    }
    if verdict is PositivityResult.NULL:
        info["max_tail_deviation"] = float(deviations[horizon // 2 :].max()) if horizon else 0.0
        return True, info
    if verdict is PositivityResult.POSITIVE:
        witness = int(support[np.argmax(deviations[support])])
        info["witness_index"] = witness
        info["witness_value"] = float(values[witness])
        info["witness_deviation"] = float(deviations[witness])
        return False, info
    return None, info
