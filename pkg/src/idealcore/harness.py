"""Suite execution, catalog listing, and deterministic report emission.

Suite items are independent and run in a worker pool; results are assembled
in declaration order, so parallelism never changes the report.  Written
reports embed the fully resolved configuration and contain no timestamps,
making identical configs produce byte-identical files.  Wall-clock timings
live only in the returned bundle.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import ideals as ide
from . import sequences as seq
from . import sets as sd
from .asymptotics import CoreConfig
from .constructions import core_equality_experiment
from .regularity import CheckConfig, allen_check, cfo_check, leo_check, silverman_toeplitz_check
from .specs import ConfigError, ExperimentConfig, parse_ideal, parse_matrix

__all__ = ["ReportBundle", "run_suite", "list_catalog", "write_reports", "exit_code"]

_CSV_COLUMNS = [
    "item",
    "kind",
    "matrix",
    "ideal_i",
    "ideal_j",
    "theorem",
    "corpus_label",
    "status",
    "witness",
    "deviation",
    "core_x_lo",
    "core_x_hi",
    "core_ax_lo",
    "core_ax_hi",
]

_CHECKS = {
    "st": lambda a, i, j, cfg: silverman_toeplitz_check(a, i, j, cfg=cfg),
    "allen": lambda a, i, j, cfg: allen_check(a, cfg=cfg),
    "cfo": lambda a, i, j, cfg: cfo_check(a, i, j, cfg=cfg),
    "leo": lambda a, i, j, cfg: leo_check(a, i, j, cfg=cfg),
}


@dataclass(frozen=True)
class ReportBundle:
    items: tuple[dict, ...]
    resolved_config: dict
    summary: dict
    timings: tuple[tuple[str, float], ...]

    def to_dict(self) -> dict:
        return {"config": self.resolved_config, "items": list(self.items), "summary": self.summary}


def _select_corpus(labels: tuple[str, ...]) -> list[seq.BoundedSequence]:
    entries = seq.corpus()
    if list(labels) == ["all"]:
        return entries
    by_label = {x.label: x for x in entries}
    missing = [l for l in labels if l not in by_label]
    if missing:
        raise ConfigError("config.corpus_labels", f"unknown labels: {missing}")
    return [by_label[l] for l in labels]


def _run_item(item: dict, config: ExperimentConfig) -> dict:
    payload = dict(item)
    for key in ("matrix_spec", "ideal_i_spec", "ideal_j_spec"):
        payload.pop(key)
    try:
        a = parse_matrix(item["matrix_spec"])
        ideal_i = parse_ideal(item["ideal_i_spec"])
        ideal_j = parse_ideal(item["ideal_j_spec"])
        if item["kind"] == "check":
            cfg = CheckConfig(
                horizon=config.check_horizon,
                tol=config.tol,
                theta=config.theta,
                grid=config.grid,
                seed=config.seed,
            )
            verdict = _CHECKS[item["theorem"]](a, ideal_i, ideal_j, cfg)
            payload["status"] = verdict.status.value
            payload["verdict"] = verdict.to_dict()
        else:
            cfg = CoreConfig(horizon=config.core_horizon, grid=config.grid, theta=config.theta)
            corpus_entries = _select_corpus(config.corpus_labels)
            report = core_equality_experiment(a, ideal_i, ideal_j, corpus_entries, cfg)
            payload["status"] = "satisfied" if report.max_deviation <= config.tol else "violated"
            payload["experiment"] = report.to_dict()
    except Exception as exc:  # collected per item, never aborts the suite
        payload["status"] = "error"
        payload["error"] = f"{type(exc).__name__}: {exc}"
    return payload


def run_suite(config: ExperimentConfig) -> ReportBundle:
    """Execute every requested check and experiment; failures are per-item."""
    items: list[dict] = []
    for mi, mspec in enumerate(config.matrices):
        for pi, (ispec, jspec) in enumerate(config.ideal_pairs):
            base = {
                "matrix": _spec_label(mspec),
                "ideal_i": _spec_label(ispec),
                "ideal_j": _spec_label(jspec),
                "matrix_spec": mspec,
                "ideal_i_spec": ispec,
                "ideal_j_spec": jspec,
            }
            for theorem in config.theorems:
                items.append({"kind": "check", "theorem": theorem, **base})
            if config.core_equality:
                items.append({"kind": "experiment", "theorem": "", **base})
    for i, item in enumerate(items):
        item["item"] = i

    results: list[dict | None] = [None] * len(items)
    timings: list[tuple[str, float]] = []
    with ThreadPoolExecutor(max_workers=4) as pool:
        def job(index_item):
            index, item = index_item
            t0 = time.perf_counter()
            out = _run_item(item, config)
            return index, out, time.perf_counter() - t0

        for index, out, elapsed in pool.map(job, enumerate(items)):
            results[index] = out
            timings.append((f"item{index}", elapsed))

    final = tuple(r for r in results if r is not None)
    counts = {"satisfied": 0, "violated": 0, "inconclusive": 0, "error": 0}
    for r in final:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    summary = {"counts": counts, "exit_code": exit_code(final)}
    return ReportBundle(final, config.resolved(), summary, tuple(timings))


def _spec_label(spec) -> str:
    if isinstance(spec, str):
        return spec
    if isinstance(spec, dict):
        return spec.get("type", "?")
    return str(spec)


def exit_code(items) -> int:
    """0 iff everything satisfied, 1 on any violation/error, 2 when only inconclusive remain."""
    statuses = {r["status"] for r in items}
    if statuses & {"violated", "refuted", "error"}:
        return 1
    if "inconclusive" in statuses:
        return 2
    return 0


def _csv_rows(bundle: ReportBundle) -> list[dict]:
    rows = []
    for item in bundle.items:
        base = {c: "" for c in _CSV_COLUMNS}
        base.update(
            item=item["item"],
            kind=item["kind"],
            matrix=item["matrix"],
            ideal_i=item["ideal_i"],
            ideal_j=item["ideal_j"],
            theorem=item.get("theorem", ""),
            status=item["status"],
        )
        if item["kind"] == "check":
            witness = item.get("verdict", {}).get("witness")
            base["witness"] = json.dumps(witness, sort_keys=True) if witness else ""
            rows.append(base)
        elif "experiment" in item:
            for r in item["experiment"]["rows"]:
                row = dict(base)
                row.update(
                    corpus_label=r["label"],
                    deviation=repr(r["deviation"]),
                    core_x_lo=repr(r["core_x_lo"]),
                    core_x_hi=repr(r["core_x_hi"]),
                    core_ax_lo=repr(r["core_ax_lo"]),
                    core_ax_hi=repr(r["core_ax_hi"]),
                )
                rows.append(row)
        else:
            rows.append(base)
    return rows


def render_csv(bundle: ReportBundle) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in _csv_rows(bundle):
        writer.writerow(row)
    return buf.getvalue()


def render_json(bundle: ReportBundle) -> str:
    return json.dumps(bundle.to_dict(), sort_keys=True, indent=2) + "\n"


def write_reports(bundle: ReportBundle, output: str | Path, fmt: str = "json") -> Path:
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path.write_text(render_csv(bundle))
    elif fmt == "json":
        path.write_text(render_json(bundle))
    else:
        raise ConfigError("config.output.format", f"unknown format {fmt!r}")
    return path


def list_catalog() -> str:
    """Human-readable catalog of ideals, matrices, and corpus entries."""
    lines = ["Ideals:"]
    catalog: list[ide.Ideal] = [
        ide.fin(),
        ide.density_zero(),
        ide.erdos_ulam("log"),
        ide.summable(),
        ide.fin_oplus_full(sd.evens()),
        ide.countably_generated([sd.odds()]),
        ide.fin_times_empty(),
    ]
    for ideal in catalog:
        lines.append(f"  {ideal.label}: {ideal.classify().summary()}")
    lines.append("")
    lines.append("Matrices:")
    for label, desc in [
        ("Cesaro", "row n averages the first n+1 terms"),
        ("Identity", "diagonal ones"),
        ("Zero", "all entries zero"),
        ("Rk[map]", "single 1 per row at the mapped column (spec type 'rk')"),
        ("Diagonal", "diagonal from a value rule (spec type 'diagonal')"),
        ("Banded", "explicit rows from JSON with a declared tail rule"),
    ]:
        lines.append(f"  {label}: {desc}")
    lines.append("")
    lines.append("Corpus:")
    for x in seq.corpus():
        kind = "structured" if x.structured else "numeric-only"
        lines.append(f"  {x.label}: bound {x.bound:g}, {kind}")
    return "\n".join(lines) + "\n"
