"""Report containers and deterministic text/JSON rendering.

Every renderer is a pure function of its report object, so identical inputs
and configuration always produce byte-identical output.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field

ALPHA = 0.05


def deterministic_timestamp() -> str:
    """ISO-8601 UTC timestamp; honours SOURCE_DATE_EPOCH for reproducible builds."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(moment))


def fmt_r(value: float | None, digits: int = 3) -> str:
    return "n/a" if value is None else f"{value:.{digits}f}"


def format_table(rows: list[list[str]], indent: str = "") -> str:
    """Align columns: first column left, the rest right."""
    if not rows:
        return ""
    widths = [max(len(row[c]) for row in rows) for c in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [
            cell.rjust(widths[c]) for c, cell in enumerate(row[1:], start=1)
        ]
        lines.append((indent + "  ".join(cells)).rstrip())
    return "\n".join(lines)


@dataclass
class InputRecord:
    name: str
    provenance: str
    sha256: str
    rows: int

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "provenance": self.provenance,
            "sha256": self.sha256,
            "rows": self.rows,
        }


@dataclass
class DimensionScore:
    dimension: str
    format_name: str
    r: float | None                      # headline value (per-fold mean for CV runs)
    r_pooled: float | None = None        # pooled over concatenated held-out rows
    fold_r: list[float | None] | None = None
    note: str | None = None

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "format": self.format_name,
            "r": self.r,
            "r_pooled": self.r_pooled,
            "fold_r": self.fold_r,
            "note": self.note,
        }


@dataclass
class Verdict:
    test: str
    dimension: str
    floor: float
    statistic: float
    p: float
    significant: bool
    df: int | None = None
    n: int | None = None

    def to_dict(self) -> dict:
        return {
            "test": self.test,
            "dimension": self.dimension,
            "floor": self.floor,
            "statistic": self.statistic,
            "p": self.p,
            "alpha": ALPHA,
            "significant": self.significant,
            "df": self.df,
            "n": self.n,
        }


@dataclass
class EvalReport:
    experiment: str
    label: str
    config: dict
    inputs: list[InputRecord]
    scores: list[DimensionScore]
    averages: dict[str, dict[str, float | None]]
    verdicts: list[Verdict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def score(self, dimension: str) -> DimensionScore:
        for entry in self.scores:
            if entry.dimension == dimension:
                return entry
        raise KeyError(dimension)

    def has_degenerate_scores(self) -> bool:
        return any(entry.note for entry in self.scores)

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "eval-report",
            "experiment": self.experiment,
            "label": self.label,
            "config": self.config,
            "inputs": [record.to_dict() for record in self.inputs],
            "scores": [entry.to_dict() for entry in self.scores],
            "averages": self.averages,
            "verdicts": [verdict.to_dict() for verdict in self.verdicts],
            "warnings": self.warnings,
        }

    def to_json_bytes(self) -> bytes:
        return _json_bytes(self.to_dict())

    def to_text(self) -> str:
        lines = [
            "evaluation report",
            "=================",
            f"experiment : {self.experiment}",
            f"label      : {self.label}",
            "config     : " + _config_line(self.config),
        ]
        for record in self.inputs:
            lines.append(
                f"input      : {record.name} = {record.provenance} "
                f"({record.rows} rows, data sha256 {record.sha256[:12]})"
            )
        lines.append("")
        lines.append(score_matrix_text([self]))
        detail = _per_fold_detail(self)
        if detail:
            lines.append("")
            lines.append(detail)
        if self.verdicts:
            lines.append("")
            lines.append(f"significance vs. reliability floor (one-tailed, alpha={ALPHA}):")
            rows = []
            for v in self.verdicts:
                head = f"{v.test}({v.df})" if v.df is not None else f"{v.test}(n={v.n})"
                rows.append(
                    [
                        f"  {v.dimension}",
                        head,
                        f"{v.statistic:+.4f}",
                        f"p={v.p:.3g}",
                        f"floor={v.floor:.3f}",
                        "significant" if v.significant else "not significant",
                    ]
                )
            lines.append(format_table(rows))
        if self.warnings:
            lines.append("")
            lines.append("warnings:")
            lines.extend(f"  - {w}" for w in self.warnings)
        return "\n".join(lines) + "\n"


def _config_line(config: dict) -> str:
    parts = []
    for key, value in config.items():
        if isinstance(value, dict):
            inner = ",".join(f"{k}={v}" for k, v in value.items())
            parts.append(f"{key}={{{inner}}}")
        else:
            parts.append(f"{key}={value}")
    return " ".join(parts)


def _per_fold_detail(report: EvalReport) -> str:
    rows = []
    for entry in report.scores:
        if entry.fold_r is None:
            continue
        folds = ",".join(fmt_r(r) for r in entry.fold_r)
        rows.append([f"  {entry.dimension}", folds])
    if not rows:
        return ""
    return "per-fold r:\n" + format_table(rows)


def score_matrix_text(reports: list[EvalReport]) -> str:
    """Wide table: one row per report, dimension columns grouped by format
    with an average column closing each group."""
    if not reports:
        return ""
    first = reports[0]
    groups: list[tuple[str, list[str]]] = []
    for entry in first.scores:
        if not groups or groups[-1][0] != entry.format_name:
            groups.append((entry.format_name, []))
        groups[-1][1].append(entry.dimension)
    header = ["label"]
    for fmt_name, dims in groups:
        header.extend(dims)
        header.append(f"avg({fmt_name})")
    pooled = any(s.r_pooled is not None for s in first.scores)
    rows = [header]
    for report in reports:
        row = [report.label]
        for fmt_name, dims in groups:
            for dim in dims:
                row.append(fmt_r(report.score(dim).r))
            row.append(fmt_r(_avg_field(report, fmt_name, "r")))
        rows.append(row)
        if pooled:
            row = [f"{report.label} (pooled)"]
            for fmt_name, dims in groups:
                for dim in dims:
                    row.append(fmt_r(report.score(dim).r_pooled))
                row.append(fmt_r(_avg_field(report, fmt_name, "r_pooled")))
            rows.append(row)
    return format_table(rows)


def _avg_field(report: EvalReport, fmt_name: str, key: str) -> float | None:
    group = report.averages.get(fmt_name)
    if group is None:
        return None
    return group.get(key)


@dataclass
class BagReport:
    experiment: str
    config: dict
    inputs: list[InputRecord]
    ranking: list[tuple[str, float | None]]      # (bag label, objective), best first
    best_bag: tuple[str, ...]
    cells: dict[str, dict[str, EvalReport]]      # bag label -> target -> report
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "bag-report",
            "experiment": self.experiment,
            "config": self.config,
            "inputs": [record.to_dict() for record in self.inputs],
            "ranking": [
                {"bag": label, "mean_r": objective} for label, objective in self.ranking
            ],
            "best_bag": list(self.best_bag),
            "cells": {
                bag: {target: report.to_dict() for target, report in targets.items()}
                for bag, targets in self.cells.items()
            },
            "warnings": self.warnings,
        }

    def to_json_bytes(self) -> bytes:
        return _json_bytes(self.to_dict())

    def to_text(self) -> str:
        lines = [
            "bagged crosslingual evaluation",
            "==============================",
            "config     : " + _config_line(self.config),
        ]
        for record in self.inputs:
            lines.append(
                f"input      : {record.name} = {record.provenance} "
                f"({record.rows} rows, data sha256 {record.sha256[:12]})"
            )
        lines.append("")
        lines.append("bag ranking (mean r over all dimensions and targets):")
        rows = [
            [f"  {rank}. {label}", fmt_r(objective)]
            for rank, (label, objective) in enumerate(self.ranking, start=1)
        ]
        lines.append(format_table(rows))
        best_label = "+".join(self.best_bag)
        lines.append("")
        lines.append(f"best bag: {best_label}")
        lines.append("")
        lines.append("per-target results for the best bag:")
        best_cells = self.cells[best_label]
        lines.append(score_matrix_text([best_cells[t] for t in best_cells]))
        if self.warnings:
            lines.append("")
            lines.append("warnings:")
            lines.extend(f"  - {w}" for w in self.warnings)
        return "\n".join(lines) + "\n"


def _json_bytes(doc: dict) -> bytes:
    return (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
