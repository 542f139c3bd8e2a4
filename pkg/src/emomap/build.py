"""Manufacture new dual-format lexicon resources and describe them.

`build` applies a trained model to a single-format lexicon; the remaining
operations generate the descriptive analyses that accompany a constructed
resource: summary statistics, top-k entries, and a cross-format correlation
matrix.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from typing import Collection

from .errors import DataError, DegenerateStatisticsError
from .knn import KnnModel, map_lexicon
from .lexicon import Lexicon, MatchPolicy, align_words
from .reporting import deterministic_timestamp, format_table
from .stats import pearson


def _toolkit_version() -> str:
    try:
        from importlib.metadata import version

        return version("emomap")
    except Exception:
        return "unknown"


@dataclass
class BuildManifest:
    """Audit record emitted beside every constructed lexicon."""

    input_path: str
    input_format: str
    input_rows: int
    model_provenance: str
    output_path: str
    output_format: str
    counts: dict
    timestamp: str
    toolkit_version: str

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "build-manifest",
            "input_path": self.input_path,
            "input_format": self.input_format,
            "input_rows": self.input_rows,
            "model_provenance": self.model_provenance,
            "output_path": self.output_path,
            "output_format": self.output_format,
            "counts": self.counts,
            "timestamp": self.timestamp,
            "toolkit_version": self.toolkit_version,
        }

    def to_json_bytes(self) -> bytes:
        return (json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n").encode(
            "utf-8"
        )


def build(
    lex: Lexicon,
    model: KnnModel,
    exclude_words: Collection[str] | None = None,
    *,
    input_path: str = "",
    output_path: str = "",
) -> tuple[Lexicon, BuildManifest]:
    """Map a single-format lexicon into the model's target format.

    The output keeps one row per input word in order.  When an exclusion
    vocabulary (typically the gold training words) is supplied, the manifest
    counts newly rated entries with that overlap removed; otherwise the raw
    row count is reported and labelled as such.
    """
    mapped = map_lexicon(model, lex)
    counts: dict = {"rows": len(mapped)}
    if exclude_words is not None:
        exclusions = set(exclude_words)
        overlap = sum(1 for word in mapped.words if word in exclusions)
        counts["gold_overlap_excluded"] = overlap
        counts["newly_rated"] = len(mapped) - overlap
    else:
        counts["newly_rated"] = len(mapped)
        counts["note"] = "raw count; no gold exclusion vocabulary supplied"
    manifest = BuildManifest(
        input_path=input_path or (lex.provenance or "in-memory lexicon"),
        input_format=lex.format.name,
        input_rows=len(lex),
        model_provenance=model.provenance,
        output_path=output_path,
        output_format=model.target_format.name,
        counts=counts,
        timestamp=deterministic_timestamp(),
        toolkit_version=_toolkit_version(),
    )
    return mapped, manifest


@dataclass(frozen=True)
class DimensionSummary:
    mean: float
    median: float
    minimum: float
    maximum: float
    stdev: float | None  # unbiased (n-1); None below two entries

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "median": self.median,
            "min": self.minimum,
            "max": self.maximum,
            "stdev": self.stdev,
        }


def describe(lex: Lexicon) -> dict[str, DimensionSummary]:
    """Exact order statistics and moments per dimension.

    Median for even n is the midpoint of the two central order statistics;
    the standard deviation uses the n-1 denominator.
    """
    if len(lex) == 0:
        raise DataError("cannot describe an empty lexicon")
    out: dict[str, DimensionSummary] = {}
    for dim in lex.format.canonical_dimensions:
        values = lex.column(dim).tolist()
        out[dim] = DimensionSummary(
            mean=statistics.fmean(values),
            median=statistics.median(values),
            minimum=min(values),
            maximum=max(values),
            stdev=statistics.stdev(values) if len(values) >= 2 else None,
        )
    return out


def describe_text(summaries: dict[str, DimensionSummary]) -> str:
    rows = [["statistic"] + list(summaries)]
    for key, pick in (
        ("mean", lambda s: f"{s.mean:.2f}"),
        ("median", lambda s: f"{s.median:.2f}"),
        ("min", lambda s: f"{s.minimum:.2f}"),
        ("max", lambda s: f"{s.maximum:.2f}"),
        ("stdev", lambda s: "n/a" if s.stdev is None else f"{s.stdev:.2f}"),
    ):
        rows.append([key] + [pick(s) for s in summaries.values()])
    note = "(stdev uses the unbiased n-1 denominator)"
    return format_table(rows) + "\n" + note + "\n"


def top_k(lex: Lexicon, dimension: str, k: int) -> list[str]:
    """The k words rated highest on one dimension, descending;
    ties keep lexicon order."""
    if k < 1:
        raise DataError("k must be at least 1")
    if k > len(lex):
        raise DataError(f"k={k} exceeds the {len(lex)} lexicon entries")
    column = lex.column(dimension)
    order = sorted(range(len(lex)), key=lambda i: (-column[i], i))
    return [lex.words[i] for i in order[:k]]


def top_k_text(lex: Lexicon, k: int, dimensions: list[str] | None = None) -> str:
    dims = dimensions or list(lex.format.canonical_dimensions)
    columns = {dim: top_k(lex, dim, k) for dim in dims}
    rows = [["rank"] + dims]
    for rank in range(k):
        rows.append([str(rank + 1)] + [columns[dim][rank] for dim in dims])
    return format_table(rows) + "\n"


@dataclass
class CrossCorrelation:
    """Pairwise correlation matrix over the dimensions of two lexicons."""

    labels: list[str]
    matrix: list[list[float | None]]  # symmetric; unit diagonal; None = degenerate
    overlap: int
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "cross-correlation",
            "labels": self.labels,
            "matrix": self.matrix,
            "overlap": self.overlap,
            "notes": self.notes,
        }

    def to_json_bytes(self) -> bytes:
        return (json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n").encode(
            "utf-8"
        )

    def to_text(self) -> str:
        rows = [[""] + self.labels]
        for i, label in enumerate(self.labels):
            cells = [label]
            for j in range(len(self.labels)):
                if j <= i:
                    cells.append("-")
                else:
                    value = self.matrix[i][j]
                    cells.append("n/a" if value is None else f"{value:+.2f}")
            rows.append(cells)
        head = f"correlation matrix over {self.overlap} overlapping words " \
               f"(upper triangle):"
        body = format_table(rows)
        tail = "".join(f"\nnote: {n}" for n in self.notes)
        return head + "\n" + body + tail + "\n"


def cross_corr(
    a: Lexicon, b: Lexicon, policy: MatchPolicy = MatchPolicy.EXACT
) -> CrossCorrelation:
    """Full symmetric Pearson matrix over both lexicons' dimensions, aligned
    on the common vocabulary.

    Dimension labels are qualified with :a/:b when the same name occurs in
    both lexicons.  Cells touching a constant column are flagged (None), the
    rest are computed.
    """
    rows_a, rows_b = align_words(a.words, b.words, policy, strict=False)
    if len(rows_a) < 2:
        raise DataError(f"only {len(rows_a)} overlapping words; need at least 2")
    collisions = set(a.format.canonical_dimensions) & set(b.format.canonical_dimensions)

    def label(dim: str, side: str) -> str:
        return f"{dim}:{side}" if dim in collisions else dim

    labels: list[str] = []
    columns = []
    for dim in a.format.canonical_dimensions:
        labels.append(label(dim, "a"))
        columns.append(a.ratings[rows_a, a.format.index_of(dim)])
    for dim in b.format.canonical_dimensions:
        labels.append(label(dim, "b"))
        columns.append(b.ratings[rows_b, b.format.index_of(dim)])
    size = len(labels)
    matrix: list[list[float | None]] = [[None] * size for _ in range(size)]
    notes: list[str] = []
    flagged: set[int] = set()
    for i in range(size):
        matrix[i][i] = 1.0
    for i in range(size):
        for j in range(i + 1, size):
            try:
                value = pearson(columns[i], columns[j]).r
            except DegenerateStatisticsError:
                value = None
                for idx in (i, j):
                    if bool((columns[idx] == columns[idx][0]).all()) and idx not in flagged:
                        flagged.add(idx)
                        notes.append(f"column {labels[idx]} is constant; cells flagged")
            matrix[i][j] = value
            matrix[j][i] = value
    return CrossCorrelation(
        labels=labels, matrix=matrix, overlap=len(rows_a), notes=notes
    )
