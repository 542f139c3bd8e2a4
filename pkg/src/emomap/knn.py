"""Per-dimension k-nearest-neighbour mapping between emotion formats.

One model maps a whole format: internally each target dimension is predicted
independently as the unweighted mean of the k training rows closest to the
query in Euclidean distance over the full source rating vector.
"""

from __future__ import annotations

import json
import math
from typing import BinaryIO

import numpy as np

from .errors import (
    DataError,
    FormatMismatchError,
    ModelFormatError,
    ModelVersionError,
)
from .lexicon import FormatDescriptor, Lexicon, MergedLexicon

MODEL_SCHEMA_VERSION = 1
MODEL_KIND = "knn-mapping-model"


class KnnModel:
    """Frozen training matrices plus k; training is storage only."""

    __slots__ = ("source_format", "target_format", "k", "train_features",
                 "train_targets", "provenance")

    def __init__(
        self,
        source_format: FormatDescriptor,
        target_format: FormatDescriptor,
        k: int,
        train_features,
        train_targets,
        provenance: str = "",
    ):
        features = np.array(train_features, dtype=float)
        targets = np.array(train_targets, dtype=float)
        if features.ndim != 2 or targets.ndim != 2:
            raise DataError("training matrices must be two-dimensional")
        n = features.shape[0]
        if n < 1:
            raise DataError("a model needs at least one training row")
        if targets.shape[0] != n:
            raise DataError(
                f"feature rows ({n}) and target rows ({targets.shape[0]}) differ"
            )
        if features.shape[1] != len(source_format.dimensions):
            raise DataError(
                f"feature width {features.shape[1]} does not match source format "
                f"{source_format.name!r}"
            )
        if targets.shape[1] != len(target_format.dimensions):
            raise DataError(
                f"target width {targets.shape[1]} does not match target format "
                f"{target_format.name!r}"
            )
        if not (np.all(np.isfinite(features)) and np.all(np.isfinite(targets))):
            raise DataError("training matrices contain non-finite values")
        if targets.min() < target_format.scale_min or targets.max() > target_format.scale_max:
            raise DataError(
                f"stored targets fall outside "
                f"[{target_format.scale_min}, {target_format.scale_max}]"
            )
        if not 1 <= k <= n:
            raise DataError(f"k={k} outside [1, {n}]")
        features.setflags(write=False)
        targets.setflags(write=False)
        self.source_format = source_format
        self.target_format = target_format
        self.k = int(k)
        self.train_features = features
        self.train_targets = targets
        self.provenance = provenance

    @property
    def n_rows(self) -> int:
        return self.train_features.shape[0]


def resolve_direction(data: MergedLexicon, direction: str) -> tuple[int, int]:
    """Map a '<source>2<target>' string onto (source, target) side indices."""
    a, b = data.formats
    label = direction.strip().casefold()
    if label == f"{a.name.casefold()}2{b.name.casefold()}":
        return 0, 1
    if label == f"{b.name.casefold()}2{a.name.casefold()}":
        return 1, 0
    raise FormatMismatchError(
        f"direction {direction!r} does not name the formats "
        f"{a.name!r}/{b.name!r}"
    )


def fit(data: MergedLexicon, direction: str, k: int) -> KnnModel:
    """Store the designated slice pair as a model; k is clamped to the row count."""
    if len(data) == 0:
        raise DataError("cannot fit on an empty merged lexicon")
    if k < 1:
        raise DataError("k must be at least 1")
    src, tgt = resolve_direction(data, direction)
    source_format, features = data.side(src)
    target_format, targets = data.side(tgt)
    effective_k = min(k, len(data))
    clamp_note = f" (requested k={k})" if effective_k != k else ""
    provenance = (
        f"{source_format.name}2{target_format.name} kNN, k={effective_k}"
        f"{clamp_note}, trained on {data.provenance or f'{len(data)} rows'}"
    )
    return KnnModel(source_format, target_format, effective_k, features, targets,
                    provenance=provenance)


def predict(model: KnnModel, query) -> np.ndarray:
    """One output per target dimension: mean of the k nearest rows' targets.

    Distance ties break toward the lower training-row index.  The neighbour
    mean is exactly rounded (math.fsum), so it is independent of summation
    order; the result is clamped to the target bounds.
    """
    q = np.asarray(query, dtype=float)
    n_features = len(model.source_format.dimensions)
    if q.shape != (n_features,):
        raise FormatMismatchError(
            f"query shape {q.shape} does not match the {n_features} source dimensions"
        )
    if not np.all(np.isfinite(q)):
        raise DataError("query contains non-finite values")
    features = model.train_features
    squared = np.zeros(features.shape[0])
    for j in range(n_features):
        diff = features[:, j] - q[j]
        squared += diff * diff
    neighbours = np.argsort(squared, kind="stable")[: model.k]
    lo = model.target_format.scale_min
    hi = model.target_format.scale_max
    out = np.empty(len(model.target_format.dimensions))
    for t in range(out.shape[0]):
        mean = math.fsum(model.train_targets[neighbours, t].tolist()) / model.k
        out[t] = min(max(mean, lo), hi)
    return out


def map_lexicon(model: KnnModel, lex: Lexicon) -> Lexicon:
    """Apply the model row by row; same words, same order, target format."""
    src = model.source_format
    fmt = lex.format
    if set(fmt.canonical_dimensions) != set(src.canonical_dimensions) or (
        fmt.scale_min,
        fmt.scale_max,
    ) != (src.scale_min, src.scale_max):
        raise FormatMismatchError(
            f"lexicon format {fmt.name!r} does not match the model's source "
            f"format {src.name!r}"
        )
    order = [fmt.index_of(d) for d in src.dimensions]
    columns = lex.ratings[:, order]
    out = np.empty((len(lex), len(model.target_format.dimensions)))
    for i in range(len(lex)):
        out[i] = predict(model, columns[i])
    provenance = f"mapped from [{lex.provenance or 'input lexicon'}] with [{model.provenance}]"
    return Lexicon(
        model.target_format,
        lex.words,
        out,
        language_tag=lex.language_tag,
        provenance=provenance,
    )


def _format_doc(fmt: FormatDescriptor) -> dict:
    return {
        "name": fmt.name,
        "dimensions": list(fmt.dimensions),
        "scale_min": fmt.scale_min,
        "scale_max": fmt.scale_max,
    }


def _format_from_doc(doc) -> FormatDescriptor:
    try:
        return FormatDescriptor(
            doc["name"], tuple(doc["dimensions"]), doc["scale_min"], doc["scale_max"]
        )
    except (TypeError, KeyError) as exc:
        raise ModelFormatError(f"malformed format descriptor: {exc}") from None


def save_model(model: KnnModel) -> bytes:
    """Lossless JSON serialization (floats round-trip via repr)."""
    doc = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "kind": MODEL_KIND,
        "k": model.k,
        "source_format": _format_doc(model.source_format),
        "target_format": _format_doc(model.target_format),
        "provenance": model.provenance,
        "train_features": model.train_features.tolist(),
        "train_targets": model.train_targets.tolist(),
    }
    return (json.dumps(doc, ensure_ascii=False) + "\n").encode("utf-8")


def load_model(stream: BinaryIO | bytes) -> KnnModel:
    data = stream if isinstance(stream, bytes) else stream.read()
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"not a model file: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("model file must hold a JSON object")
    if doc.get("kind") != MODEL_KIND:
        raise ModelFormatError(f"unexpected kind {doc.get('kind')!r}")
    version = doc.get("schema_version")
    if version != MODEL_SCHEMA_VERSION:
        raise ModelVersionError(
            f"unsupported schema version {version!r} "
            f"(this build reads version {MODEL_SCHEMA_VERSION})"
        )
    missing = [
        key
        for key in ("k", "source_format", "target_format", "train_features", "train_targets")
        if key not in doc
    ]
    if missing:
        raise ModelFormatError(f"model file misses fields {missing}")
    source_format = _format_from_doc(doc["source_format"])
    target_format = _format_from_doc(doc["target_format"])
    try:
        return KnnModel(
            source_format,
            target_format,
            doc["k"],
            doc["train_features"],
            doc["train_targets"],
            provenance=str(doc.get("provenance", "")),
        )
    except (DataError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"model file violates the schema: {exc}") from None
