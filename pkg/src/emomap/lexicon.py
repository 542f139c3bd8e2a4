"""Emotion lexicon data model and TSV interchange.

A lexicon is an ordered word -> rating-vector table under a fixed
:class:`FormatDescriptor` (e.g. VAD on [1,9] or BE5 on [1,5]).  Files are
UTF-8, tab-separated, with one header line, ``.`` as decimal separator and
no quoting; tabs, carriage returns and newlines are forbidden inside words.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import BinaryIO, Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DataError,
    DuplicateWordError,
    FormatMismatchError,
    HeaderMismatchError,
    MalformedRowError,
    NonNumericRatingError,
    NormalizationCollisionError,
    OutOfRangeError,
)

_NUMBER_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?\Z")


@dataclass(frozen=True)
class FormatDescriptor:
    """Names and scale bounds of one emotion representation."""

    name: str
    dimensions: tuple[str, ...]
    scale_min: float
    scale_max: float

    def __post_init__(self):
        object.__setattr__(self, "dimensions", tuple(self.dimensions))
        object.__setattr__(self, "scale_min", float(self.scale_min))
        object.__setattr__(self, "scale_max", float(self.scale_max))
        if not self.dimensions:
            raise DataError(f"format {self.name!r} has no dimensions")
        canon = self.canonical_dimensions
        if len(set(canon)) != len(canon):
            raise DataError(f"format {self.name!r} repeats a dimension name")
        if not self.scale_min < self.scale_max:
            raise DataError(
                f"format {self.name!r}: scale_min must be below scale_max, "
                f"got [{self.scale_min}, {self.scale_max}]"
            )

    @property
    def canonical_dimensions(self) -> tuple[str, ...]:
        return tuple(d.casefold() for d in self.dimensions)

    def index_of(self, dimension: str) -> int:
        try:
            return self.canonical_dimensions.index(dimension.casefold())
        except ValueError:
            raise DataError(
                f"format {self.name!r} has no dimension {dimension!r}"
            ) from None

    def with_bounds(self, scale_min: float, scale_max: float) -> "FormatDescriptor":
        return FormatDescriptor(self.name, self.dimensions, scale_min, scale_max)


#: Canonical presets.  VAD dimensions are bi-polar on [1,9], BE5 categories
#: uni-polar on [1,5] where 1 means absence.
VAD = FormatDescriptor("vad", ("valence", "arousal", "dominance"), 1.0, 9.0)
VA = FormatDescriptor("va", ("valence", "arousal"), 1.0, 9.0)
BE5 = FormatDescriptor("be5", ("joy", "anger", "sadness", "fear", "disgust"), 1.0, 5.0)

PRESETS: dict[str, FormatDescriptor] = {"vad": VAD, "va": VA, "be5": BE5}


class MatchPolicy(Enum):
    """How words from two lexicons are matched against each other."""

    EXACT = "exact"
    CASEFOLD = "casefold"

    def key(self, word: str) -> str:
        return word.casefold() if self is MatchPolicy.CASEFOLD else word


@dataclass(frozen=True)
class ParseOptions:
    """Strictness knobs for parsing; the defaults reject anything odd."""

    clamp: bool = False       # clamp out-of-range ratings instead of failing
    dedup_mean: bool = False  # average duplicate words instead of failing


_FORBIDDEN_IN_WORD = ("\t", "\n", "\r")


def _check_word(word: str) -> None:
    if not word:
        raise DataError("empty word")
    for ch in _FORBIDDEN_IN_WORD:
        if ch in word:
            raise DataError(f"word {word!r} contains a forbidden control character")


class Lexicon:
    """Ordered word -> rating-vector table under one format.

    Immutable after construction.  ``ratings`` is a read-only float64 matrix
    of shape ``(len(words), len(format.dimensions))``; row order is exactly
    the order entries were supplied in and all downstream iteration keeps it.
    """

    __slots__ = ("format", "words", "ratings", "language_tag", "provenance")

    def __init__(
        self,
        format: FormatDescriptor,
        words: Iterable[str],
        ratings,
        language_tag: str = "",
        provenance: str = "",
    ):
        words = tuple(words)
        matrix = np.array(ratings, dtype=float)
        if matrix.size == 0:
            matrix = matrix.reshape(0, len(format.dimensions))
        if matrix.ndim != 2 or matrix.shape != (len(words), len(format.dimensions)):
            raise DataError(
                f"ratings shape {matrix.shape} does not match "
                f"{len(words)} words x {len(format.dimensions)} dimensions"
            )
        if matrix.size and not np.all(np.isfinite(matrix)):
            raise DataError("ratings contain non-finite values")
        if matrix.size and (
            matrix.min() < format.scale_min or matrix.max() > format.scale_max
        ):
            raise DataError(
                f"ratings fall outside [{format.scale_min}, {format.scale_max}]"
            )
        seen = set()
        for word in words:
            _check_word(word)
            if word in seen:
                raise DataError(f"duplicate word {word!r}")
            seen.add(word)
        matrix.setflags(write=False)
        self.format = format
        self.words = words
        self.ratings = matrix
        self.language_tag = language_tag
        self.provenance = provenance

    def __len__(self) -> int:
        return len(self.words)

    def entries(self) -> Iterator[tuple[str, np.ndarray]]:
        for i, word in enumerate(self.words):
            yield word, self.ratings[i]

    def column(self, dimension: str) -> np.ndarray:
        return self.ratings[:, self.format.index_of(dimension)]


def _decode_lines(data: bytes) -> list[str]:
    raw = data.split(b"\n")
    if raw and raw[-1] == b"":
        raw.pop()
    lines = []
    for number, chunk in enumerate(raw, start=1):
        try:
            lines.append(chunk.decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise MalformedRowError(f"invalid UTF-8 ({exc.reason})", line=number) from None
    return lines


def _read_stream(stream: BinaryIO | bytes) -> bytes:
    return stream if isinstance(stream, bytes) else stream.read()


def _split_header(line: str) -> list[str]:
    if line.startswith("﻿"):
        raise HeaderMismatchError("file begins with a UTF-8 BOM", line=1)
    cells = line.split("\t")
    if cells[0] != "word":
        raise HeaderMismatchError(
            f"first header column must be 'word', got {cells[0]!r}", line=1
        )
    return cells[1:]


def _header_positions(header_dims: Sequence[str], fmt: FormatDescriptor) -> list[int]:
    """Map descriptor dimension order onto header column positions."""
    canon = [d.casefold() for d in header_dims]
    if len(set(canon)) != len(canon) or sorted(canon) != sorted(fmt.canonical_dimensions):
        raise HeaderMismatchError(
            f"header dimensions {list(header_dims)!r} do not match format "
            f"{fmt.name!r} dimensions {list(fmt.dimensions)!r}",
            line=1,
        )
    return [canon.index(d) for d in fmt.canonical_dimensions]


def _parse_rating(
    cell: str, fmt: FormatDescriptor, dimension: str, line: int, clamp: bool
) -> float:
    if not _NUMBER_RE.match(cell):
        raise NonNumericRatingError(
            f"rating {cell!r} for {dimension!r} is not a decimal number", line=line
        )
    value = float(cell)
    if not math.isfinite(value):
        raise NonNumericRatingError(
            f"rating {cell!r} for {dimension!r} overflows", line=line
        )
    if value < fmt.scale_min or value > fmt.scale_max:
        if clamp:
            return min(max(value, fmt.scale_min), fmt.scale_max)
        raise OutOfRangeError(
            f"rating {cell} for {dimension!r} outside "
            f"[{fmt.scale_min}, {fmt.scale_max}]",
            line=line,
        )
    return value


def _parse_rows(
    lines: list[str],
    fmt: FormatDescriptor,
    positions: list[int],
    options: ParseOptions,
) -> tuple[list[str], list[list[float]]]:
    n_cols = 1 + len(positions)
    words: list[str] = []
    rows: list[list[float]] = []
    index_of: dict[str, int] = {}
    extra: dict[int, list[list[float]]] = {}
    for line_no, line in enumerate(lines, start=2):
        cells = line.split("\t")
        if len(cells) != n_cols:
            raise MalformedRowError(
                f"expected {n_cols} tab-separated columns, got {len(cells)}",
                line=line_no,
            )
        if any("\r" in cell for cell in cells):
            raise MalformedRowError(
                "carriage return in row; files must use \\n line endings",
                line=line_no,
            )
        word = cells[0]
        if not word:
            raise MalformedRowError("empty word", line=line_no)
        values = [
            _parse_rating(cells[1 + pos], fmt, fmt.dimensions[j], line_no, options.clamp)
            for j, pos in enumerate(positions)
        ]
        if word in index_of:
            if not options.dedup_mean:
                raise DuplicateWordError(f"duplicate word {word!r}", line=line_no)
            extra.setdefault(index_of[word], []).append(values)
            continue
        index_of[word] = len(words)
        words.append(word)
        rows.append(values)
    for i, more in extra.items():
        stacked = np.array([rows[i]] + more, dtype=float)
        rows[i] = stacked.mean(axis=0).tolist()
    return words, rows


def parse_lexicon(
    stream: BinaryIO | bytes,
    fmt: FormatDescriptor,
    options: ParseOptions = ParseOptions(),
    *,
    language_tag: str = "",
    provenance: str = "",
) -> Lexicon:
    """Parse a UTF-8 TSV stream into a Lexicon.

    The header columns are re-mapped onto the descriptor's dimension order;
    entry order is file order.  Errors carry the offending line number.
    """
    lines = _decode_lines(_read_stream(stream))
    if not lines:
        raise HeaderMismatchError("empty file: missing header line", line=1)
    header_dims = _split_header(lines[0])
    positions = _header_positions(header_dims, fmt)
    words, rows = _parse_rows(lines[1:], fmt, positions, options)
    return Lexicon(fmt, words, rows, language_tag=language_tag, provenance=provenance)


def write_lexicon(lex: Lexicon, precision: int = 6) -> bytes:
    """Serialize to the canonical TSV layout with fixed-point ratings."""
    if precision < 1:
        raise DataError("precision must be a positive integer")
    out = ["word\t" + "\t".join(lex.format.dimensions)]
    for word, row in lex.entries():
        out.append(word + "\t" + "\t".join(f"{v:.{precision}f}" for v in row))
    return ("\n".join(out) + "\n").encode("utf-8")


def rescale(lex: Lexicon, target: FormatDescriptor) -> Lexicon:
    """Affinely map ratings onto the target bounds, dimension names unchanged.

    Scale endpoints map to endpoints exactly; entry order is preserved.
    """
    src = lex.format
    if src.canonical_dimensions != target.canonical_dimensions:
        raise FormatMismatchError(
            f"cannot rescale {list(src.dimensions)!r} onto "
            f"{list(target.dimensions)!r}: dimension names differ"
        )
    ratio = (target.scale_max - target.scale_min) / (src.scale_max - src.scale_min)
    x = lex.ratings
    y = target.scale_min + (x - src.scale_min) * ratio
    # snap endpoints, then clamp the interior against last-ulp spill
    y = np.where(x == src.scale_min, target.scale_min, y)
    y = np.where(x == src.scale_max, target.scale_max, y)
    np.clip(y, target.scale_min, target.scale_max, out=y)
    return Lexicon(
        target, lex.words, y, language_tag=lex.language_tag, provenance=lex.provenance
    )


def _key_index(
    words: Sequence[str], policy: MatchPolicy, strict: bool, role: str
) -> dict[str, int]:
    index: dict[str, int] = {}
    for i, word in enumerate(words):
        key = policy.key(word)
        if key in index:
            if strict:
                raise NormalizationCollisionError(
                    f"{policy.value} matching maps {words[index[key]]!r} and "
                    f"{word!r} of {role} onto the same key"
                )
            continue  # permissive: first occurrence wins
        index[key] = i
    return index


def align_words(
    a_words: Sequence[str],
    b_words: Sequence[str],
    policy: MatchPolicy = MatchPolicy.EXACT,
    *,
    strict: bool = True,
) -> tuple[list[int], list[int]]:
    """Row indices of the common vocabulary, ordered by first occurrence in a."""
    index_b = _key_index(b_words, policy, strict, "the second lexicon")
    seen_a: set[str] = set()
    rows_a: list[int] = []
    rows_b: list[int] = []
    for i, word in enumerate(a_words):
        key = policy.key(word)
        if key in seen_a:
            if strict:
                raise NormalizationCollisionError(
                    f"{policy.value} matching maps two words of the first "
                    f"lexicon onto key {key!r}"
                )
            continue
        seen_a.add(key)
        j = index_b.get(key)
        if j is not None:
            rows_a.append(i)
            rows_b.append(j)
    return rows_a, rows_b


class MergedLexicon:
    """Words annotated in two disjoint formats at once: the gold substrate.

    Row i of both rating matrices describes ``words[i]``.  Words need not be
    unique (training bags concatenate several languages).
    """

    __slots__ = ("words", "ratings_a", "ratings_b", "formats", "language_tag", "provenance")

    def __init__(
        self,
        words: Iterable[str],
        ratings_a,
        ratings_b,
        formats: tuple[FormatDescriptor, FormatDescriptor],
        language_tag: str = "",
        provenance: str = "",
    ):
        fa, fb = formats
        if not set(fa.canonical_dimensions).isdisjoint(fb.canonical_dimensions):
            raise FormatMismatchError(
                f"formats {fa.name!r} and {fb.name!r} share dimension names"
            )
        words = tuple(words)
        sides = []
        for fmt, ratings in ((fa, ratings_a), (fb, ratings_b)):
            matrix = np.array(ratings, dtype=float)
            if matrix.size == 0:
                matrix = matrix.reshape(0, len(fmt.dimensions))
            if matrix.shape != (len(words), len(fmt.dimensions)):
                raise DataError(
                    f"{fmt.name} slice shape {matrix.shape} does not match "
                    f"{len(words)} words x {len(fmt.dimensions)} dimensions"
                )
            if matrix.size and not np.all(np.isfinite(matrix)):
                raise DataError(f"{fmt.name} slice contains non-finite values")
            if matrix.size and (
                matrix.min() < fmt.scale_min or matrix.max() > fmt.scale_max
            ):
                raise DataError(
                    f"{fmt.name} slice falls outside "
                    f"[{fmt.scale_min}, {fmt.scale_max}]"
                )
            matrix.setflags(write=False)
            sides.append(matrix)
        for word in words:
            _check_word(word)
        self.words = words
        self.ratings_a = sides[0]
        self.ratings_b = sides[1]
        self.formats = (fa, fb)
        self.language_tag = language_tag
        self.provenance = provenance

    def __len__(self) -> int:
        return len(self.words)

    def side(self, index: int) -> tuple[FormatDescriptor, np.ndarray]:
        return (self.formats[index], (self.ratings_a, self.ratings_b)[index])

    def side_of(self, format_name: str) -> int:
        name = format_name.casefold()
        for i, fmt in enumerate(self.formats):
            if fmt.name.casefold() == name:
                return i
        raise FormatMismatchError(
            f"no side named {format_name!r} among "
            f"{[f.name for f in self.formats]!r}"
        )

    def take(self, indices: Sequence[int], provenance: str = "") -> "MergedLexicon":
        idx = list(indices)
        return MergedLexicon(
            [self.words[i] for i in idx],
            self.ratings_a[idx],
            self.ratings_b[idx],
            self.formats,
            language_tag=self.language_tag,
            provenance=provenance or self.provenance,
        )

    def canonical_bytes(self) -> bytes:
        """Full-precision serialization used for checksumming."""
        fa, fb = self.formats
        head = "word\t" + "\t".join(fa.dimensions + fb.dimensions)
        out = [f"# formats: {fa.name}[{fa.scale_min},{fa.scale_max}] "
               f"{fb.name}[{fb.scale_min},{fb.scale_max}]", head]
        for i, word in enumerate(self.words):
            cells = [repr(v) for v in self.ratings_a[i]] + [
                repr(v) for v in self.ratings_b[i]
            ]
            out.append(word + "\t" + "\t".join(cells))
        return ("\n".join(out) + "\n").encode("utf-8")

    def sha256(self) -> str:
        return sha256_hex(self.canonical_bytes())


def intersect(
    a: Lexicon,
    b: Lexicon,
    policy: MatchPolicy = MatchPolicy.EXACT,
    *,
    strict: bool = True,
) -> MergedLexicon:
    """Merge two complementary lexicons over their common vocabulary.

    Output rows follow first occurrence in ``a``; the surface form of ``a``
    is kept.  Overlap count is ``len(result)``.
    """
    rows_a, rows_b = align_words(a.words, b.words, policy, strict=strict)
    provenance = (
        f"intersection of [{a.provenance or 'lexicon a'}] and "
        f"[{b.provenance or 'lexicon b'}], {len(rows_a)} overlapping words"
    )
    return MergedLexicon(
        [a.words[i] for i in rows_a],
        a.ratings[rows_a] if rows_a else a.ratings[:0],
        b.ratings[rows_b] if rows_b else b.ratings[:0],
        (a.format, b.format),
        language_tag=a.language_tag or b.language_tag,
        provenance=provenance,
    )


def concat_merged(
    parts: Sequence[MergedLexicon], provenance: str = ""
) -> MergedLexicon:
    """Stack several merged lexicons sharing the same format pair."""
    if not parts:
        raise DataError("nothing to concatenate")
    first = parts[0]
    blocks_a, blocks_b, words = [], [], []
    for part in parts:
        order = [part.side_of(fmt.name) for fmt in first.formats]
        if sorted(order) != [0, 1]:
            raise FormatMismatchError("merged lexicons carry different format pairs")
        for got, want in zip(order, first.formats):
            fmt = part.formats[got]
            if (
                fmt.canonical_dimensions != want.canonical_dimensions
                or (fmt.scale_min, fmt.scale_max) != (want.scale_min, want.scale_max)
            ):
                raise FormatMismatchError(
                    f"format {fmt.name!r} differs between merged lexicons"
                )
        words.extend(part.words)
        blocks_a.append(part.side(order[0])[1])
        blocks_b.append(part.side(order[1])[1])
    return MergedLexicon(
        words,
        np.vstack(blocks_a),
        np.vstack(blocks_b),
        first.formats,
        provenance=provenance or " + ".join(p.provenance or "?" for p in parts),
    )


def write_merged(merged: MergedLexicon, precision: int = 6) -> bytes:
    """Single-header TSV: word, then format-A columns, then format-B columns."""
    if precision < 1:
        raise DataError("precision must be a positive integer")
    fa, fb = merged.formats
    out = ["word\t" + "\t".join(fa.dimensions + fb.dimensions)]
    for i, word in enumerate(merged.words):
        cells = [f"{v:.{precision}f}" for v in merged.ratings_a[i]] + [
            f"{v:.{precision}f}" for v in merged.ratings_b[i]
        ]
        out.append(word + "\t" + "\t".join(cells))
    return ("\n".join(out) + "\n").encode("utf-8")


def detect_format(dims: Sequence[str]) -> FormatDescriptor | None:
    """Match header dimension names against the canonical presets."""
    canon = sorted(d.casefold() for d in dims)
    for preset in PRESETS.values():
        if sorted(preset.canonical_dimensions) == canon:
            return preset
    return None


def detect_merged_formats(
    dims: Sequence[str],
) -> tuple[FormatDescriptor, FormatDescriptor] | None:
    """Split merged header columns into two recognized preset formats."""
    for cut in range(1, len(dims)):
        first = detect_format(dims[:cut])
        second = detect_format(dims[cut:])
        if (
            first is not None
            and second is not None
            and set(first.canonical_dimensions).isdisjoint(second.canonical_dimensions)
        ):
            return first, second
    return None


def parse_merged(
    stream: BinaryIO | bytes,
    formats: tuple[FormatDescriptor, FormatDescriptor] | None = None,
    options: ParseOptions = ParseOptions(),
    *,
    provenance: str = "",
) -> MergedLexicon:
    """Parse a merged gold TSV; formats are detected from the header if omitted."""
    lines = _decode_lines(_read_stream(stream))
    if not lines:
        raise HeaderMismatchError("empty file: missing header line", line=1)
    header_dims = _split_header(lines[0])
    if formats is None:
        formats = detect_merged_formats(header_dims)
        if formats is None:
            raise HeaderMismatchError(
                f"cannot split header dimensions {header_dims!r} into two known "
                f"formats; pass the format pair explicitly",
                line=1,
            )
    fa, fb = formats
    width_a = len(fa.dimensions)
    if len(header_dims) != width_a + len(fb.dimensions):
        raise HeaderMismatchError(
            f"expected {width_a + len(fb.dimensions)} dimension columns for "
            f"{fa.name}+{fb.name}, found {len(header_dims)}",
            line=1,
        )
    pos_a = _header_positions(header_dims[:width_a], fa)
    pos_b = _header_positions(header_dims[width_a:], fb)
    n_cols = 1 + len(header_dims)
    words: list[str] = []
    rows_a: list[list[float]] = []
    rows_b: list[list[float]] = []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != n_cols:
            raise MalformedRowError(
                f"expected {n_cols} tab-separated columns, got {len(cells)}",
                line=line_no,
            )
        if any("\r" in cell for cell in cells):
            raise MalformedRowError(
                "carriage return in row; files must use \\n line endings",
                line=line_no,
            )
        word = cells[0]
        if not word:
            raise MalformedRowError("empty word", line=line_no)
        words.append(word)
        rows_a.append(
            [
                _parse_rating(cells[1 + p], fa, fa.dimensions[j], line_no, options.clamp)
                for j, p in enumerate(pos_a)
            ]
        )
        rows_b.append(
            [
                _parse_rating(
                    cells[1 + width_a + p], fb, fb.dimensions[j], line_no, options.clamp
                )
                for j, p in enumerate(pos_b)
            ]
        )
    return MergedLexicon(words, rows_a, rows_b, formats, provenance=provenance)


def peek_header_dims(data: bytes) -> list[str]:
    """Dimension names from the header of a serialized lexicon or gold file."""
    lines = _decode_lines(data)
    if not lines:
        raise HeaderMismatchError("empty file: missing header line", line=1)
    return _split_header(lines[0])


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
