"""Evaluation protocols: monolingual cross-validation, pairwise crosslingual
transfer, and bagged crosslingual training with best-bag selection.

All protocols are deterministic given (inputs, config): fold assignment uses
a seeded Fisher-Yates shuffle cut into contiguous blocks, work units may run
concurrently but are merged in a canonical order, and reports serialize to
stable bytes.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import constants
from .errors import DataError, DegenerateStatisticsError, FormatMismatchError
from .knn import fit, predict
from .lexicon import MergedLexicon, concat_merged
from .reporting import (
    ALPHA,
    BagReport,
    DimensionScore,
    EvalReport,
    InputRecord,
    Verdict,
)
from .rng import seeded_permutation
from .stats import pearson, t_test_one_sample_one_tailed, z_test_correlations_one_tailed

#: Folds smaller than this make per-fold correlations high-variance.
SMALL_FOLD_ROWS = 50


@dataclass(frozen=True)
class EvalConfig:
    k: int = 20
    folds: int = 10
    seed: int = 42
    direction: str = "both"
    jobs: int = 1
    floors: "dict[str, float] | None" = None  # None -> constants.DEFAULT_ISR_FLOORS

    def __post_init__(self):
        if self.k < 1:
            raise DataError("k must be at least 1")
        if self.folds < 2:
            raise DataError("folds must be at least 2")
        if not 0 <= self.seed < 2**64:
            raise DataError("seed must fit an unsigned 64-bit integer")
        if self.jobs < 1:
            raise DataError("jobs must be at least 1")

    def resolved_floors(self) -> dict[str, float]:
        floors = constants.DEFAULT_ISR_FLOORS if self.floors is None else self.floors
        return dict(floors)

    def echo(self) -> dict:
        return {
            "k": self.k,
            "folds": self.folds,
            "seed": self.seed,
            "direction": self.direction,
            "jobs": self.jobs,
            "floors": self.resolved_floors(),
        }


def fold_partition(n: int, folds: int, seed: int) -> list[list[int]]:
    """Seeded permutation of range(n) cut into `folds` contiguous blocks.

    Blocks are disjoint, cover every row, and differ in size by at most 1.
    """
    if folds < 2:
        raise DataError("folds must be at least 2")
    if n < folds:
        raise DataError(f"{n} rows cannot fill {folds} folds")
    perm = seeded_permutation(n, seed)
    base, extra = divmod(n, folds)
    blocks: list[list[int]] = []
    start = 0
    for i in range(folds):
        size = base + (1 if i < extra else 0)
        blocks.append(perm[start : start + size])
        start += size
    return blocks


def _directions(data: MergedLexicon, direction: str) -> list[tuple[int, int]]:
    a, b = data.formats
    if direction == "both":
        return [(0, 1), (1, 0)]
    label = direction.strip().casefold()
    if label == f"{a.name.casefold()}2{b.name.casefold()}":
        return [(0, 1)]
    if label == f"{b.name.casefold()}2{a.name.casefold()}":
        return [(1, 0)]
    raise FormatMismatchError(
        f"direction {direction!r} does not name the formats {a.name!r}/{b.name!r}"
    )


def _direction_label(data: MergedLexicon, src: int, tgt: int) -> str:
    return f"{data.formats[src].name}2{data.formats[tgt].name}"


def _run_parallel(work, units: Sequence, jobs: int) -> list:
    """Apply `work` to the units, optionally threaded; results keep unit order."""
    if jobs <= 1 or len(units) <= 1:
        return [work(unit) for unit in units]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(work, units))


def _safe_pearson(x, y) -> tuple[float | None, str | None]:
    try:
        return pearson(x, y).r, None
    except DegenerateStatisticsError as exc:
        return None, str(exc)


def _group_averages(
    scores: list[DimensionScore], pooled: bool
) -> dict[str, dict[str, float | None]]:
    averages: dict[str, dict[str, float | None]] = {}
    order: list[str] = []
    groups: dict[str, list[DimensionScore]] = {}
    for entry in scores:
        if entry.format_name not in groups:
            groups[entry.format_name] = []
            order.append(entry.format_name)
        groups[entry.format_name].append(entry)
    for name in order:
        entries = groups[name]
        values = [e.r for e in entries]
        mean = None if any(v is None for v in values) else sum(values) / len(values)
        if pooled:
            pooled_values = [e.r_pooled for e in entries]
            pooled_mean = (
                None
                if any(v is None for v in pooled_values)
                else sum(pooled_values) / len(pooled_values)
            )
            averages[name] = {"r": mean, "r_pooled": pooled_mean}
        else:
            averages[name] = {"r": mean}
    return averages


def _gold_input(name: str, gold: MergedLexicon) -> InputRecord:
    return InputRecord(
        name=name,
        provenance=gold.provenance or name,
        sha256=gold.sha256(),
        rows=len(gold),
    )


def eval_mono(gold: MergedLexicon, cfg: EvalConfig, label: str = "gold") -> EvalReport:
    """k-fold cross-validated mapping quality on one gold lexicon.

    Per target dimension two aggregations are reported: the mean of the
    per-fold correlations (which also feeds the t test against the
    reliability floor) and the pooled correlation over all concatenated
    held-out predictions.
    """
    n = len(gold)
    if n < cfg.folds:
        raise DataError(f"{n} gold rows cannot fill {cfg.folds} folds")
    floors = cfg.resolved_floors()
    blocks = fold_partition(n, cfg.folds, cfg.seed)
    directions = _directions(gold, cfg.direction)

    all_rows = set(range(n))
    units = [(d, f) for d in range(len(directions)) for f in range(cfg.folds)]

    def work(unit: tuple[int, int]) -> np.ndarray:
        d, f = unit
        src, tgt = directions[d]
        test_rows = blocks[f]
        train_rows = sorted(all_rows.difference(test_rows))
        model = fit(
            gold.take(train_rows, provenance=f"{label} fold {f} complement"),
            _direction_label(gold, src, tgt),
            cfg.k,
        )
        features = gold.side(src)[1]
        return np.vstack([predict(model, features[row]) for row in test_rows])

    fold_preds = _run_parallel(work, units, cfg.jobs)

    scores_by_side: dict[int, list[DimensionScore]] = {}
    verdicts: list[Verdict] = []
    warnings: list[str] = []
    for d, (src, tgt) in enumerate(directions):
        target_format, gold_matrix = gold.side(tgt)
        preds = fold_preds[d * cfg.folds : (d + 1) * cfg.folds]
        side_scores: list[DimensionScore] = []
        for t, dimension in enumerate(target_format.canonical_dimensions):
            fold_r: list[float | None] = []
            notes: list[str] = []
            for f in range(cfg.folds):
                r, note = _safe_pearson(preds[f][:, t], gold_matrix[blocks[f], t])
                fold_r.append(r)
                if note:
                    notes.append(f"fold {f}: {note}")
            pooled_pred = np.concatenate([preds[f][:, t] for f in range(cfg.folds)])
            pooled_gold = np.concatenate(
                [gold_matrix[blocks[f], t] for f in range(cfg.folds)]
            )
            r_pooled, pooled_note = _safe_pearson(pooled_pred, pooled_gold)
            if pooled_note:
                notes.append(f"pooled: {pooled_note}")
            complete = [r for r in fold_r if r is not None]
            r_mean = sum(complete) / len(complete) if len(complete) == cfg.folds else None
            side_scores.append(
                DimensionScore(
                    dimension=dimension,
                    format_name=target_format.name,
                    r=r_mean,
                    r_pooled=r_pooled,
                    fold_r=fold_r,
                    note="; ".join(notes) or None,
                )
            )
            floor = floors.get(dimension)
            if floor is not None:
                if r_mean is None:
                    warnings.append(
                        f"t test vs. floor skipped for {dimension}: degenerate folds"
                    )
                    continue
                try:
                    statistic, p = t_test_one_sample_one_tailed(fold_r, floor)
                except DegenerateStatisticsError as exc:
                    warnings.append(f"t test vs. floor skipped for {dimension}: {exc}")
                    continue
                verdicts.append(
                    Verdict(
                        test="t",
                        dimension=dimension,
                        floor=floor,
                        statistic=statistic,
                        p=p,
                        significant=p < ALPHA,
                        df=cfg.folds - 1,
                    )
                )
        scores_by_side[tgt] = side_scores

    # present dimensions in the merged lexicon's format order
    scores = [s for side in sorted(scores_by_side) for s in scores_by_side[side]]
    smallest = min(len(block) for block in blocks)
    if smallest < SMALL_FOLD_ROWS:
        warnings.append(
            f"folds as small as {smallest} rows (< {SMALL_FOLD_ROWS}): "
            f"per-fold correlations are high-variance"
        )
    return EvalReport(
        experiment="monolingual",
        label=label,
        config=cfg.echo(),
        inputs=[_gold_input("gold", gold)],
        scores=scores,
        averages=_group_averages(scores, pooled=True),
        verdicts=verdicts,
        warnings=warnings,
    )


def _align_test_side(train: MergedLexicon, test: MergedLexicon, side: int) -> int:
    fmt = train.formats[side]
    test_side = test.side_of(fmt.name)
    got = test.formats[test_side]
    if got.canonical_dimensions != fmt.canonical_dimensions or (
        got.scale_min,
        got.scale_max,
    ) != (fmt.scale_min, fmt.scale_max):
        raise FormatMismatchError(
            f"format {fmt.name!r} differs between training and test gold sets"
        )
    return test_side


def eval_cross_pair(
    train: MergedLexicon,
    test: MergedLexicon,
    cfg: EvalConfig,
    label: str = "cross",
) -> EvalReport:
    """Fixed train/test transfer: fit on all of train, score all of test.

    No cross-validation; significance per floored dimension uses the
    one-tailed z test on atanh-transformed correlations with n = len(test)
    on both sides.
    """
    if len(train) == 0 or len(test) == 0:
        raise DataError("training and test gold sets must be non-empty")
    floors = cfg.resolved_floors()
    directions = _directions(train, cfg.direction)
    verdicts: list[Verdict] = []
    warnings: list[str] = []
    scores_by_side: dict[int, list[DimensionScore]] = {}
    for src, tgt in directions:
        model = fit(train, _direction_label(train, src, tgt), cfg.k)
        test_src = _align_test_side(train, test, src)
        test_tgt = _align_test_side(train, test, tgt)
        src_fmt = train.formats[src]
        features = test.side(test_src)[1][
            :, [test.formats[test_src].index_of(d) for d in src_fmt.dimensions]
        ]
        preds = np.vstack([predict(model, features[i]) for i in range(len(test))])
        target_format, gold_matrix = train.formats[tgt], test.side(test_tgt)[1]
        side_scores: list[DimensionScore] = []
        for t, dimension in enumerate(target_format.canonical_dimensions):
            gold_col = gold_matrix[:, test.formats[test_tgt].index_of(dimension)]
            r, note = _safe_pearson(preds[:, t], gold_col)
            side_scores.append(
                DimensionScore(
                    dimension=dimension,
                    format_name=target_format.name,
                    r=r,
                    note=note,
                )
            )
            floor = floors.get(dimension)
            if floor is not None:
                if r is None:
                    warnings.append(
                        f"z test vs. floor skipped for {dimension}: {note}"
                    )
                    continue
                try:
                    statistic, p = z_test_correlations_one_tailed(
                        r, len(test), floor, len(test)
                    )
                except DataError as exc:
                    warnings.append(f"z test vs. floor skipped for {dimension}: {exc}")
                    continue
                verdicts.append(
                    Verdict(
                        test="z",
                        dimension=dimension,
                        floor=floor,
                        statistic=statistic,
                        p=p,
                        significant=p < ALPHA,
                        n=len(test),
                    )
                )
        scores_by_side[tgt] = side_scores
    scores = [s for side in sorted(scores_by_side) for s in scores_by_side[side]]
    return EvalReport(
        experiment="crosslingual-pairwise",
        label=label,
        config=cfg.echo(),
        inputs=[_gold_input("train", train), _gold_input("test", test)],
        scores=scores,
        averages=_group_averages(scores, pooled=False),
        verdicts=verdicts,
        warnings=warnings,
    )


def eval_cross_bagged(
    gold_sets: Mapping[str, MergedLexicon],
    targets: Sequence[str],
    bag_sizes: Iterable[int],
    cfg: EvalConfig,
) -> BagReport:
    """Evaluate every bag of gold sets against every target language.

    For each bag and target, training data is the concatenation of the bag
    members minus the target's own gold set; the best bag maximizes the mean
    r over all dimensions and all targets (ties: smaller bag, then name order).
    """
    names = list(gold_sets)
    if len(names) < 2:
        raise DataError("bagged evaluation needs at least two gold sets")
    for target in targets:
        if target not in gold_sets:
            raise DataError(f"target {target!r} has no gold set")
    sizes = sorted(set(bag_sizes))
    if not sizes:
        raise DataError("no bag sizes requested")
    if sizes[0] < 2 or sizes[-1] > len(names):
        raise DataError(
            f"bag sizes must lie within [2, {len(names)}], got {sizes}"
        )
    bags: list[tuple[str, ...]] = [
        combo for size in sizes for combo in itertools.combinations(names, size)
    ]
    cell_cfg = EvalConfig(
        k=cfg.k,
        folds=cfg.folds,
        seed=cfg.seed,
        direction=cfg.direction,
        jobs=1,
        floors=cfg.floors,
    )
    units: list[tuple[tuple[str, ...], str]] = [
        (bag, target) for bag in bags for target in targets
    ]

    def work(unit: tuple[tuple[str, ...], str]) -> EvalReport:
        bag, target = unit
        members = [name for name in bag if name != target]
        if not members:
            raise DataError(
                f"bag {'+'.join(bag)} is empty after excluding target {target!r}"
            )
        train = concat_merged(
            [gold_sets[name] for name in members],
            provenance="+".join(members),
        )
        return eval_cross_pair(
            train, gold_sets[target], cell_cfg, label=f"{'+'.join(members)}2{target}"
        )

    reports = _run_parallel(work, units, cfg.jobs)
    cells: dict[str, dict[str, EvalReport]] = {}
    for (bag, target), report in zip(units, reports):
        cells.setdefault("+".join(bag), {})[target] = report

    objectives: list[tuple[tuple[str, ...], float | None]] = []
    warnings: list[str] = []
    for bag in bags:
        bag_label = "+".join(bag)
        values: list[float] = []
        incomplete = False
        for target in targets:
            for entry in cells[bag_label][target].scores:
                if entry.r is None:
                    incomplete = True
                else:
                    values.append(entry.r)
        if incomplete or not values:
            objectives.append((bag, None))
            warnings.append(f"bag {bag_label}: degenerate scores, excluded from ranking")
        else:
            objectives.append((bag, sum(values) / len(values)))

    def rank_key(item: tuple[tuple[str, ...], float | None]):
        bag, objective = item
        missing = objective is None
        return (missing, -(objective or 0.0), len(bag), bag)

    ranked = sorted(objectives, key=rank_key)
    if ranked[0][1] is None:
        raise DegenerateStatisticsError("every bag produced degenerate scores")
    best_bag = ranked[0][0]
    return BagReport(
        experiment="crosslingual-bagged",
        config=cfg.echo(),
        inputs=[_gold_input(name, gold_sets[name]) for name in names],
        ranking=[("+".join(bag), objective) for bag, objective in ranked],
        best_bag=best_bag,
        cells=cells,
        warnings=warnings,
    )
