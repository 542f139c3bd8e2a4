from __future__ import annotations

import json

import numpy as np
import pytest

from emomap.errors import DataError, FormatMismatchError
from emomap.evaluate import (
    EvalConfig,
    SMALL_FOLD_ROWS,
    eval_cross_bagged,
    eval_cross_pair,
    eval_mono,
    fold_partition,
)
from emomap.lexicon import BE5, VAD, MergedLexicon
from emomap.rng import SplitMix64
from emomap.synthetic import replicated_affine_gold, synthetic_gold


def make_merged(n: int, seed: int = 1) -> MergedLexicon:
    rng = SplitMix64(seed)
    words = [f"w{i}" for i in range(n)]
    vad = [[rng.uniform(1, 9) for _ in range(3)] for _ in range(n)]
    be5 = [[rng.uniform(1, 5) for _ in range(5)] for _ in range(n)]
    return MergedLexicon(words, vad, be5, (VAD, BE5), provenance=f"random n={n}")


# ------------------------------------------------------------- fold partition


def test_fold_partition_properties():
    rng = SplitMix64(2)
    for _ in range(50):
        n = 10 + rng.below(500)
        folds = 2 + rng.below(min(10, n - 1))
        blocks = fold_partition(n, folds, seed=rng.below(2**32))
        flat = [i for block in blocks for i in block]
        assert sorted(flat) == list(range(n))          # disjoint cover
        sizes = {len(block) for block in blocks}
        assert max(sizes) - min(sizes) <= 1            # balanced
        assert len(blocks) == folds


def test_fold_partition_deterministic():
    assert fold_partition(100, 10, 42) == fold_partition(100, 10, 42)
    assert fold_partition(100, 10, 42) != fold_partition(100, 10, 43)


def test_fold_partition_validation():
    with pytest.raises(DataError):
        fold_partition(5, 10, 1)
    with pytest.raises(DataError):
        fold_partition(5, 1, 1)


# ------------------------------------------------------------------ eval_mono


def test_eval_mono_report_shape():
    gold = make_merged(120)
    cfg = EvalConfig(k=5, folds=10, seed=42)
    report = eval_mono(gold, cfg, label="demo")
    dims = [s.dimension for s in report.scores]
    assert dims == [
        "valence", "arousal", "dominance", "joy", "anger", "sadness", "fear", "disgust",
    ]
    for score in report.scores:
        assert len(score.fold_r) == cfg.folds
        assert score.r is not None
        assert score.r_pooled is not None
    # averages recompute from constituents within 1e-12
    for fmt_name, dims_of in (("vad", dims[:3]), ("be5", dims[3:])):
        mean = sum(report.score(d).r for d in dims_of) / len(dims_of)
        assert abs(report.averages[fmt_name]["r"] - mean) <= 1e-12
        pooled = sum(report.score(d).r_pooled for d in dims_of) / len(dims_of)
        assert abs(report.averages[fmt_name]["r_pooled"] - pooled) <= 1e-12
    # VAD dims get t-test verdicts against the shipped floors
    assert {v.dimension for v in report.verdicts} == {"valence", "arousal", "dominance"}
    for verdict in report.verdicts:
        assert verdict.df == cfg.folds - 1
        assert 0.0 < verdict.p < 1.0
    assert any("high-variance" in w for w in report.warnings)  # 12-row folds


def test_eval_mono_direction_filter():
    gold = make_merged(60)
    report = eval_mono(gold, EvalConfig(k=3, folds=5, direction="vad2be5"))
    assert [s.format_name for s in report.scores] == ["be5"] * 5
    assert report.verdicts == []  # no VAD targets, no floors to test
    report = eval_mono(gold, EvalConfig(k=3, folds=5, direction="be52vad"))
    assert [s.format_name for s in report.scores] == ["vad"] * 3


def test_eval_mono_determinism_bytes():
    gold = make_merged(80, seed=9)
    cfg = EvalConfig(k=4, folds=8, seed=7)
    first = eval_mono(gold, cfg, label="x")
    second = eval_mono(gold, cfg, label="x")
    assert first.to_json_bytes() == second.to_json_bytes()
    assert first.to_text() == second.to_text()
    parallel = eval_mono(gold, EvalConfig(k=4, folds=8, seed=7, jobs=8), label="x")
    stripped = json.loads(parallel.to_json_bytes())
    baseline = json.loads(first.to_json_bytes())
    stripped["config"]["jobs"] = baseline["config"]["jobs"]
    assert stripped == baseline


def test_eval_mono_affine_identity():
    gold = replicated_affine_gold(unique=30, copies=12, seed=3)
    report = eval_mono(gold, EvalConfig(k=5, folds=6, seed=42))
    for score in report.scores:
        assert score.r >= 1.0 - 1e-9
        assert score.r_pooled >= 1.0 - 1e-9


def test_eval_mono_too_few_rows():
    with pytest.raises(DataError):
        eval_mono(make_merged(5), EvalConfig(folds=10))


def test_eval_mono_degenerate_gold_column_reported_not_fatal():
    rng = SplitMix64(4)
    n = 40
    vad = [[rng.uniform(1, 9) for _ in range(3)] for _ in range(n)]
    be5 = [[3.0] + [rng.uniform(1, 5) for _ in range(4)] for _ in range(n)]
    gold = MergedLexicon([f"w{i}" for i in range(n)], vad, be5, (VAD, BE5))
    report = eval_mono(gold, EvalConfig(k=3, folds=4, direction="vad2be5"))
    joy = report.score("joy")
    assert joy.r is None and joy.note is not None
    assert report.has_degenerate_scores()
    others = [s for s in report.scores if s.dimension != "joy"]
    assert all(s.r is not None for s in others)


# ----------------------------------------------------------------- eval_cross


def test_eval_cross_pair_basic():
    train = make_merged(100, seed=1)
    test = make_merged(50, seed=2)
    report = eval_cross_pair(train, test, EvalConfig(k=10), label="a2b")
    assert len(report.scores) == 8
    assert {v.test for v in report.verdicts} == {"z"}
    for verdict in report.verdicts:
        assert verdict.n == 50
    assert report.averages["vad"].keys() == {"r"}


def test_eval_cross_pair_degenerate_training_row():
    train = make_merged(1, seed=3)
    test = make_merged(30, seed=4)
    report = eval_cross_pair(train, test, EvalConfig(k=20))
    assert all(s.r is None and s.note for s in report.scores)
    assert report.has_degenerate_scores()          # run completes regardless
    assert report.verdicts == []


def test_eval_cross_pair_self_at_least_mono_pooled():
    gold = synthetic_gold(300, seed=11)
    cfg = EvalConfig(k=10, folds=10, seed=42)
    mono = eval_mono(gold, cfg)
    self_pair = eval_cross_pair(gold, gold, cfg)
    for score in self_pair.scores:
        assert score.r >= mono.score(score.dimension).r_pooled


def test_eval_cross_pair_side_order_independent():
    train = make_merged(60, seed=5)
    swapped = MergedLexicon(
        train.words, train.ratings_b, train.ratings_a, (BE5, VAD)
    )
    test = make_merged(40, seed=6)
    a = eval_cross_pair(train, test, EvalConfig(k=5))
    b = eval_cross_pair(swapped, test, EvalConfig(k=5))
    assert {s.dimension: s.r for s in a.scores} == {s.dimension: s.r for s in b.scores}


def test_eval_cross_pair_empty_errors():
    empty = MergedLexicon([], [], [], (VAD, BE5))
    with pytest.raises(DataError):
        eval_cross_pair(empty, make_merged(10), EvalConfig())
    with pytest.raises(DataError):
        eval_cross_pair(make_merged(10), empty, EvalConfig())


# ------------------------------------------------------------------- eval_bag


def test_eval_bag_two_sets_reduces_to_pair():
    sets = {"en": make_merged(80, seed=21), "es": make_merged(70, seed=22)}
    cfg = EvalConfig(k=5)
    bag_report = eval_cross_bagged(sets, ["en", "es"], [2], cfg)
    pair = eval_cross_pair(sets["es"], sets["en"], cfg)
    cell = bag_report.cells["en+es"]["en"]
    assert {s.dimension: s.r for s in cell.scores} == {
        s.dimension: s.r for s in pair.scores
    }
    assert bag_report.best_bag == ("en", "es")


def test_eval_bag_objective_and_determinism():
    sets = {
        "l1": synthetic_gold(120, seed=31),
        "l2": synthetic_gold(120, seed=32),
        "l3": synthetic_gold(120, seed=33),
    }
    cfg = EvalConfig(k=10)
    report = eval_cross_bagged(sets, list(sets), [2, 3], cfg)
    # same generator -> every bag within noise of every other
    objectives = [value for _, value in report.ranking]
    assert max(objectives) - min(objectives) < 0.02
    again = eval_cross_bagged(sets, list(sets), [2, 3], cfg)
    assert report.to_json_bytes() == again.to_json_bytes()
    parallel = eval_cross_bagged(
        sets, list(sets), [2, 3],
        EvalConfig(k=10, jobs=6),
    )
    assert parallel.best_bag == report.best_bag
    assert [label for label, _ in parallel.ranking] == [
        label for label, _ in report.ranking
    ]
    # objective = mean of all per-dimension r over all targets of the bag
    label, objective = report.ranking[0]
    cells = report.cells[label]
    values = [s.r for target in cells.values() for s in target.scores]
    assert abs(objective - sum(values) / len(values)) <= 1e-12


def test_eval_bag_validation():
    sets = {"a": make_merged(30, seed=41), "b": make_merged(30, seed=42)}
    with pytest.raises(DataError):
        eval_cross_bagged({"a": sets["a"]}, ["a"], [2], EvalConfig())
    with pytest.raises(DataError):
        eval_cross_bagged(sets, ["missing"], [2], EvalConfig())
    with pytest.raises(DataError):
        eval_cross_bagged(sets, ["a"], [3], EvalConfig())
    with pytest.raises(DataError):
        eval_cross_bagged(sets, ["a"], [], EvalConfig())


def test_config_validation():
    with pytest.raises(DataError):
        EvalConfig(k=0)
    with pytest.raises(DataError):
        EvalConfig(folds=1)
    with pytest.raises(DataError):
        EvalConfig(seed=-1)
    with pytest.raises(DataError):
        EvalConfig(jobs=0)
    with pytest.raises(FormatMismatchError):
        eval_mono(make_merged(30), EvalConfig(direction="nope2nada", folds=3))


def test_small_fold_warning_threshold():
    gold = make_merged(SMALL_FOLD_ROWS * 2 + 10)
    report = eval_mono(gold, EvalConfig(k=3, folds=2))
    assert not any("high-variance" in w for w in report.warnings)
