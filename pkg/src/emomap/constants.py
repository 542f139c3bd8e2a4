"""Literature-sourced comparison constants.

Published reference values from the psychology studies named below, shipped
so evaluation reports can compare against fixed reliability floors and
baselines.  They are inputs to this toolkit, not facts it computed.
"""

from __future__ import annotations

from .stats import isr_floor

#: Published inter-study reliabilities (Pearson r) between affective norm
#: datasets with overlapping entries: (study pair, overlap, per-dimension r).
ISR_REFERENCE_PAIRS: tuple[tuple[str, int, dict[str, float]], ...] = (
    ("Imbir16 vs. Riegel15",        1272, {"valence": 0.948, "arousal": 0.733}),
    ("Guasch15 vs. Stadthagen16",   1298, {"valence": 0.949, "arousal": 0.875}),
    ("Bradley99 vs. Warriner13",    1027, {"valence": 0.952, "arousal": 0.760,
                                           "dominance": 0.794}),
    ("Guasch15 vs. Hinojosa16",      134, {"valence": 0.968, "arousal": 0.777}),
    ("Guasch15 vs. Redondo07",       316, {"valence": 0.969, "arousal": 0.844}),
    ("Hinojosa16 vs. Stadthagen16",  636, {"valence": 0.970, "arousal": 0.709}),
    ("Schmidtke14 vs. Kanske10",     169, {"valence": 0.971, "arousal": 0.788}),
    ("Redondo07 vs. Stadthagen16",  1010, {"valence": 0.976, "arousal": 0.755}),
)

#: Per-dimension minima over the pairs above: the human-reliability floor
#: evaluation verdicts test against (valence .948, arousal .709, dominance .794).
DEFAULT_ISR_FLOORS: dict[str, float] = dict(
    isr_floor(values for _, _, values in ISR_REFERENCE_PAIRS).minima
)

#: Published 10-fold word-level emotion prediction scores on the Bradley99
#: norms (Sedoc et al. 2017); comparison baseline, valence and arousal only.
WORD_PREDICTION_BASELINE: dict[str, float] = {"valence": 0.806, "arousal": 0.615}
