"""Deterministic synthetic gold data.

Two generators back the harness checks and make the pipeline runnable
without the licensed psychology norms: a smooth noisy VAD->BE5 relation for
recovery tests, and an exactly affine relation with replicated feature
vectors for identity checks.
"""

from __future__ import annotations

import numpy as np

from .lexicon import BE5, VAD, MergedLexicon
from .rng import SplitMix64

#: Per-category mix over (v, 1-v, a, 1-a, d, 1-d) with v/a/d scaled to [0,1].
#: Weights sum to 1 per row; each category is monotone in every VAD dimension
#: and the five rows jointly keep the map invertible enough for back-mapping.
_BE5_MIX = {
    "joy": ((0, 0.70), (2, 0.15), (4, 0.15)),
    "anger": ((1, 0.45), (2, 0.25), (5, 0.30)),
    "sadness": ((1, 0.50), (3, 0.20), (5, 0.30)),
    "fear": ((1, 0.35), (2, 0.25), (5, 0.40)),
    "disgust": ((1, 0.60), (5, 0.40)),
}
_BE5_LOW = 1.15
_BE5_SPAN = 3.70


def _smoothstep(u: float) -> float:
    """Monotone C1 map of [0,1] onto itself."""
    return u * u * (3.0 - 2.0 * u)


def _be5_from_vad(v: float, a: float, d: float) -> list[float]:
    unit = (
        (v - 1.0) / 8.0,
        1.0 - (v - 1.0) / 8.0,
        (a - 1.0) / 8.0,
        1.0 - (a - 1.0) / 8.0,
        (d - 1.0) / 8.0,
        1.0 - (d - 1.0) / 8.0,
    )
    values = []
    for mix in _BE5_MIX.values():
        u = sum(weight * unit[idx] for idx, weight in mix)
        values.append(_BE5_LOW + _BE5_SPAN * _smoothstep(u))
    return values


def synthetic_gold(n: int = 1000, seed: int = 42, noise_sd: float = 0.1) -> MergedLexicon:
    """VAD uniform on [1,9]; BE5 a fixed smooth monotone function of VAD plus
    Gaussian noise, clamped into [1,5] (the clean function stays 0.15 away
    from the bounds, so clamping is a tail event).
    """
    rng = SplitMix64(seed)
    words = [f"syn{i:05d}" for i in range(n)]
    vad = np.empty((n, 3))
    be5 = np.empty((n, 5))
    for i in range(n):
        v, a, d = (rng.uniform(1.0, 9.0) for _ in range(3))
        vad[i] = (v, a, d)
        clean = _be5_from_vad(v, a, d)
        be5[i] = [
            min(max(value + noise_sd * rng.gauss(), 1.0), 5.0) for value in clean
        ]
    return MergedLexicon(
        words,
        vad,
        be5,
        (VAD, BE5),
        provenance=f"synthetic gold (n={n}, seed={seed}, noise_sd={noise_sd})",
    )


def replicated_affine_gold(
    unique: int = 50, copies: int = 20, seed: int = 7
) -> MergedLexicon:
    """Exactly affine VAD->BE5 gold where every feature vector occurs
    `copies` times.

    Under cross-validation, a held-out row finds its duplicates in the
    training data; with k below the copy count the nearest neighbours all
    carry the row's own affine target, so predictions reproduce the targets
    to the last bit of the neighbour mean.
    """
    rng = SplitMix64(seed)
    points = [
        tuple(rng.uniform(1.0, 9.0) for _ in range(3)) for _ in range(unique)
    ]
    words = []
    vad = np.empty((unique * copies, 3))
    be5 = np.empty((unique * copies, 5))
    row = 0
    for c in range(copies):
        for u, (v, a, d) in enumerate(points):
            words.append(f"aff{u:04d}x{c}")
            vad[row] = (v, a, d)
            be5[row] = (
                1.0 + (v - 1.0) / 2.0,
                1.0 + (9.0 - v) / 2.0,
                1.0 + (a - 1.0) / 2.0,
                1.0 + (d - 1.0) / 2.0,
                1.0 + ((v - 1.0) + (9.0 - a)) / 4.0,
            )
            row += 1
    return MergedLexicon(
        words,
        vad,
        be5,
        (VAD, BE5),
        provenance=f"replicated affine gold ({unique} points x {copies} copies, seed={seed})",
    )
