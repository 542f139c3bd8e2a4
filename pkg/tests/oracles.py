"""Independent oracles the implementation is checked against.

Everything here is deliberately written from scratch against the stated
definitions (exhaustive scan, textbook two-pass formula, arbitrary-precision
quadrature) and must not share code paths with the package.
"""

from __future__ import annotations

import math

import mpmath as mp


def knn_predict_oracle(features, targets, k, query, lo, hi):
    """Exhaustive-scan kNN regression in pure Python.

    Squared distances accumulate per dimension left to right; ties rank by
    lower row index; the neighbour mean is fsum/k and output clamps to
    [lo, hi].
    """
    n = len(features)
    scored = []
    for i in range(n):
        acc = 0.0
        for j in range(len(query)):
            diff = features[i][j] - query[j]
            acc += diff * diff
        scored.append((acc, i))
    scored.sort()  # tuple order = (distance, row index)
    neighbours = [i for _, i in scored[:k]]
    out = []
    for t in range(len(targets[0])):
        mean = math.fsum(targets[i][t] for i in neighbours) / k
        out.append(min(max(mean, lo), hi))
    return out


def pearson_oracle(x, y):
    """Two-pass textbook Pearson r with exact (fsum) accumulation."""
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    num = math.fsum((x[i] - mx) * (y[i] - my) for i in range(n))
    dx = math.fsum((v - mx) ** 2 for v in x)
    dy = math.fsum((v - my) ** 2 for v in y)
    return num / (math.sqrt(dx) * math.sqrt(dy))


def t_upper_tail_quadrature(t, df, dps=40):
    """P(T >= t) by arbitrary-precision quadrature of the t density."""
    with mp.workdps(dps):
        nu = mp.mpf(df)
        c = mp.gamma((nu + 1) / 2) / (mp.sqrt(nu * mp.pi) * mp.gamma(nu / 2))

        def density(x):
            return c * (1 + x * x / nu) ** (-(nu + 1) / 2)

        return float(mp.quad(density, [mp.mpf(t), mp.inf]))


def normal_upper_tail_erf(z, dps=40):
    """P(Z >= z) from the arbitrary-precision complementary error function."""
    with mp.workdps(dps):
        return float(0.5 * mp.erfc(mp.mpf(z) / mp.sqrt(2)))


def regularized_incomplete_beta_oracle(a, b, x, dps=40):
    with mp.workdps(dps):
        return float(mp.betainc(a, b, 0, x, regularized=True))
