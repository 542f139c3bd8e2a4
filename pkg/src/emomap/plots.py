"""Figure rendering for the report subcommands.

Each function returns finished PNG bytes so callers can write files
atomically.  matplotlib is imported lazily with the Agg backend; the PNG
metadata is pinned so identical reports render identical bytes.
"""

from __future__ import annotations

import io

_PNG_METADATA = {"Software": "emomap"}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _to_png(fig) -> bytes:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=110, metadata=_PNG_METADATA,
                bbox_inches="tight")
    return buf.getvalue()


def _bar_colors(plt, n: int):
    cmap = plt.get_cmap("tab10")
    return [cmap(i % 10) for i in range(n)]


def eval_report_figure(report) -> bytes:
    """Per-dimension r bars with reliability-floor ticks where configured."""
    plt = _pyplot()
    scores = [s for s in report.scores if s.r is not None]
    fig, ax = plt.subplots(figsize=(1.2 + 0.9 * max(len(scores), 1), 3.2))
    labels = [s.dimension for s in scores]
    values = [s.r for s in scores]
    positions = range(len(scores))
    ax.bar(positions, values, color=_bar_colors(plt, len(scores)), width=0.7)
    floors = report.config.get("floors", {})
    for x, score in zip(positions, scores):
        floor = floors.get(score.dimension)
        if floor is not None:
            ax.plot([x - 0.42, x + 0.42], [floor, floor], color="black", lw=1.2)
    ax.set_xticks(list(positions))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("Pearson r")
    ax.set_title(f"{report.experiment}: {report.label}")
    fig.tight_layout()
    png = _to_png(fig)
    plt.close(fig)
    return png


def bag_report_figure(bag_report) -> bytes:
    """Horizontal ranking of the bag objectives."""
    plt = _pyplot()
    ranked = [(label, value) for label, value in bag_report.ranking if value is not None]
    fig, ax = plt.subplots(figsize=(6.0, 0.6 + 0.45 * max(len(ranked), 1)))
    labels = [label for label, _ in ranked][::-1]
    values = [value for _, value in ranked][::-1]
    ax.barh(range(len(ranked)), values, color=_bar_colors(plt, len(ranked))[::-1])
    ax.set_yticks(range(len(ranked)))
    ax.set_yticklabels(labels)
    ax.set_xlabel("mean r over all dimensions and targets")
    ax.set_xlim(0.0, 1.0)
    ax.set_title("training bag ranking")
    fig.tight_layout()
    png = _to_png(fig)
    plt.close(fig)
    return png


def isr_figure(results: dict) -> bytes:
    """Per-dimension inter-study reliability bars."""
    plt = _pyplot()
    dims = list(results)
    values = [results[d].r for d in dims]
    fig, ax = plt.subplots(figsize=(1.2 + 0.9 * len(dims), 3.2))
    ax.bar(range(len(dims)), values, color=_bar_colors(plt, len(dims)), width=0.7)
    ax.set_xticks(range(len(dims)))
    ax.set_xticklabels(dims, rotation=45, ha="right")
    ax.set_ylim(-1.0 if min(values) < 0 else 0.0, 1.05)
    ax.set_ylabel("Pearson r")
    ax.set_title(f"inter-study reliability (n={results[dims[0]].n})")
    fig.tight_layout()
    png = _to_png(fig)
    plt.close(fig)
    return png


def describe_figure(summaries: dict) -> bytes:
    """Means with min-max whiskers per dimension."""
    plt = _pyplot()
    dims = list(summaries)
    means = [summaries[d].mean for d in dims]
    lower = [summaries[d].mean - summaries[d].minimum for d in dims]
    upper = [summaries[d].maximum - summaries[d].mean for d in dims]
    fig, ax = plt.subplots(figsize=(1.2 + 0.9 * len(dims), 3.2))
    ax.bar(range(len(dims)), means, color=_bar_colors(plt, len(dims)), width=0.7)
    ax.errorbar(
        range(len(dims)), means, yerr=[lower, upper],
        fmt="none", ecolor="black", capsize=3, lw=1.0,
    )
    ax.set_xticks(range(len(dims)))
    ax.set_xticklabels(dims, rotation=45, ha="right")
    ax.set_ylabel("rating (mean; whiskers = min/max)")
    ax.set_title("descriptive statistics")
    fig.tight_layout()
    png = _to_png(fig)
    plt.close(fig)
    return png


def topk_figure(columns: dict[str, list[tuple[str, float]]]) -> bytes:
    """One horizontal bar panel per dimension, highest-rated words on top."""
    plt = _pyplot()
    dims = list(columns)
    fig, axes = plt.subplots(
        1, len(dims), figsize=(2.6 * len(dims), 0.6 + 0.32 * len(columns[dims[0]])),
        squeeze=False,
    )
    for ax, dim in zip(axes[0], dims):
        entries = columns[dim][::-1]
        ax.barh(range(len(entries)), [v for _, v in entries],
                color=_bar_colors(plt, 1)[0])
        ax.set_yticks(range(len(entries)))
        ax.set_yticklabels([w for w, _ in entries], fontsize=8)
        ax.set_title(dim, fontsize=9)
    fig.tight_layout()
    png = _to_png(fig)
    plt.close(fig)
    return png


def corr_matrix_figure(corr) -> bytes:
    """Annotated heatmap of the cross-format correlation matrix."""
    plt = _pyplot()
    size = len(corr.labels)
    data = [[v if v is not None else 0.0 for v in row] for row in corr.matrix]
    fig, ax = plt.subplots(figsize=(1.0 + 0.7 * size, 0.8 + 0.7 * size))
    image = ax.imshow(data, cmap="RdBu_r", vmin=-1.0, vmax=1.0)
    ax.set_xticks(range(size))
    ax.set_xticklabels(corr.labels, rotation=45, ha="right")
    ax.set_yticks(range(size))
    ax.set_yticklabels(corr.labels)
    for i in range(size):
        for j in range(size):
            value = corr.matrix[i][j]
            text = "n/a" if value is None else f"{value:+.2f}"
            ax.text(j, i, text, ha="center", va="center", fontsize=7)
    fig.colorbar(image, ax=ax, shrink=0.8)
    ax.set_title(f"correlation matrix (n={corr.overlap})")
    fig.tight_layout()
    png = _to_png(fig)
    plt.close(fig)
    return png
