"""Figures drawn next to the delimited score reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .scenarios import Report, score_values  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "xtick.labelsize": 7,
    "ytick.labelsize": 8,
    "legend.fontsize": 8,
    "axes.spines.right": False,
    "axes.spines.top": False,
    "savefig.dpi": 150,
    # fixed metadata keeps repeated renders byte-identical
    "svg.hashsalt": "clintempeval",
}

# drop timestamps and version strings that would make output bytes vary
_STABLE_METADATA = {
    "png": {"Software": None},
    "svg": {"Date": None, "Creator": None},
    "pdf": {"CreationDate": None, "ModDate": None, "Producer": None, "Creator": None},
}


def plot_report(report: Report, path, title: str | None = None):
    """Grouped precision/recall/F1 bars, one group per report row."""
    rows = report.rows()
    labels = [f"{sub}\n{metric}" for (sub, metric), _ in rows]
    values = [score_values(s)[3:] for _, s in rows]

    with plt.rc_context(STYLE):
        width = max(4.0, 0.55 * len(rows) + 1.5)
        fig, ax = plt.subplots(figsize=(width, 3.2))
        xs = range(len(rows))
        for k, name in enumerate(("precision", "recall", "F1")):
            ax.bar([x + (k - 1) * 0.27 for x in xs], [v[k] for v in values],
                   width=0.27, label=name)
        ax.set_xticks(list(xs))
        ax.set_xticklabels(labels, rotation=0)
        ax.set_ylim(0, 1.05)
        ax.set_ylabel("score")
        if title is None:
            meta = report.metadata
            title = f"scenario {meta.get('scenario', '?')} ({meta.get('match', '?')} match)"
        ax.set_title(title)
        if rows:
            ax.legend(loc="lower right", ncol=3, frameon=False)
        fig.tight_layout()
        fig.savefig(path, metadata=_STABLE_METADATA.get(str(path).rsplit(".", 1)[-1].lower()))
        plt.close(fig)
    return path
