"""Figures for flow samples (matplotlib, headless)."""

from __future__ import annotations

import csv
import io


def plot_samples(csv_text, path, title=None):
    """One line per column of a ``FlowCurve.sample_csv`` table, against c."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = list(csv.reader(io.StringIO(csv_text)))
    header, body = rows[0], rows[1:]
    cs = [float(r[0]) for r in body]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for k, name in enumerate(header[1:], start=1):
        ax.plot(cs, [float(r[k]) for r in body], label=name)
    ax.set_xlabel("c")
    ax.set_yscale("symlog")
    if title:
        ax.set_title(title)
    ax.legend(fontsize="small", ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_timings(rows, path):
    """Horizontal bars of (label, seconds, passed)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 0.35 * len(rows) + 1.2))
    labels = [r[0] for r in rows]
    ax.barh(labels, [r[1] for r in rows], color=["tab:green" if r[2] else "tab:red" for r in rows])
    ax.invert_yaxis()
    ax.set_xlabel("seconds")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path
