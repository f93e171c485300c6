"""Figures for benchmark CSVs, written next to the CSV as PNG files."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import read_csv  # noqa: E402


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_counts(rows, path: Path) -> Path:
    agg = defaultdict(lambda: defaultdict(list))
    for r in rows:
        agg[r["kind"]][int(r["n"])].append((float(r["min"]), float(r["avg"]), float(r["max"])))
    fig, ax = plt.subplots(figsize=(5, 4))
    for kind in sorted(agg):
        ns = sorted(agg[kind])
        mean = lambda i: [sum(t[i] for t in agg[kind][n]) / len(agg[kind][n]) for n in ns]  # noqa: E731
        line, = ax.plot(ns, mean(1), marker="o", label=f"{kind} avg")
        ax.fill_between(ns, mean(0), mean(2), color=line.get_color(), alpha=0.15)
    ax.set_xscale("log")
    ax.set_yscale("symlog", linthresh=1)
    ax.set_xlabel("n")
    ax.set_ylabel("visible segments")
    ax.legend()
    return _save(fig, path)


def plot_variance(rows, path: Path) -> Path:
    by = defaultdict(list)
    for r in rows:
        by[r["kind"]].append((int(r["n"]), float(r["sigma"])))
    fig, ax = plt.subplots(figsize=(5, 4))
    for kind in sorted(by):
        pts = sorted(by[kind])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=kind)
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("1 sigma of estimate - truth")
    ax.legend()
    return _save(fig, path)


def plot_memtime(rows, path: Path) -> Path:
    by = defaultdict(list)
    for r in rows:
        ell = int(r["ell"])
        n = int(r["n"])
        tag = _policy_tag(n, ell)
        by[(r["kind"], tag)].append((n, int(r["edges"]) + int(r["faces"]), float(r["query_us_mean"])))
    fig, (a, b) = plt.subplots(1, 2, figsize=(9, 4))
    for key in sorted(by):
        pts = sorted(by[key])
        label = f"{key[0]} ell {key[1]}"
        a.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
        b.plot([p[0] for p in pts], [p[2] for p in pts], marker="o", label=label)
    for ax, yl in ((a, "edges + faces"), (b, "query time (us)")):
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("n")
        ax.set_ylabel(yl)
    a.legend(fontsize=7)
    return _save(fig, path)


def _policy_tag(n: int, ell: int) -> str:
    if ell == 1:
        return "1"
    if ell * ell >= n and (ell - 1) ** 2 < n:
        return "sqrt"
    if ell**4 >= n and (ell - 1) ** 4 < n:
        return "quarter_root"
    return str(ell)


PLOTTERS = {"counts": plot_counts, "variance": plot_variance, "memtime": plot_memtime}


def plot_csv(experiment: str, csv_path) -> Path:
    """Render the figure for ``csv_path`` to the same path with a .png suffix."""
    csv_path = Path(csv_path)
    return PLOTTERS[experiment](read_csv(csv_path), csv_path.with_suffix(".png"))
