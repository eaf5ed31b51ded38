"""Matplotlib figures for the report command.

Every function writes one figure to ``path`` and closes it; nothing is shown
interactively.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Arc  # noqa: E402

from . import counting, tamari  # noqa: E402
from .syntax import print_formula  # noqa: E402

RC = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def _ranks(poset) -> list:
    """Longest cover chain from the bottom element."""
    rank = [0] * len(poset.elements)
    below = {j: [] for j in range(len(poset.elements))}
    for i, j in poset.covers:
        below[j].append(i)
    order = sorted(range(len(poset.elements)), key=lambda i: bin(poset.up[i]).count("1"), reverse=True)
    for j in order:
        rank[j] = max((rank[i] + 1 for i in below[j]), default=0)
    return rank


def plot_hasse(poset, path):
    rank = _ranks(poset)
    levels = {}
    for i, r in enumerate(rank):
        levels.setdefault(r, []).append(i)
    pos = {}
    for r, idx in levels.items():
        for k, i in enumerate(idx):
            pos[i] = (k - (len(idx) - 1) / 2, r)
    with plt.rc_context(RC):
        width = max(4, 1.4 * max(len(v) for v in levels.values()))
        fig, ax = plt.subplots(figsize=(width, 1.1 * (max(rank) + 2)))
        for i, j in poset.covers:
            (x0, y0), (x1, y1) = pos[i], pos[j]
            ax.plot([x0, x1], [y0, y1], color="0.55", lw=0.8, zorder=1)
        small = len(poset.elements) <= 42
        for i, (x, y) in pos.items():
            if small:
                ax.text(x, y, print_formula(poset.elements[i]), ha="center", va="center",
                        fontsize=7, bbox=dict(boxstyle="round,pad=0.2", fc="white", ec="0.3", lw=0.5))
            else:
                ax.plot(x, y, "o", ms=3, color="k")
        ax.set_title(f"Tamari lattice Y{poset.n}: {len(poset.elements)} elements, "
                     f"{poset.interval_count()} intervals")
        ax.axis("off")
        return _save(fig, path)


def plot_interval_counts(rows, path):
    ns = [r["n"] for r in rows]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 3.4))
        ax.semilogy(ns, [r["series"] for r in rows], "-o", ms=3, label="series R(z,1)")
        ax.semilogy(ns, [r["closed"] for r in rows], "x", ms=7, label="2(4n+1)!/((n+1)!(3n+2)!)")
        brute = [(r["n"], r["bruteforce"]) for r in rows if r["bruteforce"] is not None]
        if brute:
            ax.semilogy(*zip(*brute), "s", mfc="none", ms=8, label="rotation closure")
        ax.set_xlabel("n")
        ax.set_ylabel("intervals in Y_n")
        ax.legend(loc="upper left")
        ax.grid(True, which="major", lw=0.3)
        return _save(fig, path)


def plot_r_triangle(series, path):
    order = series.order
    width = order + 2
    grid = [[math.nan] * (order + 1) for _ in range(width)]
    for n in range(order + 1):
        for k, c in enumerate(series[n]):
            if c:
                grid[k][n] = math.log10(c)
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 4))
        im = ax.imshow(grid, origin="lower", aspect="auto", cmap="viridis")
        fig.colorbar(im, ax=ax, label="log10 r(k, n)")
        ax.set_xlabel("goal size n")
        ax.set_ylabel("irreducible context length k")
        ax.set_title("Focused derivations by size and context length")
        return _save(fig, path)


def plot_arc_diagram(word, path, title=None):
    word = list(word)
    first = {}
    chords = []
    for j, x in enumerate(word):
        if x in first:
            chords.append((first[x], j))
        else:
            first[x] = j
    closed = {i for c in chords for i in c}
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(max(3, 0.5 * len(word)), 2.2))
        ax.axhline(0, color="k", lw=0.8)
        for i, j in chords:
            ax.add_patch(Arc(((i + j) / 2, 0), j - i, j - i, theta1=0, theta2=180, lw=1.0))
        for i, x in enumerate(word):
            if i not in closed:
                ax.plot([i, i], [0, 0.8], color="tab:red", lw=1.0)
            ax.text(i, -0.3, x, ha="center", va="top")
        top = max([(j - i) / 2 for i, j in chords] + [1])
        ax.set_xlim(-0.8, len(word) - 0.2)
        ax.set_ylim(-1.0, top + 0.4)
        ax.set_aspect("equal")
        ax.axis("off")
        if title:
            ax.set_title(title)
        return _save(fig, path)


def write_report(out_dir, upto: int = 10, hasse_n: int = 3, brute_limit: int = 6, words=()):
    """Counts table, coefficient triangle, Hasse diagram and figures."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = counting.count_table(upto, brute_limit)
    written = []

    path = out / "interval_counts.csv"
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if v is None else v) for k, v in r.items()})
    written.append(path)

    _, r = counting.solve_series(upto)
    path = out / "r_triangle.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n"] + [f"k{k}" for k in range(upto + 2)])
        for n in range(upto + 1):
            w.writerow([n] + [r.coeff(n, k) for k in range(upto + 2)])
    written.append(path)

    poset = tamari.build_poset(hasse_n)
    path = out / f"hasse_Y{hasse_n}.dot"
    path.write_text(poset.to_dot())
    written.append(path)

    written.append(plot_interval_counts(rows, out / "interval_counts.png"))
    written.append(plot_r_triangle(r, out / "r_triangle.png"))
    written.append(plot_hasse(poset, out / f"hasse_Y{hasse_n}.png"))
    for k, word in enumerate(words):
        written.append(plot_arc_diagram(word, out / f"arcs_{k}.png", " ".join(word)))
    return written
