"""Matplotlib renderings of the report CSVs (root atlases, sweeps, grids).

Rendering happens at float precision; the delimited output next to each
figure carries the full-precision values.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_atlas_png(rows, out_path, title=""):
    """Scatter of x-plane roots; forced roots drawn hollow."""
    forced_x = [float(r["re"]) for r in rows if r["forced"]]
    forced_y = [float(r["im"]) for r in rows if r["forced"]]
    extra_x = [float(r["re"]) for r in rows if not r["forced"]]
    extra_y = [float(r["im"]) for r in rows if not r["forced"]]
    fig, ax = plt.subplots(figsize=(8, 3.2))
    ax.scatter(extra_x, extra_y, s=6, c="black", label="extraneous")
    ax.scatter(forced_x, forced_y, s=14, facecolors="none", edgecolors="tab:red",
               linewidths=0.7, label="forced")
    ax.axhline(0, lw=0.4, c="gray")
    ax.axvline(0, lw=0.4, c="gray")
    ax.set_xlabel("Re x")
    ax.set_ylabel("Im x")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=7)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_sweep_png(ks, values, task, out_path, title=""):
    fig, ax = plt.subplots(figsize=(5, 3.4))
    pts = [(k, float(v)) for k, v in zip(ks, values) if v is not None]
    if pts:
        xs, ys = zip(*pts)
        positive = all(y > 0 for y in ys)
        spread = (max(ys) / min(ys)) if positive and min(ys) > 0 else 1
        if positive and spread > 1e3:
            ax.semilogy(xs, ys, "o-", ms=4)
        else:
            ax.plot(xs, ys, "o-", ms=4)
    ax.set_xlabel("k")
    ax.set_ylabel(task)
    if title:
        ax.set_title(title)
    ax.grid(True, lw=0.3, alpha=0.5)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_values_png(rows, out_path, title=""):
    """Profile values along the real axis, one trace per imaginary offset."""
    fig, ax = plt.subplots(figsize=(6, 3.4))
    ys = sorted({r["y"] for r in rows})
    for y in ys:
        xs = [r["x"] / 10 for r in rows if r["y"] == y]
        vals = [float(r["f"]) for r in rows if r["y"] == y]
        ax.plot(xs, vals, lw=0.9, label=f"Im x = {y / 10:g}")
    ax.set_xlabel("Re x")
    ax.set_ylabel("f profile")
    ax.legend(fontsize=7)
    if title:
        ax.set_title(title)
    ax.grid(True, lw=0.3, alpha=0.5)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
