"""Optional figures next to the CSV outputs (needs matplotlib; imported lazily)."""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:  # pragma: no cover - depends on the environment
        raise RuntimeError("--figures needs matplotlib (pip install 'artifact[plot]')") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_profile(profile, path: str | Path) -> Path:
    plt = _pyplot()
    vals = np.where(np.isfinite(profile.values), profile.values, np.nan)
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.imshow(vals.T, origin="lower", aspect="auto",
                   extent=(profile.ells[0], profile.ells[-1], profile.cs[0], profile.cs[-1]))
    fig.colorbar(im, ax=ax, label="b")
    ax.set_xlabel("degree density l")
    ax.set_ylabel("level c")
    ax.set_title(f"{profile.spec.name or 'spec'} ({profile.mode})")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_spectrum(hist, path: str | Path, interval=None) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3))
    if hist.entries:
        v, m = zip(*hist.entries)
        ax.vlines(v, 0, m)
    if interval is not None:
        ax.axvspan(*interval, alpha=0.15)
    ax.set_xlabel("F' value")
    ax.set_ylabel("critical points")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_limit(rows, path: str | Path) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3))
    n = [r.n for r in rows]
    ax.plot(n, [r.rate for r in rows], "o-", label="(1/n) ln count")
    ax.plot(n, [r.certificate for r in rows], "s--", label="OW certificate")
    if rows and np.isfinite(rows[0].target):
        ax.axhline(rows[0].target, color="k", lw=0.8, label="asymptotic")
    ax.set_xscale("log")
    ax.set_xlabel("|window|")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_tiling(window, tiles, result, path: str | Path) -> Path:
    plt = _pyplot()
    if window.dim != 2:
        raise ValueError("tiling figures are drawn for d = 2 only")
    fig, ax = plt.subplots(figsize=(4, 4))
    pts = window.as_array()
    ax.scatter(pts[:, 0], pts[:, 1], s=2, c="0.7")
    for piece in result.pieces(tiles):
        lo, hi = piece.bounds()
        ax.add_patch(plt.Rectangle(lo - 0.5, *(hi - lo + 1), fill=False, lw=0.8))
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
