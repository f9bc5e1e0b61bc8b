"""Figures for reports.  Uses the non-interactive Agg backend throughout."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, List, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402
from matplotlib.ticker import NullFormatter, ScalarFormatter  # noqa: E402

from .bounds import basu_s, milnor_projective, numerical_bound  # noqa: E402

GOLDEN = (math.sqrt(5) - 1) / 2
WIDTH = 5.0

STYLE = {
    "font.family": "serif",
    "font.size": 9,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 200,
    "savefig.bbox": "tight",
    "pdf.fonttype": 42,
    "mathtext.fontset": "stix",
}

# one colour per inertia label; labels never exceed n + 1 <= 7 in practice
LABEL_COLORS = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"]


def _label_color(label: int) -> str:
    return LABEL_COLORS[label % len(LABEL_COLORS)]


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_pencil(analysis, path, title: str = "") -> Path:
    """Circle of directions with arcs coloured by the index label."""
    from .pencil import omega_at, root_directions

    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(WIDTH * 0.7, WIDTH * 0.7))
        angles = _root_angles(root_directions(analysis))
        if not angles:
            theta = np.linspace(0, 2 * np.pi, 200)
            ax.plot(np.cos(theta), np.sin(theta), color=_label_color(analysis.labels[0]))
        else:
            # arcs between consecutive roots, labelled by the sample inside them
            for sample, label in zip(analysis.samples, analysis.labels):
                w = omega_at(sample)
                mid = math.atan2(float(w[1]), float(w[0])) % (2 * math.pi)
                lo, hi = _enclosing(angles, mid)
                theta = np.linspace(lo, hi, 100)
                ax.plot(np.cos(theta), np.sin(theta), color=_label_color(label), lw=3, solid_capstyle="butt")
                ax.text(1.15 * math.cos(mid), 1.15 * math.sin(mid), str(label), ha="center", va="center")
            xs, ys = zip(*[(math.cos(a), math.sin(a)) for a in angles])
            ax.plot(xs, ys, "o", color="black", ms=4, zorder=3, label="roots")
            ax.legend(loc="lower left", frameon=False)
        ax.set_aspect("equal")
        ax.set_xlim(-1.35, 1.35)
        ax.set_ylim(-1.35, 1.35)
        ax.set_xlabel(r"$\omega_1$")
        ax.set_ylabel(r"$\omega_2$")
        ax.set_title(title or rf"$i^-$ labels, $\mu={analysis.mu}$, $\nu={analysis.nu}$, bound ${analysis.bound.value}$")
        return _save(fig, path)


def _root_angles(dirs) -> List[float]:
    return sorted(math.atan2(y, x) % (2 * math.pi) for x, y in dirs)


def _enclosing(angles: Sequence[float], a: float):
    for lo, hi in zip(angles, angles[1:]):
        if lo <= a <= hi:
            return lo, hi
    return angles[-1], angles[0] + 2 * math.pi


def plot_net(analysis, path, title: str = "") -> Path:
    """Both hemispheres of S^2 (orthographic, seen from +z and -z)."""
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, 2, figsize=(WIDTH * 1.3, WIDTH * 0.7))
        for ax, side, name in zip(axes, (1, -1), (r"$\omega_3 \geq 0$", r"$\omega_3 \leq 0$")):
            pts = [(p, lbl) for p, lbl in analysis.plot_samples if p[2] * side >= 0]
            if pts:
                xy = np.array([[p[0], p[1] * side] for p, _ in pts])
                colors = [_label_color(lbl) for _, lbl in pts]
                ax.scatter(xy[:, 0], xy[:, 1], c=colors, s=4, linewidths=0)
            segs = [
                [(a[0], a[1] * side), (b[0], b[1] * side)]
                for a, b in analysis.plot_segments
                if a[2] * side >= 0 and b[2] * side >= 0
            ]
            if segs:
                ax.add_collection(LineCollection(segs, colors="black", linewidths=1.0))
            theta = np.linspace(0, 2 * np.pi, 200)
            ax.plot(np.cos(theta), np.sin(theta), color="0.6", lw=0.6)
            ax.set_aspect("equal")
            ax.set_xlim(-1.05, 1.05)
            ax.set_ylim(-1.05, 1.05)
            ax.set_xticks([])
            ax.set_yticks([])
            for s in ax.spines.values():
                s.set_visible(False)
            ax.set_title(name)
        labels = sorted({lbl for _, lbl in analysis.regions})
        handles = [plt.Line2D([], [], marker="o", ls="", color=_label_color(lbl), label=f"$i^-={lbl}$") for lbl in labels]
        handles.append(plt.Line2D([], [], color="black", label=r"$\Sigma_\epsilon$"))
        fig.legend(handles=handles, loc="lower center", ncol=len(handles), frameon=False)
        fig.suptitle(
            title or f"{analysis.curve_components} curve component(s), "
            rf"$\mu={analysis.mu}$, $\nu={analysis.nu}$, bound ${analysis.bound.value}$"
        )
        return _save(fig, path)


def plot_bounds(k: int, ns: Iterable[int], path) -> Path:
    """Growth of the closed-form bounds in n (log-log)."""
    ns = list(ns)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(WIDTH, WIDTH * GOLDEN))
        ax.loglog(ns, [float(numerical_bound(k, n).exact) for n in ns], "o-", label="numerical")
        ax.loglog(ns, [float(basu_s(k, n).exact) for n in ns], "s--", label="Basu $s(k,n)$")
        ax.loglog(ns, [milnor_projective(n, 2) for n in ns], "^:", label="Milnor")
        ref = float(numerical_bound(k, ns[0]).exact)
        ax.loglog(ns, [ref * (n / ns[0]) ** (k - 1) for n in ns], color="0.5", lw=0.8, label=f"$n^{{{k - 1}}}$ slope")
        ax.set_xticks(ns)
        ax.xaxis.set_major_formatter(ScalarFormatter())
        ax.xaxis.set_minor_formatter(NullFormatter())
        ax.set_xlabel("$n$")
        ax.set_ylabel("bound on $b(X)$")
        ax.set_title(f"closed-form bounds, $k={k}$")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_compare(rows: Sequence[dict], path) -> Path:
    """Instance bound, numerical bound and oracle per seed."""
    rows = [r for r in rows if r.get("instance_bound") not in ("", None)]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(WIDTH, WIDTH * GOLDEN))
        seeds = [r["seed"] for r in rows]
        ax.plot(seeds, [r["instance_bound"] for r in rows], "o", label="instance bound")
        ax.plot(seeds, [r["numerical_bound"] for r in rows], "_", ms=10, color="0.3", label="numerical bound")
        oracle = [(r["seed"], r["oracle_total"]) for r in rows if r.get("oracle_stable") is True]
        if oracle:
            xs, ys = zip(*oracle)
            ax.plot(xs, ys, "x", color="#e6550d", label="oracle $b(X)$ (stable)")
        if rows:
            ax.set_title(f"random instances, $k={rows[0]['k']}$, $n={rows[0]['n']}$")
        ax.set_xlabel("seed")
        ax.set_ylabel("total Betti number")
        ax.legend(frameon=False)
        return _save(fig, path)
