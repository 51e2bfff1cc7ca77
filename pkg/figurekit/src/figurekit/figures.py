"""The five figure kinds, drawn from validated artifact data.

Rendering is deterministic: the Agg backend, a fixed ``svg.hashsalt``, and
date-free metadata make repeated renders of the same inputs byte-identical.
Each draw function receives the loaded CSV tables plus the JSON sidecar and
returns a matplotlib figure; :func:`render` drives validation, drawing, and
writing the SVG/PNG pair.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg", force=False)
matplotlib.rcParams["svg.hashsalt"] = "figurekit"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .spec import FigureSpec, SchemaError, load_inputs  # noqa: E402

__all__ = ["render"]

_SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c")


def _folded_goe(r: np.ndarray) -> np.ndarray:
    return 6.75 * (r + r**2) / (1 + r + r**2) ** 2.5


def _folded_poisson(r: np.ndarray) -> np.ndarray:
    return 2.0 / (1 + r) ** 2


def _ratio_axes(ax, ratios, sidecar, bins: int) -> None:
    ax.hist(
        ratios, bins=bins, range=(0.0, 1.0), density=True,
        color="#9ecae1", edgecolor="#3182bd", label="measured",
    )
    grid = np.linspace(0.0, 1.0, 256)
    ax.plot(grid, _folded_goe(grid), color="#d62728", label="GOE")
    ax.plot(
        grid, _folded_poisson(grid), color="#666666", linestyle="--",
        label="Poisson",
    )
    ax.axvline(
        sidecar["rbar"], color="#d62728", linestyle=":",
        label=f"mean {sidecar['rbar']:.4f}",
    )
    ax.set_xlabel("gap ratio r")
    ax.set_ylabel("P(r)")
    ax.set_xlim(0.0, 1.0)
    ax.legend(fontsize=8)


def _draw_rstats(tables, sidecar, style):
    fig, ax = plt.subplots(figsize=(4.2, 3.2), constrained_layout=True)
    _ratio_axes(
        ax, tables["ratios.csv"]["ratio"], sidecar,
        int(style.get("bins", 24)),
    )
    ax.set_title(style.get("title", "sector level statistics"), fontsize=10)
    return fig


def _draw_dome(tables, sidecar, style):
    fig, ax = plt.subplots(figsize=(4.2, 3.2), constrained_layout=True)
    data = tables["dome.csv"]
    ax.scatter(
        data["energy"], data["entropy"],
        s=float(style.get("marker_size", 5.0)),
        color="#1f77b4", alpha=0.6, linewidths=0,
    )
    ax.axhline(
        sidecar["page"], color="#d62728", linestyle="--",
        label=f"Page {sidecar['page']:.3f}",
    )
    ax.set_xlabel("energy")
    ax.set_ylabel("entanglement entropy")
    ax.set_title(style.get("title", "eigenstate entanglement"), fontsize=10)
    ax.legend(fontsize=8, loc="lower center")
    return fig


def _draw_quench(tables, sidecar, style):
    fig, ax = plt.subplots(figsize=(4.6, 3.2), constrained_layout=True)
    data = tables["quench.csv"]
    labels = [name for name in data if name != "t"]
    for label, color in zip(labels, _SERIES_COLORS):
        ax.plot(data["t"], data[label], color=color, label=label, lw=1.0)
        ax.axhline(
            sidecar["de"][label], color=color, linestyle="--", lw=0.8,
        )
    ax.set_xlabel("t")
    ax.set_ylabel("expectation")
    title = style.get(
        "title",
        f"quench charge={sidecar['charge']} nu={sidecar['nu']:g} "
        f"g={sidecar['g']:g}",
    )
    ax.set_title(title, fontsize=10)
    ax.legend(fontsize=8)
    return fig


def _draw_lifetime(tables, sidecar, style):
    fig, axes = plt.subplots(
        1, 2, figsize=(7.4, 3.2), constrained_layout=True
    )
    data = tables["lifetime.csv"]
    fits = sidecar["fits"]
    panels = [
        ("nu", "nu", axes[0], f"g = {sidecar['fixed_g']:g}"),
        ("g", "g", axes[1], f"nu = {sidecar['fixed_nu']:g}"),
    ]
    for sweep, xname, ax, note in panels:
        sel = [i for i, s in enumerate(data["sweep"]) if s == sweep]
        xs = np.array([data[xname][i] for i in sel])
        for tau_name, color in (("tau_x", "#1f77b4"), ("tau_z", "#d62728")):
            taus = np.array([data[tau_name][i] for i in sel])
            censored = np.array(
                [tau_name[-1] in data["censored"][i] for i in sel]
            )
            fit = fits[f"{tau_name}_vs_{xname}"]
            label = f"{tau_name} ~ {xname}^{fit['exponent']:.2f}"
            ax.loglog(
                xs[~censored], taus[~censored], "o", color=color,
                label=label, ms=4,
            )
            if censored.any():
                ax.loglog(
                    xs[censored], taus[censored], "o", ms=4,
                    markerfacecolor="none", markeredgecolor=color,
                )
            grid = np.geomspace(xs.min(), xs.max(), 64)
            ax.loglog(
                grid, fit["prefactor"] * grid ** fit["exponent"],
                color=color, lw=0.8,
            )
        ax.set_xlabel(xname)
        ax.set_ylabel("lifetime")
        ax.set_title(note, fontsize=9)
        ax.legend(fontsize=8)
    fig.suptitle(style.get("title", "memory lifetime scaling"), fontsize=10)
    return fig


def _draw_bacon_shor(tables, sidecar, style):
    fig, axes = plt.subplots(
        1, 2, figsize=(7.4, 3.2), constrained_layout=True
    )
    spectra = tables["spectra.csv"]
    sectors = sorted(set(spectra["sector"]))
    cmap = plt.get_cmap("viridis")
    for sector in sectors:
        sel = [i for i, s in enumerate(spectra["sector"]) if s == sector]
        axes[0].plot(
            [spectra["index"][i] for i in sel],
            [spectra["energy"][i] for i in sel],
            color=cmap(sector / max(len(sectors) - 1, 1)),
            lw=0.9, label=f"sector {int(sector)}",
        )
    axes[0].set_xlabel("level index")
    axes[0].set_ylabel("energy")
    axes[0].set_title(
        f"{int(sidecar['n_sectors'])} symmetry sectors", fontsize=9
    )
    if len(sectors) <= 8:
        axes[0].legend(fontsize=7)
    _ratio_axes(
        axes[1], tables["ratios.csv"]["ratio"], sidecar,
        int(style.get("bins", 24)),
    )
    fig.suptitle(style.get("title", "chain spectra and statistics"),
                 fontsize=10)
    return fig


_DRAWERS = {
    "rstats": _draw_rstats,
    "dome": _draw_dome,
    "quench": _draw_quench,
    "lifetime": _draw_lifetime,
    "bacon_shor": _draw_bacon_shor,
}


def render(spec: FigureSpec) -> list:
    """Validate, draw, and write one figure as an SVG/PNG pair.

    Returns the written paths.  The output stem may carry an ``.svg`` or
    ``.png`` suffix (it is stripped); both formats are always written.
    """
    tables, sidecar = load_inputs(spec)
    out = Path(spec.output)
    if out.suffix in (".svg", ".png"):
        out = out.with_suffix("")
    out.parent.mkdir(parents=True, exist_ok=True)
    fig = _DRAWERS[spec.kind](tables, sidecar, spec.style)
    written = []
    try:
        for suffix, metadata in ((".svg", {"Date": None}), (".png", None)):
            path = out.with_suffix(suffix)
            fig.savefig(path, metadata=metadata)
            written.append(path)
    finally:
        plt.close(fig)
    return written
