"""Figures written next to report files. Uses the Agg backend; no display needed."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# no timestamps or version strings, so reruns give identical bytes
_PNG_META = {"Software": None}


def _style(ax, xlabel, ylabel, title=None):
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title, fontsize=10)
    ax.grid(True, which="both", alpha=0.3, linewidth=0.5)


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)
    return path


def figure_path(out: str | Path) -> Path:
    return Path(out).with_suffix(".png")


def _fit_label(fit) -> str:
    if fit.model == "log":
        return f"{fit.coefficient:.3g} log n + {fit.intercept:.3g}"
    if fit.model == "power":
        return f"{fit.coefficient:.3g} n^{fit.exponent:.3f}"
    return f"constant {fit.coefficient:.3g}"


def plot_growth(series, fits, path):
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ns, vals = series.ns, series.norms
    conv = np.array([e.converged for e in series.entries], dtype=bool)
    ax.loglog(ns[conv], vals[conv], "o", color="k", ms=4, label="grid norm (converged)")
    if (~conv).any():
        ax.loglog(ns[~conv], vals[~conv], "x", color="tab:red", label="not converged")
    fine = np.geomspace(ns.min(), ns.max(), 200)
    for fit, color in zip(fits, ("tab:blue", "tab:orange", "tab:green")):
        label = _fit_label(fit)
        ax.loglog(fine, fit.predict(fine), "-", color=color, lw=1, label=f"{label} (rms {fit.residual:.1e})")
    _style(ax, "n", r"$\|e^{in\varphi}\|_{A}$", series.map_spec.get("family"))
    ax.legend(fontsize=7)
    return _save(fig, path)


def plot_littlewood(records, path):
    fig, ax = plt.subplots(figsize=(5.5, 4))
    Ns = np.array([r.N for r in records])
    ax.plot(Ns, [r.ratio for r in records], "o-", color="k", ms=4, label="best ratio")
    env = [(r.N, r.envelope, r.alt_envelope) for r in records if r.envelope is not None]
    if env:
        e = np.array(env)
        ax.plot(e[:, 0], e[:, 1], "--", color="tab:blue", label=r"$(\log\log N/\log N)^{1/3}$")
        ax.plot(e[:, 0], e[:, 2], ":", color="tab:orange", label=r"$1/\log N$")
    _style(ax, "N (prime)", r"$\delta(E)/\|1_E\|_A$", records[0].strategy if records else None)
    ax.legend(fontsize=7)
    return _save(fig, path)


def plot_operator_norms(powers, path, circle=None):
    fig, ax = plt.subplots(figsize=(5.5, 4))
    n = np.arange(len(powers.norms))
    ax.plot(n, powers.norms, "o-", color="k", ms=3, label=r"$\|U^n\|_{l^1\to l^1}$")
    if circle is not None:
        ax.plot(n[1:], circle, "x", color="tab:red", label="circle A-norm")
    _style(ax, "n", "norm")
    ax.legend(fontsize=7)
    return _save(fig, path)


def plot_phi_N_norms(norms, M, path, theta=None):
    fig, ax = plt.subplots(figsize=(5.5, 4))
    n = np.arange(norms.size)
    ax.plot(n, norms, ".", color="k", ms=2, label=r"$\|e^{in\varphi_N}\|_{A(\mathbb{T}_N)}$")
    if theta is not None:
        ax.plot(n, theta[: n.size], "-", color="tab:blue", lw=1, label=r"$\Theta_N(n)$")
    ax.axhline(M, color="tab:red", lw=0.8, ls="--", label=f"M = {M:.3g}")
    _style(ax, "n", "A-norm")
    ax.legend(fontsize=7)
    return _save(fig, path)
