"""Approximating ||e^{in phi}||_{A(T)} and fitting its growth in n.

Restricting a function to T_M folds its circle coefficients onto Z_M, which
can only shrink the l1 norm. Each grid value is therefore a lower bound for
the circle norm; we double M until consecutive values agree to a relative
tolerance. Convergence is one-sided and reported as a flag, not a guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circle_maps import CircleMap, grid_points
from .config import CAPS, Caps

MODELS = ("constant", "log", "power")


@dataclass(frozen=True)
class CircleNorm:
    value: float
    grid: int
    converged: bool
    history: tuple[tuple[int, float], ...] = ()

    @property
    def tail_estimate(self) -> float:
        """Increase over the last doubling; the residual error is typically of this order."""
        if len(self.history) < 2:
            return 0.0
        return self.history[-1][1] - self.history[-2][1]


def initial_grid(cmap: CircleMap, n: int, caps: Caps = CAPS) -> int:
    need = caps.growth_resolution * (1 + abs(n) * cmap.lipschitz)
    return 1 << max(0, math.ceil(math.log2(need)))


def grid_norm(cmap: CircleMap, n: int, M: int) -> float:
    """||e^{in phi}||_{A(T_M)}.

    The winding only shifts coefficients cyclically and a constant phase
    does not change moduli, so only the periodic part relative to its value
    at 0 is exponentiated. This keeps linear maps exactly at 1.
    """
    g = cmap.periodic_part(grid_points(M))
    h = np.exp(1j * n * (g - g[0]))
    return float(np.abs(np.fft.fft(h)).sum() / M)


def circle_a_norm(cmap: CircleMap, n: int, tolerance: float = 1e-3, caps: Caps = CAPS) -> CircleNorm:
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    M = initial_grid(cmap, n, caps)
    if n == 0:
        return CircleNorm(1.0, M, True, ((M, 1.0),))
    history = [(M, grid_norm(cmap, n, M))]
    while True:
        if 2 * M > caps.growth_grid:
            return CircleNorm(history[-1][1], M, False, tuple(history))
        M *= 2
        value = grid_norm(cmap, n, M)
        prev = history[-1][1]
        history.append((M, value))
        if abs(value - prev) <= tolerance * prev:
            return CircleNorm(value, M, True, tuple(history))


@dataclass(frozen=True)
class GrowthEntry:
    n: int
    norm: float
    grid: int
    converged: bool
    tail: float = 0.0


@dataclass(frozen=True)
class GrowthSeries:
    map_spec: dict
    entries: tuple[GrowthEntry, ...]
    tolerance: float = 1e-3

    @property
    def ns(self) -> np.ndarray:
        return np.array([e.n for e in self.entries])

    @property
    def norms(self) -> np.ndarray:
        return np.array([e.norm for e in self.entries])

    def converged(self) -> "GrowthSeries":
        return GrowthSeries(self.map_spec, tuple(e for e in self.entries if e.converged), self.tolerance)


def growth_table(cmap: CircleMap, n_list, tolerance: float = 1e-3, caps: Caps = CAPS) -> GrowthSeries:
    ns = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(ns, ns[1:])) or (ns and ns[0] < 1):
        raise ValueError("n_list must be positive and strictly increasing")
    entries = []
    for n in ns:
        r = circle_a_norm(cmap, n, tolerance, caps)
        entries.append(GrowthEntry(n, r.value, r.grid, r.converged, r.tail_estimate))
    return GrowthSeries(cmap.to_spec(), tuple(entries), tolerance)


@dataclass(frozen=True)
class FitResult:
    model: str
    coefficient: float
    residual: float
    exponent: float | None = None
    intercept: float | None = None
    points: int = 0
    extras: dict = field(default_factory=dict)

    def predict(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        if self.model == "constant":
            return np.full(n.shape, self.coefficient)
        if self.model == "log":
            return self.coefficient * np.log(n) + self.intercept
        return self.coefficient * n**self.exponent


def _rms(x: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(x))))


def fit_growth(series, model: str) -> FitResult:
    """Least-squares fit of norm(n) to a constant, a*log n + b, or C*n**p.

    ``series`` is a GrowthSeries (only converged entries are used) or a pair
    of arrays (ns, norms). The residual is always the RMS of log(norm) minus
    log(prediction), so residuals of different models are comparable.
    """
    if isinstance(series, GrowthSeries):
        conv = series.converged()
        ns, vals = conv.ns.astype(float), conv.norms
    else:
        ns, vals = (np.asarray(a, dtype=float) for a in series)
    if ns.size < 4:
        raise ValueError(f"need at least 4 converged entries, got {ns.size}")
    logv = np.log(vals)

    if model == "constant":
        c = float(vals.mean())
        return FitResult(model, c, _rms(logv - math.log(c)), points=ns.size)
    if model == "log":
        a, b = np.polyfit(np.log(ns), vals, 1)
        pred = a * np.log(ns) + b
        res = _rms(logv - np.log(pred)) if np.all(pred > 0) else float("inf")
        return FitResult(model, float(a), res, intercept=float(b), points=ns.size)
    if model == "power":
        p, q = np.polyfit(np.log(ns), logv, 1)
        res = _rms(logv - (p * np.log(ns) + q))
        return FitResult(model, float(math.exp(q)), res, exponent=float(p), points=ns.size)
    raise ValueError(f"unknown model {model!r}; choose from {MODELS}")
