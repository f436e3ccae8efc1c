"""Continuous self-maps of the circle, represented by lifts.

A map is stored as ``lift(t) = winding * t + periodic(t)`` with ``periodic``
2*pi-periodic. Keeping the winding separate makes subtracting the linear
part an exact operation, which later code relies on (four-term combinations
of a linear lift cancel to exactly zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .config import CAPS
from .cyclic_fourier import CyclicFunction

TWO_PI = 2.0 * np.pi
FAMILIES = ("linear", "piecewise_linear", "smooth", "custom")

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class CircleMap:
    winding: int
    periodic: ArrayFn
    family: str
    lipschitz: float
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    def lift(self, t):
        t = np.asarray(t, dtype=float)
        s = np.mod(t, TWO_PI)
        return self.winding * t + self.periodic(s)

    def periodic_part(self, t) -> np.ndarray:
        return self.periodic(np.mod(np.asarray(t, dtype=float), TWO_PI))

    @property
    def is_linear(self) -> bool:
        return self.family == "linear"

    def winding_defect(self) -> float:
        """|lift(2pi) - lift(0) - 2pi*winding|; zero up to rounding."""
        ends = self.lift(np.array([0.0, TWO_PI]))
        return float(abs(ends[1] - ends[0] - TWO_PI * self.winding))

    def max_increment(self, grid: int | None = None) -> float:
        grid = grid or CAPS.continuity_grid
        t = np.linspace(0.0, TWO_PI, grid + 1)
        return float(np.max(np.abs(np.diff(self.lift(t)))))

    def check_continuity(self, grid: int | None = None) -> bool:
        grid = grid or CAPS.continuity_grid
        h = TWO_PI / grid
        return self.max_increment(grid) <= self.lipschitz * h * (1 + 1e-9) + 1e-12

    def to_spec(self) -> dict[str, Any]:
        return {"family": self.family, **self.params}


def make_linear(nu: int, c: float = 0.0) -> CircleMap:
    c = float(c)
    return CircleMap(
        winding=int(nu),
        periodic=lambda s: np.full(np.shape(s), c),
        family="linear",
        lipschitz=float(abs(nu)),
        params={"winding": int(nu), "offset": c},
    )


def make_smooth(nu: int, amplitude: float) -> CircleMap:
    """The C^2 family t -> nu*t + a*sin(t); nonlinear iff a != 0."""
    a = float(amplitude)
    return CircleMap(
        winding=int(nu),
        periodic=lambda s: a * np.sin(s),
        family="smooth",
        lipschitz=float(abs(nu) + abs(a)),
        params={"winding": int(nu), "amplitude": a},
    )


def _integer_winding(delta: float, what: str) -> int:
    nu = round(delta / TWO_PI)
    if abs(delta - TWO_PI * nu) > 1e-9 * max(1.0, abs(delta)):
        raise ValueError(f"{what}: lift(2pi) - lift(0) = {delta!r} is not in 2*pi*Z")
    return int(nu)


def make_piecewise_linear(
    breaks,
    slopes=None,
    *,
    values=None,
    start: float = 0.0,
) -> CircleMap:
    """Piecewise-linear lift on [0, 2pi].

    Give either the slope of each piece (with the starting value) or the
    lift value at every break; passing both requires them to agree.
    """
    b = np.asarray(breaks, dtype=float)
    if b.ndim != 1 or b.size < 2:
        raise ValueError("need at least two breaks")
    if not np.all(np.diff(b) > 0):
        raise ValueError("breaks must be strictly increasing")
    if abs(b[0]) > 1e-12 or abs(b[-1] - TWO_PI) > 1e-12:
        raise ValueError("breaks must start at 0 and end at 2*pi")
    b[0], b[-1] = 0.0, TWO_PI

    if values is None and slopes is None:
        raise ValueError("give slopes or values")
    if values is not None:
        v = np.asarray(values, dtype=float)
        if v.shape != b.shape:
            raise ValueError("one value per break required")
        if slopes is not None:
            implied = np.diff(v) / np.diff(b)
            if not np.allclose(implied, np.asarray(slopes, float), rtol=1e-12, atol=1e-12):
                raise ValueError("slopes and values disagree: lift would be discontinuous")
    else:
        s = np.asarray(slopes, dtype=float)
        if s.size != b.size - 1:
            raise ValueError("one slope per piece required")
        v = float(start) + np.concatenate([[0.0], np.cumsum(s * np.diff(b))])

    nu = _integer_winding(v[-1] - v[0], "piecewise-linear map")
    slopes_out = np.diff(v) / np.diff(b)
    knots, vals = b.copy(), v.copy()

    def periodic(s):
        return np.interp(s, knots, vals) - nu * s

    return CircleMap(
        winding=nu,
        periodic=periodic,
        family="piecewise_linear",
        lipschitz=float(np.max(np.abs(slopes_out))),
        params={"breaks": knots.tolist(), "values": vals.tolist()},
    )


def make_tent() -> CircleMap:
    """lift(0)=0, lift(pi)=2pi, lift(2pi)=2pi: winding 1, slopes 2 then 0."""
    return make_piecewise_linear([0.0, np.pi, TWO_PI], values=[0.0, TWO_PI, TWO_PI])


def make_custom(
    lift: ArrayFn,
    lipschitz: float | None = None,
    params: dict[str, Any] | None = None,
) -> CircleMap:
    """Wrap an arbitrary vectorized lift defined on [0, 2pi]."""
    ends = np.asarray(lift(np.array([0.0, TWO_PI])), dtype=float)
    nu = _integer_winding(float(ends[1] - ends[0]), "custom map")

    def periodic(s):
        return np.asarray(lift(s), dtype=float) - nu * s

    if lipschitz is None:
        grid = CAPS.continuity_grid
        t = np.linspace(0.0, TWO_PI, grid + 1)
        lipschitz = float(np.max(np.abs(np.diff(lift(t))))) / (TWO_PI / grid)
    cmap = CircleMap(nu, periodic, "custom", float(lipschitz), dict(params or {}))
    if not cmap.check_continuity():
        raise ValueError("custom lift violates its Lipschitz budget (discontinuous?)")
    return cmap


def make_harmonic(nu: int, harmonics, offset: float = 0.0) -> CircleMap:
    """nu*t + offset + sum a_k cos(kt) + b_k sin(kt), harmonics = [(k, a_k, b_k), ...]."""
    terms = [(int(k), float(a), float(b)) for k, a, b in harmonics]

    def lift(t):
        t = np.asarray(t, dtype=float)
        out = nu * t + offset
        for k, a, b in terms:
            out = out + a * np.cos(k * t) + b * np.sin(k * t)
        return out

    lip = abs(nu) + sum(k * math.hypot(a, b) for k, a, b in terms)
    return make_custom(
        lift,
        lipschitz=lip,
        params={"winding": int(nu), "offset": float(offset), "harmonics": [list(h) for h in terms]},
    )


def map_from_spec(spec: dict[str, Any]) -> CircleMap:
    """Build a map from a config record such as ``{"family": "smooth", "winding": 1, "amplitude": 0.5}``."""
    spec = dict(spec)
    family = spec.pop("family", None)
    if family == "linear":
        return make_linear(spec.get("winding", 1), spec.get("offset", 0.0))
    if family == "smooth":
        return make_smooth(spec.get("winding", 1), spec.get("amplitude", 0.5))
    if family == "tent":
        return make_tent()
    if family == "piecewise_linear":
        return make_piecewise_linear(
            spec["breaks"], spec.get("slopes"), values=spec.get("values"), start=spec.get("start", 0.0)
        )
    if family == "custom":
        return make_harmonic(spec.get("winding", 0), spec.get("harmonics", []), spec.get("offset", 0.0))
    raise ValueError(f"unknown map family {family!r}")


def grid_points(N: int) -> np.ndarray:
    return TWO_PI * np.arange(N) / N


def sample_lift(cmap: CircleMap, N: int) -> np.ndarray:
    if N < 1:
        raise ValueError("N must be positive")
    return cmap.lift(grid_points(N))


def exp_sample(cmap: CircleMap, n: int, N: int) -> CyclicFunction:
    """e^{i n lift} restricted to T_N."""
    return CyclicFunction(np.exp(1j * n * sample_lift(cmap, N)))
