"""Translation-invariant operators on l1(Z) as convolution kernels.

The operator norm of convolution with u on l1 is sum |u_k|, and powers of
the operator are self-convolutions of u. So ||U^n|| equals the A(T) norm of
the n-th power of the symbol sum u_k e^{ikt}. Kernels here are finitely
supported; anything discarded in producing them is carried as ``tail_mass``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circle_maps import CircleMap, sample_lift
from .config import CAPS, Caps


@dataclass(frozen=True, eq=False)
class Kernel:
    """Weights ``weights[i]`` sit at offset ``start + i``."""

    start: int
    weights: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        w = np.array(self.weights, dtype=complex)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-D sequence")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "start", int(self.start))

    @classmethod
    def delta(cls, offset: int = 0, weight: complex = 1.0) -> "Kernel":
        return cls(offset, [weight])

    @classmethod
    def from_pairs(cls, pairs) -> "Kernel":
        pairs = [(int(k), complex(w)) for k, w in pairs]
        lo = min(k for k, _ in pairs)
        hi = max(k for k, _ in pairs)
        w = np.zeros(hi - lo + 1, dtype=complex)
        for k, c in pairs:
            w[k - lo] += c
        return cls(lo, w)

    @property
    def offsets(self) -> np.ndarray:
        return self.start + np.arange(self.weights.size)

    @property
    def l1(self) -> float:
        return float(np.abs(self.weights).sum())

    @property
    def width(self) -> int:
        return self.weights.size

    def as_dict(self) -> dict[int, complex]:
        return {int(k): complex(w) for k, w in zip(self.offsets, self.weights) if w != 0}

    def trimmed(self, threshold: float = 0.0) -> "Kernel":
        """Drop weights with modulus <= threshold (zeros by default); dropped mass joins the tail."""
        keep = np.abs(self.weights) > threshold
        if not keep.any():
            return Kernel(0, [0.0], self.tail_mass + self.l1)
        dropped = float(np.abs(self.weights[~keep]).sum())
        idx = np.flatnonzero(keep)
        lo, hi = idx[0], idx[-1] + 1
        w = np.where(keep, self.weights, 0)[lo:hi]
        return Kernel(self.start + lo, w, self.tail_mass + dropped)


def symbol_values(u: Kernel, M: int) -> np.ndarray:
    """u(t) = sum_k u_k e^{ikt} on T_M."""
    t = 2 * np.pi * np.arange(M) / M
    return np.exp(1j * np.outer(t, u.offsets)) @ u.weights


def kernel_from_map(cmap: CircleMap, M: int, prune: float = 1e-15) -> Kernel:
    """T_M coefficients of e^{i phi} placed at representatives k in (-M/2, M/2].

    ``tail_mass`` collects the pruned weights plus the change in A-norm from
    doubling the grid, a proxy for aliasing left in the T_M coefficients.
    """
    if M < 1:
        raise ValueError("M must be positive")
    coeffs = np.fft.fft(np.exp(1j * sample_lift(cmap, M))) / M
    lo = -((M - 1) // 2)
    reps = np.arange(lo, lo + M)
    dense = coeffs[reps % M]
    finer = float(np.abs(np.fft.fft(np.exp(1j * sample_lift(cmap, 2 * M)))).sum() / (2 * M))
    alias = abs(finer - float(np.abs(coeffs).sum()))
    return Kernel(lo, dense, alias).trimmed(prune)


def convolve_kernels(a: Kernel, b: Kernel) -> Kernel:
    """(a*b)_k = sum_j a_j b_{k-j}, computed directly on the supports."""
    w = np.convolve(a.weights, b.weights)
    tail = a.tail_mass * b.l1 + b.tail_mass * a.l1 + a.tail_mass * b.tail_mass
    return Kernel(a.start + b.start, w, tail)


@dataclass(frozen=True)
class PowerNorms:
    norms: tuple[float, ...]
    widths: tuple[int, ...]
    tails: tuple[float, ...]
    skipped: str | None = None

    def rows(self):
        for n, (v, w, t) in enumerate(zip(self.norms, self.widths, self.tails)):
            yield n, v, w, t


def power_norms(u: Kernel, n_max: int, caps: Caps = CAPS) -> PowerNorms:
    """||U^n|| = l1(u^{*n}) for n = 0..n_max; stops early with ``skipped`` if support outgrows the cap."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    power = Kernel.delta(0, 1.0)
    norms, widths, tails = [1.0], [1], [0.0]
    for n in range(1, n_max + 1):
        if power.width + u.width - 1 > caps.kernel_support:
            return PowerNorms(tuple(norms), tuple(widths), tuple(tails), skipped=f"support cap reached at n={n}")
        power = convolve_kernels(power, u)
        norms.append(power.l1)
        widths.append(power.width)
        tails.append(power.tail_mass)
    return PowerNorms(tuple(norms), tuple(widths), tuple(tails))
