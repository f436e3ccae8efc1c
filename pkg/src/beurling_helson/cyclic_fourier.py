"""Fourier analysis on the cyclic group T_N = {2*pi*j/N}.

Normalization: the forward transform carries the factor 1/N,

    fhat[k] = (1/N) * sum_j f(2*pi*j/N) * exp(-2*pi*i*j*k/N),

so that fhat is the transform against the *probability* measure on T_N and
the inverse transform is a plain sum over characters. This differs from
``numpy.fft.fft`` (which carries no factor on the forward side); every
routine here converts explicitly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable

import numpy as np


def _frozen(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError("expected a one-dimensional sequence")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CyclicFunction:
    """Complex function on T_N; ``values[j]`` is the value at 2*pi*j/N."""

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.values)
        if arr.size < 1:
            raise ValueError("order must be at least 1")
        object.__setattr__(self, "values", arr)

    @property
    def order(self) -> int:
        return self.values.size

    @classmethod
    def character(cls, k: int, order: int) -> "CyclicFunction":
        j = np.arange(order)
        return cls(np.exp(2j * np.pi * ((k * j) % order) / order))

    def __mul__(self, other: "CyclicFunction") -> "CyclicFunction":
        _check_orders(self, other)
        return CyclicFunction(self.values * other.values)

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.values.imag) <= tol))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients indexed by k in Z_N = {0, ..., N-1}."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.coeffs)
        if arr.size < 1:
            raise ValueError("order must be at least 1")
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return self.coeffs.size

    def l1(self) -> float:
        return float(np.abs(self.coeffs).sum())

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "re", "im"])
        for k, c in enumerate(self.coeffs):
            writer.writerow([k, repr(float(c.real)), repr(float(c.imag))])
        return buf.getvalue()


def _check_orders(f1, f2) -> None:
    if f1.order != f2.order:
        raise ValueError(f"order mismatch: {f1.order} != {f2.order}")


def dft(f: CyclicFunction) -> Spectrum:
    # pocketfft has O(N log N) paths for every N, primes included
    return Spectrum(np.fft.fft(f.values) / f.order)


def idft(s: Spectrum) -> CyclicFunction:
    return CyclicFunction(np.fft.ifft(s.coeffs) * s.order)


def lp_norm(coeffs: np.ndarray, p: float) -> float:
    a = np.abs(coeffs)
    if p == 1:
        return float(a.sum())
    if np.isinf(p):
        return float(a.max())
    scale = a.max()
    if scale == 0:
        return 0.0
    return float(scale * ((a / scale) ** p).sum() ** (1.0 / p))


def a_norm(f: CyclicFunction, p: float = 1) -> float:
    """A_p(T_N) norm: the l^p norm of the spectrum. ``p=1`` gives A(T_N)."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return lp_norm(dft(f).coeffs, p)


def l2_norm(f: CyclicFunction) -> float:
    """L^2 norm against the normalized counting measure."""
    return float(np.sqrt(np.mean(np.abs(f.values) ** 2)))


def convolve(f1: CyclicFunction, f2: CyclicFunction) -> CyclicFunction:
    """(f1 * f2)(t) = (1/N) sum_x f1(x) f2(t - x); its spectrum is fhat1 * fhat2."""
    _check_orders(f1, f2)
    s1, s2 = dft(f1), dft(f2)
    return idft(Spectrum(s1.coeffs * s2.coeffs))


def fold_circle_series(
    coeff_pairs: Iterable[tuple[int, complex]], N: int
) -> Spectrum:
    """Restrict sum_nu c_nu e^{i nu t} to T_N.

    Frequencies collapse onto their residue class mod N, so the result is
    the T_N spectrum of the restricted function and its l1 norm never
    exceeds sum |c_nu|.
    """
    if N < 1:
        raise ValueError("N must be positive")
    out = np.zeros(N, dtype=complex)
    for nu, c in coeff_pairs:
        out[int(nu) % N] += c
    return Spectrum(out)
