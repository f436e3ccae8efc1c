"""Minimum modulus versus A-norm on Z_N for prime N.

For a real mean-zero f on T_N, min|f| / ||f||_A is at most 1 and, by
Green-Konyagin, at most c * ((log log N) / log N)**(1/3) for large prime N
with an unknown constant c. Nothing here asserts that bound; we tabulate
extremal ratios next to the envelope so the trend can be inspected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .cyclic_fourier import CyclicFunction, a_norm, dft

STRATEGIES = ("random_sets", "intervals", "quadratic_residues")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    return all(n % p for p in range(3, r + 1, 2))


def envelope(N: int) -> float | None:
    """(log log N / log N)^(1/3); defined only where log log N > 0."""
    if N < 17:
        return None
    return (math.log(math.log(N)) / math.log(N)) ** (1.0 / 3.0)


def alt_envelope(N: int) -> float | None:
    """1 / log N, the conjectured optimal rate."""
    return None if N < 17 else 1.0 / math.log(N)


def gk_ratio(f: CyclicFunction) -> float:
    if not f.is_real(1e-12):
        raise ValueError("f must be real-valued")
    v = f.values.real
    if abs(v.mean()) > TOL.mean_zero:
        raise ValueError(f"f must have mean zero (mean = {v.mean():.3g})")
    norm = a_norm(f, 1)
    if norm == 0.0:
        raise ValueError("ratio undefined for f == 0")
    return float(np.abs(v).min()) / norm


def indicator(E, N: int) -> np.ndarray:
    mask = np.zeros(N, dtype=bool)
    mask[np.asarray(list(E), dtype=int) % N] = True
    return mask


@dataclass(frozen=True)
class CharDelta:
    delta: float
    a_norm: float
    ratio: float
    measure: float


def char_delta_ratio(mask: np.ndarray) -> CharDelta:
    """delta(E), ||1_E||_{A(T_N)} and their ratio; mu(E) is read off as the zeroth coefficient."""
    mask = np.asarray(mask, dtype=bool)
    coeffs = dft(CyclicFunction(mask.astype(float))).coeffs
    mu = float(coeffs[0].real)
    norm = float(np.abs(coeffs).sum())
    d = min(mu, 1.0 - mu)
    return CharDelta(d, norm, d / norm if norm > 0 else 0.0, mu)


def witness_hex(mask: np.ndarray) -> str:
    """Bit j of the integer is membership of j."""
    value = sum(1 << int(j) for j in np.flatnonzero(mask))
    return format(value, "x")


def mask_from_hex(code: str, N: int) -> np.ndarray:
    value = int(code, 16)
    return np.array([(value >> j) & 1 for j in range(N)], dtype=bool)


@dataclass(frozen=True)
class GKRecord:
    N: int
    strategy: str
    ratio: float
    delta: float
    a_norm: float
    witness: str
    candidates: int

    @property
    def envelope(self) -> float | None:
        return envelope(self.N)

    @property
    def alt_envelope(self) -> float | None:
        return alt_envelope(self.N)


def _candidates(N: int, strategy: str, trials: int, seed: int):
    if strategy == "intervals":
        # {a, a+1, ..., b} for 0 <= a < b <= N-1
        for a in range(N):
            for b in range(a + 1, N):
                m = np.zeros(N, dtype=bool)
                m[a : b + 1] = True
                yield m
    elif strategy == "quadratic_residues":
        squares = {(x * x) % N for x in range(1, N)}
        qr = indicator(squares, N)
        nr = ~qr
        nr[0] = False
        for base in (qr, nr):
            for with_zero in (False, True):
                m = base.copy()
                m[0] = with_zero
                yield m
    elif strategy == "random_sets":
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            p = rng.random()
            yield rng.random(N) < p
    else:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")


def _witness_key(mask: np.ndarray) -> tuple[int, ...]:
    return tuple(int(j) for j in np.flatnonzero(mask))


def extremal_search(N: int, trials: int = 1000, strategy: str = "random_sets", seed: int = 0) -> GKRecord:
    """Maximize delta(E) / ||1_E||_A over the strategy's candidate family.

    Ties go to the lexicographically smallest sorted element list.
    """
    if not is_prime(N):
        raise ValueError(f"N must be prime, got {N}")
    best = None
    count = 0
    for mask in _candidates(N, strategy, trials, seed):
        count += 1
        cd = char_delta_ratio(mask)
        key = (-cd.ratio, _witness_key(mask))
        if best is None or key < best[0]:
            best = (key, mask, cd)
    _, mask, cd = best
    return GKRecord(N, strategy, cd.ratio, cd.delta, cd.a_norm, witness_hex(mask), count)


def trend_table(primes, strategy: str, trials: int, seed: int) -> list[GKRecord]:
    return [extremal_search(p, trials, strategy, seed) for p in primes]
