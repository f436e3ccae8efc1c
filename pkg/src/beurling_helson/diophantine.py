"""Dirichlet simultaneous approximation by a certified linear scan over Q.

Given reals a_1..a_N and an integer D >= 1, pigeonhole guarantees some
1 <= Q <= D**N with |a_j Q - P_j| <= 1/D for all j. We return the smallest
such Q. The scan is capped by an explicit budget so that small D can be
used at desk scale; when the cap is hit first, the best Q seen is returned
with ``budget_exhausted`` set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOL

_CHUNK = 1 << 14


def round_half_away(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


@dataclass(frozen=True)
class SimultaneousApprox:
    Q: int
    numerators: tuple[int, ...]
    max_error: float
    budget_exhausted: bool = False


@dataclass(frozen=True)
class ApproxCheck:
    ok: bool
    recomputed_error: float
    error_within_bound: bool
    q_in_range: bool
    error_consistent: bool


def _scan_limit(n_alphas: int, D: int, budget: int) -> int:
    # D**N can be astronomically large; compare as Python ints
    return int(min(D ** n_alphas, budget))


def simultaneous_approx(alphas, D: int, budget: int) -> SimultaneousApprox:
    a = np.asarray(alphas, dtype=float).ravel()
    if a.size == 0:
        raise ValueError("alphas must be non-empty")
    if D < 1:
        raise ValueError("D must be >= 1")
    if budget < 1:
        raise ValueError("budget must be >= 1")

    bound = 1.0 / D + TOL.dirichlet
    limit = _scan_limit(a.size, D, budget)
    best_q, best_err = 1, np.inf

    for start in range(1, limit + 1, _CHUNK):
        q = np.arange(start, min(start + _CHUNK, limit + 1), dtype=float)
        prod = np.outer(q, a)
        err = np.max(np.abs(prod - round_half_away(prod)), axis=1)
        hits = np.flatnonzero(err <= bound)
        if hits.size:
            Q = int(q[hits[0]])
            return _result(a, Q, exhausted=False)
        i = int(np.argmin(err))
        if err[i] < best_err:
            best_q, best_err = int(q[i]), float(err[i])

    return _result(a, best_q, exhausted=True)


def _result(a: np.ndarray, Q: int, exhausted: bool) -> SimultaneousApprox:
    prod = a * Q
    P = round_half_away(prod)
    return SimultaneousApprox(
        Q=Q,
        numerators=tuple(int(p) for p in P),
        max_error=float(np.max(np.abs(prod - P))),
        budget_exhausted=exhausted,
    )


def verify_approx(alphas, D: int, result: SimultaneousApprox) -> ApproxCheck:
    """Recompute the error of ``result`` from scratch and check both Dirichlet bounds."""
    a = np.asarray(alphas, dtype=float).ravel()
    P = np.asarray(result.numerators, dtype=float)
    if P.shape != a.shape:
        return ApproxCheck(False, float("inf"), False, False, False)
    err = float(np.max(np.abs(a * result.Q - P)))
    within = err <= 1.0 / D + TOL.dirichlet
    in_range = 1 <= result.Q <= D ** a.size
    consistent = abs(err - result.max_error) <= 1e-12 * max(1.0, err)
    return ApproxCheck(within and in_range and consistent, err, within, in_range, consistent)
