"""Sections of subsets of finite product probability spaces.

For E in X_1 x ... x X_m write delta(E) = min(mu(E), 1 - mu(E)). If every
axis-parallel section of E has delta at most d0 then delta(E) <= 3**(m-1) d0.
This module computes every quantity in that statement exhaustively, and
replays the two-factor argument step by step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .config import TOL


def delta_of(mu):
    return np.minimum(mu, 1.0 - mu)


@dataclass(frozen=True, eq=False)
class FiniteProductSpace:
    sizes: tuple[int, ...]
    weights: tuple[np.ndarray, ...] = field(default=None)

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or min(sizes) < 1:
            raise ValueError("need at least one factor, each of size >= 1")
        if self.weights is None:
            ws = tuple(np.full(s, 1.0 / s) for s in sizes)
        else:
            ws = tuple(np.asarray(w, dtype=float) for w in self.weights)
            if len(ws) != len(sizes):
                raise ValueError("one weight vector per factor")
            for s, w in zip(sizes, ws):
                if w.shape != (s,) or np.any(w < 0):
                    raise ValueError("weights must be non-negative, one per point")
                if abs(w.sum() - 1.0) > TOL.weights_sum:
                    raise ValueError("each weight vector must sum to 1")
        for w in ws:
            w.setflags(write=False)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def uniform(cls, *sizes: int) -> "FiniteProductSpace":
        return cls(tuple(sizes))

    @property
    def m(self) -> int:
        return len(self.sizes)

    @property
    def is_uniform(self) -> bool:
        return all(np.all(w == w[0]) for w in self.weights)


@dataclass(frozen=True)
class Section:
    axis: int
    members: np.ndarray
    measure: float
    delta: float


@dataclass(frozen=True, eq=False)
class ProductSubset:
    space: FiniteProductSpace
    membership: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.membership, dtype=bool)
        if arr.shape != self.space.sizes:
            raise ValueError(f"membership shape {arr.shape} != {self.space.sizes}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "membership", arr)

    @property
    def measure(self) -> float:
        out = self.membership.astype(float)
        for w in reversed(self.space.weights):
            out = out @ w
        return float(out)

    @property
    def delta(self) -> float:
        return float(delta_of(self.measure))

    def complement(self) -> "ProductSubset":
        return ProductSubset(self.space, ~self.membership)

    def section_measures(self, axis: int) -> np.ndarray:
        """mu_axis of every axis-section, indexed by the remaining coordinates."""
        _check_axis(self, axis)
        return np.tensordot(self.membership.astype(float), self.space.weights[axis], axes=([axis], [0]))


def _check_axis(E: ProductSubset, axis: int) -> None:
    if not 0 <= axis < E.space.m:
        raise IndexError(f"axis {axis} out of range for m={E.space.m}")


def section(E: ProductSubset, axis: int, fixed) -> Section:
    """{x_axis : (fixed with x_axis inserted) in E}; ``fixed`` lists the other m-1 coordinates."""
    _check_axis(E, axis)
    fixed = tuple(int(c) for c in fixed)
    if len(fixed) != E.space.m - 1:
        raise ValueError(f"need {E.space.m - 1} fixed coordinates")
    index = fixed[:axis] + (slice(None),) + fixed[axis:]
    members = E.membership[index]
    mu = float(members.astype(float) @ E.space.weights[axis])
    return Section(axis, members.copy(), mu, float(delta_of(mu)))


def max_section_delta(E: ProductSubset, axis: int | None = None) -> float:
    axes = range(E.space.m) if axis is None else [axis]
    return float(max(delta_of(E.section_measures(j)).max() for j in axes))


@dataclass(frozen=True)
class Lemma3Result:
    delta: float
    delta0: float
    bound: float
    holds: bool

    @property
    def slack(self) -> float:
        return self.bound - self.delta


def lemma3_bound_check(E: ProductSubset) -> Lemma3Result:
    d = E.delta
    d0 = max_section_delta(E)
    bound = 3 ** (E.space.m - 1) * d0
    return Lemma3Result(d, d0, bound, bool(d <= bound + TOL.inequality))


def merge_leading(E: ProductSubset, k: int) -> ProductSubset:
    """View E in X_1 x ... x X_m as a subset of (X_1 x ... x X_k) x X_{k+1} x ... x X_m."""
    sp = E.space
    if not 1 <= k <= sp.m:
        raise ValueError("k out of range")
    w = sp.weights[0]
    for wj in sp.weights[1:k]:
        w = np.outer(w, wj).ravel()
    sizes = (int(np.prod(sp.sizes[:k])),) + sp.sizes[k:]
    space = FiniteProductSpace(sizes, (w,) + sp.weights[k:])
    return ProductSubset(space, E.membership.reshape(sizes))


# ---------------------------------------------------------------------------
# batched sweeps (uniform weights)


@dataclass(frozen=True)
class SweepSummary:
    label: str
    instances: int
    violations: int
    worst_slack: float
    worst_ratio: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _batch_lemma3(batch: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """delta(E) and max section delta for a stack of uniform-weight subsets."""
    b = batch.astype(float)
    axes = tuple(range(1, m + 1))
    d = delta_of(b.mean(axis=axes))
    d0 = np.zeros(b.shape[0])
    for j in axes:
        sec = delta_of(b.mean(axis=j)).reshape(b.shape[0], -1).max(axis=1)
        d0 = np.maximum(d0, sec)
    return d, d0


def _summarize(label: str, d: np.ndarray, d0: np.ndarray, m: int) -> SweepSummary:
    bound = 3 ** (m - 1) * d0
    slack = bound - d
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(d0 > 0, d / d0, np.where(d > 0, np.inf, 0.0))
    return SweepSummary(
        label=label,
        instances=int(d.size),
        violations=int(np.count_nonzero(slack < -TOL.inequality)),
        worst_slack=float(slack.min()),
        worst_ratio=float(ratio.max()),
    )


def exhaustive_sweep(n1: int, n2: int) -> SweepSummary:
    """Check the two-factor bound on every subset of an n1 x n2 uniform grid."""
    cells = n1 * n2
    if cells > 24:
        raise ValueError("exhaustive sweep limited to 2**24 subsets")
    codes = np.arange(1 << cells, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(cells)) & 1).astype(bool)
    d, d0 = _batch_lemma3(bits.reshape(-1, n1, n2), 2)
    return _summarize(f"exhaustive {n1}x{n2}", d, d0, 2)


def random_sweep(sizes, count: int, seed: int, chunk: int = 20000) -> SweepSummary:
    sizes = tuple(int(s) for s in sizes)
    rng = np.random.default_rng(seed)
    ds, d0s = [], []
    remaining = count
    while remaining > 0:
        k = min(chunk, remaining)
        p = rng.random((k,) + (1,) * len(sizes))
        batch = rng.random((k,) + sizes) < p
        d, d0 = _batch_lemma3(batch, len(sizes))
        ds.append(d)
        d0s.append(d0)
        remaining -= k
    label = "random " + "x".join(map(str, sizes))
    return _summarize(label, np.concatenate(ds), np.concatenate(d0s), len(sizes))


# ---------------------------------------------------------------------------
# two-factor proof trace


@dataclass(frozen=True)
class InequalityTrace:
    delta0: float
    trivial: bool
    alpha1: float = float("nan")
    alpha2: float = float("nan")
    # each entry: name -> (lhs, rhs), asserting lhs <= rhs
    steps: dict[str, tuple[float, float]] = field(default_factory=dict)
    case: str = ""

    @property
    def holds(self) -> bool:
        return all(lhs <= rhs + TOL.inequality for lhs, rhs in self.steps.values())

    @property
    def worst_slack(self) -> float:
        return min((rhs - lhs for lhs, rhs in self.steps.values()), default=float("inf"))


def two_factor_inequality_trace(E: ProductSubset, delta0: float | None = None) -> InequalityTrace:
    """Replay the two-factor argument for E in X_1 x X_2.

    With d = delta0, split X_1 into rows whose section is small (mu <= d) or
    large (mu >= 1 - d), likewise X_2, and evaluate every intermediate
    inequality plus the closing dichotomy on alpha_1.
    """
    if E.space.m != 2:
        raise ValueError("trace is defined for two factors")
    d = max_section_delta(E) if delta0 is None else float(delta0)
    if d >= 0.5:
        return InequalityTrace(delta0=d, trivial=True, case="delta0 >= 1/2: bound is trivial")
    if max_section_delta(E) > d + TOL.inequality:
        raise ValueError("some section has delta above delta0")

    w1, w2 = E.space.weights
    ind = E.membership.astype(float)
    mu2_rows = ind @ w2  # mu_2(E^{x1}) for each x1
    mu1_cols = w1 @ ind  # mu_1(E^{x2}) for each x2
    big1 = mu2_rows >= 1 - d - TOL.inequality
    big2 = mu1_cols >= 1 - d - TOL.inequality
    small2 = ~big2
    a1 = float(w1[big1].sum())
    a2 = float(w2[big2].sum())

    def mass(rows, cols):
        return float(w1[rows] @ ind[np.ix_(rows, cols)] @ w2[cols]) if rows.any() and cols.any() else 0.0

    all1 = np.ones_like(big1)
    big_small = mass(big1, small2)
    all_small = mass(all1, small2)
    big_big = mass(big1, big2)
    big_all = mass(big1, np.ones_like(big2))

    steps = {
        "big_small_within_small_cols": (big_small, all_small),
        "small_cols_mass": (float(w2[small2] @ mu1_cols[small2]), d * (1 - a2)),
        "big_big_mass": (big_big, a1 * a2),
        "big_rows_mass_upper": (big_all, d * (1 - a2) + a1 * a2),
        "big_rows_mass_lower": ((1 - d) * a1, float(w1[big1] @ mu2_rows[big1])),
        "alpha1_bound": ((1 - d) * a1, d * (1 - a2) + a1 * a2),
        "alpha2_bound": ((1 - d) * a2, d * (1 - a1) + a1 * a2),
        "sum": (a1 * (1 - a2) + a2 * (1 - a1), 2 * d),
    }
    if a1 <= 2 * d + TOL.inequality:
        case = "alpha1 <= 2*delta"
        steps["measure_small"] = (E.measure, 3 * d)
    elif a1 >= 1 - 2 * d - TOL.inequality:
        case = "alpha1 >= 1 - 2*delta"
        steps["measure_large"] = (1 - 3 * d, E.measure)
    else:
        case = "dichotomy violated"
        steps["dichotomy"] = (min(a1, 1 - a1), 2 * d)
    return InequalityTrace(d, False, a1, a2, steps, case)


def all_sections(E: ProductSubset):
    """Iterate (axis, fixed coordinates, Section) over every section; for tests and small sets."""
    for axis in range(E.space.m):
        others = [range(s) for j, s in enumerate(E.space.sizes) if j != axis]
        for fixed in itertools.product(*others):
            yield axis, fixed, section(E, axis, fixed)
