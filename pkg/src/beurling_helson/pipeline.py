"""Rational approximants of a circle map on T_N and the certificates built on them.

Given a map phi and a grid T_N, Dirichlet approximation yields a common
denominator Q and integers P_j with phi(2 pi j/N) ~ 2 pi P_j / Q. From this
sampling we build the level set

    E_N = {(x, y, z) : P(x) + P(z-x) - P(y) - P(z-y) = 0 mod Q}

(indices mod N) and check, on concrete data, each inequality that links the
A(T_N) norms of e^{in phi}, the measure of E_N and the deltas of its sections.

The approximation parameter D is independent of N. Bounds that classically
read 2*pi appear here as 2*pi*N/D and coincide with the classical ones when
D == N. Where a running maximum Theta(N**N) would be needed we use the
directly computed M = max_{n<Q} ||e^{in phi_N}||_{A(T_N)}, which is the
quantity the averaging argument actually consumes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .circle_maps import TWO_PI, CircleMap, grid_points, sample_lift
from .config import CAPS, TOL, Caps
from .cyclic_fourier import CyclicFunction, a_norm
from .diophantine import SimultaneousApprox, simultaneous_approx, verify_approx
from .section_measure import FiniteProductSpace, ProductSubset, delta_of

_BATCH = 1 << 20  # complex entries per vectorized block


class BudgetExhausted(RuntimeError):
    """Dirichlet scan hit its budget before reaching the 1/D error bound."""

    def __init__(self, partial: SimultaneousApprox, D: int, budget: int):
        super().__init__(
            f"no Q <= {budget} achieves error <= 1/{D}; best Q={partial.Q} "
            f"with error {partial.max_error:.3g}"
        )
        self.partial = partial


# ---------------------------------------------------------------------------
# phi_N


@dataclass(frozen=True, eq=False)
class RationalSampling:
    order: int
    Q: int
    numerators: np.ndarray
    sup_error: float
    D: int

    def __post_init__(self):
        P = np.asarray(self.numerators)
        if P.shape != (self.order,):
            raise ValueError("one numerator per grid point")
        if self.Q < 1:
            raise ValueError("Q must be positive")
        P = P.copy()
        P.setflags(write=False)
        object.__setattr__(self, "numerators", P)

    @property
    def exact(self) -> bool:
        return np.issubdtype(self.numerators.dtype, np.integer)

    @property
    def sup_bound(self) -> float:
        return TWO_PI / (self.D * self.Q)

    def values(self) -> np.ndarray:
        return TWO_PI * self.numerators.astype(float) / self.Q

    def phases(self, ns) -> np.ndarray:
        """n * phi_N on the grid for each n, reduced mod 2pi exactly when numerators are integers."""
        ns = np.asarray(ns, dtype=np.int64)
        if self.exact:
            r = np.mod(np.multiply.outer(ns, self.numerators.astype(np.int64)), self.Q)
            return TWO_PI * r / self.Q
        return np.multiply.outer(ns.astype(float), self.values())


def build_phi_N(cmap: CircleMap, N: int, D: int, budget: int) -> RationalSampling:
    lift = sample_lift(cmap, N)
    alphas = lift / TWO_PI
    approx = simultaneous_approx(alphas, D, budget)
    if approx.budget_exhausted:
        raise BudgetExhausted(approx, D, budget)
    if not verify_approx(alphas, D, approx).ok:
        raise ArithmeticError("Dirichlet certificate failed to re-verify")
    P = np.array(approx.numerators, dtype=np.int64)
    sup_error = float(np.max(np.abs(lift - TWO_PI * P / approx.Q)))
    return RationalSampling(N, approx.Q, P, sup_error, D)


def rational_sampling_from_fixture(data: dict[str, Any], cmap: CircleMap | None = None) -> RationalSampling:
    """Load phi_N from ``{"N", "Q", "D", "numerators"}``; non-integer numerators are kept as floats."""
    raw = list(data["numerators"])
    if all(float(p).is_integer() for p in raw):
        P = np.array([int(p) for p in raw], dtype=np.int64)
    else:
        P = np.array(raw, dtype=float)
    N, Q, D = int(data.get("N", len(raw))), int(data["Q"]), int(data.get("D", 1))
    if cmap is not None:
        sup = float(np.max(np.abs(sample_lift(cmap, N) - TWO_PI * P.astype(float) / Q)))
    else:
        sup = float(data.get("sup_error", 0.0))
    return RationalSampling(N, Q, P, sup, D)


# ---------------------------------------------------------------------------
# norms of exponentials


def exp_norms(phases: np.ndarray) -> np.ndarray:
    """A(T_N) norms of exp(i * phases[r]) for each row r."""
    phases = np.atleast_2d(phases)
    N = phases.shape[1]
    out = np.empty(phases.shape[0])
    step = max(1, _BATCH // N)
    for s in range(0, phases.shape[0], step):
        block = np.exp(1j * phases[s : s + step])
        out[s : s + step] = np.abs(np.fft.fft(block, axis=1)).sum(axis=1) / N
    return out


def phi_N_norms(phiN: RationalSampling, n_stop: int | None = None) -> np.ndarray:
    """||e^{in phi_N}||_{A(T_N)} for n = 0 .. n_stop-1 (default Q)."""
    n_stop = phiN.Q if n_stop is None else n_stop
    out = np.empty(n_stop)
    step = max(1, _BATCH // phiN.order)
    for s in range(0, n_stop, step):
        ns = np.arange(s, min(s + step, n_stop))
        out[s : s + ns.size] = exp_norms(phiN.phases(ns))
    return out


@dataclass(frozen=True, eq=False)
class ThetaTable:
    order: int
    norms: np.ndarray
    values: np.ndarray
    map_spec: dict = field(default_factory=dict)

    def at(self, n: int) -> float:
        return float(self.values[min(n, self.values.size - 1)])


def theta_table(cmap: CircleMap, N: int, n_max: int) -> ThetaTable:
    """Running maxima of ||e^{i lambda phi}||_{A(T_N)} over lambda <= n."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    lift = sample_lift(cmap, N)
    norms = np.empty(n_max + 1)
    step = max(1, _BATCH // N)
    for s in range(0, n_max + 1, step):
        ns = np.arange(s, min(s + step, n_max + 1))
        norms[s : s + ns.size] = exp_norms(np.multiply.outer(ns.astype(float), lift))
    return ThetaTable(N, norms, np.maximum.accumulate(norms), cmap.to_spec())


# ---------------------------------------------------------------------------
# approximation chain


@dataclass
class ChainReport:
    name: str
    n_checked: int
    steps: dict[str, float]  # step name -> minimum slack (rhs - lhs)
    extras: dict[str, Any] = field(default_factory=dict)
    skipped: str | None = None

    @property
    def min_slack(self) -> float:
        return min(self.steps.values(), default=float("inf"))

    @property
    def passed(self) -> bool:
        return self.skipped is not None or self.min_slack >= -TOL.inequality

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["passed"] = self.passed
        d["min_slack"] = _finite(self.min_slack)
        d["steps"] = {k: _finite(v) for k, v in self.steps.items()}
        return d


def _finite(x: float):
    return None if not math.isfinite(x) else float(x)


def lemma1_certificate(
    cmap: CircleMap, phiN: RationalSampling, N: int, D: int, n_cap: int | None = None
) -> ChainReport:
    """Check, for every n < min(Q, n_cap),

    sup|e^{in phi} - e^{in phi_N}| <= n*sup_error <= 2 pi n/(D Q),
    ||e^{in phi} - e^{in phi_N}||_A <= N * sup|...| <= 2 pi N/D,
    ||e^{in phi_N}||_A <= ||e^{in phi}||_A + 2 pi N/D,

    and when D == N also the classical ``Theta(n) + 2 pi <= 8 Theta(n)``.
    """
    n_cap = CAPS.lemma1_n if n_cap is None else n_cap
    n_stop = min(phiN.Q, n_cap)
    lift = sample_lift(cmap, N)
    slack: dict[str, float] = {}
    worst_factor = 0.0

    def record(name, lhs, rhs):
        # n = 0 is an equality 0 <= 0 on every line; it carries no information
        gap = (rhs - lhs)[ns > 0]
        if gap.size:
            slack[name] = min(slack.get(name, np.inf), float(gap.min()))

    step = max(1, _BATCH // (4 * N))
    running_theta = 0.0
    for s in range(0, n_stop, step):
        ns = np.arange(s, min(s + step, n_stop))
        e_phi = np.exp(1j * np.multiply.outer(ns.astype(float), lift))
        e_phiN = np.exp(1j * phiN.phases(ns))
        diff = e_phi - e_phiN
        sup = np.abs(diff).max(axis=1)
        a_diff = np.abs(np.fft.fft(diff, axis=1)).sum(axis=1) / N
        a_phi = np.abs(np.fft.fft(e_phi, axis=1)).sum(axis=1) / N
        a_phiN = np.abs(np.fft.fft(e_phiN, axis=1)).sum(axis=1) / N
        budget = TWO_PI * N / D

        record("sup_vs_n_sup_error", sup, ns * phiN.sup_error)
        record("n_sup_error_vs_dirichlet", ns * phiN.sup_error, ns * phiN.sup_bound)
        record("a_diff_vs_N_sup", a_diff, N * sup)
        record("a_diff_vs_2piN_over_D", a_diff, np.full(ns.size, budget))
        record("a_phiN_vs_a_phi_plus_budget", a_phiN, a_phi + budget)

        theta = np.maximum.accumulate(np.maximum(a_phi, running_theta))
        running_theta = float(theta[-1])
        worst_factor = max(worst_factor, float(np.max(a_phiN / theta)))
        if D == N:
            record("a_diff_vs_2pi", a_diff, np.full(ns.size, TWO_PI))
            record("a_phiN_vs_8_theta", a_phiN, 8 * theta)

    return ChainReport(
        "lemma1",
        n_stop,
        slack,
        extras={"max_ratio_to_theta": worst_factor, "D_equals_N": D == N, "theta_max": running_theta},
    )


# ---------------------------------------------------------------------------
# E_N


@dataclass(frozen=True, eq=False)
class TripleGridSet:
    order: int
    membership: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.membership, dtype=bool)
        n = self.order
        if arr.shape != (n, n, n):
            raise ValueError("membership must be N x N x N")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "membership", arr)

    @property
    def measure(self) -> float:
        return float(np.count_nonzero(self.membership)) / self.order**3

    @property
    def delta(self) -> float:
        return float(delta_of(self.measure))

    def complement(self) -> "TripleGridSet":
        return TripleGridSet(self.order, ~self.membership)

    def as_product_subset(self) -> ProductSubset:
        n = self.order
        return ProductSubset(FiniteProductSpace.uniform(n, n, n), self.membership)


def four_term(values: np.ndarray) -> np.ndarray:
    """F[x, y, z] = (v[x] + v[z-x]) - (v[y] + v[z-y]) with indices mod N."""
    N = values.shape[0]
    idx = np.arange(N)
    diff = (idx[None, :] - idx[:, None]) % N  # diff[x, z] = z - x
    pair = values[:, None] + values[diff]  # pair[x, z]
    return pair[:, None, :] - pair[None, :, :]


def build_E_N(phiN: RationalSampling) -> TripleGridSet:
    """Membership decided from numerators alone: sum = 0 mod Q."""
    K = four_term(phiN.numerators)
    return TripleGridSet(phiN.order, np.mod(K, phiN.Q) == 0)


@dataclass
class IdentityCheck:
    max_deviation: float | None
    Q: int
    cost: int
    skipped: str | None = None

    @property
    def passed(self) -> bool:
        return self.skipped is not None or self.max_deviation <= TOL.indicator_identity


def indicator_identity_check(
    phiN: RationalSampling, E: TripleGridSet, caps: Caps = CAPS
) -> IdentityCheck:
    """max |(1/Q) sum_{n<Q} e^{in Phi_N} - 1_E| over the grid, in floating point."""
    N, Q = phiN.order, phiN.Q
    cost = Q * N**3
    if cost > caps.max_qn3:
        return IdentityCheck(None, Q, cost, skipped=f"Q*N^3 = {cost} exceeds cap {caps.max_qn3}")
    Phi = four_term(phiN.values()).ravel()
    acc = np.zeros(Phi.size, dtype=complex)
    step = max(1, _BATCH // Phi.size)
    for s in range(0, Q, step):
        ns = np.arange(s, min(s + step, Q), dtype=float)
        acc += np.exp(1j * np.multiply.outer(ns, Phi)).sum(axis=0)
    lhs = acc / Q
    dev = float(np.max(np.abs(lhs - E.membership.ravel())))
    return IdentityCheck(dev, Q, cost)


# ---------------------------------------------------------------------------
# the autocorrelation inequality and interpolation


@dataclass(frozen=True)
class AutocorrBound:
    lhs: float
    rhs: float
    a4_fourth: float
    imag_residue: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -TOL.inequality and self.imag_residue <= TOL.imag_residue


def _real_values(f: CyclicFunction) -> np.ndarray:
    if not f.is_real(1e-12):
        raise ValueError("f must be real-valued")
    return f.values.real


def autocorr_lower_bound(f: CyclicFunction, n: int) -> AutocorrBound:
    """||e^{inf}||_A^{-2} against the triple average of e^{inF}, F the four-term combination of f."""
    v = _real_values(f)
    h = CyclicFunction(np.exp(1j * n * v))
    lhs = a_norm(h, 1) ** -2
    triple = np.exp(1j * n * four_term(v)).mean()
    return AutocorrBound(float(lhs), float(triple.real), a_norm(h, 4) ** 4, float(abs(triple.imag)))


@dataclass(frozen=True)
class InterpolationCheck:
    a1: float
    a2: float
    a4: float

    @property
    def rhs(self) -> float:
        return self.a1 ** (1 / 3) * self.a4 ** (2 / 3)

    @property
    def slack(self) -> float:
        return self.rhs - self.a2

    @property
    def holds(self) -> bool:
        return abs(self.a2 - 1.0) <= 1e-10 and self.slack >= -TOL.inequality


def interpolation_check(f: CyclicFunction, n: int) -> InterpolationCheck:
    """||.||_2 <= ||.||_1^{1/3} ||.||_4^{2/3} on the spectrum of e^{inf}."""
    h = CyclicFunction(np.exp(1j * n * _real_values(f)))
    return InterpolationCheck(a_norm(h, 1), a_norm(h, 2), a_norm(h, 4))


# ---------------------------------------------------------------------------
# measure lower bound


@dataclass
class Lemma2Report:
    measure: float
    M: float
    sharp_bound: float
    averaged_bound: float
    theta: float | None = None
    lemma1_bound: float | None = None
    constant64_bound: float | None = None

    @property
    def sharp_holds(self) -> bool:
        return self.measure >= self.sharp_bound - TOL.inequality

    @property
    def averaged_holds(self) -> bool:
        return self.measure >= self.averaged_bound - TOL.inequality

    @property
    def constant64_holds(self) -> bool | None:
        if self.constant64_bound is None:
            return None
        return self.measure >= self.constant64_bound - TOL.inequality

    @property
    def passed(self) -> bool:
        return self.sharp_holds and self.averaged_holds and self.constant64_holds is not False

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d.update(
            sharp_holds=self.sharp_holds,
            averaged_holds=self.averaged_holds,
            constant64_holds=self.constant64_holds,
            passed=self.passed,
            slack=self.measure - self.sharp_bound,
        )
        return d


def lemma2_certificate(
    phiN: RationalSampling, E: TripleGridSet, theta: ThetaTable | float | None = None
) -> Lemma2Report:
    """mu(E_N) >= mean_n ||e^{in phi_N}||^{-2} >= 1/M^2, plus the 1/(64 Theta^2) form when Theta is known."""
    norms = phi_N_norms(phiN)
    M = float(norms.max())
    report = Lemma2Report(
        measure=E.measure,
        M=M,
        sharp_bound=1.0 / M**2,
        averaged_bound=float(np.mean(norms**-2.0)),
    )
    if theta is not None:
        th = theta.at(phiN.Q - 1) if isinstance(theta, ThetaTable) else float(theta)
        report.theta = th
        report.lemma1_bound = th + TWO_PI * phiN.order / phiN.D
        report.constant64_bound = 1.0 / (64.0 * th**2)
    return report


# ---------------------------------------------------------------------------
# sections of E_N


@dataclass
class SectionSurvey:
    order: int
    max_delta_by_axis: list[float]
    max_anorm_by_axis: list[float]
    global_delta: float
    anorm_cap: float | None = None

    @property
    def max_section_delta(self) -> float:
        return max(self.max_delta_by_axis)

    @property
    def lemma3_bound(self) -> float:
        return 9.0 * self.max_section_delta

    @property
    def lemma3_holds(self) -> bool:
        return self.global_delta <= self.lemma3_bound + TOL.inequality

    @property
    def anorm_holds(self) -> bool | None:
        if self.anorm_cap is None:
            return None
        return max(self.max_anorm_by_axis) <= self.anorm_cap * (1 + 1e-12) + TOL.inequality

    @property
    def passed(self) -> bool:
        return self.lemma3_holds and self.anorm_holds is not False

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d.update(
            max_section_delta=self.max_section_delta,
            lemma3_bound=self.lemma3_bound,
            lemma3_holds=self.lemma3_holds,
            lemma3_slack=self.lemma3_bound - self.global_delta,
            anorm_holds=self.anorm_holds,
            passed=self.passed,
        )
        return d


def section_bound_survey(E: TripleGridSet, M: float | None = None) -> SectionSurvey:
    """delta and ||1_section||_{A(T_N)} for every 1-, 2- and 3-section of E.

    With ``M`` given, section indicators are also checked against M**2, the
    bound implied by writing each indicator as an average of e^{in Phi_N}.
    """
    ind = E.membership.astype(float)
    deltas, anorms = [], []
    for axis in range(3):
        mu = ind.mean(axis=axis)
        deltas.append(float(delta_of(mu).max()))
        spec = np.fft.fft(ind, axis=axis) / E.order
        anorms.append(float(np.abs(spec).sum(axis=axis).max()))
    return SectionSurvey(E.order, deltas, anorms, E.delta, None if M is None else M**2)


# ---------------------------------------------------------------------------
# closing argument


def final_integral(cmap: CircleMap, N: int) -> float:
    """Grid average of |e^{i Phi} - 1| with Phi(x,y,z) = phi(x)+phi(z-x)-phi(y)-phi(z-y).

    Only the periodic part of the lift enters: the winding contributes a
    multiple of 2 pi to Phi at every grid point.
    """
    g = cmap.periodic_part(grid_points(N))
    idx = np.arange(N)
    diff = (idx[None, :] - idx[:, None]) % N
    pair = g[:, None] + g[diff]  # pair[x, z]
    total = 0.0
    step = max(1, _BATCH // (N * N))
    for s in range(0, N, step):
        G = pair[s : s + step, None, :] - pair[None, :, :]
        total += float(np.sum(2.0 * np.abs(np.sin(G / 2.0))))
    return total / N**3


@dataclass
class ClosingEstimate:
    sup_on_E: float
    bound: float
    integral: float
    integral_bound: float

    @property
    def passed(self) -> bool:
        return (
            self.sup_on_E <= self.bound + TOL.inequality
            and self.integral <= self.integral_bound + TOL.inequality
        )


def closing_estimate(cmap: CircleMap, phiN: RationalSampling, E: TripleGridSet) -> ClosingEstimate:
    """On E_N, |e^{i Phi} - 1| <= 4 sup|phi - phi_N|; the grid integral is at most that plus 2 mu(F_N)."""
    Phi = four_term(sample_lift(cmap, phiN.order))
    dev = 2.0 * np.abs(np.sin(Phi / 2.0))
    sup_on_E = float(dev[E.membership].max()) if E.membership.any() else 0.0
    bound = 4.0 * phiN.sup_error
    integral = float(dev.mean())
    return ClosingEstimate(sup_on_E, bound, integral, sup_on_E + 2.0 * (1.0 - E.measure))


# ---------------------------------------------------------------------------
# end-to-end run


def structural_checks(E: TripleGridSet) -> dict[str, bool]:
    m = E.membership
    idx = np.arange(E.order)
    return {
        "diagonal_contained": bool(m[idx, idx, :].all()),
        "xy_symmetric": bool(np.array_equal(m, m.transpose(1, 0, 2))),
    }


def run_pipeline(
    cmap: CircleMap,
    N: int,
    D: int,
    budget: int,
    *,
    caps: Caps = CAPS,
    phiN: RationalSampling | None = None,
) -> dict[str, Any]:
    """Run every certificate for one (map, N, D); returns a JSON-ready report with an ``ok`` flag."""
    report: dict[str, Any] = {
        "inputs": {"map": cmap.to_spec(), "N": N, "D": D, "budget": budget},
        "status": "complete",
        "skipped": [],
    }
    if phiN is None:
        try:
            phiN = build_phi_N(cmap, N, D, budget)
        except BudgetExhausted as exc:
            report.update(status="budget_exhausted", ok=True, message=str(exc))
            report["partial"] = {"Q": exc.partial.Q, "max_error": exc.partial.max_error}
            return report
    else:
        report["inputs"]["phi_N_fixture"] = True

    report["phi_N"] = {
        "Q": phiN.Q,
        "numerators": [float(p) if not phiN.exact else int(p) for p in phiN.numerators],
        "sup_error": phiN.sup_error,
        "sup_bound": phiN.sup_bound,
        "sup_holds": phiN.sup_error <= phiN.sup_bound * (1 + 1e-9) + 1e-15,
    }
    certs: dict[str, Any] = {}
    lemma1 = lemma1_certificate(cmap, phiN, N, D, caps.lemma1_n)
    certs["lemma1"] = lemma1.to_dict()

    final = final_integral(cmap, N)
    report["final_integral"] = final

    if N**3 > caps.max_n3:
        report["skipped"].append(f"E_N: N^3 = {N**3} exceeds cap {caps.max_n3}")
        report["certificates"] = certs
        report["ok"] = bool(report["phi_N"]["sup_holds"] and lemma1.passed)
        return report

    E = build_E_N(phiN)
    report["E_N"] = {"measure": E.measure, "delta": E.delta, **structural_checks(E)}

    ident = indicator_identity_check(phiN, E, caps)
    certs["indicator_identity"] = {
        "max_deviation": ident.max_deviation,
        "tolerance": TOL.indicator_identity,
        "cost": ident.cost,
        "skipped": ident.skipped,
        "passed": ident.passed,
    }
    if ident.skipped:
        report["skipped"].append(f"indicator_identity: {ident.skipped}")

    theta = theta_table(cmap, N, phiN.Q - 1) if phiN.Q <= caps.lemma1_n * 16 else None
    l2 = lemma2_certificate(phiN, E, theta)
    certs["lemma2"] = l2.to_dict()

    survey = section_bound_survey(E, l2.M)
    certs["sections"] = survey.to_dict()

    closing = closing_estimate(cmap, phiN, E)
    certs["closing"] = {**asdict(closing), "passed": closing.passed}

    report["certificates"] = certs
    report["ok"] = bool(
        report["phi_N"]["sup_holds"]
        and all(report["E_N"][k] for k in ("diagonal_contained", "xy_symmetric"))
        and lemma1.passed
        and ident.passed
        and l2.passed
        and survey.passed
        and closing.passed
    )
    return report
