"""Command-line driver.

Exit codes: 0 every certificate passed, 1 a mathematical certificate failed,
2 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

from . import plotting
from .circle_maps import map_from_spec
from .config import TOL, load_caps
from .conv_operators import kernel_from_map, power_norms
from .diophantine import simultaneous_approx, verify_approx
from .littlewood_gk import STRATEGIES, extremal_search, is_prime
from .norm_growth import MODELS, circle_a_norm, fit_growth, growth_table
from .pipeline import phi_N_norms, rational_sampling_from_fixture, run_pipeline, theta_table
from .reports import dumps_csv, dumps_json, emit
from .section_measure import (
    FiniteProductSpace,
    ProductSubset,
    exhaustive_sweep,
    random_sweep,
    two_factor_inequality_trace,
)

EXIT_OK, EXIT_CERT, EXIT_CONFIG = 0, 1, 2

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    map: dict[str, Any] = field(default_factory=lambda: {"family": "smooth", "winding": 1, "amplitude": 0.5})
    N: list[int] = field(default_factory=lambda: [6])
    D: int = 3
    budget: int = 10**6
    n_min: int = 16
    n_max: int = 1024
    geometric: bool = True
    tol: float = 1e-3
    seed: int | None = None
    out: str | None = None
    format: str = "json"
    plot: bool = False
    # command-specific
    phi_fixture: str | None = None
    M: int = 256
    strategy: str = "intervals"
    trials: int = 1000
    exhaustive: str | None = None
    random: str | None = None
    count: int = 10**5
    traces: int = 0
    long: bool = False
    crosscheck: bool = False
    alphas: list[float] = field(default_factory=list)

    def validate(self, command: str) -> None:
        checks = [
            (all(n >= 1 for n in self.N), "N must be >= 1"),
            (self.D >= 1, "D must be >= 1"),
            (self.budget >= 1, "budget must be >= 1"),
            (self.n_max >= 0, "n-max must be >= 0"),
            (self.tol > 0, "tol must be positive"),
            (self.format in ("csv", "json"), "format must be csv or json"),
            (self.M >= 1, "M must be >= 1"),
            (self.trials >= 1 and self.count >= 1, "trials and count must be positive"),
            (self.strategy in STRATEGIES, f"strategy must be one of {STRATEGIES}"),
            (not self.plot or self.out is not None, "--plot needs --out"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigError(msg)
        if command == "growth" and not 1 <= self.n_min <= self.n_max:
            raise ConfigError("need 1 <= n-min <= n-max")
        randomized = (command == "sections" and (self.random or self.traces)) or (
            command == "littlewood" and self.strategy == "random_sets"
        )
        if randomized and self.seed is None:
            raise ConfigError("--seed is required for randomized commands")

    def n_list(self) -> list[int]:
        if not self.geometric:
            return list(range(self.n_min, self.n_max + 1))
        out, n = [], self.n_min
        while n <= self.n_max:
            out.append(n)
            n *= 2
        return out


def parse_map(text: str) -> dict[str, Any]:
    shorthand = {
        "linear": {"family": "linear", "winding": 1, "offset": 0.0},
        "smooth": {"family": "smooth", "winding": 1, "amplitude": 0.5},
        "tent": {"family": "tent"},
    }
    if text in shorthand:
        return shorthand[text]
    path = Path(text)
    if path.suffix in (".json", ".toml") and path.exists():
        return _load_file(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cannot parse map spec {text!r}: {exc}") from exc


def _load_file(path: Path) -> dict[str, Any]:
    try:
        if path.suffix == ".toml":
            return tomllib.loads(path.read_text())
        return json.loads(path.read_text())
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _int_list(text: str) -> list[int]:
    return [int(x) for x in str(text).split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in str(text).split(",") if x.strip()]


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    known = {f.name for f in fields(RunConfig)}
    for name in known:
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    if getattr(args, "config", None):
        data = _load_file(Path(args.config))
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for k, v in data.items():
            setattr(cfg, k, v)
    if isinstance(cfg.map, str):
        cfg.map = parse_map(cfg.map)
    if isinstance(cfg.N, int):
        cfg.N = [cfg.N]
    return cfg


# ---------------------------------------------------------------------------
# commands


def cmd_pipeline(cfg: RunConfig) -> int:
    cmap = map_from_spec(cfg.map)
    caps = load_caps()
    status = EXIT_OK
    reports = []
    for N in cfg.N:
        phiN = None
        if cfg.phi_fixture:
            phiN = rational_sampling_from_fixture(_load_file(Path(cfg.phi_fixture)), cmap)
            if phiN.order != N:
                raise ConfigError(f"fixture has N={phiN.order}, config asks N={N}")
        rep = run_pipeline(cmap, N, cfg.D, cfg.budget, caps=caps, phiN=phiN)
        reports.append(rep)
        if not rep["ok"]:
            status = EXIT_CERT
        for note in rep.get("skipped", []):
            print(f"skipped: {note}", file=sys.stderr)
        if rep["status"] == "budget_exhausted":
            print(f"skipped: {rep['message']}", file=sys.stderr)

    if cfg.format == "json":
        emit(dumps_json(reports[0] if len(reports) == 1 else {"runs": reports}), cfg.out)
    else:
        rows = []
        for rep in reports:
            if "phi_N" not in rep:
                continue
            N = rep["inputs"]["N"]
            fixture = {"Q": rep["phi_N"]["Q"], "numerators": rep["phi_N"]["numerators"], "D": cfg.D}
            phiN = rational_sampling_from_fixture(fixture, cmap)
            n_stop = min(phiN.Q, caps.lemma1_n)
            normsN = phi_N_norms(phiN, n_stop)
            normsPhi = theta_table(cmap, N, n_stop - 1).norms
            rows.extend((n, a, b) for n, (a, b) in enumerate(zip(normsN, normsPhi)))
        emit(dumps_csv("pipeline", rows), cfg.out)

    if cfg.plot and reports and "phi_N" in reports[0]:
        rep = reports[0]
        fixture = {"Q": rep["phi_N"]["Q"], "numerators": rep["phi_N"]["numerators"], "D": cfg.D}
        phiN = rational_sampling_from_fixture(fixture, cmap)
        norms = phi_N_norms(phiN, min(phiN.Q, caps.lemma1_n))
        theta = theta_table(cmap, phiN.order, norms.size - 1).values
        plotting.plot_phi_N_norms(norms, float(norms.max()), plotting.figure_path(cfg.out), theta)
    return status


def cmd_growth(cfg: RunConfig) -> int:
    cmap = map_from_spec(cfg.map)
    caps = load_caps()
    series = growth_table(cmap, cfg.n_list(), cfg.tol, caps)
    fits = []
    if len(series.converged().entries) >= 4:
        fits = [fit_growth(series, m) for m in MODELS]

    status = EXIT_OK
    if any(e.norm < 1 - TOL.monotone_fold for e in series.entries):
        status = EXIT_CERT
    if cmap.is_linear and any(e.norm != 1.0 for e in series.entries):
        status = EXIT_CERT

    if cfg.format == "json":
        payload = {
            "map": cmap.to_spec(),
            "tolerance": cfg.tol,
            "entries": [asdict(e) | {"norm_over_log_n": e.norm / np.log(e.n) if e.n > 1 else None}
                        for e in series.entries],
            "fits": [asdict(f) for f in fits],
        }
        emit(dumps_json(payload), cfg.out)
    elif cfg.long:
        rows = [(e.n, "norm", e.norm) for e in series.entries]
        for f in fits:
            rows.extend((e.n, f"fit_{f.model}", float(f.predict(e.n))) for e in series.entries)
        emit(dumps_csv("growth_long", rows), cfg.out)
    else:
        emit(dumps_csv("growth", [(e.n, e.norm, e.grid, e.converged) for e in series.entries]), cfg.out)

    if cfg.plot:
        plotting.plot_growth(series, [f for f in fits if f.model != "constant"], plotting.figure_path(cfg.out))
    return status


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.lower().split("x"))
    except ValueError as exc:
        raise ConfigError(f"bad size spec {text!r}, expected e.g. 4x4") from exc


def cmd_sections(cfg: RunConfig) -> int:
    summaries = []
    if cfg.exhaustive:
        sizes = _parse_sizes(cfg.exhaustive)
        if len(sizes) != 2:
            raise ConfigError("exhaustive sweep takes two factors, e.g. 4x4")
        summaries.append(exhaustive_sweep(*sizes))
    if cfg.random:
        summaries.append(random_sweep(_parse_sizes(cfg.random), cfg.count, cfg.seed))
    trace_info = None
    if cfg.traces:
        trace_info = trace_sweep(cfg.traces, cfg.seed)
    if not summaries and trace_info is None:
        summaries.append(exhaustive_sweep(4, 4))

    failed = any(not s.passed for s in summaries) or (trace_info is not None and trace_info["failures"] > 0)
    for s in summaries:
        verdict = "PASS" if s.passed else "FAIL"
        print(
            f"{verdict} {s.label}: {s.instances} subsets, {s.violations} violations, "
            f"worst slack {s.worst_slack:.6g}, worst delta/delta0 {s.worst_ratio:.6g}",
            file=sys.stderr,
        )
    if trace_info is not None:
        verdict = "PASS" if trace_info["failures"] == 0 else "FAIL"
        print(
            f"{verdict} two-factor traces: {trace_info['instances']} instances, "
            f"{trace_info['failures']} failures, worst slack {trace_info['worst_slack']:.6g}",
            file=sys.stderr,
        )

    if cfg.format == "json":
        emit(dumps_json({"sweeps": [asdict(s) | {"passed": s.passed} for s in summaries], "traces": trace_info}), cfg.out)
    else:
        rows = [(s.label, s.instances, s.violations, s.worst_slack, s.worst_ratio) for s in summaries]
        if trace_info is not None:
            rows.append(("traces", trace_info["instances"], trace_info["failures"], trace_info["worst_slack"], None))
        emit(dumps_csv("sections", rows), cfg.out)
    return EXIT_CERT if failed else EXIT_OK


def trace_sweep(count: int, seed: int, max_size: int = 6) -> dict[str, Any]:
    """Random two-factor sets (random sizes and weights) with delta0 < 1/2, traced through every step."""
    rng = np.random.default_rng(seed)
    done = failures = 0
    worst = float("inf")
    while done < count:
        n1, n2 = rng.integers(1, max_size + 1, size=2)
        w1, w2 = rng.dirichlet(np.ones(n1)), rng.dirichlet(np.ones(n2))
        w1, w2 = w1 / w1.sum(), w2 / w2.sum()
        E = ProductSubset(FiniteProductSpace((n1, n2), (w1, w2)), rng.random((n1, n2)) < rng.random())
        tr = two_factor_inequality_trace(E)
        if tr.trivial:
            continue
        done += 1
        worst = min(worst, tr.worst_slack)
        if not tr.holds:
            failures += 1
    return {"instances": done, "failures": failures, "worst_slack": worst}


def cmd_littlewood(cfg: RunConfig) -> int:
    bad = [N for N in cfg.N if not is_prime(N)]
    if bad:
        raise ConfigError(f"N must be prime; got {bad}")
    seed = 0 if cfg.seed is None else cfg.seed
    records = [extremal_search(N, cfg.trials, cfg.strategy, seed) for N in cfg.N]
    rows = [(r.N, r.strategy, r.ratio, r.envelope, r.alt_envelope, r.witness) for r in records]
    if cfg.format == "json":
        payload = [
            {"N": r.N, "strategy": r.strategy, "best_ratio": r.ratio, "delta": r.delta, "a_norm": r.a_norm,
             "envelope": r.envelope, "alt_envelope": r.alt_envelope, "witness": r.witness,
             "candidates": r.candidates}
            for r in records
        ]
        emit(dumps_json({"records": payload, "seed": seed}), cfg.out)
    else:
        emit(dumps_csv("littlewood", rows), cfg.out)
    if cfg.plot:
        plotting.plot_littlewood(records, plotting.figure_path(cfg.out))
    status = EXIT_OK if all(0 <= r.ratio <= 1 for r in records) else EXIT_CERT
    return status


def cmd_operators(cfg: RunConfig) -> int:
    cmap = map_from_spec(cfg.map)
    caps = load_caps()
    u = kernel_from_map(cmap, cfg.M)
    powers = power_norms(u, cfg.n_max, caps)
    norms = powers.norms
    status = EXIT_OK
    for m in range(len(norms)):
        for n in range(len(norms) - m):
            if norms[m + n] > norms[m] * norms[n] * (1 + TOL.inequality) + TOL.inequality:
                status = EXIT_CERT

    cross = None
    if cfg.crosscheck:
        cross = []
        for n in range(1, len(norms)):
            c = circle_a_norm(cmap, n, cfg.tol, caps)
            allowed = cfg.tol * c.value + abs(c.tail_estimate) + powers.tails[n] + 1e-9
            ok = abs(norms[n] - c.value) <= allowed
            cross.append({"n": n, "power_norm": norms[n], "circle_norm": c.value, "allowed": allowed, "ok": ok})
            if not ok:
                status = EXIT_CERT
    if powers.skipped:
        print(f"skipped: {powers.skipped}", file=sys.stderr)

    if cfg.format == "json":
        payload = {
            "map": cmap.to_spec(),
            "M": cfg.M,
            "kernel": {"start": u.start, "width": u.width, "l1": u.l1, "tail_mass": u.tail_mass},
            "powers": [{"n": n, "power_norm": v, "support_width": w, "tail_mass": t} for n, v, w, t in powers.rows()],
            "crosscheck": cross,
            "skipped": powers.skipped,
        }
        emit(dumps_json(payload), cfg.out)
    else:
        emit(dumps_csv("operators", list(powers.rows())), cfg.out)
    if cfg.plot:
        circle = [c["circle_norm"] for c in cross] if cross else None
        plotting.plot_operator_norms(powers, plotting.figure_path(cfg.out), circle)
    return status


def cmd_dirichlet(cfg: RunConfig) -> int:
    if not cfg.alphas:
        raise ConfigError("--alphas is required")
    res = simultaneous_approx(cfg.alphas, cfg.D, cfg.budget)
    check = verify_approx(cfg.alphas, cfg.D, res)
    emit(dumps_json({"result": asdict(res), "check": asdict(check)}), cfg.out)
    return EXIT_OK if (check.ok or res.budget_exhausted) else EXIT_CERT


COMMANDS = {
    "pipeline": cmd_pipeline,
    "growth": cmd_growth,
    "sections": cmd_sections,
    "littlewood": cmd_littlewood,
    "operators": cmd_operators,
    "dirichlet": cmd_dirichlet,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON or TOML file; its keys override flags")
    common.add_argument("--map", help="family shorthand (linear|smooth|tent), JSON object, or .json/.toml path")
    common.add_argument("--N", type=_int_list, help="grid order(s), comma separated")
    common.add_argument("--D", type=int)
    common.add_argument("--budget", type=int)
    common.add_argument("--n-min", dest="n_min", type=int)
    common.add_argument("--n-max", dest="n_max", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output file (stdout if omitted)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--plot", action="store_true", default=None, help="also write a PNG next to --out")

    parser = argparse.ArgumentParser(prog="beurling-helson", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pipeline", parents=[common], help="phi_N, E_N and all certificates")
    p.add_argument("--phi-fixture", dest="phi_fixture", help="JSON file with Q and numerators to use as phi_N")

    p = sub.add_parser("growth", parents=[common], help="||e^{in phi}||_A(T) and growth fits")
    p.add_argument("--linear-range", dest="geometric", action="store_false", default=None,
                   help="use every n in [n-min, n-max] instead of doubling")
    p.add_argument("--long", action="store_true", default=None, help="long-format CSV (n, series, value)")

    p = sub.add_parser("sections", parents=[common], help="section-measure sweeps")
    p.add_argument("--exhaustive", help="two-factor grid, e.g. 4x4")
    p.add_argument("--random", help="factor sizes for the random sweep, e.g. 3x3x3")
    p.add_argument("--count", type=int)
    p.add_argument("--traces", type=int, help="number of two-factor proof traces")

    p = sub.add_parser("littlewood", parents=[common], help="Green-Konyagin ratio tables")
    p.add_argument("--strategy", choices=STRATEGIES)
    p.add_argument("--trials", type=int)

    p = sub.add_parser("operators", parents=[common], help="power norms of convolution operators")
    p.add_argument("--M", type=int, help="grid used to read the kernel off the map")
    p.add_argument("--crosscheck", action="store_true", default=None)

    p = sub.add_parser("dirichlet", parents=[common], help="simultaneous approximation demo")
    p.add_argument("--alphas", type=_float_list)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "operators" and args.n_max is None and "n_max" not in _config_keys(args):
            cfg.n_max = 16
        if args.command == "littlewood" and args.N is None and "N" not in _config_keys(args):
            cfg.N = [17]
        cfg.validate(args.command)
        return COMMANDS[args.command](cfg)
    except (ConfigError, OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _config_keys(args) -> set[str]:
    if not getattr(args, "config", None):
        return set()
    return set(_load_file(Path(args.config)))


if __name__ == "__main__":
    sys.exit(main())
