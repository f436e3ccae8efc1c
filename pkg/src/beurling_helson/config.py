"""Numerical tolerances and cost caps shared by every module.

Caps can be overridden through environment variables, e.g.
``BEURLING_HELSON_MAX_QN3=20000000``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    roundtrip: float = 1e-10
    parseval: float = 1e-10
    unimodular: float = 1e-12
    indicator_identity: float = 1e-9
    inequality: float = 1e-9
    a4_identity_rel: float = 1e-8
    imag_residue: float = 1e-10
    dirichlet: float = 1e-12
    weights_sum: float = 1e-12
    mean_zero: float = 1e-10
    monotone_fold: float = 1e-9
    operator_norm_rel: float = 1e-8


@dataclass(frozen=True)
class Caps:
    # the indicator identity costs Q * N**3 complex exponentials
    max_qn3: int = 10**7
    max_n3: int = 10**6
    lemma1_n: int = 4096
    growth_grid: int = 2**20
    growth_resolution: int = 16
    kernel_support: int = 10**6
    continuity_grid: int = 2**14


_ENV_PREFIX = "BEURLING_HELSON_"


def load_caps(environ: dict[str, str] | None = None) -> Caps:
    env = os.environ if environ is None else environ
    overrides = {}
    for f in fields(Caps):
        raw = env.get(_ENV_PREFIX + f.name.upper())
        if raw is not None:
            overrides[f.name] = int(raw)
    return replace(Caps(), **overrides)


TOL = Tolerances()
CAPS = load_caps()
