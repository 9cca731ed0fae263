"""Multistart gradient ascent on the log-volume, used as an independent oracle.

Every start draws from its own random stream spawned from the seed, so the
report does not depend on the order in which starts are evaluated.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import ContractError, OptimizerFailure, SingularityError
from .root_systems import TWO_PI, GroupSpec, angle_distance, canonicalize, root_encoding

__all__ = [
    "OptimizerConfig",
    "StartOutcome",
    "OptimizerReport",
    "maximize",
    "run_start",
    "lagrange_residual_A",
]

START_MARGIN = 1e-3
CLUSTER_TOL = 1e-6


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 64
    max_iters: int = 5000
    grad_tol: float = 1e-10
    step_init: float = 0.1
    seed: int = 0
    backtrack_factor: float = 0.5
    workers: int = 1

    def __post_init__(self):
        if self.starts < 1 or self.max_iters < 1 or self.workers < 1:
            raise ContractError("starts, max_iters and workers must be positive")
        if not (self.grad_tol > 0 and self.step_init > 0):
            raise ContractError("grad_tol and step_init must be positive")
        if not 0 < self.backtrack_factor < 1:
            raise ContractError("backtrack_factor must lie in (0, 1)")
        if not 0 <= self.seed < 2 ** 64:
            raise ContractError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class StartOutcome:
    converged: bool
    log_volume: float
    iterations: int
    point: np.ndarray = field(repr=False, compare=False)
    grad_norm: float = math.inf


@dataclass
class OptimizerReport:
    best: np.ndarray
    best_log_volume: float
    per_start_outcomes: list[StartOutcome]
    distinct_optima_count: int
    optima: list[np.ndarray] = field(default_factory=list, repr=False)


def _initial_point(spec: GroupSpec, rng: np.random.Generator):
    """Uniform interior start; returns (theta, target angle sum or None)."""
    n = spec.dim
    if spec.family == "A":
        theta = np.sort(rng.uniform(START_MARGIN, TWO_PI - START_MARGIN, n))
        m = round(float(theta.sum()) / TWO_PI)
        target = TWO_PI * m
        theta += (target - theta.sum()) / n
        return theta, target
    if spec.family == "G2":
        return rng.uniform(START_MARGIN, TWO_PI - START_MARGIN, 2), None
    return np.sort(rng.uniform(START_MARGIN, math.pi - START_MARGIN, n)), None


def run_start(spec: GroupSpec, config: OptimizerConfig, seed_seq: np.random.SeedSequence,
              record: bool = False, backend=None):
    """One ascent.  Returns ``(StartOutcome, trace)``."""
    k = backend if backend is not None else kernels
    rng = np.random.default_rng(seed_seq)
    theta0, target = _initial_point(spec, rng)
    idx, coef = root_encoding(spec)
    theta, f, gn, iters, converged, trace = k.ascend(
        idx, coef, theta0, target is not None, 0.0 if target is None else target,
        config.max_iters, config.grad_tol, config.step_init, config.backtrack_factor,
        record,
    )
    outcome = StartOutcome(bool(converged), float(f), int(iters),
                           canonicalize(spec, theta), float(gn))
    return outcome, trace


def _cluster(spec: GroupSpec, points: list[np.ndarray]) -> list[np.ndarray]:
    reps: list[np.ndarray] = []
    for p in points:
        if not any(angle_distance(spec, p, r) <= CLUSTER_TOL for r in reps):
            reps.append(p)
    return reps


def maximize(spec: GroupSpec, config: OptimizerConfig | None = None, backend=None) -> OptimizerReport:
    """Multistart maximisation of the log-volume over the whole torus."""
    config = config or OptimizerConfig()
    seeds = np.random.SeedSequence(config.seed).spawn(config.starts)

    def one(ss):
        return run_start(spec, config, ss, backend=backend)[0]

    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            outcomes = list(pool.map(one, seeds))
    else:
        outcomes = [one(ss) for ss in seeds]
    good = [o for o in outcomes if o.converged and math.isfinite(o.log_volume)]
    if not good:
        raise OptimizerFailure(
            f"{spec.name}: none of {config.starts} starts converged to a finite log-volume"
        )
    best = max(good, key=lambda o: o.log_volume)
    optima = _cluster(spec, [o.point for o in good])
    return OptimizerReport(best.point, best.log_volume, outcomes, len(optima), optima)


def lagrange_residual_A(t, n: int) -> float:
    """Spread of cot(gap/2) over the n circular gaps of an SU(n) point.

    Zero exactly when the eigenvalues are equally spaced.
    """
    theta = np.asarray(t, dtype=float).reshape(-1)
    if theta.size != n:
        raise ContractError(f"expected {n} angles, got {theta.size}")
    if np.any(np.diff(theta) < 0):
        raise ContractError("angles must be sorted ascending")
    gaps = np.append(np.diff(theta), theta[0] + TWO_PI - theta[-1])
    zero = np.flatnonzero(gaps <= 0)
    if zero.size:
        raise SingularityError(f"gap {int(zero[0])} is zero", int(zero[0]))
    cots = 1.0 / np.tan(0.5 * gaps)
    return float(np.max(cots) - np.min(cots))
