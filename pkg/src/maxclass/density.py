"""Equidistribution of optimal angles and Sturm-comparison zero counting.

For v'' = -lam^2 k(x)^2 v with v(x0) = 1, v'(x0) = 0 and
beta <= k <= alpha on [x0 - delta, x0 + delta], the number N of zeros in
that window satisfies

    2 delta lam beta / pi - 1  <=  N  <=  2 delta lam alpha / pi + 2,

and N / (2 lam delta) tends to k(x0) / pi.  With k(x) = 1/sqrt(1 - x^2)
and lam = sqrt(n(n-1)) this is the density of the optimal cosines.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import ContractError, IntegrationError

__all__ = [
    "DensityReport",
    "OscillationProblem",
    "equidistribution_report",
    "count_ode_zeros",
    "ode_zeros",
    "sturm_bounds",
    "limiting_density",
    "empirical_density",
    "COEFFICIENTS",
]

COEFFICIENTS = ("constant", "chebweight")
ODE_TOL = 1e-10
LOCATE_TOL = 1e-9


@dataclass(frozen=True)
class DensityReport:
    n: int
    ks_statistic: float
    max_gap_deviation: float


def equidistribution_report(angles) -> DensityReport:
    """KS distance to the uniform law on [0, pi] and worst gap deviation.

    Gaps are taken between consecutive angles only and compared to pi/n.
    """
    theta = np.asarray(angles, dtype=float).reshape(-1)
    n = theta.size
    if n == 0:
        raise ContractError("equidistribution_report needs at least one angle")
    if np.any(np.diff(theta) < 0):
        raise ContractError("angles must be sorted ascending")
    if theta[0] < -1e-12 or theta[-1] > math.pi + 1e-12:
        raise ContractError("angles must lie in [0, pi]")
    cdf = np.clip(theta / math.pi, 0.0, 1.0)
    i = np.arange(1, n + 1)
    ks = float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))
    gaps = np.diff(theta)
    dev = float(np.max(np.abs(gaps - math.pi / n))) if gaps.size else 0.0
    return DensityReport(n, ks, dev)


@dataclass(frozen=True)
class OscillationProblem:
    """v'' = -lam^2 k(x)^2 v on [center - half_width, center + half_width].

    ``coefficient`` is ``"constant"`` (k = ``constant``) or ``"chebweight"``
    (k = 1/sqrt(1 - x^2)).  ``alpha`` and ``beta`` default to the extremes
    of k on the window.
    """

    coefficient: str
    lam: float
    center: float
    half_width: float
    constant: float = 1.0
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.coefficient not in COEFFICIENTS:
            raise ContractError(f"coefficient must be one of {COEFFICIENTS}")
        if not (self.lam > 0 and self.half_width > 0):
            raise ContractError("lam and half_width must be positive")
        if self.coefficient == "constant" and not self.constant > 0:
            raise ContractError("constant coefficient must be positive")
        lo, hi = self.window
        if self.coefficient == "chebweight" and not (-1 < lo and hi < 1):
            raise ContractError(f"window [{lo}, {hi}] leaves the open interval (-1, 1)")
        kmin, kmax = self.k_range()
        if self.alpha is None:
            object.__setattr__(self, "alpha", kmax)
        if self.beta is None:
            object.__setattr__(self, "beta", kmin)
        if not 0 < self.beta <= self.alpha:
            raise ContractError("bounds must satisfy 0 < beta <= alpha")
        if self.beta > kmin * (1 + 1e-12) or self.alpha < kmax * (1 - 1e-12):
            raise ContractError("beta <= k <= alpha must hold on the window")

    @property
    def window(self) -> tuple[float, float]:
        return self.center - self.half_width, self.center + self.half_width

    def k(self, x):
        if self.coefficient == "constant":
            return self.constant + 0 * np.asarray(x, dtype=float)
        x = np.asarray(x, dtype=float)
        return 1.0 / np.sqrt((1.0 - x) * (1.0 + x))

    def k_range(self) -> tuple[float, float]:
        if self.coefficient == "constant":
            return self.constant, self.constant
        lo, hi = self.window
        ks = [float(self.k(lo)), float(self.k(hi))]
        kmin = 1.0 if lo <= 0 <= hi else min(ks)
        return kmin, max(ks)


def ode_zeros(problem: OscillationProblem, backend=None) -> np.ndarray:
    """Sorted zero locations of v in the window (each located to 1e-9)."""
    k = backend if backend is not None else kernels
    kind = 0 if problem.coefficient == "constant" else 1
    lo, hi = problem.window
    out = []
    for end in (hi, lo):
        crossings, status, reached = k.oscillator_crossings(
            kind, float(problem.lam), float(problem.constant), float(problem.center),
            float(end), ODE_TOL, ODE_TOL, LOCATE_TOL,
        )
        if status:
            raise IntegrationError(
                f"step size underflow at x = {reached!r} integrating towards {end!r}", reached
            )
        out.extend(crossings)
    return np.sort(np.array(out, dtype=float))


def count_ode_zeros(problem: OscillationProblem, backend=None) -> int:
    """Number of zeros of v in the closed window, integrating out from the center."""
    return int(ode_zeros(problem, backend).size)


def sturm_bounds(lam: float, delta: float, alpha: float, beta: float) -> tuple[float, float]:
    """Comparison bounds (2 delta lam beta/pi - 1, 2 delta lam alpha/pi + 2)."""
    if not (lam > 0 and delta > 0 and alpha > 0 and beta > 0):
        raise ContractError("sturm_bounds needs positive arguments")
    if beta > alpha:
        raise ContractError("sturm_bounds needs beta <= alpha")
    return (2 * delta * lam * beta / math.pi - 1, 2 * delta * lam * alpha / math.pi + 2)


def limiting_density(x0: float) -> float:
    """1 / (pi sqrt(1 - x0^2)), the limiting density of optimal cosines."""
    if not abs(x0) < 1:
        raise ContractError(f"limiting density is defined on (-1, 1), got {x0}")
    return 1.0 / (math.pi * math.sqrt((1.0 - x0) * (1.0 + x0)))


def empirical_density(roots, x0: float, half_width: float) -> float:
    """Roots in [x0 - w, x0 + w] divided by (2 w * number of roots)."""
    r = np.asarray(roots, dtype=float)
    count = int(np.count_nonzero((r >= x0 - half_width) & (r <= x0 + half_width)))
    return count / (2 * half_width * r.size)
