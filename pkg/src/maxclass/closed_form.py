"""Closed-form largest conjugacy classes.

* A: equally spaced eigenvalues.
* B, C, D: the cosines of the rotation angles are the roots of a monic
  polynomial fixed by a second-order linear ODE; its coefficients follow
  from a downward recurrence in exact rationals.
* G2: the short-root cosines are the roots of x^3 + 3/5 x^2 - 3/5 x - 7/25.

Defining identities, each checked to vanish exactly:

    D:  (1 - x^2) p'' + n(n-1) p = 0
    B:  (1 + x)[(1 - x)^2 p'' - (1 - x) p'] + n^2 (1 - x) p = 0
    C:  (1 - x^2)^2 p'' - 2x(1 - x^2) p' + (n^2 + n)(1 - x^2) p = 0

Dividing the B identity by (1 - x) gives
(1 - x^2) p'' - (1 + x) p' + n^2 p = 0, and the C identity by (1 - x^2)
gives the Legendre equation; the recurrences below are read off those.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import CertificateError, ContractError
from .polynomials import (
    RationalPolynomial,
    log_modified_sqrt_discriminant,
    log_sqrt_discriminant,
    rational_roots,
    real_roots_unit_interval,
)
from .root_systems import (
    GroupSpec,
    canonicalize,
    log_volume,
    log_volume_gradient,
    project_gradient,
)

__all__ = [
    "SolveResult",
    "solve",
    "solve_A",
    "solve_B",
    "solve_C",
    "solve_D",
    "solve_G2",
    "family_polynomial",
    "ode_residual",
    "g2_certificate_suite",
    "log_volume_from_cosines",
    "G2_POLYNOMIAL",
    "G2_QUARTIC",
]

STATIONARITY_TOL = 1e-8

X = RationalPolynomial((0, 1))
ONE = RationalPolynomial((1,))

G2_POLYNOMIAL = RationalPolynomial.from_strings(["-7/25", "-3/5", "3/5", "1"])
# 5A^4 - 12A^3 - 54A^2 + 108A + 81, whose roots are the candidate sums of
# the three short-root cosines at a critical point
G2_QUARTIC = RationalPolynomial((81, 108, -54, -12, 5))


@dataclass
class SolveResult:
    spec: GroupSpec
    angles: np.ndarray
    cosines: np.ndarray
    polynomial: RationalPolynomial | None
    log_volume: float
    certificates: dict[str, Any] = field(default_factory=dict)


def _recurrence(n: int, family: str) -> list[Fraction]:
    a = [Fraction(0)] * (n + 3)
    a[n] = Fraction(1)
    for m in range(n - 1, -1, -1):
        if family == "D":
            num = -(m + 2) * (m + 1) * a[m + 2]
            den = n * (n - 1) - m * (m - 1)
        elif family == "B":
            num = -(m + 2) * (m + 1) * a[m + 2] + (m + 1) * a[m + 1]
            den = n * n - m * m
        else:
            num = -(m + 2) * (m + 1) * a[m + 2]
            den = n * (n + 1) - m * (m + 1)
        a[m] = num / den
    return a[: n + 1]


def family_polynomial(family: str, n: int) -> RationalPolynomial:
    """Monic degree-n polynomial whose roots are the optimal cosines."""
    if family not in ("B", "C", "D"):
        raise ContractError(f"no defining ODE polynomial for family {family!r}")
    GroupSpec(family, n)
    return RationalPolynomial(tuple(_recurrence(n, family)))


def ode_residual(family: str, n: int, p: RationalPolynomial) -> RationalPolynomial:
    """Left side of the family's defining identity, evaluated at ``p``."""
    d1, d2 = p.derivative(), p.derivative(2)
    one_minus_x = ONE - X
    one_minus_x2 = ONE - X * X
    if family == "D":
        return one_minus_x2 * d2 + p * (n * (n - 1))
    if family == "B":
        w = one_minus_x * one_minus_x * d2 - one_minus_x * d1
        return (ONE + X) * w + one_minus_x * p * (n * n)
    if family == "C":
        w = one_minus_x2 * one_minus_x2 * d2 - X * one_minus_x2 * d1 * 2
        return w + one_minus_x2 * p * (n * n + n)
    raise ContractError(f"no defining identity for family {family!r}")


def log_volume_from_cosines(family: str, cosines) -> float:
    """log V rebuilt from discriminant surrogates of the cosines.

    Each pair of roots theta_k -+ theta_j contributes (x_j - x_k)^2 / 4,
    a B short root contributes (1 - x)/2 and a C long root (1 - x^2).
    """
    x = np.asarray(cosines, dtype=float)
    n = x.size
    pairs = n * (n - 1) // 2
    ln2 = math.log(2.0)
    if family == "D":
        return 2 * log_sqrt_discriminant(x) - 2 * pairs * ln2
    if family == "B":
        return 2 * log_modified_sqrt_discriminant("B", x) - (n + 2 * pairs) * ln2
    if family == "C":
        return 2 * log_modified_sqrt_discriminant("C", x) - 2 * pairs * ln2
    if family == "G2":
        return 2 * log_sqrt_discriminant(x) - 6 * ln2
    raise ContractError(f"no cosine parametrisation for family {family!r}")


def _stationarity(spec: GroupSpec, angles) -> float:
    g = project_gradient(spec, log_volume_gradient(spec, angles))
    return float(np.linalg.norm(g))


def _finish(spec, angles, cosines, poly, certs, checks) -> SolveResult:
    angles = canonicalize(spec, angles)
    certs["gradient_norm"] = _stationarity(spec, angles)
    checks["stationary"] = certs["gradient_norm"] <= STATIONARITY_TOL
    certs.update({f"check_{k}": bool(v) for k, v in checks.items()})
    failed = [k for k, v in checks.items() if not v]
    if failed:
        raise CertificateError(
            f"{spec.name}: closed-form certificate failed: {', '.join(failed)}", failed
        )
    return SolveResult(spec, angles, np.asarray(cosines, dtype=float), poly,
                       log_volume(spec, angles), certs)


def solve_A(n: int) -> SolveResult:
    """SU(n): eigenvalues equally spaced on the unit circle, determinant 1."""
    spec = GroupSpec("A", n)
    k = np.arange(n)
    if n % 2:
        angles = 2.0 * math.pi * k / n
    else:
        angles = math.pi * (2 * k + 1) / n
    return _finish(spec, angles, np.empty(0), None, {}, {})


def _solve_polynomial_family(family: str, n: int) -> SolveResult:
    spec = GroupSpec(family, n)
    p = family_polynomial(family, n)
    checks: dict[str, bool] = {"ode_residual_zero": ode_residual(family, n, p).is_zero()}
    if family in ("C", "D"):
        checks["parity"] = all(
            c == 0 for k, c in enumerate(p.coefficients) if (n - k) % 2
        )
    if family == "D":
        checks["divisible_by_x2_minus_1"] = RationalPolynomial((-1, 0, 1)).divides(p)
    elif family == "B":
        checks["root_at_minus_1"] = p(Fraction(-1)) == 0
        checks["no_root_at_1"] = p(Fraction(1)) != 0
    else:
        checks["no_root_at_pm1"] = p(Fraction(1)) != 0 and p(Fraction(-1)) != 0
    cosines = real_roots_unit_interval(p)
    angles = np.arccos(np.clip(cosines, -1.0, 1.0))
    certs: dict[str, Any] = {}
    return _finish(spec, angles, cosines, p, certs, checks)


def solve_B(n: int) -> SolveResult:
    """SO(2n+1)."""
    return _solve_polynomial_family("B", n)


def solve_C(n: int) -> SolveResult:
    """Sp(2n)."""
    return _solve_polynomial_family("C", n)


def solve_D(n: int) -> SolveResult:
    """SO(2n)."""
    return _solve_polynomial_family("D", n)


def _g_poly(A, B, x):
    return (x - A / 3) ** 2 * (-3 * x * x + 2 * A * x + A * A - 4 * B) * (1 - x * x)


def g2_certificate_suite(result: SolveResult) -> dict[str, Any]:
    """Algebraic and numerical consistency checks for the G2 answer.

    Returns named values plus ``failed``, the list of checks that did not
    hold.  Exact checks use the rational coefficients; numerical ones use
    the computed cosines alpha < beta < gamma.
    """
    if result.spec.family != "G2" or result.polynomial is None:
        raise ContractError("g2_certificate_suite needs a G2 solve result")
    p = result.polynomial
    alpha, beta, gamma = (float(c) for c in result.cosines)
    out: dict[str, Any] = {}
    failed = []

    # symmetric functions, exact (Vieta) and numerical
    A_exact = -p.coefficient(2)
    B_exact = p.coefficient(1)
    C_exact = -p.coefficient(0)
    out["A_sym"] = A_exact
    out["B_sym"] = B_exact
    out["C_sym"] = C_exact
    A_num = alpha + beta + gamma
    B_num = alpha * beta + beta * gamma + alpha * gamma
    out["A_sym_numeric"] = A_num
    out["B_sym_numeric"] = B_num
    out["C_sym_numeric"] = alpha * beta * gamma
    out["A_minus_B"] = abs(A_num - B_num)
    if out["A_minus_B"] > 1e-12:
        failed.append("A_equals_B")
    if A_exact != B_exact:
        failed.append("A_equals_B_exact")

    # the quartic for A: full rational factorisation
    roots = rational_roots(G2_QUARTIC)
    out["quartic_roots"] = {str(k): v for k, v in sorted(roots.items())}
    if roots != {Fraction(-3, 5): 1, Fraction(-3): 1, Fraction(3): 2}:
        failed.append("quartic_factorisation")
    out["quartic_residual"] = abs(G2_QUARTIC(A_num))
    if out["quartic_residual"] > 1e-12:
        failed.append("quartic_residual")
    # +-3 are the extreme sums of three cosines, so the maximum has A = -3/5;
    # the x^2 remainder coefficient then fixes C.
    interior = [r for r in roots if -3 < r < 3]
    if interior != [Fraction(-3, 5)] or A_exact != Fraction(-3, 5):
        failed.append("A_exact")
    A = Fraction(-3, 5)
    C_from_A = -(A ** 3 - 6 * A ** 2 - 9 * A) / (18 * A)
    out["C_from_quartic"] = C_from_A
    second = -A ** 4 + 2 * A ** 3 + 15 * A ** 2 - (3 * A ** 2 + 18 * A + 27) * C_from_A
    if C_from_A != Fraction(7, 25) or C_exact != C_from_A or second != 0:
        failed.append("C_exact")

    # g - d divisible by p, exactly
    xpoly = RationalPolynomial((0, 1))
    g_exact = _g_poly(A_exact, B_exact, xpoly) * Fraction(1, 3)
    rem = g_exact % p
    out["g_remainder_constant"] = rem.degree <= 0
    out["g_level"] = rem.coefficient(0) * 3
    if not out["g_remainder_constant"]:
        failed.append("g_divisible")
    gvals = [_g_poly(A_num, B_num, v) for v in (alpha, beta, gamma)]
    out["g_values"] = gvals
    out["g_deviation"] = max(gvals) - min(gvals)
    if out["g_deviation"] > 1e-10:
        failed.append("g_equalization")

    stat = (-1 / math.sqrt(1 - alpha ** 2) + 1 / math.sqrt(1 - beta ** 2)
            + 1 / math.sqrt(1 - gamma ** 2))
    out["stationarity_residual"] = abs(stat)
    if abs(stat) > 1e-10:
        failed.append("stationarity")

    # differs from the SO(7) answer by a constant only
    diff = p - family_polynomial("B", 3)
    out["minus_so7_polynomial"] = diff
    if diff.degree > 0 or diff.coefficient(0) != Fraction(-2, 25):
        failed.append("so7_offset")

    out["failed"] = failed
    return out


def solve_G2() -> SolveResult:
    """G2: short-root cosines are the roots of the three-fifths cubic."""
    spec = GroupSpec("G2")
    p = G2_POLYNOMIAL
    cosines = real_roots_unit_interval(p)
    alpha, beta, gamma = cosines
    rho = -math.acos(alpha) + math.acos(beta) + math.acos(gamma)
    if abs(rho) > 1e-10:
        raise CertificateError(f"G2 angle reconstruction failed: rho = {rho:.3e}", ["rho"])
    t1, t2 = math.acos(gamma), math.acos(beta)
    provisional = SolveResult(spec, np.array([t1, t2]), cosines, p, math.nan)
    suite = g2_certificate_suite(provisional)
    certs = {k: v for k, v in suite.items() if k != "failed"}
    certs["rho"] = rho
    if suite["failed"]:
        raise CertificateError(
            f"G2 certificate failed: {', '.join(suite['failed'])}", suite["failed"]
        )
    return _finish(spec, np.array([t1, t2]), cosines, p, certs, {"certificate_suite": True})


def solve(spec: GroupSpec) -> SolveResult:
    if spec.family == "A":
        return solve_A(spec.rank)
    if spec.family == "G2":
        return solve_G2()
    return _solve_polynomial_family(spec.family, spec.rank)
