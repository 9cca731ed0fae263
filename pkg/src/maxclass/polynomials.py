"""Exact rational polynomials, certified real roots on [-1, 1], discriminants.

Coefficients are stored as :class:`fractions.Fraction` in ascending degree
order.  Floating point enters only when roots are located; every root
bracket is certified by exact sign evaluation at dyadic rationals.

Roots are returned in ascending order.  Products written over descending
roots ``x_1 > ... > x_n`` therefore appear here with absolute values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np
from numpy.polynomial import chebyshev

from .errors import ContractError, RootIsolationError

__all__ = [
    "RationalPolynomial",
    "eval_and_derivatives",
    "real_roots_unit_interval",
    "sqrt_discriminant",
    "log_sqrt_discriminant",
    "modified_sqrt_discriminant",
    "log_modified_sqrt_discriminant",
    "reconstruct",
    "resultant",
    "discriminant",
    "rational_roots",
    "sturm_sequence",
    "sturm_count",
]

ROOT_TOL = 1e-13


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.strip())
    if isinstance(c, float):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


@dataclass(frozen=True)
class RationalPolynomial:
    """Polynomial with exact rational coefficients, ascending degree.

    Trailing zeros are stripped on construction, so the zero polynomial has
    no coefficients and degree -1.
    """

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        cs = [_frac(c) for c in self.coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coefficients", tuple(cs))

    @classmethod
    def from_coefficients(cls, coefficients) -> "RationalPolynomial":
        return cls(tuple(coefficients))

    @classmethod
    def monomial(cls, degree: int, coefficient=1) -> "RationalPolynomial":
        return cls((0,) * degree + (coefficient,))

    @classmethod
    def from_rational_roots(cls, roots) -> "RationalPolynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-_frac(r), 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_monic(self) -> bool:
        return self.leading == 1

    def monic(self) -> "RationalPolynomial":
        if self.is_zero():
            raise ContractError("the zero polynomial has no monic form")
        lead = self.leading
        return RationalPolynomial(tuple(c / lead for c in self.coefficients))

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return Fraction(0)

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, float) else 0.0
        if isinstance(x, float):
            for c in reversed(self.coefficients):
                acc = acc * x + float(c)
            return acc
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self, k: int = 1) -> "RationalPolynomial":
        cs = list(self.coefficients)
        for _ in range(k):
            cs = [i * c for i, c in enumerate(cs)][1:]
        return RationalPolynomial(tuple(cs))

    def _coerce(self, other) -> "RationalPolynomial":
        if isinstance(other, RationalPolynomial):
            return other
        return RationalPolynomial((_frac(other),))

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coefficients), len(other.coefficients))
        return RationalPolynomial(
            tuple(self.coefficient(i) + other.coefficient(i) for i in range(n))
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalPolynomial):
            s = _frac(other)
            return RationalPolynomial(tuple(c * s for c in self.coefficients))
        if self.is_zero() or other.is_zero():
            return RationalPolynomial(())
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return RationalPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = RationalPolynomial((1,))
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coefficients)
        dd = other.degree
        lead = other.leading
        quot = [Fraction(0)] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1 - dd, -1, -1):
            q = rem[k + dd] / lead
            quot[k] = q
            if q:
                for j, b in enumerate(other.coefficients):
                    rem[k + j] -= q * b
        return RationalPolynomial(tuple(quot)), RationalPolynomial(tuple(rem[:dd]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other) -> bool:
        """True when ``self`` divides ``other`` exactly."""
        return (self._coerce(other) % self).is_zero()

    def to_floats(self) -> np.ndarray:
        return np.array([float(c) for c in self.coefficients], dtype=float)

    def to_strings(self) -> list[str]:
        if self.is_zero():
            return ["0"]
        return [str(c) for c in self.coefficients]

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "RationalPolynomial":
        return cls(tuple(Fraction(s) for s in items))

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                terms.append(f"+ {mono}")
            elif mono and c == -1:
                terms.append(f"- {mono}")
            else:
                sign = "-" if c < 0 else "+"
                body = str(abs(c))
                if "/" in body and mono:
                    body = f"({body})"
                terms.append(f"{sign} {body}{mono}")
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


# -- floating-point evaluation -------------------------------------------------


def eval_and_derivatives(p: RationalPolynomial, x: float, order: int = 1) -> tuple[float, ...]:
    """Return ``(p(x), p'(x), ..., p^(order)(x))`` in floating point.

    Uses repeated synthetic division (Taylor coefficients at ``x``).
    """
    if order < 0 or order > max(p.degree, 0) + 1:
        raise ContractError(f"order {order} exceeds degree + 1 = {p.degree + 1}")
    cs = [float(c) for c in p.coefficients] or [0.0]
    x = float(x)
    n = len(cs) - 1
    taylor = []
    work = cs[:]
    for k in range(order + 1):
        if k > n:
            taylor.append(0.0)
            continue
        acc = work[n]
        for i in range(n - 1, k - 1, -1):
            acc = acc * x + work[i]
            work[i] = acc
        taylor.append(acc)
    return tuple(math.factorial(k) * t for k, t in enumerate(taylor))


# -- exact sign evaluation ------------------------------------------------------


def _integer_coefficients(p: RationalPolynomial) -> list[int]:
    lcm = 1
    for c in p.coefficients:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in p.coefficients]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints] if g > 1 else ints


def _sign_int(coeffs: list[int], x) -> int:
    """Exact sign of the integer polynomial at a rational point."""
    x = x if isinstance(x, Fraction) else Fraction(x)
    a, b = x.numerator, x.denominator
    acc = 0
    bpow = 1
    # b^n p(a/b) = sum c_i a^i b^(n-i), accumulated from the top degree down
    for c in reversed(coeffs):
        acc = acc * a + c * bpow
        bpow *= b
    return (acc > 0) - (acc < 0)


def _deflate(coeffs: list[int], root: int) -> list[int]:
    """Divide an integer polynomial by (x - root), root in {-1, 1}."""
    n = len(coeffs) - 1
    out = [0] * n
    acc = coeffs[n]
    for i in range(n - 1, -1, -1):
        out[i] = acc
        acc = coeffs[i] + acc * root
    if acc != 0:
        raise ArithmeticError("inexact deflation")
    return out


def _to_chebyshev(coeffs: list[int]) -> np.ndarray:
    """Chebyshev-basis coefficients of an integer polynomial, normalised."""
    n = len(coeffs) - 1
    out = [0] * (n + 1)
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        for j in range(k // 2 + 1):
            m = k - 2 * j
            term = c * math.comb(k, j)
            out[m] += term << (n - k + (1 if m > 0 else 0))
    big = max(abs(v) for v in out)
    return np.array([float(Fraction(v, big)) for v in out], dtype=float)


# -- Sturm sequences --------------------------------------------------------------


def sturm_sequence(p: RationalPolynomial) -> list[RationalPolynomial]:
    """Classical Sturm chain p, p', -rem(...), ... with positive rescaling."""
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r * Fraction(1, abs(r.leading)))
    return seq


def _sign_changes(values) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(seq: list[RationalPolynomial], a, b) -> int:
    """Number of distinct real roots in the half-open interval (a, b]."""
    ints = [_integer_coefficients(s) for s in seq]
    va = _sign_changes(_sign_int(c, a) for c in ints)
    vb = _sign_changes(_sign_int(c, b) for c in ints)
    return va - vb


def _sturm_isolate(p: RationalPolynomial, lo: Fraction, hi: Fraction, max_depth: int = 80):
    """Dyadic bisection driven by Sturm counts; returns (brackets, total)."""
    seq = sturm_sequence(p)
    total = sturm_count(seq, lo, hi)
    out = []
    stack = [(lo, hi, total, 0)]
    while stack:
        a, b, count, depth = stack.pop()
        if count == 0:
            continue
        if count == 1:
            out.append((a, b))
            continue
        if depth >= max_depth:
            out.append((a, b))
            continue
        m = (a + b) / 2
        left = sturm_count(seq, a, m)
        stack.append((m, b, count - left, depth + 1))
        stack.append((a, m, left, depth + 1))
    out.sort()
    return out, total


# -- roots ------------------------------------------------------------------------


def _refine(coeffs: list[int], cheb: np.ndarray, dcheb: np.ndarray,
            lo: Fraction, hi: Fraction, guess: float) -> float:
    """Newton in the Chebyshev basis, guarded by the exact bracket."""
    s_lo = _sign_int(coeffs, lo)
    flo, fhi = float(lo), float(hi)
    x = guess if flo < guess < fhi else 0.5 * (flo + fhi)
    for _ in range(60):
        fx = chebyshev.chebval(x, cheb)
        dfx = chebyshev.chebval(x, dcheb)
        if dfx == 0 or not math.isfinite(fx):
            break
        step = fx / dfx
        nxt = x - step
        if not (flo < nxt < fhi):
            break
        x = nxt
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    # certify |x - root| <= ROOT_TOL, else fall back to exact bisection
    a = Fraction(max(flo, x - ROOT_TOL))
    b = Fraction(min(fhi, x + ROOT_TOL))
    sa, sb = _sign_int(coeffs, a), _sign_int(coeffs, b)
    if sa == 0:
        return float(a)
    if sb == 0:
        return float(b)
    if sa != sb:
        return x
    a, b = lo, hi
    while b - a > ROOT_TOL:
        m = Fraction((float(a) + float(b)) / 2)
        if not (a < m < b):
            break
        sm = _sign_int(coeffs, m)
        if sm == 0:
            return float(m)
        if sm == s_lo:
            a = m
        else:
            b = m
    return float((a + b) / 2)


def real_roots_unit_interval(p: RationalPolynomial) -> np.ndarray:
    """All roots of ``p`` as a strictly increasing float array in [-1, 1].

    ``p`` must have only real, simple roots in [-1, 1].  Exact roots at
    +-1 are divided out first.  Candidates for the interior roots come from
    the Chebyshev colleague matrix; they are accepted only when exact sign
    evaluation between neighbours exhibits one sign change per root.
    Otherwise a Sturm-sequence bisection isolates the roots.  Each root is
    refined and then certified to lie within 1e-13 of the returned value.

    Raises :class:`RootIsolationError` when fewer than ``degree`` roots
    can be isolated in [-1, 1].
    """
    if p.is_zero():
        raise ContractError("the zero polynomial has no finite root set")
    n = p.degree
    if n == 0:
        return np.empty(0)
    coeffs = _integer_coefficients(p)
    endpoint_roots = []
    for r in (1, -1):
        mult = 0
        while len(coeffs) > 1 and _sign_int(coeffs, r) == 0:
            coeffs = _deflate(coeffs, r)
            mult += 1
        if mult > 1:
            raise RootIsolationError(
                f"root {r} has multiplicity {mult}; roots must be simple", [(r, r)]
            )
        if mult:
            endpoint_roots.append(float(r))
    m = len(coeffs) - 1
    interior: list[float] = []
    if m > 0:
        cheb = _to_chebyshev(coeffs)
        dcheb = chebyshev.chebder(cheb)
        brackets = _bracket_from_candidates(coeffs, cheb)
        guesses = None
        if brackets is None:
            brackets, total = _sturm_isolate(
                RationalPolynomial(tuple(coeffs)), Fraction(-1), Fraction(1)
            )
            if total < m or len(brackets) < m:
                raise RootIsolationError(
                    f"found {total} distinct roots in [-1, 1] for degree {n}"
                    f" after removing {len(endpoint_roots)} endpoint roots",
                    [(float(a), float(b)) for a, b in brackets],
                )
        else:
            brackets, guesses = brackets
        for i, (lo, hi) in enumerate(brackets):
            g = guesses[i] if guesses is not None else 0.5 * (float(lo) + float(hi))
            interior.append(_refine(coeffs, cheb, dcheb, lo, hi, g))
    roots = np.array(sorted(interior + endpoint_roots), dtype=float)
    if np.any(np.diff(roots) <= 0):
        raise RootIsolationError("isolated roots are not distinct", [(r, r) for r in roots])
    return roots


def _bracket_from_candidates(coeffs: list[int], cheb: np.ndarray):
    m = len(coeffs) - 1
    try:
        cand = chebyshev.chebroots(cheb)
    except np.linalg.LinAlgError:
        return None
    if len(cand) != m:
        return None
    if np.any(np.abs(np.imag(cand)) > 1e-6):
        return None
    xs = np.sort(np.real(cand))
    if np.any(np.abs(xs) >= 1) or np.any(np.diff(xs) <= 0):
        return None
    seps = [Fraction(-1)]
    for a, b in zip(xs[:-1], xs[1:]):
        seps.append(Fraction(float(0.5 * (a + b))))
    seps.append(Fraction(1))
    signs = []
    for s in seps:
        sg = _sign_int(coeffs, s)
        if sg == 0:
            return None
        signs.append(sg)
    if any(a == b for a, b in zip(signs, signs[1:])):
        return None
    return list(zip(seps[:-1], seps[1:])), [float(x) for x in xs]


def reconstruct(roots) -> np.ndarray:
    """Float coefficients (ascending) of prod (x - r).

    The float roots are expanded exactly and rounded once at the end; a
    floating-point expansion loses about 1e-9 at degree 40.
    """
    out = [Fraction(1)]
    for r in roots:
        r = Fraction(float(r))
        out = [Fraction(0)] + out
        for i in range(len(out) - 1):
            out[i] -= r * out[i + 1]
    return np.array([float(c) for c in out])


# -- discriminants --------------------------------------------------------------


def log_sqrt_discriminant(roots) -> float:
    """log of prod_{i<k} |r_k - r_i|; -inf for repeated roots."""
    r = np.asarray(roots, dtype=float)
    total = 0.0
    for i in range(len(r) - 1):
        d = np.abs(r[i + 1:] - r[i])
        if np.any(d == 0):
            return -math.inf
        total += float(np.sum(np.log(d)))
    return total


def sqrt_discriminant(roots) -> float:
    """Positive square root of the discriminant, prod_{i<k} |r_k - r_i|."""
    return math.exp(log_sqrt_discriminant(roots))


def _weight_log(family: str, r: np.ndarray) -> float:
    if family == "B":
        w = 1.0 - r
        if np.any(w <= 0):
            return -math.inf
        return 0.5 * float(np.sum(np.log(w)))
    if family == "C":
        w = (1.0 - r) * (1.0 + r)
        if np.any(w <= 0):
            return -math.inf
        return 0.5 * float(np.sum(np.log(w)))
    raise ContractError(f"modified discriminant is defined for B and C, not {family!r}")


def log_modified_sqrt_discriminant(family: str, roots) -> float:
    r = np.asarray(roots, dtype=float)
    return _weight_log(family, r) + log_sqrt_discriminant(r)


def modified_sqrt_discriminant(family: str, roots) -> float:
    """Type-B or type-C weighted square-root discriminant.

    B: sqrt(prod (1 - r_i)) * D(r);  C: prod sqrt(1 - r_i^2) * D(r).
    Degenerate inputs give 0.
    """
    return math.exp(log_modified_sqrt_discriminant(family, roots))


def _det(rows):
    """Determinant by Gaussian elimination (exact for Fractions)."""
    a = [list(r) for r in rows]
    n = len(a)
    det = 1
    exact = all(not isinstance(v, float) for row in a for v in row)
    for col in range(n):
        if exact:
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        else:
            piv = max(range(col, n), key=lambda r: abs(a[r][col]))
            if a[piv][col] == 0:
                piv = None
        if piv is None:
            return 0 * det
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        pv = a[col][col]
        det = det * pv
        for r in range(col + 1, n):
            f = a[r][col] / pv
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def resultant(p: Sequence, q: Sequence):
    """Resultant of two polynomials given as ascending coefficient lists.

    Computed as the Sylvester-matrix determinant; exact when the
    coefficients are Fractions or ints.
    """
    p = list(p.coefficients if isinstance(p, RationalPolynomial) else p)
    q = list(q.coefficients if isinstance(q, RationalPolynomial) else q)
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    if size == 0:
        return 1
    zero = 0.0 if any(isinstance(v, float) for v in p + q) else Fraction(0)
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(q)):
            row[i + j] = c
        rows.append(row)
    return _det(rows)


def discriminant(p: Sequence):
    """Classical discriminant (-1)^(n(n-1)/2) Res(p, p') / lead(p)."""
    cs = list(p.coefficients if isinstance(p, RationalPolynomial) else p)
    n = len(cs) - 1
    dp = [i * c for i, c in enumerate(cs)][1:]
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(cs, dp) / cs[-1]


def rational_roots(p: RationalPolynomial) -> dict[Fraction, int]:
    """Rational roots with multiplicity, by the rational root theorem."""
    coeffs = _integer_coefficients(p)
    found: dict[Fraction, int] = {}
    while coeffs and coeffs[0] == 0:
        found[Fraction(0)] = found.get(Fraction(0), 0) + 1
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return found
    a0, an = abs(coeffs[0]), abs(coeffs[-1])
    num = [d for d in range(1, a0 + 1) if a0 % d == 0]
    den = [d for d in range(1, an + 1) if an % d == 0]
    cands = sorted({Fraction(s * a, b) for a in num for b in den for s in (1, -1)})
    q = RationalPolynomial(tuple(coeffs))
    for c in cands:
        lin = RationalPolynomial((-c, 1))
        while q.degree > 0:
            quo, rem = divmod(q, lin)
            if not rem.is_zero():
                break
            found[c] = found.get(c, 0) + 1
            q = quo
    return found
