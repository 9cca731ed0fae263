"""Positive roots on the maximal torus and the Weyl-Jacobian volume.

The class volume through a torus element is proportional to

    V(t) = prod over positive roots a of sin^2(a(log t) / 2)

with the proportionality constant fixed to 1, so only maximisers and
ratios of V carry meaning.  Angle coordinates per family:

* ``A`` (SU(n)): n eigenvalue angles theta_0..theta_{n-1}, sum = 0 mod 2 pi
* ``B`` (SO(2n+1)), ``C`` (Sp(2n)), ``D`` (SO(2n)): n rotation angles
* ``G2``: two short-root values (theta_1, theta_2); theta_3 = -theta_1 - theta_2

Root ordering is fixed: single-angle roots first (B, C), then pairs
(j, k), j < k, in lexicographic order with the difference before the sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from ._backend import kernels
from .errors import ContractError, SingularityError

__all__ = [
    "FAMILIES",
    "GroupSpec",
    "root_encoding",
    "positive_root_values",
    "log_volume",
    "log_volume_gradient",
    "project_gradient",
    "canonicalize",
    "angle_distance",
    "in_fundamental_domain",
]

FAMILIES = ("A", "B", "C", "D", "G2")
TWO_PI = 2.0 * math.pi

# Angles this close below 2 pi wrap to just below 0, so that a point sitting
# on the periodic seam has one canonical representative.
WRAP_TOL = 1e-8

_MIN_RANK = {"A": 2, "B": 1, "C": 1, "D": 2, "G2": 2}


@dataclass(frozen=True)
class GroupSpec:
    """A compact simple group: family letter plus rank.

    For ``A`` the rank is the matrix size n of SU(n); for B, C, D it is the
    number of rotation angles; G2 always has rank 2.
    """

    family: str
    rank: int = 2

    def __post_init__(self):
        fam = str(self.family).upper()
        if fam not in FAMILIES:
            raise ContractError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "family", fam)
        if isinstance(self.rank, bool) or int(self.rank) != self.rank:
            raise ContractError(f"rank must be an integer, got {self.rank!r}")
        rank = int(self.rank)
        object.__setattr__(self, "rank", rank)
        if fam == "G2" and rank != 2:
            raise ContractError("G2 has rank 2")
        if rank < _MIN_RANK[fam]:
            raise ContractError(f"family {fam} needs rank >= {_MIN_RANK[fam]}, got {rank}")

    @property
    def dim(self) -> int:
        """Number of stored angle coordinates."""
        return 2 if self.family == "G2" else self.rank

    @property
    def num_positive_roots(self) -> int:
        n = self.rank
        return {
            "A": n * (n - 1) // 2,
            "B": n * n,
            "C": n * n,
            "D": n * (n - 1),
            "G2": 6,
        }[self.family]

    @property
    def name(self) -> str:
        n = self.rank
        return {
            "A": f"SU({n})",
            "B": f"SO({2 * n + 1})",
            "C": f"Sp({2 * n})",
            "D": f"SO({2 * n})",
            "G2": "G2",
        }[self.family]


@lru_cache(maxsize=None)
def root_encoding(spec: GroupSpec) -> tuple[np.ndarray, np.ndarray]:
    """Sparse integer encoding ``(idx, coef)`` of the positive roots.

    Root i evaluates to ``coef[i,0]*theta[idx[i,0]] + coef[i,1]*theta[idx[i,1]]``.
    """
    n, fam = spec.rank, spec.family
    rows: list[tuple[int, int, int, int]] = []
    if fam == "G2":
        rows = [(0, 1, 0, 0), (1, 1, 1, 0), (0, 1, 1, 1),
                (0, 1, 1, -1), (0, 1, 1, 2), (0, 2, 1, 1)]
    else:
        if fam == "B":
            rows += [(j, 1, j, 0) for j in range(n)]
        elif fam == "C":
            rows += [(j, 2, j, 0) for j in range(n)]
        for j in range(n):
            for k in range(j + 1, n):
                rows.append((k, 1, j, -1))
                if fam != "A":
                    rows.append((k, 1, j, 1))
    arr = np.array(rows, dtype=np.int32).reshape(-1, 4)
    idx = np.ascontiguousarray(arr[:, [0, 2]])
    coef = np.ascontiguousarray(arr[:, [1, 3]])
    idx.setflags(write=False)
    coef.setflags(write=False)
    return idx, coef


def _as_point(spec: GroupSpec, t) -> np.ndarray:
    theta = np.asarray(t, dtype=float).reshape(-1)
    if theta.size != spec.dim:
        raise ContractError(
            f"{spec.name} torus point needs {spec.dim} angles, got {theta.size}"
        )
    return np.ascontiguousarray(theta)


def positive_root_values(spec: GroupSpec, t) -> np.ndarray:
    """Values of the positive roots at log(t), in the documented order."""
    idx, coef = root_encoding(spec)
    return kernels.root_values(idx, coef, _as_point(spec, t))


def log_volume(spec: GroupSpec, t) -> float:
    """sum over positive roots of 2 log|sin(a/2)|; -inf on the singular set."""
    idx, coef = root_encoding(spec)
    return kernels.log_volume(idx, coef, _as_point(spec, t))


def log_volume_gradient(spec: GroupSpec, t) -> np.ndarray:
    """Gradient of :func:`log_volume` in the stored angle coordinates.

    Each root contributes ``cot(a/2)`` times its coefficient vector.
    Raises :class:`SingularityError` on the singular set.
    """
    idx, coef = root_encoding(spec)
    _, grad, bad = kernels.log_volume_grad(idx, coef, _as_point(spec, t))
    if bad >= 0:
        raise SingularityError(
            f"{spec.name}: positive root #{bad} is a multiple of 2 pi; gradient undefined",
            int(bad),
        )
    return grad


def project_gradient(spec: GroupSpec, grad) -> np.ndarray:
    """Project onto the tangent space of the SU(n) sum constraint (A only)."""
    g = np.asarray(grad, dtype=float)
    if spec.family == "A":
        return g - g.mean()
    return g


def _wrap(x: np.ndarray) -> np.ndarray:
    return x - TWO_PI * np.floor((x + WRAP_TOL) / TWO_PI)


def _fold(x: np.ndarray) -> np.ndarray:
    r = np.mod(x, TWO_PI)
    return np.where(r > math.pi, TWO_PI - r, r)


def canonicalize(spec: GroupSpec, t) -> np.ndarray:
    """Map an angle vector to its representative in the fundamental domain.

    A: reduce mod 2 pi and sort.  B, C, D: reduce each angle to [0, pi]
    using sign changes, then sort (for D this identifies classes related by
    an odd number of sign changes, which V cannot distinguish).  G2: the
    lexicographically smallest of the 12 Weyl images reduced mod 2 pi.
    """
    theta = _as_point(spec, t)
    fam = spec.family
    if fam == "A":
        return np.sort(_wrap(theta))
    if fam in ("B", "C", "D"):
        return np.sort(_fold(theta))
    t1, t2 = theta
    triple = (t1, t2, -t1 - t2)
    cands = []
    for a, b, _ in permutations(triple):
        for s in (1.0, -1.0):
            cands.append(_wrap(np.array([s * a, s * b])))
    first = min(c[0] for c in cands)
    near = [c for c in cands if c[0] <= first + 1e-9]
    return min(near, key=lambda c: (c[1], c[0])).copy()


def angle_distance(spec: GroupSpec, a, b) -> float:
    """Max per-angle distance between two canonical points.

    A and G2 angles are compared on the circle.
    """
    x = _as_point(spec, a)
    y = _as_point(spec, b)
    d = np.abs(x - y)
    if spec.family in ("A", "G2"):
        d = np.minimum(d, TWO_PI - np.mod(d, TWO_PI))
    return float(np.max(d))


def in_fundamental_domain(spec: GroupSpec, t, tol: float = 1e-9) -> bool:
    theta = _as_point(spec, t)
    fam = spec.family
    if fam == "G2":
        return bool(np.all(theta >= -WRAP_TOL - tol) and np.all(theta < TWO_PI))
    if np.any(np.diff(theta) < -tol):
        return False
    if fam == "A":
        if theta[0] < -WRAP_TOL - tol or theta[-1] > TWO_PI + tol:
            return False
        s = float(np.sum(theta)) / TWO_PI
        return abs(s - round(s)) * TWO_PI <= tol
    return bool(theta[0] >= -tol and theta[-1] <= math.pi + tol)
