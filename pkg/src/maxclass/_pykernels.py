"""Pure-Python/numpy implementations of the hot kernels.

Every function here has a compiled twin in ``_kernels.pyx`` with the same
signature and algorithm; ``_backend`` picks one at import time.

Roots are encoded sparsely: root ``i`` takes the value
``coef[i, 0] * theta[idx[i, 0]] + coef[i, 1] * theta[idx[i, 1]]``.
"""
import math

import numpy as np

TWO_PI = 2.0 * math.pi

# Armijo constant, and the relative size below which a predicted increase
# is indistinguishable from rounding in the objective.
ARMIJO = 1e-4
NOISE = 1e-12


def root_values(idx, coef, theta):
    theta = np.asarray(theta, dtype=float)
    return coef[:, 0] * theta[idx[:, 0]] + coef[:, 1] * theta[idx[:, 1]]


def log_volume(idx, coef, theta):
    s = np.sin(0.5 * np.fmod(root_values(idx, coef, theta), TWO_PI))
    if np.any(s == 0.0):
        return -math.inf
    return 2.0 * float(np.sum(np.log(np.abs(s))))


def log_volume_grad(idx, coef, theta):
    """Return ``(log_volume, gradient, singular_root_index)``.

    ``singular_root_index`` is -1 unless some factor vanishes, in which case
    the value is -inf and the gradient is all-NaN.
    """
    theta = np.asarray(theta, dtype=float)
    h = 0.5 * np.fmod(root_values(idx, coef, theta), TWO_PI)
    s = np.sin(h)
    zero = np.flatnonzero(s == 0.0)
    if zero.size:
        return -math.inf, np.full(theta.shape, np.nan), int(zero[0])
    f = 2.0 * float(np.sum(np.log(np.abs(s))))
    cot = np.cos(h) / s
    grad = np.zeros_like(theta)
    np.add.at(grad, idx[:, 0], coef[:, 0] * cot)
    np.add.at(grad, idx[:, 1], coef[:, 1] * cot)
    return f, grad, -1


def _project(g, project):
    if project:
        return g - g.mean()
    return g


def ascend(idx, coef, theta0, project, target_sum, max_iters, grad_tol,
           step_init, shrink, record):
    """Gradient ascent on the log-volume with backtracking line search.

    Returns ``(theta, log_volume, grad_norm, iterations, converged, trace)``
    where ``trace`` holds the accepted log-volumes (empty unless ``record``).
    """
    theta = np.array(theta0, dtype=float)
    n = theta.size
    f, g, _ = log_volume_grad(idx, coef, theta)
    trace = [f] if record else []
    if not math.isfinite(f):
        return theta, f, math.inf, 0, False, np.array(trace)
    g = _project(g, project)
    gn = float(np.sqrt(np.dot(g, g)))
    step = step_init
    it = 0
    converged = gn <= grad_tol
    while not converged and it < max_iters:
        it += 1
        accepted = False
        for _ in range(60):
            cand = theta + step * g
            if project:
                cand += (target_sum - cand.sum()) / n
            fc, gc, _ = log_volume_grad(idx, coef, cand)
            if math.isfinite(fc):
                gain = ARMIJO * step * gn * gn
                if gain > NOISE * max(1.0, abs(f)):
                    accepted = fc >= f + gain
                elif fc >= f - NOISE * max(1.0, abs(f)):
                    # increase is below rounding: require the gradient to shrink
                    gc = _project(gc, project)
                    accepted = float(np.sqrt(np.dot(gc, gc))) < gn
            if accepted:
                break
            step *= shrink
        if not accepted:
            break
        theta = cand
        f = fc
        g = _project(gc, project)
        gn = float(np.sqrt(np.dot(g, g)))
        if record:
            trace.append(f)
        converged = gn <= grad_tol
        step /= shrink
    return theta, f, gn, it, converged, np.array(trace)


# -- oscillator ----------------------------------------------------------------

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_E = (
    35 / 384 - 5179 / 57600,
    0.0,
    500 / 1113 - 7571 / 16695,
    125 / 192 - 393 / 640,
    -2187 / 6784 + 92097 / 339200,
    11 / 84 - 187 / 2100,
    -1 / 40,
)


def _k(kind, c, x):
    if kind == 0:
        return c
    return 1.0 / math.sqrt((1.0 - x) * (1.0 + x))


def _hermite5(t, h, v0, d0, a0, v1, d1, a1):
    t2 = t * t
    t3 = t2 * t
    t4 = t3 * t
    t5 = t4 * t
    h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5
    h1 = t - 6 * t3 + 8 * t4 - 3 * t5
    h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5
    h3 = 10 * t3 - 15 * t4 + 6 * t5
    h4 = -4 * t3 + 7 * t4 - 3 * t5
    h5 = 0.5 * t3 - t4 + 0.5 * t5
    return (h0 * v0 + h1 * h * d0 + h2 * h * h * a0
            + h3 * v1 + h4 * h * d1 + h5 * h * h * a1)


def oscillator_crossings(kind, lam, c, x0, x_end, rtol, atol, loc_tol):
    """Zeros of v'' = -lam^2 k(x)^2 v, v(x0)=1, v'(x0)=0, between x0 and x_end.

    ``kind`` 0 is the constant coefficient ``k = c``; ``kind`` 1 is
    ``k = 1/sqrt(1-x^2)``.  Returns ``(crossings, status, x_reached)``;
    ``status`` is 0 on success and 1 on step-size underflow.
    """
    crossings = []
    span = x_end - x0
    if span == 0.0:
        return crossings, 0, x0
    direction = 1.0 if span > 0 else -1.0
    x = x0
    v, w = 1.0, 0.0
    lk = lam * _k(kind, c, x)
    h = direction * min(abs(span), 0.1 / lk)
    kv = [0.0] * 7
    kw = [0.0] * 7
    while direction * (x_end - x) > 0:
        lk = lam * _k(kind, c, x)
        hmax = 0.5 / lk
        if abs(h) > hmax:
            h = direction * hmax
        if direction * (x + h - x_end) > 0:
            h = x_end - x
        if abs(h) < 1e-13 * max(1.0, abs(x)):
            return crossings, 1, x
        for s in range(7):
            xs = x + _C[s] * h
            vs, ws = v, w
            for j, a in enumerate(_A[s]):
                vs += h * a * kv[j]
                ws += h * a * kw[j]
            q = lam * _k(kind, c, xs)
            kv[s] = ws
            kw[s] = -q * q * vs
        vn = v + h * sum(b * k for b, k in zip(_B, kv))
        wn = w + h * sum(b * k for b, k in zip(_B, kw))
        ev = h * sum(e * k for e, k in zip(_E, kv))
        ew = h * sum(e * k for e, k in zip(_E, kw))
        sv = atol + rtol * max(abs(v), abs(vn))
        sw = atol + rtol * max(abs(w), abs(wn))
        err = max(abs(ev) / sv, abs(ew) / sw)
        if err <= 1.0:
            xn = x + h
            if vn == 0.0 or (v > 0.0) != (vn > 0.0):
                if vn == 0.0:
                    crossings.append(xn)
                elif v != 0.0:
                    q0 = lam * _k(kind, c, x)
                    q1 = lam * _k(kind, c, xn)
                    a0 = -q0 * q0 * v
                    a1 = -q1 * q1 * vn
                    lo, hi = 0.0, 1.0
                    while abs(h) * (hi - lo) > loc_tol:
                        mid = 0.5 * (lo + hi)
                        pm = _hermite5(mid, h, v, w, a0, vn, wn, a1)
                        if (pm > 0.0) == (v > 0.0):
                            lo = mid
                        else:
                            hi = mid
                    crossings.append(x + h * 0.5 * (lo + hi))
            x, v, w = xn, vn, wn
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h *= fac
    return crossings, 0, x
