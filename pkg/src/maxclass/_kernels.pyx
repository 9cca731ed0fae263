# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: log-volume, its gradient, the ascent loop, and the
oscillator zero finder.  Mirrors ``_pykernels`` function for function."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, log, fabs, fmod, sqrt, pow, INFINITY, isfinite

cnp.import_array()

cdef double TWO_PI = 6.283185307179586
cdef double ARMIJO = 1e-4
cdef double NOISE = 1e-12


cdef inline double _root(const int[:, ::1] idx, const int[:, ::1] coef,
                         const double[::1] th, Py_ssize_t i) noexcept nogil:
    return coef[i, 0] * th[idx[i, 0]] + coef[i, 1] * th[idx[i, 1]]


def root_values(const int[:, ::1] idx, const int[:, ::1] coef, theta):
    cdef const double[::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    cdef Py_ssize_t i, m = idx.shape[0]
    out = np.empty(m)
    cdef double[::1] o = out
    for i in range(m):
        o[i] = _root(idx, coef, th, i)
    return out


cdef double _logvol(const int[:, ::1] idx, const int[:, ::1] coef,
                    const double[::1] th) noexcept nogil:
    cdef Py_ssize_t i, m = idx.shape[0]
    cdef double s, acc = 0.0
    for i in range(m):
        s = sin(0.5 * fmod(_root(idx, coef, th, i), TWO_PI))
        if s == 0.0:
            return -INFINITY
        acc += log(fabs(s))
    return 2.0 * acc


cdef Py_ssize_t _logvol_grad(const int[:, ::1] idx, const int[:, ::1] coef,
                             const double[::1] th, double[::1] grad,
                             double *f) noexcept nogil:
    cdef Py_ssize_t i, m = idx.shape[0], n = th.shape[0]
    cdef double h, s, ct, acc = 0.0
    for i in range(n):
        grad[i] = 0.0
    for i in range(m):
        h = 0.5 * fmod(_root(idx, coef, th, i), TWO_PI)
        s = sin(h)
        if s == 0.0:
            f[0] = -INFINITY
            return i
        acc += log(fabs(s))
        ct = cos(h) / s
        grad[idx[i, 0]] += coef[i, 0] * ct
        grad[idx[i, 1]] += coef[i, 1] * ct
    f[0] = 2.0 * acc
    return -1


def log_volume(const int[:, ::1] idx, const int[:, ::1] coef, theta):
    cdef const double[::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    return _logvol(idx, coef, th)


def log_volume_grad(const int[:, ::1] idx, const int[:, ::1] coef, theta):
    cdef const double[::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    grad = np.empty(th.shape[0])
    cdef double[::1] g = grad
    cdef double f
    cdef Py_ssize_t bad = _logvol_grad(idx, coef, th, g, &f)
    if bad >= 0:
        grad[:] = np.nan
    return f, grad, bad


cdef inline void _project(double[::1] g, bint project) noexcept nogil:
    cdef Py_ssize_t i, n = g.shape[0]
    cdef double mean = 0.0
    if not project:
        return
    for i in range(n):
        mean += g[i]
    mean /= n
    for i in range(n):
        g[i] -= mean


cdef inline double _norm(double[::1] g) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(g.shape[0]):
        acc += g[i] * g[i]
    return sqrt(acc)


def ascend(const int[:, ::1] idx, const int[:, ::1] coef, theta0, bint project,
           double target_sum, long max_iters, double grad_tol, double step_init,
           double shrink, bint record):
    theta_arr = np.array(theta0, dtype=np.float64)
    cdef double[::1] theta = theta_arr
    cdef Py_ssize_t n = theta.shape[0], i
    g_arr = np.empty(n)
    gc_arr = np.empty(n)
    cand_arr = np.empty(n)
    cdef double[::1] g = g_arr
    cdef double[::1] gc = gc_arr
    cdef double[::1] cand = cand_arr
    cdef double f, fc, gn, gcn, step, gain, shift
    cdef long it = 0
    cdef int tries
    cdef bint accepted, converged
    trace = []
    _logvol_grad(idx, coef, theta, g, &f)
    if record:
        trace.append(f)
    if not isfinite(f):
        return theta_arr, f, INFINITY, 0, False, np.array(trace)
    _project(g, project)
    gn = _norm(g)
    step = step_init
    converged = gn <= grad_tol
    while not converged and it < max_iters:
        it += 1
        accepted = False
        for tries in range(60):
            for i in range(n):
                cand[i] = theta[i] + step * g[i]
            if project:
                shift = target_sum
                for i in range(n):
                    shift -= cand[i]
                shift /= n
                for i in range(n):
                    cand[i] += shift
            _logvol_grad(idx, coef, cand, gc, &fc)
            if isfinite(fc):
                gain = ARMIJO * step * gn * gn
                if gain > NOISE * max(1.0, fabs(f)):
                    accepted = fc >= f + gain
                elif fc >= f - NOISE * max(1.0, fabs(f)):
                    # increase is below rounding: require the gradient to shrink
                    _project(gc, project)
                    accepted = _norm(gc) < gn
            if accepted:
                break
            step *= shrink
        if not accepted:
            break
        for i in range(n):
            theta[i] = cand[i]
        f = fc
        for i in range(n):
            g[i] = gc[i]
        _project(g, project)
        gn = _norm(g)
        if record:
            trace.append(f)
        converged = gn <= grad_tol
        step /= shrink
    return theta_arr, f, gn, it, converged, np.array(trace)


# -- oscillator ----------------------------------------------------------------

cdef double[7] C_ = [0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0]
cdef double[7][6] A_ = [
    [0, 0, 0, 0, 0, 0],
    [1.0 / 5, 0, 0, 0, 0, 0],
    [3.0 / 40, 9.0 / 40, 0, 0, 0, 0],
    [44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0],
    [19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0],
    [9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0],
    [35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84],
]
cdef double[7] B_ = [35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0]
cdef double[7] E_ = [
    35.0 / 384 - 5179.0 / 57600,
    0.0,
    500.0 / 1113 - 7571.0 / 16695,
    125.0 / 192 - 393.0 / 640,
    -2187.0 / 6784 + 92097.0 / 339200,
    11.0 / 84 - 187.0 / 2100,
    -1.0 / 40,
]


cdef inline double _k(int kind, double c, double x) noexcept nogil:
    if kind == 0:
        return c
    return 1.0 / sqrt((1.0 - x) * (1.0 + x))


cdef inline double _hermite5(double t, double h, double v0, double d0, double a0,
                             double v1, double d1, double a1) noexcept nogil:
    cdef double t2 = t * t
    cdef double t3 = t2 * t
    cdef double t4 = t3 * t
    cdef double t5 = t4 * t
    cdef double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5
    cdef double h1 = t - 6 * t3 + 8 * t4 - 3 * t5
    cdef double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5
    cdef double h3 = 10 * t3 - 15 * t4 + 6 * t5
    cdef double h4 = -4 * t3 + 7 * t4 - 3 * t5
    cdef double h5 = 0.5 * t3 - t4 + 0.5 * t5
    return (h0 * v0 + h1 * h * d0 + h2 * h * h * a0
            + h3 * v1 + h4 * h * d1 + h5 * h * h * a1)


def oscillator_crossings(int kind, double lam, double c, double x0, double x_end,
                         double rtol, double atol, double loc_tol):
    crossings = []
    cdef double span = x_end - x0
    if span == 0.0:
        return crossings, 0, x0
    cdef double direction = 1.0 if span > 0 else -1.0
    cdef double x = x0, v = 1.0, w = 0.0
    cdef double lk = lam * _k(kind, c, x)
    cdef double h = direction * min(fabs(span), 0.1 / lk)
    cdef double[7] kv
    cdef double[7] kw
    cdef double hmax, xs, vs, ws, q, vn, wn, ev, ew, sv, sw, err, xn
    cdef double q0, q1, a0, a1, lo, hi, mid, pm, fac
    cdef int s, j
    while direction * (x_end - x) > 0:
        lk = lam * _k(kind, c, x)
        hmax = 0.5 / lk
        if fabs(h) > hmax:
            h = direction * hmax
        if direction * (x + h - x_end) > 0:
            h = x_end - x
        if fabs(h) < 1e-13 * max(1.0, fabs(x)):
            return crossings, 1, x
        for s in range(7):
            xs = x + C_[s] * h
            vs = v
            ws = w
            for j in range(s):
                vs += h * A_[s][j] * kv[j]
                ws += h * A_[s][j] * kw[j]
            q = lam * _k(kind, c, xs)
            kv[s] = ws
            kw[s] = -q * q * vs
        vn = 0.0
        wn = 0.0
        ev = 0.0
        ew = 0.0
        for s in range(7):
            vn += B_[s] * kv[s]
            wn += B_[s] * kw[s]
            ev += E_[s] * kv[s]
            ew += E_[s] * kw[s]
        vn = v + h * vn
        wn = w + h * wn
        ev *= h
        ew *= h
        sv = atol + rtol * max(fabs(v), fabs(vn))
        sw = atol + rtol * max(fabs(w), fabs(wn))
        err = max(fabs(ev) / sv, fabs(ew) / sw)
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
                    lo = 0.0
                    hi = 1.0
                    while fabs(h) * (hi - lo) > loc_tol:
                        mid = 0.5 * (lo + hi)
                        pm = _hermite5(mid, h, v, w, a0, vn, wn, a1)
                        if (pm > 0.0) == (v > 0.0):
                            lo = mid
                        else:
                            hi = mid
                    crossings.append(x + h * 0.5 * (lo + hi))
            x = xn
            v = vn
            w = wn
        if err == 0.0:
            fac = 5.0
        else:
            fac = min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
        h *= fac
    return crossings, 0, x
