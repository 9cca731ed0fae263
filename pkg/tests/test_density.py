import math

import numpy as np
import pytest

from maxclass._backend import compiled_kernels, python_kernels
from maxclass._pykernels import _hermite5
from maxclass.closed_form import solve_D
from maxclass.density import (
    OscillationProblem,
    count_ode_zeros,
    empirical_density,
    equidistribution_report,
    limiting_density,
    ode_zeros,
    sturm_bounds,
)
from maxclass.errors import ContractError, IntegrationError

# KS statistic of the D-family angles, recorded from the solver and frozen.
# Both endpoints 0 and pi are angles, so the value is exactly 1/n.
KS_PINS = {
    6: 0.16666666666666666,
    25: 0.040000000000000036,
    50: 0.020000000000000018,
    100: 0.010000000000000009,
    200: 0.0050000000000000044,
}


def test_midpoint_sample_has_ks_half_over_n():
    for n in (1, 5, 40):
        theta = (np.arange(1, n + 1) - 0.5) * math.pi / n
        rep = equidistribution_report(theta)
        assert rep.ks_statistic == pytest.approx(1 / (2 * n), rel=1e-12)
        assert rep.max_gap_deviation == pytest.approx(0.0, abs=1e-14)


def test_ks_matches_scipy_oracle():
    stats = pytest.importorskip("scipy.stats")
    rng = np.random.default_rng(4)
    for n in (3, 17, 200):
        theta = np.sort(rng.uniform(0, math.pi, n))
        want = stats.kstest(theta / math.pi, "uniform").statistic
        assert equidistribution_report(theta).ks_statistic == pytest.approx(want, abs=1e-15)


def test_report_contracts():
    with pytest.raises(ContractError):
        equidistribution_report([])
    with pytest.raises(ContractError):
        equidistribution_report([1.0, 0.5])
    with pytest.raises(ContractError):
        equidistribution_report([0.0, 4.0])
    rep = equidistribution_report([0.0, math.pi])
    assert 0 <= rep.ks_statistic <= 1


@pytest.mark.parametrize("n", sorted(KS_PINS))
def test_ks_regression_pins(n):
    rep = equidistribution_report(solve_D(n).angles)
    assert rep.ks_statistic == pytest.approx(KS_PINS[n], rel=1e-12)


def test_ks_non_increasing_along_ranks():
    values = [equidistribution_report(solve_D(n).angles).ks_statistic for n in (25, 50, 100, 200)]
    assert all(b <= a for a, b in zip(values, values[1:]))
    assert values[-1] <= 0.02


def test_local_density_of_d200():
    cos = solve_D(200).cosines
    for x0 in (0.0, 0.5, -0.5):
        emp = empirical_density(cos, x0, 0.05)
        assert abs(emp / limiting_density(x0) - 1) <= 0.10


def test_limiting_density_examples():
    assert limiting_density(0.0) == pytest.approx(1 / math.pi)
    assert limiting_density(math.sqrt(3) / 2) == pytest.approx(2 / math.pi)
    for bad in (1.0, -1.2):
        with pytest.raises(ContractError):
            limiting_density(bad)


def test_sturm_bounds_examples():
    lo, hi = sturm_bounds(10, 1, 1, 1)
    assert lo == pytest.approx(20 / math.pi - 1) and hi == pytest.approx(20 / math.pi + 2)
    assert sturm_bounds(0.1, 0.1, 1, 1)[0] < 0
    with pytest.raises(ContractError):
        sturm_bounds(1, 1, 1, 2)
    with pytest.raises(ContractError):
        sturm_bounds(0, 1, 1, 1)


def test_count_examples():
    assert count_ode_zeros(OscillationProblem("constant", 10.0, 0.0, 1.0)) == 6
    assert count_ode_zeros(OscillationProblem("constant", math.pi / 2 - 0.01, 0.0, 1.0)) == 0
    n = 30
    prob = OscillationProblem("chebweight", math.sqrt(n * (n - 1)), 0.0, 0.5)
    lo, hi = sturm_bounds(prob.lam, prob.half_width, prob.alpha, prob.beta)
    assert lo <= count_ode_zeros(prob) <= hi


def test_zero_locations_of_cosine():
    z = ode_zeros(OscillationProblem("constant", 10.0, 0.0, 1.0))
    want = np.array([(k + 0.5) * math.pi / 10 for k in range(-3, 3)])
    np.testing.assert_allclose(z, want, atol=1e-8)


def test_problem_validation():
    with pytest.raises(ContractError):
        OscillationProblem("chebweight", 5.0, 0.5, 0.6)
    with pytest.raises(ContractError):
        OscillationProblem("quadratic", 5.0, 0.0, 0.5)
    with pytest.raises(ContractError):
        OscillationProblem("constant", -1.0, 0.0, 0.5)
    with pytest.raises(ContractError):
        OscillationProblem("chebweight", 5.0, 0.0, 0.5, alpha=1.1)


def random_problems(count, seed):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        lam = rng.uniform(5, 200)
        if i % 2:
            c = rng.uniform(0.2, 3.0)
            out.append(OscillationProblem("constant", lam, rng.uniform(-1, 1), rng.uniform(0.05, 1),
                                          constant=c))
        else:
            x0 = rng.uniform(-0.7, 0.7)
            room = 0.9 - abs(x0)
            out.append(OscillationProblem("chebweight", lam, x0, rng.uniform(0.02, room)))
    return out


def test_sturm_sandwich():
    for prob in random_problems(50, 8):
        lo, hi = sturm_bounds(prob.lam, prob.half_width, prob.alpha, prob.beta)
        assert lo <= count_ode_zeros(prob) <= hi, prob


def test_constant_coefficient_counts_are_analytic():
    rng = np.random.default_rng(12)
    for _ in range(20):
        lam, c, delta = rng.uniform(1, 150), rng.uniform(0.2, 3), rng.uniform(0.05, 1.5)
        prob = OscillationProblem("constant", lam, 0.3, delta, constant=c)
        # cos(lam c (x - x0)) vanishes at lam c |x - x0| = (k + 1/2) pi
        expected = 2 * math.floor(lam * c * delta / math.pi + 0.5)
        assert count_ode_zeros(prob) == expected


@pytest.mark.parametrize("backend", [python_kernels, compiled_kernels],
                         ids=["python", "cython"])
def test_integration_failure_reports_position(backend, monkeypatch):
    if backend is None:
        pytest.skip("compiled kernels not built")
    # integrating up to the singular edge of the weight must underflow
    crossings, status, reached = backend.oscillator_crossings(
        1, 50.0, 1.0, 0.0, 1.0, 1e-10, 1e-10, 1e-9)
    assert status == 1 and 0.9 < reached < 1.0
    prob = OscillationProblem("chebweight", 50.0, 0.0, 0.5)
    monkeypatch.setattr(OscillationProblem, "window", property(lambda self: (-1.0, 1.0)))
    with pytest.raises(IntegrationError) as err:
        ode_zeros(prob, backend=backend)
    assert 0.9 < abs(err.value.x_reached) < 1.0


@pytest.mark.skipif(compiled_kernels is None, reason="compiled kernels not built")
def test_backends_agree_on_zeros():
    for prob in random_problems(10, 21):
        a = ode_zeros(prob, backend=python_kernels)
        b = ode_zeros(prob, backend=compiled_kernels)
        assert a.size == b.size
        np.testing.assert_allclose(a, b, atol=1e-9)


def test_quintic_hermite_interpolates_end_data():
    # reproduces any quintic from values, slopes and curvatures at both ends
    rng = np.random.default_rng(2)
    c = rng.normal(size=6)
    h = 0.7
    f = np.polynomial.Polynomial(c)
    d1, d2 = f.deriv(), f.deriv(2)
    for t in (0.0, 0.25, 0.6, 1.0):
        got = _hermite5(t, h, f(0), d1(0), d2(0), f(h), d1(h), d2(h))
        assert got == pytest.approx(f(t * h), abs=1e-12)
