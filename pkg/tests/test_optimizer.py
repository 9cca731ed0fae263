import math

import numpy as np
import pytest

from maxclass._backend import compiled_kernels, python_kernels
from maxclass._pykernels import NOISE
from maxclass.closed_form import solve, solve_A, solve_C, solve_G2
from maxclass.errors import ContractError, SingularityError
from maxclass.optimizer import OptimizerConfig, lagrange_residual_A, maximize, run_start
from maxclass.root_systems import GroupSpec, angle_distance


def test_config_validation():
    for kwargs in [dict(starts=0), dict(max_iters=0), dict(grad_tol=0.0), dict(step_init=-1.0),
                   dict(backtrack_factor=1.0), dict(seed=-1), dict(seed=2 ** 64), dict(workers=0)]:
        with pytest.raises(ContractError):
            OptimizerConfig(**kwargs)


def test_su3_example():
    rep = maximize(GroupSpec("A", 3))
    assert angle_distance(GroupSpec("A", 3), rep.best, solve_A(3).angles) <= 1e-6
    assert rep.distinct_optima_count == 1


def test_sp4_example():
    rep = maximize(GroupSpec("C", 2))
    t = math.sqrt(1 / 3)
    want = np.sort(np.arccos([t, -t]))
    np.testing.assert_allclose(rep.best, want, atol=1e-6)


def test_g2_example():
    rep = maximize(GroupSpec("G2"))
    assert angle_distance(GroupSpec("G2"), rep.best, solve_G2().angles) <= 1e-6
    assert rep.best_log_volume == pytest.approx(solve_G2().log_volume, abs=1e-9)


def test_best_is_max_over_converged():
    rep = maximize(GroupSpec("B", 4), OptimizerConfig(starts=16, seed=3))
    conv = [o.log_volume for o in rep.per_start_outcomes if o.converged]
    assert rep.best_log_volume == max(conv)
    assert len(rep.per_start_outcomes) == 16


@pytest.mark.parametrize("spec", [GroupSpec("A", 5), GroupSpec("B", 3), GroupSpec("C", 4),
                                  GroupSpec("D", 5), GroupSpec("G2")], ids=lambda s: s.name)
def test_monotone_ascent(spec):
    """Accepted values never drop by more than the rounding floor of the objective."""
    seeds = np.random.SeedSequence(5).spawn(8)
    for ss in seeds:
        outcome, trace = run_start(spec, OptimizerConfig(), ss, record=True)
        assert outcome.converged
        assert trace.size == outcome.iterations + 1
        drops = trace[:-1] - trace[1:]
        floor = NOISE * np.maximum(1.0, np.abs(trace[:-1]))
        assert np.all(drops <= floor)
        # and the net change is a genuine increase
        assert trace[-1] >= trace[0]


def test_determinism_and_worker_independence():
    spec = GroupSpec("D", 4)
    a = maximize(spec, OptimizerConfig(starts=12, seed=42))
    b = maximize(spec, OptimizerConfig(starts=12, seed=42))
    c = maximize(spec, OptimizerConfig(starts=12, seed=42, workers=4))
    for other in (b, c):
        np.testing.assert_array_equal(a.best, other.best)
        assert a.best_log_volume == other.best_log_volume
        assert [o.log_volume for o in a.per_start_outcomes] == \
               [o.log_volume for o in other.per_start_outcomes]
        assert [o.iterations for o in a.per_start_outcomes] == \
               [o.iterations for o in other.per_start_outcomes]
    d = maximize(spec, OptimizerConfig(starts=12, seed=43))
    assert [o.iterations for o in a.per_start_outcomes] != \
           [o.iterations for o in d.per_start_outcomes]


@pytest.mark.skipif(compiled_kernels is None, reason="compiled kernels not built")
def test_backends_reach_the_same_optimum():
    spec = GroupSpec("C", 3)
    cfg = OptimizerConfig(starts=8, seed=9)
    a = maximize(spec, cfg, backend=python_kernels)
    b = maximize(spec, cfg, backend=compiled_kernels)
    assert angle_distance(spec, a.best, b.best) <= 1e-9
    assert a.best_log_volume == pytest.approx(b.best_log_volume, abs=1e-12)


@pytest.mark.parametrize("spec", [GroupSpec("A", n) for n in (2, 4, 7)]
                         + [GroupSpec(f, n) for f in "BC" for n in (1, 3, 5)]
                         + [GroupSpec("D", n) for n in (2, 4, 6)],
                         ids=lambda s: s.name)
def test_agreement_with_closed_form(spec):
    rep = maximize(spec, OptimizerConfig(starts=32, seed=1))
    closed = solve(spec)
    assert angle_distance(spec, rep.best, closed.angles) <= 1e-6
    assert abs(rep.best_log_volume - closed.log_volume) <= 1e-9
    assert rep.distinct_optima_count == 1
    assert all(o.converged for o in rep.per_start_outcomes)


def test_lagrange_residual_examples():
    assert lagrange_residual_A(solve_A(5).angles, 5) <= 1e-12
    assert lagrange_residual_A([0.0, math.pi / 2, 3 * math.pi / 2], 3) > 0.1
    rep = maximize(GroupSpec("A", 6))
    assert lagrange_residual_A(rep.best, 6) <= 1e-8
    with pytest.raises(SingularityError):
        lagrange_residual_A([0.0, 0.0, 1.0], 3)
    with pytest.raises(ContractError):
        lagrange_residual_A([0.0, 1.0], 3)


def test_a_family_keeps_sum_constraint():
    spec = GroupSpec("A", 5)
    for o in maximize(spec, OptimizerConfig(starts=10, seed=2)).per_start_outcomes:
        s = o.point.sum() / (2 * math.pi)
        assert abs(s - round(s)) <= 1e-9
