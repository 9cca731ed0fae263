"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from maxclass._backend import compiled_kernels, python_kernels
from maxclass.density import OscillationProblem, ode_zeros
from maxclass.optimizer import OptimizerConfig, maximize
from maxclass.root_systems import GroupSpec, root_encoding


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    spec = GroupSpec("D", 40)
    idx, coef = root_encoding(spec)
    theta = np.sort(rng.uniform(0.1, 3.0, spec.dim))

    def grad(k):
        return lambda: [k.log_volume_grad(idx, coef, theta) for _ in range(200)]

    def ascent(k):
        return lambda: maximize(GroupSpec("B", 6), OptimizerConfig(starts=16, seed=1), backend=k)

    prob = OscillationProblem("chebweight", lam=200.0, center=0.0, half_width=0.9)

    def oscillator(k):
        return lambda: ode_zeros(prob, backend=k)

    return [("log_volume_grad D40 x200", grad), ("maximize B6 16 starts", ascent),
            ("oscillator zeros lam=200", oscillator)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if compiled_kernels is None:
        print("compiled kernels not built; only the fallback is available")
    print(f"{'case':<28}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for name, make in cases():
        tp = best_time(make(python_kernels), args.repeat)
        if compiled_kernels is None:
            print(f"{name:<28}{tp:12.4f}{'-':>12}{'-':>10}")
            continue
        tc = best_time(make(compiled_kernels), args.repeat)
        print(f"{name:<28}{tp:12.4f}{tc:12.4f}{tp / tc:10.1f}")


if __name__ == "__main__":
    main()
