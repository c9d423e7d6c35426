"""Compiled against pure-Python kernels.

Times the hot kernels on identical inputs with both backends and checks
that they agree.  Run from the repository root::

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from betafrechet import _kernels_py
from betafrechet._backend import compiled_kernels


def _cases(rng):
    x = rng.uniform(0.3, 6.0, 2000)
    y = rng.uniform(0.0, 1.0, 2000)
    p = rng.uniform(0.001, 0.999, 500)
    z = rng.uniform(0.01, 50.0, 5000)
    return {
        "ln_gamma_vec (5000)": lambda k: k.ln_gamma_vec(z),
        "inc_beta_vec (2000)": lambda k: k.inc_beta_vec(y, 1.0 - y, 1.5, 2.5),
        "inv_inc_beta_vec (500)": lambda k: k.inv_inc_beta_vec(p, 1.5, 2.5),
        "loglik_sum (2000)": lambda k: k.loglik_sum(0.41, 125.2, 31.5, 0.75, x),
        "score_sum (2000)": lambda k: k.score_sum(0.41, 125.2, 31.5, 0.75, x),
        "power_ladder (400)": lambda k: k.power_ladder(np.linspace(1.0, 0.1, 400), 2.5),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    compiled = compiled_kernels()
    if compiled is None:
        print("compiled extension not built; only the pure-Python timings are shown")
    cases = _cases(np.random.default_rng(0))
    print(f"{'kernel':<26}{'python ms':>12}{'compiled ms':>14}{'speedup':>10}")
    for name, fn in cases.items():
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        line = f"{name:<26}{1e3 * t_py:>12.3f}"
        if compiled is not None:
            ref = np.asarray(fn(_kernels_py), dtype=float)
            got = np.asarray(fn(compiled), dtype=float)
            if not np.allclose(got, ref, rtol=1e-12, atol=1e-300):
                raise SystemExit(f"{name}: backends disagree")
            t_c = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat))
            line += f"{1e3 * t_c:>14.3f}{t_py / t_c:>10.1f}"
        print(line)


if __name__ == "__main__":
    main()
