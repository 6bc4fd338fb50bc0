"""Compare the compiled and pure-Python Gaussian-rational kernels.

Two measurements:

* scalar micro-benchmark: a dot-product style loop on each class directly;
* pipeline: reduce + lift + pullback verification, run in a subprocess with
  ``FUCHSRED_PURE_PYTHON`` unset / set so the import-time selection is used.

Usage: python3 benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

PIPELINE = r"""
import random, time
from fuchsred import EXACT, KERNEL, DiscreteData, reduce, lift, verify_pullback
from fuchsred.reduction import random_level_specs, sample_tuple
rng = random.Random(11)
t0 = time.perf_counter()
for m, n in ((2, 4), (3, 4), (3, 5), (4, 4)):
    specs = random_level_specs(m, n, rng, EXACT)
    data = DiscreteData.default(specs).coerce(EXACT)
    for _ in range(3):
        x = sample_tuple(specs, rng, EXACT, data)
        lift(reduce(x, data))
        verify_pullback(x, data, trials=2, rng=rng)
print(KERNEL, time.perf_counter() - t0)
"""


def _operands(cls, n: int):
    rng = random.Random(3)
    def one():
        return cls(Fraction(rng.randint(-50, 50), rng.randint(1, 30)), rng.randint(-9, 9))
    return [one() for _ in range(n)], [one() for _ in range(n)]


def scalar_work(xs, ys) -> list:
    """Per-pair arithmetic on small operands (the common case in elimination)."""
    out = []
    for x, y in zip(xs, ys):
        z = x * y - y
        if x:
            z = z + y / x
        out.append(z)
    return out


def scalar_loop(cls, n: int = 20000) -> float:
    xs, ys = _operands(cls, n)
    return min(timeit.repeat(lambda: scalar_work(xs, ys), number=1, repeat=3))


def pipeline(pure: bool) -> tuple[str, float]:
    env = dict(os.environ)
    env.pop("FUCHSRED_PURE_PYTHON", None)
    if pure:
        env["FUCHSRED_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", PIPELINE], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    return out[0], float(out[1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()

    from fuchsred._gaussq_py import GaussianRational as PyGR

    try:
        from fuchsred._gaussq import GaussianRational as CGR
    except ImportError:
        CGR = None
        print("compiled kernel not available; only the pure-Python kernel is timed")

    t_py = scalar_loop(PyGR)
    print(f"scalar loop   python   {t_py * 1e3:8.2f} ms")
    if CGR is not None:
        t_c = scalar_loop(CGR)
        print(f"scalar loop   compiled {t_c * 1e3:8.2f} ms   speedup {t_py / t_c:5.2f}x")
        a = scalar_work(*_operands(PyGR, 500))
        b = scalar_work(*_operands(CGR, 500))
        assert [z.parts() for z in a] == [z.parts() for z in b], "kernels disagree"

    for _ in range(args.repeat):
        k_py, p_py = pipeline(pure=True)
        print(f"pipeline      {k_py:8s} {p_py:8.3f} s")
        if CGR is not None:
            k_c, p_c = pipeline(pure=False)
            print(f"pipeline      {k_c:8s} {p_c:8.3f} s   speedup {p_py / p_c:5.2f}x")


if __name__ == "__main__":
    main()
