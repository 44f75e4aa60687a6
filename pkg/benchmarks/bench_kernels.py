"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]

Times best-response descent on restricted instances and the exact
branch-and-bound oracle on small general instances, checks that both
backends return identical results, and prints a table of timings.
"""
import argparse
import random
import statistics
import time

from tightspan import _kernels_py, kernels
from tightspan.core import Assignment, Instance
from tightspan.harness.generate import GeneratorSpec, generate
from tightspan.oracle import OracleLimits, optimal_makespan
from tightspan.restricted import descend


def timed(fn, repeat):
    samples, out = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples), out


def descent_cases(seed):
    for m, n in [(8, 60), (16, 150), (32, 400)]:
        spec = GeneratorSpec(m=m, n=n, pmax=50, k=max(2, m // 2), seed=seed, restricted=True)
        inst = generate(spec)
        # start from everything piled on the first feasible machine
        start = Assignment(tuple(inst.machines_of(j)[0] for j in range(n)))
        yield f"descent m={m} n={n}", lambda b, i=inst, a=start: descend(i, a, backend=b)


def oracle_cases(seed):
    # near-identical machines with similar job sizes: weak bounds, deep search
    limits = OracleLimits(max_jobs=16, max_machines=4)
    for m, n in [(3, 12), (3, 14), (4, 14)]:
        rng = random.Random(seed)
        sizes = [rng.randint(500, 1000) for _ in range(n)]
        inst = Instance.from_rows([[s + rng.randint(0, 2) for _ in range(m)] for s in sizes])
        yield f"oracle m={m} n={n}", lambda b, i=inst: optimal_makespan(i, limits, backend=b).opt_makespan


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if kernels.compiled is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    print(f"{'case':<24}{'python (s)':>12}{'cython (s)':>12}{'speedup':>10}")
    for name, run in [*descent_cases(args.seed), *oracle_cases(args.seed)]:
        t_py, r_py = timed(lambda: run(_kernels_py), args.repeat)
        t_cy, r_cy = timed(lambda: run(kernels.compiled), args.repeat)
        if r_py != r_cy:
            raise SystemExit(f"{name}: backends disagree ({r_py} vs {r_cy})")
        print(f"{name:<24}{t_py:>12.4f}{t_cy:>12.4f}{t_py / max(t_cy, 1e-9):>9.1f}x")


if __name__ == "__main__":
    main()
