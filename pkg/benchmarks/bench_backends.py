"""Compare the compiled and pure-Python simplex kernels.

Runs identical LP batches through both kernels, reports wall time and the
largest disagreement in optimal objective.  Two batches are used: raw linear
programs of growing size, and the full commitment-game pipeline on random
decision problems (the hot path the compiled kernel exists for).

Usage:  python3 benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import time

import numpy as np

from credalkit import CredalSet, JointDist, LossFn, SpaceSpec, solve_commitment_game
from credalkit.numerics import available_backends
from credalkit.numerics.lp import LinearProgram, solve_lp


def random_lp(rng, n, m_ub):
    a_ub = rng.uniform(-1, 1, (m_ub, n))
    x0 = rng.uniform(0, 1, n)
    return LinearProgram(
        c=rng.uniform(-1, 1, n),
        a_ub=np.vstack([a_ub, np.ones((1, n))]),
        b_ub=np.concatenate([a_ub @ x0 + 0.3, [float(n)]]),
    )


def random_problem(rng, nx, ny, na, k):
    space = SpaceSpec(
        tuple(f"x{i}" for i in range(nx)),
        tuple(f"y{i}" for i in range(ny)),
        tuple(f"a{i}" for i in range(na)),
    )
    joints = [
        JointDist(space, rng.dirichlet(np.ones(nx * ny)).reshape(nx, ny))
        for _ in range(k)
    ]
    loss = LossFn(space, rng.uniform(0, 1, (ny, na)))
    return CredalSet(space, joints), loss


def bench_raw_lps(backend, sizes, repeat):
    rows = []
    for n, m_ub, count in sizes:
        rng = np.random.default_rng(1234)
        lps = [random_lp(rng, n, m_ub) for _ in range(count)]
        best = float("inf")
        values = None
        for _ in range(repeat):
            start = time.perf_counter()
            values = [solve_lp(lp, backend_name=backend).objective for lp in lps]
            best = min(best, time.perf_counter() - start)
        rows.append((f"{count} LPs  n={n:<3d} rows={m_ub + 1}", best, values))
    return rows

def bench_games(backend, repeat):
    import credalkit.numerics.backend as backend_mod

    rng = np.random.default_rng(99)
    problems = [random_problem(rng, 3, 3, 3, 4) for _ in range(20)]
    saved = backend_mod.get_kernel
    forced = backend_mod._KERNELS[backend]

    def pinned(name=None):
        return forced

    backend_mod.get_kernel = pinned
    try:
        best = float("inf")
        values = None
        for _ in range(repeat):
            start = time.perf_counter()
            values = [
                solve_commitment_game(p, loss)[0].value for p, loss in problems
            ]
            best = min(best, time.perf_counter() - start)
    finally:
        backend_mod.get_kernel = saved
    return [("20 commitment games 3x3x3", best, values)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="best-of repeats")
    args = parser.parse_args()

    backends = available_backends()
    print(f"available kernels: {', '.join(backends)}")
    if len(backends) < 2:
        print("only one kernel is built; timing it alone")

    sizes = [(10, 8, 50), (30, 20, 20), (60, 40, 10)]
    results = {}
    for backend in backends:
        results[backend] = bench_raw_lps(backend, sizes, args.repeat) + bench_games(
            backend, args.repeat
        )

    reference = backends[0]
    print(f"\n{'batch':<32}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for i, (label, _, _) in enumerate(results[reference]):
        times = [results[b][i][1] for b in backends]
        ratio = times[-1] / times[0] if len(times) > 1 and times[0] > 0 else 1.0
        row = f"{label:<32}" + "".join(f"{t * 1e3:>12.2f}ms" for t in times)
        if len(backends) > 1:
            row += f"{ratio:>9.2f}x"
        print(row)

    if len(backends) > 1:
        worst = 0.0
        for i in range(len(results[reference])):
            base = np.asarray(results[backends[0]][i][2])
            for other in backends[1:]:
                diff = np.abs(base - np.asarray(results[other][i][2])).max()
                worst = max(worst, float(diff))
        print(f"\nlargest objective disagreement between kernels: {worst:.3g}")
        if worst > 1e-9:
            raise SystemExit("kernels disagree beyond 1e-9")
        print("kernels agree to 1e-9")


if __name__ == "__main__":
    main()
