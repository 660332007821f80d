"""Time the compiled scan kernels against the numpy fallback.

    python benchmarks/kernels.py --n 3 --repeat 5
    python benchmarks/kernels.py --n 4 --repeat 1

Both backends run the same exhaustive checks on the same tables and must
return identical verdicts and witnesses.
"""

import argparse
import time
from fractions import Fraction

from randassign import kernels
from randassign.mechanisms import PS, linear_mechanism
from randassign.properties import (check_anonymous, check_envy_free, check_equal_treatment,
                                   check_neutral, check_separable, check_strategy_proof,
                                   check_swap_upper_lower, mechanism_dominates)
from randassign.tabulate import tabulate

CHECKS = {
    "sp": check_strategy_proof,
    "ef": check_envy_free,
    "ete": check_equal_treatment,
    "neutral": check_neutral,
    "anon": check_anonymous,
    "sep": check_separable,
    "sul": check_swap_upper_lower,
}


def vectors(n):
    top = Fraction(1, n * (n - 1))
    return [(top,) + (0,) * (n - 1), (top / 2,) + (0,) * (n - 1)]


def run(n, repeat):
    mechs = [linear_mechanism(v) for v in vectors(n)]
    if n == 3:
        mechs.append(PS)
    for m in mechs:
        tabulate(m, n)
    rows = []
    for name, fn in CHECKS.items():
        times, answers = {}, {}
        for backend in kernels.available():
            kernels.use(backend)
            best = float("inf")
            for _ in range(repeat):
                t = time.perf_counter()
                answers[backend] = [fn(m, n) for m in mechs]
                best = min(best, time.perf_counter() - t)
            times[backend] = best
        assert len(set(map(repr, answers.values()))) == 1, f"{name}: backends disagree"
        rows.append((name, times))
    times = {}
    for backend in kernels.available():
        kernels.use(backend)
        t = time.perf_counter()
        mechanism_dominates(mechs[0], mechs[1], n)
        times[backend] = time.perf_counter() - t
    rows.append(("dominance", times))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows = run(args.n, args.repeat)
    backends = kernels.available()
    print(f"n = {args.n}, best of {args.repeat}")
    print("check".ljust(10) + "".join(b.rjust(12) for b in backends) + ("speedup".rjust(10) if len(backends) > 1 else ""))
    for name, times in rows:
        line = name.ljust(10) + "".join(f"{times[b] * 1e3:10.1f}ms" for b in backends)
        if len(backends) > 1:
            line += f"{times['python'] / max(times['compiled'], 1e-9):9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
