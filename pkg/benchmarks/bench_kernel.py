"""Benchmark the audit scan kernel: compiled extension vs pure Python.

Generates synthetic obligation and action tables of growing size and
times ``scan_governing`` on both backends in both audit modes.  The scan
is quadratic in the worst case (every action checks every obligation),
so this is where the compiled kernel pays off.

Run from the repository root:

    python3 benchmarks/bench_kernel.py
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from logtrust import _kernel_py

try:
    from logtrust import _kernel as _compiled
except ImportError:
    _compiled = None


def make_tables(n_obl: int, n_act: int, seed: int) -> tuple[list[list[int]], list[list[int]]]:
    """Build random parallel tables with a realistic shape.

    A handful of peers and verbs, obligations roughly 60/40 permit to
    forbid, clocks increasing with occasional ties.
    """
    rng = random.Random(seed)
    n_peers = 8
    n_verbs = 4

    obl_to, obl_verb, obl_allow, obl_clock = [], [], [], []
    clock = 0
    for _ in range(n_obl):
        clock += rng.choice((0, 1, 1, 2))
        obl_to.append(rng.randrange(n_peers))
        obl_verb.append(rng.randrange(n_verbs))
        obl_allow.append(1 if rng.random() < 0.6 else 0)
        obl_clock.append(clock)

    act_by, act_verb, act_clock = [], [], []
    clock = 1
    for _ in range(n_act):
        clock += rng.choice((0, 1, 1, 2))
        act_by.append(rng.randrange(n_peers))
        act_verb.append(rng.randrange(n_verbs))
        act_clock.append(clock)

    return [obl_to, obl_verb, obl_allow, obl_clock], [act_by, act_verb, act_clock]


def run_pure(obls, acts, literal: bool) -> list[int]:
    return _kernel_py.scan_governing(*obls, *acts, literal)


def run_compiled(obls, acts, literal: bool) -> list[int]:
    arrs = [np.ascontiguousarray(col, dtype=np.intc) for col in obls + acts]
    out = _compiled.scan_governing(*arrs, literal)
    return [int(x) for x in out]


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[100, 400, 1600, 6400])
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    if _compiled is None:
        print("compiled extension not available; pure-Python timings only")

    header = f"{'size':>7}  {'mode':<7}  {'pure (ms)':>10}  {'compiled (ms)':>14}  {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for size in args.sizes:
        obls, acts = make_tables(size, size, args.seed)
        for literal in (False, True):
            mode = "literal" if literal else "prose"
            t_pure = best_of(lambda: run_pure(obls, acts, literal), args.repeats)
            if _compiled is None:
                print(f"{size:>7}  {mode:<7}  {t_pure * 1e3:>10.2f}  {'n/a':>14}  {'n/a':>8}")
                continue
            # Backends must agree before their timings mean anything.
            assert run_pure(obls, acts, literal) == run_compiled(obls, acts, literal)
            t_comp = best_of(lambda: run_compiled(obls, acts, literal), args.repeats)
            speedup = t_pure / t_comp if t_comp > 0 else float("inf")
            print(
                f"{size:>7}  {mode:<7}  {t_pure * 1e3:>10.2f}  "
                f"{t_comp * 1e3:>14.2f}  {speedup:>7.1f}x"
            )


if __name__ == "__main__":
    main()
