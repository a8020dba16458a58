"""Compare the compiled and pure-vectorized batch kernels.

Runs the heavy verification workloads once per backend in a fresh
subprocess (the backend is chosen at import time from OMQL_BACKEND) and
prints a side-by-side table. The first compiled run includes JIT
compilation, so each workload is warmed once before timing.

Usage:  python3 benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = ("dynamic-pair", "laws", "reconstruct-bar", "adjointness")


def run_workloads(repeat):
    from omql import backend, fixtures
    from omql.reconstruct import build_preference
    from omql.verify import (
        check_adjointness,
        check_composition_laws,
        check_dynamic_pair,
    )

    fig1 = fixtures.fig1()
    chain3 = fixtures.chain3()
    bool2 = fixtures.boolean_algebra(2)

    jobs = {
        "dynamic-pair": lambda: [
            check_dynamic_pair(fig1, chain3, pair, exhaustive=True)
            for pair in ("PG", "FH")
        ],
        "laws": lambda: check_composition_laws(fig1, chain3, exhaustive=True),
        "reconstruct-bar": lambda: build_preference(
            fig1, chain3, mode="bar", exhaustive=True
        ),
        "adjointness": lambda: (
            check_adjointness(fig1),
            check_adjointness(bool2),
        ),
    }

    out = {"backend": backend.BACKEND, "timings": {}}
    for name in WORKLOADS:
        job = jobs[name]
        job()  # warm caches and, on the compiled path, trigger the JIT
        best = min(_timed(job) for _ in range(repeat))
        out["timings"][name] = best
    return out


def _timed(job):
    start = time.perf_counter()
    job()
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        print(json.dumps(run_workloads(args.repeat)))
        return

    results = {}
    for backend_name in ("numpy", "numba"):
        env = dict(os.environ, OMQL_BACKEND=backend_name)
        proc = subprocess.run(
            [sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
            capture_output=True,
            text=True,
            env=env,
        )
        if proc.returncode != 0:
            print(f"{backend_name}: worker failed\n{proc.stderr}", file=sys.stderr)
            continue
        payload = json.loads(proc.stdout.strip().splitlines()[-1])
        if payload["backend"] != backend_name:
            print(
                f"note: requested {backend_name}, got {payload['backend']} "
                "(compiler unavailable?)",
                file=sys.stderr,
            )
        results[backend_name] = payload["timings"]

    if not results:
        sys.exit(1)
    width = max(len(w) for w in WORKLOADS)
    header = f"{'workload'.ljust(width)}  " + "  ".join(
        f"{name:>10}" for name in results
    )
    print(header)
    print("-" * len(header))
    for name in WORKLOADS:
        cells = "  ".join(f"{results[b][name] * 1e3:9.1f}ms" for b in results)
        print(f"{name.ljust(width)}  {cells}")


if __name__ == "__main__":
    main()
