"""Time the identity suite for a few truncation orders.

    python3 scripts/time_identities.py [--trunc 6 8 10] [--samples 200]
"""
import argparse
import time

from covinv.identities import iteration_bound_suite, run_suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trunc", type=int, nargs="+", default=[6, 8, 10])
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    for N in args.trunc:
        t0 = time.perf_counter()
        results = run_suite(dims=(2, 3), fibers=(1, 2), trunc=N, samples=args.samples, seed=args.seed)
        total = time.perf_counter() - t0
        failing = [k for k, r in results.items() if not r.ok]
        counts = iteration_bound_suite(dims=(2, 3), fibers=(1, 2), trunc=N,
                                       samples=max(1, args.samples // 4), seed=args.seed)
        print(f"N={N:2d}  {total:6.2f}s  checks={sum(r.total for r in results.values())}  "
              f"max iterations={max(counts)} (bound {N + 1})  failing={failing or 'none'}")
        for name, r in results.items():
            print(f"    {r.seconds:6.2f}s  {r.passed}/{r.total}  {name}")


if __name__ == "__main__":
    main()
