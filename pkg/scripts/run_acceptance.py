"""Run the ten acceptance criteria and print one PASS/FAIL line per criterion."""
import argparse
import time

from zeromodules.acceptance import AcceptanceConfig, run_all


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0, help="seed of the random sweep")
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    checks = run_all(AcceptanceConfig(seed=args.seed))
    for c in checks:
        print(c.line())
    n_ok = sum(c.passed for c in checks)
    print(f"{n_ok}/{len(checks)} criteria passed in {time.perf_counter() - t0:.1f}s")
    return 0 if n_ok == len(checks) else 1


if __name__ == "__main__":
    raise SystemExit(main())
