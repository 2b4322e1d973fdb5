"""Counting identity and squaring diagnostics over a seeded random sweep.

Prints one row per system with the four module dimensions and the conditioning
of the Riccati solutions, then a summary.
"""
import argparse
import time
import warnings

import numpy as np

from zeromodules import innerfact as inf
from zeromodules import zeromod as zm
from zeromodules.exceptions import HypothesisViolated
from zeromodules.randsys import RandomSystemConfig, random_systems


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--quiet", action="store_true")
    args = ap.parse_args(argv)

    cfg = RandomSystemConfig(max_n=args.max_n)
    t0 = time.perf_counter()
    bad, conds, ratios = 0, [], []
    for i, s in enumerate(random_systems(args.seed, args.count, cfg)):
        rep = zm.zero_report(s)
        bad += not rep.identity_holds
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", HypothesisViolated)
            fac = inf.squaring(s)
        c = max(inf._cond(fac.right.cert.sigma), inf._cond(fac.left.cert.sigma))
        d = inf.certificate_defects(fac)
        r = max(v["defect"] / v["scale"] for v in d.values())
        conds.append(c)
        ratios.append(r)
        if not args.quiet:
            print(f"{i:4d} n={s.n} p={s.p} q={s.q} dims={rep.dims()} deg={rep.mcmillan} "
                  f"{'ok ' if rep.identity_holds else 'BAD'} cond(sigma)={c:.1e} defect/scale={r:.1e}")
    dt = time.perf_counter() - t0
    conds = np.array(conds)
    print(f"identity failures: {bad}/{args.count}; {dt:.1f}s")
    print(f"cond(sigma): median {np.median(conds):.1e}, max {conds.max():.1e}, "
          f"> 1e6 in {int(np.sum(conds > 1e6))} systems")
    print(f"worst certificate defect / realization scale: {max(ratios):.1e}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
