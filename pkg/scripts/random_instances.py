"""Analyse seeded random representations and tally verdicts and complex sizes."""

import argparse
import collections
import time

from latmax.analysis import failed_verdicts
from latmax.sampling import SampleConfig, accepted_instances


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=SampleConfig.seed)
    ap.add_argument("--count", type=int, default=SampleConfig.accepted)
    args = ap.parse_args()
    cfg = SampleConfig(seed=args.seed, accepted=args.count)
    t = time.perf_counter()
    sizes = collections.Counter()
    failures = []
    for spec, a in accepted_instances(cfg):
        sizes[len(a.complex.vertices)] += 1
        f = failed_verdicts(a.report)
        if f:
            failures.append((spec.name, f))
    print(f"{sum(sizes.values())} instances in {time.perf_counter() - t:.1f}s")
    print("complex sizes:", dict(sorted(sizes.items())))
    for name, f in failures:
        print("FAIL", name, f)
    if not failures:
        print("every verdict PASS")


if __name__ == "__main__":
    main()
