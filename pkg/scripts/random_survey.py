"""Run the two routes to phi(k) on random equivariant fibres and tally the outcomes.

Reuses the generators from the test suite.
"""

import argparse
import random
import sys
import time
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from randdata import random_fibre  # noqa: E402

from neron.jacobian import theorem_pipeline  # noqa: E402


@dataclass
class Config:
    seed: int = 0
    count: int = 500
    max_components: int = 12


def main(cfg: Config):
    rng = random.Random(cfg.seed)
    tally = Counter()
    quotients = Counter()
    bad = 0
    start = time.perf_counter()
    for _ in range(cfg.count):
        f = random_fibre(rng, cfg.max_components)
        r = theorem_pipeline(f)
        bad += not r.consistent
        tally[(str(r.phi_geometric), str(r.phi_rational_oracle))] += 1
        quotients[(r.dprime // r.d, r.q, r.quotient_order)] += 1
    elapsed = time.perf_counter() - start
    print(f"{cfg.count} fibres, {bad} inconsistent, {elapsed:.2f}s")
    print("\nmost common (phi(k^s), phi(k)):")
    for (geo, rat), k in tally.most_common(12):
        print(f"  {geo:16s} {rat:12s} {k}")
    print("\n(d'/d, q, quotient order):")
    for key, k in sorted(quotients.items()):
        print(f"  {key}  {k}")
    return bad


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--max-components", type=int, default=Config.max_components)
    a = ap.parse_args()
    sys.exit(1 if main(Config(a.seed, a.count, a.max_components)) else 0)
