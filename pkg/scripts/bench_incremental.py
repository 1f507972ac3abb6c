#!/usr/bin/env python3
"""Incremental cache maintenance vs full recomputation.

For growing graph sizes, applies a batch of single-edge mutations twice:
once keeping the StatsCache up to date incrementally, once rebuilding it
from scratch after every step.  The ratio is the payoff of the
incremental design on the per-interaction path.  Run:

    python3 scripts/bench_incremental.py [--sizes 200,500,1000] [--steps 200]
"""

import argparse
import pathlib
import random
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from graphvis.cache import StatsCache, apply_mutation
from graphvis.generators import GeneratorSpec, generate
from graphvis.graph import Mutation


def edge_mutations(g, steps: int, seed: int):
    rng = random.Random(seed)
    nodes = sorted(g.nodes)
    muts = []
    for _ in range(steps):
        if rng.random() < 0.7:
            for _ in range(40):
                u, v = rng.sample(nodes, 2)
                if v not in g.adj[u]:
                    muts.append(Mutation("insert-edge", {"u": u, "v": v}))
                    g.add_edge(u, v)  # staging copy tracks availability
                    break
        elif g.edges:
            eid = rng.choice(sorted(g.edges))
            g.delete_edge(eid)
            muts.append(Mutation("delete-edge", {"id": eid}))
    return muts


def run(n: int, steps: int, seed: int):
    base = generate(GeneratorSpec(model="er", n=n, p=min(0.05, 8.0 / n),
                                  seed=seed))
    muts = edge_mutations(base.copy(), steps, seed)

    g = base.copy()
    cache = StatsCache(g)
    t0 = time.perf_counter()
    for m in muts:
        apply_mutation(g, cache, m)
    incremental = time.perf_counter() - t0

    g = base.copy()
    cache = StatsCache(g)
    t0 = time.perf_counter()
    for m in muts:
        apply_mutation(g, cache, m)
        cache = StatsCache(g)  # recompute-from-scratch baseline
    full = time.perf_counter() - t0

    print(f"n={n:>5}  m0={base.edge_count:>6}  steps={len(muts):>4}  "
          f"incremental {incremental * 1e3:8.1f} ms   "
          f"rebuild {full * 1e3:8.1f} ms   speedup x{full / incremental:6.1f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="200,500,1000,2000")
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()
    for part in args.sizes.split(","):
        run(int(part), args.steps, args.seed)


if __name__ == "__main__":
    main()
