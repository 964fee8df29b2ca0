"""Largest DP table (entries at one node) with and without pruning on
seeded random planar instances."""

import argparse

from rankpath.dp import DPConfig, solve_dp
from rankpath.instances import gen_random_planar


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--matroid", default="uniform:3")
    args = ap.parse_args()
    print("seed,answer,max_entries_pruned,max_entries_unpruned,max_entries_uniform_rep")
    for seed in range(args.seeds):
        F = gen_random_planar(args.n, 0.5, args.matroid, seed).framework
        sizes = []
        for cfg in (DPConfig(), DPConfig(prune=False), DPConfig(uniform_k_rep=True)):
            res = solve_dp(F, cfg=cfg)
            sizes.append(max((entries for *_, entries in res.stats), default=0))
        print(f"{seed},{'YES' if res.answer else 'NO'},{sizes[0]},{sizes[1]},{sizes[2]}")


if __name__ == "__main__":
    main()
