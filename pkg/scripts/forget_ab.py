"""Compare merge-based and rem-based forget against brute force on every
graph with up to N labelled vertices (free matroid, s=0, t=N-1, all k)."""

import argparse
from itertools import combinations

from rankpath.dp import DPConfig, solve_dp
from rankpath.exactalg import GF
from rankpath.framework import Framework
from rankpath.graph import Graph
from rankpath.matroid import vandermonde_uniform
from rankpath.oracle import brute_force


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=5)
    ap.add_argument("--show", type=int, default=3, help="divergent instances to print per n")
    args = ap.parse_args()
    print("n,instances,merge_divergences,literal_divergences")
    for n in range(2, args.nmax + 1):
        M = vandermonde_uniform(GF(11), n, range(n))
        pairs = list(combinations(range(n), 2))
        total = merge = literal = 0
        shown = []
        for mask in range(1 << len(pairs)):
            G = Graph(range(n), [e for i, e in enumerate(pairs) if mask >> i & 1])
            for k in range(n + 1):
                F = Framework(G, M, 0, n - 1, k)
                truth = brute_force(F).answer
                total += 1
                merge += solve_dp(F).answer != truth
                lit = solve_dp(F, cfg=DPConfig(paper_literal_forget=True)).answer
                if lit != truth:
                    literal += 1
                    if len(shown) < args.show:
                        shown.append(f"  edges={G.edges()} k={k} oracle={truth} literal={lit}")
        print(f"{n},{total},{merge},{literal}")
        for line in shown:
            print(line)


if __name__ == "__main__":
    main()
