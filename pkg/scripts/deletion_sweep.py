"""Run the wall reducer on generated instances and replay every deletion
against the exact search.  One CSV row per instance."""

import argparse

from rankpath.instances import gen_wall_instance
from rankpath.oracle import exact_search
from rankpath.reducer import constants_for, reduce_loop


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--height", type=int, default=13)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--spec", action="append", default=None)
    ap.add_argument("--subdivide", type=int, default=0)
    ap.add_argument("--constants", default="relaxed")
    ap.add_argument("--max-steps", type=int, default=10)
    args = ap.parse_args()
    specs = args.spec or ["sparse:3:3:2:gfp101", "uniform:2", "partition:2:2"]
    print("spec,seed,n,deletions,unsafe,outcome,reason")
    for spec in specs:
        for seed in range(args.seeds):
            b = gen_wall_instance(args.height, spec, seed, args.subdivide)
            F = b.framework
            consts = constants_for(F.k, args.constants)
            unsafe = []

            def check(before, after, v):
                if exact_search(before).answer != exact_search(after).answer:
                    unsafe.append(v)

            res = reduce_loop(F, consts, b.wall, check, args.max_steps)
            reason = getattr(res.outcome, "reason", "")
            print(f"{spec},{seed},{F.graph.n},{len(res.deletions)},{len(unsafe)},"
                  f"{type(res.outcome).__name__},{reason}")


if __name__ == "__main__":
    main()
