"""Print the reduction constants for a range of k in every mode."""

import argparse

from rankpath.reducer import constants_for


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=5)
    args = ap.parse_args()
    print("k,mode,b,x,z,q,r,g")
    for k in range(2, args.kmax + 1):
        for mode in ("paper", "relaxed"):
            c = constants_for(k, mode)
            print(f"{k},{c.mode},{c.b},{c.x},{c.z},{c.q},{c.r},{c.g}")


if __name__ == "__main__":
    main()
