"""Exclusion table: largest set of spin labels with every pairwise gap exactly 1.

    python scripts/pauli_table.py --max-upsilon 9/2 --json pauli.json
"""

import argparse
import json

from zpflab import HalfInt, pauli_feasibility


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-upsilon", default="7/2")
    ap.add_argument("--max-k", type=int, default=5)
    ap.add_argument("--json", help="also write witnesses and certificates here")
    args = ap.parse_args()

    top = HalfInt.of(args.max_upsilon).half_units
    dump = []
    print(f"{'upsilon':>8}  " + "  ".join(f"k={k}" for k in range(1, args.max_k + 1)) + "  witnesses(k=2)")
    for two_u in range(1, top + 1, 2):
        u = HalfInt(two_u)
        results = [pauli_feasibility(u, k) for k in range(1, args.max_k + 1)]
        cells = "  ".join(("yes" if r.feasible else " no").rjust(3) for r in results)
        pairs = ", ".join("(" + ", ".join(map(str, w)) + ")" for w in results[1].witnesses)
        print(f"{str(u):>8}  {cells}  {pairs}")
        dump.extend(r.to_json() for r in results)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(dump, fh, indent=2)


if __name__ == "__main__":
    main()
