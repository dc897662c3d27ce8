"""Table of two-particle brackets on an oscillator level versus relative phase.

    python scripts/bracket_signs.py --dim 8 --level 3
"""

import argparse
import warnings

from zpflab import (BipartitePair, HalfInt, TruncationWarning, bracket_xp_same, bracket_xx_same,
                    harmonic_oscillator)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=8)
    ap.add_argument("--level", type=int, default=3)
    args = ap.parse_args()
    system, x = harmonic_oscillator(args.dim)
    warnings.simplefilter("ignore", TruncationWarning)
    print(f"{'zeta12':>6}  {'[x1,x2]':>10}  {'[x1,p2]/(i hbar)':>16}")
    for h in range(0, 11):
        z = HalfInt(h)
        pair = BipartitePair.identical(system, x, z, 0, args.level, args.level)
        xx = bracket_xx_same(pair)
        xp = bracket_xp_same(pair) / (1j * system.hbar)
        print(f"{str(z):>6}  {xx.imag:>+9.4f}i  {xp.real:>+16.4f}")


if __name__ == "__main__":
    main()
