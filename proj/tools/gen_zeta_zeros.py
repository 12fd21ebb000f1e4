#!/usr/bin/env python3
"""Write imaginary parts of the first N nontrivial zeta zeros, one per line.

Uses Arb (python-flint), whose zero isolation is rigorous; each value is
printed with 15 significant digits after the decimal point.

    pip install python-flint
    python3 tools/gen_zeta_zeros.py 10000 data/zeta_zeros_10k.txt
"""
import sys

import flint


def main() -> int:
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 10000
    out = sys.argv[2] if len(sys.argv) > 2 else "zeta_zeros.txt"
    flint.ctx.prec = 80
    zeros = flint.acb.zeta_zeros(1, count)
    with open(out, "w") as fh:
        fh.write(f"# imaginary parts of the first {count} nontrivial zeros of zeta(s)\n")
        fh.write("# generated by tools/gen_zeta_zeros.py (Arb via python-flint)\n")
        for z in zeros:
            fh.write(z.imag.mid().str(20, radius=False) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
