#!/usr/bin/env python3
"""Regenerate data/zeros_10k.txt: ordinates of the first N nontrivial zeta zeros.

Uses python-flint (arb) rigorous zero isolation; ordinates are printed with
12 fractional digits.
"""
import sys

import flint

N = int(sys.argv[1]) if len(sys.argv) > 1 else 10000
OUT = sys.argv[2] if len(sys.argv) > 2 else "data/zeros_10k.txt"

flint.ctx.prec = 64
zs = flint.acb.zeta_zeros(1, N)
with open(OUT, "w", newline="\n") as fh:
    fh.write(f"# first {N} nontrivial zeta-zero ordinates (gamma > 0), beta = 1/2\n")
    fh.write("# source: python-flint acb.zeta_zeros, 64-bit working precision\n")
    for z in zs:
        g = z.imag.mid()
        fh.write(f"{float(g):.12f}\n")
