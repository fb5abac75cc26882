#!/usr/bin/env python3
"""Prints the high-precision reference values frozen into the test suite."""
from fractions import Fraction

import mpmath

mpmath.mp.dps = 40

sizes = [mpmath.mpf(1_000_000), mpmath.mpf(2_000_000), mpmath.mpf(96_000)]
for T in (1, 10):
    rates = [s ** (mpmath.mpf(1) / T) for s in sizes]
    total = sum(rates)
    print("T=%d ratios:" % T, ", ".join(mpmath.nstr(r / total, 20) for r in rates))

print("1e-4 / 1.001 =", mpmath.nstr(mpmath.mpf("1e-4") / mpmath.mpf("1.001"), 24))
print("517.4 - 17484 - 10071.75 + 1013.21 =",
      Fraction("517.4") - Fraction(17484) - Fraction("10071.75") + Fraction("1013.21"))
