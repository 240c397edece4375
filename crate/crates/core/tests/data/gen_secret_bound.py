"""Reference values of 1 + (1-d) log2(1-d) + d log2(d) on 1000 points.

Each d is a double; mpmath evaluates at its exact binary value with 50
significant digits. Output columns: d (shortest round-trip repr), bound.
"""
import mpmath

mpmath.mp.dps = 50


def bound(d):
    x = mpmath.mpf(d)
    total = mpmath.mpf(1)
    for p in (x, 1 - x):
        if p > 0:
            total += p * mpmath.log(p, 2)
    return total


with open("secret_bound_grid.csv", "w") as f:
    f.write("delta,bound\n")
    for i in range(1000):
        d = i / 999
        f.write(f"{d!r},{mpmath.nstr(bound(d), 30)}\n")
