#!/usr/bin/env python3
"""Regenerate the Chebyshev coefficient tables in src/pdethick/_bessel_tables.py.

The scaled kernels sqrt(x)*exp(-x)*I_n(x) and sqrt(x)*exp(x)*K_n(x) are smooth,
bounded functions of the reciprocal argument, so each large-x branch is stored
as a Chebyshev expansion in

    w = 16/x - 1   for I0, I1   (x in [8, inf) -> w in (-1, 1]),
    w = 4/x - 1    for K0, K1   (x in [2, inf) -> w in (-1, 1]).

Coefficients are fitted at 60 decimal digits and trimmed once they drop below
1e-19; the resulting double-precision evaluation error is checked here against
mpmath and must stay under 1e-14 relative before the file is written.

Requires mpmath. Run from the repository root:

    python scripts/gen_bessel_tables.py
"""

from __future__ import annotations

import math
import pathlib

import mpmath as mp

mp.mp.dps = 60

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "pdethick" / "_bessel_tables.py"

FIT_DEGREE = 56
TRIM_BELOW = mp.mpf("1e-19")
MAX_REL_ERR = 1e-14
CHECK_POINTS = 400


def cheb_fit(f, n):
    """Chebyshev interpolation coefficients on [-1, 1]; c[0] stored doubled."""
    nodes = [mp.cos(mp.pi * (k + mp.mpf(1) / 2) / n) for k in range(n)]
    vals = [f(t) for t in nodes]
    coeffs = []
    for j in range(n):
        acc = mp.fsum(vals[k] * mp.cos(j * mp.pi * (k + mp.mpf(1) / 2) / n) for k in range(n))
        coeffs.append(2 * acc / n)
    return coeffs


def trim(coeffs):
    last = len(coeffs)
    while last > 1 and abs(coeffs[last - 1]) < TRIM_BELOW:
        last -= 1
    return coeffs[:last]


def clenshaw_float(coeffs, w):
    b0 = 0.0
    b1 = 0.0
    for c in reversed(coeffs[1:]):
        b0, b1 = c + 2.0 * w * b0 - b1, b0
    return 0.5 * coeffs[0] + w * b0 - b1


def kernel_i(order):
    def f(w):
        x = 16 / (w + 1)
        return mp.sqrt(x) * mp.exp(-x) * mp.besseli(order, x)

    return f


def kernel_k(order):
    def f(w):
        x = 4 / (w + 1)
        return mp.sqrt(x) * mp.exp(x) * mp.besselk(order, x)

    return f


def kernel_true(name, x):
    order = int(name[1])
    if name[0] == "I":
        return mp.exp(-x) * mp.besseli(order, x)
    return mp.exp(x) * mp.besselk(order, x)


def main():
    tables = {}
    specs = [
        ("I0", kernel_i(0), 8.0, 16.0),
        ("I1", kernel_i(1), 8.0, 16.0),
        ("K0", kernel_k(0), 2.0, 4.0),
        ("K1", kernel_k(1), 2.0, 4.0),
    ]
    for name, kern, x_lo, x_scale in specs:
        print(f"fitting {name} tail (x >= {x_lo}) ...")
        coeffs = trim(cheb_fit(kern, FIT_DEGREE))
        tables[name] = check_branch(name, coeffs, x_lo, x_scale)

    lines = [
        '"""Chebyshev coefficient tables for the scaled modified Bessel tails.',
        "",
        "Auto-generated by scripts/gen_bessel_tables.py; do not edit by hand.",
        "",
        "Each table expands sqrt(x)*scaled(x) as sum_j c_j T_j(w) (c_0 halved at",
        "evaluation) with w = I_TAIL_SCALE/x - 1 for the I tables (valid x >= 8)",
        "and w = K_TAIL_SCALE/x - 1 for the K tables (valid x >= 2).",
        '"""',
        "",
        "I_TAIL_SCALE = 16.0",
        "K_TAIL_SCALE = 4.0",
        "",
    ]
    for name in ("I0", "I1", "K0", "K1"):
        lines.append(f"{name}_TAIL = (")
        for c in tables[name]:
            lines.append(f"    {c!r},")
        lines.append(")")
        lines.append("")
    OUT.write_text("\n".join(lines))
    print(f"wrote {OUT}")


def check_branch(name, coeffs, x_lo, x_scale):
    floats = [float(c) for c in coeffs]
    worst = 0.0
    for i in range(CHECK_POINTS):
        x = x_lo * 10 ** (6.0 * i / (CHECK_POINTS - 1))
        w = x_scale / x - 1.0
        approx = clenshaw_float(floats, w) / math.sqrt(x)
        exact = kernel_true(name, mp.mpf(x))
        rel = abs(approx - float(exact)) / abs(float(exact))
        worst = max(worst, rel)
    print(f"  {name}: {len(floats)} coefficients, max rel err {worst:.3e}")
    if worst > MAX_REL_ERR:
        raise SystemExit(f"{name}: accuracy target missed ({worst:.3e} > {MAX_REL_ERR:.0e})")
    return floats


if __name__ == "__main__":
    main()
