#!/usr/bin/env python3
"""Regenerate the frozen special-function reference tables.

Values are computed with mpmath at 50 significant digits and written with
20 significant digits. Run from the repository root:

    python3 tools/specfun_reference.py
"""

import mpmath as mp

mp.mp.dps = 50

OUT_DIR = "crates/core/tests/fixtures"

BESSEL_ORDERS = [
    (0.0, 0.0),
    (0.5, 0.0),
    (1.0, 0.0),
    (2.5, 0.0),
    (0.0, 0.1),
    (0.0, 0.3),
    (0.0, -0.5),
    (0.0, 0.7),
    (0.0, 1.0),
    (0.0, 2.0),
    (0.0, 3.0),
    (0.5, 0.5),
    (-0.3, 1.2),
]

BESSEL_ARGS = [1e-4, 0.1, 1.0, 5.0, 12.5, 30.0, 120.0]

GAMMA_POINTS = [
    (1.0, 0.0),
    (0.5, 0.0),
    (1.0, 1.0),
    (0.25, -3.5),
    (2.0, 7.0),
    (-2.5, 0.75),
    (-7.3, 4.1),
    (12.0, -15.0),
    (0.0, 20.0),
    (25.5, 9.0),
    (1.0, 3.0),
    (-0.5, -19.0),
]


def fmt(v):
    return mp.nstr(v, 20, min_fixed=-1, max_fixed=-1) if v != 0 else "0"


def main():
    with open(f"{OUT_DIR}/specfun_reference.csv", "w") as fh:
        fh.write("re_order,im_order,x,re_value,im_value\n")
        for re_o, im_o in BESSEL_ORDERS:
            order = mp.mpc(re_o, im_o)
            for x in BESSEL_ARGS:
                v = mp.besselj(order, mp.mpf(x))
                fh.write(f"{re_o!r},{im_o!r},{x!r},{fmt(v.real)},{fmt(v.imag)}\n")

    with open(f"{OUT_DIR}/gamma_reference.csv", "w") as fh:
        fh.write("re_z,im_z,re_value,im_value\n")
        for re_z, im_z in GAMMA_POINTS:
            v = mp.gamma(mp.mpc(re_z, im_z))
            fh.write(f"{re_z!r},{im_z!r},{fmt(v.real)},{fmt(v.imag)}\n")


if __name__ == "__main__":
    main()
