#!/usr/bin/env python3
"""Scan the torus determinant along the |tau| = 1 boundary arc of the
fundamental domain and compare the closed form with the numerically
differentiated spectral zeta.  Emits CSV on stdout."""

import math

from toruszeta.torus import determinant_torus, determinant_torus_numeric

N_POINTS = 13


def run() -> None:
    print("theta_deg,tau1,tau2,det_closed,det_numeric,rel_diff")
    for j in range(N_POINTS):
        theta = math.pi / 3 + (math.pi / 3) * j / (N_POINTS - 1)
        tau = complex(math.cos(theta), math.sin(theta))
        closed = determinant_torus(tau)
        numeric = determinant_torus_numeric(tau)
        print(
            f"{math.degrees(theta):.2f},{tau.real!r},{tau.imag!r},"
            f"{closed!r},{numeric!r},{abs(closed - numeric) / closed:.3e}"
        )


if __name__ == "__main__":
    run()
