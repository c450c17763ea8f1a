"""Independent references for the quadrant weights.

The 2D weights (one aerial vertex) are computed by adaptive quadrature in polar
coordinates, with formulas written out separately from the package kernels.  The
2-wheel references are frozen numbers from a separate numpy MC (8 seeds x 1e6
samples each); the quoted error is the spread across seeds.
"""

import math

import numpy as np
from scipy import integrate

# frozen 2-wheel references: (value, std error)
W2A_REF = (-0.041034, 0.00057)
W2B_REF = (0.000787, 0.00110)


def _grad_arg(w, c, conj):
    a = np.conj(w) - c if conj else w - c
    return (np.imag(1 / a), -np.real(1 / a)) if conj else (np.imag(1 / a), np.real(1 / a))


def _four(w, fixed, e1, e2):
    gx = gy = 0.0
    for coef, c, conj in ((1, fixed, False), (-e2, fixed, True), (-e1, -fixed, True),
                          (e1 * e2, -fixed, False)):
        x, y = _grad_arg(w, c, conj)
        gx += coef * x
        gy += coef * y
    return gx / (2 * math.pi), gy / (2 * math.pi)


def _eta(w):
    r2 = abs(w) ** 2
    return -w.imag / r2 / (2 * math.pi), w.real / r2 / (2 * math.pi)


def edge_loop_weight(fixed, color):
    """Integral over the quadrant of omega^color(w, fixed) ^ d eta(w)."""
    def f(th, r):
        w = r * np.exp(1j * th)
        a, b = _four(w, fixed, *color), _eta(w)
        return (a[0] * b[1] - a[1] * b[0]) * r
    total = 0.0
    for lo, hi in ((0, 0.5), (0.5, 1), (1, 2), (2, np.inf)):
        total += integrate.dblquad(f, lo, hi, 0, math.pi / 2, epsabs=1e-10, epsrel=1e-10)[0]
    return total


def edge_edge_weight(fixed, color1, color2):
    """Integral over the quadrant of omega^color1(w, fixed) ^ omega^color2(w, fixed)."""
    def f(th, r):
        w = r * np.exp(1j * th)
        a, b = _four(w, fixed, *color1), _four(w, fixed, *color2)
        return (a[0] * b[1] - a[1] * b[0]) * r
    total = 0.0
    for lo, hi in ((0, 0.5), (0.5, 1), (1, 2), (2, np.inf)):
        total += integrate.dblquad(f, lo, hi, 0, math.pi / 2, epsabs=1e-10, epsrel=1e-10)[0]
    return total
