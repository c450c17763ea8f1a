"""Numpy reference versions of the hot angle-form kernels."""

import numpy as np

TWO_PI = 2 * np.pi

# d(a)/d(x1, y1, x2, y2) for a = w1 - w2, conj(w1) - w2, conj(w1) + w2, w1 + w2
_DA = (
    (1, 1j, -1, -1j),
    (1, -1j, -1, -1j),
    (1, -1j, 1, 1j),
    (1, 1j, 1, 1j),
)


def arg_grad4(w1, w2, coeffs):
    """Components (dx1, dy1, dx2, dy2) of (1/2pi) sum_t c_t d arg(a_t), shape (N, 4).

    The four terms are a = w1 - w2, conj(w1) - w2, conj(w1) + w2, w1 + w2.
    """
    w1 = np.asarray(w1, dtype=complex)
    w2 = np.broadcast_to(np.asarray(w2, dtype=complex), w1.shape)
    out = np.zeros(w1.shape + (4,))
    args = (w1 - w2, np.conj(w1) - w2, np.conj(w1) + w2, w1 + w2)
    for c, a, da in zip(coeffs, args, _DA):
        if c == 0:
            continue
        inv = c / a
        for j in range(4):
            out[..., j] += np.imag(da[j] * inv)
    return out / TWO_PI


def eta_grad(w):
    """Components (dx, dy) of (1/2pi) d arg(w), shape (N, 2)."""
    w = np.asarray(w, dtype=complex)
    r2 = (w.real ** 2 + w.imag ** 2) * TWO_PI
    return np.stack([-w.imag / r2, w.real / r2], axis=-1)
