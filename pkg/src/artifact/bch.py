"""Truncated BCH-type series in two free generators, plus q, j and the densities.

Series are computed by exp/log in the truncated free associative algebra on
letters 0 (x) and 1 (y) and then expanded in the Lyndon basis, which is a
Hall basis: a Lyndon word w stands for its standard bracketing [u, v] with
w = uv and v the longest proper Lyndon suffix.
"""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InputError

DEFAULT_ORDER = 6
LETTERS = "xy"


# -- truncated free associative algebra --------------------------------------

def _mul(a, b, n):
    out = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            if len(w1) + len(w2) <= n:
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
    return {w: c for w, c in out.items() if c}


def _add(a, b, s=1):
    out = dict(a)
    for w, c in b.items():
        out[w] = out.get(w, 0) + s * c
    return {w: c for w, c in out.items() if c}


def _scale(a, s):
    return {w: c * s for w, c in a.items() if c * s}


def _exp(a, n):
    if a.get(()):
        raise InputError("exp needs an element without constant term")
    out, term = {(): Fraction(1)}, {(): Fraction(1)}
    for k in range(1, n + 1):
        term = _scale(_mul(term, a, n), Fraction(1, k))
        out = _add(out, term)
    return out


def _log(a, n):
    u = _add(a, {(): Fraction(1)}, -1)
    if u.get(()):
        raise InputError("log needs constant term 1")
    out, term = {}, {(): Fraction(1)}
    for k in range(1, n + 1):
        term = _mul(term, u, n)
        out = _add(out, _scale(term, Fraction((-1) ** (k + 1), k)))
    return out


# -- Lyndon words and their bracketings ----------------------------------------

def is_lyndon(w):
    return bool(w) and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def _standard_split(w):
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError("single letter has no split")


@lru_cache(maxsize=None)
def _bracket_poly(w):
    """Associative expansion of the standard bracketing of the Lyndon word w."""
    if len(w) == 1:
        return ((w, Fraction(1)),)
    u, v = _standard_split(w)
    pu, pv = dict(_bracket_poly(u)), dict(_bracket_poly(v))
    n = len(w)
    out = _add(_mul(pu, pv, n), _mul(pv, pu, n), -1)
    return tuple(sorted(out.items()))


def bracket_string(w):
    if len(w) == 1:
        return LETTERS[w[0]]
    u, v = _standard_split(w)
    return f"[{bracket_string(u)},{bracket_string(v)}]"


def _to_lyndon(elem):
    """Expand a Lie element of the free associative algebra in the Lyndon basis."""
    rest = dict(elem)
    coeffs = {}
    while rest:
        w = min(rest, key=lambda t: (len(t), t))
        if not is_lyndon(w):
            raise InputError(f"not a Lie element: leading word {w}")
        c = rest[w]
        coeffs[w] = c
        rest = _add(rest, dict(_bracket_poly(w)), -c)
    return coeffs


class FreeLieSeries:
    """Truncated Lie series in x, y with coefficients on Lyndon words."""

    def __init__(self, order, coeffs):
        self.order = order
        self.coeffs = {tuple(w): Fraction(c) for w, c in coeffs.items() if c}

    def __getitem__(self, key):
        if isinstance(key, str):
            key = tuple(LETTERS.index(ch) for ch in key)
        return self.coeffs.get(tuple(key), Fraction(0))

    def words_of_length(self, n):
        return {w: c for w, c in self.coeffs.items() if len(w) == n}

    def lengths(self):
        return sorted({len(w) for w in self.coeffs})

    def associative(self):
        out = {}
        for w, c in self.coeffs.items():
            out = _add(out, _scale(dict(_bracket_poly(w)), c))
        return out

    def evaluate(self, x, y, bracket=None):
        """Evaluate on concrete x, y; ``bracket`` defaults to the matrix commutator."""
        if bracket is None:
            def bracket(a, b):
                return a @ b - b @ a
        memo = {}

        def ev(w):
            if w not in memo:
                if len(w) == 1:
                    memo[w] = x if w[0] == 0 else y
                else:
                    u, v = _standard_split(w)
                    memo[w] = bracket(ev(u), ev(v))
            return memo[w]

        total = None
        for w, c in sorted(self.coeffs.items(), key=lambda t: (len(t[0]), t[0])):
            term = ev(w) * float(c)
            total = term if total is None else total + term
        return total if total is not None else x * 0.0

    def to_json(self):
        return {bracket_string(w): str(c) for w, c in
                sorted(self.coeffs.items(), key=lambda t: (len(t[0]), t[0]))}

    def __repr__(self):
        return " + ".join(f"{c}*{bracket_string(w)}" for w, c in
                          sorted(self.coeffs.items(), key=lambda t: (len(t[0]), t[0])))


def _gen(i, s=1):
    return {(i,): Fraction(s)}


def bch_series(order=DEFAULT_ORDER):
    """log(exp(x) exp(y)) through bracket length ``order``."""
    if order < 1:
        raise InputError("order must be at least 1")
    n = order
    z = _log(_mul(_exp(_gen(0), n), _exp(_gen(1), n), n), n)
    return FreeLieSeries(order, _to_lyndon(z))


def _bch_p_assoc(n):
    prod = _mul(_mul(_exp(_gen(0), n), _exp(_gen(1, 2), n), n), _exp(_gen(0), n), n)
    return _scale(_log(prod, n), Fraction(1, 2))


def bch_p(pair=None, order=DEFAULT_ORDER):
    """Z with exp(2Z) = exp(x) exp(2y) exp(x); for x, y in p it lies in p.

    ``pair`` is accepted for interface symmetry; the series is universal.
    """
    if order < 1:
        raise InputError("order must be at least 1")
    return FreeLieSeries(order, _to_lyndon(_bch_p_assoc(order)))


def pk_decompose(pair=None, order=DEFAULT_ORDER):
    """(P, K) with exp(x) exp(y) = exp(P) exp(K), P odd (p-valued), K even (k-valued).

    Applying sigma shows exp(2P) = exp(x) exp(2y) exp(x), so P = bch_p and
    K = log(exp(-P) exp(x) exp(y)).
    """
    if order < 1:
        raise InputError("order must be at least 1")
    n = order
    p = _bch_p_assoc(n)
    k = _log(_mul(_exp(_scale(p, -1), n), _mul(_exp(_gen(0), n), _exp(_gen(1), n), n), n), n)
    return FreeLieSeries(order, _to_lyndon(p)), FreeLieSeries(order, _to_lyndon(k))


# -- numerical q, j and densities -----------------------------------------------

def _ad_float(algebra, x):
    c = np.array([[[float(v) for v in vec] for vec in row] for row in algebra.c])
    # ad(x)[k, j] = sum_i x_i c_ij^k
    return np.einsum("i,ijk->kj", np.asarray(x, dtype=float), c)


def _sinhc(z):
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-4
    out = np.empty_like(z)
    zs = z[small]
    out[small] = 1 + zs ** 2 / 6 + zs ** 4 / 120
    zb = z[~small]
    out[~small] = np.sinh(zb) / zb
    return out


def q_function(algebra, x):
    """q(x) = det_g( sinh(ad x / 2) / (ad x / 2) ), via the eigenvalues of ad x."""
    lam = np.linalg.eigvals(_ad_float(algebra, x))
    return float(np.real(np.prod(_sinhc(lam / 2))))


def _p_block(pair, x):
    """ad(x)^2 restricted to p, in the adapted basis; x given in original coordinates."""
    a = pair.adapted
    m = np.array([[float(v) for v in row] for row in pair.to_adapted_matrix])
    xa = m @ np.asarray(x, dtype=float)
    ad = _ad_float(a, xa)
    ad2 = ad @ ad
    idx = pair.p_idx
    return ad2[np.ix_(idx, idx)]


def j_function(pair, x):
    """j(x) = det_p( sinh(ad x) / ad x ) for x in p (original coordinates)."""
    if not pair.p_idx:
        return 1.0
    mu = np.linalg.eigvals(_p_block(pair, x))
    return float(np.real(np.prod(_sinhc(np.sqrt(mu.astype(complex))))))


def _vector_bracket(algebra):
    c = np.array([[[float(v) for v in vec] for vec in row] for row in algebra.c])

    def br(a, b):
        return np.einsum("i,j,ijk->k", a, b, c)
    return br


def density_d(algebra, x, y, order=DEFAULT_ORDER):
    x, y = np.asarray(x, float), np.asarray(y, float)
    z = bch_series(order).evaluate(x, y, _vector_bracket(algebra))
    return math.sqrt(q_function(algebra, x) * q_function(algebra, y) / q_function(algebra, z))


def density_dp(pair, x, y, order=DEFAULT_ORDER):
    x, y = np.asarray(x, float), np.asarray(y, float)
    z = bch_p(pair, order).evaluate(x, y, _vector_bracket(pair.algebra))
    return math.sqrt(j_function(pair, x) * j_function(pair, y) / j_function(pair, z))
