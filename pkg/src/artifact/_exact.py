"""Small exact linear-algebra layer over Q, backed by sympy's DomainMatrix."""

from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import InputError


def frac(x):
    """Coerce ints, strings "p/q", Fractions and gmpy/sympy rationals to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    num = getattr(x, "numerator", None)
    den = getattr(x, "denominator", None)
    if num is not None and den is not None:
        num = num() if callable(num) else num
        den = den() if callable(den) else den
        return Fraction(int(num), int(den))
    raise InputError(f"cannot read {x!r} as an exact rational")


def _dm(rows):
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    return DomainMatrix([[QQ(int(v.numerator), int(v.denominator)) for v in map(frac, r)]
                         for r in rows], (nrows, ncols), QQ)


def _back(m):
    return [[frac(v) for v in row] for row in m.to_list()]


def nullspace(rows):
    """Basis of {v : rows @ v = 0}, as a list of Fraction vectors."""
    if not rows:
        raise InputError("empty matrix")
    ns = _dm(rows).nullspace()
    return _back(ns) if ns.shape[0] else []


def rank(rows):
    if not rows:
        return 0
    return _dm(rows).rank()


def solve(rows, rhs):
    """Unique or least-index solution of rows @ x = rhs; None if inconsistent."""
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = _dm(aug).rref()
    red = _back(rref)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row_i, col in enumerate(pivots):
        x[col] = red[row_i][n]
    return x


def matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def matvec(a, v):
    return [sum((a[i][k] * v[k] for k in range(len(v))), Fraction(0)) for i in range(len(a))]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def inverse(a):
    n = len(a)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        x = solve(a, e)
        if x is None:
            raise InputError("singular matrix")
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def trace(a):
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def matpow(a, n):
    out = identity(len(a))
    for _ in range(n):
        out = matmul(out, a)
    return out
