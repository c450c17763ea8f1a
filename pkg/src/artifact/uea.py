"""Symmetric algebra S(g) and PBW-ordered U(g) over Q.

PBW words are non-decreasing index tuples in the basis order of the
algebra they live over. For symmetric pairs that algebra is
``pair.adapted`` (p-basis first), so k-letters always sit at the right end
of a PBW word.
"""

import math
from fractions import Fraction
from functools import reduce

from sympy import bernoulli
from sympy.utilities.iterables import multiset_permutations

from . import _exact as ex
from .errors import InputError, TruncationError


class PolyElement:
    """Polynomial over Q in ``nvars`` variables, stored as {exponent tuple: coeff}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        for mono, c in (terms or {}).items():
            c = ex.frac(c)
            if c:
                mono = tuple(mono)
                if len(mono) != nvars:
                    raise InputError("monomial length does not match nvars")
                self.terms[mono] = self.terms.get(mono, Fraction(0)) + c
                if not self.terms[mono]:
                    del self.terms[mono]

    @classmethod
    def const(cls, nvars, c=1):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, i, c=1):
        mono = [0] * nvars
        mono[i] = 1
        return cls(nvars, {tuple(mono): c})

    @classmethod
    def linear(cls, coeffs):
        """Linear form sum_i coeffs[i] x_i."""
        n = len(coeffs)
        return sum((cls.var(n, i, c) for i, c in enumerate(coeffs) if c), cls(n))

    @classmethod
    def monomial(cls, nvars, letters, c=1):
        mono = [0] * nvars
        for i in letters:
            mono[i] += 1
        return cls(nvars, {tuple(mono): c})

    def copy(self):
        p = PolyElement(self.nvars)
        p.terms = dict(self.terms)
        return p

    def _check(self, other):
        if self.nvars != other.nvars:
            raise InputError("polynomials over different variable sets")

    def __add__(self, other):
        if not isinstance(other, PolyElement):
            other = PolyElement.const(self.nvars, other)
        self._check(other)
        out = self.copy()
        for m, c in other.terms.items():
            v = out.terms.get(m, Fraction(0)) + c
            if v:
                out.terms[m] = v
            else:
                out.terms.pop(m, None)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = PolyElement(self.nvars)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PolyElement):
            s = ex.frac(other)
            out = PolyElement(self.nvars)
            if s:
                out.terms = {m: c * s for m, c in self.terms.items()}
            return out
        self._check(other)
        acc = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
        return PolyElement(self.nvars, acc)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = PolyElement.const(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PolyElement.const(self.nvars, other)
        if not isinstance(other, PolyElement):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def homogeneous(self, d):
        return PolyElement(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d})

    def truncate(self, n):
        return PolyElement(self.nvars, {m: c for m, c in self.terms.items() if sum(m) <= n})

    def constant(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def diff(self, i, k=1):
        acc = {}
        for m, c in self.terms.items():
            if m[i] >= k:
                f = math.perm(m[i], k)
                mm = list(m)
                mm[i] -= k
                acc[tuple(mm)] = acc.get(tuple(mm), Fraction(0)) + c * f
        return PolyElement(self.nvars, acc)

    def diff_multi(self, alpha):
        out = self
        for i, k in enumerate(alpha):
            if k:
                out = out.diff(i, k)
        return out

    def evaluate(self, point):
        total = 0
        for m, c in self.terms.items():
            t = c
            for x, k in zip(point, m):
                if k:
                    t = t * x ** k
            total = total + t
        return total

    def substitute(self, images):
        """Replace x_i by the polynomial images[i] (all over a common variable set)."""
        if len(images) != self.nvars:
            raise InputError("need one image per variable")
        n = images[0].nvars
        out = PolyElement(n)
        for m, c in self.terms.items():
            t = PolyElement.const(n, c)
            for i, k in enumerate(m):
                if k:
                    t = t * images[i] ** k
            out = out + t
        return out

    def uses_only(self, indices):
        allowed = set(indices)
        return all(not k or i in allowed for m in self.terms for i, k in enumerate(m))

    def to_json(self):
        out = {}
        for m, c in sorted(self.terms.items()):
            letters = [i for i, k in enumerate(m) for _ in range(k)]
            out[",".join(map(str, letters))] = str(c)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(m) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _word_to_mono(word, n):
    mono = [0] * n
    for i in word:
        mono[i] += 1
    return tuple(mono)


def _mono_to_word(mono):
    return tuple(i for i, k in enumerate(mono) for _ in range(k))


def _cache(algebra, name):
    store = algebra.__dict__.setdefault("_uea_cache", {})
    return store.setdefault(name, {})


def _normal_word(algebra, word):
    """PBW normal form of an arbitrary word, as {sorted word: coeff}."""
    memo = _cache(algebra, "normal")
    hit = memo.get(word)
    if hit is not None:
        return hit
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            break
    else:
        res = {word: Fraction(1)}
        memo[word] = res
        return res
    a, b = word[i], word[i + 1]
    res = dict(_normal_word(algebra, word[:i] + (b, a) + word[i + 2:]))
    for k, c in enumerate(algebra.c[a][b]):
        if c:
            for w, v in _normal_word(algebra, word[:i] + (k,) + word[i + 2:]).items():
                res[w] = res.get(w, Fraction(0)) + c * v
    res = {w: v for w, v in res.items() if v}
    memo[word] = res
    return res


class UEAElement:
    """Element of U(g) in PBW normal form."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms=None, normalise=True):
        self.algebra = algebra
        self.terms = {}
        for w, c in (terms or {}).items():
            c = ex.frac(c)
            if not c:
                continue
            parts = _normal_word(algebra, tuple(w)) if normalise else {tuple(w): Fraction(1)}
            for ww, v in parts.items():
                self.terms[ww] = self.terms.get(ww, Fraction(0)) + c * v
        self.terms = {w: c for w, c in self.terms.items() if c}

    @classmethod
    def one(cls, algebra, c=1):
        return cls(algebra, {(): c})

    @classmethod
    def letter(cls, algebra, i, c=1):
        return cls(algebra, {(i,): c})

    @classmethod
    def from_vector(cls, algebra, v):
        return cls(algebra, {(i,): c for i, c in enumerate(v) if c})

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise InputError("elements of different enveloping algebras")

    def __add__(self, other):
        if not isinstance(other, UEAElement):
            other = UEAElement.one(self.algebra, other)
        self._check(other)
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, Fraction(0)) + c
        return UEAElement(self.algebra, acc, normalise=False)

    __radd__ = __add__

    def __neg__(self):
        return UEAElement(self.algebra, {w: -c for w, c in self.terms.items()}, normalise=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UEAElement):
            s = ex.frac(other)
            return UEAElement(self.algebra, {w: c * s for w, c in self.terms.items()},
                              normalise=False)
        return uea_multiply(self, other)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, UEAElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        return max((len(w) for w in self.terms), default=-1)

    def __repr__(self):
        names = self.algebra.basis_names
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*" + ("·".join(names[i] for i in w) or "1")
                          for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])))

    def to_json(self):
        return {",".join(map(str, w)): str(c) for w, c in sorted(self.terms.items())}


def uea_multiply(u, v):
    """Product in U(g), rewritten to PBW normal form."""
    u._check(v)
    acc = {}
    for w1, c1 in u.terms.items():
        for w2, c2 in v.terms.items():
            for w, c in _normal_word(u.algebra, w1 + w2).items():
                acc[w] = acc.get(w, Fraction(0)) + c1 * c2 * c
    return UEAElement(u.algebra, acc, normalise=False)


def _beta_mono(algebra, mono):
    memo = _cache(algebra, "beta")
    hit = memo.get(mono)
    if hit is not None:
        return hit
    letters = _mono_to_word(mono)
    acc = {}
    count = 0
    for perm in multiset_permutations(list(letters)):
        count += 1
        for w, c in _normal_word(algebra, tuple(perm)).items():
            acc[w] = acc.get(w, Fraction(0)) + c
    res = {w: c / count for w, c in acc.items() if c}
    memo[mono] = res
    return res


def pbw_symmetrize(f, algebra):
    """beta: S(g) -> U(g), the symmetrization map."""
    if f.nvars != algebra.dim:
        raise InputError("polynomial and algebra dimensions differ")
    acc = {}
    for mono, c in f.terms.items():
        for w, v in _beta_mono(algebra, mono).items():
            acc[w] = acc.get(w, Fraction(0)) + c * v
    return UEAElement(algebra, acc, normalise=False)


def _top_symbol(u):
    d = u.degree()
    n = u.algebra.dim
    return PolyElement(n, {_word_to_mono(w, n): c for w, c in u.terms.items() if len(w) == d})


def pbw_unsymmetrize(u):
    """beta^{-1}: U(g) -> S(g) by peeling off top-degree symbols."""
    n = u.algebra.dim
    f = PolyElement(n)
    r = u
    while r:
        top = _top_symbol(r)
        f = f + top
        r = r - pbw_symmetrize(top, u.algebra)
    return f


def _check_adapted(u, pair):
    if u.algebra is not pair.adapted:
        raise InputError("element must live over the pair's adapted basis (p first, k last)")


def _drop_k_letters(u, pair, chi_by_index):
    kset = set(pair.k_idx)
    acc = {}
    for w, c in u.terms.items():
        j = len(w)
        while j and w[j - 1] in kset:
            c = c * chi_by_index[w[j - 1]]
            j -= 1
        if c:
            acc[w[:j]] = acc.get(w[:j], Fraction(0)) + c
    return UEAElement(u.algebra, acc, normalise=False)


def _chi_by_index(pair, chi):
    if chi is None:
        return {i: Fraction(0) for i in pair.k_idx}
    return dict(zip(pair.k_idx, chi.values))


def pbw_project(u, pair, chi=None):
    """The unique f in S(p) with u - beta(f) in U(g)·k^{-chi}.

    Modulo the left ideal a trailing k-letter may be replaced by chi(k).
    """
    _check_adapted(u, pair)
    chis = _chi_by_index(pair, chi)
    n = pair.adapted.dim
    f = PolyElement(n)
    r = _drop_k_letters(u, pair, chis)
    while r:
        top = _top_symbol(r)
        f = f + top
        r = _drop_k_letters(r - pbw_symmetrize(top, pair.adapted), pair, chis)
    return f


def rouviere_product(f1, f2, pair, chi=None):
    """f1 # f2 = projection of beta(f1)·beta(f2) onto S(p)."""
    a = pair.adapted
    prod = uea_multiply(pbw_symmetrize(f1, a), pbw_symmetrize(f2, a))
    return pbw_project(prod, pair, chi)


class ConstCoeffOperator:
    """Constant-coefficient differential operator sum_a c_a d^a, of order <= N.

    The symbol is stored as a PolyElement whose variables stand for the
    partial derivatives.
    """

    def __init__(self, symbol, order):
        self.order = order
        self.symbol = symbol.truncate(order)

    @property
    def nvars(self):
        return self.symbol.nvars

    def apply(self, f):
        if f.nvars != self.nvars:
            raise InputError("operator and polynomial dimensions differ")
        if f.degree() > self.order:
            raise TruncationError(f"operator of order {self.order} applied to degree {f.degree()}")
        out = PolyElement(f.nvars)
        for alpha, c in self.symbol.terms.items():
            if sum(alpha) <= f.degree():
                out = out + f.diff_multi(alpha) * c
        return out

    def __call__(self, f):
        return self.apply(f)

    def compose(self, other):
        n = min(self.order, other.order)
        return ConstCoeffOperator((self.symbol * other.symbol).truncate(n), n)

    def inverse(self):
        return ConstCoeffOperator(series_inverse(self.symbol, self.order), self.order)

    def is_identity(self):
        return self.symbol == PolyElement.const(self.nvars)

    def __eq__(self, other):
        return (isinstance(other, ConstCoeffOperator) and self.order == other.order
                and self.symbol == other.symbol)


def series_exp(s, order):
    """exp(s) truncated at total degree ``order``; s has no constant term."""
    if s.constant():
        raise InputError("series_exp needs a series without constant term")
    out = PolyElement.const(s.nvars)
    term = PolyElement.const(s.nvars)
    for m in range(1, order + 1):
        term = (term * s).truncate(order) * Fraction(1, m)
        if not term:
            break
        out = out + term
    return out


def series_inverse(s, order):
    c0 = s.constant()
    if not c0:
        raise InputError("series is not invertible")
    u = s * (1 / c0) - 1
    out = PolyElement.const(s.nvars)
    term = PolyElement.const(s.nvars)
    for _ in range(order):
        term = (term * (-u)).truncate(order)
        if not term:
            break
        out = out + term
    return out * (1 / c0)


def ad_poly_matrix(algebra, indices=None):
    """ad(x) for generic x = sum_{i in indices} x_i e_i, entries polynomial in x."""
    n = algebra.dim
    idx = range(n) if indices is None else indices
    mat = [[PolyElement(n) for _ in range(n)] for _ in range(n)]
    for l in idx:
        for j in range(n):
            for i, c in enumerate(algebra.c[l][j]):
                if c:
                    mat[i][j] = mat[i][j] + PolyElement.var(n, l, c)
    return mat


def _polymat_mul(a, b):
    n = len(a)
    return [[reduce(lambda x, y: x + y, (a[i][k] * b[k][j] for k in range(n)))
             for j in range(n)] for i in range(n)]


def trace_power_polys(algebra, max_power, indices=None, rows=None):
    """{m: tr(ad(x)^m)} as polynomials in x, traced over ``rows`` (default all)."""
    ad = ad_poly_matrix(algebra, indices)
    rows = range(algebra.dim) if rows is None else rows
    out = {}
    cur = ad
    for m in range(1, max_power + 1):
        out[m] = reduce(lambda x, y: x + y, (cur[i][i] for i in rows))
        cur = _polymat_mul(cur, ad)
    return out


def log_sqrt_q_series(algebra, order):
    """log sqrt(q) = 1/2 sum_n B_2n / (2n (2n)!) tr_g(ad^2n), to degree ``order``."""
    traces = trace_power_polys(algebra, max(order, 1))
    out = PolyElement(algebra.dim)
    for n in range(1, order // 2 + 1):
        coeff = ex.frac(bernoulli(2 * n)) / (2 * n * math.factorial(2 * n)) / 2
        out = out + traces[2 * n] * coeff
    return out


def log_sqrt_j_series(pair, order):
    """log sqrt(j) on p, j(x) = det_p(sinh(ad x)/ad x), to degree ``order``."""
    a = pair.adapted
    traces = trace_power_polys(a, max(order, 1), indices=pair.p_idx, rows=pair.p_idx)
    out = PolyElement(a.dim)
    for n in range(1, order // 2 + 1):
        coeff = ex.frac(bernoulli(2 * n)) * 4 ** n / (2 * n * math.factorial(2 * n)) / 2
        out = out + traces[2 * n] * coeff
    return out


def build_duflo_operator(algebra, symbol="sqrt_q", order=4):
    """d_sqrt(q) on S(g), or d_sqrt(j) on S(p) when ``algebra`` is a SymmetricPair."""
    if order < 0:
        raise InputError("order must be non-negative")
    if symbol == "sqrt_q":
        # a pair acts through its adapted basis
        log = log_sqrt_q_series(getattr(algebra, "adapted", algebra), order)
    elif symbol == "sqrt_j":
        if not hasattr(algebra, "p_idx"):
            raise InputError("sqrt_j needs a symmetric pair")
        log = log_sqrt_j_series(algebra, order)
    else:
        raise InputError(f"unknown symbol {symbol!r}")
    return ConstCoeffOperator(series_exp(log, order), order)


def star_a(f1, f2, algebra, order=None):
    """f1 *_A f2 = d^{-1} beta^{-1}( beta(d f1) · beta(d f2) ), d = d_sqrt(q)."""
    need = max(f1.degree(), 0) + max(f2.degree(), 0)
    if order is None:
        order = need
    if order < need:
        raise TruncationError(f"order {order} too small for degrees summing to {need}")
    d = build_duflo_operator(algebra, "sqrt_q", order)
    prod = uea_multiply(pbw_symmetrize(d(f1), algebra), pbw_symmetrize(d(f2), algebra))
    return d.inverse()(pbw_unsymmetrize(prod))
