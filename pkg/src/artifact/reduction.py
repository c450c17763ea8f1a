"""Chevalley-Eilenberg differentials on polynomial functions of a linear brane.

A brane is the affine subspace {xi in g* : xi|_h = chi} for a subalgebra h and a
character chi.  Polynomial functions on it are polynomials in coordinates
y_a = xi(c_a) for a complement basis (c_a), and h acts by the derivations

    h_i . y_a = xi([h_i, c_a]) = chi([h_i, c_a]_h) + sum_b [h_i, c_a]_b y_b.

Only exterior degrees 0 and 1 are materialised (plus the degree-2 target of d1,
used for the d^2 = 0 check).
"""

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from . import _exact as ex
from .errors import BudgetError, InputError
from .liealg import Subalgebra, _unit, _vector_name
from .uea import PolyElement

MAX_DEGREE = 6


# -- branes ------------------------------------------------------------------------------

@dataclass
class Brane:
    """Subalgebra h (basis vectors), a complement module basis and a character chi on h."""
    algebra: object
    sub: list
    complement: list
    chi: list = None
    names: list = None

    def __post_init__(self):
        n = self.algebra.dim
        self.sub = [[ex.frac(v) for v in b] for b in self.sub]
        self.complement = [[ex.frac(v) for v in b] for b in self.complement]
        Subalgebra(self.algebra, self.sub)  # closure check
        both = self.sub + self.complement
        if both and ex.rank(both) != len(both):
            raise InputError("subalgebra and complement are not independent")
        self.chi = [ex.frac(v) for v in (self.chi or [0] * len(self.sub))]
        if len(self.chi) != len(self.sub):
            raise InputError("chi needs one value per subalgebra basis vector")
        self._cols = [[b[i] for b in both] for i in range(n)]
        for a in self.sub:
            for b in self.sub:
                if self._chi_of(self.algebra.bracket(a, b)):
                    raise InputError("chi does not vanish on [h, h]")
        self._table = [[self.split(self.algebra.bracket(h, c)) for c in self.complement]
                       for h in self.sub]
        if self.names is None:
            self.names = [_vector_name(self.algebra.basis_names, c) for c in self.complement]

    def split(self, x):
        """(h-coordinates, complement coordinates) of x; error if x leaves h + complement."""
        co = ex.solve(self._cols, list(x)) if self._cols and self._cols[0] else None
        if co is None:
            if not any(x):
                return [Fraction(0)] * len(self.sub), [Fraction(0)] * len(self.complement)
            raise InputError("complement is not an h-module modulo h")
        m = len(self.sub)
        return co[:m], co[m:]

    def _chi_of(self, x):
        hco, _ = self.split(x)
        return sum((a * b for a, b in zip(hco, self.chi)), Fraction(0))

    @property
    def nvars(self):
        return len(self.complement)

    def action_images(self, i):
        """h_i . y_a as affine polynomials, one per complement coordinate."""
        out = []
        for hco, cco in self._table[i]:
            const = sum((a * b for a, b in zip(hco, self.chi)), Fraction(0))
            out.append(PolyElement.linear(cco) + const if self.nvars else PolyElement(0))
        return out

    def act(self, i, f):
        """h_i . f for a polynomial f in the complement coordinates."""
        out = PolyElement(self.nvars)
        for a, img in enumerate(self.action_images(i)):
            if img:
                out = out + img * f.diff(a)
        return out


def pair_brane(pair, chi=None):
    """k^perp shifted by chi (a Character of k or a list of values), coordinates on p."""
    values = None
    if chi is not None:
        values = list(getattr(chi, "values", chi))
    return Brane(pair.algebra, pair.k_vectors, pair.p_vectors, values,
                 [_vector_name(pair.algebra.basis_names, v) for v in pair.p_vectors])


def _complete_basis(algebra, vecs):
    """Standard basis vectors completing ``vecs`` to a basis, chosen greedily."""
    out = []
    for i in range(algebra.dim):
        e = _unit(algebra.dim, i)
        if ex.rank(vecs + out + [e]) > len(vecs) + len(out):
            out.append(e)
    return out


def polarization_brane(algebra, xi, b_basis):
    """xi + b^perp for a subalgebra b; coordinates on a standard complement of b."""
    b = Subalgebra(algebra, b_basis).basis
    chi = [sum((x * v for x, v in zip(xi, vec)), Fraction(0)) for vec in b]
    return Brane(algebra, b, _complete_basis(algebra, b), chi)


# -- the complex slice -------------------------------------------------------------------

def monomials(nvars, degree):
    """Exponent tuples of total degree exactly ``degree``, in a fixed order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        m = [0] * nvars
        for i in combo:
            m[i] += 1
        out.append(tuple(m))
    return sorted(out, reverse=True)


@dataclass
class CEComplexSlice:
    brane: Brane
    degree: int
    basis: list = field(default_factory=list)
    d0: list = field(default_factory=list)
    d1: list = field(default_factory=list)

    @property
    def nsub(self):
        return len(self.brane.sub)

    def pairs(self):
        return list(itertools.combinations(range(self.nsub), 2))

    def poly(self, vec):
        return PolyElement(self.brane.nvars, {m: c for m, c in zip(self.basis, vec) if c})

    def coords(self, f):
        index = {m: i for i, m in enumerate(self.basis)}
        vec = [Fraction(0)] * len(self.basis)
        for m, c in f.terms.items():
            if m not in index:
                raise InputError("polynomial degree exceeds the slice")
            vec[index[m]] = c
        return vec

    def apply_d0(self, f):
        """d f as a list of polynomials, one per subalgebra basis vector."""
        return [self.brane.act(i, f) for i in range(self.nsub)]

    def apply_d1(self, omega):
        """(d omega)(h_i, h_j) = h_i.omega_j - h_j.omega_i - omega([h_i, h_j])."""
        sub = self.brane.sub
        out = []
        for i, j in self.pairs():
            hco, _ = self.brane.split(self.brane.algebra.bracket(sub[i], sub[j]))
            term = self.brane.act(i, omega[j]) - self.brane.act(j, omega[i])
            for k, c in enumerate(hco):
                if c:
                    term = term - omega[k] * c
            out.append(term)
        return out

    def d_squared(self):
        """Exact matrix product d1 d0 (should vanish)."""
        return ex.matmul(self.d1, self.d0) if self.d1 and self.d0 else []

    def d_squared_is_zero(self):
        return not any(any(row) for row in self.d_squared())

    def to_json(self):
        return {"degree": self.degree, "variables": self.brane.names,
                "d0": [[str(c) for c in row] for row in self.d0]}


def ce_differential(source, degree):
    """Exact matrices of d_CE on S^{<=degree}: d0 into S (x) h*, d1 into S (x) wedge^2 h*.

    ``source`` is a Brane, a SymmetricPair (unshifted k^perp) or a RootDecomposition
    (the Iwasawa brane).
    """
    brane = as_brane(source)
    if degree < 0:
        raise InputError("degree must be non-negative")
    if degree > MAX_DEGREE:
        raise BudgetError(f"degree {degree} exceeds the guard {MAX_DEGREE}")
    basis = [m for d in range(degree + 1) for m in monomials(brane.nvars, d)]
    sl = CEComplexSlice(brane, degree, basis)
    nb = len(basis)
    d0_cols = []
    for m in basis:
        images = sl.apply_d0(PolyElement(brane.nvars, {m: 1}))
        d0_cols.append([c for img in images for c in sl.coords(img)])
    sl.d0 = [[d0_cols[j][i] for j in range(nb)] for i in range(nb * sl.nsub)]
    if sl.nsub >= 2:
        d1_cols = []
        for i in range(sl.nsub):
            for m in basis:
                omega = [PolyElement(brane.nvars) for _ in range(sl.nsub)]
                omega[i] = PolyElement(brane.nvars, {m: 1})
                d1_cols.append([c for img in sl.apply_d1(omega) for c in sl.coords(img)])
        rows = len(sl.pairs()) * nb
        sl.d1 = [[col[r] for col in d1_cols] for r in range(rows)]
    return sl


# -- kernels ---------------------------------------------------------------------------------

@dataclass
class ReductionResult:
    variables: list
    dims: tuple
    generators: list  # generators[d]: kernel elements new at filtration degree d

    def kernel(self):
        return [g for gens in self.generators for g in gens]

    def to_json(self):
        return {"variables": self.variables, "kernelDims": list(self.dims),
                "generators": [[g.to_json() for g in gens] for gens in self.generators]}


def _kernel(rows, ncols):
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    return ex.nullspace(rows)


def reduction_h0(source, degree):
    """ker d_CE on S^{<=degree}, reported by filtration degree.

    dims[d] = dim(ker on S^{<=d}) - dim(ker on S^{<=d-1}); generators[d] lists
    kernel elements of degree d completing the lower filtration pieces.
    """
    sl = ce_differential(source, degree)
    nb = len(sl.basis)
    dims, gens, found = [], [], []
    for d in range(degree + 1):
        cols = [j for j, m in enumerate(sl.basis) if sum(m) <= d]
        sub_rows = [[row[j] for j in cols] for row in sl.d0]
        ker = _kernel(sub_rows, len(cols))
        new = []
        for v in ker:
            full = [Fraction(0)] * nb
            for j, c in zip(cols, v):
                full[j] = c
            if ex.rank(found + new + [full]) > len(found) + len(new):
                new.append(full)
        dims.append(len(new))
        gens.append([sl.poly(v) for v in new])
        found += new
    return ReductionResult(sl.brane.names, tuple(dims), gens)


def as_brane(source):
    if isinstance(source, Brane):
        return source
    if isinstance(source, RootDecomposition):
        return iwasawa_brane(source)
    return pair_brane(source)


def in_kernel(source, f):
    brane = as_brane(source)
    return all(not brane.act(i, f) for i in range(len(brane.sub)))


# -- centralizers and polarizations ------------------------------------------------------------

def _xi_bracket_matrix(algebra, xi):
    """M[j][i] = xi([e_i, e_j])."""
    n = algebra.dim
    xi = [ex.frac(v) for v in xi]
    return [[sum((xi[k] * algebra.c[i][j][k] for k in range(n)), Fraction(0))
             for i in range(n)] for j in range(n)]


def centralizer(algebra, xi):
    """g(xi) = {x : xi([x, .]) = 0}."""
    if len(xi) != algebra.dim:
        raise InputError("xi has the wrong dimension")
    basis = ex.nullspace(_xi_bracket_matrix(algebra, xi))
    return Subalgebra(algebra, basis)


def check_polarization(algebra, xi, b):
    """Is b isotropic for B_xi(x, y) = xi([x, y]) and of dimension (dim g + dim g(xi))/2?"""
    if not isinstance(b, Subalgebra):
        b = Subalgebra(algebra, b)
    xi = [ex.frac(v) for v in xi]
    isotropic = all(not sum((x * v for x, v in zip(xi, algebra.bracket(u, w))), Fraction(0))
                    for u in b.basis for w in b.basis)
    expected = Fraction(algebra.dim + centralizer(algebra, xi).dim, 2)
    maximal = b.dim == expected
    return {"isotropic": isotropic, "maximal": maximal, "dimension": b.dim,
            "expected": str(expected), "polarization": isotropic and maximal}


# -- root decompositions -------------------------------------------------------------------------

def _sym(m):
    return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in m])


def _rational_eigenvalues(m):
    vals = _sym(m).eigenvals()
    out = []
    for v in vals:
        if not v.is_rational:
            raise InputError("ad of the torus has non-rational eigenvalues")
        out.append(Fraction(int(v.p), int(v.q)))
    return sorted(out)


def _is_semisimple(algebra, x):
    from .liealg import adjoint_matrix
    m = _sym(adjoint_matrix(algebra, x))
    return m.is_diagonalizable() and all(v.is_rational for v in m.eigenvals())


def _span_intersection(u, v, n):
    """Basis of span(u) ∩ span(v)."""
    if not u or not v:
        return []
    rows = [[w[i] for w in u] + [-w[i] for w in v] for i in range(n)]
    out = []
    for c in ex.nullspace(rows):
        vec = [sum((c[j] * u[j][i] for j in range(len(u))), Fraction(0)) for i in range(n)]
        if ex.rank(out + [vec]) > len(out):
            out.append(vec)
    return out


@dataclass
class RootDecomposition:
    pair: object
    torus: list
    roots: list  # [(values on the torus basis, basis of g_alpha)]
    g0: list
    k0: list
    p0: list
    n_plus: list
    n_minus: list

    def check(self):
        alg, n = self.pair.algebra, self.pair.algebra.dim
        allv = self.n_minus + self.g0 + self.n_plus
        if len(allv) != n or ex.rank(allv) != n:
            raise InputError("root spaces do not span g")
        spaces = {tuple(a): vs for a, vs in self.roots}
        for a, vs in self.roots:
            neg = spaces.get(tuple(-x for x in a))
            if neg is None:
                return False
            for v in vs:
                sv = ex.matvec(self.pair.sigma, v)
                if ex.rank(neg + [sv]) != len(neg):
                    return False
        g0 = Subalgebra(alg, self.g0)
        for part in (self.n_plus, self.n_minus):
            sub = Subalgebra(alg, part) if part else None
            for x in self.g0:
                for y in part:
                    if not sub.contains(alg.bracket(x, y)):
                        return False
        return g0.dim == len(self.g0)

    def to_json(self):
        return {"torus": [[str(c) for c in t] for t in self.torus],
                "roots": [[str(c) for c in a] for a, _ in self.roots],
                "dims": {"g0": len(self.g0), "k0": len(self.k0), "p0": len(self.p0),
                         "nPlus": len(self.n_plus)}}


def torus_of(pair, xi):
    """Semisimple part s_xi of p(xi), as the span of p(xi) basis vectors with semisimple ad."""
    g_xi = centralizer(pair.algebra, xi)
    p_xi = _span_intersection(g_xi.basis, pair.p_vectors, pair.algebra.dim)
    return [v for v in p_xi if _is_semisimple(pair.algebra, v)]


def root_decomposition(pair, xi=None, torus=None):
    """Joint eigenspaces of ad over the torus, with positivity by the first nonzero value."""
    from .liealg import adjoint_matrix
    alg, n = pair.algebra, pair.algebra.dim
    if torus is None:
        if xi is None:
            raise InputError("need xi or an explicit torus")
        torus = torus_of(pair, xi)
    torus = [[ex.frac(v) for v in t] for t in torus]
    spaces = [((), [_unit(n, i) for i in range(n)])]
    for t in torus:
        ad = adjoint_matrix(alg, t)
        nxt = []
        for label, vs in spaces:
            for lam in _rational_eigenvalues(ad):
                shifted = [[ad[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
                eig = ex.nullspace(shifted)
                inter = _span_intersection(vs, eig, n)
                if inter:
                    nxt.append((label + (lam,), inter))
        spaces = nxt
    zero = tuple(Fraction(0) for _ in torus)
    g0, roots, n_plus, n_minus = [], [], [], []
    for label, vs in spaces:
        if label == zero:
            g0 = vs
            continue
        roots.append((label, vs))
        lead = next(c for c in label if c)
        (n_plus if lead > 0 else n_minus).extend(vs)
    fix = [[pair.sigma[i][j] - int(i == j) for j in range(n)] for i in range(n)]
    anti = [[pair.sigma[i][j] + int(i == j) for j in range(n)] for i in range(n)]
    k0 = _span_intersection(g0, ex.nullspace(fix), n) if g0 else []
    p0 = _span_intersection(g0, ex.nullspace(anti), n) if g0 else []
    return RootDecomposition(pair, torus, roots, g0, k0, p0, n_plus, n_minus)


def iwasawa_brane(decomp):
    """(k0 + n_+)^perp with coordinates on n_- + p0."""
    return Brane(decomp.pair.algebra, decomp.k0 + decomp.n_plus, decomp.n_minus + decomp.p0)


def bimodule_differential_order1(decomp, degree):
    """Kernel of the order-hbar part on S(p0): the k0-invariants under the adjoint action."""
    brane = Brane(decomp.pair.algebra, decomp.k0, decomp.p0)
    return reduction_h0(brane, degree)


def very_regular_element(pair, trials=20, seed=0, bound=5):
    """Random rational xi in k^perp minimising dim g(xi), then maximising dim s_xi."""
    rng = random.Random(seed)
    n = pair.algebra.dim
    perp = ex.nullspace(pair.k_vectors) if pair.k_vectors else [_unit(n, i) for i in range(n)]
    best, best_key = None, None
    for _ in range(trials):
        coeffs = [rng.randint(-bound, bound) for _ in perp]
        xi = [sum((c * v[i] for c, v in zip(coeffs, perp)), Fraction(0)) for i in range(n)]
        key = (centralizer(pair.algebra, xi).dim, -len(torus_of(pair, xi)))
        if best_key is None or key < best_key:
            best, best_key = xi, key
    return best
