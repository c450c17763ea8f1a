"""Finite-dimensional Lie algebras over Q, symmetric pairs and characters.

Elements are coordinate vectors (lists of Fraction) over a fixed basis.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from . import _exact as ex
from .errors import InputError


def _zero(n):
    return [Fraction(0)] * n


def _unit(n, i):
    v = _zero(n)
    v[i] = Fraction(1)
    return v


def _table_from_any(structure, dim=None):
    """Normalise a structure table to dense c[i][j][k].

    Accepts a dense nested list or a dict {(i, j): {k: coeff}}.
    """
    if isinstance(structure, dict):
        if dim is None:
            raise InputError("dict structure tables need an explicit dim")
        c = [[_zero(dim) for _ in range(dim)] for _ in range(dim)]
        for key, vec in structure.items():
            i, j = key
            if not (0 <= i < dim and 0 <= j < dim):
                raise InputError(f"bracket index {key} out of range")
            for k, v in vec.items():
                if not 0 <= k < dim:
                    raise InputError(f"coefficient index {k} out of range")
                c[i][j][k] = ex.frac(v)
        return c
    n = len(structure)
    if dim is not None and n != dim:
        raise InputError(f"table has size {n}, expected {dim}")
    for row in structure:
        if len(row) != n or any(len(vec) != n for vec in row):
            raise InputError("structure table is not n x n x n")
    return [[[ex.frac(v) for v in vec] for vec in row] for row in structure]


def check_jacobi(structure, dim=None):
    """True iff the table is antisymmetric and satisfies the Jacobi identity exactly."""
    c = _table_from_any(structure, dim)
    n = len(c)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if c[i][j][k] != -c[j][i][k]:
                    return False
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    s = Fraction(0)
                    for m in range(n):
                        s += (c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l]
                              + c[k][i][m] * c[m][j][l])
                    if s:
                        return False
    return True


class LieAlgebra:
    """Lie algebra with exact structure constants [x_i, x_j] = sum_k c_ij^k x_k."""

    def __init__(self, basis_names, structure, validate=True):
        self.basis_names = list(basis_names)
        self.dim = len(self.basis_names)
        if self.dim == 0:
            raise InputError("dimension must be positive")
        self.c = _table_from_any(structure, self.dim)
        if validate and not check_jacobi(self.c):
            raise InputError("structure constants violate antisymmetry or Jacobi")

    # -- construction -------------------------------------------------
    @classmethod
    def from_dict(cls, data):
        dim = int(data["dim"])
        names = list(data.get("basis") or [f"x{i}" for i in range(dim)])
        if len(names) != dim:
            raise InputError("basis length does not match dim")
        index = {nm: i for i, nm in enumerate(names)}

        def idx(v):
            if isinstance(v, str) and v in index:
                return index[v]
            return int(v)

        table = {}
        for br in data.get("brackets", []):
            i, j = idx(br["i"]), idx(br["j"])
            coeffs = {idx(k): ex.frac(v) for k, v in br["coeffs"].items()}
            table[(i, j)] = coeffs
            table[(j, i)] = {k: -v for k, v in coeffs.items()}
        return cls(names, table if table else [[_zero(dim) for _ in range(dim)]
                                               for _ in range(dim)])

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        brackets = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                coeffs = {str(k): str(v) for k, v in enumerate(self.c[i][j]) if v}
                if coeffs:
                    brackets.append({"i": i, "j": j, "coeffs": coeffs})
        return {"dim": self.dim, "basis": self.basis_names, "brackets": brackets}

    # -- arithmetic ---------------------------------------------------
    def bracket(self, x, y):
        n = self.dim
        out = _zero(n)
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                cij = self.c[i][j]
                for k in range(n):
                    if cij[k]:
                        out[k] += xi * yj * cij[k]
        return out

    def basis_vector(self, i):
        return _unit(self.dim, i)

    def vector(self, coeffs):
        """Build a vector from {name or index: coeff}."""
        v = _zero(self.dim)
        for key, val in coeffs.items():
            i = self.basis_names.index(key) if isinstance(key, str) else int(key)
            v[i] += ex.frac(val)
        return v

    def is_abelian(self):
        return all(not any(vec) for row in self.c for vec in row)

    def __repr__(self):
        return f"LieAlgebra({self.basis_names})"


def adjoint_matrix(algebra, x):
    """Matrix of ad(x): column j holds the coordinates of [x, x_j]."""
    n = algebra.dim
    cols = [algebra.bracket(x, _unit(n, j)) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


@dataclass
class Subalgebra:
    parent: LieAlgebra
    basis: list

    def __post_init__(self):
        self.basis = [[ex.frac(v) for v in b] for b in self.basis]
        if self.basis and ex.rank(self.basis) != len(self.basis):
            raise InputError("subalgebra basis is linearly dependent")
        for a in self.basis:
            for b in self.basis:
                if self.coords(self.parent.bracket(a, b)) is None:
                    raise InputError("span is not closed under the bracket")

    @property
    def dim(self):
        return len(self.basis)

    def coords(self, x):
        """Coordinates of x in the subalgebra basis, or None if x is outside."""
        if not self.basis:
            return [] if not any(x) else None
        cols = [[self.basis[j][i] for j in range(self.dim)] for i in range(self.parent.dim)]
        return ex.solve(cols, list(x))

    def contains(self, x):
        return self.coords(x) is not None


@dataclass
class Character:
    domain: Subalgebra
    values: list
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.values = [ex.frac(v) for v in self.values]
        if len(self.values) != self.domain.dim:
            raise InputError("character has the wrong number of values")
        if self.check:
            for a in self.domain.basis:
                for b in self.domain.basis:
                    if self(self.domain.parent.bracket(a, b)):
                        raise InputError("functional does not vanish on brackets")

    def __call__(self, x):
        co = self.domain.coords(x)
        if co is None:
            raise InputError("argument is not in the character's domain")
        return sum((a * b for a, b in zip(co, self.values)), Fraction(0))

    def __add__(self, other):
        return Character(self.domain, [a + b for a, b in zip(self.values, other.values)])

    def scale(self, s):
        return Character(self.domain, [ex.frac(s) * a for a in self.values])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)


def _vector_name(names, v):
    parts = []
    for nm, c in zip(names, v):
        if not c:
            continue
        if c == 1:
            term = nm
        elif c == -1:
            term = "-" + nm
        else:
            term = f"{c}*{nm}"
        if parts and not term.startswith("-"):
            term = "+" + term
        parts.append(term)
    return "".join(parts) or "0"


def _normalised(vecs):
    out = []
    for v in vecs:
        lead = next(c for c in v if c)
        out.append([c / lead for c in v])
    return out


class SymmetricPair:
    """(g, sigma) with sigma an involutive automorphism, g = k + p.

    ``eigenbasis`` lists the p-vectors first and then the k-vectors, each in
    the coordinates of ``algebra``; ``adapted`` is the same algebra written in
    that eigenbasis, so that p_idx = [0, ..., dim p - 1] there.
    """

    def __init__(self, algebra, sigma, p_vectors, k_vectors):
        self.algebra = algebra
        self.sigma = sigma
        self.p_vectors = p_vectors
        self.k_vectors = k_vectors
        self.eigenbasis = p_vectors + k_vectors
        n = algebra.dim
        self.p_idx = list(range(len(p_vectors)))
        self.k_idx = list(range(len(p_vectors), n))
        # change of basis: columns are eigenvectors
        self.to_original = [[self.eigenbasis[j][i] for j in range(n)] for i in range(n)]
        self.to_adapted_matrix = ex.inverse(self.to_original)
        names = [_vector_name(algebra.basis_names, v) for v in self.eigenbasis]
        table = [[self.to_adapted(algebra.bracket(a, b)) for b in self.eigenbasis]
                 for a in self.eigenbasis]
        self.adapted = LieAlgebra(names, table, validate=False)
        self._check_cartan()

    def to_adapted(self, x):
        return ex.matvec(self.to_adapted_matrix, list(x))

    def from_adapted(self, x):
        return ex.matvec(self.to_original, list(x))

    def _check_cartan(self):
        a = self.adapted
        pset, kset = set(self.p_idx), set(self.k_idx)
        for i in range(a.dim):
            for j in range(a.dim):
                vec = a.c[i][j]
                # [k,k] and [p,p] land in k, [k,p] lands in p
                target = kset if ((i in pset) == (j in pset)) else pset
                if any(vec[m] for m in range(a.dim) if m not in target):
                    raise InputError("Cartan relations fail for this involution")

    @property
    def k_subalgebra(self):
        """k as a subalgebra of the adapted algebra."""
        return Subalgebra(self.adapted, [_unit(self.adapted.dim, i) for i in self.k_idx])

    @property
    def p_names(self):
        return [self.adapted.basis_names[i] for i in self.p_idx]

    @property
    def k_names(self):
        return [self.adapted.basis_names[i] for i in self.k_idx]

    def project_p(self, x):
        """Projection (1 - sigma)/2 onto p, in original coordinates."""
        sx = ex.matvec(self.sigma, list(x))
        return [(a - b) / 2 for a, b in zip(x, sx)]

    def in_p(self, x):
        return all(a == b for a, b in zip(self.project_p(x), x))

    def in_k(self, x):
        return not any(self.project_p(x))

    def character(self, values):
        return Character(self.k_subalgebra, values)

    def zero_character(self):
        return Character(self.k_subalgebra, [0] * len(self.k_idx), check=False)


def cartan_decompose(algebra, sigma):
    """Split g into the +1 (k) and -1 (p) eigenspaces of sigma."""
    n = algebra.dim
    sigma = [[ex.frac(v) for v in row] for row in sigma]
    if len(sigma) != n or any(len(r) != n for r in sigma):
        raise InputError("sigma has the wrong shape")
    if ex.matmul(sigma, sigma) != ex.identity(n):
        raise InputError("sigma is not an involution")
    for i in range(n):
        for j in range(n):
            lhs = ex.matvec(sigma, algebra.c[i][j])
            rhs = algebra.bracket([r[i] for r in sigma], [r[j] for r in sigma])
            if lhs != rhs:
                raise InputError("sigma is not a Lie algebra automorphism")
    minus = [[sigma[i][j] - int(i == j) for j in range(n)] for i in range(n)]
    plus = [[sigma[i][j] + int(i == j) for j in range(n)] for i in range(n)]
    k_vecs = _normalised(ex.nullspace(minus))
    p_vecs = _normalised(ex.nullspace(plus))
    return SymmetricPair(algebra, sigma, p_vecs, k_vecs)


def _trace_on_p(pair, m):
    """tr of m restricted to p, for m preserving the splitting (original coords)."""
    n = pair.algebra.dim
    proj = [[(int(i == j) - pair.sigma[i][j]) / 2 for j in range(n)] for i in range(n)]
    return ex.trace(ex.matmul(m, proj))


def delta_character(pair):
    """delta(k) = 1/2 tr_p(ad k), as a character of k."""
    vals = [_trace_on_p(pair, adjoint_matrix(pair.algebra, v)) / 2 for v in pair.k_vectors]
    return Character(pair.k_subalgebra, vals)


def trace_ad_character(pair, scale=1):
    """k -> scale * tr_g(ad k), as a character of k."""
    vals = [ex.frac(scale) * ex.trace(adjoint_matrix(pair.algebra, v)) for v in pair.k_vectors]
    return Character(pair.k_subalgebra, vals)


def quantum_shift(pair):
    """The character delta - 1/4 tr_g o ad."""
    return delta_character(pair) - trace_ad_character(pair, Fraction(1, 4))


def trace_ad_power(pair, x, n):
    """tr_p(ad(x)^(2n)) for x in p (original coordinates)."""
    if n < 1:
        raise InputError("n must be positive")
    x = [ex.frac(v) for v in x]
    if not pair.in_p(x):
        raise InputError("x is not in p")
    ad = adjoint_matrix(pair.algebra, x)
    return _trace_on_p(pair, ex.matpow(ad, 2 * n))


def trace_ad_power_g(algebra, x, m):
    """tr_g(ad(x)^m)."""
    return ex.trace(ex.matpow(adjoint_matrix(algebra, x), m))


def load_algebra(name):
    """Load a bundled algebra (``sl2``, ``abelian2``, ``solvable2``) with its sigma."""
    text = resources.files("artifact.data").joinpath(f"{name}.json").read_text()
    return algebra_from_dict(json.loads(text))


def load_algebra_file(path):
    """Load an algebra JSON file (same schema as the bundled ones) with its optional sigma."""
    with open(path) as fh:
        return algebra_from_dict(json.load(fh))


def algebra_from_dict(data):
    if not isinstance(data, dict):
        raise InputError("algebra JSON must be an object")
    try:
        alg = LieAlgebra.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed algebra JSON: {exc}") from exc
    sigma = None
    if "sigma" in data:
        flat = [ex.frac(v) for v in data["sigma"]]
        if len(flat) != alg.dim ** 2:
            raise InputError("sigma must list dim * dim entries")
        sigma = [flat[i * alg.dim:(i + 1) * alg.dim] for i in range(alg.dim)]
    return alg, sigma


def load_pair(name):
    alg, sigma = load_algebra(name)
    if sigma is None:
        raise InputError(f"bundled algebra {name} has no involution")
    return cartan_decompose(alg, sigma)


def swap_pair(algebra):
    """g + g with sigma swapping the summands; k is the diagonal, p the antidiagonal."""
    n = algebra.dim
    names = [nm + "_1" for nm in algebra.basis_names] + [nm + "_2" for nm in algebra.basis_names]
    table = [[_zero(2 * n) for _ in range(2 * n)] for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            for k, c in enumerate(algebra.c[i][j]):
                table[i][j][k] = c
                table[n + i][n + j][n + k] = c
    doubled = LieAlgebra(names, table)
    sigma = [[Fraction(int(j == (i + n) % (2 * n))) for j in range(2 * n)] for i in range(2 * n)]
    return cartan_decompose(doubled, sigma)
