"""Operators A(f) = f *_L 1 and B(f) = 1 *_R f from the two-brane graph sums, their
wheel symbols and the CF product on invariants, at explicit truncation with explicit weight inputs.

Polynomials live on g in the adapted basis of the pair (p-coordinates first).  Graph
sums run over canonical graphs; each (graph, coloring) term is

    weight * symmetry_factor * labeling_factor * operator,

with weights looked up by ``weight_key`` and restricted to the brane afterwards.
hbar is kept as the graph order n and only summed at reporting time.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, TruncationError
from .graphs import (canonical_id, enumerate_graphs, labeling_factor, operator_of_graph,
                     weight_rows)
from .liealg import adjoint_matrix, quantum_shift
from .reduction import in_kernel, pair_brane
from .uea import (PolyElement, build_duflo_operator, log_sqrt_q_series, rouviere_product,
                  trace_power_polys)
from .weights import (HALF_PLANE, QUADRANT_A, QUADRANT_B, WeightEstimate, integrate_rows)

FAMILIES = {"A": (QUADRANT_A, "quadrant"), "B": (QUADRANT_B, "quadrant"),
            "CF": (HALF_PLANE, "half_plane")}


def weight_key(family, g, coloring):
    return f"{family}|{canonical_id(g)}|{''.join(coloring)}"


def _value(w):
    if isinstance(w, WeightEstimate):
        return w.value, w.std_error
    return w, 0.0


def _lookup(weights, key):
    if weights is None or key not in weights:
        raise InputError(f"missing weight {key}")
    return _value(weights[key])


# -- brane restriction ---------------------------------------------------------------------

def project(f, pair, shift=None):
    """Restriction to the brane shift + k^perp: k-coordinates become shift values."""
    n = pair.adapted.dim
    vals = dict(zip(pair.k_idx, getattr(shift, "values", shift) or [0] * len(pair.k_idx)))
    images = [PolyElement.var(n, i) if i in pair.p_idx else PolyElement.const(n, vals[i])
              for i in range(n)]
    return f.substitute(images)


def _check_input(f, pair):
    if f.nvars != pair.adapted.dim:
        raise InputError("polynomials must be over the adapted basis of the pair")


# -- generic graph expansion ----------------------------------------------------------------

def _graphs(family, n):
    if family == "CF":
        return enumerate_graphs(n, 2, phantom_budget=0)
    # f sits at the first second-type vertex, the constant 1 at the corner
    return enumerate_graphs(n, 2, corner=n + 1, phantom_budget=0)


def expansion_terms(inputs, pair, family, n, shift=None):
    """Nonzero (key, graph, coloring, operator) terms at graph order n, on the brane.

    Colorings run over all p/k labels; the restriction to the brane removes the
    ones the coloring filter forbids.  Operators carry symmetry and labeling factors.
    """
    _, model = FAMILIES[family]
    parts = [p for p, idx in (("p", pair.p_idx), ("k", pair.k_idx)) if idx]
    out = []
    for g in _graphs(family, n):
        for col in itertools.product(parts, repeat=len(g.edges)):
            op = operator_of_graph(g, col, 1, inputs, pair, model=model)
            op = project(op, pair, shift) * labeling_factor(g)
            if op:
                out.append((weight_key(family, g, col), g, col, op))
    return out


def _assemble(terms, weights, nvars):
    total, var = PolyElement(nvars), {}
    for key, _, _, op in terms:
        w, s = _lookup(weights, key)
        total = total + op * Fraction(w)
        for m, c in op.terms.items():
            var[m] = var.get(m, 0.0) + (float(c) * s) ** 2
    return total, {m: math.sqrt(v) for m, v in var.items()}


def required_weights(inputs, pair, family, truncation, shift=None):
    """{key: (graph, coloring)} needed for the expansion of ``inputs`` to ``truncation``."""
    need = {}
    for n in range(1, truncation + 1):
        for key, g, col, _ in expansion_terms(inputs, pair, family, n, shift):
            need.setdefault(key, (g, col))
    return need


def compute_weights(need, family, samples=200_000, seed=0):
    """MC weights for ``required_weights`` output; seeds follow the sorted key order."""
    chart, _ = FAMILIES[family]
    out = {}
    for i, key in enumerate(sorted(need)):
        g, col = need[key]
        est = integrate_rows([weight_rows(g, col)], g.n, chart, samples, seed + i,
                             graph_ids=[key])[0]
        out[key] = est
    return out


@dataclass
class Expansion:
    """Graph expansion by hbar order, with propagated MC standard errors per monomial."""
    orders: dict
    std_errors: dict = field(default_factory=dict)

    def total(self):
        polys = list(self.orders.values())
        out = PolyElement(polys[0].nvars)
        for p in polys:
            out = out + p
        return out

    def order(self, n):
        return self.orders[n]

    def error(self, n, mono):
        return self.std_errors.get(n, {}).get(mono, 0.0)


def _expand(inputs, base, pair, family, truncation, weights, shift):
    orders, errs = {0: base}, {0: {}}
    for n in range(1, truncation + 1):
        terms = expansion_terms(inputs, pair, family, n, shift)
        orders[n], errs[n] = _assemble(terms, weights, pair.adapted.dim)
    return Expansion(orders, errs)


# -- A and B ---------------------------------------------------------------------------------

def operator_a_expansion(f, pair, shift=None, truncation=1, weights=None):
    _check_input(f, pair)
    if truncation < 0:
        raise InputError("truncation must be non-negative")
    if truncation > 2:
        raise TruncationError("A is assembled through graph order 2")
    one = PolyElement.const(pair.adapted.dim)
    return _expand([f, one], project(f, pair, shift), pair, "A", truncation, weights, shift)


def operator_a(f, pair, shift=None, truncation=1, weights=None):
    """A(f) = f *_L 1 restricted to shift + k^perp, summed through ``truncation``."""
    return operator_a_expansion(f, pair, shift, truncation, weights).total()


def operator_b_expansion(f, pair, truncation=1, weights=None):
    _check_input(f, pair)
    if not f.uses_only(pair.p_idx):
        raise InputError("B acts on S(p)")
    if truncation < 0:
        raise InputError("truncation must be non-negative")
    if truncation > 2:
        raise TruncationError("B is assembled through graph order 2")
    one = PolyElement.const(pair.adapted.dim)
    return _expand([f, one], f, pair, "B", truncation, weights, None)


def operator_b(f, pair, truncation=1, weights=None):
    """B(f) = 1 *_R f on S(p), summed through ``truncation``."""
    return operator_b_expansion(f, pair, truncation, weights).total()


def wheel_operator(pair, coeff, order=2):
    """coeff * tr_p(ad(d)^order) as a constant-coefficient operator on S(p)."""
    a = pair.adapted
    tr = trace_power_polys(a, order, indices=pair.p_idx, rows=pair.p_idx)[order]
    return tr * Fraction(coeff)


def apply_symbol(symbol, f):
    out = PolyElement(f.nvars)
    for alpha, c in symbol.terms.items():
        out = out + f.diff_multi(alpha) * c
    return out


# -- wheel symbols ------------------------------------------------------------------------------

@dataclass
class TraceSymbolSeries:
    """exp(sum_n c_2n tr_p(ad(x)^2n)) truncated at ``order``."""
    family: str
    order: int
    coeffs: dict  # {2n: coefficient}
    std_errors: dict = field(default_factory=dict)

    def letters(self):
        return sorted(self.coeffs)

    def log_poly(self, pair):
        a = pair.adapted
        traces = trace_power_polys(a, max(self.order, 1), indices=pair.p_idx, rows=pair.p_idx)
        out = PolyElement(a.dim)
        for k, c in self.coeffs.items():
            out = out + traces[k] * Fraction(c)
        return out

    def log_value(self, pair, x):
        """log of the series at x in p (original coordinates)."""
        xa = pair.to_adapted([Fraction(v) if not isinstance(v, float) else Fraction(v)
                              for v in x])
        return float(self.log_poly(pair).evaluate(xa))

    def __call__(self, pair, x):
        return math.exp(self.log_value(pair, x))


def symbol_j(family, pair, order, weights):
    """j_A or j_B: coefficients W_2n^family from ``weights`` ("W2A", "W4A", ...)."""
    if family not in ("A", "B"):
        raise InputError("family is 'A' or 'B'")
    if order < 0:
        raise InputError("order must be non-negative")
    coeffs, errs = {}, {}
    for n in range(1, order // 2 + 1):
        w, s = _lookup(weights, f"W{2 * n}{family}")
        coeffs[2 * n], errs[2 * n] = w, s
    return TraceSymbolSeries(family, order, coeffs, errs)


# -- the symmetric-K lemma ------------------------------------------------------------------------

def _traces_k(pair, x):
    """tr_p, tr_k of ad(x) and ad(x)^2 for x in k, as floats."""
    x = [Fraction(v) for v in x]
    if not pair.in_k(x):
        raise InputError("x is not in k")
    xa = pair.to_adapted(x)
    ad = adjoint_matrix(pair.adapted, xa)
    n = len(ad)
    ad2 = [[sum(ad[i][m] * ad[m][j] for m in range(n)) for j in range(n)] for i in range(n)]
    tp1 = sum(ad[i][i] for i in pair.p_idx)
    tk1 = sum(ad[i][i] for i in pair.k_idx)
    tp2 = sum(ad2[i][i] for i in pair.p_idx)
    tk2 = sum(ad2[i][i] for i in pair.k_idx)
    return float(tp1), float(tk1), float(tp2), float(tk2), xa


def check_sym_k_lemma(pair, weights, xs, order=2):
    """max_x |log A(e^x) - log(sqrt q(x) e^{delta(x) - 1/4 tr ad x})| for x in k.

    log A(e^x) = loop (tr_p - tr_k)(ad x) + w_p tr_p(ad x)^2 + w_k tr_k(ad x)^2 with the
    loop weight and the k-wheel weights from ``weights`` ("loop", "wk2_p", "wk2_k").
    Returns (residual, budget) with budget 5 * propagated std error.
    """
    if order != 2:
        raise InputError("only order 2 is implemented")
    loop, sl = _lookup(weights, "loop")
    wp, sp = _lookup(weights, "wk2_p")
    wk, sk = _lookup(weights, "wk2_k")
    log_q = log_sqrt_q_series(pair.adapted, order)
    residual, budget = 0.0, 0.0
    for x in xs:
        tp1, tk1, tp2, tk2, xa = _traces_k(pair, x)
        lhs = loop * (tp1 - tk1) + wp * tp2 + wk * tk2
        rhs = float(log_q.evaluate(xa)) + 0.5 * tp1 - 0.25 * (tp1 + tk1)
        residual = max(residual, abs(lhs - rhs))
        err = math.sqrt((sl * (tp1 - tk1)) ** 2 + (sp * tp2) ** 2 + (sk * tk2) ** 2)
        budget = max(budget, 5 * err)
    return residual, budget


# -- CF product on invariants -----------------------------------------------------------------------

def _to_p_coords(f, pair):
    n = len(pair.p_idx)
    images = [PolyElement.var(n, pair.p_idx.index(i)) if i in pair.p_idx else PolyElement(n)
              for i in range(pair.adapted.dim)]
    return f.substitute(images)


def _check_invariant(f, pair):
    _check_input(f, pair)
    if not f.uses_only(pair.p_idx):
        raise InputError("input is not in S(p)")
    if not in_kernel(pair_brane(pair), _to_p_coords(f, pair)):
        raise InputError("input is not k-invariant")


def cf_product_expansion(f1, f2, pair, weights, truncation=2):
    """Graph expansion of f1 *_B f2 on k^perp through graph order ``truncation``."""
    _check_invariant(f1, pair)
    _check_invariant(f2, pair)
    if truncation > 2:
        raise TruncationError("the CF product is assembled through order 2")
    return _expand([f1, f2], f1 * f2, pair, "CF", truncation, weights, None)


def cf_product_order2(f1, f2, pair, weights):
    return cf_product_expansion(f1, f2, pair, weights).total()


def cf_product_oracle(f1, f2, pair, chi=None, order=None):
    """d_sqrt(j)^{-1}( d_sqrt(j) f1 # d_sqrt(j) f2 ), # the product modulo U(g) k^{-chi}.

    ``chi`` defaults to the quantum shift delta - 1/4 tr_g o ad.
    """
    if chi is None:
        chi = quantum_shift(pair)
    if order is None:
        order = f1.degree() + f2.degree()
    d = build_duflo_operator(pair, "sqrt_j", order)
    return d.inverse()(rouviere_product(d(f1), d(f2), pair, chi))
