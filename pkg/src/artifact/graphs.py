"""Admissible graphs: enumeration, canonical labeling, classification, colorings, operators.

Aerial vertices are 0..n-1 and each has exactly two ordered out-slots.  A slot
targets another aerial vertex, a second-type vertex (n, n+1, ...), a short
loop LOOP (at most one per vertex) or a phantom edge PHANTOM.  Second-type
vertices emit no edges.

``second`` is an int m for the half-plane model or a pair (k, l) for the
quadrant model (k vertices on iR^+, then l on R^+).  In the half-plane model a
``corner`` vertex may be given: it stands for the gauge mark and takes no
edges.  Weight-bearing graphs have 2n + m - 2 (half-plane) or 2n + k + l - 1
(quadrant) edge and loop slots; the remaining slots are phantoms.
"""

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, InputError
from .uea import PolyElement

LOOP = "L"
PHANTOM = "P"
MAX_AERIAL = 4


@dataclass(frozen=True)
class AdmissibleGraph:
    n: int
    second: object              # int m or (k, l)
    slots: tuple                # slots[v] = (target, target)
    corner: object = None       # half-plane gauge mark (a second-type vertex) or None

    def __post_init__(self):
        if len(self.slots) != self.n:
            raise InputError("need one slot pair per aerial vertex")
        top = self.n + self.m
        for v, pair in enumerate(self.slots):
            if len(pair) != 2:
                raise InputError("each aerial vertex has exactly two slots")
            if list(pair).count(LOOP) > 1:
                raise InputError("at most one short loop per vertex")
            for t in pair:
                if t in (LOOP, PHANTOM):
                    continue
                if not isinstance(t, int) or not 0 <= t < top or t == v:
                    raise InputError(f"bad slot target {t!r} at vertex {v}")
                if t == self.corner:
                    raise InputError("the corner vertex takes no edges")

    @property
    def model(self):
        return "quadrant" if isinstance(self.second, tuple) else "half_plane"

    @property
    def m(self):
        return sum(self.second) if isinstance(self.second, tuple) else self.second

    @property
    def edges(self):
        """Ordinary edges (s, t) in vertex order, then slot order."""
        return [(v, t) for v, pair in enumerate(self.slots) for t in pair
                if t not in (LOOP, PHANTOM)]

    @property
    def phantom(self):
        return [v for v, pair in enumerate(self.slots) for t in pair if t == PHANTOM]

    @property
    def loops(self):
        return [v for v, pair in enumerate(self.slots) if LOOP in pair]

    def form_degree(self):
        return len(self.edges) + len(self.loops)

    def dimension(self):
        if self.model == "quadrant":
            return 2 * self.n + self.m - 1
        return 2 * self.n + self.m - 2

    def degree_consistent(self):
        return self.form_degree() == self.dimension()

    def to_json(self):
        return {"n": self.n, "second": list(self.second) if isinstance(self.second, tuple)
                else self.second, "edges": [list(e) for e in self.edges],
                "phantom": self.phantom, "loops": self.loops,
                **({"corner": self.corner} if self.corner is not None else {})}

    @classmethod
    def from_json(cls, d):
        if isinstance(d, str):
            d = json.loads(d)
        second = tuple(d["second"]) if isinstance(d["second"], list) else d["second"]
        slots = [[] for _ in range(d["n"])]
        for s, t in d["edges"]:
            slots[s].append(t)
        for v in d.get("loops", []):
            slots[v].append(LOOP)
        for v in d.get("phantom", []):
            slots[v].append(PHANTOM)
        return cls(d["n"], second, tuple(tuple(p) for p in slots), d.get("corner"))


# -- canonical labeling ----------------------------------------------------------------

def _slot_key(t, perm, n):
    if t == LOOP:
        return (2, 0)
    if t == PHANTOM:
        return (3, 0)
    if t < n:
        return (0, perm[t])
    return (1, t)


def _encode(g, perm):
    """Encoding of g after relabeling aerial vertex v as perm[v]; slot pairs are unordered."""
    inv = [0] * g.n
    for v, p in enumerate(perm):
        inv[p] = v
    return tuple(tuple(sorted(_slot_key(t, perm, g.n) for t in g.slots[inv[i]]))
                 for i in range(g.n))


def canonical_form(g):
    return min(_encode(g, perm) for perm in itertools.permutations(range(g.n)))


def canonical_id(g):
    sec = "q%d,%d" % g.second if g.model == "quadrant" else "h%d" % g.second
    body = ";".join(",".join("%d.%d" % k for k in pair) for pair in canonical_form(g))
    return f"{g.n}|{sec}|{g.corner}|{body}"


def orbit_size(g):
    """Number of distinct aerial relabelings of g (as unordered-slot graphs)."""
    return len({_encode(g, perm) for perm in itertools.permutations(range(g.n))})


def _decode(n, second, corner, code):
    slots = []
    for pair in code:
        out = []
        for kind, val in pair:
            out.append(LOOP if kind == 2 else PHANTOM if kind == 3 else val)
        slots.append(tuple(out))
    return AdmissibleGraph(n, second, tuple(slots), corner)


# -- enumeration --------------------------------------------------------------------------

def enumerate_graphs(n, second, multi_edges=True, short_loops=True, phantom_budget=None,
                     corner=None, targets=None, linear=True, degree_filter=True,
                     max_aerial=MAX_AERIAL):
    """All admissible graphs with n aerial vertices up to relabeling, in canonical order.

    ``targets`` restricts the second-type vertices that may receive edges
    (default: all but the corner).  ``linear`` keeps aerial in-degree <= 1,
    the only graphs with a nonzero operator for a linear Poisson structure.
    """
    if n < 0:
        raise InputError("n must be non-negative")
    if n > max_aerial:
        raise BudgetError(f"n = {n} exceeds the enumeration guard {max_aerial}")
    m = sum(second) if isinstance(second, tuple) else second
    if n == 0:
        return [AdmissibleGraph(0, second, (), corner)]
    if targets is None:
        targets = [t for t in range(n, n + m) if t != corner]
    options = []
    for v in range(n):
        cands = [t for t in range(n) if t != v] + list(targets)
        if short_loops:
            cands.append(LOOP)
        cands.append(PHANTOM)
        pairs = []
        for a, b in itertools.combinations_with_replacement(cands, 2):
            if a == b and (a == LOOP or (not multi_edges and a != PHANTOM)):
                continue
            pairs.append((a, b))
        options.append(pairs)
    seen = {}
    for choice in itertools.product(*options):
        g = AdmissibleGraph(n, second, tuple(choice), corner)
        if degree_filter and not g.degree_consistent():
            continue
        if phantom_budget is not None and len(g.phantom) > phantom_budget:
            continue
        if linear and any(d > 1 for d in in_degrees(g)[:n]):
            continue
        code = canonical_form(g)
        if code not in seen:
            seen[code] = _decode(n, second, corner, code)
    return [seen[c] for c in sorted(seen)]


def in_degrees(g):
    deg = [0] * (g.n + g.m)
    for _, t in g.edges:
        deg[t] += 1
    return deg


# -- classification ----------------------------------------------------------------------

CLASSES = ("Bernoulli", "Wheel", "BernoulliWheel", "BracketOfBernoullis", "Disconnected",
           "Other")


def _aerial_edges(g):
    return [(s, t) for s, t in g.edges if t < g.n]


def _components(g):
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a
    for s, t in _aerial_edges(g):
        parent[find(s)] = find(t)
    return len({find(v) for v in range(g.n)})


def _cycle_vertices(g):
    succ = {v: [t for s, t in _aerial_edges(g) if s == v] for v in range(g.n)}
    on_cycle = set()
    for start in range(g.n):
        stack = [(start, [start])]
        while stack:
            v, path = stack.pop()
            for t in succ[v]:
                if t == start:
                    on_cycle.update(path)
                elif t not in path:
                    stack.append((t, path + [t]))
    return on_cycle


def classify_graph(g):
    """Structural class from the aerial skeleton (edges between aerial vertices)."""
    if g.n == 0:
        return "Other"
    if g.n > 1 and _components(g) > 1:
        return "Disconnected"
    indeg = in_degrees(g)[:g.n]
    if any(d > 1 for d in indeg):
        return "Other"
    aer = _aerial_edges(g)
    outdeg = [sum(1 for s, _ in aer if s == v) for v in range(g.n)]
    cyc = _cycle_vertices(g)
    if cyc:
        return "Wheel" if len(cyc) == g.n else "BernoulliWheel"
    if all(d <= 1 for d in outdeg):
        return "Bernoulli"
    branching = [v for v in range(g.n) if outdeg[v] == 2]
    if len(branching) == 1 and indeg[branching[0]] == 0:
        return "BracketOfBernoullis"
    return "Other"


# -- special graphs --------------------------------------------------------------------------

def wheel_graph(n):
    """n-vertex wheel in the quadrant model (1, 0): spoke to vertex n, then the cycle edge.

    For n = 1 the cycle is the short loop.
    """
    if n < 1:
        raise InputError("a wheel needs at least one vertex")
    if n == 1:
        return AdmissibleGraph(1, (1, 0), ((1, LOOP),))
    return AdmissibleGraph(n, (1, 0), tuple((n, (v + 1) % n) for v in range(n)))


def figure7_graphs():
    """Type (1, 2) in the half-plane model with the corner at vertex 2."""
    return enumerate_graphs(1, 2, corner=2)


# -- colorings ---------------------------------------------------------------------------------

def symmetric_pair_table():
    """(out1, out2, in) color triples allowed at a vertex by [p,p] in k, [p,k] in p, [k,k] in k."""
    return frozenset({("p", "p", "k"), ("p", "k", "p"), ("k", "p", "p"), ("k", "k", "k")})


def colorings(g, dims, table, spoke_part="p", phantom_part="k", root_part="p"):
    """All part labels on g.edges allowed by ``table``.

    ``dims`` maps part -> dimension; zero-dimensional parts are never used.
    Edges into second-type vertices get ``spoke_part``; phantom slots carry
    ``phantom_part``.  A vertex without an incoming edge is evaluated on the
    dual of ``root_part`` (None: no constraint there).  A short loop feeds its
    own vertex with a part chosen freely by the superloop sum.
    """
    parts = [p for p, d in dims.items() if d > 0]
    edges = g.edges
    free = [i for i, (_, t) in enumerate(edges) if t < g.n]
    fixed = {i: spoke_part for i, (_, t) in enumerate(edges) if t >= g.n}
    if any(p not in parts for p in fixed.values()):
        return []
    in_edge = {t: i for i, (_, t) in enumerate(edges) if t < g.n}
    out = []
    for choice in itertools.product(parts, repeat=len(free)):
        col = dict(fixed)
        col.update(zip(free, choice))
        if _vertices_ok(g, col, in_edge, table, parts, phantom_part, root_part):
            out.append(tuple(col[i] for i in range(len(edges))))
    return out


def _vertices_ok(g, col, in_edge, table, parts, phantom_part, root_part):
    k = 0
    for v, pair in enumerate(g.slots):
        slot_parts = []
        for t in pair:
            if t == LOOP:
                slot_parts.append(LOOP)
            elif t == PHANTOM:
                slot_parts.append(phantom_part)
            else:
                slot_parts.append(col[k])
                k += 1
        if LOOP in slot_parts:
            other = slot_parts[1 - slot_parts.index(LOOP)]
            if not any((other, c, c) in table for c in parts):
                return False
            continue
        if v in in_edge:
            need = col[in_edge[v]]
        elif root_part is None:
            continue
        else:
            need = root_part
        if (slot_parts[0], slot_parts[1], need) not in table:
            return False
    return True


def multiplicity_factor(pairs):
    """Product over distinct (source, target) pairs of 1/multiplicity!."""
    counts = {}
    for pair in pairs:
        counts[pair] = counts.get(pair, 0) + 1
    out = Fraction(1)
    for c in counts.values():
        out /= math.factorial(c)
    return out


def symmetry_factor(g):
    """1/multiplicity! over repeated edges, phantom slots included."""
    return multiplicity_factor([(v, t) for v, pair in enumerate(g.slots) for t in pair
                                if t != LOOP])


def weight_rows(g, coloring):
    """Integrand rows for weights.integrate_rows: edges and loops in slot order."""
    col = dict(zip(range(len(g.edges)), coloring))
    rows, k = [], 0
    for v, pair in enumerate(g.slots):
        for t in pair:
            if t == LOOP:
                rows.append(("loop", v))
            elif t != PHANTOM:
                rows.append(("edge", v, t, col[k]))
                k += 1
    return rows


# -- operators ---------------------------------------------------------------------------------

def _part_indices(structure, part):
    if part == "g" or not hasattr(structure, "p_idx"):
        return list(range(_algebra(structure).dim))
    return list(structure.p_idx) if part == "p" else list(structure.k_idx)


def _algebra(structure):
    return getattr(structure, "adapted", structure)


def _loop_signs(structure):
    a = _algebra(structure)
    if not hasattr(structure, "p_idx"):
        return {i: 1 for i in range(a.dim)}
    return {**{i: 1 for i in structure.p_idx}, **{i: -1 for i in structure.k_idx}}


def _to_fraction(w):
    return Fraction(w) if isinstance(w, float) else Fraction(w)


def operator_of_graph(g, coloring, weight, inputs, structure, phantom=None, model=None):
    """Polynomial B_g(inputs) scaled by weight * symmetry_factor(g).

    ``structure`` is a LieAlgebra or a SymmetricPair (then the adapted basis is
    used and parts "p", "k" select index ranges).  The Poisson structure is
    pi^{ab}(xi) = xi([e_a, e_b]).  ``inputs`` lists one polynomial per
    second-type vertex (the corner gets the constant 1).  A phantom slot
    contracts with the covector ``phantom`` (a list over the basis).  A short
    loop is the signed divergence sum_i s_i d_i pi^{. i}, halved in the
    half-plane model.
    """
    a = _algebra(structure)
    dim = a.dim
    if len(inputs) != g.m:
        raise InputError(f"graph has {g.m} second-type vertices, got {len(inputs)} inputs")
    if any(f.nvars != dim for f in inputs):
        raise InputError("inputs must be polynomials over the algebra's basis")
    if g.phantom and phantom is None:
        raise InputError("graph has phantom edges: supply a covector")
    model = model or g.model
    signs = _loop_signs(structure)
    edges = g.edges
    if coloring is None:
        coloring = ["g"] * len(edges)
    if len(coloring) != len(edges):
        raise InputError("coloring length differs from the number of edges")
    ranges = [_part_indices(structure, c) for c in coloring]
    loop_vs = g.loops
    # structure constants as polynomials: pi^{ab} = sum_c c_ab^c xi_c
    pi = [[PolyElement.linear(a.c[i][j]) for j in range(dim)] for i in range(dim)]
    total = PolyElement(dim)
    for idx in itertools.product(*ranges):
        for lidx in itertools.product(range(dim), repeat=len(loop_vs)):
            for pidx in itertools.product(range(dim), repeat=len(g.phantom)):
                total = total + _contract(g, idx, dict(zip(loop_vs, lidx)), pidx, pi, inputs,
                                          signs, phantom, dim)
    scale = _to_fraction(weight) * symmetry_factor(g)
    if loop_vs and model == "half_plane":
        scale /= 2 ** len(loop_vs)
    return total * scale


def _contract(g, idx, loop_idx, pidx, pi, inputs, signs, phantom, dim):
    coeff = Fraction(1)
    derivs = {}
    for (s, t), i in zip(g.edges, idx):
        derivs.setdefault(t, []).append(i)
    slot_index = []
    k = p = 0
    for v, pair in enumerate(g.slots):
        ab = []
        for t in pair:
            if t == LOOP:
                ab.append(loop_idx[v])
            elif t == PHANTOM:
                ab.append(pidx[p])
                coeff *= _to_fraction(phantom[pidx[p]])
                p += 1
            else:
                ab.append(idx[k])
                k += 1
        slot_index.append(ab)
        if v in loop_idx:
            coeff *= signs[loop_idx[v]]
            derivs.setdefault(v, []).append(loop_idx[v])
    if not coeff:
        return PolyElement(dim)
    out = PolyElement.const(dim, coeff)
    for v in range(g.n):
        a, b = slot_index[v]
        f = pi[a][b]
        for i in derivs.get(v, []):
            f = f.diff(i)
        if not f:
            return PolyElement(dim)
        out = out * f
    for j, f in enumerate(inputs):
        for i in derivs.get(g.n + j, []):
            f = f.diff(i)
        if not f:
            return PolyElement(dim)
        out = out * f
    return out


def labeling_factor(g):
    """orbit_size(g) / n!: with symmetry_factor, the weight of g in the labeled-graph sum."""
    return Fraction(orbit_size(g), math.factorial(g.n))
