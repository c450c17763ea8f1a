"""Monte-Carlo graph weights over gauge-fixed configuration spaces.

An integrand is an ordered list of rows, one per 1-form: ("edge", s, t, color)
for a propagator from vertex s to vertex t, or ("loop", v) for d eta at an
aerial vertex.  Aerial vertices are 0..n-1 and are sampled; second-type
vertices n, n+1, ... sit at the chart's fixed positions.  The density at a
sample is det(rows) in the coordinates (x_0, y_0, x_1, y_1, ...), times the
sampling Jacobian.

Each aerial coordinate pair is sampled in polar form r = s/(1 - s) with s, t
uniform on [0, 1), so the domain is bounded and the Jacobian is analytic.
"""

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InputError
from .kernels import arg_grad4, eta_grad

GUARD = 1e-12
DEFAULT_SHARDS = 8
CHART_VERSION = 1


@dataclass(frozen=True)
class Chart:
    """Region for aerial points, positions of second-type vertices and the color map."""
    name: str
    region: str                 # "quadrant" or "half_plane"
    fixed: tuple                # positions of second-type vertices n, n+1, ...
    colors: tuple               # ((part, propagator color), ...)

    def color(self, part):
        for p, c in self.colors:
            if p == part:
                return c
        raise InputError(f"chart {self.name} has no propagator for part {part!r}")


# A side: second-type vertex on iR^+ (gauge-fixed at i); + + for p, + - for k.
QUADRANT_A = Chart("quadrant_A", "quadrant", (1j,), (("p", (1, 1)), ("k", (1, -1))))
# B side: second-type vertex on R^+ (gauge-fixed at 1).
QUADRANT_B = Chart("quadrant_B", "quadrant", (1.0,), (("p", (1, 1)), ("k", (1, -1))))
# one coisotropic brane on R: omega^+ for p, omega^- for k; inputs at 0 and 1.
HALF_PLANE = Chart("half_plane", "half_plane", (0.0, 1.0), (("p", 1), ("k", -1), ("g", 1)))

CHARTS = {c.name: c for c in (QUADRANT_A, QUADRANT_B, HALF_PLANE)}


def chart_by_name(name):
    if name not in CHARTS:
        raise InputError(f"unknown chart {name!r}")
    return CHARTS[name]


@dataclass
class WeightEstimate:
    value: float
    std_error: float
    samples: int
    seed: int
    graph_id: str = ""
    model: str = ""
    rejections: int = 0
    tag: str = ""
    exact: bool = False

    def to_json(self):
        d = asdict(self)
        return {"graphId": d["graph_id"], "model": d["model"], "value": d["value"],
                "stdError": d["std_error"], "samples": d["samples"], "seed": d["seed"],
                "rejections": d["rejections"], "tag": d["tag"]}

    @classmethod
    def from_json(cls, d):
        return cls(d["value"], d["stdError"], d["samples"], d["seed"], d.get("graphId", ""),
                   d.get("model", ""), d.get("rejections", 0), d.get("tag", ""))

    def __add__(self, other):
        return WeightEstimate(self.value + other.value,
                              math.hypot(self.std_error, other.std_error),
                              self.samples, self.seed, self.graph_id, self.model,
                              self.rejections + other.rejections, self.tag)

    def scale(self, s):
        return WeightEstimate(self.value * s, abs(s) * self.std_error, self.samples, self.seed,
                              self.graph_id, self.model, self.rejections, self.tag, self.exact)


def exact_zero(graph_id="", model="", tag="dimension mismatch"):
    return WeightEstimate(0.0, 0.0, 0, 0, graph_id, model, 0, tag, True)


# -- sampling -------------------------------------------------------------------------

def _sample_points(rng, n_points, size, region):
    span = math.pi / 2 if region == "quadrant" else math.pi
    s = rng.random((size, n_points))
    t = rng.random((size, n_points))
    r = s / (1 - s)
    w = r * np.exp(1j * span * t)
    jac = np.prod(r * span / (1 - s) ** 2, axis=1)
    return w, jac


def _bad_rows(w, fixed, region):
    bad = np.zeros(w.shape[0], dtype=bool)
    n = w.shape[1]
    for a in range(n):
        bad |= np.abs(w[:, a]) < GUARD
        if region == "quadrant":
            bad |= (w[:, a].real < GUARD) | (w[:, a].imag < GUARD)
        else:
            bad |= w[:, a].imag < GUARD
        for b in range(a + 1, n):
            bad |= np.abs(w[:, a] - w[:, b]) < GUARD
        for f in fixed:
            bad |= np.abs(w[:, a] - f) < GUARD
    return bad


def sample_chart(rng, n_points, size, chart):
    """Draw ``size`` configurations, resampling rows that fall inside the guard radius."""
    w, jac = _sample_points(rng, n_points, size, chart.region)
    rejections = 0
    bad = _bad_rows(w, chart.fixed, chart.region)
    while bad.any():
        k = int(bad.sum())
        rejections += k
        w2, j2 = _sample_points(rng, n_points, k, chart.region)
        w[bad], jac[bad] = w2, j2
        bad = _bad_rows(w, chart.fixed, chart.region)
    return w, jac, rejections


# -- integrands -------------------------------------------------------------------------

def _propagator_coeffs(chart, color):
    if chart.region == "quadrant":
        e1, e2 = color
        return (1.0, -e2, -e1, e1 * e2)
    return (1.0, -color, 0.0, 0.0)


def _rows_matrix(rows, w, chart):
    n = w.shape[1]
    size = w.shape[0]
    m = np.zeros((size, len(rows), 2 * n))
    for r, row in enumerate(rows):
        if row[0] == "loop":
            v = row[1]
            m[:, r, 2 * v:2 * v + 2] = eta_grad(w[:, v])
            continue
        _, s, t, part = row
        if s >= n:
            raise InputError("edges must start at aerial vertices")
        zs = w[:, s]
        zt = w[:, t] if t < n else np.full(size, chart.fixed[t - n], dtype=complex)
        g = arg_grad4(zs, zt, _propagator_coeffs(chart, chart.color(part)))
        m[:, r, 2 * s:2 * s + 2] += g[:, 0:2]
        if t < n:
            m[:, r, 2 * t:2 * t + 2] += g[:, 2:4]
    return m


def densities(rows_list, w, chart):
    """Integrand values (without Jacobian) for several row lists at common samples."""
    return [np.linalg.det(_rows_matrix(rows, w, chart)) for rows in rows_list]


def _thread_count():
    return max(1, int(os.environ.get("ARTIFACT_THREADS", "1")))


def _shard_sizes(samples, shards):
    base, extra = divmod(samples, shards)
    return [base + (1 if i < extra else 0) for i in range(shards)]


def _run_shard(args):
    rows_list, n, size, chart, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    w, jac, rej = sample_chart(rng, n, size, chart)
    vals = [d * jac for d in densities(rows_list, w, chart)]
    stats = [(size, float(v.mean()), float(((v - v.mean()) ** 2).sum())) for v in vals]
    return stats, rej


def _combine(parts):
    """Chan's pairwise update of (count, mean, M2), applied in a fixed order."""
    n, mean, m2 = parts[0]
    for nb, mb, m2b in parts[1:]:
        tot = n + nb
        delta = mb - mean
        mean = mean + delta * nb / tot
        m2 = m2 + m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2


def integrate_rows(rows_list, n_aerial, chart, samples, seed, shards=DEFAULT_SHARDS,
                   graph_ids=None):
    """MC estimates for several integrands sharing the same sample stream."""
    if samples < 2:
        raise InputError("need at least two samples")
    graph_ids = graph_ids or [""] * len(rows_list)
    out = [None] * len(rows_list)
    live = []
    for i, rows in enumerate(rows_list):
        if len(rows) != 2 * n_aerial:
            out[i] = exact_zero(graph_ids[i], chart.name)
        else:
            live.append(i)
    if not live:
        return out
    shards = max(1, min(shards, samples // 2))
    children = np.random.SeedSequence(seed).spawn(shards)
    jobs = [([rows_list[i] for i in live], n_aerial, size, chart, ss)
            for size, ss in zip(_shard_sizes(samples, shards), children)]
    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        results = list(pool.map(_run_shard, jobs))
    rejections = sum(r for _, r in results)
    for j, i in enumerate(live):
        n, mean, m2 = _combine([stats[j] for stats, _ in results])
        std = math.sqrt(m2 / (n - 1) / n)
        out[i] = WeightEstimate(mean, std, samples, seed, graph_ids[i], chart.name, rejections)
    return out


def integrate_weight(graph, coloring, chart, samples, seed, shards=DEFAULT_SHARDS):
    """MC weight of one colored graph; degree != dimension gives an exact zero."""
    from .graphs import canonical_id, weight_rows
    rows = weight_rows(graph, coloring)
    gid = canonical_id(graph)
    if isinstance(chart, str):
        chart = chart_by_name(chart)
    return integrate_rows([rows], graph.n, chart, samples, seed, shards, [gid])[0]


# -- named weights -----------------------------------------------------------------------

def loop_weight(samples=1_000_000, seed=0):
    """Short loop plus an edge colored + - to the point i: the Figure-7 loop graph."""
    rows = [("edge", 0, 1, "k"), ("loop", 0)]
    return integrate_rows([rows], 1, QUADRANT_A, samples, seed, graph_ids=["loop(+-)"])[0]


def calibration_integral(samples=100_000, seed=0):
    """MC of the integral of exp(-|w|^2) over the quadrant; exact value pi/4."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    w, jac, _ = sample_chart(rng, 1, samples, QUADRANT_A)
    v = np.exp(-np.abs(w[:, 0]) ** 2) * jac
    return WeightEstimate(float(v.mean()), float(v.std(ddof=1) / math.sqrt(samples)),
                          samples, seed, "calibration", "quadrant")


VANISHING_COLORS = ("omega+", "omega-", (1, 1), (1, -1), (-1, 1), (-1, -1))


def vanishing_omega(color, basepoint, samples=100_000, seed=0):
    """Integral over the middle point z2 of eta(z1, z2) ^ eta(z2, z3) with eta = eta_1 = eta_2."""
    z1, z3 = complex(basepoint[0]), complex(basepoint[1])
    if color in ("omega+", "omega-"):
        chart = Chart("half_plane_pair", "half_plane", (z1, z3),
                      (("c", 1 if color == "omega+" else -1),))
    else:
        chart = Chart("quadrant_pair", "quadrant", (z1, z3), (("c", tuple(color)),))
    # middle point is aerial vertex 0; z1, z3 are fixed vertices 1, 2.  eta(z1, z2) is an
    # edge from z1 to z2, whose z2-components are the second slot of the kernel.
    if samples < 2:
        raise InputError("need at least two samples")
    shards = max(1, min(DEFAULT_SHARDS, samples // 2))
    children = np.random.SeedSequence(seed).spawn(shards)
    parts, rejections = [], 0
    for size, ss in zip(_shard_sizes(samples, shards), children):
        rng = np.random.default_rng(ss)
        w, jac, rej = sample_chart(rng, 1, size, chart)
        rejections += rej
        coeffs = _propagator_coeffs(chart, chart.color("c"))
        a = arg_grad4(np.full(size, z1), w[:, 0], coeffs)[:, 2:4]
        b = arg_grad4(w[:, 0], np.full(size, z3), coeffs)[:, 0:2]
        v = (a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]) * jac
        parts.append((size, float(v.mean()), float(((v - v.mean()) ** 2).sum())))
    n, mean, m2 = _combine(parts)
    return WeightEstimate(mean, math.sqrt(m2 / (n - 1) / n), samples, seed,
                          f"Omega{color}", chart.region, rejections)


def one_wheel(family, samples=1_000_000, seed=0):
    """W_1: the short loop at an aerial vertex with a + + edge to the second-type vertex."""
    chart = QUADRANT_A if family == "A" else QUADRANT_B
    rows = [("edge", 0, 1, "p"), ("loop", 0)]
    return integrate_rows([rows], 1, chart, samples, seed, graph_ids=[f"W1{family}"])[0]


def aerial_one_wheel_balance(samples=1_000_000, seed=0):
    """W_1^A, W_1^B and the sign s minimising |W_1^A + W_1^B + s/4|."""
    wa = one_wheel("A", samples, seed)
    wb = one_wheel("B", samples, seed + 1)
    best = min((1, -1), key=lambda s: abs(wa.value + wb.value + s / 4))
    residual = abs(wa.value + wb.value + best / 4)
    combined = math.hypot(wa.std_error, wb.std_error)
    return {"W1A": wa, "W1B": wb, "quarterSign": best, "residual": residual,
            "combinedStdError": combined,
            "balanced": residual < 3 * combined,
            "distinct": abs(wa.value - wb.value) > 3 * combined}


def wheel_weight(family, n, samples=1_000_000, seed=0, shards=DEFAULT_SHARDS):
    """Weight of the n-vertex wheel with spokes to the second-type vertex.

    The cycle edges carry the colorings allowed by the symmetric-pair relations;
    W_n = (1/n) * sum over colorings (the cyclic relabelings of the wheel).
    """
    from .graphs import colorings, symmetric_pair_table, weight_rows, wheel_graph
    if family not in ("A", "B"):
        raise InputError("family is 'A' or 'B'")
    g = wheel_graph(n)
    cols = colorings(g, {"p": 1, "k": 1}, symmetric_pair_table(), spoke_part="p")
    if not cols:
        return exact_zero(f"wheel{n}", "quadrant_" + family, "no admissible colorings")
    if n > 2:
        raise InputError("wheel weights beyond n = 2 are out of scope")
    chart = QUADRANT_A if family == "A" else QUADRANT_B
    # common samples: the error of the sum comes from the summed integrand
    summed = _summed_estimate([weight_rows(g, c) for c in cols], n, chart, samples, seed, shards)
    out = summed.scale(1 / n)
    out.graph_id = f"wheel{n}{family}"
    return out


def _summed_estimate(rows_list, n, chart, samples, seed, shards):
    """Estimate of the sum of several integrands, with the variance of the summed samples."""
    shards = max(1, min(shards, samples // 2))
    children = np.random.SeedSequence(seed).spawn(shards)
    parts, rejections = [], 0
    for size, ss in zip(_shard_sizes(samples, shards), children):
        rng = np.random.default_rng(ss)
        w, jac, rej = sample_chart(rng, n, size, chart)
        rejections += rej
        v = sum(densities(rows_list, w, chart)) * jac
        parts.append((size, float(v.mean()), float(((v - v.mean()) ** 2).sum())))
    cnt, mean, m2 = _combine(parts)
    return WeightEstimate(mean, math.sqrt(m2 / (cnt - 1) / cnt), samples, seed, "", chart.name,
                          rejections)


def k_wheel_weights(samples=1_000_000, seed=0):
    """2-wheels with spokes colored + - (for x in k): cycle colored p,p and k,k.

    Returns (w_p, w_k), each normalised by 1/2 like the p-wheels.
    """
    from .graphs import weight_rows, wheel_graph
    g = wheel_graph(2)
    out = []
    for part in ("p", "k"):
        col = {e: ("k" if e[1] >= 2 else part) for e in g.edges}
        coloring = tuple(col[e] for e in g.edges)
        est = _summed_estimate([weight_rows(g, coloring)], 2, QUADRANT_A, samples, seed, DEFAULT_SHARDS)
        est = est.scale(0.5)
        est.graph_id = f"kwheel2_{part}"
        out.append(est)
    return tuple(out)


# -- symbol identity -----------------------------------------------------------------------

def check_dr_symbol_identity(pair, weights, xs, order=2):
    """max_x |log jA + log sqrt j - log jB - log sqrt q| with traces through ``order``.

    log jA = W2A tr_p(ad x)^2 and log jB = W2B tr_p(ad x)^2 at this order; the
    sqrt j, sqrt q logs come from the exact trace series.  ``weights`` maps
    "W2A", "W2B" to WeightEstimate or float.  Returns (residual, budget) with
    budget = 5 * combined stdError * max |tr_p(ad x)^2|.
    """
    from .liealg import trace_ad_power
    from .uea import log_sqrt_j_series, log_sqrt_q_series
    if order != 2:
        raise InputError("only order 2 is implemented")

    def val(w):
        return (w.value, w.std_error) if isinstance(w, WeightEstimate) else (float(w), 0.0)
    wa, sa = val(weights["W2A"])
    wb, sb = val(weights["W2B"])
    log_j = log_sqrt_j_series(pair, order)
    log_q = log_sqrt_q_series(pair.adapted, order)
    residual, scale = 0.0, 0.0
    for x in xs:
        x = [_frac(c) for c in x]
        xa = pair.to_adapted(x)
        t_p = float(trace_ad_power(pair, x, 1))
        lhs = wa * t_p + float(log_j.evaluate(xa))
        rhs = wb * t_p + float(log_q.evaluate(xa))
        residual = max(residual, abs(lhs - rhs))
        scale = max(scale, abs(t_p))
    return residual, 5 * math.hypot(sa, sb) * scale


def _frac(c):
    from fractions import Fraction
    return Fraction(c).limit_denominator(10 ** 12) if isinstance(c, float) else Fraction(c)


# -- persistence -------------------------------------------------------------------------------

@dataclass
class WeightCache:
    """File-backed map (graph id, chart, chart version, samples, seed) -> WeightEstimate."""
    path: str = None
    entries: dict = field(default_factory=dict)

    @staticmethod
    def key(graph_id, chart, samples, seed):
        return f"{graph_id}|{chart}|v{CHART_VERSION}|{samples}|{seed}"

    @classmethod
    def load(cls, path):
        if path and os.path.exists(path):
            with open(path) as fh:
                data = json.load(fh)
            return cls(path, {k: WeightEstimate.from_json(v) for k, v in data.items()})
        return cls(path, {})

    def get_or_compute(self, graph_id, chart, samples, seed, compute):
        k = self.key(graph_id, chart, samples, seed)
        if k not in self.entries:
            self.entries[k] = compute()
        return self.entries[k]

    def save(self):
        if self.path:
            with open(self.path, "w") as fh:
                json.dump({k: v.to_json() for k, v in sorted(self.entries.items())}, fh,
                          indent=1, sort_keys=True)
