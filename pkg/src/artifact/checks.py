"""Verification checks driven by ``artifact verify`` and the acceptance suite.

Each check returns a CheckResult.  All tolerances live in TOLERANCES.
"""
import cmath
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError

TOLERANCES = {
    "loopWeight14": {"sigmas": 3, "maxStdError": 5e-3, "samples": 1_000_000},
    "vanishingLemma": {"sigmas": 3, "maxStdError": 1e-2, "samples": 100_000},
    "squareMapPullback": {"abs": 1e-10, "configs": 1000},
    "symmetryRelations": {"abs": 1e-10, "points": 100},
    "boundaryTables": {"abs": 1e-3, "decadeRatio": 5.0, "roundoff": 1e-9},
    "rouviereCommutativity": {"exact": True, "degree": 4},
    "dufloMultiplicativity": {"exact": True, "degree": 4},
    "bchSuite": {"abs": 1e-8, "norm": 0.1, "order": 6},
    "reductionSpaces": {"exact": True, "degree": 4},
    "aerialOneWheelBalance": {"sigmas": 3, "samples": 1_000_000},
    "symbolIdentity": {"budgetSigmas": 5, "flagSigmas": 3, "samples": 1_000_000},
    "eightColorGeometry": {"abs": 1e-6, "eps": 1e-4, "collapse": 1e-3, "decadeRatio": 5.0},
}

EPS_LADDER = (1e-2, 1e-3, 1e-4)
TWO_PI = 2 * math.pi


@dataclass
class CheckResult:
    name: str
    status: str                 # pass | fail | error
    value: object = None
    std_error: float = None
    tolerance: object = None
    seed: int = None
    runtime_ms: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "pass"

    def to_json(self):
        return {"name": self.name, "status": self.status, "value": self.value,
                "stdError": self.std_error, "tolerance": self.tolerance, "seed": self.seed,
                "runtimeMs": round(self.runtime_ms, 3), "details": self.details}


def _status(ok):
    return "pass" if ok else "fail"


def _linear(errs, ratio, roundoff):
    """Errors along the eps ladder shrink by at least ``ratio`` per decade, or are roundoff."""
    if max(errs) < roundoff:
        return True
    return all(e1 / e2 >= ratio for e1, e2 in zip(errs, errs[1:]) if e2 > roundoff)


def _cached(cache, graph_id, chart, samples, seed, compute):
    if cache is None:
        return compute()
    return cache.get_or_compute(graph_id, chart, samples, seed, compute)


# -- 1: loop weight -------------------------------------------------------------------------

def check_loop_weight(samples=None, seed=0, cache=None, tol=None, **_):
    from .weights import loop_weight
    tol = tol or TOLERANCES["loopWeight14"]
    samples = samples or tol["samples"]
    est = _cached(cache, "loop14", "half_plane", samples, seed,
                  lambda: loop_weight(samples, seed))
    ok = abs(est.value - 0.25) < tol["sigmas"] * est.std_error and est.std_error < tol["maxStdError"]
    return CheckResult("loopWeight14", _status(ok), est.value, est.std_error, tol, seed,
                       details={"target": 0.25, "samples": samples})


# -- 2: vanishing lemma ---------------------------------------------------------------------

VANISHING_BASEPOINTS = {
    "half_plane": [(1j, 2j), (1 + 1j, -1 + 2j), (-0.5 + 0.5j, 0.7 + 1.3j)],
    "quadrant": [(1 + 1j, 2 + 2j), (cmath.exp(1j * math.pi / 6), cmath.exp(1j * math.pi / 3)),
                 (0.5 + 1.5j, 2 + 0.7j)],
}


def check_vanishing(samples=None, seed=0, tol=None, **_):
    from .weights import VANISHING_COLORS, vanishing_omega
    tol = tol or TOLERANCES["vanishingLemma"]
    samples = samples or tol["samples"]
    rows, ok, worst, worst_se = [], True, 0.0, 0.0
    for color in VANISHING_COLORS:
        model = "half_plane" if isinstance(color, str) else "quadrant"
        for i, bp in enumerate(VANISHING_BASEPOINTS[model]):
            est = vanishing_omega(color, bp, samples, seed + i)
            good = abs(est.value) < tol["sigmas"] * est.std_error and \
                est.std_error < tol["maxStdError"]
            ok &= good
            if abs(est.value) >= worst:
                worst, worst_se = abs(est.value), est.std_error
            rows.append({"color": str(color), "basepoint": i, "value": est.value,
                         "stdError": est.std_error, "pass": good})
    return CheckResult("vanishingLemma", _status(ok), worst, worst_se, tol, seed,
                       details={"cases": rows})


# -- 3: square-map pullback -----------------------------------------------------------------

def check_square_map(seed=0, tol=None, **_):
    """Half-plane forms against quadrant forms at square_map(z) times the analytic Jacobian."""
    from .confspace import UHPConfig, square_map
    from .jet import Jet
    from .propagators import eval_four_color
    tol = tol or TOLERANCES["squareMapPullback"]
    rng = random.Random(seed)
    worst, done = 0.0, 0
    while done < tol["configs"]:
        z1 = complex(rng.uniform(-2, 2), rng.uniform(0.05, 2))
        z2 = complex(rng.uniform(-2, 2), rng.uniform(0.05, 2))
        if abs(z1 - z2) < 1e-3:
            continue
        w1, w2 = square_map(UHPConfig([z1, z2], [0.0]), 0).aerial
        done += 1
        for color in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            half = eval_four_color("half_plane", (Jet.point(z1, "z1"), Jet.point(z2, "z2")), *color)
            quad = eval_four_color("quadrant", (Jet.point(w1, "w1"), Jet.point(w2, "w2")), *color)
            for zn, wn, w in (("z1", "w1", w1), ("z2", "w2", w2)):
                dw = 1 / (2 * w)        # dw/dz, holomorphic
                ax, ay = quad.get(wn + ".x", 0.0), quad.get(wn + ".y", 0.0)
                # d/dx: dw = dw/dz; d/dy: dw = i dw/dz
                for comp, dz in ((".x", dw), (".y", 1j * dw)):
                    pulled = ax * dz.real + ay * dz.imag
                    worst = max(worst, abs(half.get(zn + comp, 0.0) - pulled))
    return CheckResult("squareMapPullback", _status(worst < tol["abs"]), worst, None, tol, seed,
                       details={"configs": done})


# -- 4: symmetry relations ------------------------------------------------------------------

def check_symmetry(seed=0, tol=None, **_):
    from .propagators import SYMMETRY_TABLE, pullback_symmetry_check
    tol = tol or TOLERANCES["symmetryRelations"]
    rng = random.Random(seed)
    per, worst = {}, 0.0
    for kind, inv in sorted(SYMMETRY_TABLE):
        r = 0.0
        for _ in range(tol["points"]):
            pts = (complex(rng.uniform(0.1, 2), rng.uniform(0.1, 2)),
                   complex(rng.uniform(0.1, 2), rng.uniform(0.1, 2)))
            r = max(r, pullback_symmetry_check(kind, inv, pts, "quadrant"))
        per[f"{kind}/{inv}"] = r
        worst = max(worst, r)
    return CheckResult("symmetryRelations", _status(worst < tol["abs"]), worst, None, tol, seed,
                       details={"relations": per})


# -- 5: boundary tables ---------------------------------------------------------------------

COLORS = ((1, 1), (1, -1), (-1, 1), (-1, -1))
# alpha: d phi + c * d eta_t; half-plane coefficient, quadrant uses e1 * e2
ALPHA_HALF_PLANE = {(1, 1): 0, (1, -1): -1, (-1, 1): -1, (-1, -1): 0}
VANISHING_STRATA = {
    "delta": [(1, 1), (1, -1), (-1, 1)],
    "epsilon": [(1, -1), (-1, 1), (-1, -1)],
    "eta": [(1, -1), (-1, -1)],
    "theta": [(1, 1), (-1, 1)],
    "zeta": [(-1, 1), (-1, -1)],
    "xi": [(1, 1), (1, -1)],
}


def boundary_cases():
    """(label, stratum, color, model, expected restriction) for every tabulated entry."""
    from .jet import Jet
    from .propagators import OneForm, eval_kontsevich
    dphi, deta = OneForm({"phi": 1 / TWO_PI}), OneForm({"t": 1 / TWO_PI})
    out = []
    for c in COLORS:
        out.append(("alpha/half_plane", "alpha", c, "half_plane",
                    dphi + deta.scale(ALPHA_HALF_PLANE[c])))
        out.append(("alpha/quadrant", "alpha", c, "quadrant", dphi + deta.scale(c[0] * c[1])))
        u = Jet.point(0.4 + 0.8j, "u")
        out.append(("beta", "beta", c, "half_plane", eval_kontsevich(1j, u, c[0])))
        out.append(("gamma", "gamma", c, "half_plane", eval_kontsevich(1j, u, c[1])))
    for name, cs in VANISHING_STRATA.items():
        for c in cs:
            out.append((name, name, c, "half_plane", OneForm()))
    return out


def check_boundary(tol=None, **_):
    from .confspace import boundary_approach, named
    from .propagators import eval_four_color
    tol = tol or TOLERANCES["boundaryTables"]
    rows, ok, worst = [], True, 0.0
    for label, stratum, color, model, want in boundary_cases():
        errs = []
        for eps in EPS_LADDER:
            pts, coords = boundary_approach(named(stratum), eps, model=model)
            errs.append(eval_four_color(model, pts, *color).distance(want, coords))
        good = errs[-1] < tol["abs"] and _linear(errs, tol["decadeRatio"], tol["roundoff"])
        ok &= good
        worst = max(worst, errs[-1])
        rows.append({"stratum": label, "color": list(color), "errors": errs, "pass": good})
    return CheckResult("boundaryTables", _status(ok), worst, None, tol, None,
                       details={"cases": rows})


# -- 6, 7: exact algebra ----------------------------------------------------------------------

def sl2_p_invariants(max_degree):
    """Powers of r^2 = h^2 + (e + f)^2 in adapted sl2 coordinates: a basis of S(p)^k."""
    from .uea import PolyElement
    r2 = PolyElement.monomial(3, (0, 0)) + PolyElement.monomial(3, (1, 1))
    return [r2 ** d for d in range(max_degree // 2 + 1)]


def sl2_casimir_powers(max_degree):
    """Powers of the symmetric Casimir 2ef + h^2/2 of sl2."""
    from .uea import PolyElement
    c = PolyElement.monomial(3, (0, 2), 2) + PolyElement.monomial(3, (1, 1), Fraction(1, 2))
    return [c ** d for d in range(max_degree // 2 + 1)]


def check_rouviere(order=None, tol=None, **_):
    from .liealg import delta_character, load_pair
    from .uea import rouviere_product
    tol = tol or TOLERANCES["rouviereCommutativity"]
    degree = order or tol["degree"]
    pair = load_pair("sl2")
    chi = delta_character(pair)
    inv = sl2_p_invariants(degree)
    bad = [(i, j) for i, f in enumerate(inv) for j, g in enumerate(inv) if i < j
           and rouviere_product(f, g, pair, chi) != rouviere_product(g, f, pair, chi)]
    return CheckResult("rouviereCommutativity", _status(not bad), len(bad), 0.0, tol, None,
                       details={"degree": degree, "invariants": len(inv),
                                "failures": [list(b) for b in bad]})


def check_duflo(order=None, tol=None, **_):
    from .liealg import load_algebra
    from .uea import build_duflo_operator, pbw_symmetrize
    tol = tol or TOLERANCES["dufloMultiplicativity"]
    degree = order or tol["degree"]
    alg = load_algebra("sl2")[0]
    cs = sl2_casimir_powers(degree)
    d = build_duflo_operator(alg, "sqrt_q", 2 * degree)
    bad = []
    for i, f in enumerate(cs):
        for j, g in enumerate(cs):
            if i <= j and pbw_symmetrize(d(f * g), alg) != \
                    pbw_symmetrize(d(f), alg) * pbw_symmetrize(d(g), alg):
                bad.append([i, j])
    return CheckResult("dufloMultiplicativity", _status(not bad), len(bad), 0.0, tol, None,
                       details={"degree": degree, "failures": bad})


# -- 8: BCH -----------------------------------------------------------------------------------

def _sl2_matrices():
    import numpy as np
    e = np.array([[0.0, 1.0], [0.0, 0.0]])
    h = np.array([[1.0, 0.0], [0.0, -1.0]])
    f = np.array([[0.0, 0.0], [1.0, 0.0]])
    return e, h, f


def check_bch(order=None, seed=0, tol=None, **_):
    """BCH at the stated order; BCH_p to the tolerance (order raised until it is met)."""
    import numpy as np
    from scipy import linalg as sla
    from .bch import bch_p, bch_series, pk_decompose
    tol = tol or TOLERANCES["bchSuite"]
    order = order or tol["order"]
    e, h, f = _sl2_matrices()
    rng = np.random.default_rng(seed)
    bch = bch_series(order)
    err_bch = 0.0
    for _ in range(20):
        a, b = rng.normal(size=3), rng.normal(size=3)
        x = sum(c * m for c, m in zip(a / np.linalg.norm(a) * tol["norm"], (e, h, f)))
        y = sum(c * m for c, m in zip(b / np.linalg.norm(b) * tol["norm"], (e, h, f)))
        got = bch.evaluate(x, y)
        err_bch = max(err_bch, float(np.max(np.abs(got - sla.logm(sla.expm(x) @ sla.expm(y))))))
    # p = span(h, e + f) for the sl2 pair
    errs_p, p_order = {}, order
    for p_order in (order, order + 1, order + 2):
        z = bch_p(order=p_order)
        worst = 0.0
        for _ in range(20):
            a, b = rng.normal(size=2), rng.normal(size=2)
            a, b = a / np.linalg.norm(a) * tol["norm"], b / np.linalg.norm(b) * tol["norm"]
            x, y = a[0] * h + a[1] * (e + f), b[0] * h + b[1] * (e + f)
            want = 0.5 * sla.logm(sla.expm(x) @ sla.expm(2 * y) @ sla.expm(x))
            worst = max(worst, float(np.max(np.abs(z.evaluate(x, y) - want))))
        errs_p[p_order] = worst
        if worst < tol["abs"]:
            break
    z = bch_p(order=p_order)
    odd_only = all(length % 2 == 1 for length in z.lengths())
    dp_zero = {w: c for w, c in z.associative().items() if 1 not in w} == {(0,): 1}
    _, k2 = pk_decompose(order=2)
    k_half = k2.coeffs == {(0, 1): Fraction(1, 2)}
    ok = err_bch < tol["abs"] and errs_p[p_order] < tol["abs"] and odd_only and dp_zero and k_half
    return CheckResult("bchSuite", _status(ok), max(err_bch, errs_p[p_order]), None, tol, seed,
                       details={"bchError": err_bch, "bchPErrorByOrder":
                                {str(k): v for k, v in errs_p.items()},
                                "bchPOrder": p_order, "oddWordsOnly": odd_only,
                                "xOnlyPartIsX": dp_zero, "kOrder2IsHalfBracket": k_half})


# -- 9: reduction -------------------------------------------------------------------------------

def check_reduction(order=None, tol=None, **_):
    from .liealg import load_pair
    from .reduction import (bimodule_differential_order1, iwasawa_brane, polarization_brane,
                            reduction_h0, root_decomposition)
    tol = tol or TOLERANCES["reductionSpaces"]
    degree = order or tol["degree"]
    pair = load_pair("sl2")
    cartan = reduction_h0(pair, degree).dims
    want_cartan = tuple(1 if d % 2 == 0 else 0 for d in range(degree + 1))
    pol = reduction_h0(polarization_brane(pair.algebra, [1, 0, 0], [[0, 1, 0], [0, 0, 1]]),
                       min(degree, 3)).dims
    want_pol = (1,) + (0,) * min(degree, 3)
    decomp = root_decomposition(pair, [0, 1, 0])
    iw = reduction_h0(iwasawa_brane(decomp), min(degree, 3)).dims
    want_iw = bimodule_differential_order1(decomp, min(degree, 3)).dims
    ok = cartan == want_cartan and pol == want_pol and iw == want_iw and decomp.check()
    return CheckResult("reductionSpaces", _status(ok), {"cartan": list(cartan),
                       "polarization": list(pol), "iwasawa": list(iw)}, 0.0, tol, None,
                       details={"expectedCartan": list(want_cartan),
                                "expectedPolarization": list(want_pol),
                                "expectedIwasawa": list(want_iw)})


# -- 10: aerial 1-wheel balance -------------------------------------------------------------------

def check_one_wheel_balance(samples=None, seed=0, cache=None, tol=None, **_):
    from .weights import one_wheel
    tol = tol or TOLERANCES["aerialOneWheelBalance"]
    samples = samples or tol["samples"]
    wa = _cached(cache, "W1A", "quadrant_A", samples, seed, lambda: one_wheel("A", samples, seed))
    wb = _cached(cache, "W1B", "quadrant_B", samples, seed + 1,
                 lambda: one_wheel("B", samples, seed + 1))
    sign = min((1, -1), key=lambda s: abs(wa.value + wb.value + s / 4))
    residual = abs(wa.value + wb.value + sign / 4)
    combined = math.hypot(wa.std_error, wb.std_error)
    balanced = residual < tol["sigmas"] * combined
    distinct = abs(wa.value - wb.value) > tol["sigmas"] * combined
    return CheckResult("aerialOneWheelBalance", _status(balanced and distinct), residual, combined,
                       tol, seed, details={"W1A": wa.value, "W1B": wb.value, "sign": sign,
                                           "balanced": balanced, "distinct": distinct})


# -- 11: symbol identity -------------------------------------------------------------------------

def check_symbol_identity(samples=None, seed=0, cache=None, tol=None, **_):
    from .liealg import load_pair
    from .weights import check_dr_symbol_identity, wheel_weight
    tol = tol or TOLERANCES["symbolIdentity"]
    samples = samples or tol["samples"]
    pair = load_pair("sl2")
    wa = _cached(cache, "wheel2A", "quadrant_A", samples, seed,
                 lambda: wheel_weight("A", 2, samples, seed))
    wb = _cached(cache, "wheel2B", "quadrant_B", samples, seed + 1,
                 lambda: wheel_weight("B", 2, samples, seed + 1))
    rows, ok = [], True
    for t in (0.1, 0.3):
        # x = t h in original (e, h, f) coordinates
        res, budget = check_dr_symbol_identity(pair, {"W2A": wa, "W2B": wb}, [[0, t, 0]])
        ok &= res < budget
        rows.append({"t": t, "residual": res, "budget": budget})
    trivial = abs(wb.value) < tol["flagSigmas"] * wb.std_error
    return CheckResult("symbolIdentity", _status(ok), max(r["residual"] for r in rows),
                       math.hypot(wa.std_error, wb.std_error), tol, seed,
                       details={"W2A": wa.value, "W2B": wb.value, "cases": rows,
                                "jBTrivialFlag": trivial})


# -- 12: eight-colored geometry ------------------------------------------------------------------

def check_eight_color(seed=0, tol=None, **_):
    from .jet import Jet
    from .propagators import OneForm, eval_eight_color, geodesic_through, rho_hat, rho_tilde
    tol = tol or TOLERANCES["eightColorGeometry"]
    rng = random.Random(seed)
    conds = []
    for _ in range(100):
        z1 = complex(rng.uniform(0.1, 3), rng.uniform(-1.4, 1.4))
        z2 = complex(rng.uniform(0.1, 3), rng.uniform(-1.4, 1.4))
        if abs(z1.real - z2.real) > 1e-6:
            conds.append(geodesic_through(z1, z2).condition)
    # rho-hat on the three finite walls at eps, Richardson-extrapolated from eps and 10 eps
    eps = tol["eps"]

    def walls(e):
        pts = (Jet.coord(1.3, "x") + 1j * (-math.pi / 2 + e), Jet.coord(0.4, "y") * 1j + e,
               Jet.coord(1.3, "x") + 1j * (math.pi / 2 - e))
        return [rho_hat(z).norm() for z in pts]
    raw, coarse = walls(eps), walls(10 * eps)
    limits = [abs((10 * a - b) / 9) for a, b in zip(raw, coarse)]
    # theta_111 collapse: d phi + rho-tilde
    z0, phi0 = 0.7 + 0.3j, 1.1
    want = OneForm({"phi": 1 / TWO_PI}) + rho_tilde(Jet.point(z0, "z"))
    errs = []
    for e in EPS_LADDER:
        z = Jet.point(z0, "z")
        u = Jet.coord(phi0, "phi").apply(lambda a: cmath.exp(1j * a),
                                         lambda a: 1j * cmath.exp(1j * a))
        errs.append(eval_eight_color(1, 1, 1, z, z + e * u).distance(want))
    collapse_ok = errs[-1] < tol["collapse"] and _linear(errs, tol["decadeRatio"], 1e-9)
    # rho-tilde against finite differences of phi = atan(tanh x tan y) / 2 pi
    h, fd = 1e-6, 0.0
    def phi(x, y):
        return math.atan(math.tanh(x) * math.tan(y)) / TWO_PI
    for _ in range(50):
        x, y = rng.uniform(0.1, 3), rng.uniform(-1.3, 1.3)
        f = rho_tilde(Jet.point(complex(x, y), "z"))
        fd = max(fd, abs(f["z.x"] - (phi(x + h, y) - phi(x - h, y)) / (2 * h)),
                 abs(f["z.y"] - (phi(x, y + h) - phi(x, y - h)) / (2 * h)))
    ok = max(limits) < tol["abs"] and collapse_ok and fd < tol["abs"]
    return CheckResult("eightColorGeometry", _status(ok), max(max(limits), fd), None, tol, seed,
                       details={"geodesicCondMax": max(conds), "geodesicCondMedian":
                                sorted(conds)[len(conds) // 2], "rhoHatWallLimits": limits,
                                "rhoHatWallRaw": raw, "theta111Errors": errs,
                                "rhoTildeFdResidual": fd})


CHECKS = {
    "loopWeight14": check_loop_weight,
    "vanishingLemma": check_vanishing,
    "squareMapPullback": check_square_map,
    "symmetryRelations": check_symmetry,
    "boundaryTables": check_boundary,
    "rouviereCommutativity": check_rouviere,
    "dufloMultiplicativity": check_duflo,
    "bchSuite": check_bch,
    "reductionSpaces": check_reduction,
    "aerialOneWheelBalance": check_one_wheel_balance,
    "symbolIdentity": check_symbol_identity,
    "eightColorGeometry": check_eight_color,
}


def run_check(name, samples=None, seed=0, order=None, cache=None, tolerance=None):
    """Run one named check; exceptions become status "error"."""
    if name not in CHECKS:
        raise InputError(f"unknown check {name!r}; known: {', '.join(CHECKS)}")
    tol = dict(TOLERANCES[name])
    tol.update(tolerance or {})
    start = time.perf_counter()
    try:
        res = CHECKS[name](samples=samples, seed=seed, order=order, cache=cache, tol=tol)
    except Exception as exc:  # recorded in the report, not raised
        res = CheckResult(name, "error", tolerance=tol, seed=seed,
                          details={"error": f"{type(exc).__name__}: {exc}"})
    res.runtime_ms = (time.perf_counter() - start) * 1000
    return res
