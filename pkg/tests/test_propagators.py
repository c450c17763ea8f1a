import cmath
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from artifact.confspace import Stratum, boundary_approach, named
from artifact.errors import DegenerateError, InputError
from artifact.jet import Jet
from artifact.propagators import (OneForm, SYMMETRY_TABLE, eval_eight_color, eval_eta,
                                  eval_four_color, eval_kontsevich, geodesic_tan,
                                  geodesic_through, kontsevich_eta, pullback_symmetry_check,
                                  rho_hat, rho_tilde)

TWO_PI = 2 * math.pi
COLORS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
KEYS = ["z1.x", "z1.y", "z2.x", "z2.y"]


def rand_h(rng):
    return complex(rng.uniform(-2, 2), rng.uniform(0.1, 2))


def rand_q(rng):
    return complex(rng.uniform(0.1, 2), rng.uniform(0.1, 2))


def well_separated(z1, z2):
    """Finite differences at step 1e-4 need the points away from every singular locus."""
    return abs(z1 - z2) > 0.5 and min(abs(z1), abs(z2)) > 0.3 and min(
        z1.imag, z2.imag, abs(z1.real), abs(z2.real)) > 0.2


def components(form_fn, z1, z2):
    f = form_fn(z1, z2)
    return [f.get(k, 0.0) for k in KEYS]


def shifted(z1, z2, k, h):
    pts = [z1, z2]
    i, part = divmod(k, 2)
    pts[i] += h if part == 0 else 1j * h
    return pts


def max_curl(form_fn, z1, z2, h=1e-4):
    """Largest |d_a f_b - d_b f_a| by central differences."""
    grads = []
    for a in range(4):
        plus = components(form_fn, *shifted(z1, z2, a, h))
        minus = components(form_fn, *shifted(z1, z2, a, -h))
        grads.append([(p - m) / (2 * h) for p, m in zip(plus, minus)])
    return max(abs(grads[a][b] - grads[b][a]) for a in range(4) for b in range(4))


ROUNDOFF = 1e-9


def converges_linearly(errs):
    """Errors at eps, eps/10, eps/100 shrink at least linearly, or sit at roundoff level.

    A factor of 5 per decade is accepted as linear; the eps^2 charts give 100.
    """
    if max(errs) < ROUNDOFF:
        return True
    return all(e1 / e2 >= 5 for e1, e2 in zip(errs, errs[1:]) if e2 > ROUNDOFF)


# -- Kontsevich -----------------------------------------------------------------------

def test_kontsevich_boundary_limit():
    errs = []
    for eps in (1e-2, 1e-3, 1e-4):
        z1 = Jet.coord(0.4, "s") + 1j * eps
        z2 = Jet.point(-0.3 + 1.1j, "z2")
        f = eval_kontsevich(z1, z2, 1)
        errs.append(f.norm(["s", "z2.x", "z2.y"]))
    assert errs[-1] < 1e-4
    assert converges_linearly(errs)


def test_kontsevich_eta_quarter():
    vals = [kontsevich_eta(1j, 1j * (1 + eps)) for eps in (1e-2, 1e-4, 1e-6)]
    assert abs(vals[-1] - 0.25) < 1e-6


def test_kontsevich_coincident():
    with pytest.raises(DegenerateError):
        eval_kontsevich(1j, 1j)
    with pytest.raises(InputError):
        eval_kontsevich(1j, 2j, 0)


def test_kontsevich_plus_is_quadrant_pullback():
    # arg(w1 - w2) + arg(w1 + w2) = arg(z1 - z2) for w = sqrt(z)
    rng = random.Random(1)
    worst = 0.0
    for _ in range(100):
        z1, z2 = rand_h(rng), rand_h(rng)
        worst = max(worst,
                    eval_kontsevich(z1, z2, 1).distance(eval_four_color("half_plane", (z1, z2), 1, 1)),
                    eval_kontsevich(z1, z2, -1).distance(
                        eval_four_color("half_plane", (z1, z2), -1, -1)))
    assert worst < 1e-10


def test_four_color_pullback_by_finite_differences():
    # half-plane form = quadrant form at sqrt(z) composed with the numerical Jacobian
    rng = random.Random(2)
    h = 1e-6
    for _ in range(20):
        z1, z2 = rand_h(rng), rand_h(rng)
        for c in COLORS:
            half = eval_four_color("half_plane", (z1, z2), *c)
            w1, w2 = cmath.sqrt(z1), cmath.sqrt(z2)
            quad = eval_four_color("quadrant", (w1, w2), *c)
            for name, z in (("z1", z1), ("z2", z2)):
                wname = name
                dw_dx = (cmath.sqrt(z + h) - cmath.sqrt(z - h)) / (2 * h)
                for comp, dz in ((".x", dw_dx), (".y", 1j * dw_dx)):
                    want = quad[wname + ".x"] * dz.real + quad[wname + ".y"] * dz.imag
                    assert abs(half[name + comp] - want) < 1e-7


@pytest.mark.parametrize("sign", [1, -1])
def test_kontsevich_closed(sign):
    rng = random.Random(3)
    for _ in range(100):
        z1, z2 = rand_h(rng), rand_h(rng)
        if abs(z1 - z2) < 0.2:
            continue
        assert max_curl(lambda a, b: eval_kontsevich(a, b, sign), z1, z2) < 1e-6


@pytest.mark.parametrize("color", COLORS)
@pytest.mark.parametrize("model", ["quadrant", "half_plane"])
def test_four_color_closed(color, model):
    rng = random.Random(4)
    for _ in range(100):
        z1, z2 = (rand_q(rng), rand_q(rng)) if model == "quadrant" else (rand_h(rng), rand_h(rng))
        if not well_separated(z1, z2):
            continue
        assert max_curl(lambda a, b: eval_four_color(model, (a, b), *color), z1, z2) < 1e-6


def test_four_color_validation():
    with pytest.raises(InputError):
        eval_four_color("quadrant", (-1 + 1j, 1 + 1j), 1, 1)
    with pytest.raises(InputError):
        eval_four_color("quadrant", (1 + 1j, 2 + 1j), 1, 0)
    with pytest.raises(InputError):
        eval_four_color("disc", (1 + 1j, 2 + 1j), 1, 1)
    with pytest.raises(DegenerateError):
        eval_four_color("quadrant", (1 + 1j, 1 + 1j), 1, 1)


# -- eta -----------------------------------------------------------------------------------

def test_eta_values():
    assert eval_eta("half_plane", 2.0 + 0j)[0] == 0.0
    assert eval_eta("quadrant", 3j)[0] == 0.25
    with pytest.raises(DegenerateError):
        eval_eta("half_plane", 0.5 + 0j, mark=0.5)


def test_eta_closed():
    rng = random.Random(5)
    h = 1e-4
    for _ in range(100):
        z = rand_h(rng)
        fx = lambda w: eval_eta("half_plane", w)[1]
        gx = (fx(z + h)["z1.y"] - fx(z - h)["z1.y"]) / (2 * h)
        gy = (fx(z + 1j * h)["z1.x"] - fx(z - 1j * h)["z1.x"]) / (2 * h)
        assert abs(gx - gy) < 1e-6


def test_half_plane_eta_is_twice_quadrant_eta():
    rng = random.Random(6)
    for _ in range(100):
        z = Jet.point(rand_h(rng), "z")
        half = eval_eta("half_plane", z)
        quad = eval_eta("quadrant", z.sqrt())
        assert abs(half[0] - 2 * quad[0]) < 1e-12
        assert half[1].distance(quad[1].scale(2)) < 1e-10


# -- boundary tables ------------------------------------------------------------------------

def _dphi():
    return OneForm({"phi": 1 / TWO_PI})


def _deta_t():
    return OneForm({"t": 1 / TWO_PI})


ALPHA_HALF = {(1, 1): 0, (1, -1): -1, (-1, 1): -1, (-1, -1): 0}
VANISHING = {
    "delta": [(1, 1), (1, -1), (-1, 1)],
    "epsilon": [(1, -1), (-1, 1), (-1, -1)],
    "eta": [(1, -1), (-1, -1)],
    "theta": [(1, 1), (-1, 1)],
    "zeta": [(-1, 1), (-1, -1)],
    "xi": [(1, 1), (1, -1)],
}


def _limit_errors(name, color, expected, model="half_plane"):
    errs = []
    for eps in (1e-2, 1e-3, 1e-4):
        pts, coords = boundary_approach(named(name), eps, model=model)
        f = eval_four_color(model, pts, *color)
        errs.append(f.distance(expected, coords))
    return errs


@pytest.mark.parametrize("color", COLORS)
def test_alpha_half_plane(color):
    want = _dphi() + _deta_t().scale(ALPHA_HALF[color])
    errs = _limit_errors("alpha", color, want)
    assert errs[-1] < 1e-3 and converges_linearly(errs)


@pytest.mark.parametrize("color", COLORS)
def test_alpha_quadrant(color):
    want = _dphi() + _deta_t().scale(color[0] * color[1])
    errs = _limit_errors("alpha", color, want, model="quadrant")
    assert errs[-1] < 1e-3 and converges_linearly(errs)


def test_plus_minus_alpha_singular_part_removed():
    # subtracting the exact d phi term leaves -d eta
    pts, coords = boundary_approach(named("alpha"), 1e-5)
    rest = eval_four_color("half_plane", pts, 1, -1) - _dphi()
    assert rest.distance(_deta_t().scale(-1), coords) < 1e-4


@pytest.mark.parametrize("name,index", [("beta", 0), ("gamma", 1)])
@pytest.mark.parametrize("color", COLORS)
def test_beta_gamma_restrict_to_kontsevich(name, index, color):
    u = Jet.point(0.4 + 0.8j, "u")
    want = eval_kontsevich(1j, u, color[index])
    errs = _limit_errors(name, color, want)
    assert errs[-1] < 1e-3 and converges_linearly(errs)


@pytest.mark.parametrize("name,color", [(n, c) for n, cs in VANISHING.items() for c in cs])
def test_vanishing_strata(name, color):
    errs = _limit_errors(name, color, OneForm())
    assert errs[-1] < 1e-3 and converges_linearly(errs)


# -- symmetries --------------------------------------------------------------------------------

@pytest.mark.parametrize("kind,inv", sorted(SYMMETRY_TABLE))
@pytest.mark.parametrize("model", ["quadrant", "half_plane"])
def test_symmetry_table(kind, inv, model):
    rng = random.Random(8)
    for _ in range(30):
        pts = (rand_q(rng), rand_q(rng)) if model == "quadrant" else (rand_h(rng), rand_h(rng))
        assert pullback_symmetry_check(kind, inv, pts, model) < 1e-10


def test_sigma_plus_minus_example():
    rng = random.Random(9)
    for _ in range(50):
        z1, z2 = rand_q(rng), rand_q(rng)
        lhs = eval_four_color("quadrant", (1j * z1.conjugate(), 1j * z2.conjugate()), 1, -1)
        # sigma is applied to the points; compare in the original coordinates
        assert pullback_symmetry_check((1, -1), "sigma", (z1, z2)) < 1e-10
        assert lhs is not None


@pytest.mark.parametrize("kind", ["kontsevich+", "kontsevich-"])
def test_sigma_kontsevich(kind):
    rng = random.Random(10)
    for _ in range(50):
        assert pullback_symmetry_check(kind, "sigma", (rand_h(rng), rand_h(rng))) < 1e-10
    with pytest.raises(InputError):
        pullback_symmetry_check(kind, "tau", (1j, 2j))


def test_tau_on_fixed_circle():
    for t1, t2 in ((0.3, 1.2), (0.5, 1.0), (0.2, 1.4)):
        pts = (cmath.exp(1j * t1), cmath.exp(1j * t2))
        for c in COLORS:
            assert pullback_symmetry_check(c, "tau", pts, "quadrant") < 1e-10


# -- eight colors --------------------------------------------------------------------------------

EIGHT = {
    (1, 1, 2): (1, "hat"), (1, 2, 2): (-1, "hat"), (2, 1, 1): (-1, "hat"), (2, 2, 1): (1, "hat"),
    (1, 1, 1): (1, "tilde"), (1, 2, 1): (-1, "tilde"), (2, 1, 2): (-1, "tilde"),
    (2, 2, 2): (1, "tilde"),
}


def _collapse(eps, z0=0.7 + 0.3j, phi0=1.1):
    z = Jet.point(z0, "z")
    u = Jet.coord(phi0, "phi").apply(lambda a: cmath.exp(1j * a), lambda a: 1j * cmath.exp(1j * a))
    return z, z + eps * u


@pytest.mark.parametrize("js", sorted(EIGHT))
def test_eight_color_collapse(js):
    sign, kind = EIGHT[js]
    reg = (rho_hat if kind == "hat" else rho_tilde)(Jet.point(0.7 + 0.3j, "z"))
    want = _dphi() + reg.scale(sign)
    errs = []
    for eps in (1e-2, 1e-3, 1e-4):
        errs.append(eval_eight_color(*js, *_collapse(eps)).distance(want))
    assert errs[-1] < 1e-3 and converges_linearly(errs)


def test_eight_color_validation():
    with pytest.raises(InputError):
        eval_eight_color(1, 3, 1, 1 + 0.1j, 2 + 0.1j)
    with pytest.raises(InputError):
        eval_eight_color(1, 1, 1, 1 + 2j, 2 + 0.1j)
    with pytest.raises(DegenerateError):
        eval_eight_color(1, 1, 2, 1 + 0.1j, 1 + 0.1j)


@pytest.mark.parametrize("js", sorted(EIGHT))
def test_eight_color_closed(js):
    rng = random.Random(11)
    for _ in range(100):
        z1 = complex(rng.uniform(0.2, 2), rng.uniform(-1.3, 1.3))
        z2 = complex(rng.uniform(0.2, 2), rng.uniform(-1.3, 1.3))
        if abs(z1 - z2) < 0.2:
            continue
        assert max_curl(lambda a, b: eval_eight_color(*js, a, b), z1, z2) < 1e-6


def _rho_hat_wall(eps):
    out = []
    for z in (Jet.coord(1.3, "x") + 1j * (-math.pi / 2 + eps),
              Jet.coord(0.4, "y") * 1j + eps,
              Jet.coord(1.3, "x") + 1j * (math.pi / 2 - eps)):
        out.append(rho_hat(z).norm())
    return out


def test_rho_hat_vanishes_on_walls():
    # the approach is linear in eps; the extrapolated limit is far below the raw value
    a, b = _rho_hat_wall(1e-3), _rho_hat_wall(1e-4)
    for e1, e2 in zip(a, b):
        assert abs((10 * e2 - e1) / 9) < 1e-6
        assert e2 < e1 or e1 < 1e-12
        assert e2 < 2e-5


def test_rho_at_infinity():
    far = Jet.point(30 + 0.4j, "z")
    assert rho_hat(far).norm() < 1e-3
    assert rho_tilde(far).distance(OneForm({"z.y": 1 / TWO_PI})) < 1e-10


def test_rho_tilde_finite_differences():
    rng = random.Random(12)
    h = 1e-6

    def phi(x, y):
        return math.atan(math.tanh(x) * math.tan(y)) / TWO_PI
    for _ in range(50):
        x, y = rng.uniform(0.1, 3), rng.uniform(-1.3, 1.3)
        f = rho_tilde(Jet.point(complex(x, y), "z"))
        assert abs(f["z.x"] - (phi(x + h, y) - phi(x - h, y)) / (2 * h)) < 1e-6
        assert abs(f["z.y"] - (phi(x, y + h) - phi(x, y - h)) / (2 * h)) < 1e-6


# -- geodesics --------------------------------------------------------------------------------

def test_geodesic_vertical():
    assert geodesic_through(1 + 0.2j, 1 - 0.5j).vertical


def test_geodesic_symmetric_points():
    g = geodesic_through(0.7 + 0.3j, -0.7 + 0.3j)
    assert abs(g.a - g.b) < 1e-12


def test_geodesic_angle_matches_linear_solve():
    rng = random.Random(13)
    for _ in range(50):
        z1 = complex(rng.uniform(0.1, 3), rng.uniform(-1.4, 1.4))
        z2 = complex(rng.uniform(0.1, 3), rng.uniform(-1.4, 1.4))
        if abs(z1.real - z2.real) < 1e-3:
            continue
        g = geodesic_through(z1, z2)
        slope = (g.a * math.exp(z1.real) - g.b * math.exp(-z1.real)) / math.cos(z1.imag)
        assert abs(geodesic_tan(z1, z2) - slope) < 1e-10 * max(1.0, abs(slope)) * g.condition


def test_geodesic_passes_through_both_points():
    g = geodesic_through(0.3 + 0.5j, 1.7 - 0.2j)
    for z in (0.3 + 0.5j, 1.7 - 0.2j):
        assert abs(math.sin(z.imag) - g.a * math.exp(z.real) - g.b * math.exp(-z.real)) < 1e-12


pos = st.floats(min_value=0.1, max_value=2.0, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(pos, pos, pos, pos)
def test_sigma_relation_property(a, b, c, d):
    z1, z2 = complex(a, b), complex(c, d)
    if abs(z1 - z2) < 1e-3:
        return
    for kind in COLORS:
        assert pullback_symmetry_check(kind, "sigma", (z1, z2), "quadrant") < 1e-9
