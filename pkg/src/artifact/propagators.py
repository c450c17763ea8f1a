"""Colored propagator 1-forms evaluated as covectors in chart coordinates.

Every form is a signed sum of d arg(.) or d arctan(.) terms of jets, so the
components are exact derivatives.  Points may be given as plain complex numbers
(coordinates "z1.x", "z1.y", "z2.x", ...) or as Jets carrying their own chart.

Conventions.  Half-plane with mark x: eta = arg(z - x)/2pi.  Quadrant:
eta_q = arg(w)/2pi, so eta = 2 eta_q under w = sqrt(z - x).  The four-colored
form in the quadrant is
    (1/2pi)[dA - e2 dB - e1 dC + e1 e2 dD],
    A = arg(w1 - w2), B = arg(conj(w1) - w2), C = arg(conj(w1) + w2), D = arg(w1 + w2);
the half-plane-with-mark forms are its pullbacks under w = sqrt(z - x).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, InputError
from .jet import Jet, cos, cosh, d_arg, d_atan_ratio, sin, sinh, tan, tanh, arg_value

TWO_PI = 2 * math.pi
GUARD = 1e-12
HALF_PI = math.pi / 2


class OneForm(dict):
    """Covector: coordinate name -> component."""

    def __add__(self, other):
        out = OneForm(self)
        for k, v in other.items():
            out[k] = out.get(k, 0.0) + v
        return out

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def __neg__(self):
        return self.scale(-1.0)

    def scale(self, s):
        return OneForm({k: s * v for k, v in self.items()})

    def restrict(self, coords):
        return OneForm({k: self.get(k, 0.0) for k in coords})

    def norm(self, coords=None):
        keys = self.keys() if coords is None else coords
        return max([abs(self.get(k, 0.0)) for k in keys] + [0.0])

    def distance(self, other, coords=None):
        keys = set(self) | set(other) if coords is None else coords
        return max([abs(self.get(k, 0.0) - other.get(k, 0.0)) for k in keys] + [0.0])


def _sum(terms):
    """Signed sum of (sign, covector dict) pairs, scaled by 1/2pi."""
    out = OneForm()
    for s, cov in terms:
        for k, v in cov.items():
            out[k] = out.get(k, 0.0) + s * v
    return out.scale(1 / TWO_PI)


def as_jets(*points):
    out = []
    for i, p in enumerate(points, start=1):
        out.append(p if isinstance(p, Jet) else Jet.point(p, f"z{i}"))
    return out


def _guard(a, b):
    if abs(a.val - b.val) < GUARD:
        raise DegenerateError("coincident points")


# -- Kontsevich ------------------------------------------------------------------

def eval_kontsevich(z1, z2, sign=+1):
    """omega^+ = (1/2pi) d[arg(z1 - z2) - arg(conj z1 - z2)]; omega^- swaps the arguments."""
    a, b = as_jets(z1, z2)
    _guard(a, b)
    if sign not in (1, -1):
        raise InputError("sign must be +1 or -1")
    return _sum([(1, d_arg(a - b)), (-sign, d_arg(a.conj() - b))])


def kontsevich_eta(z1, z2):
    """The angle function arg(z1 - conj z2)/2pi."""
    return arg_value(complex(z1) - complex(z2).conjugate()) / TWO_PI


# -- four colors -------------------------------------------------------------------

def _quadrant_four(w1, w2, e1, e2):
    _guard(w1, w2)
    return _sum([(1, d_arg(w1 - w2)), (-e2, d_arg(w1.conj() - w2)),
                 (-e1, d_arg(w1.conj() + w2)), (e1 * e2, d_arg(w1 + w2))])


def eval_four_color(model, pts, e1, e2, mark=0.0):
    """Four-colored propagator omega^{e1,e2} at two aerial points."""
    if e1 not in (1, -1) or e2 not in (1, -1):
        raise InputError("colors must be +1 or -1")
    z1, z2 = as_jets(*pts)
    if model == "quadrant":
        for w in (z1, z2):
            if not (w.val.real > 0 and w.val.imag > 0):
                raise InputError("quadrant points must lie in the open first quadrant")
        return _quadrant_four(z1, z2, e1, e2)
    if model == "half_plane":
        for z in (z1, z2):
            if z.val.imag <= 0:
                raise InputError("half-plane points must lie in the upper half-plane")
        return _quadrant_four((z1 - mark).sqrt(), (z2 - mark).sqrt(), e1, e2)
    raise InputError(f"unknown model {model!r}")


def eval_eta(model, point, mark=0.0):
    """(eta, d eta): arg(z - mark)/2pi in the half-plane, arg(w)/2pi in the quadrant."""
    (z,) = as_jets(point)
    base = z - mark if model == "half_plane" else z
    if model not in ("half_plane", "quadrant"):
        raise InputError(f"unknown model {model!r}")
    if abs(base.val) < GUARD:
        raise DegenerateError("point at the mark")
    return arg_value(base.val) / TWO_PI, _sum([(1, d_arg(base))])


# -- symmetry relations --------------------------------------------------------------

def _sigma_jet(z, model):
    return -z.conj() if model == "half_plane" else 1j * z.conj()


def _tau_jet(z, model, mark=0.0):
    if model == "half_plane":
        return mark + 1 / (z - mark).conj()
    return 1 / z.conj()


# (kind, involution) -> (sign, image kind, eta correction on argument 1 or 2)
# the eta correction is 2 d eta in the half-plane model and 4 d eta_q in the quadrant.
SYMMETRY_TABLE = {
    ((1, 1), "sigma"): (-1, (1, 1), None),
    ((1, -1), "sigma"): (-1, (-1, 1), None),
    ((-1, 1), "sigma"): (-1, (1, -1), None),
    ((-1, -1), "sigma"): (-1, (-1, -1), None),
    ((1, 1), "tau"): (-1, (1, 1), 1),
    ((1, -1), "tau"): (-1, (1, -1), None),
    ((-1, 1), "tau"): (-1, (-1, 1), None),
    ((-1, -1), "tau"): (-1, (-1, -1), 2),
}


def pullback_symmetry_check(kind, involution, pts, model="quadrant", mark=0.0):
    """Max-abs residual of the tabulated relation for involution^* of a propagator.

    ``kind`` is (e1, e2) for a four-colored form, or "kontsevich+"/"kontsevich-"
    (half-plane, sigma only: sigma^* omega^pm = -omega^pm).
    """
    z1, z2 = as_jets(*pts)
    if involution not in ("sigma", "tau"):
        raise InputError("involution must be sigma or tau")
    if isinstance(kind, str):
        if involution != "sigma" or kind not in ("kontsevich+", "kontsevich-"):
            raise InputError(f"no tabulated relation for {kind} under {involution}")
        s = 1 if kind == "kontsevich+" else -1
        lhs = eval_kontsevich(_sigma_jet(z1, "half_plane"), _sigma_jet(z2, "half_plane"), s)
        rhs = -eval_kontsevich(z1, z2, s)
        return lhs.distance(rhs)
    key = (tuple(kind), involution)
    if key not in SYMMETRY_TABLE:
        raise InputError(f"unknown propagator kind {kind!r}")
    sign, image, corr = SYMMETRY_TABLE[key]
    m = (lambda z: _sigma_jet(z, model)) if involution == "sigma" \
        else (lambda z: _tau_jet(z, model, mark))
    lhs = eval_four_color(model, (m(z1), m(z2)), *kind, mark=mark)
    rhs = eval_four_color(model, (z1, z2), *image, mark=mark).scale(sign)
    if corr is not None:
        factor = 2.0 if model == "half_plane" else 4.0
        rhs = rhs + eval_eta(model, (z1, z2)[corr - 1], mark)[1].scale(factor)
    return lhs.distance(rhs)


# -- half-strip: eight colors ---------------------------------------------------------

def _r1(z):
    return z.conj() - 1j * math.pi


def _r2(z):
    return -z.conj()


def _r3(z):
    return z.conj() + 1j * math.pi


# images used for the j1 != j3 family: (word of wall indices, map)
STRIP_IMAGES = (
    ((1,), _r1),
    ((2,), _r2),
    ((3,), _r3),
    ((2, 1), lambda z: _r2(_r1(z))),
    ((2, 3), lambda z: _r2(_r3(z))),
    ((1, 3, 2), lambda z: _r1(_r3(_r2(z)))),
)


def _reflected_form(z1, z2, signs):
    """(1/2pi)[d arg(z1 - z2) + sum_g chi(g) d arg(z1 - g z2)], chi multiplicative."""
    terms = [(1, d_arg(z1 - z2))]
    for word, g in STRIP_IMAGES:
        chi = 1
        for w in word:
            chi *= signs[w - 1]
        terms.append((chi, d_arg(z1 - g(z2))))
    return _sum(terms)


def _mirror(z):
    return z.conj()


def geodesic_angle_form(z1, z2):
    """d of the geodesic angle for the metric (dx^2 + dy^2)/cos^2 y.

    tan(angle + pi/2) = N/D with N = sin y1 cosh(x1 - x2) - sin y2, D = cos y1 sinh(x1 - x2),
    so d angle = d arctan(N/D).  Returned without the 1/2pi normalisation.
    """
    a, b = as_jets(z1, z2)
    _guard(a, b)
    x1, y1, x2, y2 = a.real, a.imag, b.real, b.imag
    num = sin(y1) * cosh(x1 - x2) - sin(y2)
    den = cos(y1) * sinh(x1 - x2)
    return OneForm(d_atan_ratio(num, den))


def geodesic_tan(z1, z2):
    """tan(angle + pi/2) at two strip points."""
    x1, y1, x2, y2 = z1.real, z1.imag, z2.real, z2.imag
    return (math.sin(y1) * math.cosh(x1 - x2) - math.sin(y2)) / (math.cos(y1) * math.sinh(x1 - x2))


def _check_strip(*pts):
    for p in pts:
        v = p.val if isinstance(p, Jet) else complex(p)
        if not (v.real > 0 and abs(v.imag) < HALF_PI):
            raise InputError(f"{v} is not inside the half-strip")


def eval_eight_color(j1, j2, j3, z1, z2):
    """theta_{j1 j2 j3}(z1, z2) on the half-strip.

    j1 != j3: reflected Euclidean angle forms, wall i carrying the sign + for j_i = 1 and
    - for j_i = 2, when j1 = 1; the j1 = 2 forms are -(mirror z -> conj z)^* of the j1 = 1 ones.
    j1 = j3 = 1: (1/2pi)[theta(z1, z2) - theta(sigma z1, z2)] for j2 = 1 and
    (1/2pi)[theta(z1, z2) - theta(z1, sigma z2)] for j2 = 2, with sigma(z) = -conj z.
    j1 = j3 = 2: theta_{2 j2 2}(z1, z2) = theta_{1 j2' 1}(z2, z1) with j2' = 3 - j2.
    """
    if any(j not in (1, 2) for j in (j1, j2, j3)):
        raise InputError("colors are 1 or 2")
    a, b = as_jets(z1, z2)
    _check_strip(a, b)
    _guard(a, b)
    if j1 != j3:
        if j1 == 2:
            return -_reflected_form(_mirror(a), _mirror(b), (1, 1 if j2 == 1 else -1, -1))
        return _reflected_form(a, b, (1, 1 if j2 == 1 else -1, -1))
    if j1 == 2:
        return eval_eight_color(1, 3 - j2, 1, b, a)
    if j2 == 1:
        return (geodesic_angle_form(a, b) - geodesic_angle_form(_r2(a), b)).scale(1 / TWO_PI)
    return (geodesic_angle_form(a, b) - geodesic_angle_form(a, _r2(b))).scale(1 / TWO_PI)


def rho_hat(z):
    """(1/2pi)[d arg(z + i pi/2) - d arg(z - i pi/2) - d arg(Re z + i pi)]."""
    (a,) = as_jets(z)
    return _sum([(1, d_arg(a + 1j * HALF_PI)), (-1, d_arg(a - 1j * HALF_PI)),
                 (-1, d_arg(a.real + 1j * math.pi))])


def rho_tilde(z):
    """(1/2pi) d arctan(tanh x tan y)."""
    (a,) = as_jets(z)
    t = tanh(a.real) * tan(a.imag)
    return OneForm(d_atan_ratio(t, Jet(1.0))).scale(1 / TWO_PI)


@dataclass
class Geodesic:
    vertical: bool
    a: float = None
    b: float = None
    condition: float = None


def geodesic_through(z1, z2):
    """The geodesic sin y = A e^x + B e^-x through two points, or the vertical tag."""
    z1, z2 = complex(z1), complex(z2)
    if abs(z1 - z2) < GUARD:
        raise DegenerateError("coincident points")
    if z1.real == z2.real:
        return Geodesic(True)
    m = np.array([[math.exp(z1.real), math.exp(-z1.real)],
                  [math.exp(z2.real), math.exp(-z2.real)]])
    rhs = np.array([math.sin(z1.imag), math.sin(z2.imag)])
    a, b = np.linalg.solve(m, rhs)
    return Geodesic(False, float(a), float(b), float(np.linalg.cond(m)))
