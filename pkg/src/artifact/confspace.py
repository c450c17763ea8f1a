"""Point models for configuration spaces and charts near their boundary strata.

Half-plane model: n aerial points in the upper half-plane and m ordered
boundary points.  Quadrant model: aerial points in the open first quadrant,
points on iR^+ (listed by decreasing modulus) and points on R^+ (increasing).
Half-strip model: points of {x >= 0, |y| <= pi/2} with boundary markers.
"""

import cmath
import math
from dataclasses import dataclass, field

from .errors import DegenerateError, InputError
from .jet import Jet, csqrt

TOL = 1e-12
HALF_PI = math.pi / 2


def _distinct(points, what):
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if abs(points[i] - points[j]) < TOL:
                raise InputError(f"coincident {what} points {i} and {j}")


def _strictly(seq, increasing, what):
    for a, b in zip(seq, seq[1:]):
        if (b - a if increasing else a - b) <= 0:
            order = "increasing" if increasing else "decreasing"
            raise InputError(f"{what} must be strictly {order}")


@dataclass
class UHPConfig:
    aerial: list
    boundary: list = field(default_factory=list)

    def __post_init__(self):
        self.aerial = [complex(z) for z in self.aerial]
        self.boundary = [float(x) for x in self.boundary]
        if any(z.imag <= 0 for z in self.aerial):
            raise InputError("aerial points must lie in the open upper half-plane")
        _distinct(self.aerial, "aerial")
        _strictly(self.boundary, True, "boundary")

    def max_deviation(self, other):
        a = [abs(u - v) for u, v in zip(self.aerial, other.aerial)]
        b = [abs(u - v) for u, v in zip(self.boundary, other.boundary)]
        return max(a + b + [0.0])


@dataclass
class QuadrantConfig:
    aerial: list
    imag_axis: list = field(default_factory=list)
    real_axis: list = field(default_factory=list)
    pivot_value: float = None

    def __post_init__(self):
        self.aerial = [complex(w) for w in self.aerial]
        self.imag_axis = [float(s) for s in self.imag_axis]
        self.real_axis = [float(r) for r in self.real_axis]
        if any(w.real <= 0 or w.imag <= 0 for w in self.aerial):
            raise InputError("aerial points must lie in the open first quadrant")
        if any(s <= 0 for s in self.imag_axis + self.real_axis):
            raise InputError("axis points must be positive")
        _distinct(self.aerial, "aerial")
        _strictly(self.imag_axis, False, "imaginary-axis points")
        _strictly(self.real_axis, True, "real-axis points")

    def points(self):
        return self.aerial + [1j * s for s in self.imag_axis] + list(self.real_axis)

    def max_deviation(self, other):
        pairs = list(zip(self.aerial, other.aerial)) + list(zip(self.imag_axis, other.imag_axis)) \
            + list(zip(self.real_axis, other.real_axis))
        return max([abs(u - v) for u, v in pairs] + [0.0])


STRIP_WALLS = ("interior", "bottom", "left", "top")  # walls 1, 2, 3 of the half-strip


@dataclass
class StripConfig:
    points: list
    markers: list = None

    def __post_init__(self):
        self.points = [complex(z) for z in self.points]
        if self.markers is None:
            self.markers = ["interior"] * len(self.points)
        if len(self.markers) != len(self.points):
            raise InputError("one marker per point")
        for z, m in zip(self.points, self.markers):
            if m not in STRIP_WALLS:
                raise InputError(f"unknown marker {m!r}")
            if m == "interior" and not (z.real > 0 and abs(z.imag) < HALF_PI):
                raise InputError(f"{z} is not inside the half-strip")
            if m == "bottom" and not (abs(z.imag + HALF_PI) < TOL and z.real >= 0):
                raise InputError(f"{z} is not on the bottom wall")
            if m == "left" and not (abs(z.real) < TOL and abs(z.imag) <= HALF_PI):
                raise InputError(f"{z} is not on the left wall")
            if m == "top" and not (abs(z.imag - HALF_PI) < TOL and z.real >= 0):
                raise InputError(f"{z} is not on the top wall")
        _distinct(self.points, "strip")


# -- square-root diffeomorphism ----------------------------------------------------

def square_map(cfg, pivot):
    """Send (z, x) to the quadrant via z -> sqrt(z - x_pivot); the pivot goes to 0."""
    if not 0 <= pivot < len(cfg.boundary):
        raise InputError(f"pivot {pivot} out of range")
    xp = cfg.boundary[pivot]
    aerial = [csqrt(z - xp) for z in cfg.aerial]
    imag_axis = [math.sqrt(xp - x) for x in cfg.boundary[:pivot]]
    real_axis = [math.sqrt(x - xp) for x in cfg.boundary[pivot + 1:]]
    return QuadrantConfig(aerial, imag_axis, real_axis, pivot_value=xp)


def inverse_square_map(qcfg, pivot_value=None):
    xp = qcfg.pivot_value if pivot_value is None else pivot_value
    if xp is None:
        raise InputError("pivot value needed to invert the square map")
    aerial = [w * w + xp for w in qcfg.aerial]
    boundary = [xp - s * s for s in qcfg.imag_axis] + [xp] + [xp + r * r for r in qcfg.real_axis]
    return UHPConfig(aerial, boundary)


# -- involutions -----------------------------------------------------------------

def sigma_point(z, model="half_plane"):
    return -z.conjugate() if model == "half_plane" else 1j * z.conjugate()


def tau_point(z, model="half_plane", mark=0.0):
    if model == "half_plane":
        if abs(z - mark) < TOL:
            raise InputError("tau is undefined at the mark")
        return mark + 1 / (z - mark).conjugate()
    if abs(z) < TOL:
        raise InputError("tau is undefined at the origin")
    return 1 / z.conjugate()


def involution_sigma(cfg):
    if isinstance(cfg, UHPConfig):
        return UHPConfig([-z.conjugate() for z in cfg.aerial], [-x for x in reversed(cfg.boundary)])
    if isinstance(cfg, QuadrantConfig):
        # i * conj swaps the axes: r on R^+ goes to i r, i s on iR^+ goes to s
        return QuadrantConfig([1j * w.conjugate() for w in cfg.aerial],
                              list(reversed(cfg.real_axis)), list(reversed(cfg.imag_axis)),
                              cfg.pivot_value)
    raise InputError("unsupported configuration type")


def involution_tau(cfg):
    if isinstance(cfg, UHPConfig):
        if any(abs(z) < TOL for z in cfg.aerial) or any(abs(x) < TOL for x in cfg.boundary):
            raise InputError("tau is undefined at the origin")
        xs = sorted(1 / x for x in cfg.boundary)
        return UHPConfig([1 / z.conjugate() for z in cfg.aerial], xs)
    if isinstance(cfg, QuadrantConfig):
        if any(abs(w) < TOL for w in cfg.aerial):
            raise InputError("tau is undefined at the origin")
        return QuadrantConfig([1 / w.conjugate() for w in cfg.aerial],
                              list(reversed([1 / s for s in cfg.imag_axis])),
                              list(reversed([1 / r for r in cfg.real_axis])), cfg.pivot_value)
    raise InputError("unsupported configuration type")


# -- gauge fixing ------------------------------------------------------------------

def gauge_fix(cfg, designated=None):
    """Normalise by the symmetry group; returns (config, scale, jacobian).

    Half-plane: x_1 -> 0 and x_2 -> 1 (m >= 2), or x_1 -> 0 and |z_1 - x_1| = 1 (m = 1),
    or z_1 -> i (m = 0).  Quadrant: the designated point (default: largest modulus)
    gets modulus 1; ``designated`` may be ("aerial", i), ("imag", i) or ("real", i).
    The jacobian is the scale factor raised to the number of real coordinates moved.
    """
    if isinstance(cfg, UHPConfig):
        n, m = len(cfg.aerial), len(cfg.boundary)
        if 2 * n + m < 2:
            raise InputError("not enough points to fix translations and scalings")
        if m >= 2:
            shift, lam = cfg.boundary[0], 1 / (cfg.boundary[1] - cfg.boundary[0])
        elif m == 1:
            shift = cfg.boundary[0]
            lam = 1 / abs(cfg.aerial[0] - shift)
        else:
            shift = cfg.aerial[0].real
            lam = 1 / cfg.aerial[0].imag
        out = UHPConfig([(z - shift) * lam for z in cfg.aerial],
                        [(x - shift) * lam for x in cfg.boundary])
        return out, lam, lam ** (2 * n + m)
    if isinstance(cfg, QuadrantConfig):
        pts = cfg.points()
        if not pts:
            raise InputError("empty configuration")
        if designated is None:
            ref = max(abs(p) for p in pts)
        else:
            kind, i = designated
            ref = abs({"aerial": cfg.aerial, "imag": cfg.imag_axis, "real": cfg.real_axis}[kind][i])
        if ref < TOL:
            raise DegenerateError("designated point at the origin")
        lam = 1 / ref
        out = QuadrantConfig([w * lam for w in cfg.aerial], [s * lam for s in cfg.imag_axis],
                             [r * lam for r in cfg.real_axis], cfg.pivot_value)
        count = 2 * len(cfg.aerial) + len(cfg.imag_axis) + len(cfg.real_axis)
        return out, lam, lam ** count
    raise InputError("unsupported configuration type")


def scaling_jacobian(lam, n_aerial, n_axis):
    """Change of measure for w -> lam w: lam^2 per aerial point, lam per axis point."""
    return lam ** (2 * n_aerial + n_axis)


# -- boundary approach charts -------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    """A codimension-one stratum named by the collapsing data.

    kind "aerial": the aerial points in ``aerial`` collapse together.
    kind "boundary": aerial points ``aerial`` collapse onto a boundary position ``target``.
    kind "named": one of the strata alpha..xi of C_{2,0,0} (two aerial points, one mark).
    """
    kind: str
    aerial: tuple = ()
    target: complex = 0j
    name: str = ""


NAMED_STRATA = ("alpha", "beta", "gamma", "delta", "epsilon", "eta", "theta", "zeta", "xi")


def named(name):
    if name not in NAMED_STRATA:
        raise InputError(f"unknown stratum {name!r}")
    return Stratum("named", (0, 1), 0j, name)


def boundary_approach(stratum, eps, params=None, model="half_plane"):
    """Points (as jets in the stratum chart coordinates) at distance eps from the stratum.

    Returns (points, coords): ``points`` a list of Jet aerial points, ``coords`` the
    names of the chart coordinates tangent to the stratum.  For the named strata the
    half-plane-with-mark chart has the mark at 0; with model="quadrant" the points
    are pushed through w = sqrt(z) (alpha uses its own quadrant chart).
    """
    if not eps > 0:
        raise InputError("eps must be positive")
    params = dict(params or {})
    if stratum.kind == "aerial":
        return _aerial_collapse(stratum, eps, params)
    if stratum.kind == "boundary":
        return _boundary_collapse(stratum, eps, params)
    if stratum.kind == "named":
        return _named(stratum.name, eps, params, model)
    raise InputError(f"malformed stratum descriptor {stratum!r}")


def _aerial_collapse(stratum, eps, params):
    k = len(stratum.aerial)
    if k < 2:
        raise InputError("an aerial collapse needs at least two points")
    centre = params.get("centre", 1j)
    offsets = params.get("offsets")
    if offsets is None:
        offsets = [0j] + [cmath.exp(1j * (0.7 + 2.1 * i)) for i in range(k - 1)]
    c = Jet.point(centre, "c")
    pts = [c]
    coords = ["c.x", "c.y"]
    for i in range(1, k):
        u = Jet.point(offsets[i], f"u{i}") if i > 1 else Jet.coord(cmath.phase(offsets[1]), "phi")
        if i == 1:
            u = u.apply(lambda t: cmath.exp(1j * t), lambda t: 1j * cmath.exp(1j * t))
            coords.append("phi")
        else:
            coords += [f"u{i}.x", f"u{i}.y"]
        pts.append(c + eps * u)
    return pts, coords


def _boundary_collapse(stratum, eps, params):
    target = complex(stratum.target)
    k = len(stratum.aerial)
    if k < 1:
        raise InputError("a boundary collapse needs at least one aerial point")
    offsets = params.get("offsets") or [1j * (i + 1) + 0.3 * i for i in range(k)]
    if k == 1:
        # a single point approaching the axis: only the position along the axis survives
        s = Jet.coord(target.real, "s")
        return [s + 1j * eps], ["s"]
    # gauge: the first offset is fixed to i, the others are free
    pts, coords = [target + eps * 1j], []
    for i in range(1, k):
        u = Jet.point(offsets[i], f"u{i}")
        coords += [f"u{i}.x", f"u{i}.y"]
        pts.append(target + eps * u)
    return pts, coords


def _named(name, eps, params, model):
    if name == "alpha" and model == "quadrant":
        t = Jet.coord(params.get("t", 0.6), "t")
        phi = Jet.coord(params.get("phi", 1.1), "phi")
        w1 = t.apply(lambda a: cmath.exp(1j * a), lambda a: 1j * cmath.exp(1j * a))
        return [w1, w1 + eps * phi.apply(lambda a: cmath.exp(1j * a),
                                         lambda a: 1j * cmath.exp(1j * a))], ["t", "phi"]
    pts, coords = _named_half_plane(name, eps, params)
    if model == "quadrant":
        pts = [p.sqrt() for p in pts]
    elif model != "half_plane":
        raise InputError(f"unknown model {model!r}")
    return pts, coords


def _unit(name, default):
    return Jet.coord(default, name).apply(lambda a: cmath.exp(1j * a),
                                          lambda a: 1j * cmath.exp(1j * a))


def _named_half_plane(name, eps, p):
    if name == "alpha":
        z1 = _unit("t", p.get("t", 1.2))
        return [z1, z1 + eps * _unit("phi", p.get("phi", 0.9))], ["t", "phi"]
    if name in ("beta", "gamma"):
        base = -1.0 if name == "beta" else 1.0
        u2 = Jet.point(p.get("u", 0.4 + 0.8j), "u")
        return [Jet.const(base + eps * 1j), base + eps * u2], ["u.x", "u.y"]
    if name in ("delta", "epsilon"):
        # radius eps^2 here is radius eps after the square map
        near = eps * eps * _unit("t", p.get("t", 0.7))
        far = _unit("s", p.get("s", 2.0))
        return ([near, far] if name == "delta" else [far, near]), ["t", "s"]
    if name in ("eta", "theta", "zeta", "xi"):
        base = 1.0 if name in ("eta", "theta") else -1.0
        near = Jet.const(base + eps * 1j)
        free = Jet.point(p.get("z", 0.3 + 0.9j), "z")
        return ([free, near] if name in ("eta", "zeta") else [near, free]), ["z.x", "z.y"]
    raise InputError(f"unknown stratum {name!r}")
