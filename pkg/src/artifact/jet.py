"""First-order jets: a complex value with its partials along named real coordinates.

Jets let every propagator be written once as a composition of arg/arctan terms
and pulled back through charts (square map, involutions, boundary
parametrisations) by the chain rule.
"""

import cmath
import math

from .errors import DegenerateError


class Jet:
    __slots__ = ("val", "d")

    def __init__(self, val, d=None):
        self.val = complex(val)
        self.d = dict(d) if d else {}

    @classmethod
    def coord(cls, value, name):
        """A real coordinate."""
        return cls(value, {name: 1.0})

    @classmethod
    def point(cls, z, name):
        """A free complex point with coordinates name.x, name.y."""
        return cls(z, {f"{name}.x": 1.0, f"{name}.y": 1j})

    @classmethod
    def const(cls, z):
        return cls(z)

    def _lift(self, other):
        return other if isinstance(other, Jet) else Jet(other)

    def __add__(self, other):
        other = self._lift(other)
        d = dict(self.d)
        for k, v in other.d.items():
            d[k] = d.get(k, 0) + v
        return Jet(self.val + other.val, d)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, {k: -v for k, v in self.d.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        d = {k: v * other.val for k, v in self.d.items()}
        for k, v in other.d.items():
            d[k] = d.get(k, 0) + self.val * v
        return Jet(self.val * other.val, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        return self * other.apply(lambda z: 1 / z, lambda z: -1 / (z * z))

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def apply(self, f, fprime):
        fp = fprime(self.val)
        return Jet(f(self.val), {k: fp * v for k, v in self.d.items()})

    def conj(self):
        return Jet(self.val.conjugate(), {k: v.conjugate() for k, v in self.d.items()})

    @property
    def real(self):
        return Jet(self.val.real, {k: v.real for k, v in self.d.items()})

    @property
    def imag(self):
        return Jet(self.val.imag, {k: v.imag for k, v in self.d.items()})

    def sqrt(self):
        r = csqrt(self.val)
        if r == 0:
            raise DegenerateError("square root at the branch point")
        return Jet(r, {k: v / (2 * r) for k, v in self.d.items()})

    def partial(self, name):
        return self.d.get(name, 0)

    def __repr__(self):
        return f"Jet({self.val}, {self.d})"


def arg_value(z):
    """Argument normalised to (-pi/2, 3pi/2], cut along the negative imaginary axis."""
    a = cmath.phase(z)
    return a + 2 * math.pi if a <= -math.pi / 2 else a


def csqrt(z):
    """Square root with the branch cut on iR^- (argument halved from (-pi/2, 3pi/2])."""
    z = complex(z)
    if z == 0:
        return 0j
    return math.sqrt(abs(z)) * cmath.exp(0.5j * arg_value(z))


def d_arg(a):
    """Covector of d arg(a) = Im(da / a)."""
    if abs(a.val) < 1e-300:
        raise DegenerateError("d arg at zero")
    return {k: (v / a.val).imag for k, v in a.d.items()}


def d_atan_ratio(num, den):
    """Covector of d arctan(num/den) for real jets, = (den dN - num dD)/(N^2 + D^2)."""
    n, dd = num.val.real, den.val.real
    r = n * n + dd * dd
    if r == 0:
        raise DegenerateError("arctan of 0/0")
    keys = set(num.d) | set(den.d)
    return {k: (dd * num.d.get(k, 0).real - n * den.d.get(k, 0).real) / r for k in keys}


def sin(j):
    return j.apply(cmath.sin, cmath.cos)


def cos(j):
    return j.apply(cmath.cos, lambda z: -cmath.sin(z))


def sinh(j):
    return j.apply(cmath.sinh, cmath.cosh)


def cosh(j):
    return j.apply(cmath.cosh, cmath.sinh)


def tanh(j):
    return j.apply(cmath.tanh, lambda z: 1 / cmath.cosh(z) ** 2)


def tan(j):
    return j.apply(cmath.tan, lambda z: 1 / cmath.cos(z) ** 2)
