"""Poisson-bracket oracle for reduction spaces, written directly in sympy.

Functions on g* are polynomials in the coordinates xi_i; {xi_i, xi_j} = c_ij^k xi_k.
A brane point is xi0 + sum_b t_b eta_b with (eta_b) a basis of h^perp.  An ansatz
f(y), y_a = xi(c_a), is invariant when {h_i, f} vanishes identically in t.
"""

import itertools

import sympy


def _rat(v):
    return sympy.Rational(v.numerator, v.denominator)


def invariant_dims(algebra, sub, complement, chi, degree):
    n = algebra.dim
    xs = sympy.symbols(f"x0:{n}")
    sub_m = sympy.Matrix([[_rat(v) for v in b] for b in sub]) if sub else sympy.zeros(0, n)
    perp = sub_m.nullspace() if sub else [sympy.eye(n)[:, i] for i in range(n)]
    # a covector xi0 with xi0(h_i) = chi_i
    xi0 = [0] * n
    if sub:
        sol, params = sub_m.gauss_jordan_solve(sympy.Matrix([_rat(c) for c in chi]))
        xi0 = list(sol.subs({p: 0 for p in params}))
    ts = sympy.symbols(f"t0:{len(perp)}")
    point = [xi0[i] + sum(t * e[i] for t, e in zip(ts, perp)) for i in range(n)]
    ys = [sum(_rat(c[i]) * xs[i] for i in range(n)) for c in complement]
    monos = [m for d in range(degree + 1)
             for m in itertools.combinations_with_replacement(range(len(complement)), d)]
    coeffs = sympy.symbols(f"a0:{len(monos)}")
    f = sum(a * sympy.Mul(*[ys[i] for i in m]) for a, m in zip(coeffs, monos))
    eqs = []
    for h in sub:
        hlin = sum(_rat(h[i]) * xs[i] for i in range(n))
        br = 0
        for i in range(n):
            for j in range(n):
                cij = sum(_rat(algebra.c[i][j][k]) * xs[k] for k in range(n))
                if cij != 0:
                    br += sympy.diff(hlin, xs[i]) * sympy.diff(f, xs[j]) * cij
        br = sympy.expand(br.subs(dict(zip(xs, point)), simultaneous=True))
        if br != 0:
            eqs += sympy.Poly(br, *ts).coeffs() if ts else [br]
    # filtration dims: kernel restricted to degree <= d
    dims, prev = [], 0
    for d in range(degree + 1):
        keep = [a for a, m in zip(coeffs, monos) if len(m) <= d]
        drop = {a: 0 for a, m in zip(coeffs, monos) if len(m) > d}
        sub_eqs = [e.subs(drop) for e in eqs]
        sub_eqs = [e for e in sub_eqs if e != 0]
        if sub_eqs:
            mat = sympy.Matrix([[e.coeff(a) for a in keep] for e in sub_eqs])
            k = len(keep) - mat.rank()
        else:
            k = len(keep)
        dims.append(k - prev)
        prev = k
    return tuple(dims)
