"""Generates src/problem_fields.cpp: closed-form exact fields of the benchmark problems.

Run from the repository root:  python3 tools/gen_problem_fields.py > src/problem_fields.cpp
"""
import sympy as sp

x, y = sp.symbols("x y", real=True)
R, TH = sp.symbols("r th", positive=True)


def rot_star(w):
    return (sp.diff(w, y), -sp.diff(w, x))


def lap(w):
    return sp.diff(w, x, 2) + sp.diff(w, y, 2)


def fields(phi, psi):
    """u = grad(phi) + rot*(psi); sigma = -div u; f = grad sigma + rot*(rot u)."""
    rs = rot_star(psi)
    u = (sp.diff(phi, x) + rs[0], sp.diff(phi, y) + rs[1])
    sigma = -(sp.diff(u[0], x) + sp.diff(u[1], y))
    rot_u = sp.diff(u[1], x) - sp.diff(u[0], y)
    rr = rot_star(rot_u)
    f = (sp.diff(sigma, x) + rr[0], sp.diff(sigma, y) + rr[1])
    div_f = sp.diff(f[0], x) + sp.diff(f[1], y)
    return {
        "sigma": sigma,
        "grad_sigma0": sp.diff(sigma, x),
        "grad_sigma1": sp.diff(sigma, y),
        "u0": u[0],
        "u1": u[1],
        "rot_u": rot_u,
        "f0": f[0],
        "f1": f[1],
        "div_f": div_f,
    }


def emit(name, flds, polar=False):
    keys = list(flds)
    exprs = [flds[k] for k in keys]
    if polar:
        exprs = [e.subs(sp.atan2(y, x), TH) for e in exprs]
        exprs = [e.subs(sp.sqrt(x**2 + y**2), R) for e in exprs]
    repl, red = sp.cse([sp.simplify(e) if not polar else e for e in exprs], optimizations="basic")
    out = [f"FieldSample {name}(double x, double y)", "{"]
    if polar:
        out.append("  const double r = std::hypot(x, y);")
        out.append("  const double th = reentrant_angle(x, y);")
    for sym, e in repl:
        out.append(f"  const double {sym} = {sp.ccode(e)};")
    out.append("  FieldSample s;")
    target = {
        "sigma": "s.sigma",
        "grad_sigma0": "s.grad_sigma[0]",
        "grad_sigma1": "s.grad_sigma[1]",
        "u0": "s.u[0]",
        "u1": "s.u[1]",
        "rot_u": "s.rot_u",
        "f0": "s.f[0]",
        "f1": "s.f[1]",
        "div_f": "s.div_f",
    }
    for k, e in zip(keys, red):
        out.append(f"  {target[k]} = {sp.ccode(e)};")
    out.append("  return s;")
    out.append("}")
    return "\n".join(out)


pi = sp.pi
m1 = fields(sp.sin(pi * x) * sp.sin(pi * y), sp.sin(pi * x) ** 2 * sp.sin(pi * y) ** 2)
m2 = fields(sp.Integer(0), sp.sin(pi * x) ** 2 * sp.sin(pi * y) ** 2)

bub = (1 - x**2) * (1 - y**2)
theta = sp.atan2(y, x)
rad = sp.sqrt(x**2 + y**2)
phi_s2 = -sp.Rational(3, 20) * rad ** sp.Rational(8, 3) * sp.sin(sp.Rational(2, 3) * theta) * bub**3
psi_s2 = x**2 * y**2 * (1 - x**2) ** 2 * (1 - y**2) ** 2
s2 = fields(phi_s2, psi_s2)

print("// Generated by tools/gen_problem_fields.py. Do not edit.")
print('#include "amfem/problems.hpp"')
print()
print("#include <cmath>")
print()
print("namespace amfem::detail {")
print()
print("namespace {")
print()
print("// Polar angle measured from the positive x-axis, in [0, 2*pi).")
print("double reentrant_angle(double x, double y)")
print("{")
print("  double t = std::atan2(y, x);")
print("  if (t < 0.0) t += 2.0 * M_PI;")
print("  return t;")
print("}")
print()
print("}  // namespace")
print()
print(emit("smooth_hodge_fields", m1))
print()
print(emit("smooth_maxwell_fields", m2))
print()
print(emit("singular_lshape_fields", s2, polar=True))
print()
print("}  // namespace amfem::detail")
