#!/usr/bin/env python3
"""Reference first Dirichlet eigenvalues of geodesic caps via scipy shooting.

Radial problem on the m-dimensional space form with metric factor
sn(phi) = sin, id, sinh:

    u'' + (m-1) (sn'/sn) u' + lam u = 0,   u'(0) = 0,  u(rho) = 0.

Integrated with scipy's DOP853 from a series start near phi = 0; the
eigenvalue is the smallest root of u(rho; lam) located by bracketing and
brentq.  Entirely independent of the C++ build (different integrator,
different root strategy).  Printed values are frozen into the test suite.
"""
import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq


def sn_cot(space, phi):
    if space == "sphere":
        return np.cos(phi) / np.sin(phi)
    if space == "euclidean":
        return 1.0 / phi
    return np.cosh(phi) / np.sinh(phi)


def endpoint(space, m, lam, rho):
    eps = 1e-4
    u0 = 1.0 - lam * eps * eps / (2.0 * m)
    v0 = -lam * eps / m

    def rhs(phi, y):
        u, v = y
        return [v, -(m - 1) * sn_cot(space, phi) * v - lam * u]

    sol = solve_ivp(rhs, (eps, rho), [u0, v0], method="DOP853",
                    rtol=1e-12, atol=1e-14)
    return sol.y[0, -1]


def cap_lambda1(space, m, rho):
    lo, f_lo = 0.25, endpoint(space, m, 0.25, rho)
    step = 0.5
    while True:
        hi = lo + step
        f_hi = endpoint(space, m, hi, rho)
        if f_lo * f_hi < 0:
            break
        lo, f_lo = hi, f_hi
        if hi > 1e7:
            raise RuntimeError("no bracket")
    return brentq(lambda lam: endpoint(space, m, lam, rho), lo, hi,
                  xtol=1e-13, rtol=1e-14)


def main():
    cases = [
        ("sphere", 2, np.pi / 2), ("sphere", 3, np.pi / 2), ("sphere", 4, np.pi / 2),
        ("sphere", 2, np.pi / 3), ("sphere", 2, 2 * np.pi / 3),
        ("sphere", 3, np.pi / 3), ("sphere", 3, 2 * np.pi / 3),
        ("euclidean", 2, 1.0), ("euclidean", 3, 1.0),
        ("hyperbolic", 2, 1.0), ("hyperbolic", 3, 1.0),
        ("hyperbolic", 2, 0.5),
    ]
    for space, m, rho in cases:
        lam = cap_lambda1(space, m, rho)
        print("%-10s m=%d rho=%-18.15f lam1=%.13f" % (space, m, rho, lam))
    print("anchors: hemisphere lam=m; euclidean m=2 -> j01^2; m=3 -> pi^2=%.13f"
          % (np.pi ** 2))


if __name__ == "__main__":
    main()
