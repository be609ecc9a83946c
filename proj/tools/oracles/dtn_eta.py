#!/usr/bin/env python3
"""Reference boundary-operator mode values for caps.

For a geodesic cap B_rho in the m-dimensional space form, u its first
normalized Dirichlet eigenfunction and ghat_k the radial mode profile

    g'' + (m-1)(sn'/sn) g' + (lam - mu_k/sn^2) g = 0,
    mu_k = k (k + m - 2),   g ~ phi^k near 0,   ghat_k(rho) = |u'(rho)|,

the two normalizations of the boundary form used by the C++ library are

    eta_raw(k)  = ghat_k'(rho) + H |u'(rho)|^2 / 2
    eta_cal(k)  = rho^2/2 * ( |u'(rho)| ghat_k'(rho) + H |u'(rho)|^2 )

with H the boundary mean curvature (m-1) sn'(rho)/sn(rho).

Disk values come from closed Bessel forms (scipy.special); curved values
from scipy DOP853 integration, so all reference numbers are independent
of the C++ ODE code.  Printed values are frozen into the test suite.
"""
import numpy as np
from scipy.integrate import solve_ivp, quad
from scipy.optimize import brentq
from scipy.special import jn_zeros, jv, jvp


def disk_values():
    j01 = jn_zeros(0, 1)[0]
    lam = j01 ** 2
    up = j01 / np.sqrt(np.pi)          # |u'(1)| for L2-normalized u
    H = 1.0
    print("disk: lam=%.15f  |u'(1)|=%.15f" % (lam, up))
    for k in (1, 2, 3):
        gp = up * j01 * jvp(k, j01) / jv(k, j01)
        eta_raw = gp + 0.5 * H * up * up
        eta_cal = 0.5 * (up * gp + H * up * up)
        # quadrature route: E_k = int (g'^2 + (k^2/r^2 - lam) g^2) r dr
        c = up / jv(k, j01)
        Ek = quad(lambda r: ((c * j01 * jvp(k, j01 * r)) ** 2
                             + (k * k / r ** 2 - lam) * (c * jv(k, j01 * r)) ** 2) * r,
                  1e-12, 1, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        print("  k=%d ghat'(1)=%+.15f eta_raw=%+.15f eta_cal=%+.15f  E_k=%+.15f (want |u'|ghat')"
              % (k, gp, eta_raw, eta_cal, Ek))


def sn_cot(phi):
    return np.cos(phi) / np.sin(phi)


def cap_lambda1(rho, m=2):
    def endpoint(lam):
        eps = 1e-4
        y0 = [1.0 - lam * eps * eps / (2 * m), -lam * eps / m]
        sol = solve_ivp(lambda p, y: [y[1], -(m - 1) * sn_cot(p) * y[1] - lam * y[0]],
                        (eps, rho), y0, method="DOP853", rtol=1e-12, atol=1e-14)
        return sol.y[0, -1]
    lo, f_lo = 0.25, None
    f_lo = endpoint(lo)
    while True:
        hi = lo + 0.5
        f_hi = endpoint(hi)
        if f_lo * f_hi < 0:
            break
        lo, f_lo = hi, f_hi
    return brentq(endpoint, lo, hi, xtol=1e-13, rtol=1e-14)


def sphere_cap_values(rho, m=2):
    lam = cap_lambda1(rho, m)
    # eigenfunction normalization on the cap: area element 2 pi sin(phi)
    eps = 1e-4
    y0 = [1.0 - lam * eps * eps / (2 * m), -lam * eps / m, 0.0]
    sol = solve_ivp(lambda p, y: [y[1], -sn_cot(p) * y[1] - lam * y[0],
                                  2 * np.pi * np.sin(p) * y[0] ** 2],
                    (eps, rho), y0, method="DOP853", rtol=1e-12, atol=1e-14)
    norm2 = sol.y[2, -1] + np.pi * eps ** 2   # [0, eps) start segment, u ~ 1
    up = abs(sol.y[1, -1]) / np.sqrt(norm2)
    H = sn_cot(rho)
    print("sphere m=2 rho=%.15f: lam=%.15f |u'|=%.15f H=%.15f"
          % (rho, lam, up, H))
    for k in (1, 2, 3):
        mu = k * k
        g0 = [eps ** k, k * eps ** (k - 1)]
        gs = solve_ivp(lambda p, y: [y[1],
                                     -sn_cot(p) * y[1] - (lam - mu / np.sin(p) ** 2) * y[0]],
                       (eps, rho), g0, method="DOP853", rtol=1e-12, atol=1e-14)
        scale = up / gs.y[0, -1]
        gp = scale * gs.y[1, -1]
        eta_raw = gp + 0.5 * H * up * up
        eta_cal = 0.5 * rho ** 2 * (up * gp + H * up * up)
        print("  k=%d ghat'(rho)=%+.15f eta_raw=%+.15f eta_cal=%+.15f"
              % (k, gp, eta_raw, eta_cal))


def main():
    disk_values()
    sphere_cap_values(np.pi / 2)
    sphere_cap_values(np.pi / 3)
    # hemisphere closed-form anchor: u = sqrt(3/(2 pi)) cos(phi)
    print("hemisphere |u'| closed form = %.15f" % np.sqrt(3 / (2 * np.pi)))


if __name__ == "__main__":
    main()
