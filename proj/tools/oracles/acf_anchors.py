#!/usr/bin/env python3
"""Reference anchors for the two-phase monotonicity module.

Every value is computed here from closed forms plus an independent numeric
cross-check (scipy quadrature / shooting), never from the C++ build.  The
printed constants are frozen into tests/test_acf.cpp and tests/test_stability.cpp.

Model fields on the unit disk/ball (polar coordinates, arcs in radians):

  half-plane     u1 = (x.e2)^+ = r sin(theta)^+,  u2 the reflection
  wedge-unequal  u_i = r^{a_i} sin(a_i theta_loc) on complementary arcs,
                 a1 = 0.8 (opening pi/0.8), a2 = 4/3 (opening 3pi/4)
  power-law      u = r^p sin(theta)^+ for the deficit identities
  mode2          u1 = r (sin + 0.3 sin 2theta) on (0, pi): pure eigengap test
  cap-pair-3d    u_i = r^{alpha_i} psi_i(phi) on caps of radius pi/2 -+ 0.2
"""
import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

PI = np.pi


def show(name, value, check=None, tol=1e-9):
    line = f"{name:34s} = {value!r}"
    if check is not None:
        rel = abs(value - check) / max(1.0, abs(value))
        line += f"   (cross-check {check!r}, rel diff {rel:.2e})"
        assert rel < tol, line
    print(line)


# ---- J anchors -----------------------------------------------------------------

# Half plane: E_i(r) = pi r^2 / 4, J = pi^2/4 at every radius.
show("half_plane_J", PI * PI / 4.0)

# Unequal wedge: E_i = theta_i a_i r^{2 a_i} / 2 with theta_i = pi / a_i.
a1, a2 = 0.8, 4.0 / 3.0
J_wedge = lambda r: (PI**2 / 4.0) * r ** (2.0 * (a1 + a2) - 4.0)
show("wedge_exponent", 2.0 * (a1 + a2) - 4.0)
show("wedge_J_half", J_wedge(0.5))
show("wedge_dC_half", (2.0 / 0.5) * (a1 + a2 - 2.0))

# ---- power-law deficit anchors ---------------------------------------------------

# u = r^p sin(theta)^+: at radius r, delta_B per field is
#   int (sqrt(lam) u - u_r)^2 ds / E(r),  lam = 1/r^2 on the half circle.
p = 1.2
num = quad(lambda t: ((p - 1.0) * np.sin(t)) ** 2, 0.0, PI)[0]  # r = 1
E1 = quad(lambda t: p * p * np.sin(t) ** 2 + np.cos(t) ** 2, 0.0, PI)[0] / (2.0 * p)
show("powerlaw_dB_r1", 2.4 / 61.0, num / E1)

# mode2: u1 = r(sin + 0.3 sin 2t) on (0, pi).  delta_A E = (lam2-lam1) b2^2 with
# lam_k = k^2/r^2 and b2 the second sine coefficient of the trace.
r = 1.0
b2 = quad(lambda t: (np.sin(t) + 0.3 * np.sin(2 * t)) * np.sqrt(2.0 / (r * PI))
          * np.sin(2 * t) * r, 0.0, PI)[0] * r
dAE = (4.0 - 1.0) / r**2 * b2 * b2
ang = quad(lambda t: (np.sin(t) + 0.3 * np.sin(2 * t)) ** 2
           + (np.cos(t) + 0.6 * np.cos(2 * t)) ** 2, 0.0, PI)[0]
E = ang * r**2 / 2.0
show("mode2_dA_r1", 0.135 * PI / (0.6125 * PI), dAE / E)

# ---- one-homogeneity anchor ------------------------------------------------------

# u = r^{1.1} sin^+ : int_{B_1 \ B_rho} (r u(1,t) - u(r,t))^2 has the closed form
#   (pi/2) [ (1-rho^4)/4 - 2 (1-rho^{4.1})/4.1 + (1-rho^{4.2})/4.2 ].
rho = 0.5
closed = (PI / 2.0) * ((1 - rho**4) / 4.0 - 2.0 * (1 - rho**4.1) / 4.1
                       + (1 - rho**4.2) / 4.2)
num = quad(lambda rr: quad(lambda t: (rr * np.sin(t) - rr**1.1 * np.sin(t)) ** 2,
                           0.0, PI)[0] * rr, rho, 1.0)[0]
show("onehomog_p11_rho05", closed, num, tol=1e-10)

# ---- sine misalignment anchors ---------------------------------------------------

def half_sine(t):
    t = np.mod(t, 2.0 * PI)
    return np.sin(t) if t < PI else 0.0


def I1_closed(th):
    if th > PI:
        th = 2.0 * PI - th
    return PI - (PI - th) * np.cos(th) - np.sin(th)


def I1_num(th):
    cuts = sorted({0.0, PI, th % (2 * PI), (th + PI) % (2 * PI), 2.0 * PI})
    s = 0.0
    for a, b in zip(cuts, cuts[1:]):
        s += quad(lambda t: (half_sine(t) - half_sine(t - th)) ** 2, a, b,
                  limit=200)[0]
    return s


def I2_closed(a):
    if a == 1.0:
        return 0.0
    if a < 1.0:
        return (PI - np.sin((a - 1) * PI) / (a - 1)
                + np.sin((a + 1) * PI) / (a + 1) + PI * (1 - a) / (2 * a))
    return PI / 2.0 + PI / (2.0 * a) - 2.0 * a * np.sin(PI / a) / (a * a - 1.0)


def I2_num(a):
    arc = min(PI / a, 2.0 * PI)
    f = lambda t: (half_sine(t) - (np.sin(a * t) if t < arc else 0.0)) ** 2
    cuts = sorted({0.0, PI, arc, 2.0 * PI})
    return sum(quad(f, lo, hi, limit=200)[0] for lo, hi in zip(cuts, cuts[1:]))


show("I1_at_0p7", I1_closed(0.7), I1_num(0.7), tol=1e-10)
show("I1_at_4p0", I1_closed(4.0), I1_num(4.0), tol=1e-10)
show("I2_at_0p8", I2_closed(0.8), I2_num(0.8), tol=1e-10)
show("I2_at_1p3", I2_closed(1.3), I2_num(1.3), tol=1e-10)
show("I1_ratio_limit", PI / 2.0, I1_num(1e-4) / 1e-8, tol=1e-3)
show("I2_ratio_limit", PI**3 / 6.0 + PI / 4.0, I2_num(1 - 1e-5) / 1e-10, tol=1e-3)

# ---- spherical cap pair (n = 3) --------------------------------------------------

def cap_lambda_s2(rho):
    """First Dirichlet eigenvalue of a geodesic cap of radius rho on S^2."""
    def endpoint(lam):
        eps = 1e-5
        y0 = [1.0 - lam * eps * eps / 4.0, -lam * eps / 2.0]
        rhs = lambda p, y: [y[1], -np.cos(p) / np.sin(p) * y[1] - lam * y[0]]
        return solve_ivp(rhs, (eps, rho), y0, method="DOP853",
                         rtol=1e-12, atol=1e-14).y[0, -1]
    lo, hi = 0.1, 4.0
    while endpoint(hi) > 0.0:
        hi *= 2.0
    return brentq(endpoint, lo, hi, xtol=1e-13)


def char_const(n, lam, r=1.0):
    b = n - 2.0
    return 0.5 * (-b + np.sqrt(b * b + 4.0 * r * r * lam))


lam_n = cap_lambda_s2(PI / 2.0 - 0.2)
lam_s = cap_lambda_s2(PI / 2.0 + 0.2)
al_n = char_const(3, lam_n)
al_s = char_const(3, lam_s)
show("cap3d_lambda_north", lam_n)
show("cap3d_lambda_south", lam_s)
show("cap3d_alpha_north", al_n)
show("cap3d_alpha_south", al_s)
# E_w = (2 alpha + 1) r^{2 alpha} / 2 per field; J = E_w1 E_w2 / r^4.
Jcap = lambda r: (r ** (2.0 * (al_n + al_s) - 4.0)
                  * (2 * al_n + 1) * (2 * al_s + 1) / 4.0)
show("cap3d_J_r1", Jcap(1.0))
show("cap3d_J_r05", Jcap(0.5))
show("cap3d_dC_r05", (2.0 / 0.5) * (al_n + al_s - 2.0))

# alpha-hat: volume fraction t = 1/4 of S^2 is the cap of radius pi/3.
lam_q = cap_lambda_s2(PI / 3.0)
show("alphahat_lambda_quarter", lam_q)
show("alphahat_quarter", char_const(3, lam_q))

# half-cosine normalizations used by the stability fit.
show("halfcos_norm2_n2", PI / 2.0,
     quad(lambda t: max(np.cos(t), 0.0) ** 2, 0.0, 2.0 * PI)[0])
show("halfcos_norm2_n3", 2.0 * PI / 3.0,
     2.0 * PI * quad(lambda p: np.cos(p) ** 2 * np.sin(p), 0.0, PI / 2.0)[0])
