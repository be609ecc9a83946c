#!/usr/bin/env python3
"""Finite-difference reference values for the Euclidean unit disk.

Computes Dirichlet eigenvalues and the torsion energy of the unit disk
with methods unrelated to the ODE machinery in the C++ library:

  * radial second-order FD on a staggered grid + Richardson extrapolation
    for the first eigenvalue,
  * a genuine 2D Shortley-Weller discretization on a Cartesian grid for
    the low end of the spectrum (resolves the angular mode ordering),
  * an FD solve of the torsion problem -div(grad u) = 1.

Cross-checked against scipy's Bessel zeros.  Printed values are frozen
into the C++ test suite.
"""
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.special import jn_zeros


def radial_operator(n):
    # staggered nodes r_j = (j+1/2)h avoid the coordinate singularity;
    # -(r u')' = lam r u in flux form gives a symmetric stiffness K and
    # diagonal mass M = diag(r_j).  Dirichlet at the face r=1 enters via
    # ghost elimination (u_ghost = -u_{n-1}), keeping second order.
    h = 1.0 / n
    r = (np.arange(n) + 0.5) * h
    rf = np.arange(n + 1) * h          # faces; rf[0]=0 kills the inner flux
    main = (rf[:-1] + rf[1:]) / h ** 2
    main[-1] = (rf[-2] + 2.0 * rf[-1]) / h ** 2
    off = -rf[1:-1] / h ** 2
    K = sp.diags([off, main, off], [-1, 0, 1], format="csc")
    M = sp.diags(r, format="csc")
    return K, M, r, h


def radial_lambda1(n):
    K, M, _, _ = radial_operator(n)
    vals = spla.eigsh(K, k=1, M=M, sigma=5.0, which="LM",
                      return_eigenvectors=False)
    return vals[0]


def richardson(seq, order=2):
    out = list(seq)
    fac = 2.0 ** order
    while len(out) > 1:
        out = [(fac * b - a) / (fac - 1.0) for a, b in zip(out[:-1], out[1:])]
    return out[0]


def disk_spectrum_2d(n, k=6):
    # Shortley-Weller stencil on [-1,1]^2 restricted to the open disk:
    # irregular nodes use the exact axis intersection with the circle.
    h = 2.0 / n
    xs = -1.0 + h * (np.arange(n + 1))
    idx = -np.ones((n + 1, n + 1), dtype=int)
    pts = []
    for i in range(n + 1):
        for j in range(n + 1):
            if xs[i] ** 2 + xs[j] ** 2 < 1.0 - 1e-13:
                idx[i, j] = len(pts)
                pts.append((i, j))
    m = len(pts)
    rows, cols, vals = [], [], []

    def leg(x, y, dx, dy):
        # distance along (dx,dy) from (x,y) to the unit circle, capped at h
        b = x * dx + y * dy
        c = x * x + y * y - 1.0
        t = -b + np.sqrt(b * b - c)
        return min(t, h)

    for p, (i, j) in enumerate(pts):
        x, y = xs[i], xs[j]
        hE = leg(x, y, 1, 0) if idx[i + 1, j] < 0 else h
        hW = leg(x, y, -1, 0) if idx[i - 1, j] < 0 else h
        hN = leg(x, y, 0, 1) if idx[i, j + 1] < 0 else h
        hS = leg(x, y, 0, -1) if idx[i, j - 1] < 0 else h
        diag = 2.0 / (hE * hW) + 2.0 / (hN * hS)
        rows.append(p); cols.append(p); vals.append(diag)
        for (ii, jj, ha, hb) in ((i + 1, j, hE, hW), (i - 1, j, hW, hE),
                                 (i, j + 1, hN, hS), (i, j - 1, hS, hN)):
            q = idx[ii, jj]
            if q >= 0:
                rows.append(p); cols.append(q)
                vals.append(-2.0 / (ha * (ha + hb)))
    A = sp.csc_matrix((vals, (rows, cols)), shape=(m, m))
    vals = spla.eigs(A, k=k, sigma=10.0, which="LM", return_eigenvectors=False)
    return np.sort(vals.real)


def disk_torsion(n):
    # -(r u')' = r, u(1)=0; torsion energy -1/2 * integral of u.
    K, M, r, h = radial_operator(n)
    u = spla.spsolve(K, M @ np.ones(len(r)))
    return -0.5 * 2.0 * np.pi * np.sum(u * r) * h


def main():
    z0 = jn_zeros(0, 2)
    z1 = jn_zeros(1, 1)
    z2 = jn_zeros(2, 1)
    print("bessel j01^2     = %.15f" % (z0[0] ** 2))
    print("bessel j02^2     = %.15f" % (z0[1] ** 2))
    print("bessel j11^2     = %.15f" % (z1[0] ** 2))
    print("bessel j21^2     = %.15f" % (z2[0] ** 2))

    grids = [256, 512, 1024, 2048]
    seq = [radial_lambda1(n) for n in grids]
    lam1 = richardson(seq)
    print("fd radial lam1   = %.12f   (error vs j01^2: %.3e)"
          % (lam1, abs(lam1 - z0[0] ** 2)))

    spec = disk_spectrum_2d(320, k=6)
    print("fd 2d spectrum   =", " ".join("%.6f" % v for v in spec))
    print("   expected       = %.6f %.6f %.6f %.6f %.6f %.6f"
          % (z0[0] ** 2, z1[0] ** 2, z1[0] ** 2, z2[0] ** 2, z2[0] ** 2, z0[1] ** 2))

    tor = richardson([disk_torsion(n) for n in grids])
    print("fd torsion       = %.15f   (-pi/16 = %.15f)" % (tor, -np.pi / 16))


if __name__ == "__main__":
    main()
