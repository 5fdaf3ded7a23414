"""Independent reference implementations used to check the package.

These deliberately avoid the package's own code paths: brute-force sign
scans, closed-form fold conditions, dense matrix diagonalization, and
extended-precision finite differences.
"""

import mpmath as mp
import numpy as np


def branch_energy(gamma_bar, sign, g, zeta, omega, omega_a, omega_b):
    """Scaled energy in arbitrary precision (for finite differences)."""
    x = mp.mpf(gamma_bar) ** 2
    A = mp.sqrt(mp.mpf(omega_a) ** 2 + 4 * mp.mpf(g) ** 2 * x)
    return mp.mpf(omega) * x - mp.mpf(zeta) ** 2 * x * x / mp.mpf(omega_b) + sign * A / 2


def fd_first(gamma_bar, sign, g, zeta, omega, omega_a, omega_b, h=1e-5):
    """Richardson-extrapolated central difference at base step h."""
    with mp.workdps(40):
        args = (sign, g, zeta, omega, omega_a, omega_b)
        gb, hh = mp.mpf(gamma_bar), mp.mpf(h)
        d_h = (branch_energy(gb + hh, *args) - branch_energy(gb - hh, *args)) / (2 * hh)
        d_h2 = (branch_energy(gb + hh / 2, *args) - branch_energy(gb - hh / 2, *args)) / hh
        return float((4 * d_h2 - d_h) / 3)


def fd_second(gamma_bar, sign, g, zeta, omega, omega_a, omega_b, h=1e-5):
    with mp.workdps(40):
        args = (sign, g, zeta, omega, omega_a, omega_b)
        gb, hh = mp.mpf(gamma_bar), mp.mpf(h)
        mid = branch_energy(gb, *args)
        d_h = (branch_energy(gb + hh, *args) - 2 * mid + branch_energy(gb - hh, *args)) / (hh * hh)
        d_h2 = (branch_energy(gb + hh / 2, *args) - 2 * mid
                + branch_energy(gb - hh / 2, *args)) / (hh * hh / 4)
        return float((4 * d_h2 - d_h) / 3)


def p_of_x(x, sign, g, zeta, omega, omega_a, omega_b):
    A = np.sqrt(omega_a**2 + 4.0 * g * g * x)
    return omega - 2.0 * zeta**2 * x / omega_b + sign * g * g / A


def scan_roots(sign, g, zeta, omega, omega_a, omega_b, n_points=100_000):
    """Dense sign scan in x plus bisection; returns root x values."""
    top = omega + (g * g / omega_a if sign > 0 else 0.0)
    if zeta == 0.0:
        if sign > 0 or g * g <= omega * omega_a:
            return []
        return [g**2 / (4 * omega**2) - omega_a**2 / (4 * g**2)]
    x_hi = 1.2 * top * omega_b / (2.0 * zeta**2)
    xs = np.linspace(0.0, x_hi, n_points + 1)
    ps = p_of_x(xs, sign, g, zeta, omega, omega_a, omega_b)
    roots = []
    for i in np.nonzero(ps[:-1] * ps[1:] < 0.0)[0]:
        lo, hi = xs[i], xs[i + 1]
        flo = ps[i]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = p_of_x(mid, sign, g, zeta, omega, omega_a, omega_b)
            if flo * fm < 0:
                hi = mid
            else:
                lo, flo = mid, fm
            if hi - lo < 1e-14 * max(1.0, hi):
                break
        roots.append(0.5 * (lo + hi))
    return roots


def fold_gt(zeta, omega=1.0, omega_a=1.0, omega_b=10.0):
    """Turning point from the closed-form fold condition.

    The interior maximum of p on the normal branch sits where
    A^3 = omega_b*g^4/zeta^2; the fold is where p vanishes there.  p at the
    maximum decreases strictly in g, so bisection applies.
    """
    def F(g):
        Astar = (omega_b * g**4 / zeta**2) ** (1.0 / 3.0)
        if Astar <= omega_a:
            return np.nan
        xstar = (Astar**2 - omega_a**2) / (4.0 * g * g)
        return p_of_x(xstar, -1, g, zeta, omega, omega_a, omega_b)

    g_c = np.sqrt(omega * omega_a)
    lo, hi = g_c * (1 + 1e-12), 60.0 * g_c
    if not F(lo) > 0.0:
        raise ValueError("no fold: window closed at this zeta")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if F(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    return 0.5 * (lo + hi)


def rabi_dense(omega, omega_a, g, n_max):
    """Two-level (x) truncated-Fock Rabi matrix, built with Kronecker products."""
    dim = n_max + 1
    n = np.arange(dim, dtype=float)
    x_op = np.diag(np.sqrt(n[1:]), 1) + np.diag(np.sqrt(n[1:]), -1)
    sz = np.diag([1.0, -1.0])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    return (omega * np.kron(np.diag(n), np.eye(2))
            + 0.5 * omega_a * np.kron(np.eye(dim), sz)
            + 0.5 * g * np.kron(x_op, sx))


def rabi_dense_ground(omega, omega_a, g, n_max):
    return float(np.linalg.eigvalsh(rabi_dense(omega, omega_a, g, n_max))[0])
