"""Pure-numpy evaluation of the two-mode Chernoff objective.

Drop-in fallback for the compiled extension: same functions, same constants.
The grid scan runs all (theta, x) points through a lock-step vectorized
golden section so the inner s-minimization stays a batched determinant.
"""

from __future__ import annotations

import math

import numpy as np

S_LO = 1e-9
S_HI = 1.0 - 1e-9
S_TOL = 1e-9
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_NEWTON_H = 1e-6


def _lam(s, x):
    """Lambda_s(x) for scalar x >= 1 and scalar or array s in (0, 1)."""
    if x <= 1.0:
        return np.ones_like(np.asarray(s, dtype=float))
    up = (x + 1.0) ** np.asarray(s, dtype=float)
    dn = (x - 1.0) ** np.asarray(s, dtype=float)
    return (up + dn) / (up - dn)


def _ua_batch(theta, x, lam):
    """U_A(theta, x) = R(theta) S1(x) R(lam) S1(-x) R(-theta) for arrays."""
    ct, st = np.cos(theta), np.sin(theta)
    ex = np.exp(x)
    cl, sl = math.cos(lam), math.sin(lam)
    g = theta.shape[0]

    def rot(c, s):
        m = np.empty((g, 2, 2))
        m[:, 0, 0] = c
        m[:, 0, 1] = -s
        m[:, 1, 0] = s
        m[:, 1, 1] = c
        return m

    sq = np.zeros((g, 2, 2))
    sq[:, 0, 0] = ex
    sq[:, 1, 1] = 1.0 / ex
    sq_inv = np.zeros((g, 2, 2))
    sq_inv[:, 0, 0] = 1.0 / ex
    sq_inv[:, 1, 1] = ex
    rl = np.empty((g, 2, 2))
    rl[:, 0, 0] = cl
    rl[:, 0, 1] = -sl
    rl[:, 1, 0] = sl
    rl[:, 1, 1] = cl

    out = rot(ct, st) @ sq @ rl @ sq_inv @ rot(ct, -st)
    return out


def _conjugate_batch(ua, p):
    """(U_A + I_B) p (U_A + I_B)^T for a stack of 2x2 blocks ``ua``."""
    g = ua.shape[0]
    ut = np.zeros((g, 4, 4))
    ut[:, :2, :2] = ua
    ut[:, 2, 2] = 1.0
    ut[:, 3, 3] = 1.0
    return ut @ p @ np.swapaxes(ut, 1, 2)


def _objective_batch(s, nu1, nu2, p1, p2, q1, q2):
    l1 = _lam(s, nu1)
    l2 = _lam(s, nu2)
    m1 = _lam(1.0 - s, nu1)
    m2 = _lam(1.0 - s, nu2)
    m = (
        l1[:, None, None] * p1
        + l2[:, None, None] * p2
        + m1[:, None, None] * q1
        + m2[:, None, None] * q2
    )
    return (l1 + m1) * (l2 + m2) / np.sqrt(np.linalg.det(m))


def _golden_newton_batch(fbatch, g):
    a = np.full(g, S_LO)
    b = np.full(g, S_HI)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = fbatch(c)
    fd = fbatch(d)
    n_iter = int(math.ceil(math.log(S_TOL / (S_HI - S_LO)) / math.log(_INVPHI)))
    for _ in range(n_iter):
        left = fc < fd
        b_new = np.where(left, d, b)
        a_new = np.where(left, a, c)
        width = b_new - a_new
        probe = np.where(left, b_new - _INVPHI * width, a_new + _INVPHI * width)
        fprobe = fbatch(probe)
        c, fc, d, fd = (
            np.where(left, probe, d),
            np.where(left, fprobe, fd),
            np.where(left, c, probe),
            np.where(left, fc, fprobe),
        )
        a, b = a_new, b_new
    s_mid = 0.5 * (a + b)
    f_mid = fbatch(s_mid)

    h = _NEWTON_H
    x0 = np.clip(s_mid, S_LO + h, S_HI - h)
    f0 = fbatch(x0)
    gp = np.log(fbatch(x0 + h))
    gm = np.log(fbatch(x0 - h))
    g0 = np.log(f0)
    d2 = (gp - 2.0 * g0 + gm) / (h * h)
    d1 = (gp - gm) / (2.0 * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = np.where(d2 > 0.0, d1 / d2, 0.0)
    x1 = np.clip(x0 - step, S_LO, S_HI)
    f1 = fbatch(x1)
    better = f1 <= np.minimum(f0, f_mid)
    q = np.where(better, f1, f_mid)
    s = np.where(better, x1, s_mid)
    return q, s


def min_q_over_s(p1, p2, nu1, nu2, ua):
    """Minimize the Chernoff quotient over s for a fixed 2x2 local symplectic.

    Returns (q_min, s_star).
    """
    ua = np.asarray(ua, dtype=float).reshape(1, 2, 2)
    q1 = _conjugate_batch(ua, p1)
    q2 = _conjugate_batch(ua, p2)
    f = lambda s: _objective_batch(s, nu1, nu2, p1, p2, q1, q2)
    q, s = _golden_newton_batch(f, 1)
    return float(min(q[0], 1.0)), float(s[0])


def scan_theta_x(p1, p2, nu1, nu2, lam, thetas, xs):
    """min_s of the Chernoff quotient on the (theta, x) product grid.

    Returns an array of shape (len(thetas), len(xs)).
    """
    thetas = np.asarray(thetas, dtype=float)
    xs = np.asarray(xs, dtype=float)
    nt, nx = thetas.shape[0], xs.shape[0]
    th = np.repeat(thetas, nx)
    xx = np.tile(xs, nt)
    ua = _ua_batch(th, xx, lam)
    q1 = _conjugate_batch(ua, p1)
    q2 = _conjugate_batch(ua, p2)
    f = lambda s: _objective_batch(s, nu1, nu2, p1, p2, q1, q2)
    q, _ = _golden_newton_batch(f, nt * nx)
    return np.minimum(q, 1.0).reshape(nt, nx)
