# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled two-mode Chernoff kernels.

Same contract as ``_kernels_py``: the objective is the normalized Chernoff
quotient of a two-mode Gaussian state against its image under a local 2x2
symplectic, minimized over the exponent s by golden section plus one Newton
polish of the log-objective.
"""

from libc.math cimport cos, sin, exp, log, pow, sqrt, fabs

import numpy as np

cdef double S_LO = 1e-9
cdef double S_HI = 1.0 - 1e-9
cdef double S_TOL = 1e-9
cdef double INVPHI = 0.6180339887498949
cdef double NEWTON_H = 1e-6


cdef inline double clam(double s, double x) nogil:
    cdef double up, dn
    if x <= 1.0:
        return 1.0
    up = pow(x + 1.0, s)
    dn = pow(x - 1.0, s)
    return (up + dn) / (up - dn)


cdef double det4(double* m) nogil:
    cdef double s0 = m[0] * m[5] - m[1] * m[4]
    cdef double s1 = m[0] * m[6] - m[2] * m[4]
    cdef double s2 = m[0] * m[7] - m[3] * m[4]
    cdef double s3 = m[1] * m[6] - m[2] * m[5]
    cdef double s4 = m[1] * m[7] - m[3] * m[5]
    cdef double s5 = m[2] * m[7] - m[3] * m[6]
    cdef double c0 = m[8] * m[13] - m[9] * m[12]
    cdef double c1 = m[8] * m[14] - m[10] * m[12]
    cdef double c2 = m[8] * m[15] - m[11] * m[12]
    cdef double c3 = m[9] * m[14] - m[10] * m[13]
    cdef double c4 = m[9] * m[15] - m[11] * m[13]
    cdef double c5 = m[10] * m[15] - m[11] * m[14]
    return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0


cdef inline double objective(double s, double nu1, double nu2,
                             double* p1, double* p2,
                             double* q1, double* q2) nogil:
    cdef double l1 = clam(s, nu1)
    cdef double l2 = clam(s, nu2)
    cdef double m1 = clam(1.0 - s, nu1)
    cdef double m2 = clam(1.0 - s, nu2)
    cdef double mm[16]
    cdef int i
    for i in range(16):
        mm[i] = l1 * p1[i] + l2 * p2[i] + m1 * q1[i] + m2 * q2[i]
    return (l1 + m1) * (l2 + m2) / sqrt(det4(mm))


cdef double golden_newton(double nu1, double nu2,
                          double* p1, double* p2,
                          double* q1, double* q2,
                          double* s_out) nogil:
    cdef double a = S_LO, b = S_HI
    cdef double c = b - INVPHI * (b - a)
    cdef double d = a + INVPHI * (b - a)
    cdef double fc = objective(c, nu1, nu2, p1, p2, q1, q2)
    cdef double fd = objective(d, nu1, nu2, p1, p2, q1, q2)
    while (b - a) > S_TOL:
        if fc < fd:
            b = d
            d = c
            fd = fc
            c = b - INVPHI * (b - a)
            fc = objective(c, nu1, nu2, p1, p2, q1, q2)
        else:
            a = c
            c = d
            fc = fd
            d = a + INVPHI * (b - a)
            fd = objective(d, nu1, nu2, p1, p2, q1, q2)

    cdef double s_mid = 0.5 * (a + b)
    cdef double f_mid = objective(s_mid, nu1, nu2, p1, p2, q1, q2)

    cdef double h = NEWTON_H
    cdef double x0 = s_mid
    if x0 < S_LO + h:
        x0 = S_LO + h
    if x0 > S_HI - h:
        x0 = S_HI - h
    cdef double f0 = objective(x0, nu1, nu2, p1, p2, q1, q2)
    cdef double gp = log(objective(x0 + h, nu1, nu2, p1, p2, q1, q2))
    cdef double gm = log(objective(x0 - h, nu1, nu2, p1, p2, q1, q2))
    cdef double g0 = log(f0)
    cdef double d2 = (gp - 2.0 * g0 + gm) / (h * h)
    cdef double x1, f1, fbest
    fbest = f_mid if f_mid < f0 else f0
    if d2 > 0.0:
        x1 = x0 - (gp - gm) / (2.0 * h) / d2
        if x1 < S_LO:
            x1 = S_LO
        if x1 > S_HI:
            x1 = S_HI
        f1 = objective(x1, nu1, nu2, p1, p2, q1, q2)
        if f1 <= fbest:
            s_out[0] = x1
            return f1
    s_out[0] = s_mid
    return f_mid


cdef void build_ua(double theta, double x, double lam, double* ua) nogil:
    # R(theta) S1(x) R(lam) S1(-x) R(-theta)
    cdef double ct = cos(theta), st = sin(theta)
    cdef double cl = cos(lam), sl = sin(lam)
    cdef double ex = exp(x), mex = exp(-x)
    # m = S1(x) R(lam) S1(-x)
    cdef double m00 = cl, m01 = -sl * ex * ex
    cdef double m10 = sl * mex * mex, m11 = cl
    # ua = R(theta) m R(-theta)
    cdef double t00 = ct * m00 - st * m10
    cdef double t01 = ct * m01 - st * m11
    cdef double t10 = st * m00 + ct * m10
    cdef double t11 = st * m01 + ct * m11
    ua[0] = t00 * ct - t01 * st
    ua[1] = t00 * st + t01 * ct
    ua[2] = t10 * ct - t11 * st
    ua[3] = t10 * st + t11 * ct


cdef void conj4(double* ua, double* p, double* out) nogil:
    # out = (U_A + I_B) p (U_A + I_B)^T for p symmetric 4x4
    cdef double a0 = ua[0], a1 = ua[1], a2 = ua[2], a3 = ua[3]
    cdef double t[8]
    cdef int j
    # t = U p, rows 0..1 only
    for j in range(4):
        t[j] = a0 * p[j] + a1 * p[4 + j]
        t[4 + j] = a2 * p[j] + a3 * p[4 + j]
    # out rows 0..1: t U^T
    for j in range(2):
        out[4 * j + 0] = t[4 * j + 0] * a0 + t[4 * j + 1] * a1
        out[4 * j + 1] = t[4 * j + 0] * a2 + t[4 * j + 1] * a3
        out[4 * j + 2] = t[4 * j + 2]
        out[4 * j + 3] = t[4 * j + 3]
    # out rows 2..3: p rows with columns 0..1 hit by U^T
    for j in range(2, 4):
        out[4 * j + 0] = p[4 * j + 0] * a0 + p[4 * j + 1] * a1
        out[4 * j + 1] = p[4 * j + 0] * a2 + p[4 * j + 1] * a3
        out[4 * j + 2] = p[4 * j + 2]
        out[4 * j + 3] = p[4 * j + 3]


cdef void copy16(double[:, ::1] src, double* dst):
    cdef int i, j
    for i in range(4):
        for j in range(4):
            dst[4 * i + j] = src[i, j]


def min_q_over_s(p1, p2, double nu1, double nu2, ua):
    """Minimize the Chernoff quotient over s for a fixed 2x2 local symplectic.

    Returns (q_min, s_star).
    """
    cdef double[:, ::1] p1v = np.ascontiguousarray(p1, dtype=np.float64)
    cdef double[:, ::1] p2v = np.ascontiguousarray(p2, dtype=np.float64)
    cdef double[:, ::1] uav = np.ascontiguousarray(ua, dtype=np.float64)
    cdef double cp1[16]
    cdef double cp2[16]
    cdef double cq1[16]
    cdef double cq2[16]
    cdef double cua[4]
    copy16(p1v, cp1)
    copy16(p2v, cp2)
    cua[0] = uav[0, 0]
    cua[1] = uav[0, 1]
    cua[2] = uav[1, 0]
    cua[3] = uav[1, 1]
    conj4(cua, cp1, cq1)
    conj4(cua, cp2, cq2)
    cdef double s_star = 0.5
    cdef double q = golden_newton(nu1, nu2, cp1, cp2, cq1, cq2, &s_star)
    if q > 1.0:
        q = 1.0
    return q, s_star


def scan_theta_x(p1, p2, double nu1, double nu2, double lam, thetas, xs):
    """min_s of the Chernoff quotient on the (theta, x) product grid.

    Returns an array of shape (len(thetas), len(xs)).
    """
    cdef double[:, ::1] p1v = np.ascontiguousarray(p1, dtype=np.float64)
    cdef double[:, ::1] p2v = np.ascontiguousarray(p2, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef int nt = tv.shape[0]
    cdef int nx = xv.shape[0]
    out = np.empty((nt, nx), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef double cp1[16]
    cdef double cp2[16]
    cdef double cq1[16]
    cdef double cq2[16]
    cdef double cua[4]
    cdef double s_star, q
    cdef int i, j
    copy16(p1v, cp1)
    copy16(p2v, cp2)
    with nogil:
        for i in range(nt):
            for j in range(nx):
                build_ua(tv[i], xv[j], lam, cua)
                conj4(cua, cp1, cq1)
                conj4(cua, cp2, cq2)
                q = golden_newton(nu1, nu2, cp1, cp2, cq1, cq2, &s_star)
                ov[i, j] = q if q < 1.0 else 1.0
    return out
