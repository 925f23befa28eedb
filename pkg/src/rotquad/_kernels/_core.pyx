# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the kernel contract (see package docstring)."""

import numpy as np

BACKEND = "compiled"


cdef inline void _qmul(const double* a, const double* b, double* out) nogil:
    out[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    out[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2]
    out[2] = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1]
    out[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]


def quat_mul(a_in, b_in):
    cdef double[::1] a = np.ascontiguousarray(a_in, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(b_in, dtype=np.float64)
    out = np.empty(4)
    cdef double[::1] o = out
    _qmul(&a[0], &b[0], &o[0])
    return out


def dq_mul(a_in, b_in):
    cdef double[::1] a = np.ascontiguousarray(a_in, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(b_in, dtype=np.float64)
    out = np.empty(8)
    cdef double[::1] o = out
    cdef double tmp[4]
    cdef int i
    _qmul(&a[0], &b[0], &o[0])
    _qmul(&a[0], &b[4], &o[4])
    _qmul(&a[4], &b[0], tmp)
    for i in range(4):
        o[4 + i] += tmp[i]
    return out


def quat_rotate(q_in, v_in):
    cdef double[::1] q = np.ascontiguousarray(q_in, dtype=np.float64)
    cdef double[::1] v = np.ascontiguousarray(v_in, dtype=np.float64)
    out = np.empty(3)
    cdef double[::1] o = out
    cdef double tx, ty, tz
    tx = 2.0 * (q[2] * v[2] - q[3] * v[1])
    ty = 2.0 * (q[3] * v[0] - q[1] * v[2])
    tz = 2.0 * (q[1] * v[1] - q[2] * v[0])
    o[0] = v[0] + q[0] * tx + q[2] * tz - q[3] * ty
    o[1] = v[1] + q[0] * ty + q[3] * tx - q[1] * tz
    o[2] = v[2] + q[0] * tz + q[1] * ty - q[2] * tx
    return out


def quat_to_matrix(q_in):
    cdef double[::1] q = np.ascontiguousarray(q_in, dtype=np.float64)
    out = np.empty((3, 3))
    cdef double[:, ::1] R = out
    cdef double w = q[0], x = q[1], y = q[2], z = q[3]
    R[0, 0] = 1 - 2 * (y * y + z * z)
    R[0, 1] = 2 * (x * y - w * z)
    R[0, 2] = 2 * (x * z + w * y)
    R[1, 0] = 2 * (x * y + w * z)
    R[1, 1] = 1 - 2 * (x * x + z * z)
    R[1, 2] = 2 * (y * z - w * x)
    R[2, 0] = 2 * (x * z - w * y)
    R[2, 1] = 2 * (y * z + w * x)
    R[2, 2] = 1 - 2 * (x * x + y * y)
    return out


def homopoly_eval(exps_in, coeffs_in, pts_in):
    cdef long[:, ::1] exps = np.ascontiguousarray(exps_in, dtype=np.int64)
    cdef double[::1] coeffs = np.ascontiguousarray(coeffs_in, dtype=np.float64)
    cdef double[:, ::1] pts = np.ascontiguousarray(
        np.atleast_2d(pts_in), dtype=np.float64
    )
    cdef Py_ssize_t n = pts.shape[0], m = exps.shape[0]
    out = np.zeros(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i, k
    cdef long e
    cdef double term, base
    cdef int axis
    with nogil:
        for i in range(n):
            for k in range(m):
                term = coeffs[k]
                for axis in range(3):
                    base = pts[i, axis]
                    e = exps[k, axis]
                    while e > 0:
                        term *= base
                        e -= 1
                o[i] += term
    return out


def coplanarity_dets(p0_in, p1_in, p2_in, p3_in):
    cdef double[:, ::1] p0 = np.ascontiguousarray(np.atleast_2d(p0_in), dtype=np.float64)
    cdef double[:, ::1] p1 = np.ascontiguousarray(np.atleast_2d(p1_in), dtype=np.float64)
    cdef double[:, ::1] p2 = np.ascontiguousarray(np.atleast_2d(p2_in), dtype=np.float64)
    cdef double[:, ::1] p3 = np.ascontiguousarray(np.atleast_2d(p3_in), dtype=np.float64)
    cdef Py_ssize_t n = p0.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double ax, ay, az, bx, by, bz, cx, cy, cz
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            ax = p1[i, 0] - p0[i, 0]; ay = p1[i, 1] - p0[i, 1]; az = p1[i, 2] - p0[i, 2]
            bx = p2[i, 0] - p0[i, 0]; by = p2[i, 1] - p0[i, 1]; bz = p2[i, 2] - p0[i, 2]
            cx = p3[i, 0] - p0[i, 0]; cy = p3[i, 1] - p0[i, 1]; cz = p3[i, 2] - p0[i, 2]
            o[i] = (ay * bz - az * by) * cx + (az * bx - ax * bz) * cy + (ax * by - ay * bx) * cz
    return out


def line_transform(R_in, t_in, d_in, m_in):
    cdef double[:, ::1] R = np.ascontiguousarray(R_in, dtype=np.float64)
    cdef double[::1] t = np.ascontiguousarray(t_in, dtype=np.float64)
    cdef double[::1] d = np.ascontiguousarray(d_in, dtype=np.float64)
    cdef double[::1] m = np.ascontiguousarray(m_in, dtype=np.float64)
    out = np.empty(6)
    cdef double[::1] o = out
    cdef double rdx, rdy, rdz
    cdef int i
    rdx = R[0, 0] * d[0] + R[0, 1] * d[1] + R[0, 2] * d[2]
    rdy = R[1, 0] * d[0] + R[1, 1] * d[1] + R[1, 2] * d[2]
    rdz = R[2, 0] * d[0] + R[2, 1] * d[1] + R[2, 2] * d[2]
    o[0] = rdx; o[1] = rdy; o[2] = rdz
    for i in range(3):
        o[3 + i] = R[i, 0] * m[0] + R[i, 1] * m[1] + R[i, 2] * m[2]
    o[3] += t[1] * rdz - t[2] * rdy
    o[4] += t[2] * rdx - t[0] * rdz
    o[5] += t[0] * rdy - t[1] * rdx
    return out
