"""Pure NumPy implementation of the kernel contract (see package docstring)."""

import numpy as np

BACKEND = "pure"


def quat_mul(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def dq_mul(a, b):
    out = np.empty(8)
    out[:4] = quat_mul(a[:4], b[:4])
    out[4:] = quat_mul(a[:4], b[4:]) + quat_mul(a[4:], b[:4])
    return out


def quat_rotate(q, v):
    # v' = v + 2 w (u x v) + 2 u x (u x v) for q = (w, u)
    u = np.asarray(q[1:])
    t = 2.0 * np.cross(u, v)
    return np.asarray(v) + q[0] * t + np.cross(u, t)


def quat_to_matrix(q):
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def homopoly_eval(exps, coeffs, pts):
    pts = np.atleast_2d(pts)
    pows = pts[:, None, :] ** exps[None, :, :]
    return pows.prod(axis=2) @ coeffs


def coplanarity_dets(p0, p1, p2, p3):
    a = np.atleast_2d(p1 - p0)
    b = np.atleast_2d(p2 - p0)
    c = np.atleast_2d(p3 - p0)
    return np.einsum("ij,ij->i", np.cross(a, b), c)


def line_transform(R, t, d, m):
    out = np.empty(6)
    rd = R @ d
    out[:3] = rd
    out[3:] = R @ m + np.cross(t, rd)
    return out
