"""Hot numeric kernels with a compiled core and a pure NumPy fallback.

The functions exposed here are the small fixed-size operations that dominate
the runtime of sampling-heavy verification (dual quaternion products, point
rotation, homogeneous polynomial evaluation, 4-point coplanarity
determinants, Pluecker line transport).  At import time the compiled Cython
module ``rotquad._kernels._core`` is preferred; if it is not built the pure
backend ``rotquad._kernels._pure`` is used.  Set the environment variable
``ROTQUAD_PURE=1`` to force the pure backend.

Both backends implement the same contract:

    dq_mul(a, b)            raw dual quaternion product a (x) b, shape (8,)
    quat_mul(a, b)          Hamilton product, shape (4,)
    quat_rotate(q, v)       rotate 3-vector v by unit quaternion q
    quat_to_matrix(q)       3x3 rotation matrix of unit quaternion q
    homopoly_eval(exps, coeffs, pts)
                            evaluate sum_k c_k x^i y^j z^k at pts (n,3)
    coplanarity_dets(p0, p1, p2, p3)
                            batched det [[1,1,1,1],[p0 p1 p2 p3]], (n,)
    line_transform(R, t, d, m)
                            (R d, R m + t x R d) as one (6,) array

Quaternions are (w, x, y, z); dual quaternions are (primal, dual) stacked.
"""

import os

if os.environ.get("ROTQUAD_PURE"):
    from . import _pure as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as _impl

BACKEND = _impl.BACKEND

dq_mul = _impl.dq_mul
quat_mul = _impl.quat_mul
quat_rotate = _impl.quat_rotate
quat_to_matrix = _impl.quat_to_matrix
homopoly_eval = _impl.homopoly_eval
coplanarity_dets = _impl.coplanarity_dets
line_transform = _impl.line_transform

__all__ = [
    "BACKEND",
    "dq_mul",
    "quat_mul",
    "quat_rotate",
    "quat_to_matrix",
    "homopoly_eval",
    "coplanarity_dets",
    "line_transform",
]
