"""Rigid displacements as unit dual quaternions.

Conventions, fixed once and used everywhere:

* quaternions are (w, x, y, z); the primal part encodes the rotation, the
  dual part is 0.5 * (0, t) (x) primal for translation t;
* ``dq_multiply(a, b)`` is the displacement "apply a first, then b", i.e.
  the composition b o a read right-to-left; the raw algebra product is the
  private helper ``_dq_raw``;
* the canonical sign of a dual quaternion has primal scalar >= 0, ties
  broken by the first nonzero primal coordinate being positive; +A and -A
  describe the same displacement and comparisons are up to this sign;
* lines are (direction, moment) with moment = point x direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AlgebraError, DegenerateError


def _as_vec(x, n):
    v = np.asarray(x, dtype=float)
    if v.shape != (n,):
        raise AlgebraError(f"expected shape ({n},), got {v.shape}")
    return v


@dataclass(frozen=True, eq=False)
class Displacement:
    """Proper rigid displacement x -> R x + t."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.rotation, dtype=float)
        t = _as_vec(self.translation, 3)
        if R.shape != (3, 3):
            raise AlgebraError("rotation must be 3x3")
        if np.max(np.abs(R.T @ R - np.eye(3))) > 1e-8 or np.linalg.det(R) < 0.0:
            raise AlgebraError("rotation matrix is not special orthogonal")
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls) -> "Displacement":
        return cls(np.eye(3), np.zeros(3))

    def inverse(self) -> "Displacement":
        Rt = self.rotation.T
        return Displacement(Rt, -Rt @ self.translation)

    def compose_after(self, first: "Displacement") -> "Displacement":
        """Displacement equal to applying ``first``, then ``self``."""
        return Displacement(
            self.rotation @ first.rotation,
            self.rotation @ first.translation + self.translation,
        )

    def apply(self, points):
        pts = np.asarray(points, dtype=float)
        return pts @ self.rotation.T + self.translation

    def matrix(self) -> np.ndarray:
        """Homogeneous 4x4 acting on (w, x, y, z) column vectors, w first."""
        M = np.eye(4)
        M[1:, 1:] = self.rotation
        M[1:, 0] = self.translation
        return M

    def isclose(self, other: "Displacement", tol: float = 1e-9) -> bool:
        scale = max(1.0, np.max(np.abs(self.translation)), np.max(np.abs(other.translation)))
        return (
            np.max(np.abs(self.rotation - other.rotation)) <= tol
            and np.max(np.abs(self.translation - other.translation)) <= tol * scale
        )


class DualQuaternion:
    """Point of the Study quadric; a displacement when the primal is unit.

    Stored as two 4-vectors (primal, dual).  Instances are immutable.
    """

    __slots__ = ("primal", "dual")

    def __init__(self, primal, dual, *, canonical: bool = False):
        p = _as_vec(primal, 4).copy()
        q = _as_vec(dual, 4).copy()
        if canonical:
            p, q = _canonical_sign(p, q)
        p.flags.writeable = False
        q.flags.writeable = False
        object.__setattr__(self, "primal", p)
        object.__setattr__(self, "dual", q)

    def __setattr__(self, name, value):
        raise AttributeError("DualQuaternion is immutable")

    @classmethod
    def identity(cls) -> "DualQuaternion":
        return cls([1.0, 0.0, 0.0, 0.0], np.zeros(4))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.primal, self.dual])

    def primal_norm(self) -> float:
        return float(np.linalg.norm(self.primal))

    def study_error(self) -> float:
        """Residual of the Study condition primal . dual = 0."""
        return float(np.dot(self.primal, self.dual))

    def normalized(self) -> "DualQuaternion":
        n = self.primal_norm()
        if n == 0.0:
            raise AlgebraError("primal part is zero")
        return DualQuaternion(self.primal / n, self.dual / n)

    def canonical(self) -> "DualQuaternion":
        return DualQuaternion(self.primal, self.dual, canonical=True)

    def conjugate(self) -> "DualQuaternion":
        flip = np.array([1.0, -1.0, -1.0, -1.0])
        return DualQuaternion(self.primal * flip, self.dual * flip)

    def inverse(self) -> "DualQuaternion":
        """Inverse displacement (valid for unit dual quaternions)."""
        return self.conjugate()

    def isclose_up_to_sign(self, other: "DualQuaternion", tol: float = 1e-9) -> bool:
        a, b = self.as_array(), other.as_array()
        scale = max(1.0, np.max(np.abs(a)), np.max(np.abs(b)))
        return (
            np.max(np.abs(a - b)) <= tol * scale
            or np.max(np.abs(a + b)) <= tol * scale
        )

    def __repr__(self):
        return f"DualQuaternion({list(self.primal)}, {list(self.dual)})"


def _canonical_sign(p: np.ndarray, q: np.ndarray):
    for c in p:
        if abs(c) > 1e-14:
            if c < 0.0:
                return -p, -q
            break
    return p, q


def _dq_raw(a: DualQuaternion, b: DualQuaternion) -> DualQuaternion:
    """Raw algebra product a (x) b: the displacement applying b first, then a."""
    out = _kernels.dq_mul(a.as_array(), b.as_array())
    return DualQuaternion(out[:4], out[4:])


def study_form(a: DualQuaternion, b: DualQuaternion) -> float:
    """Polar bilinear form of the Study quadric.

    Equals the dual scalar part of the relative displacement b o a^-1, so it
    vanishes exactly when the relative displacement is a rotation (or a
    translation, or the identity).
    """
    return float(np.dot(a.primal, b.dual) + np.dot(b.primal, a.dual))


def quat_from_matrix(R: np.ndarray) -> np.ndarray:
    """Unit quaternion of a rotation matrix, scalar part >= 0."""
    R = np.asarray(R, dtype=float)
    tr = np.trace(R)
    cand = [tr, R[0, 0], R[1, 1], R[2, 2]]
    case = int(np.argmax(cand))
    if case == 0:
        s = np.sqrt(tr + 1.0) * 2.0
        q = np.array(
            [0.25 * s, (R[2, 1] - R[1, 2]) / s, (R[0, 2] - R[2, 0]) / s, (R[1, 0] - R[0, 1]) / s]
        )
    elif case == 1:
        s = np.sqrt(1.0 + R[0, 0] - R[1, 1] - R[2, 2]) * 2.0
        q = np.array(
            [(R[2, 1] - R[1, 2]) / s, 0.25 * s, (R[0, 1] + R[1, 0]) / s, (R[0, 2] + R[2, 0]) / s]
        )
    elif case == 2:
        s = np.sqrt(1.0 + R[1, 1] - R[0, 0] - R[2, 2]) * 2.0
        q = np.array(
            [(R[0, 2] - R[2, 0]) / s, (R[0, 1] + R[1, 0]) / s, 0.25 * s, (R[1, 2] + R[2, 1]) / s]
        )
    else:
        s = np.sqrt(1.0 + R[2, 2] - R[0, 0] - R[1, 1]) * 2.0
        q = np.array(
            [(R[1, 0] - R[0, 1]) / s, (R[0, 2] + R[2, 0]) / s, (R[1, 2] + R[2, 1]) / s, 0.25 * s]
        )
    return q / np.linalg.norm(q)


def dq_from_displacement(d: Displacement) -> DualQuaternion:
    """Study image of a displacement, canonically signed."""
    p = quat_from_matrix(d.rotation)
    t = np.concatenate([[0.0], d.translation])
    q = 0.5 * _kernels.quat_mul(t, p)
    return DualQuaternion(p, q, canonical=True)


def displacement_from_dq(dq: DualQuaternion, tol: float = 1e-8) -> Displacement:
    """Inverse of the Study mapping for unit dual quaternions."""
    n = dq.primal_norm()
    if n < 1e-12:
        raise AlgebraError("primal part is zero: not a displacement")
    p = dq.primal / n
    q = dq.dual / n
    if abs(float(np.dot(p, q))) > tol * max(1.0, float(np.linalg.norm(q))):
        raise AlgebraError("Study condition violated: not a displacement")
    R = _kernels.quat_to_matrix(p)
    pc = p * np.array([1.0, -1.0, -1.0, -1.0])
    t = 2.0 * _kernels.quat_mul(q, pc)
    return Displacement(R, t[1:])


def dq_multiply(a: DualQuaternion, b: DualQuaternion) -> DualQuaternion:
    """Displacement applying ``a`` first, then ``b`` (composition b o a)."""
    return _dq_raw(b, a).canonical()


def rotation_dq(axis, angle: float) -> DualQuaternion:
    """Rotation about a line by an angle, as a dual quaternion.

    ``axis`` is a PlueckerLine (unit direction d, moment m = point x d); the
    result is cos(angle/2) + sin(angle/2) * (0, d; 0, m).
    """
    d = np.asarray(axis.direction, dtype=float)
    m = np.asarray(axis.moment, dtype=float)
    if not np.isfinite(angle):
        raise AlgebraError("angle must be finite")
    c = np.cos(0.5 * angle)
    s = np.sin(0.5 * angle)
    return DualQuaternion(
        np.concatenate([[c], s * d]), np.concatenate([[0.0], s * m])
    )


def axis_dq(axis) -> DualQuaternion:
    """The line embedded as (0, d; 0, m): the half-turn about it."""
    return DualQuaternion(
        np.concatenate([[0.0], np.asarray(axis.direction, dtype=float)]),
        np.concatenate([[0.0], np.asarray(axis.moment, dtype=float)]),
    )


def is_pure_rotation(dq: DualQuaternion, tol: float = 1e-9):
    """Classify a displacement as a pure rotation and extract axis and angle.

    Returns (flag, axis_or_None, angle).  A pure rotation has vanishing dual
    scalar part and a nonzero primal vector part.  The identity raises since
    its axis is undefined.  Angles are reported in (0, pi] for the canonical
    sign (primal scalar >= 0); the same rotation with reversed axis carries
    the opposite angle.
    """
    from .linegeom import PlueckerLine

    dqn = dq.normalized().canonical()
    p, q = dqn.primal, dqn.dual
    sv = float(np.linalg.norm(p[1:]))
    scale = max(1.0, float(np.linalg.norm(q)))
    if sv <= 1e-12:
        if np.linalg.norm(q[1:]) <= 1e-12 * scale:
            raise DegenerateError("identity displacement: angle zero, axis undefined")
        return False, None, 0.0  # pure translation
    if abs(q[0]) > tol * scale:
        return False, None, 0.0  # proper screw
    angle = 2.0 * np.arctan2(sv, p[0])
    direction = p[1:] / sv
    moment = q[1:] / sv
    moment = moment - np.dot(moment, direction) * direction
    return True, PlueckerLine(direction, moment), float(angle)


def act_on_point(dq: DualQuaternion, x):
    """Image R x + t of a point (or an (n, 3) batch)."""
    return displacement_from_dq(dq).apply(x)


@dataclass(frozen=True, eq=False)
class HomPlane:
    """Oriented plane e0 + n . x = 0 with unit normal n.

    (e0, n) and (-e0, -n) are different oriented planes.
    """

    offset: float
    normal: np.ndarray

    def __post_init__(self):
        n = _as_vec(self.normal, 3)
        nn = np.linalg.norm(n)
        if nn < 1e-14:
            raise AlgebraError("plane normal must be nonzero")
        object.__setattr__(self, "offset", float(self.offset) / nn)
        object.__setattr__(self, "normal", n / nn)

    @classmethod
    def from_point_normal(cls, point, normal) -> "HomPlane":
        n = _as_vec(normal, 3)
        return cls(-float(np.dot(point, n)), n)

    def as_vector(self) -> np.ndarray:
        """Coordinate row (e0, n1, n2, n3) acting on points (1, x)."""
        return np.concatenate([[self.offset], self.normal])

    def signed_distance(self, points):
        pts = np.asarray(points, dtype=float)
        return pts @ self.normal + self.offset

    def isclose(self, other: "HomPlane", tol: float = 1e-9) -> bool:
        scale = max(1.0, abs(self.offset), abs(other.offset))
        return (
            np.max(np.abs(self.normal - other.normal)) <= tol
            and abs(self.offset - other.offset) <= tol * scale
        )


def act_on_plane(dq: DualQuaternion, plane: HomPlane) -> HomPlane:
    """Homologous image of an oriented plane (orientation preserved)."""
    d = displacement_from_dq(dq)
    n = d.rotation @ plane.normal
    return HomPlane(plane.offset - float(np.dot(n, d.translation)), n)


def act_on_line(dq: DualQuaternion, line):
    """Homologous image of an oriented line: (R d, R m + t x R d)."""
    from .linegeom import PlueckerLine

    d = displacement_from_dq(dq)
    out = _kernels.line_transform(d.rotation, d.translation, line.direction, line.moment)
    return PlueckerLine(out[:3], out[3:])


class StudyLine:
    """Line on the Study quadric: all rotations about one axis composed with
    a fixed displacement.

    Spanned by a base displacement and a second point, both on the quadric
    and conjugate to each other, so the whole line lies on the quadric.
    """

    __slots__ = ("base", "direction")

    def __init__(self, base: DualQuaternion, direction: DualQuaternion, tol: float = 1e-8):
        for pt, name in ((base, "base"), (direction, "direction")):
            if abs(pt.study_error()) > tol * max(1.0, float(np.linalg.norm(pt.dual))):
                raise AlgebraError(f"{name} point violates the Study condition")
        scale = max(1.0, float(np.linalg.norm(base.dual)), float(np.linalg.norm(direction.dual)))
        if abs(study_form(base, direction)) > tol * scale:
            raise AlgebraError("spanning points are not conjugate: line leaves the quadric")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "direction", direction)

    @classmethod
    def through_rotations(cls, base: DualQuaternion, axis) -> "StudyLine":
        """Study line of {base o rotation(axis, angle) : angle} (moving axis)."""
        return cls(base, _dq_raw(base, axis_dq(axis)))

    def point_at(self, half_angle: float) -> DualQuaternion:
        c, s = np.cos(half_angle), np.sin(half_angle)
        return DualQuaternion(
            c * self.base.primal + s * self.direction.primal,
            c * self.base.dual + s * self.direction.dual,
        )
