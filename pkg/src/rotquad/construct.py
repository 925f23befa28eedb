"""Construction of rotation quadrilaterals.

A rotation quadrilateral is a quadruple of displacements whose consecutive
relative displacements (indices mod 4) are pure rotations.  The two
construction variants complete partial data on the Study quadric: the
conjugacy condition is linear in the half-angle parametrization of a Study
line, so completion amounts to one arctangent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError
from .kinematics import (
    Displacement,
    DualQuaternion,
    StudyLine,
    _dq_raw,
    act_on_line,
    dq_from_displacement,
    displacement_from_dq,
    is_pure_rotation,
    rotation_dq,
    study_form,
)
from .linegeom import PlueckerLine, TransversalSet, transversals_of_four


def normalize_angle(w: float) -> float:
    """Normalize to (-pi, pi]."""
    r = math.remainder(float(w), 2.0 * math.pi)
    return math.pi if r == -math.pi else r


@dataclass(frozen=True, eq=False)
class RotationQuadrilateral:
    """Four displacements with pure-rotation consecutive relative motions.

    Relative axes live in the moving frame; their images under the
    respective displacements are the fixed axes of the relative rotations.
    Transversals (of the four moving-frame axes) are moving-frame lines.
    """

    displacements: tuple
    study_points: tuple
    rel_axes_moving: tuple
    rel_angles: tuple
    transversals: tuple
    transversal_kind: str

    def relative_dq(self, i: int) -> DualQuaternion:
        """Relative displacement from position i to position i+1 (mod 4)."""
        a = self.study_points[i]
        b = self.study_points[(i + 1) % 4]
        return _dq_raw(b, a.inverse())

    def axis_image_fixed(self, i: int) -> PlueckerLine:
        """Fixed-frame image of the moving relative axis r_{i,i+1}."""
        return act_on_line(self.study_points[i], self.rel_axes_moving[i])

    def scale(self) -> float:
        return max(
            1.0,
            max(float(np.max(np.abs(d.translation))) for d in self.displacements),
        )


def _conjugate_point_on_line(
    base: DualQuaternion, axis: PlueckerLine, target: DualQuaternion
):
    """Point of the Study line {base o rot(axis, .)} conjugate to ``target``.

    Returns (point, rotation_angle).  The conjugacy condition is linear in
    (cos h, sin h) for the half-angle h, hence has a unique projective
    solution unless the whole line is conjugate to the target.
    """
    line = StudyLine.through_rotations(base, axis)
    c1 = study_form(base, target)
    c2 = study_form(line.direction, target)
    scale = max(
        1.0,
        float(np.linalg.norm(base.dual)),
        float(np.linalg.norm(line.direction.dual)),
        float(np.linalg.norm(target.dual)),
    )
    if abs(c1) <= 1e-12 * scale and abs(c2) <= 1e-12 * scale:
        raise DegenerateError(
            "non-generic: completion line entirely conjugate to target "
            "(three-space on Study quadric)"
        )
    h = math.atan2(-c1, c2)
    if h > 0.5 * math.pi:
        h -= math.pi
    elif h <= -0.5 * math.pi:
        h += math.pi
    return line.point_at(h).canonical(), 2.0 * h


def _assemble(
    study_points: list,
    known_axes: dict,
    known_angles: dict,
    tol: float,
    displacements: list | None = None,
) -> RotationQuadrilateral:
    """Fill in axes/angles from the relative rotations and validate."""
    axes: list = [None] * 4
    angles: list = [0.0] * 4
    for i in range(4):
        a = study_points[i]
        b = study_points[(i + 1) % 4]
        tau = _dq_raw(b, a.inverse())
        ok, fixed_axis, angle = is_pure_rotation(tau, tol=max(tol, 1e-9))
        if not ok:
            raise DegenerateError(
                f"relative displacement {i}->{(i + 1) % 4} is not a pure rotation"
            )
        moving = act_on_line(a.inverse(), fixed_axis)
        if i in known_axes:
            stored = known_axes[i]
            if float(np.dot(stored.direction, moving.direction)) < 0:
                angle = -angle
            if not stored.same_line(moving, tol=1e-6):
                raise DegenerateError(
                    f"axis {i} does not match the relative rotation axis"
                )
            axes[i] = stored
            angles[i] = normalize_angle(known_angles.get(i, angle))
        else:
            axes[i] = moving
            angles[i] = normalize_angle(angle)

    # genericity: the four Study points span a 3-space not inside the quadric
    coords = np.array([p.as_array() for p in study_points])
    s = np.linalg.svd(coords, compute_uv=False)
    if s[3] <= 1e-10 * s[0]:
        raise DegenerateError("non-generic: Study points do not span a three-space")
    scale = max(1.0, float(np.max(np.abs(coords))))
    g02 = study_form(study_points[0], study_points[2])
    g13 = study_form(study_points[1], study_points[3])
    if abs(g02) + abs(g13) <= 1e-10 * scale:
        raise DegenerateError("non-generic: three-space on Study quadric")

    try:
        tset = transversals_of_four(axes, tol=max(tol, 1e-9))
    except DegenerateError:
        tset = TransversalSet([], "degenerate")
    if displacements is None:
        displacements = [displacement_from_dq(p) for p in study_points]
    return RotationQuadrilateral(
        displacements=tuple(displacements),
        study_points=tuple(study_points),
        rel_axes_moving=tuple(axes),
        rel_angles=tuple(angles),
        transversals=tuple(tset.lines),
        transversal_kind=tset.kind,
    )


def construct_v1(
    alpha: Displacement,
    index: int,
    axes,
    angles,
    tol: float = 1e-9,
) -> RotationQuadrilateral:
    """Quadrilateral from one displacement, three moving axes, two angles.

    ``axes`` are the moving-frame relative axes r_{i,i+1}, r_{i+1,i+2},
    r_{i+2,i+3} and ``angles`` the first two rotation angles; the last
    rotation angle and the fourth axis follow from the conjugacy closure.
    """
    axes = list(axes)
    angles = [normalize_angle(w) for w in angles]
    if len(axes) != 3 or len(angles) != 2:
        raise DegenerateError("variant 1 needs three axes and two angles")
    for k in range(3):
        for j in range(k + 1, 3):
            if axes[k].same_line(axes[j], tol=1e-9):
                raise DegenerateError("degenerate: two input axes coincide")
    for w in angles:
        if abs(w) <= 1e-9:
            raise DegenerateError("degenerate: zero angle")
    i = index % 4
    pts: list = [None] * 4
    pts[i] = dq_from_displacement(alpha)
    pts[(i + 1) % 4] = _dq_raw(pts[i], rotation_dq(axes[0], angles[0])).canonical()
    pts[(i + 2) % 4] = _dq_raw(
        pts[(i + 1) % 4], rotation_dq(axes[1], angles[1])
    ).canonical()
    completed, w23 = _conjugate_point_on_line(pts[(i + 2) % 4], axes[2], pts[i])
    if abs(w23) <= 1e-9:
        raise DegenerateError("degenerate: completion yields zero angle")
    pts[(i + 3) % 4] = completed
    known_axes = {i: axes[0], (i + 1) % 4: axes[1], (i + 2) % 4: axes[2]}
    known_angles = {i: angles[0], (i + 1) % 4: angles[1], (i + 2) % 4: w23}
    return _assemble(pts, known_axes, known_angles, tol)


def construct_v2(
    alpha_i: Displacement,
    alpha_i2: Displacement,
    axis_first: PlueckerLine,
    axis_third: PlueckerLine,
    index: int = 0,
    tol: float = 1e-9,
) -> RotationQuadrilateral:
    """Quadrilateral from two opposite displacements and two opposite axes.

    ``axis_first`` is the moving axis r_{i,i+1}, ``axis_third`` is
    r_{i+2,i+3}.  The in-between positions are the unique points of the two
    Study lines conjugate to the opposite given vertex.
    """
    i = index % 4
    pts: list = [None] * 4
    pts[i] = dq_from_displacement(alpha_i)
    pts[(i + 2) % 4] = dq_from_displacement(alpha_i2)
    try:
        a_mid, w01 = _conjugate_point_on_line(pts[i], axis_first, pts[(i + 2) % 4])
    except DegenerateError as exc:
        raise DegenerateError(f"non-unique completion (degenerate): {exc}") from exc
    if abs(w01) <= 1e-9:
        raise DegenerateError("degenerate: completion yields identical positions")
    pts[(i + 1) % 4] = a_mid
    completed, w23 = _conjugate_point_on_line(pts[(i + 2) % 4], axis_third, pts[i])
    if abs(w23) <= 1e-9:
        raise DegenerateError("degenerate: completion yields identical positions")
    pts[(i + 3) % 4] = completed
    known_axes = {i: axis_first, (i + 2) % 4: axis_third}
    known_angles = {i: w01, (i + 2) % 4: w23}
    return _assemble(pts, known_axes, known_angles, tol)


def from_displacements(displacements, tol: float = 1e-9) -> RotationQuadrilateral:
    """Validate four displacements as a rotation quadrilateral."""
    disps = list(displacements)
    if len(disps) != 4:
        raise DegenerateError("expected exactly four displacements")
    pts = [dq_from_displacement(d) for d in disps]
    return _assemble(pts, {}, {}, tol, displacements=disps)


def random_rotation_quadrilateral(
    seed: int, scale: float = 1.0, max_retries: int = 64
) -> RotationQuadrilateral:
    """Deterministic random quadrilateral for testing.

    Uses variant 1 with axes through uniform points of a ball of the given
    radius, uniform directions and angles in (0.2, pi - 0.2); redraws on
    degeneracy.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        axes = []
        for _k in range(3):
            d = rng.standard_normal(3)
            while np.linalg.norm(d) < 1e-3:
                d = rng.standard_normal(3)
            u = rng.standard_normal(3)
            while np.linalg.norm(u) < 1e-3:
                u = rng.standard_normal(3)
            point = scale * rng.uniform(0.0, 1.0) ** (1.0 / 3.0) * u / np.linalg.norm(u)
            axes.append(PlueckerLine.from_point_direction(point, d))
        angles = rng.uniform(0.2, math.pi - 0.2, size=2)
        try:
            quad = construct_v1(Displacement.identity(), 0, axes, list(angles))
        except DegenerateError:
            continue
        if min(abs(w) for w in quad.rel_angles) < 0.05:
            continue
        if quad.transversal_kind == "degenerate":
            continue
        return quad
    raise DegenerateError(f"retry budget exhausted for seed {seed}")


def extract_axes_and_angles(quad: RotationQuadrilateral):
    """Recompute (moving axis, angle) for all four relative rotations.

    Axes are pulled back to the moving frame and oriented to match the
    stored axes, which makes the angles comparable with the stored ones.
    """
    out = []
    for i in range(4):
        tau = quad.relative_dq(i)
        ok, fixed_axis, angle = is_pure_rotation(tau, tol=1e-8)
        if not ok or fixed_axis is None:
            raise DegenerateError(f"relative displacement {i} has no rotation axis")
        moving = act_on_line(quad.study_points[i].inverse(), fixed_axis)
        stored = quad.rel_axes_moving[i]
        if float(np.dot(moving.direction, stored.direction)) < 0.0:
            moving = moving.reversed()
            angle = -angle
        out.append((moving, normalize_angle(angle)))
    return out


def check_quadrilateral(quad: RotationQuadrilateral, tol: float = 1e-9):
    """Invariant suite; returns a list of human-readable violations."""
    violations = []
    pts = quad.study_points
    scale = quad.scale()
    for i in range(4):
        p = pts[i]
        if abs(p.primal_norm() - 1.0) > 1e-9:
            violations.append(f"study point {i}: primal norm != 1")
        if abs(p.study_error()) > max(tol, 1e-10) * scale:
            violations.append(f"study point {i}: Study condition violated")
        form = study_form(p, pts[(i + 1) % 4])
        if abs(form) > max(tol, 1e-10) * scale:
            violations.append(
                f"study points {i},{(i + 1) % 4}: not conjugate (form={form:.2e})"
            )
        tau = quad.relative_dq(i)
        if abs(tau.dual[0]) > max(tol, 1e-10) * scale:
            violations.append(
                f"relative displacement {i}: dual scalar residual {abs(tau.dual[0]):.2e}"
            )
        if np.linalg.norm(tau.primal[1:]) <= 1e-10:
            violations.append(f"relative displacement {i}: not a rotation")
        try:
            ok, fixed_axis, _ = is_pure_rotation(tau, tol=max(tol, 1e-9))
        except DegenerateError:
            violations.append(f"relative displacement {i}: identity")
            continue
        if not ok:
            violations.append(f"relative displacement {i}: not a pure rotation")
            continue
        pushed = act_on_line(pts[i], quad.rel_axes_moving[i])
        if not pushed.same_line(fixed_axis, tol=1e-7):
            violations.append(f"axis {i}: pushforward does not match fixed axis")
    coords = np.array([p.as_array() for p in pts])
    s = np.linalg.svd(coords, compute_uv=False)
    if s[3] <= 1e-10 * s[0]:
        violations.append("genericity: Study points span less than a three-space")
    g02 = study_form(pts[0], pts[2])
    g13 = study_form(pts[1], pts[3])
    if abs(g02) + abs(g13) <= 1e-10 * scale:
        violations.append("genericity: spanned three-space lies on the quadric")
    for k, t in enumerate(quad.transversals):
        for i, axis in enumerate(quad.rel_axes_moving):
            r = abs(t.reciprocal(axis))
            if r > max(tol, 1e-9) * scale:
                violations.append(
                    f"transversal {k} misses axis {i} (residual {r:.2e})"
                )
    return violations
