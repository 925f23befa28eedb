"""The three loci of a rotation quadrilateral and their supporting checks.

* points whose homologous images are concyclic: the four relative axes and
  their two transversals;
* oriented planes whose homologous images touch a common cone of revolution:
  six pencils of parallel planes, found as common roots of a quartic and a
  cubic in the plane normal;
* oriented lines whose homologous images form a properly oriented skew
  quadrilateral on a hyperboloid of revolution: the two transversals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .algebra import (
    HomoPoly3,
    Poly1,
    ProjRoot2,
    _newton_polish_system,
    rank_with_tol,
    solve_homo_system,
)
from .config import DEFAULT_TOL
from .construct import RotationQuadrilateral
from .errors import AlgebraError, ConsistencyError, DegenerateError, RotQuadError
from .kinematics import Displacement, HomPlane
from .linegeom import (
    PlueckerLine,
    Quadric,
    edge_lengths,
    meet,
    opposite_edge_sums,
    point_affine,
    revolution_criterion_gap,
    revolution_member,
    skew_quad_from_lines,
)


def _act_line(d: Displacement, line: PlueckerLine) -> PlueckerLine:
    out = _kernels.line_transform(d.rotation, d.translation, line.direction, line.moment)
    return PlueckerLine(out[:3], out[3:])


# ---------------------------------------------------------------------------
# homologous points, coplanarity, concyclicity


def homologous_points(quad, x) -> np.ndarray:
    """The four images of a moving-frame point, shape (4, 3).

    Accepts a quadrilateral or any sequence of four displacements.
    """
    disps = quad.displacements if isinstance(quad, RotationQuadrilateral) else quad
    x = np.asarray(x, dtype=float)
    return np.array([d.apply(x) for d in disps])


def coplanarity_residual(points) -> float:
    """Normalized determinant of the 4-point coplanarity condition."""
    pts = np.asarray(points, dtype=float)
    det = _kernels.coplanarity_dets(
        pts[0][None], pts[1][None], pts[2][None], pts[3][None]
    )[0]
    scale = max(1.0, float(np.max(np.abs(pts))))
    return float(det) / scale**4


@dataclass(frozen=True, eq=False)
class Circle3D:
    """Circle through homologous points; straight lines are the infinite-
    radius special case (kind == "line")."""

    kind: str
    center: np.ndarray | None = None
    radius: float = 0.0
    plane: HomPlane | None = None
    carrier: PlueckerLine | None = None

    def sample(self, n: int = 20) -> np.ndarray:
        if self.kind == "line":
            ts = np.linspace(-1.5, 1.5, n)
            return self.carrier.points(ts)
        normal = self.plane.normal
        seed = np.eye(3)[int(np.argmin(np.abs(normal)))]
        e1 = np.cross(normal, seed)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(normal, e1)
        th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        return (
            self.center[None, :]
            + self.radius * np.cos(th)[:, None] * e1[None, :]
            + self.radius * np.sin(th)[:, None] * e2[None, :]
        )


@dataclass(frozen=True, eq=False)
class ConcyclicityResult:
    concyclic: bool
    circle: Circle3D | None
    residual: float
    degenerate: bool = False


def _circumcircle(a, b, c):
    """Center and radius of the circle through three points, or None if
    collinear."""
    v1 = b - a
    v2 = c - a
    n = np.cross(v1, v2)
    nn = np.linalg.norm(n)
    if nn <= 1e-12 * max(1.0, np.linalg.norm(v1) * np.linalg.norm(v2)):
        return None
    d11 = float(np.dot(v1, v1))
    d22 = float(np.dot(v2, v2))
    d12 = float(np.dot(v1, v2))
    s, t = np.linalg.solve(
        np.array([[d11, d12], [d12, d22]]), np.array([0.5 * d11, 0.5 * d22])
    )
    center = a + s * v1 + t * v2
    return center, float(np.linalg.norm(center - a)), n / nn


def _bisector_rows(pts: np.ndarray) -> np.ndarray:
    """Rows (|x_{i+1}|^2 - |x_i|^2, 2 (x_{i+1} - x_i)) for pairs 01, 12, 23."""
    sq = np.einsum("ij,ij->i", pts, pts)
    rows = np.empty((3, 4))
    for i in range(3):
        rows[i, 0] = sq[i + 1] - sq[i]
        rows[i, 1:] = 2.0 * (pts[i + 1] - pts[i])
    return rows


def concyclicity_check(points, tol: float = 1e-8) -> ConcyclicityResult:
    """Do four points lie on a circle (or a line)?

    The criterion is the rank of the consecutive bisector-plane matrix
    (<= 2) combined with coplanarity; the returned residual is the relative
    deviation from the best circle/line fit, which grades how badly generic
    points fail.  Coincident points are degenerate and count as concyclic.
    """
    pts = np.asarray(points, dtype=float).reshape(4, 3)
    scale = max(1.0, float(np.max(np.abs(pts))))

    unique: list[np.ndarray] = []
    for p in pts:
        if not any(np.linalg.norm(p - u) <= 1e-9 * scale for u in unique):
            unique.append(p)

    if len(unique) <= 2:
        carrier = None
        if len(unique) == 2:
            carrier = PlueckerLine.from_points(unique[0], unique[1])
            return ConcyclicityResult(
                True, Circle3D(kind="line", carrier=carrier), 0.0, degenerate=True
            )
        return ConcyclicityResult(True, None, 0.0, degenerate=True)

    # best-fit residual, graded: uses the widest triple's circumcircle
    best = None
    ids = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    for i, j, k in ids:
        cc = _circumcircle(pts[i], pts[j], pts[k])
        if cc is None:
            continue
        center, radius, normal = cc
        area = np.linalg.norm(np.cross(pts[j] - pts[i], pts[k] - pts[i]))
        if best is None or area > best[0]:
            best = (area, center, radius, normal)

    if best is None:
        # all points collinear
        carrier = PlueckerLine.from_points(unique[0], unique[-1])
        residual = max(carrier.distance_to_point(p) for p in pts) / scale
        circle = Circle3D(kind="line", carrier=carrier)
        return ConcyclicityResult(residual <= tol, circle, float(residual))

    _, center, radius, normal = best
    in_plane = np.abs((pts - center) @ normal) / scale
    radial = np.abs(np.linalg.norm(pts - center, axis=1) - radius) / scale
    residual = float(max(in_plane.max(), radial.max()))

    if len(unique) == 3:
        concyclic = True  # three distinct points always lie on a circle
    else:
        rank = rank_with_tol(_bisector_rows(pts), max(tol, 1e-10))
        coplanar = abs(coplanarity_residual(pts)) <= max(tol, 1e-10)
        concyclic = rank <= 2 and coplanar
    plane = HomPlane.from_point_normal(center, normal)
    circle = Circle3D(kind="circle", center=center, radius=radius, plane=plane)
    return ConcyclicityResult(bool(concyclic), circle, residual, len(unique) < 4)


# ---------------------------------------------------------------------------
# the line-parametrized oracle


@dataclass(frozen=True, eq=False)
class LineConditionReport:
    """Polynomial fits along a parametrized line of homologous images.

    The coplanarity determinant is cubic in the parameter, the circularity
    condition (given coplanarity) at most quadratic, so four respectively
    three zeros force identical vanishing.  Coefficients are normalized by
    the sampled data scale.
    """

    coplanarity_coeffs: np.ndarray
    coplanarity_zero: bool
    coplanarity_root_count: int
    four_roots_force_vanishing: bool
    circularity_coeffs: np.ndarray | None
    circularity_zero: bool | None
    three_roots_force_vanishing: bool | None


def line_condition_fit(displacements, line: PlueckerLine, tol: float = 1e-9, samples: int = 11):
    """Fit the coplanarity cubic and circularity quadratic along a line."""
    if isinstance(displacements, RotationQuadrilateral):
        displacements = displacements.displacements
    disps = list(displacements)
    ts = np.cos(np.pi * (np.arange(samples) + 0.5) / samples) * 1.5
    base = line.points(ts)  # (m, 3)
    imgs = np.array([d.apply(base) for d in disps])  # (4, m, 3)
    scale = max(1.0, float(np.max(np.abs(imgs))))

    dets = _kernels.coplanarity_dets(imgs[0], imgs[1], imgs[2], imgs[3])
    cop = Poly1.fit(ts, dets / scale**3, 3)
    cop_coeffs = np.zeros(4)
    cop_coeffs[: len(cop.coeffs)] = cop.coeffs
    cop_zero = bool(np.max(np.abs(cop_coeffs)) <= max(tol, 1e-9))
    near_zero = int(np.sum(np.abs(dets / scale**3) <= max(tol, 1e-9)))
    cop_roots = samples if cop_zero else min(near_zero, 3)
    four_force = cop_zero or near_zero < 4

    if not cop_zero:
        return LineConditionReport(cop_coeffs, cop_zero, cop_roots, four_force, None, None, None)

    svals = np.empty(len(ts))
    for s in range(len(ts)):
        diffs = np.stack(
            [imgs[i + 1, s] - imgs[i, s] for i in range(3)], axis=1
        )  # columns
        _, _, Vt = np.linalg.svd(diffs)
        v = Vt[-1]
        pivot = int(np.argmax(np.abs(v)))
        if v[pivot] < 0:
            v = -v
        csq = np.array(
            [
                np.dot(imgs[i + 1, s], imgs[i + 1, s]) - np.dot(imgs[i, s], imgs[i, s])
                for i in range(3)
            ]
        )
        svals[s] = float(np.dot(v, csq)) / scale**2
    circ = Poly1.fit(ts, svals, 2)
    circ_coeffs = np.zeros(3)
    circ_coeffs[: len(circ.coeffs)] = circ.coeffs
    circ_zero = bool(np.max(np.abs(circ_coeffs)) <= max(tol, 1e-9))
    near_zero_c = int(np.sum(np.abs(svals) <= max(tol, 1e-9)))
    three_force = circ_zero or near_zero_c < 3
    return LineConditionReport(
        cop_coeffs, cop_zero, cop_roots, four_force, circ_coeffs, circ_zero, three_force
    )


# ---------------------------------------------------------------------------
# point locus


@dataclass(frozen=True, eq=False)
class PointLocus:
    axis_lines: tuple
    transversal_lines: tuple
    reality: str

    @property
    def lines(self):
        return tuple(self.axis_lines) + tuple(self.transversal_lines)


def point_locus(quad: RotationQuadrilateral, tol: float = 1e-8) -> PointLocus:
    """The locus of points with concyclic homologous images.

    Returns the four moving relative axes plus their real transversals and
    self-verifies concyclicity at 20 samples per line.
    """
    locus = PointLocus(
        axis_lines=tuple(quad.rel_axes_moving),
        transversal_lines=tuple(quad.transversals),
        reality=quad.transversal_kind,
    )
    scale = quad.scale()
    ts = np.linspace(-1.5, 1.5, 20) * scale
    for ln in locus.lines:
        for x in ln.points(ts):
            res = concyclicity_check(homologous_points(quad, x), tol=max(tol, 1e-8))
            if not res.concyclic:
                raise ConsistencyError(
                    f"locus self-check failed at {x} (residual {res.residual:.2e})"
                )
    return locus


# ---------------------------------------------------------------------------
# trajectory hyperboloid


@dataclass(frozen=True, eq=False)
class TrajectoryHyperboloid:
    quadric: Quadric
    axis: PlueckerLine
    edge_sums: tuple
    edge_lengths: tuple
    configuration: str  # "convex": a+c = b+d holds literally; else "crossed"
    criterion_gap: float
    image_lines: tuple
    max_line_residual: float
    max_circle_residual: float
    max_center_axis_distance: float


def _transversal_by_name(quad: RotationQuadrilateral, which) -> PlueckerLine:
    names = {"u": 0, "v": 1, 0: 0, 1: 1}
    if which not in names:
        raise RotQuadError("transversal selector must be 'u' or 'v'")
    idx = names[which]
    if quad.transversal_kind == "complex_pair" or idx >= len(quad.transversals):
        raise DegenerateError(f"transversal {which!r} is not real")
    return quad.transversals[idx]


def trajectory_hyperboloid(
    quad: RotationQuadrilateral, which="u", tol: float = 1e-8
) -> TrajectoryHyperboloid:
    """Hyperboloid of revolution carrying all circles of a transversal.

    Builds the skew quadrilateral of the four homologous images of the
    chosen transversal, checks the equal-opposite-edge-sum bookkeeping,
    extracts the revolution member of the quadric pencil, and verifies that
    sampled trajectory circles lie on it and are centered on its axis.
    """
    u = _transversal_by_name(quad, which)
    images = tuple(_act_line(d, u) for d in quad.displacements)
    sq = skew_quad_from_lines(images, tol=max(tol, 1e-8))
    sums = opposite_edge_sums(sq)
    lengths = edge_lengths(sq)
    gap = revolution_criterion_gap(sq)
    scale = quad.scale()
    sum_scale = max(scale, sums[0], sums[1])
    if gap > 1e-9 * sum_scale:
        raise ConsistencyError(
            f"edge-sum criterion fails: a,b,c,d = {lengths}, residual {gap:.3g}"
        )
    configuration = "convex" if abs(sums[0] - sums[1]) <= 1e-9 * sum_scale else "crossed"
    rev = revolution_member(sq, tol=max(tol * 1e-2, 1e-10))
    if rev is None:
        raise ConsistencyError("no quadric of revolution through the image quad")

    line_res = 0.0
    for ln in images:
        pts = ln.points(np.linspace(-2.0, 2.0, 9) * scale)
        line_res = max(line_res, float(np.max(np.abs(rev.quadric.evaluate(pts)))))

    circle_res = 0.0
    centers = []
    ts = np.linspace(-1.2, 1.2, 10) * scale
    for x in u.points(ts):
        homol = homologous_points(quad, x)
        circle_res = max(circle_res, float(np.max(np.abs(rev.quadric.evaluate(homol)))))
        res = concyclicity_check(homol, tol=max(tol, 1e-8))
        if res.circle is None or res.circle.kind != "circle":
            continue
        circle_res = max(
            circle_res,
            float(np.max(np.abs(rev.quadric.evaluate(res.circle.sample(20))))),
        )
        centers.append(res.circle.center)
    if line_res > max(tol, 1e-8) or circle_res > max(tol, 1e-8):
        raise ConsistencyError(
            f"trajectory circles leave the quadric (residual {max(line_res, circle_res):.2e})"
        )

    # Anchor the axis at the circle centers: for nearly parabolic members the
    # quadric's own center is an extreme 1/eigenvalue amplification away,
    # while the rotation axis it anchors passes right through the centers.
    axis = rev.axis
    center_dist = 0.0
    if centers:
        axis = PlueckerLine.from_point_direction(
            np.mean(centers, axis=0), rev.axis.direction
        ).canonical_oriented()
        center_dist = max(axis.distance_to_point(c) for c in centers)
    return TrajectoryHyperboloid(
        quadric=rev.quadric,
        axis=axis,
        edge_sums=(float(sums[0]), float(sums[1])),
        edge_lengths=lengths,
        configuration=configuration,
        criterion_gap=float(gap),
        image_lines=images,
        max_line_residual=line_res,
        max_circle_residual=circle_res,
        max_center_axis_distance=float(center_dist),
    )


# ---------------------------------------------------------------------------
# plane locus


def _coplanarity_cubics(rotations):
    """The two coplanarity determinants of the rotated direction vectors."""
    cols = [[HomoPoly3.linear_form(R[j]) for j in range(3)] for R in rotations]
    c1 = _poly_det3([[cols[i][j] for i in (0, 1, 2)] for j in range(3)])
    c2 = _poly_det3([[cols[i][j] for i in (0, 1, 3)] for j in range(3)])
    return c1.scaled_to_unit(), c2.scaled_to_unit()


def _angular_sine(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    inner = min(abs(np.vdot(a, b)), 1.0)
    return math.sqrt(max(0.0, 1.0 - inner * inner))


def _sharpen_root(Fn, Gn, root: ProjRoot2, predictions, coplanarity_sys, taken) -> ProjRoot2:
    """Re-seed a poorly converged real root of {F, G}.

    Near-tangential intersections stall plain Newton between two close
    roots; re-seeding from the theoretically predicted direction or from the
    root's position in the better-conditioned coplanarity system resolves
    them without loosening any residual gate.  Positions already occupied by
    other roots are not eligible.
    """
    res = max(abs(complex(Fn(root.coords))), abs(complex(Gn(root.coords))))
    if not root.is_real or res <= 1e-10:
        return root
    seeds = []
    nd = root.real_vector()
    for _name, _idx, direction in predictions:
        if _angular_sine(nd, direction) <= 3e-3:
            seeds.append(np.asarray(direction, dtype=complex))
    if not coplanarity_sys[0].is_zero() and not coplanarity_sys[1].is_zero():
        lp = _newton_polish_system(coplanarity_sys[0], coplanarity_sys[1], nd.astype(complex))
        seeds.append(lp)
    best = None
    for seed in seeds:
        cand = _newton_polish_system(Fn, Gn, seed)
        cand = cand / np.linalg.norm(cand)
        r = max(abs(complex(Fn(cand))), abs(complex(Gn(cand))))
        dist = _angular_sine(cand, root.coords)
        if r > 1e-12 or dist > 3e-3:
            continue
        if any(_angular_sine(cand, other) <= 1e-7 for other in taken):
            continue
        if best is None or dist < best[0]:
            best = (dist, cand)
    if best is not None:
        return ProjRoot2.make(best[1], root.multiplicity)
    return root


def _poly_det3(M) -> HomoPoly3:
    def m(i, j):
        return M[i][j]

    return (
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
        - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    )


def _poly_det4(M) -> HomoPoly3:
    total = None
    for r in range(4):
        minor = [[M[i][j] for j in range(1, 4)] for i in range(4) if i != r]
        term = M[r][0] * _poly_det3(minor)
        if r % 2 == 1:
            term = -term
        total = term if total is None else total + term
    return total


def plane_locus_polynomials(quad: RotationQuadrilateral):
    """The quartic F and cubic G in the plane normal coordinates.

    The common-point condition on the four homologous planes is linear in
    the plane offset e0 and splits as F + e0 G; G is the condition that the
    four rotated unit normals are concyclic on the sphere.  Both are
    verified against a numeric determinant and the linearity in e0 is
    checked to machine precision.
    """
    rot = [d.rotation for d in quad.displacements]
    tra = [d.translation for d in quad.displacements]
    ncols = [[HomoPoly3.linear_form(rot[i][j]) for j in range(3)] for i in range(4)]
    wcol = [HomoPoly3.linear_form(rot[i].T @ tra[i]) for i in range(4)]
    ones = [HomoPoly3.constant(1.0) for _ in range(4)]
    G = _poly_det4([[ones[i], ncols[i][0], ncols[i][1], ncols[i][2]] for i in range(4)])
    F = -_poly_det4([[wcol[i], ncols[i][0], ncols[i][1], ncols[i][2]] for i in range(4)])

    # independent numeric check of the split E = F + e0 G and linearity in e0
    rng = np.random.default_rng(2024)
    for _ in range(4):
        n = rng.standard_normal(3)
        e0s = np.linspace(-2.0, 2.0, 5)
        evals = []
        for e0 in e0s:
            rows = []
            for i in range(4):
                ni = rot[i] @ n
                rows.append(np.concatenate([[e0 - np.dot(ni, tra[i])], ni]))
            evals.append(np.linalg.det(np.array(rows)))
        evals = np.array(evals)
        fit = np.polynomial.polynomial.polyfit(e0s, evals, 4)
        scale = max(1.0, float(np.max(np.abs(fit))))
        if np.max(np.abs(fit[2:])) > 1e-12 * scale:
            raise ConsistencyError("common-point condition is not linear in e0")
        if abs(fit[0] - F(n)) > 1e-9 * scale or abs(fit[1] - G(n)) > 1e-9 * scale:
            raise ConsistencyError("polynomial split disagrees with numeric determinant")
    return F, G


@dataclass(frozen=True, eq=False)
class PlaneLocusClass:
    """One projective root of {F = 0, G = 0} with its interpretation."""

    root: ProjRoot2
    classification: str  # axis-orthogonal | transversal-orthogonal | spurious
    #                      | unmatched | indeterminate | complex
    matched_index: int | None
    normal_direction: np.ndarray | None
    residuals: tuple
    multiplicity: int


def plane_locus(quad: RotationQuadrilateral, tol: float = DEFAULT_TOL):
    """Solve the plane locus system and classify all twelve roots.

    Real roots whose rotated normals span only a plane are spurious; the
    remaining real roots are matched against the four axis directions and
    the transversal directions.
    """
    F, G = plane_locus_polynomials(quad)
    if F.is_zero(1e-12, rel_to=1.0) or G.is_zero(1e-12, rel_to=1.0):
        raise DegenerateError("degenerate quadrilateral: plane system vanishes")
    try:
        roots = solve_homo_system(F.scaled_to_unit(), G.scaled_to_unit(), tol=max(tol, 1e-8))
    except AlgebraError as exc:
        raise DegenerateError(f"non-generic quadrilateral: {exc}") from exc

    rot = [d.rotation for d in quad.displacements]
    predictions = [("axis-orthogonal", i, quad.rel_axes_moving[i].direction) for i in range(4)]
    predictions += [
        ("transversal-orthogonal", 4 + k, t.direction)
        for k, t in enumerate(quad.transversals)
    ]
    Fn = F.scaled_to_unit()
    Gn = G.scaled_to_unit()
    coplanarity_sys = _coplanarity_cubics(rot)

    positions = [r.coords for r in roots]
    sharpened = []
    for i, root in enumerate(roots):
        taken = positions[:i] + positions[i + 1 :]
        root = _sharpen_root(Fn, Gn, root, predictions, coplanarity_sys, taken)
        positions[i] = root.coords
        sharpened.append(root)

    out = []
    for root in sharpened:
        res = (abs(complex(Fn(root.coords))), abs(complex(Gn(root.coords))))
        imag = float(np.max(np.abs(root.coords.imag)))
        if not root.is_real:
            kind = "indeterminate" if imag <= 10 * 1e-7 else "complex"
            out.append(
                PlaneLocusClass(root, kind, None, None, res, root.multiplicity)
            )
            continue
        n = root.real_vector()
        normals = np.array([R @ n for R in rot])
        if rank_with_tol(normals, max(tol, 1e-8)) <= 2:
            out.append(
                PlaneLocusClass(root, "spurious", None, n, res, root.multiplicity)
            )
            continue
        kind = "unmatched"
        matched = None
        for name, idx, direction in predictions:
            sine = np.linalg.norm(np.cross(n, direction))
            if sine <= 1e-7:
                kind, matched = name, idx
                break
        out.append(PlaneLocusClass(root, kind, matched, n, res, root.multiplicity))
    return out


def reconstruct_tangent_cone(quad: RotationQuadrilateral, normal, e0: float = 0.0):
    """Apex and axis of the cone touched by the four homologous planes.

    For a valid locus class the four transformed plane vectors drop rank;
    the apex spans their kernel and the unit normals are concyclic on the
    sphere, the circle axis giving the cone axis.  Returns (apex, axis
    direction, residual of the constant-angle check).
    """
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    rows = []
    for d in quad.displacements:
        ni = d.rotation @ n
        rows.append(np.concatenate([[e0 - np.dot(ni, d.translation)], ni]))
    rows = np.array(rows)
    _, s, Vt = np.linalg.svd(rows)
    if s[-1] > 1e-6 * s[0]:
        raise ConsistencyError("homologous planes have no common point")
    apex_h = Vt[-1]
    normals = np.array([d.rotation @ n for d in quad.displacements])
    cc = concyclicity_check(normals, tol=1e-7)
    if not cc.concyclic:
        raise ConsistencyError("rotated normals are not concyclic")
    if cc.circle is not None and cc.circle.kind == "circle":
        axis_dir = cc.circle.plane.normal
    else:
        axis_dir = None
    dots = normals @ axis_dir if axis_dir is not None else np.zeros(4)
    residual = float(np.max(np.abs(dots - dots.mean()))) if axis_dir is not None else np.inf
    return apex_h, axis_dir, residual


def spherical_coplanar_directions(rotations, tol: float = DEFAULT_TOL):
    """Directions through the origin with coplanar homologous images.

    Solves the two cubic determinant conditions (nine projective roots);
    roots where the four rotated vectors really span only a plane are valid,
    the rest are spurious fixed directions of a relative rotation.
    Returns (valid, spurious) as lists of projective roots.
    """
    rots = [np.asarray(R, dtype=float) for R in rotations]
    if len(rots) != 4:
        raise AlgebraError("expected four rotations")
    c1, c2 = _coplanarity_cubics(rots)
    if c1.is_zero(1e-12, rel_to=1.0) or c2.is_zero(1e-12, rel_to=1.0):
        raise DegenerateError("positive-dimensional: coincident rotations")
    try:
        roots = solve_homo_system(c1, c2, tol=max(tol, 1e-8))
    except AlgebraError as exc:
        raise DegenerateError(f"positive-dimensional: {exc}") from exc
    valid, spurious = [], []
    for root in roots:
        imgs = np.array([R.astype(complex) @ root.coords for R in rots]).T  # 3 x 4
        s = np.linalg.svd(imgs, compute_uv=False)
        if s[2] <= max(tol, 1e-7) * s[0]:
            valid.append(root)
        else:
            spurious.append(root)
    return valid, spurious


def match_direction_to_relative_rotation(coords, rotations, tol: float = 1e-7):
    """Relative-rotation pair (i, j) whose fixed direction matches ``coords``.

    A moving direction x with R_i x proportional to R_j x is the pullback
    R_i^T e of an eigenvector e of R_j R_i^T; all ordered pairs are checked
    and the first match (by complex projective proximity) is returned.
    """
    v = np.asarray(coords, dtype=complex)
    v = v / np.linalg.norm(v)
    rots = [np.asarray(R, dtype=float) for R in rotations]
    for i in range(4):
        for j in range(4):
            if i == j:
                continue
            rel = rots[j] @ rots[i].T
            w, vecs = np.linalg.eig(rel)
            for k in range(3):
                e = rots[i].T @ vecs[:, k]
                e = e / np.linalg.norm(e)
                inner = np.vdot(e, v)
                rej = np.linalg.norm(v - inner * e)
                if rej <= tol:
                    return (i, j)
    return None


# ---------------------------------------------------------------------------
# line locus


@dataclass(frozen=True, eq=False)
class LineQuadReport:
    line: PlueckerLine
    images: tuple
    vertices: tuple = ()
    orientation_ok: bool = False
    revolution_quadric: Quadric | None = None
    revolution_axis: PlueckerLine | None = None
    verdict: bool = False
    reason: str = ""


def line_quadrilateral_check(
    quad: RotationQuadrilateral, line: PlueckerLine, tol: float = DEFAULT_TOL
) -> LineQuadReport:
    """Test whether a line's homologous images form a properly oriented skew
    quadrilateral on a hyperboloid of revolution.

    The orientation rule: walking around the image quadrilateral follows the
    lines' orientations on alternating edges only.  Failures return
    verdict=False with a reason instead of raising.
    """
    images = tuple(_act_line(d, line) for d in quad.displacements)
    verts = []
    for i in range(4):
        j = (i + 1) % 4
        try:
            pt = meet(images[i], images[j], tol=max(tol, 1e-7))
        except DegenerateError:
            return LineQuadReport(line, images, reason=f"images {i},{j} coincident")
        if pt is None:
            return LineQuadReport(line, images, reason=f"images {i},{j} skew")
        verts.append(pt)
    try:
        affine = [point_affine(v) for v in verts]
    except DegenerateError:
        return LineQuadReport(
            line, images, tuple(verts), reason="image vertex at infinity"
        )

    scale = max(1.0, max(float(np.max(np.abs(a))) for a in affine))
    signs = []
    for i in range(4):
        edge = affine[i] - affine[(i - 1) % 4]
        if np.linalg.norm(edge) <= 1e-9 * scale:
            return LineQuadReport(
                line, images, tuple(verts), reason=f"degenerate edge {i}"
            )
        signs.append(1.0 if float(np.dot(edge, images[i].direction)) > 0 else -1.0)
    orientation_ok = all(signs[i] == -signs[(i + 1) % 4] for i in range(4))

    try:
        sq = skew_quad_from_lines(images, tol=max(tol, 1e-7))
        rev = revolution_member(sq, tol=max(tol, 1e-9))
    except (DegenerateError, ConsistencyError) as exc:
        return LineQuadReport(
            line, images, tuple(verts), orientation_ok, reason=f"revolution check: {exc}"
        )
    if rev is None:
        return LineQuadReport(
            line, images, tuple(verts), orientation_ok,
            reason="no quadric of revolution in the pencil",
        )
    verdict = orientation_ok
    reason = "" if verdict else "orientation does not alternate"
    return LineQuadReport(
        line,
        images,
        tuple(verts),
        orientation_ok,
        rev.quadric,
        rev.axis,
        verdict,
        reason,
    )


def line_locus(quad: RotationQuadrilateral, tol: float = DEFAULT_TOL):
    """Oriented lines whose images form the required configuration.

    Any such line must meet all four relative axes, so the candidates are
    exactly the transversals; each is checked in full.
    """
    out = []
    for t in quad.transversals:
        if line_quadrilateral_check(quad, t, tol=tol).verdict:
            out.append(t)
    return out
