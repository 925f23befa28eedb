"""Oriented line geometry.

Lines are Pluecker pairs (direction, moment) with unit direction and
moment = point x direction, so reversing orientation negates both halves.
Homogeneous points are (w, x, y, z) with w first; points at infinity have
w = 0.  Quadrics are symmetric 4x4 matrices in the same coordinate order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import Poly1
from .config import DEFAULT_TOL
from .errors import AlgebraError, ConsistencyError, DegenerateError


@dataclass(frozen=True, eq=False)
class PlueckerLine:
    """Oriented spatial line (unit direction, moment)."""

    direction: np.ndarray
    moment: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        m = np.asarray(self.moment, dtype=float)
        if d.shape != (3,) or m.shape != (3,):
            raise AlgebraError("direction and moment must be 3-vectors")
        nd = np.linalg.norm(d)
        if nd < 1e-12:
            raise AlgebraError("line direction must be nonzero")
        d = d / nd
        m = m / nd
        m = m - np.dot(m, d) * d  # enforce the Pluecker condition
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "moment", m)

    @classmethod
    def from_points(cls, p, q) -> "PlueckerLine":
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        d = q - p
        if np.linalg.norm(d) < 1e-14 * max(1.0, np.linalg.norm(p)):
            raise AlgebraError("cannot span a line by coincident points")
        d = d / np.linalg.norm(d)
        return cls(d, np.cross(p, d))

    @classmethod
    def from_point_direction(cls, p, d) -> "PlueckerLine":
        d = np.asarray(d, dtype=float)
        nd = np.linalg.norm(d)
        if nd < 1e-14:
            raise AlgebraError("degenerate direction")
        d = d / nd
        return cls(d, np.cross(np.asarray(p, dtype=float), d))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.direction, self.moment])

    def closest_to_origin(self) -> np.ndarray:
        return np.cross(self.direction, self.moment)

    def point_at(self, t: float) -> np.ndarray:
        return self.closest_to_origin() + t * self.direction

    def points(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        return self.closest_to_origin()[None, :] + ts[:, None] * self.direction[None, :]

    def reversed(self) -> "PlueckerLine":
        return PlueckerLine(-self.direction, -self.moment)

    def canonical_oriented(self) -> "PlueckerLine":
        """Flip so the first direction component above tolerance is positive."""
        for c in self.direction:
            if abs(c) > 1e-12:
                return self if c > 0 else self.reversed()
        return self

    def reciprocal(self, other: "PlueckerLine") -> float:
        """Mutual moment; zero iff the lines are coplanar."""
        return float(
            np.dot(self.direction, other.moment) + np.dot(other.direction, self.moment)
        )

    def distance_to_point(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(np.cross(x, self.direction) - self.moment))

    def contains_point(self, x, tol: float = 1e-9) -> bool:
        scale = max(1.0, float(np.linalg.norm(np.asarray(x))))
        return self.distance_to_point(x) <= tol * scale

    def same_line(self, other: "PlueckerLine", tol: float = 1e-9) -> bool:
        """Equal as unoriented point sets."""
        a, b = self.as_array(), other.as_array()
        scale = max(1.0, np.max(np.abs(a)), np.max(np.abs(b)))
        return bool(
            np.max(np.abs(a - b)) <= tol * scale or np.max(np.abs(a + b)) <= tol * scale
        )

    def __repr__(self):
        return f"PlueckerLine({list(self.direction)}, {list(self.moment)})"


def line_through(p, q) -> PlueckerLine:
    return PlueckerLine.from_points(p, q)


def point_h(x) -> np.ndarray:
    """Affine point as homogeneous (1, x)."""
    x = np.asarray(x, dtype=float)
    return np.concatenate([[1.0], x])


def point_affine(h, tol: float = 1e-10) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    if abs(h[0]) <= tol * np.linalg.norm(h[1:]):
        raise DegenerateError("point at infinity has no affine coordinates")
    return h[1:] / h[0]


def meet(l1: PlueckerLine, l2: PlueckerLine, tol: float = DEFAULT_TOL):
    """Common point of two lines, homogeneous (w first), or None when skew.

    Parallel distinct coplanar lines meet at infinity; identical lines raise.
    """
    scale = max(1.0, np.linalg.norm(l1.moment), np.linalg.norm(l2.moment))
    cr = np.cross(l1.direction, l2.direction)
    sin_angle = np.linalg.norm(cr)
    if sin_angle <= 1e-12:
        offset = np.linalg.norm(l1.closest_to_origin() - l2.closest_to_origin())
        if offset <= tol * scale:
            raise DegenerateError("coincident lines")
        return np.concatenate([[0.0], l1.direction])
    gap = l1.reciprocal(l2) / sin_angle
    if abs(gap) > tol * scale:
        return None
    p1 = l1.closest_to_origin()
    p2 = l2.closest_to_origin()
    w = p2 - p1
    c = float(np.dot(l1.direction, l2.direction))
    denom = 1.0 - c * c
    t = (np.dot(w, l1.direction) - c * np.dot(w, l2.direction)) / denom
    s = (c * np.dot(w, l1.direction) - np.dot(w, l2.direction)) / denom
    x = 0.5 * (p1 + t * l1.direction + p2 + s * l2.direction)
    return point_h(x)


@dataclass(frozen=True)
class TransversalSet:
    """Real transversals of four lines plus the reality classification."""

    lines: list
    kind: str  # "real_pair" | "real_double" | "complex_pair"

    @property
    def is_real(self) -> bool:
        return self.kind != "complex_pair"


def _polish_transversal(g: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Gauss-Newton on the 4 incidences + Pluecker + normalization."""
    for _ in range(6):
        d, m = g[:3], g[3:]
        res = np.concatenate([rows @ g, [np.dot(d, m), np.dot(d, d) - 1.0]])
        J = np.zeros((6, 6))
        J[:4] = rows
        J[4, :3] = m
        J[4, 3:] = d
        J[5, :3] = 2.0 * d
        delta, *_ = np.linalg.lstsq(J, -res, rcond=None)
        if not np.all(np.isfinite(delta)):
            break
        g = g + delta
        if np.max(np.abs(delta)) < 1e-15:
            break
    return g


def transversals_of_four(lines, tol: float = DEFAULT_TOL) -> TransversalSet:
    """Lines meeting all four given lines.

    Solves the four linear incidence conditions on the Pluecker 6-vector
    (two-dimensional null space) and restricts to the Pluecker quadric
    (quadratic in the pencil parameter).  Raises when the null space is not
    two-dimensional (e.g. inputs in a regulus or concurrent).
    """
    lines = list(lines)
    if len(lines) != 4:
        raise AlgebraError("expected exactly four lines")
    rows = np.array([np.concatenate([ln.moment, ln.direction]) for ln in lines])
    U, s, Vt = np.linalg.svd(rows)
    if s[3] <= max(tol, 1e-10) * s[0]:
        raise DegenerateError(
            "degenerate line configuration: infinitely many transversals"
        )
    a, b = Vt[4], Vt[5]

    def omega(x, y):
        return float(np.dot(x[:3], y[3:]) + np.dot(y[:3], x[3:]))

    A = 0.5 * omega(a, a)
    B = omega(a, b)
    C = 0.5 * omega(b, b)
    norm = abs(A) + abs(B) + abs(C)
    if norm == 0.0:
        raise DegenerateError("null plane lies on the Pluecker quadric")
    disc = B * B - 4.0 * A * C
    kind = "real_pair"
    if disc < -1e-12 * norm * norm:
        return TransversalSet([], "complex_pair")
    if abs(disc) <= 1e-12 * norm * norm:
        kind = "real_double"
        disc = 0.0
    sq = np.sqrt(disc)
    sols = []
    if abs(A) <= 1e-14 * norm:
        sols.append((1.0, 0.0))  # lambda:mu with mu = 0
        if abs(B) > 1e-14 * norm:
            sols.append((-C, B))
    else:
        qf = -0.5 * (B + np.sign(B if B != 0 else 1.0) * sq)
        sols.append((qf, A))
        if kind != "real_double":
            sols.append((C, qf) if qf != 0.0 else (-B, A))
    out = []
    for lam, mu in sols if kind != "real_double" else sols[:1]:
        g = lam * a + mu * b
        if np.linalg.norm(g[:3]) <= 1e-9 * np.linalg.norm(g):
            continue  # line at infinity: not a spatial transversal
        g = _polish_transversal(g / np.linalg.norm(g), rows)
        ln = PlueckerLine(g[:3], g[3:]).canonical_oriented()
        if not any(ln.same_line(prev) for prev in out):
            out.append(ln)
    if kind == "real_pair" and len(out) == 1:
        kind = "real_double"
    return TransversalSet(out, kind)


@dataclass(frozen=True, eq=False)
class SkewQuad:
    """Four lines in cyclic order with consecutive intersections.

    ``vertices[i]`` is the homogeneous common point of lines i and i+1
    (indices mod 4), so the edge along line i connects vertices[i-1] and
    vertices[i].
    """

    lines: tuple
    vertices: tuple
    planar: bool = field(default=False)

    def vertex_affine(self, i: int) -> np.ndarray:
        return point_affine(self.vertices[i])


def skew_quad_from_lines(lines, tol: float = DEFAULT_TOL) -> SkewQuad:
    lines = tuple(lines)
    if len(lines) != 4:
        raise AlgebraError("expected exactly four lines")
    verts = []
    for i in range(4):
        pt = meet(lines[i], lines[(i + 1) % 4], tol=max(tol, 1e-7))
        if pt is None:
            raise DegenerateError(f"consecutive lines {i} and {(i + 1) % 4} are skew")
        verts.append(pt)
    p0 = lines[0].closest_to_origin()
    rows = [ln.direction for ln in lines]
    rows += [ln.closest_to_origin() - p0 for ln in lines[1:]]
    from .algebra import rank_with_tol

    planar = rank_with_tol(np.array(rows), 1e-8) <= 2
    return SkewQuad(lines=lines, vertices=tuple(verts), planar=bool(planar))


def edge_lengths(sq: SkewQuad):
    """Edge lengths (a, b, c, d) along lines 0, 1, 2, 3 of the vertex cycle.

    Raises when a vertex is at infinity.
    """
    v = [sq.vertex_affine(i) for i in range(4)]
    a = np.linalg.norm(v[0] - v[3])
    b = np.linalg.norm(v[1] - v[0])
    c = np.linalg.norm(v[2] - v[1])
    d = np.linalg.norm(v[2] - v[3])
    return float(a), float(b), float(c), float(d)


def opposite_edge_sums(sq: SkewQuad):
    """Sums of opposite edge lengths (a + c, b + d) of the vertex cycle."""
    a, b, c, d = edge_lengths(sq)
    return a + c, b + d


def revolution_criterion_gap(sq: SkewQuad) -> float:
    """Residual of the signed equal-opposite-edge-sum criterion.

    A skew quadrilateral lies on a quadric of revolution when some signed
    combination +-a +-b +-c +-d with opposite pairs on opposite sides
    vanishes; a + c = b + d is the case where all intersection points fall
    outside the vertex segments, |a - c| = |b - d| the crossed variant.
    """
    a, b, c, d = edge_lengths(sq)
    combos = [
        abs((a + c) - (b + d)),
        abs((a - c) - (b - d)),
        abs((a - c) + (b - d)),
    ]
    return min(combos)


@dataclass(frozen=True, eq=False)
class Quadric:
    """Quadric surface x^T Q x = 0 in homogeneous (w, x, y, z) coordinates.

    Normalized to unit Frobenius norm with canonical sign.
    """

    matrix: np.ndarray

    def __post_init__(self):
        Q = np.asarray(self.matrix, dtype=float)
        if Q.shape != (4, 4):
            raise AlgebraError("quadric matrix must be 4x4")
        Q = 0.5 * (Q + Q.T)
        n = np.linalg.norm(Q)
        if n == 0.0:
            raise AlgebraError("zero quadric")
        Q = Q / n
        flat = Q.ravel()
        pivot = int(np.argmax(np.abs(flat)))
        if flat[pivot] < 0:
            Q = -Q
        Q.flags.writeable = False
        object.__setattr__(self, "matrix", Q)

    @classmethod
    def from_plane_pair(cls, u, v) -> "Quadric":
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return cls(0.5 * (np.outer(u, v) + np.outer(v, u)))

    def evaluate(self, points) -> np.ndarray:
        """Residuals x^T Q x for affine points, with x unit-normalized."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        h = np.hstack([np.ones((len(pts), 1)), pts])
        h = h / np.linalg.norm(h, axis=1, keepdims=True)
        return np.einsum("ij,jk,ik->i", h, self.matrix, h)

    def quadratic_part(self) -> np.ndarray:
        return self.matrix[1:, 1:]

    def center(self) -> np.ndarray:
        M = self.quadratic_part()
        b = self.matrix[1:, 0]
        try:
            return np.linalg.solve(M, -b)
        except np.linalg.LinAlgError as exc:
            raise DegenerateError("quadric has no finite center") from exc

    def contains_line(self, line: PlueckerLine, tol: float = 1e-8) -> bool:
        ts = np.linspace(-2.0, 2.0, 7)
        return bool(np.max(np.abs(self.evaluate(line.points(ts)))) <= tol)


def plane_of_intersecting_lines(l1: PlueckerLine, l2: PlueckerLine, vertex_h) -> np.ndarray:
    """Homogeneous plane (e0, n) spanned by two intersecting lines."""
    n = np.cross(l1.direction, l2.direction)
    if np.linalg.norm(n) <= 1e-10:
        p1 = l1.closest_to_origin()
        p2 = l2.closest_to_origin()
        n = np.cross(l1.direction, p2 - p1)
        if np.linalg.norm(n) <= 1e-12:
            raise DegenerateError("lines are coincident: no unique plane")
    n = n / np.linalg.norm(n)
    v = np.asarray(vertex_h, dtype=float)
    if abs(v[0]) > 1e-10 * np.linalg.norm(v[1:]):
        e0 = -float(np.dot(n, v[1:] / v[0]))
    else:
        # vertex at infinity: plane through both base points
        e0 = -float(np.dot(n, l1.closest_to_origin()))
    return np.concatenate([[e0], n])


def quadric_pencil_through(sq: SkewQuad):
    """The two plane-pair quadrics spanning the pencil through the quad."""
    if sq.planar:
        raise DegenerateError("pencil degenerate: planar quadrilateral")
    l0, l1, l2, l3 = sq.lines
    p01 = plane_of_intersecting_lines(l0, l1, sq.vertices[0])
    p23 = plane_of_intersecting_lines(l2, l3, sq.vertices[2])
    p12 = plane_of_intersecting_lines(l1, l2, sq.vertices[1])
    p30 = plane_of_intersecting_lines(l3, l0, sq.vertices[3])
    d1 = Quadric.from_plane_pair(p01, p23)
    d2 = Quadric.from_plane_pair(p12, p30)
    if np.linalg.norm(d1.matrix - d2.matrix) < 1e-10 or np.linalg.norm(
        d1.matrix + d2.matrix
    ) < 1e-10:
        raise DegenerateError("pencil degenerate: proportional base quadrics")
    return d1, d2


def _cubic_disc(M: np.ndarray) -> float:
    c2 = np.trace(M)
    c1 = (
        M[0, 0] * M[1, 1]
        - M[0, 1] * M[1, 0]
        + M[0, 0] * M[2, 2]
        - M[0, 2] * M[2, 0]
        + M[1, 1] * M[2, 2]
        - M[1, 2] * M[2, 1]
    )
    c0 = np.linalg.det(M)
    return (
        18.0 * c2 * c1 * c0
        - 4.0 * c2**3 * c0
        + c2**2 * c1**2
        - 4.0 * c1**3
        - 27.0 * c0**2
    )


def _disc_poly(MA: np.ndarray, MB: np.ndarray) -> Poly1:
    """Discriminant of the characteristic cubic of t*MA + MB as a degree-6
    polynomial in t, fitted exactly from seven samples."""
    ts = np.cos(np.pi * (np.arange(7) + 0.5) / 7)
    vals = [_cubic_disc(t * MA + MB) for t in ts]
    V = np.vander(ts, 7, increasing=True)
    return Poly1(np.linalg.solve(V, vals))


def _eigen_collision_angles(M1: np.ndarray, M2: np.ndarray, depth: int = 0):
    """Angles theta in [0, pi) where cos(theta) M1 + sin(theta) M2 has a
    repeated eigenvalue.

    The discriminant of a symmetric pencil is nonnegative with even-order
    roots; each affine chart (t M1 + M2 and M1 + s M2) resolves the roots of
    bounded ratio, together covering the projective pencil.  Where the basis
    matrices are nearly proportional the pencil passes close to the zero
    matrix and the discriminant degenerates; that window is re-searched as a
    sub-pencil with the collapse factor split off.
    """
    thetas = []

    def add_ratio(c: float, s: float):
        theta = math.atan2(s, c) % math.pi
        if not any(
            min(abs(theta - a), math.pi - abs(theta - a)) < 1e-9 for a in thetas
        ):
            thetas.append(theta)

    for ratio, first in _chart_roots(M1, M2):
        if first:
            add_ratio(ratio, 1.0)
        else:
            add_ratio(1.0, ratio)

    if depth == 0:
        for A, B, first in ((M1, M2, True), (M2, M1, False)):
            na = np.linalg.norm(A)
            if na == 0.0:
                continue
            t0 = -float(np.tensordot(A, B)) / float(np.tensordot(A, A))
            res = t0 * A + B
            rho = np.linalg.norm(res)
            if rho <= 1e-12 * na or rho > 0.05 * na * max(1.0, abs(t0)):
                continue
            N2 = res / rho
            for sub in _eigen_collision_angles(A, N2, depth=1):
                # member cos(sub) A + sin(sub) res/rho == (t - t0) A + res;
                # polish in the sub-pencil coordinates, where the collision
                # well is not compressed by the near-collapse of the base
                sub = _polish_collision_angle(A, N2, sub)
                cs, sn = math.cos(sub), math.sin(sub)
                if abs(sn) <= 1e-12:
                    continue
                t = t0 + rho * cs / sn
                if first:
                    add_ratio(t, 1.0)
                else:
                    add_ratio(1.0, t)
    return thetas


def _chart_roots(M1: np.ndarray, M2: np.ndarray):
    """Candidate chart parameters where the discriminant may touch zero.

    The discriminant of a symmetric pencil is nonnegative, so real roots are
    even-order minima that rounding splits into close real pairs or complex
    pairs; cluster midpoints recover the touch points far better than the
    individual roots.  Candidates are cheap to validate afterwards, so the
    clustering is deliberately loose.
    """
    from numpy.polynomial import polynomial as npoly

    out = []
    for first in (True, False):
        A, B = (M1, M2) if first else (M2, M1)
        disc = _disc_poly(A, B)
        if disc.is_zero() or disc.degree == 0:
            continue
        raw = npoly.polyroots(disc.coeffs / np.max(np.abs(disc.coeffs)))
        near_real = [r.real for r in raw if abs(r.imag) <= 1e-3 * max(1.0, abs(r.real))]
        near_real.sort()
        clusters: list[list[float]] = []
        for r in near_real:
            if clusters and r - clusters[-1][-1] <= 1e-2 * max(1.0, abs(r)):
                clusters[-1].append(r)
            else:
                clusters.append([r])
        for cl in clusters:
            mean = sum(cl) / len(cl)
            if abs(mean) <= 1.0 + 1e-9:
                out.append((mean, first))
    return out


@dataclass(frozen=True)
class RevolutionResult:
    quadric: Quadric
    axis: PlueckerLine
    pencil_parameter: float
    repeated_eigenvalue: float
    simple_eigenvalue: float


def _polish_collision_angle(M1: np.ndarray, M2: np.ndarray, theta: float) -> float:
    """Sharpen an angle at which two pencil eigenvalues collide.

    The eigenvalue gap is V-shaped at a collision but can sit inside a
    wildly compressed window when the pencil passes near the zero matrix, so
    a shrinking grid search localizes the minimum first and parabola-vertex
    steps on the squared gap finish off the last digits.
    """

    def gap2(th: float) -> float:
        M = math.cos(th) * M1 + math.sin(th) * M2
        n = np.linalg.norm(M)
        if n < 1e-14:
            return np.inf
        w = np.linalg.eigvalsh(M / n)
        return min(w[1] - w[0], w[2] - w[1]) ** 2

    best_t, best_f = theta, gap2(theta)
    width = 1e-3
    for _ in range(14):
        if best_f <= 1e-28:
            return best_t
        ts = best_t + np.linspace(-width, width, 13)
        for t in ts:
            f = gap2(float(t))
            if f < best_f:
                best_t, best_f = float(t), f
        width *= 0.2

    for h in (1e-9, 1e-11):
        for _ in range(4):
            if best_f <= 1e-28:
                return best_t
            f0, f1, f2 = gap2(best_t - h), gap2(best_t), gap2(best_t + h)
            denom = f0 - 2.0 * f1 + f2
            if not np.isfinite(denom) or denom <= 0.0:
                break
            step = -0.5 * h * (f2 - f0) / denom
            if not np.isfinite(step):
                break
            t = best_t + float(np.clip(step, -3.0 * h, 3.0 * h))
            f = gap2(t)
            if f < best_f:
                best_t, best_f = t, f
            else:
                break
    return best_t


def revolution_member(sq: SkewQuad, tol: float = DEFAULT_TOL):
    """Quadric of revolution in the pencil through the quad, or None.

    A member is accepted when its quadratic part has a genuinely repeated
    eigenvalue (two-dimensional eigenspace), the remaining eigenvalue is
    simple and nonzero, and the 4x4 matrix is nondegenerate.  The axis runs
    through the center along the simple eigenvector.  Consistency with the
    equal-opposite-edge-sum criterion is asserted outside a margin band.
    """
    d1, d2 = quadric_pencil_through(sq)
    M1, M2 = d1.matrix[1:, 1:], d2.matrix[1:, 1:]
    matrices: list[tuple[float, np.ndarray]] = []
    for theta in _eigen_collision_angles(M1, M2):
        theta = _polish_collision_angle(M1, M2, theta)
        c, s = math.cos(theta), math.sin(theta)
        lam = c / (c + s) if abs(c + s) > 1e-12 else np.inf
        matrices.append((lam, c * d1.matrix + s * d2.matrix))

    best = None
    for lam, Qm in matrices:
        if np.linalg.norm(Qm) < 1e-12:
            continue
        try:
            quad = Quadric(Qm)
        except AlgebraError:
            continue
        w, V = np.linalg.eigh(quad.quadratic_part())
        ws = np.max(np.abs(w))
        if ws == 0.0:
            continue
        gaps = [w[1] - w[0], w[2] - w[1]]
        pair = int(np.argmin(gaps))
        rep = 0.5 * (w[pair] + w[pair + 1])
        simple_idx = 2 if pair == 0 else 0
        simple = w[simple_idx]
        if gaps[pair] > max(1e-7, 100 * tol) * ws:
            continue
        if abs(simple - rep) <= 10 * max(1e-7, 100 * tol) * ws:
            continue  # near-spherical: no distinguished axis
        if abs(rep) <= 1e-9 * ws or abs(simple) <= 1e-9 * ws:
            continue
        # no determinant cutoff: extremely slender members are legitimate and
        # plane pairs are already excluded by the nonzero repeated eigenvalue
        try:
            center = quad.center()
        except DegenerateError:
            continue
        axis = PlueckerLine.from_point_direction(center, V[:, simple_idx])
        cand = RevolutionResult(
            quadric=quad,
            axis=axis.canonical_oriented(),
            pencil_parameter=float(lam),
            repeated_eigenvalue=float(rep),
            simple_eigenvalue=float(simple),
        )
        if best is None or gaps[pair] < best[0]:
            best = (gaps[pair], cand)

    result = best[1] if best is not None else None

    # cross-check against the equal-sum criterion outside a margin band
    try:
        gap = revolution_criterion_gap(sq)
        scale = max(1.0, *edge_lengths(sq))
    except DegenerateError:
        return result
    if result is not None and gap > 1e3 * max(tol, 1e-9) * scale:
        raise ConsistencyError(
            f"revolution member found but edge-sum criterion residual is {gap:.3g}"
        )
    if result is None and gap <= max(tol, 1e-9) * scale:
        raise ConsistencyError("edge sums agree but no revolution member was found")
    return result
