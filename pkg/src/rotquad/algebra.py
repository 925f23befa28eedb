"""Numerical algebra substrate.

Univariate polynomials with multiplicity-aware real root finding, homogeneous
trivariate polynomials, Sylvester resultants, solving pairs of homogeneous
equations in three unknowns, and small-matrix rank/eigen helpers.  Everything
is plain floating point; all tolerances are relative to input scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import _kernels
from .config import DEFAULT_TOL, REAL_ROOT_IMAG_TOL, ROOT_MERGE_TOL
from .errors import AlgebraError, ConsistencyError

# Internal threshold of the Taylor-dominance test that accepts a cluster of
# near numeric roots as one multiple root.  Set at the backward-error scale:
# a true m-fold root leaves lower Taylor terms of the size of the coefficient
# noise, while distinct roots a small distance apart leave terms many orders
# larger.
_TAYLOR_TAU = 1e-11

# Fixed change of coordinates used by solve_homo_system (deterministic).
_RNG_SEED_COORDS = 0x5EED


# ---------------------------------------------------------------------------
# univariate polynomials


class Poly1:
    """Univariate real polynomial, coefficients in ascending degree.

    Trailing coefficients below ``trim_tol * max|c|`` are removed on
    construction so ``degree`` reflects the numerically supported degree.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, trim_tol: float = 1e-13):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if c.ndim != 1:
            raise AlgebraError("coefficients must be one-dimensional")
        scale = np.max(np.abs(c)) if c.size else 0.0
        if scale > 0.0:
            keep = np.nonzero(np.abs(c) > trim_tol * scale)[0]
            c = c[: keep[-1] + 1] if keep.size else c[:1] * 0.0
        else:
            c = np.zeros(1)
        self.coeffs = c

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0.0

    def __call__(self, t):
        return npoly.polyval(t, self.coeffs)

    def derivative(self) -> "Poly1":
        if self.degree == 0:
            return Poly1([0.0])
        return Poly1(npoly.polyder(self.coeffs))

    @classmethod
    def fit(cls, ts, values, degree: int) -> "Poly1":
        """Least-squares fit of given degree; exact when len(ts) == degree+1."""
        V = npoly.polyvander(np.asarray(ts, dtype=float), degree)
        sol, *_ = np.linalg.lstsq(V, np.asarray(values, dtype=float), rcond=None)
        return cls(sol)

    def __repr__(self):
        return f"Poly1({list(self.coeffs)})"


def _taylor_coeffs(coeffs: np.ndarray, center: complex) -> np.ndarray:
    """Coefficients b_j of p(center + h) = sum b_j h^j."""
    b = np.array(coeffs, dtype=complex)
    n = len(b)
    # synthetic division shift, O(n^2)
    for j in range(n - 1):
        for k in range(n - 2, j - 1, -1):
            b[k] += center * b[k + 1]
    return b


def _cluster_is_multiple(coeffs: np.ndarray, center: complex, radius: float, k: int) -> bool:
    """Accept a k-point cluster as one k-fold root by Taylor dominance.

    The polynomial restricted to the disk of the cluster must look like
    c (z - center)^k: all lower Taylor terms at the cluster radius must be
    negligible against the polynomial's natural scale at the center.
    """
    b = _taylor_coeffs(coeffs, center)
    scale_r = max(1.0, abs(center))
    radius = max(radius, 1e-12 * scale_r)
    local = max(abs(b[j]) * scale_r**j for j in range(len(b)))
    if local == 0.0:
        return True
    worst = max(abs(b[j]) * radius**j for j in range(k))
    return worst <= _TAYLOR_TAU * local


def _cluster_complex_roots(roots: np.ndarray, coeffs: np.ndarray):
    """Group numeric roots into (center, multiplicity, radius) clusters.

    First merges within the unconditional relative distance ROOT_MERGE_TOL,
    then greedily merges nearby clusters that pass the Taylor-dominance test
    (needed because an m-fold root scatters numeric roots over a radius of
    roughly eps^(1/m)).
    """
    items = [(complex(r), 1, 0.0) for r in np.sort_complex(roots)]

    def dist(a, b):
        return abs(a - b)

    def merge(i, j):
        ci, mi, ri = items[i]
        cj, mj, rj = items[j]
        center = (ci * mi + cj * mj) / (mi + mj)
        radius = max(dist(center, ci) + ri, dist(center, cj) + rj)
        items[i] = (center, mi + mj, radius)
        del items[j]

    # unconditional single-linkage pass
    merged = True
    while merged:
        merged = False
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                ci, mi, _ = items[i]
                cj, mj, _ = items[j]
                if dist(ci, cj) <= ROOT_MERGE_TOL * max(1.0, abs(ci), abs(cj)):
                    merge(i, j)
                    merged = True
                    break
            if merged:
                break

    # Taylor-dominance upgrades for genuine multiple roots
    merged = True
    while merged:
        merged = False
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                ci, mi, ri = items[i]
                cj, mj, rj = items[j]
                scale_r = max(1.0, abs(ci), abs(cj))
                if dist(ci, cj) > 0.1 * scale_r:
                    continue
                center = (ci * mi + cj * mj) / (mi + mj)
                radius = max(dist(center, ci) + ri, dist(center, cj) + rj)
                if _cluster_is_multiple(coeffs, center, radius, mi + mj):
                    merge(i, j)
                    merged = True
                    break
            if merged:
                break
    return items


def _newton_polish_real(coeffs: np.ndarray, r: float, iters: int = 4) -> float:
    dcoeffs = npoly.polyder(coeffs)
    best = r
    best_val = abs(npoly.polyval(r, coeffs))
    for _ in range(iters):
        d = npoly.polyval(r, dcoeffs)
        if d == 0.0:
            break
        r = r - npoly.polyval(r, coeffs) / d
        val = abs(npoly.polyval(r, coeffs))
        if val < best_val:
            best, best_val = r, val
        else:
            break
    return best


def roots_real(p: Poly1, tol: float = DEFAULT_TOL):
    """All real roots of ``p`` with multiplicities, ascending.

    Roots come from companion-matrix eigenvalues, then simple roots are
    Newton-polished and clusters are merged into multiple roots.  Raises if
    ``p`` is identically zero.
    """
    if p.is_zero():
        raise AlgebraError("identically zero polynomial has no root set")
    if p.degree == 0:
        return []
    coeffs = p.coeffs / np.max(np.abs(p.coeffs))
    roots = npoly.polyroots(coeffs)
    clusters = _cluster_complex_roots(roots, coeffs)
    out = []
    for center, mult, _radius in clusters:
        if abs(center.imag) > REAL_ROOT_IMAG_TOL * max(1.0, abs(center.real)):
            continue
        r = center.real
        if mult == 1:
            r = _newton_polish_real(coeffs, r)
        out.append((float(r), int(mult)))
    out.sort(key=lambda rm: rm[0])
    # contract: residual small relative to coefficient scale
    for r, _ in out:
        scale = max(1.0, abs(r)) ** p.degree
        if abs(p(r)) > max(tol, 1e-7) * np.max(np.abs(p.coeffs)) * scale:
            raise ConsistencyError(f"root {r} fails residual check")
    return out


# ---------------------------------------------------------------------------
# homogeneous trivariate polynomials


class HomoPoly3:
    """Homogeneous polynomial in three variables.

    ``coeffs`` maps exponent triples (i, j, k) with i+j+k == degree to real
    coefficients.  Instances are immutable values; arithmetic returns new
    objects.  Also used for binary forms by keeping one exponent zero.
    """

    __slots__ = ("degree", "coeffs", "_arrays")

    def __init__(self, degree: int, coeffs: dict):
        if degree < 0:
            raise AlgebraError("degree must be nonnegative")
        clean = {}
        for exp, c in coeffs.items():
            i, j, k = exp
            if i < 0 or j < 0 or k < 0 or i + j + k != degree:
                raise AlgebraError(f"exponent {exp} does not sum to degree {degree}")
            c = float(c)
            if c != 0.0:
                clean[(int(i), int(j), int(k))] = clean.get((i, j, k), 0.0) + c
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "_arrays", None)

    def __setattr__(self, name, value):
        raise AttributeError("HomoPoly3 is immutable")

    # -- constructors

    @classmethod
    def zero(cls, degree: int) -> "HomoPoly3":
        return cls(degree, {})

    @classmethod
    def constant(cls, value: float) -> "HomoPoly3":
        return cls(0, {(0, 0, 0): value})

    @classmethod
    def linear_form(cls, vec) -> "HomoPoly3":
        v = np.asarray(vec, dtype=float)
        return cls(1, {(1, 0, 0): v[0], (0, 1, 0): v[1], (0, 0, 1): v[2]})

    # -- bookkeeping

    def _cached_arrays(self):
        arrays = object.__getattribute__(self, "_arrays")
        if arrays is None:
            if self.coeffs:
                exps = np.array(sorted(self.coeffs), dtype=np.int64)
                cs = np.array([self.coeffs[tuple(e)] for e in exps], dtype=float)
            else:
                exps = np.zeros((1, 3), dtype=np.int64)
                cs = np.zeros(1)
            arrays = (exps, cs)
            object.__setattr__(self, "_arrays", arrays)
        return arrays

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def is_zero(self, tol: float = 0.0, rel_to: float | None = None) -> bool:
        ref = rel_to if rel_to is not None else 1.0
        return self.max_coeff() <= tol * ref

    def degree_in(self, var: int) -> int:
        """Largest exponent of variable ``var`` (0 if absent)."""
        return max((e[var] for e in self.coeffs), default=0)

    # -- arithmetic

    def __add__(self, other: "HomoPoly3") -> "HomoPoly3":
        if self.degree != other.degree:
            raise AlgebraError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0.0) + c
        return HomoPoly3(self.degree, out)

    def __sub__(self, other: "HomoPoly3") -> "HomoPoly3":
        return self + (-other)

    def __neg__(self) -> "HomoPoly3":
        return HomoPoly3(self.degree, {e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        if np.isscalar(other):
            return HomoPoly3(self.degree, {e: c * other for e, c in self.coeffs.items()})
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0.0) + c1 * c2
        return HomoPoly3(self.degree + other.degree, out)

    __rmul__ = __mul__

    def scaled_to_unit(self) -> "HomoPoly3":
        m = self.max_coeff()
        return self if m == 0.0 else self * (1.0 / m)

    # -- evaluation

    def __call__(self, pts):
        """Evaluate at one point (3,) or many (n, 3); real or complex."""
        pts = np.asarray(pts)
        single = pts.ndim == 1
        if np.iscomplexobj(pts):
            exps, cs = self._cached_arrays()
            p = np.atleast_2d(pts)
            vals = (p[:, None, :] ** exps[None, :, :]).prod(axis=2) @ cs.astype(complex)
        else:
            exps, cs = self._cached_arrays()
            vals = _kernels.homopoly_eval(exps, cs, np.atleast_2d(pts).astype(float))
        return vals[0] if single else vals

    def partial(self, var: int) -> "HomoPoly3":
        if self.degree == 0:
            return HomoPoly3.zero(0)
        out: dict = {}
        for e, c in self.coeffs.items():
            if e[var] > 0:
                ne = list(e)
                ne[var] -= 1
                out[tuple(ne)] = out.get(tuple(ne), 0.0) + c * e[var]
        return HomoPoly3(self.degree - 1, out)

    def gradient(self, point):
        return np.array([self.partial(v)(point) for v in range(3)])

    def substitute_linear(self, T) -> "HomoPoly3":
        """Composition p(T x): each variable replaced by a linear form."""
        T = np.asarray(T, dtype=float)
        rows = [HomoPoly3.linear_form(T[i]) for i in range(3)]
        # cache powers of the three linear forms
        powers = []
        for r in rows:
            ps = [HomoPoly3.constant(1.0), r]
            for _ in range(2, self.degree + 1):
                ps.append(ps[-1] * r)
            powers.append(ps)
        acc = HomoPoly3.zero(self.degree)
        for (i, j, k), c in self.coeffs.items():
            term = powers[0][i] * powers[1][j] * powers[2][k] * c
            acc = acc + term
        return acc

    def restrict(self, u, v) -> np.ndarray:
        """Binary form of p on the line {s*u + t*v}: coeffs of t^a s^(d-a).

        Returned ascending in the exponent of t (length degree+1).
        """
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        d = self.degree
        # powers of the per-variable linear polynomials u_c + t v_c
        pows = []
        for cidx in range(3):
            base = np.array([u[cidx], v[cidx]])
            ps = [np.array([1.0])]
            for _ in range(d):
                ps.append(np.convolve(ps[-1], base))
            pows.append(ps)
        out = np.zeros(d + 1)
        for (i, j, k), c in self.coeffs.items():
            term = np.convolve(np.convolve(pows[0][i], pows[1][j]), pows[2][k])
            out[: len(term)] += c * term
        return out

    def __repr__(self):
        terms = ", ".join(f"{e}: {c:.6g}" for e, c in sorted(self.coeffs.items()))
        return f"HomoPoly3(deg={self.degree}, {{{terms}}})"


@dataclass(frozen=True)
class ProjRoot2:
    """A projective common root of a pair of plane forms.

    ``coords`` is a unit-magnitude complex 3-vector with canonical phase: the
    component of largest modulus is real positive.  Two roots are equal iff
    complex-proportional within tolerance.
    """

    coords: np.ndarray
    multiplicity: int
    is_real: bool

    @staticmethod
    def canonicalize(coords) -> np.ndarray:
        c = np.asarray(coords, dtype=complex)
        norm = np.linalg.norm(c)
        if norm == 0.0:
            raise AlgebraError("projective root must be nonzero")
        c = c / norm
        pivot = int(np.argmax(np.abs(c)))
        phase = c[pivot] / abs(c[pivot])
        return c / phase

    @classmethod
    def make(cls, coords, multiplicity: int) -> "ProjRoot2":
        c = cls.canonicalize(coords)
        is_real = bool(np.max(np.abs(c.imag)) <= REAL_ROOT_IMAG_TOL)
        if is_real:
            c = c.real.astype(complex)
            c /= np.linalg.norm(c)
        return cls(coords=c, multiplicity=int(multiplicity), is_real=is_real)

    def proportional_to(self, other, tol: float = 1e-6) -> bool:
        """Projective equality within an angular (sine) tolerance."""
        a, b = self.coords, np.asarray(other, dtype=complex)
        b = ProjRoot2.canonicalize(b)
        inner = min(abs(np.vdot(a, b)), 1.0)
        return math.sqrt(max(0.0, 1.0 - inner * inner)) <= tol

    def real_vector(self) -> np.ndarray:
        if not self.is_real:
            raise AlgebraError("root is not real")
        return self.coords.real / np.linalg.norm(self.coords.real)


# ---------------------------------------------------------------------------
# resultants and homogeneous systems


def _coeffs_in_var(p: HomoPoly3, var: int):
    """p as a polynomial in x_var: list of bivariate HomoPoly3 coefficients."""
    dz = p.degree_in(var)
    others = [v for v in range(3) if v != var]
    buckets: list[dict] = [{} for _ in range(dz + 1)]
    for e, c in p.coeffs.items():
        ne = [0, 0, 0]
        ne[others[0]] = e[others[0]]
        ne[others[1]] = e[others[1]]
        buckets[e[var]][tuple(ne)] = c
    return [HomoPoly3(p.degree - j, b) for j, b in enumerate(buckets)], others


def _sylvester_det_at(pc, qc, pts) -> np.ndarray:
    """Determinant of the Sylvester matrix with coefficients evaluated at pts."""
    dzp = len(pc) - 1
    dzq = len(qc) - 1
    n = dzp + dzq
    pts = np.atleast_2d(pts)
    m = len(pts)
    pa = np.array([c(pts) for c in pc])  # (dzp+1, m)
    qa = np.array([c(pts) for c in qc])
    out = np.empty(m)
    M = np.zeros((n, n))
    for s in range(m):
        M[:] = 0.0
        for r in range(dzq):
            M[r, r : r + dzp + 1] = pa[::-1, s]
        for r in range(dzp):
            M[dzq + r, r : r + dzq + 1] = qa[::-1, s]
        out[s] = np.linalg.det(M)
    return out


def resultant_elim(p: HomoPoly3, q: HomoPoly3, var_index: int) -> HomoPoly3:
    """Sylvester resultant of p and q with respect to one variable.

    Returns a homogeneous form of (formal) degree deg(p)*deg(q) in the two
    remaining variables, vanishing at the projection of every common
    projective root.  An identically-zero resultant signals a shared factor
    (or a positive-dimensional solution set) and raises.
    """
    if not p.coeffs or not q.coeffs:
        raise AlgebraError("resultant of a zero polynomial")
    if var_index not in (0, 1, 2):
        raise AlgebraError("var_index must be 0, 1 or 2")
    dzp = p.degree_in(var_index)
    dzq = q.degree_in(var_index)
    if dzp == 0 and dzq == 0:
        raise AlgebraError("eliminated variable occurs in neither polynomial")
    pc, others = _coeffs_in_var(p, var_index)
    qc, _ = _coeffs_in_var(q, var_index)
    n_total = p.degree * q.degree

    # Interpolate det(Sylvester) on the projective line of the remaining
    # variables: sample at (t_k, 1), fit a degree-N polynomial in t exactly.
    ts = np.cos(np.pi * (np.arange(n_total + 1) + 0.5) / (n_total + 1))
    pts = np.zeros((n_total + 1, 3))
    pts[:, others[0]] = ts
    pts[:, others[1]] = 1.0
    vals = _sylvester_det_at(pc, qc, pts)
    V = npoly.polyvander(ts, n_total)
    cs = np.linalg.solve(V, vals)

    # a genuine common factor makes every determinant vanish to rounding;
    # structurally tiny resultants of near-degenerate inputs stay orders of
    # magnitude above that floor
    scale = (max(p.max_coeff(), 1e-300) ** dzq) * (max(q.max_coeff(), 1e-300) ** dzp)
    if np.max(np.abs(cs)) <= 1e-12 * scale:
        raise AlgebraError("positive-dimensional or shared factor")

    out = {}
    for a, c in enumerate(cs):
        e = [0, 0, 0]
        e[others[0]] = a
        e[others[1]] = n_total - a
        out[tuple(e)] = c
    return HomoPoly3(n_total, out)


def _random_orthogonal(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((3, 3))
    Q, R = np.linalg.qr(A)
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def _projective_binary_roots(coeffs, coeffs_reversed=None):
    """Projective roots of a binary form with multiplicities and radii.

    ``coeffs[j]`` is the coefficient of first^j second^(n-j).  Each root is
    returned as (direction, multiplicity, radius) with ``direction`` a unit
    complex 2-vector (first, second).  Roots are extracted in whichever of
    the two affine charts keeps them inside the unit disk, where companion
    eigenvalues are well conditioned; a guard band at the chart boundary
    prevents double counting.  ``coeffs_reversed`` supplies independently
    computed coefficients for the second chart (useful when the form was
    fitted from samples and reversal would amplify fit noise).
    """
    c = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0.0:
        raise AlgebraError("zero binary form")
    c = c / scale
    if coeffs_reversed is None:
        c_rev = c[::-1]
    else:
        c_rev = np.asarray(coeffs_reversed, dtype=complex)
        c_rev = c_rev / np.max(np.abs(c_rev))
    out = []
    for first_chart in (True, False):
        cc = c if first_chart else c_rev
        top = len(cc) - 1
        while top > 0 and abs(cc[top]) <= 1e-12:
            top -= 1
        if top == 0:
            continue
        roots = npoly.polyroots(cc[: top + 1])
        for center, mult, radius in _cluster_complex_roots(roots, cc[: top + 1]):
            if first_chart:
                if abs(center) <= 1.0 + 1e-11:
                    direction = np.array([center, 1.0 + 0j])
                else:
                    continue
            else:
                if abs(center) < 1.0 - 1e-11:
                    direction = np.array([1.0 + 0j, center])
                else:
                    continue
            direction = direction / np.linalg.norm(direction)
            out.append((direction, mult, radius))
    return out


def _newton_polish_system(p: HomoPoly3, q: HomoPoly3, x: np.ndarray) -> np.ndarray:
    """Complex Newton on the chart fixing the largest coordinate.

    Trust-region limited: a candidate may only be tightened near its start,
    never relocated to a different root, and the result is kept only when
    the residual improved.
    """
    px = [p.partial(v) for v in range(3)]
    qx = [q.partial(v) for v in range(3)]
    pivot = int(np.argmax(np.abs(x)))
    free = [v for v in range(3) if v != pivot]
    start = np.array(x, dtype=complex) / x[pivot]
    x = start.copy()

    def residual(pt):
        return max(abs(complex(p(pt))), abs(complex(q(pt))))

    res0 = residual(start)
    for _ in range(6):
        f = np.array([p(x), q(x)])
        if max(abs(f[0]), abs(f[1])) < 1e-15:
            break
        J = np.array(
            [[px[free[0]](x), px[free[1]](x)], [qx[free[0]](x), qx[free[1]](x)]]
        )
        try:
            delta = np.linalg.solve(J, -f)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(delta)) or np.max(np.abs(delta)) > 0.1:
            break
        x[free[0]] += delta[0]
        x[free[1]] += delta[1]
        if max(abs(x[free[0]] - start[free[0]]), abs(x[free[1]] - start[free[1]])) > 0.3:
            return start
    return x if residual(x) <= res0 else start


def solve_homo_system(p: HomoPoly3, q: HomoPoly3, tol: float = DEFAULT_TOL):
    """All projective common roots of two coprime forms, with multiplicity.

    Multiplicities sum to deg(p)*deg(q) (Bezout).  Raises when the two forms
    share a factor.  Internally works in deterministically rotated
    coordinates so that the elimination direction is generic, eliminates the
    third variable by resultant, and back-substitutes along each fiber,
    keeping only points where both residuals vanish.
    """
    if not p.coeffs or not q.coeffs:
        raise AlgebraError("zero polynomial in system")
    p = p.scaled_to_unit()
    q = q.scaled_to_unit()
    T = _random_orthogonal(_RNG_SEED_COORDS)
    p2 = p.substitute_linear(T)
    q2 = q.substitute_linear(T)
    # Eliminate z by a Sylvester determinant sampled on the projective line
    # of (x, y): one Chebyshev fit per affine chart, so roots of any ratio
    # are read off from well-conditioned coefficients.
    n_total = p.degree * q.degree
    pc, _ = _coeffs_in_var(p2, 2)
    qc, _ = _coeffs_in_var(q2, 2)
    dzp, dzq = len(pc) - 1, len(qc) - 1
    if dzp == 0 and dzq == 0:
        raise AlgebraError("degenerate elimination direction")
    ts = np.cos(np.pi * (np.arange(n_total + 1) + 0.5) / (n_total + 1))
    V = npoly.polyvander(ts, n_total)
    charts = []
    for first_chart in (True, False):
        pts = np.zeros((n_total + 1, 3))
        pts[:, 0 if first_chart else 1] = ts
        pts[:, 1 if first_chart else 0] = 1.0
        charts.append(np.linalg.solve(V, _sylvester_det_at(pc, qc, pts)))
    cs, cs_rev = charts
    scale_res = (max(p2.max_coeff(), 1e-300) ** dzq) * (
        max(q2.max_coeff(), 1e-300) ** dzp
    )
    if max(np.max(np.abs(cs)), np.max(np.abs(cs_rev))) <= 1e-12 * scale_res:
        raise AlgebraError("positive-dimensional or shared factor")
    projected = _projective_binary_roots(cs, coeffs_reversed=cs_rev)
    def system_residual(pt):
        return max(abs(complex(p2(pt))), abs(complex(q2(pt))))

    def fiber_candidates(direction):
        u = np.array([direction[0], direction[1], 0.0], dtype=complex)
        v = np.array([0.0, 0.0, 1.0], dtype=complex)
        bp = _restrict_complex(p2, u, v)
        bq = _restrict_complex(q2, u, v)
        base = bp if np.max(np.abs(bp)) >= np.max(np.abs(bq)) else bq
        if np.max(np.abs(base)) == 0.0:
            raise AlgebraError("positive-dimensional fiber (shared factor)")
        # restriction coefficients ascend in the v-weight: direction (f, s)
        # of the binary form means the point f*v + s*u
        return [d[1] * u + d[0] * v for d, _m, _r in _projective_binary_roots(base)]

    roots: list[tuple[np.ndarray, int]] = []
    for proj_dir, mult, proj_radius in projected:
        proj_dir = np.asarray(proj_dir, dtype=complex)
        proj_tol = max(10.0 * proj_radius, 1e-6)
        # A multi-cluster may be one true multiple root or several distinct
        # roots merged by proximity; fibers along perturbed directions within
        # the cluster radius seed Newton near each constituent, away from the
        # Jacobian-critical midpoint.
        spreads = [0.0]
        if mult > 1 and proj_radius > 0.0:
            spreads += list(np.linspace(-1.5, 1.5, mult + 1) * proj_radius)
        raw: list[np.ndarray] = []
        for spread in spreads:
            cth, sth = math.cos(spread), math.sin(spread)
            pdir = np.array(
                [cth * proj_dir[0] - sth * proj_dir[1], sth * proj_dir[0] + cth * proj_dir[1]]
            )
            raw += fiber_candidates(pdir)

        def in_fiber(cand):
            pr = cand[:2]
            prn = np.linalg.norm(pr)
            if prn <= 1e-8:
                return True
            inner = min(abs(np.vdot(pr / prn, proj_dir)), 1.0)
            return math.sqrt(max(0.0, 1.0 - inner * inner)) <= proj_tol

        polished = []
        for cand in raw:
            cand = cand / np.linalg.norm(cand)
            cand = _newton_polish_system(p2, q2, cand)
            cand = cand / np.linalg.norm(cand)
            if in_fiber(cand):
                polished.append(cand)

        # machine-accurate distinct solutions indicate merged simple roots
        accurate: list[np.ndarray] = []
        for cand in polished:
            if system_residual(cand) > 1e-11:
                continue
            if not any(abs(np.vdot(cand, prev)) >= 1.0 - 5e-15 for prev in accurate):
                accurate.append(cand)

        if len(accurate) >= 2 and mult > 1:
            kept = accurate[:mult]
        elif len(accurate) >= 1 and mult == 1:
            kept = accurate[:1]
        else:
            # one (possibly multiple) root: passably close candidates cluster
            # around it and their mean cancels the symmetric solver spread
            gated = [
                c / np.linalg.norm(c)
                for c in raw
                if system_residual(c / np.linalg.norm(c)) <= max(tol, 1e-6)
                and in_fiber(c / np.linalg.norm(c))
            ]
            if gated:
                ref = min(gated, key=system_residual)
                close = [
                    c
                    for c in gated
                    if abs(np.vdot(c, ref)) >= 1.0 - 0.01
                ]
                # align projective phases before averaging
                aligned = []
                for c in close:
                    ph = np.vdot(ref, c)
                    aligned.append(c * (ph.conjugate() / abs(ph)) if ph != 0 else c)
                mean = np.mean(aligned, axis=0)
                if np.linalg.norm(mean) > 1e-8:
                    kept = [mean / np.linalg.norm(mean)]
                else:
                    kept = [ref]
            elif polished:
                kept = [min(polished, key=system_residual)]
            else:
                raise ConsistencyError("projected root without fiber solution")
        share, extra = divmod(mult, len(kept))
        for idx, cand in enumerate(kept):
            m = share + (1 if idx < extra else 0)
            if m == 0:
                continue
            roots.append((T @ cand, m))

    out = []
    for coords, mult in roots:
        r = ProjRoot2.make(coords, mult)
        for i, prev in enumerate(out):
            if prev.proportional_to(r.coords):
                out[i] = ProjRoot2.make(prev.coords, prev.multiplicity + mult)
                break
        else:
            out.append(r)
    total = sum(r.multiplicity for r in out)
    if total != n_total:
        raise ConsistencyError(f"multiplicities sum to {total}, expected {n_total}")
    out.sort(key=lambda r: tuple(np.round([r.coords.real, r.coords.imag], 9).ravel()))
    return out


def _restrict_complex(p: HomoPoly3, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Like HomoPoly3.restrict but for complex span points."""
    d = p.degree
    pows = []
    for cidx in range(3):
        base = np.array([u[cidx], v[cidx]], dtype=complex)
        ps = [np.array([1.0 + 0j])]
        for _ in range(d):
            ps.append(np.convolve(ps[-1], base))
        pows.append(ps)
    out = np.zeros(d + 1, dtype=complex)
    for (i, j, k), c in p.coeffs.items():
        term = np.convolve(np.convolve(pows[0][i], pows[1][j]), pows[2][k])
        out[: len(term)] += c * term
    return out


# ---------------------------------------------------------------------------
# small-matrix helpers


def rank_with_tol(M, tol: float = DEFAULT_TOL) -> int:
    """Number of singular values above tol * sigma_max (0 for a zero matrix)."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if not np.all(np.isfinite(M)):
        raise AlgebraError("matrix has non-finite entries")
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def sym3_eigen(M, tol: float = 1e-8):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric 3x3."""
    M = np.asarray(M, dtype=float)
    if M.shape != (3, 3):
        raise AlgebraError("expected a 3x3 matrix")
    scale = max(1.0, float(np.max(np.abs(M))))
    if np.max(np.abs(M - M.T)) > tol * scale:
        raise AlgebraError("matrix is not symmetric within tolerance")
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    return w, V
