import math

import numpy as np
import pytest

from rotquad.construct import (
    check_quadrilateral,
    construct_v1,
    construct_v2,
    extract_axes_and_angles,
    from_displacements,
    normalize_angle,
    random_rotation_quadrilateral,
)
from rotquad.errors import DegenerateError
from rotquad.kinematics import Displacement, act_on_line, dq_from_displacement, study_form
from rotquad.linegeom import PlueckerLine

from conftest import rand_displacement


def random_axes(rng, n=3):
    return [
        PlueckerLine.from_point_direction(rng.uniform(-1, 1, 3), rng.standard_normal(3))
        for _ in range(n)
    ]


class TestConstructV1:
    def test_invariants_hold(self):
        rng = np.random.default_rng(20)
        q = construct_v1(
            Displacement.identity(), 0, random_axes(rng), [1.1, 2.0]
        )
        assert check_quadrilateral(q) == []

    def test_relative_rotations_pure(self):
        rng = np.random.default_rng(21)
        q = construct_v1(Displacement.identity(), 0, random_axes(rng), [0.7, 1.9])
        scale = q.scale()
        for i in range(4):
            tau = q.relative_dq(i)
            assert abs(tau.dual[0]) <= 1e-10 * scale
            assert abs(study_form(q.study_points[i], q.study_points[(i + 1) % 4])) <= 1e-10 * scale

    def test_zero_angle_degenerate(self):
        rng = np.random.default_rng(22)
        with pytest.raises(DegenerateError, match="zero angle"):
            construct_v1(Displacement.identity(), 0, random_axes(rng), [0.0, 1.0])

    def test_coincident_axes_degenerate(self):
        rng = np.random.default_rng(23)
        axes = random_axes(rng)
        axes[1] = axes[0]
        with pytest.raises(DegenerateError, match="coincide"):
            construct_v1(Displacement.identity(), 0, axes, [1.0, 1.0])

    def test_nonzero_base_index(self):
        rng = np.random.default_rng(24)
        axes = random_axes(rng)
        base = rand_displacement(rng)
        for index in range(4):
            q = construct_v1(base, index, axes, [1.0, 1.4])
            assert check_quadrilateral(q) == []
            assert q.displacements[index].isclose(base, tol=1e-12)
            assert q.rel_axes_moving[index].same_line(axes[0], tol=1e-9)

    def test_angles_stored_normalized(self):
        rng = np.random.default_rng(25)
        q = construct_v1(Displacement.identity(), 0, random_axes(rng), [1.0 + 2 * math.pi, 1.3])
        assert q.rel_angles[0] == pytest.approx(1.0, abs=1e-12)
        for w in q.rel_angles:
            assert -math.pi < w <= math.pi


class TestConstructV2:
    def test_round_trip_from_v1(self):
        # the completion is unique, so rebuilding from opposite data of a v1
        # output must reproduce it
        rng = np.random.default_rng(26)
        for _ in range(10):
            q = construct_v1(
                rand_displacement(rng), 0, random_axes(rng), list(rng.uniform(0.4, 2.6, 2))
            )
            q2 = construct_v2(
                q.displacements[0],
                q.displacements[2],
                q.rel_axes_moving[0],
                q.rel_axes_moving[2],
            )
            for a, b in zip(q.displacements, q2.displacements):
                assert a.isclose(b, tol=1e-9)
            for a, b in zip(q.study_points, q2.study_points):
                assert a.isclose_up_to_sign(b, tol=1e-9)

    def test_equal_opposite_positions_degenerate(self):
        rng = np.random.default_rng(27)
        d = rand_displacement(rng)
        axes = random_axes(rng, 2)
        with pytest.raises(DegenerateError):
            construct_v2(d, d, axes[0], axes[1])

    def test_random_pair(self):
        rng = np.random.default_rng(28)
        built = 0
        for _ in range(10):
            a = rand_displacement(rng)
            b = rand_displacement(rng)
            axes = random_axes(rng, 2)
            try:
                q = construct_v2(a, b, axes[0], axes[1])
            except DegenerateError:
                continue
            assert check_quadrilateral(q) == []
            built += 1
        assert built >= 5


class TestFromDisplacements:
    def test_accepts_valid(self, quad42):
        q = from_displacements(quad42.displacements)
        assert check_quadrilateral(q) == []
        for a, b in zip(q.rel_axes_moving, quad42.rel_axes_moving):
            assert a.same_line(b, tol=1e-8)

    def test_rejects_corrupted(self, quad42):
        disps = list(quad42.displacements)
        disps[1] = Displacement(disps[1].rotation, disps[1].translation + [0.01, 0, 0])
        with pytest.raises(DegenerateError, match="not a pure rotation"):
            from_displacements(disps)


class TestRandomQuadrilateral:
    def test_deterministic(self):
        a = random_rotation_quadrilateral(123)
        b = random_rotation_quadrilateral(123)
        for da, db in zip(a.displacements, b.displacements):
            assert np.array_equal(da.rotation, db.rotation)
            assert np.array_equal(da.translation, db.translation)

    def test_many_seeds_valid(self):
        for seed in range(60):
            q = random_rotation_quadrilateral(seed)
            assert check_quadrilateral(q) == [], f"seed {seed}"

    def test_real_transversal_residuals(self, real_transversal_quads):
        for seed, q in real_transversal_quads:
            for t in q.transversals:
                for axis in q.rel_axes_moving:
                    assert abs(t.reciprocal(axis)) <= 1e-9, f"seed {seed}"

    def test_scale_parameter(self):
        q = random_rotation_quadrilateral(5, scale=10.0)
        assert check_quadrilateral(q) == []


class TestExtraction:
    def test_recovers_v1_inputs(self):
        rng = np.random.default_rng(29)
        axes = random_axes(rng)
        angles = [0.9, 2.2]
        q = construct_v1(Displacement.identity(), 0, axes, angles)
        ext = extract_axes_and_angles(q)
        for i in range(3):
            assert ext[i][0].same_line(axes[i], tol=1e-8)
        assert ext[0][1] == pytest.approx(angles[0], abs=1e-10)
        assert ext[1][1] == pytest.approx(angles[1], abs=1e-10)
        for i in range(4):
            assert ext[i][1] == pytest.approx(q.rel_angles[i], abs=1e-10)

    def test_left_invariance(self, quad42):
        # pre-composing every position with a fixed displacement leaves the
        # moving-frame data untouched
        rng = np.random.default_rng(30)
        gamma = rand_displacement(rng)
        moved = from_displacements([gamma.compose_after(d) for d in quad42.displacements])
        for a, b in zip(moved.rel_axes_moving, quad42.rel_axes_moving):
            assert a.same_line(b, tol=1e-8)
        assert np.allclose(np.abs(moved.rel_angles), np.abs(quad42.rel_angles), atol=1e-9)
        for a, b in zip(moved.transversals, quad42.transversals):
            assert a.same_line(b, tol=1e-7)

    def test_right_covariance(self, quad42):
        # post-composing maps the moving frame by the inverse displacement
        rng = np.random.default_rng(31)
        gamma = rand_displacement(rng)
        moved = from_displacements([d.compose_after(gamma) for d in quad42.displacements])
        ginv = gamma.inverse()
        gdq = dq_from_displacement(ginv)
        for a, b in zip(moved.rel_axes_moving, quad42.rel_axes_moving):
            assert a.same_line(act_on_line(gdq, b), tol=1e-8)


class TestAngles:
    def test_normalize_angle(self):
        assert normalize_angle(math.pi) == pytest.approx(math.pi)
        assert normalize_angle(-math.pi) == pytest.approx(math.pi)
        assert normalize_angle(3.5 * math.pi) == pytest.approx(-0.5 * math.pi)
