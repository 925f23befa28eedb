import numpy as np
import pytest

from rotquad._kernels import _pure

backends = [_pure]
try:
    from rotquad._kernels import _core

    backends.append(_core)
except ImportError:
    _core = None


@pytest.fixture(params=backends, ids=lambda b: b.BACKEND)
def backend(request):
    return request.param


def test_quat_mul_identity(backend):
    q = np.array([0.2, -0.4, 0.7, 0.5])
    e = np.array([1.0, 0.0, 0.0, 0.0])
    assert np.allclose(backend.quat_mul(e, q), q)
    assert np.allclose(backend.quat_mul(q, e), q)


def test_quat_rotate_matches_matrix(backend):
    rng = np.random.default_rng(0)
    for _ in range(20):
        q = rng.standard_normal(4)
        q /= np.linalg.norm(q)
        v = rng.standard_normal(3)
        R = backend.quat_to_matrix(q)
        assert np.allclose(backend.quat_rotate(q, v), R @ v, atol=1e-12)
        assert np.allclose(R.T @ R, np.eye(3), atol=1e-12)


def test_homopoly_eval_reference(backend):
    exps = np.array([[2, 0, 0], [0, 1, 1], [1, 1, 0]], dtype=np.int64)
    coeffs = np.array([1.0, -2.0, 0.5])
    pts = np.array([[1.0, 2.0, 3.0], [0.0, -1.0, 1.0]])
    expected = [1.0 - 12.0 + 1.0, 0.0 + 2.0 + 0.0]
    assert np.allclose(backend.homopoly_eval(exps, coeffs, pts), expected)


def test_coplanarity_dets_reference(backend):
    p0 = np.array([[0.0, 0.0, 0.0]])
    p1 = np.array([[1.0, 0.0, 0.0]])
    p2 = np.array([[0.0, 1.0, 0.0]])
    p3 = np.array([[0.0, 0.0, 4.0]])
    assert np.allclose(backend.coplanarity_dets(p0, p1, p2, p3), [4.0])
    assert np.allclose(backend.coplanarity_dets(p0, p1, p2, p1), [0.0])


def test_line_transform_preserves_structure(backend):
    rng = np.random.default_rng(1)
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    R = backend.quat_to_matrix(q)
    t = rng.standard_normal(3)
    d = rng.standard_normal(3)
    d /= np.linalg.norm(d)
    m = np.cross(rng.standard_normal(3), d)
    out = backend.line_transform(R, t, d, m)
    assert abs(np.dot(out[:3], out[3:])) < 1e-12
    # a point of the line maps onto the transformed line
    p = np.cross(d, m)
    img = R @ p + t
    assert np.allclose(np.cross(img, out[:3]), out[3:], atol=1e-12)


@pytest.mark.skipif(_core is None, reason="compiled kernels not built")
def test_backend_parity():
    rng = np.random.default_rng(2)
    for _ in range(100):
        a, b = rng.standard_normal(8), rng.standard_normal(8)
        assert np.allclose(_pure.dq_mul(a, b), _core.dq_mul(a, b), atol=1e-13)
        q = rng.standard_normal(4)
        q /= np.linalg.norm(q)
        v = rng.standard_normal(3)
        assert np.allclose(_pure.quat_rotate(q, v), _core.quat_rotate(q, v), atol=1e-13)
        exps = rng.integers(0, 5, (8, 3)).astype(np.int64)
        cs = rng.standard_normal(8)
        pts = rng.standard_normal((7, 3))
        assert np.allclose(
            _pure.homopoly_eval(exps, cs, pts), _core.homopoly_eval(exps, cs, pts),
            atol=1e-11, rtol=1e-11,
        )
