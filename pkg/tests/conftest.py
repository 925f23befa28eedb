import numpy as np
import pytest

from rotquad import construct


@pytest.fixture(scope="session")
def quad42():
    """A generic quadrilateral with real transversals."""
    q = construct.random_rotation_quadrilateral(42)
    assert q.transversal_kind == "real_pair"
    return q


@pytest.fixture(scope="session")
def quad_crossed():
    """Seed whose transversal images form the crossed edge configuration."""
    return construct.random_rotation_quadrilateral(0)


@pytest.fixture(scope="session")
def quad_complex():
    """Seed whose transversals are a complex-conjugate pair."""
    q = construct.random_rotation_quadrilateral(4)
    assert q.transversal_kind == "complex_pair"
    return q


@pytest.fixture(scope="session")
def real_transversal_quads():
    """First 20 seeds with real transversals."""
    out = []
    seed = 0
    while len(out) < 20:
        q = construct.random_rotation_quadrilateral(seed)
        if q.transversal_kind == "real_pair":
            out.append((seed, q))
        seed += 1
    return out


def rand_rotation(rng):
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    angle = rng.uniform(0.3, 2.8)
    K = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * (K @ K)


def rand_displacement(rng, scale=1.0):
    from rotquad.kinematics import Displacement

    return Displacement(rand_rotation(rng), scale * rng.uniform(-1, 1, 3))
