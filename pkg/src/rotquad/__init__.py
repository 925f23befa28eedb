"""Rotation quadrilaterals and the loci of their homologous points, planes
and lines.

Four displacements in cyclic order form a rotation quadrilateral when each
consecutive relative displacement is a pure rotation.  This package
constructs such quadruples on the Study quadric and computes:

* the six lines of points whose homologous images are concyclic,
* the six pencils of parallel planes whose homologous images are tangent to
  a cone of revolution,
* the two lines whose homologous images form a properly oriented skew
  quadrilateral on a hyperboloid of revolution,

together with the hyperboloids of revolution carrying the trajectory
circles of the two transversals.
"""

from ._kernels import BACKEND as kernel_backend
from .config import DEFAULT_TOL, Tolerances
from .errors import AlgebraError, ConsistencyError, DegenerateError, RotQuadError
from .kinematics import Displacement, DualQuaternion, HomPlane, StudyLine
from .linegeom import PlueckerLine, Quadric, SkewQuad
from .construct import (
    RotationQuadrilateral,
    construct_v1,
    construct_v2,
    from_displacements,
    random_rotation_quadrilateral,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "ConsistencyError",
    "DEFAULT_TOL",
    "DegenerateError",
    "Displacement",
    "DualQuaternion",
    "HomPlane",
    "PlueckerLine",
    "Quadric",
    "RotQuadError",
    "RotationQuadrilateral",
    "SkewQuad",
    "StudyLine",
    "Tolerances",
    "construct_v1",
    "construct_v2",
    "from_displacements",
    "kernel_backend",
    "random_rotation_quadrilateral",
    "__version__",
]
