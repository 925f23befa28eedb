"""Central tolerance configuration.

All tolerances in the library are relative to input scale.  ``DEFAULT_TOL``
is the single knob most call sites default to; :class:`Tolerances` fans a
global value out to the per-check tolerances the CLI and the verification
suite use, with optional per-check overrides.
"""

from dataclasses import dataclass, fields

DEFAULT_TOL = 1e-9

# Imaginary-part threshold (relative) under which a complex root is real.
REAL_ROOT_IMAG_TOL = 1e-7

# Relative distance under which clustered roots are merged unconditionally.
ROOT_MERGE_TOL = 1e-6


@dataclass(frozen=True)
class Tolerances:
    """Per-check tolerances, all relative to the scale of the data."""

    general: float = DEFAULT_TOL
    pure_rotation: float = 1e-10
    conjugacy: float = 1e-10
    roundtrip: float = 1e-9
    concyclic: float = 1e-8
    edge_sums: float = 1e-9
    quadric_residual: float = 1e-8
    axis_distance: float = 1e-7
    direction_match: float = 1e-7
    linearity: float = 1e-12

    @classmethod
    def from_global(cls, tol: float | None, overrides: dict | None = None):
        """Scale every per-check tolerance by ``tol / DEFAULT_TOL``.

        ``overrides`` maps field names to explicit values and wins over the
        scaled defaults.
        """
        kwargs = {}
        if tol is not None:
            factor = tol / DEFAULT_TOL
            for f in fields(cls):
                kwargs[f.name] = f.default * factor
        if overrides:
            unknown = set(overrides) - {f.name for f in fields(cls)}
            if unknown:
                raise ValueError(f"unknown tolerance names: {sorted(unknown)}")
            kwargs.update(overrides)
        return cls(**kwargs)
