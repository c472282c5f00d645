"""Exception types shared across the package."""


class Minimal5Error(Exception):
    """Base class for all package errors."""


class DegreeCapError(Minimal5Error, ValueError):
    """A polynomial would exceed the supported degree."""


class BranchPoint(Minimal5Error, ValueError):
    """Raised at points where the null curve vanishes and the metric degenerates."""

    def __init__(self, z, message=None):
        self.z = z
        super().__init__(message or f"branch point at z={z!r}: all phi_k vanish")


class FrameDiscontinuity(Minimal5Error, RuntimeError):
    """Adapted frames at neighbouring stencil points are not close; shrink h."""


class DegenerateSeedWarning(UserWarning):
    """Seed of degree < 3: the third derivative vanishes and X is constant."""
