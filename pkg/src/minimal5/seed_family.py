"""Integral-free immersions built from a single holomorphic seed.

The data ``f = Psi''', g = (z, l1 z, l2 z)`` has an explicit primitive in
terms of ``Psi, Psi', Psi''``, a closed-form conformal factor
``|Psi'''|^2 (1 + L|z|^2)^2`` with ``L = 1 + l1^2 + l2^2``, and a Gauss map
into the quadric that does not depend on the seed.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BranchPoint, DegenerateSeedWarning
from .holomorphic import HoloPoly, Z, as_complex, check_finite
from .weierstrass import NullCurve, WeierstrassData, build_phi


@dataclass(frozen=True)
class SeedData:
    psi: HoloPoly
    lambda1: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self):
        for name in ("lambda1", "lambda2"):
            val = float(getattr(self, name))
            if not np.isfinite(val):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, val)

    @property
    def Lambda(self) -> float:
        return 1.0 + self.lambda1**2 + self.lambda2**2

    @property
    def degenerate(self) -> bool:
        return self.psi.degree < 3

    def to_json(self) -> dict:
        return {"psi": self.psi.to_json(), "lambda1": self.lambda1, "lambda2": self.lambda2}

    @classmethod
    def from_json(cls, data: dict) -> "SeedData":
        if "psi" not in data:
            raise ValueError("SeedData requires key 'psi'")
        return cls(
            HoloPoly.from_json(data["psi"]),
            float(data.get("lambda1", 0.0)),
            float(data.get("lambda2", 0.0)),
        )


@dataclass(frozen=True)
class SeedPrimitive:
    F: tuple
    seed: SeedData

    def __call__(self, z) -> np.ndarray:
        return np.stack([p(z) for p in self.F], axis=-1)


@dataclass(frozen=True)
class MetricSample:
    z: complex
    lambda_conf: float

    @property
    def u(self) -> float:
        """Log conformal scale, ``e^{2u} = lambda_conf``."""
        return 0.5 * np.log(self.lambda_conf)


@dataclass(frozen=True, eq=False)
class GaussPoint:
    """Homogeneous coordinates on the quadric ``Q_3``.

    Stored normalized: the largest-magnitude coordinate (lowest index on ties)
    is scaled to exactly 1.
    """

    w: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.w, dtype=complex).reshape(5)
        mags = np.abs(w)
        if not np.any(mags > 0):
            raise ValueError("homogeneous coordinates cannot all vanish")
        k = int(np.argmax(mags))  # argmax returns the first index on ties
        w = w / w[k]
        w[k] = 1.0
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    def quadric_residual(self) -> float:
        return float(abs(np.sum(self.w * self.w)) / np.sum(np.abs(self.w) ** 2))

    def projectively_equal(self, other, tol: float = 1e-10) -> bool:
        other_w = other.w if isinstance(other, GaussPoint) else GaussPoint(other).w
        return float(np.max(np.abs(self.w - other_w))) <= tol

    def __eq__(self, other):
        if not isinstance(other, GaussPoint):
            return NotImplemented
        return self.projectively_equal(other)

    def __repr__(self):
        return "GaussPoint([" + " : ".join(f"{c:.6g}" for c in self.w) + "])"


def seed_to_data(seed: SeedData) -> WeierstrassData:
    if seed.degenerate:
        warnings.warn(
            f"seed of degree {seed.psi.degree} < 3 gives f = 0; the immersion is constant",
            DegenerateSeedWarning,
            stacklevel=2,
        )
    return WeierstrassData(
        f=seed.psi.derivative(3),
        g1=Z,
        g2=Z.scale(seed.lambda1),
        g3=Z.scale(seed.lambda2),
    )


def seed_curve(seed: SeedData) -> NullCurve:
    """Null curve of the seed family, built directly from ``Psi'''``."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateSeedWarning)
        return build_phi(seed_to_data(seed))


def seed_primitive(seed: SeedData) -> SeedPrimitive:
    """Closed-form primitive ``F`` of the seed null curve (``F' = phi``)."""
    L = seed.Lambda
    p0 = seed.psi
    p1 = p0.derivative()
    p2 = p1.derivative()
    z2 = Z * Z
    F1 = (1.0 - z2.scale(L)) * p2.scale(0.5) + (Z * p1).scale(L) - p0.scale(L)
    F2 = ((1.0 + z2.scale(L)) * p2.scale(0.5j) - (Z * p1).scale(1j * L) + p0.scale(1j * L))
    F3 = Z * p2 - p1
    return SeedPrimitive((F1, F2, F3, F3.scale(seed.lambda1), F3.scale(seed.lambda2)), seed)


def seed_X(seed: SeedData, z) -> np.ndarray:
    return 2.0 * seed_primitive(seed)(check_finite(z)).real


def reconstruct_seed(prim: SeedPrimitive, z) -> complex:
    """Recover ``Psi(z)`` algebraically from the values ``F_1(z), ..., F_5(z)``."""
    z = as_complex(z)
    s = prim.seed
    L = s.Lambda
    F1, F2, F3, F4, F5 = (complex(p(z)) for p in prim.F)
    return (
        (L * z * z - 1.0) / (2.0 * L) * F1
        - 1j * (L * z * z + 1.0) / (2.0 * L) * F2
        - z / L * (F3 + s.lambda1 * F4 + s.lambda2 * F5)
    )


def conformal_factor(seed: SeedData, z):
    """``|Psi'''(z)|^2 (1 + L|z|^2)^2``; vectorized over ``z``."""
    z = check_finite(z)
    f = seed.psi.derivative(3)(z)
    return np.abs(f) ** 2 * (1.0 + seed.Lambda * np.abs(z) ** 2) ** 2


def metric_factor(seed: SeedData, z) -> MetricSample:
    z = as_complex(z)
    return MetricSample(z, float(conformal_factor(seed, z)))


def metric_factor_general(curve: NullCurve, z):
    """``2 sum_k |phi_k(z)|^2`` for any null curve."""
    v = curve(check_finite(z))
    return 2.0 * np.sum(np.abs(v) ** 2, axis=-1)


def gauss_map(curve: NullCurve, z) -> GaussPoint:
    z = as_complex(z)
    v = curve(z)
    if not np.any(np.abs(v) > 0):
        raise BranchPoint(z)
    return GaussPoint(v)


def gauss_explicit(seed: SeedData, z) -> GaussPoint:
    """Closed-form Gauss map ``[1 - Lz^2 : i(1 + Lz^2) : 2z : 2 l1 z : 2 l2 z]``."""
    z = as_complex(z)
    L = seed.Lambda
    return GaussPoint(
        [1 - L * z * z, 1j * (1 + L * z * z), 2 * z, 2 * seed.lambda1 * z, 2 * seed.lambda2 * z]
    )


def gauss_curvature(seed: SeedData, z) -> float:
    """Gauss curvature ``-4L / (|Psi'''|^2 (1 + L|z|^2)^4)``.

    The closed form follows from ``K = -(1/2lam) Lap log lam`` with ``log|Psi'''|``
    harmonic; :func:`gauss_curvature_fd` is the independent check.
    """
    z = as_complex(z)
    f = complex(seed.psi.derivative(3)(z))
    if f == 0:
        raise BranchPoint(z, f"metric degenerates at z={z!r}: Psi'''(z) = 0")
    L = seed.Lambda
    return -4.0 * L / (abs(f) ** 2 * (1.0 + L * abs(z) ** 2) ** 4)


def gauss_curvature_fd(seed: SeedData, z, h: float | None = None) -> float:
    """Curvature of ``lam |dz|^2`` from a five-point Laplacian of ``log lam``."""
    z = as_complex(z)
    h = 1e-3 * max(1.0, abs(z)) if h is None else float(h)
    lam0 = float(conformal_factor(seed, z))
    if lam0 == 0:
        raise BranchPoint(z)
    pts = np.array([z + h, z - h, z + 1j * h, z - 1j * h])
    lam = conformal_factor(seed, pts)
    if np.any(lam <= 0):
        raise BranchPoint(z, f"stencil at z={z!r} touches a branch point; shrink h")
    lap = (np.sum(np.log(lam)) - 4.0 * np.log(lam0)) / h**2
    return float(-lap / (2.0 * lam0))


@dataclass(frozen=True)
class Planarity:
    planar: bool
    reason: str
    span: int


def planarity(seed: SeedData) -> Planarity:
    """Decide whether the image lies in an affine 2-plane.

    A real relation ``a . X = const`` forces ``a . phi = 0``; with
    ``Psi''' != 0`` that pins ``a1 = a2 = 0`` and one linear condition on
    ``a3..a5``, so the image spans exactly three dimensions. Only a vanishing
    ``Psi'''`` (degree <= 2) degenerates, and then ``X`` is constant.
    """
    if seed.psi.degree <= 2:
        return Planarity(True, "constant: Psi''' vanishes, image is a point", 0)
    return Planarity(False, "spatial: image spans a 3-dimensional affine subspace", 3)
