"""Weierstrass-type representation of conformal minimal surfaces in R^5.

Given holomorphic data ``(f, g1, g2, g3)`` the null curve is

    phi1 = f (1 - s) / 2,  phi2 = i f (1 + s) / 2,  phi3..5 = f g1, f g2, f g3

with ``s = g1^2 + g2^2 + g3^2``, and the immersion is ``X = 2 Re F`` where
``F`` is the primitive of the null curve vanishing at a base point.
Polynomial data makes the primitive exact, so no quadrature is involved.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .holomorphic import HoloPoly, as_complex, check_finite


@dataclass(frozen=True)
class WeierstrassData:
    f: HoloPoly
    g1: HoloPoly
    g2: HoloPoly
    g3: HoloPoly

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_json() for k in ("f", "g1", "g2", "g3")}

    @classmethod
    def from_json(cls, data: dict) -> "WeierstrassData":
        missing = {"f", "g1", "g2", "g3"} - set(data)
        if missing:
            raise ValueError(f"WeierstrassData missing keys: {sorted(missing)}")
        return cls(*(HoloPoly.from_json(data[k]) for k in ("f", "g1", "g2", "g3")))


@dataclass(frozen=True)
class NullCurve:
    """Five holomorphic components ``phi_1..phi_5``."""

    phi: tuple

    def __post_init__(self):
        if len(self.phi) != 5:
            raise ValueError("a null curve in C^5 has exactly five components")
        object.__setattr__(self, "phi", tuple(self.phi))

    def null_polynomial(self) -> HoloPoly:
        """``sum_k phi_k^2`` as a polynomial; zero for genuine null curves."""
        out = HoloPoly()
        for p in self.phi:
            out = out + p * p
        return out

    def __call__(self, z) -> np.ndarray:
        """Stack of ``phi_k(z)`` along the last axis."""
        return np.stack([p(z) for p in self.phi], axis=-1)


@dataclass(frozen=True)
class Immersion:
    """Exact primitive ``F`` of a null curve with ``F(z0) = 0``."""

    primitive: tuple
    z0: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "primitive", tuple(self.primitive))
        object.__setattr__(self, "z0", as_complex(self.z0))

    @property
    def curve(self) -> NullCurve:
        return NullCurve(tuple(F.derivative() for F in self.primitive))

    def F(self, z) -> np.ndarray:
        return np.stack([p(z) for p in self.primitive], axis=-1)

    def __call__(self, z) -> np.ndarray:
        return 2.0 * self.F(z).real


def build_phi(data: WeierstrassData) -> NullCurve:
    f, g1, g2, g3 = data.f, data.g1, data.g2, data.g3
    s = g1 * g1 + g2 * g2 + g3 * g3
    phi1 = (f * (1.0 - s)).scale(0.5)
    phi2 = (f * (1.0 + s)).scale(0.5j)
    return NullCurve((phi1, phi2, f * g1, f * g2, f * g3))


def null_residual(curve: NullCurve, z) -> float:
    """``|sum_k phi_k(z)^2|`` evaluated pointwise."""
    v = curve(as_complex(z))
    return float(abs(np.sum(v * v)))


def regularity(curve: NullCurve, z):
    """``sum_k |phi_k(z)|^2``; zero exactly at branch points."""
    v = curve(check_finite(z))
    return np.sum(np.abs(v) ** 2, axis=-1)


def immerse(curve: NullCurve, z0=0j) -> Immersion:
    z0 = as_complex(z0)
    prims = []
    for p in curve.phi:
        P = p.antiderivative()
        prims.append(P - P(z0))
    return Immersion(tuple(prims), z0)


def eval_X(im: Immersion, z) -> np.ndarray:
    """``2 Re F(z)``; a 5-vector, or an array with a trailing axis of 5."""
    return im(check_finite(z))


def default_step(z) -> float:
    return 1e-4 * (1.0 + abs(z))


# -- finite-difference oracles --------------------------------------------
def _position_fn(source) -> Callable:
    if isinstance(source, Immersion):
        return source
    if callable(source):
        return source
    raise TypeError(f"cannot evaluate positions of {type(source).__name__}")


def fd_laplacian(X: Callable, z: complex, h: float) -> np.ndarray:
    """Five-point central-difference Laplacian of ``X`` at ``z``."""
    c = X(z)
    lap = (X(z + h) + X(z - h) + X(z + 1j * h) + X(z - 1j * h) - 4.0 * c) / h**2
    if not np.all(np.isfinite(lap)):
        raise FloatingPointError(f"non-finite Laplacian stencil at z={z!r}, h={h}")
    return lap


def fd_gradient(X: Callable, z: complex, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Central differences ``(X_u, X_v)``."""
    Xu = (X(z + h) - X(z - h)) / (2.0 * h)
    Xv = (X(z + 1j * h) - X(z - 1j * h)) / (2.0 * h)
    return Xu, Xv


def laplacian_residual(im, z, h: float | None = None) -> float:
    """Euclidean norm of the central-difference Laplacian of ``X`` at ``z``.

    Converges to zero at rate ``O(h^2)`` for harmonic ``X``.
    """
    z = as_complex(z)
    h = default_step(z) if h is None else float(h)
    if h <= 0:
        raise ValueError("step h must be positive")
    return float(np.linalg.norm(fd_laplacian(_position_fn(im), z, h)))


def stencil_scale(im, z, h: float) -> float:
    """Largest ``|X|`` over the five-point stencil; the natural scale for residuals."""
    X = _position_fn(im)
    z = as_complex(z)
    pts = [z, z + h, z - h, z + 1j * h, z - 1j * h]
    return max(float(np.linalg.norm(X(p))) for p in pts)


def second_derivative_scale(im, z, h: float) -> float:
    """``|X_uu| + |X_vv|``, the size of the terms that cancel in the Laplacian."""
    X = _position_fn(im)
    z = as_complex(z)
    c = X(z)
    Xuu = (X(z + h) - 2.0 * c + X(z - h)) / h**2
    Xvv = (X(z + 1j * h) - 2.0 * c + X(z - 1j * h)) / h**2
    return float(np.linalg.norm(Xuu) + np.linalg.norm(Xvv))


def conformality_residual(im, z, h: float | None = None) -> tuple[float, float]:
    """Return ``(| |X_u|^2 - |X_v|^2 |, |X_u . X_v|)`` from central differences."""
    z = as_complex(z)
    h = default_step(z) if h is None else float(h)
    if h <= 0:
        raise ValueError("step h must be positive")
    Xu, Xv = fd_gradient(_position_fn(im), z, h)
    return float(abs(Xu @ Xu - Xv @ Xv)), float(abs(Xu @ Xv))


def complex_tangent_square(curve: NullCurve, z) -> complex:
    """``<X_z, X_z>`` from the polynomials: equals ``sum phi_k(z)^2`` since ``X_z = phi``."""
    v = curve(as_complex(z))
    return complex(np.sum(v * v))


def jacobian(im: Immersion, z) -> np.ndarray:
    """Exact 5x2 Jacobian ``[X_u | X_v]`` with ``X_u = 2 Re phi``, ``X_v = -2 Im phi``."""
    v = im.curve(as_complex(z))
    return np.column_stack([2.0 * v.real, -2.0 * v.imag])


def min_singular_value(im: Immersion, z) -> float:
    return float(np.linalg.svd(jacobian(im, z), compute_uv=False)[-1])
