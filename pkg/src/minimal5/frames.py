"""Numerical moving frames for minimal immersions in R^5.

Everything here is finite-difference numerics on top of an exact position
map: adapted frames ``(e1, e2, n1, n2, n3)``, the Maurer-Cartan form
``A_u du + A_v dv = F^T dF`` and its so(2)+so(3) / p split, the zero-curvature
residual of the associated family, the normal part of ``X_zz``, and the
``mu * nu`` factorization of the seed null curve.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BranchPoint, FrameDiscontinuity
from .holomorphic import HoloPoly, Z, as_complex
from .monomial_family import MonomialSeed
from .seed_family import SeedData, seed_curve, seed_primitive
from .weierstrass import Immersion, NullCurve, default_step, fd_gradient, regularity

GS_SKIP = 1e-6


def position_fn(source) -> Callable:
    """Return ``z -> X(z)`` for an Immersion, SeedData, MonomialSeed or callable."""
    if isinstance(source, MonomialSeed):
        source = source.to_seed()
    if isinstance(source, SeedData):
        prim = seed_primitive(source)
        return lambda z: 2.0 * prim(z).real
    if isinstance(source, Immersion) or callable(source):
        return source
    raise TypeError(f"unsupported immersion source {type(source).__name__}")


def _null_curve(source) -> NullCurve | None:
    if isinstance(source, MonomialSeed):
        source = source.to_seed()
    if isinstance(source, SeedData):
        return seed_curve(source)
    if isinstance(source, Immersion):
        return source.curve
    return None


@dataclass(frozen=True)
class AdaptedFrame:
    z: complex
    columns: np.ndarray  # 5x5, columns e1, e2, n1, n2, n3
    u: float

    @property
    def e1(self):
        return self.columns[:, 0]

    @property
    def e2(self):
        return self.columns[:, 1]

    @property
    def normals(self):
        return self.columns[:, 2:]

    @property
    def epsilon(self) -> np.ndarray:
        """Complex isotropic tangent vector ``e1 - i e2``."""
        return self.e1 - 1j * self.e2

    def gram_error(self) -> float:
        return float(np.max(np.abs(self.columns.T @ self.columns - np.eye(5))))


def _frame_at(X: Callable, z: complex, h: float, curve: NullCurve | None) -> AdaptedFrame:
    if curve is not None and regularity(curve, z) == 0:
        raise BranchPoint(z)
    Xu, Xv = fd_gradient(X, z, h)
    nu = np.linalg.norm(Xu)
    if not nu > 0:
        raise BranchPoint(z, f"vanishing tangent at z={z!r}")
    e1 = Xu / nu
    w = Xv - (Xv @ e1) * e1
    nw = np.linalg.norm(w)
    if not nw > GS_SKIP * np.linalg.norm(Xv):
        raise BranchPoint(z, f"tangent vectors are parallel at z={z!r}")
    cols = [e1, w / nw]
    for k in range(5):
        if len(cols) == 5:
            break
        v = np.zeros(5)
        v[k] = 1.0
        for _ in range(2):  # second pass restores orthogonality lost to rounding
            for c in cols:
                v = v - (c @ v) * c
        n = np.linalg.norm(v)
        if n < GS_SKIP:
            continue
        cols.append(v / n)
    if len(cols) < 5:
        raise RuntimeError(f"Gram-Schmidt completion failed at z={z!r}")
    F = np.column_stack(cols)
    if np.linalg.det(F) < 0:
        F[:, 4] = -F[:, 4]
    return AdaptedFrame(z, F, float(np.log(nu)))


def adapted_frame(source, z, h: float | None = None) -> AdaptedFrame:
    """Orthonormal frame with ``e1 = X_u/|X_u|`` and ``e2`` the unit part of ``X_v`` normal to ``e1``.

    Normals come from Gram-Schmidt of the standard basis in index order, which
    keeps the frame field smooth and deterministic. ``u = log |X_u|``.
    """
    z = as_complex(z)
    h = default_step(z) if h is None else float(h)
    return _frame_at(position_fn(source), z, h, _null_curve(source))


@dataclass(frozen=True)
class MaurerCartanSample:
    z: complex
    h: float
    A_u: np.ndarray
    A_v: np.ndarray
    asymmetry: float

    @property
    def omega(self):
        return self.A_u[:2, :2], self.A_v[:2, :2]

    @property
    def beta(self):
        return self.A_u[2:, :2], self.A_v[2:, :2]

    @property
    def nu_blk(self):
        return self.A_u[2:, 2:], self.A_v[2:, 2:]

    def reassemble(self):
        out = []
        for k in range(2):
            w, b, n = self.omega[k], self.beta[k], self.nu_blk[k]
            out.append(np.block([[w, -b.T], [b, n]]))
        return tuple(out)


class _FrameField:
    """Frame field evaluator shared by the stencil operations of one call."""

    def __init__(self, source, h: float):
        self.X = position_fn(source)
        self.curve = _null_curve(source)
        self.h = h

    def frame(self, z: complex) -> np.ndarray:
        return _frame_at(self.X, z, self.h, self.curve).columns

    def mc(self, z: complex):
        h = self.h
        F0 = self.frame(z)
        Fs = [self.frame(z + d) for d in (h, -h, 1j * h, -1j * h)]
        for Fn in Fs:
            if np.min(np.diag(F0.T @ Fn)) < 0.5:
                raise FrameDiscontinuity(
                    f"frame jumps between stencil points near z={z!r}; shrink h={h}"
                )
        raw_u = F0.T @ (Fs[0] - Fs[1]) / (2.0 * h)
        raw_v = F0.T @ (Fs[2] - Fs[3]) / (2.0 * h)
        scale = max(np.linalg.norm(raw_u), np.linalg.norm(raw_v))
        asym = max(np.linalg.norm(raw_u + raw_u.T), np.linalg.norm(raw_v + raw_v.T)) / 2.0
        A_u = (raw_u - raw_u.T) / 2.0
        A_v = (raw_v - raw_v.T) / 2.0
        return A_u, A_v, (asym / scale if scale > 0 else 0.0)


def maurer_cartan(source, z, h: float | None = None) -> MaurerCartanSample:
    """Central-difference ``A = F^T dF``, antisymmetrized.

    ``asymmetry`` is the symmetric part of the raw estimate relative to ``|A|``.
    """
    z = as_complex(z)
    h = default_step(z) if h is None else float(h)
    A_u, A_v, asym = _FrameField(source, h).mc(z)
    return MaurerCartanSample(z, h, A_u, A_v, asym)


_K_MASK = np.zeros((5, 5), dtype=bool)
_K_MASK[:2, :2] = True
_K_MASK[2:, 2:] = True


def cartan_split(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split into the block-diagonal (k) and off-diagonal (p) parts."""
    return np.where(_K_MASK, A, 0.0), np.where(_K_MASK, 0.0, A)


def family_coefficients(A_u, A_v, lam) -> tuple[np.ndarray, np.ndarray]:
    """du/dv coefficients of ``alpha_k + lam^-1 alpha_p' + lam alpha_p''``.

    ``alpha_p' = (P_u - i P_v)/2 dz`` and ``alpha_p'' = (P_u + i P_v)/2 dzbar``.
    """
    lam = as_complex(lam)
    if lam == 0:
        raise ValueError("spectral parameter must be nonzero")
    K_u, P_u = cartan_split(A_u)
    K_v, P_v = cartan_split(A_v)
    p10 = (P_u - 1j * P_v) / 2.0
    p01 = (P_u + 1j * P_v) / 2.0
    a, b = p10 * (1.0 / lam), p01 * lam
    B_u = K_u + a + b
    B_v = K_v + 1j * a + (-1j) * b
    return B_u, B_v


def _zero_curvature(field: _FrameField, z: complex, lam) -> float:
    h = field.h
    coeffs = {}
    for d in (0.0, h, -h, 1j * h, -1j * h):
        A_u, A_v, _ = field.mc(z + d)
        coeffs[d] = family_coefficients(A_u, A_v, lam)
    dBv_du = (coeffs[h][1] - coeffs[-h][1]) / (2.0 * h)
    dBu_dv = (coeffs[1j * h][0] - coeffs[-1j * h][0]) / (2.0 * h)
    B_u, B_v = coeffs[0.0]
    R = dBv_du - dBu_dv + B_u @ B_v - B_v @ B_u
    return float(np.linalg.norm(R))


def flatness_residual(source, z, h: float | None = None) -> float:
    """Frobenius norm of the du^dv coefficient of ``dA + A^A`` (nested central differences)."""
    z = as_complex(z)
    h = default_step(z) if h is None else float(h)
    return _zero_curvature(_FrameField(source, h), z, 1.0)


def associated_family_residual(source, z, h: float | None, lam) -> float:
    """Zero-curvature residual of the associated family at spectral parameter ``lam``."""
    if as_complex(lam) == 0:
        raise ValueError("spectral parameter must be nonzero")
    z = as_complex(z)
    h = default_step(z) if h is None else float(h)
    return _zero_curvature(_FrameField(source, h), z, lam)


def levi_civita_curvature(source, z, h: float | None = None) -> float:
    """``d omega_21 / (du dv)`` from differenced frames; equals ``-K e^{2u}``."""
    z = as_complex(z)
    h = default_step(z) if h is None else float(h)
    field = _FrameField(source, h)
    Av_p = field.mc(z + h)[1]
    Av_m = field.mc(z - h)[1]
    Au_p = field.mc(z + 1j * h)[0]
    Au_m = field.mc(z - 1j * h)[0]
    return float((Av_p[1, 0] - Av_m[1, 0] - Au_p[1, 0] + Au_m[1, 0]) / (2.0 * h))


def hopf_normal(source, z, h: float | None = None) -> np.ndarray:
    """``Omega = X_zz - 2 u_z X_z`` from central differences; a complex 5-vector."""
    z = as_complex(z)
    h = default_step(z) if h is None else float(h)
    X = position_fn(source)
    curve = _null_curve(source)
    if curve is not None and regularity(curve, z) == 0:
        raise BranchPoint(z)
    c = X(z)
    Xu, Xv = fd_gradient(X, z, h)
    Xuu = (X(z + h) - 2.0 * c + X(z - h)) / h**2
    Xvv = (X(z + 1j * h) - 2.0 * c + X(z - 1j * h)) / h**2
    Xuv = (X(z + h + 1j * h) - X(z + h - 1j * h) - X(z - h + 1j * h) + X(z - h - 1j * h)) / (
        4.0 * h**2
    )
    u_of = lambda w: _frame_at(X, w, h, curve).u
    u_u = (u_of(z + h) - u_of(z - h)) / (2.0 * h)
    u_v = (u_of(z + 1j * h) - u_of(z - 1j * h)) / (2.0 * h)
    X_z = (Xu - 1j * Xv) / 2.0
    X_zz = (Xuu - Xvv - 2j * Xuv) / 4.0
    u_z = (u_u - 1j * u_v) / 2.0
    return X_zz - 2.0 * u_z * X_z


# -- mu * nu factorization ------------------------------------------------
@dataclass(frozen=True)
class MuNu:
    mu: HoloPoly
    nu: tuple

    def product(self) -> tuple:
        return tuple(self.mu * n for n in self.nu)

    def null_lift_polynomial(self) -> HoloPoly:
        out = HoloPoly()
        for n in self.nu:
            out = out + n * n
        return out


def mu_nu(seed: SeedData) -> MuNu:
    """``mu = Psi'''/2`` and ``nu = (1 - Lz^2, i(1 + Lz^2), 2z, 2 l1 z, 2 l2 z)``."""
    L = seed.Lambda
    z2 = Z * Z
    nu = (
        1.0 - z2.scale(L),
        (1.0 + z2.scale(L)).scale(1j),
        Z.scale(2.0),
        Z.scale(2.0 * seed.lambda1),
        Z.scale(2.0 * seed.lambda2),
    )
    return MuNu(seed.psi.derivative(3).scale(0.5), nu)


def reconstruct_from_mu_nu(mn: MuNu, z0, z) -> np.ndarray:
    """``2 Re`` of the exact integral of ``mu nu`` from ``z0`` to ``z``."""
    z0 = as_complex(z0)
    out = []
    for p in mn.product():
        P = p.antiderivative()
        out.append(P(z) - P(z0))
    return 2.0 * np.stack(out, axis=-1).real


# -- sweeps -----------------------------------------------------------------
def convergence_order(hs: Sequence[float], residuals: Sequence[float]) -> float:
    """Least-squares slope of ``log residual`` against ``log h``."""
    return float(np.polyfit(np.log(hs), np.log(residuals), 1)[0])


DEFAULT_LAMBDAS = (1.0, 1j, 2.0, np.exp(1j * np.pi / 3))


def frames_sweep(
    source,
    points: Iterable,
    h: float = 1e-3,
    lambdas: Sequence = DEFAULT_LAMBDAS,
    hs: Sequence[float] = (4e-3, 2e-3, 1e-3),
    workers: int = 1,
) -> list[dict]:
    """Per-point flatness, associated-family and Hopf diagnostics."""

    def one(z):
        z = as_complex(z)
        mc = maurer_cartan(source, z, h)
        base = flatness_residual(source, z, h)
        scale = 1.0 + np.linalg.norm(mc.A_u) * np.linalg.norm(mc.A_v)
        fam = []
        for lam in lambdas:
            res = [associated_family_residual(source, z, hh, lam) for hh in hs]
            fam.append({
                "lambda": [float(np.real(lam)), float(np.imag(lam))],
                "residual": associated_family_residual(source, z, h, lam),
                "order": convergence_order(hs, res),
            })
        frame = adapted_frame(source, z, h)
        return {
            "z": [z.real, z.imag],
            "flatness": base,
            "tolerance": 1e-3 * scale,
            "asymmetry": mc.asymmetry,
            "gram_error": frame.gram_error(),
            "family": fam,
        }

    points = list(points)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, points))
    return [one(p) for p in points]
