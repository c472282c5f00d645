"""Closed forms for monomial seeds ``Psi = z^m``.

The polar and Cartesian formulas here are written out term by term rather
than routed through polynomial evaluation, so they act as an independent
path against :mod:`minimal5.seed_family`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .holomorphic import HoloPoly, check_finite
from .seed_family import SeedData, SeedPrimitive

M_CAP = 32


@dataclass(frozen=True)
class MonomialSeed:
    m: int
    lambda1: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self):
        if int(self.m) != self.m:
            raise ValueError("m must be an integer")
        object.__setattr__(self, "m", int(self.m))
        if not 3 <= self.m <= M_CAP:
            raise ValueError(f"m must satisfy 3 <= m <= {M_CAP}, got {self.m}")
        object.__setattr__(self, "lambda1", float(self.lambda1))
        object.__setattr__(self, "lambda2", float(self.lambda2))

    @property
    def Lambda(self) -> float:
        return 1.0 + self.lambda1**2 + self.lambda2**2

    @property
    def C_m(self) -> int:
        m = self.m
        return m * (m - 1) * (m - 2)

    def to_seed(self) -> SeedData:
        return SeedData(HoloPoly.monomial(self.m), self.lambda1, self.lambda2)

    def to_json(self) -> dict:
        return {"m": self.m, "lambda1": self.lambda1, "lambda2": self.lambda2}

    @classmethod
    def from_json(cls, data: dict) -> "MonomialSeed":
        if "m" not in data:
            raise ValueError("MonomialSeed requires key 'm'")
        return cls(int(data["m"]), float(data.get("lambda1", 0.0)), float(data.get("lambda2", 0.0)))


def monomial_primitive(ms: MonomialSeed) -> SeedPrimitive:
    m, L = ms.m, ms.Lambda
    low = m * (m - 1) / 2.0
    high = L * (m - 1) * (m - 2) / 2.0
    F1 = HoloPoly.monomial(m - 2, low) + HoloPoly.monomial(m, -high)
    F2 = HoloPoly.monomial(m - 2, 1j * low) + HoloPoly.monomial(m, 1j * high)
    k = float(m * (m - 2))
    F3 = HoloPoly.monomial(m - 1, k)
    F4 = HoloPoly.monomial(m - 1, ms.lambda1 * k)
    F5 = HoloPoly.monomial(m - 1, ms.lambda2 * k)
    return SeedPrimitive((F1, F2, F3, F4, F5), ms.to_seed())


def polar_X(ms: MonomialSeed, r, theta) -> np.ndarray:
    """Immersion in polar coordinates ``z = r e^{i theta}``; broadcasts over ``r, theta``."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    m, L = ms.m, ms.Lambda
    a = m * (m - 1)
    b = L * (m - 1) * (m - 2)
    c = 2.0 * m * (m - 2)
    X1 = a * r ** (m - 2) * np.cos((m - 2) * theta) - b * r**m * np.cos(m * theta)
    X2 = -a * r ** (m - 2) * np.sin((m - 2) * theta) - b * r**m * np.sin(m * theta)
    X3 = c * r ** (m - 1) * np.cos((m - 1) * theta)
    return np.stack([X1, X2, X3, ms.lambda1 * X3, ms.lambda2 * X3], axis=-1)


def quartic_cartesian(lambda1: float, lambda2: float, u, v) -> np.ndarray:
    """Quartic-seed immersion in Cartesian coordinates ``z = u + iv``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    L = 1.0 + lambda1**2 + lambda2**2
    X1 = 12.0 * (u**2 - v**2) - 6.0 * L * (u**4 - 6.0 * u**2 * v**2 + v**4)
    X2 = -24.0 * u * v - 24.0 * L * (u**3 * v - u * v**3)
    X3 = 16.0 * (u**3 - 3.0 * u * v**2)
    return np.stack([X1, X2, X3, lambda1 * X3, lambda2 * X3], axis=-1)


def monomial_metric(ms: MonomialSeed, z):
    """``C_m^2 |z|^{2m-6} (1 + L|z|^2)^2``."""
    az = np.abs(check_finite(z))
    return float(ms.C_m) ** 2 * az ** (2 * ms.m - 6) * (1.0 + ms.Lambda * az**2) ** 2
