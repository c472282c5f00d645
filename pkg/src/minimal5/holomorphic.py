"""Complex-coefficient polynomials in one variable.

Every holomorphic function handled by the package (the Weierstrass data,
the seed and its derivatives, the primitives) is a :class:`HoloPoly`.
Coefficients are stored low order first, so ``coeffs[k]`` multiplies ``z**k``.
"""
from __future__ import annotations

import numbers
from typing import Iterable, Sequence

import numpy as np

from .errors import DegreeCapError

DEGREE_CAP = 64


def as_complex(z) -> complex:
    """Coerce a scalar to ``complex``, rejecting NaN and infinities."""
    if isinstance(z, (list, tuple)) and len(z) == 2:
        z = complex(float(z[0]), float(z[1]))
    w = complex(z)
    if not (np.isfinite(w.real) and np.isfinite(w.imag)):
        raise ValueError(f"non-finite complex value: {w!r}")
    return w


def check_finite(z):
    """Return ``z`` as a complex scalar or complex ndarray, raising on non-finite entries."""
    if np.isscalar(z) or isinstance(z, numbers.Number):
        return as_complex(z)
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite value in evaluation points")
    return arr


class HoloPoly:
    """Immutable polynomial ``sum_k coeffs[k] * z**k`` with complex coefficients.

    Trailing exact zeros are stripped on construction, so the zero polynomial
    has an empty coefficient array and ``degree == -1``.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        c = np.array([as_complex(a) for a in coeffs], dtype=complex)
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        if c.size - 1 > DEGREE_CAP:
            raise DegreeCapError(f"degree {c.size - 1} exceeds cap {DEGREE_CAP}")
        c.setflags(write=False)
        self._c = c

    # -- constructors -----------------------------------------------------
    @classmethod
    def monomial(cls, k: int, coeff=1.0) -> "HoloPoly":
        if k < 0:
            raise ValueError("monomial power must be non-negative")
        return cls([0.0] * k + [coeff])

    @classmethod
    def constant(cls, c) -> "HoloPoly":
        return cls([c])

    @classmethod
    def zero(cls) -> "HoloPoly":
        return cls()

    # -- basic properties -------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return self._c.size - 1

    def is_zero(self) -> bool:
        return self._c.size == 0

    def coeff(self, k: int) -> complex:
        return complex(self._c[k]) if 0 <= k < self._c.size else 0j

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self._c))) if self._c.size else 0.0

    # -- evaluation -------------------------------------------------------
    def __call__(self, z):
        z = check_finite(z)
        acc = np.zeros_like(z) if isinstance(z, np.ndarray) else 0j
        for a in self._c[::-1]:
            acc = acc * z + a
        return acc

    # -- calculus ---------------------------------------------------------
    def derivative(self, order: int = 1) -> "HoloPoly":
        c = self._c
        for _ in range(order):
            if c.size <= 1:
                return HoloPoly()
            c = c[1:] * np.arange(1, c.size)
        return HoloPoly(c)

    def antiderivative(self, c0=0.0) -> "HoloPoly":
        c = self._c / np.arange(1, self._c.size + 1) if self._c.size else self._c
        return HoloPoly(np.concatenate(([as_complex(c0)], c)))

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "HoloPoly":
        if isinstance(other, HoloPoly):
            return other
        if isinstance(other, numbers.Number):
            return HoloPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(self._c.size, other._c.size)
        out = np.zeros(n, dtype=complex)
        out[: self._c.size] += self._c
        out[: other._c.size] += other._c
        return HoloPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return HoloPoly(-self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        if not isinstance(other, HoloPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return HoloPoly()
        if self.degree + other.degree > DEGREE_CAP:
            raise DegreeCapError(
                f"product degree {self.degree + other.degree} exceeds cap {DEGREE_CAP}"
            )
        return HoloPoly(np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def scale(self, s) -> "HoloPoly":
        return HoloPoly(self._c * as_complex(s))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = HoloPoly([1.0])
        for _ in range(n):
            out = out * self
        return out

    # -- comparison / display ---------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, HoloPoly):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(tuple(self._c.tolist()))

    def allclose(self, other: "HoloPoly", atol: float = 1e-12) -> bool:
        return (self - other).max_abs_coeff() <= atol

    def __repr__(self):
        return f"HoloPoly({[complex(a) for a in self._c]!r})"

    # -- serialization ----------------------------------------------------
    def to_json(self) -> list:
        return [[float(a.real), float(a.imag)] for a in self._c]

    @classmethod
    def from_json(cls, data: Sequence) -> "HoloPoly":
        coeffs = []
        for item in data:
            if isinstance(item, (list, tuple)):
                if len(item) != 2:
                    raise ValueError(f"coefficient must be [re, im], got {item!r}")
                coeffs.append(complex(float(item[0]), float(item[1])))
            else:
                coeffs.append(float(item))
        return cls(coeffs)


# Functional aliases mirroring the operator surface.
def evaluate(p: HoloPoly, z):
    return p(z)


def derivative(p: HoloPoly, order: int = 1) -> HoloPoly:
    return p.derivative(order)


def antiderivative(p: HoloPoly, c0=0.0) -> HoloPoly:
    return p.antiderivative(c0)


def add(p: HoloPoly, q: HoloPoly) -> HoloPoly:
    return p + q


def sub(p: HoloPoly, q: HoloPoly) -> HoloPoly:
    return p - q


def mul(p: HoloPoly, q: HoloPoly) -> HoloPoly:
    return p * q


def scale(p: HoloPoly, s) -> HoloPoly:
    return p.scale(s)


Z = HoloPoly([0.0, 1.0])
ONE = HoloPoly([1.0])
