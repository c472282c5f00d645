"""Verification suite run by ``minimal5 verify``.

Each check evaluates one identity on a seed (or raw Weierstrass data) at a
deterministic set of sample points and reports the worst normalized
residual against its tolerance.
"""
from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import frames
from .errors import DegenerateSeedWarning
from .mesh import DomainSpec, affine_span_dim, sample
from .monomial_family import MonomialSeed
from .seed_family import (
    SeedData,
    SeedPrimitive,
    conformal_factor,
    gauss_curvature,
    gauss_curvature_fd,
    gauss_explicit,
    gauss_map,
    metric_factor_general,
    planarity,
    reconstruct_seed,
    seed_curve,
    seed_primitive,
    seed_to_data,
)
from .weierstrass import (
    NullCurve,
    WeierstrassData,
    build_phi,
    conformality_residual,
    fd_gradient,
    immerse,
    laplacian_residual,
    null_residual,
    regularity,
    second_derivative_scale,
)

CHECKS = (
    "null", "primitive", "metric", "reconstruction", "gauss_quadric", "harmonic",
    "conformal", "curvature", "span", "flat_family", "mu_nu",
)

DEFAULT_TOLERANCES = {
    "null": 1e-10,
    "primitive": 1e-12,
    "metric": 1e-12,
    "metric_fd": 1e-6,
    "reconstruction": 1e-10,
    "gauss_quadric": 1e-10,
    "harmonic": 1e-5,
    "conformal": 1e-5,
    "curvature": 1e-4,
    "span": 1e-8,
    "flat_family": 1e-3,
    "mu_nu": 1e-10,
}


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "n/a"
    value: float | None = None
    tolerance: float | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Subject:
    """What is being verified: a seed, or raw Weierstrass data."""

    seed: SeedData | None
    data: WeierstrassData
    curve: NullCurve
    primitive: SeedPrimitive | None = None
    points: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    @classmethod
    def build(cls, source, n_points: int = 25, radius: float = 0.9, rng_seed: int = 0):
        if isinstance(source, MonomialSeed):
            source = source.to_seed()
        rng = np.random.default_rng(rng_seed)
        rad = radius * np.sqrt(rng.uniform(0.05, 1.0, n_points))
        pts = rad * np.exp(2j * np.pi * rng.uniform(size=n_points))
        if isinstance(source, SeedData):
            curve = seed_curve(source)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DegenerateSeedWarning)
                data = seed_to_data(source)
            return cls(source, data, curve, seed_primitive(source), pts)
        if isinstance(source, WeierstrassData):
            return cls(None, source, build_phi(source), None, pts)
        raise TypeError(f"cannot verify {type(source).__name__}")

    def regular_points(self) -> np.ndarray:
        reg = regularity(self.curve, self.points)
        return self.points[reg > 1e-12 * max(1.0, float(np.max(reg, initial=0.0)))]


def _result(name, value, tol, detail=""):
    ok = bool(np.isfinite(value) and value <= tol)
    return CheckResult(name, "pass" if ok else "fail", float(value), tol, detail)


def _na(name, why):
    return CheckResult(name, "n/a", None, None, why)


def check_null(s: Subject, tol: float) -> CheckResult:
    d = s.data
    scale = 1.0 + max(p.max_abs_coeff() for p in (d.f, d.g1, d.g2, d.g3))
    coeff = s.curve.null_polynomial().max_abs_coeff() / scale
    pt = max(
        (null_residual(s.curve, z) / (1.0 + float(regularity(s.curve, z))) for z in s.points),
        default=0.0,
    )
    return _result("null", max(coeff, pt), tol, "max of coefficient and pointwise residuals")


def check_primitive(s: Subject, tol: float) -> CheckResult:
    prims = s.primitive.F if s.primitive is not None else immerse(s.curve).primitive
    worst = 0.0
    for F, phi in zip(prims, s.curve.phi):
        err = (F.derivative() - phi).max_abs_coeff() / max(1.0, phi.max_abs_coeff())
        worst = max(worst, err)
    return _result("primitive", worst, tol, "max |F_k' - phi_k| over coefficients")


def check_metric(s: Subject, tolerances: dict) -> CheckResult:
    pts = s.regular_points()
    if s.seed is not None:
        a = conformal_factor(s.seed, pts)
        b = metric_factor_general(s.curve, pts)
        err = float(np.max(np.abs(a - b) / (1.0 + a), initial=0.0))
        return _result("metric", err, tolerances["metric"], "closed form vs 2 sum |phi_k|^2")
    im = immerse(s.curve)
    worst = 0.0
    for z in pts:
        h = 1e-4 * (1 + abs(z))
        Xu, _ = fd_gradient(im, z, h)
        lam = float(metric_factor_general(s.curve, z))
        worst = max(worst, abs(Xu @ Xu - lam) / (1.0 + lam))
    return _result("metric", worst, tolerances["metric_fd"], "2 sum |phi_k|^2 vs finite-difference |X_u|^2")


def check_reconstruction(s: Subject, tol: float) -> CheckResult:
    if s.seed is None:
        return _na("reconstruction", "raw Weierstrass data has no seed")
    worst = 0.0
    for z in s.points:
        psi = complex(s.seed.psi(z))
        worst = max(worst, abs(reconstruct_seed(s.primitive, z) - psi) / (1.0 + abs(psi)))
    return _result("reconstruction", worst, tol)


def check_gauss_quadric(s: Subject, tol: float) -> CheckResult:
    worst = 0.0
    for z in s.regular_points():
        G = gauss_map(s.curve, z)
        worst = max(worst, G.quadric_residual())
        if s.seed is not None:
            worst = max(worst, float(np.max(np.abs(G.w - gauss_explicit(s.seed, z).w))))
    return _result("gauss_quadric", worst, tol, "quadric residual and match with explicit form")


def check_harmonic(s: Subject, tol: float) -> CheckResult:
    im = immerse(s.curve)
    worst = 0.0
    for z in s.regular_points():
        h = 1e-4 * (1 + abs(z))
        scale = second_derivative_scale(im, z, h)
        if scale > 0:
            worst = max(worst, laplacian_residual(im, z, h) / scale)
    return _result("harmonic", worst, tol, "Laplacian relative to |X_uu| + |X_vv|")


def check_conformal(s: Subject, tol: float) -> CheckResult:
    im = immerse(s.curve)
    worst = 0.0
    for z in s.regular_points():
        h = 1e-4 * (1 + abs(z))
        Xu, Xv = fd_gradient(im, z, h)
        scale = Xu @ Xu + Xv @ Xv
        a, b = conformality_residual(im, z, h)
        worst = max(worst, max(a, b) / scale)
    return _result("conformal", worst, tol)


def away_from_branch(seed: SeedData, pts: np.ndarray, margin: float = 0.3) -> np.ndarray:
    f = seed.psi.derivative(3)
    if f.degree < 1:
        return pts
    roots = np.roots(f.coeffs[::-1])
    d = np.min(np.abs(pts[:, None] - roots[None, :]), axis=1)
    return pts[d > margin]


def check_curvature(s: Subject, tol: float) -> CheckResult:
    if s.seed is None:
        return _na("curvature", "curvature is only provided for the seed family")
    if s.seed.degenerate:
        return _na("curvature", "degenerate seed: metric vanishes identically")
    worst, positive = 0.0, 0
    for z in away_from_branch(s.seed, s.regular_points()):
        K = gauss_curvature(s.seed, z)
        K_fd = gauss_curvature_fd(s.seed, z)
        worst = max(worst, abs(K - K_fd) / abs(K))
        positive += K > 0
    if positive:
        return CheckResult("curvature", "fail", worst, tol, f"{positive} points with K > 0")
    return _result("curvature", worst, tol, "closed form vs finite-difference oracle")


def check_span(s: Subject, tol: float) -> CheckResult:
    if s.seed is None:
        return _na("span", "span prediction is only available for the seed family")
    mesh = sample(s.seed, DomainSpec.disk(1.0, 12, 24))
    dim = affine_span_dim(mesh, tol)
    expected = planarity(s.seed).span
    status = "pass" if dim == expected and dim <= 3 else "fail"
    return CheckResult("span", status, float(dim), float(expected), "affine span of sampled mesh vs prediction")


def check_flat_family(s: Subject, tol: float, n_points: int = 3) -> CheckResult:
    if s.seed is not None and s.seed.degenerate:
        return _na("flat_family", "degenerate seed: no immersion")
    source = s.seed if s.seed is not None else immerse(s.curve)
    pts = s.regular_points()
    if s.seed is not None:
        pts = away_from_branch(s.seed, pts)
    worst = 0.0
    for z in pts[:n_points]:
        mc = frames.maurer_cartan(source, z, 1e-3)
        scale = 1.0 + np.linalg.norm(mc.A_u) * np.linalg.norm(mc.A_v)
        for lam in frames.DEFAULT_LAMBDAS:
            worst = max(worst, frames.associated_family_residual(source, z, 1e-3, lam) / scale)
    return _result("flat_family", worst, tol, "max over lambda in {1, i, 2, e^(i pi/3)} at h=1e-3")


def check_mu_nu(s: Subject, tol: float) -> CheckResult:
    if s.seed is None:
        return _na("mu_nu", "raw Weierstrass data has no seed")
    mn = frames.mu_nu(s.seed)
    worst = mn.null_lift_polynomial().max_abs_coeff()
    for p, phi in zip(mn.product(), s.curve.phi):
        worst = max(worst, (p - phi).max_abs_coeff() / max(1.0, phi.max_abs_coeff()))
    prim = s.primitive
    z0 = 0j
    for z in s.points:
        a = frames.reconstruct_from_mu_nu(mn, z0, z)
        b = 2.0 * (prim(z) - prim(z0)).real
        worst = max(worst, float(np.max(np.abs(a - b))) / (1.0 + float(np.max(np.abs(b)))))
    return _result("mu_nu", worst, tol, "factorization, null lift and reconstruction")


def run_checks(source, names=CHECKS, tolerances: dict | None = None,
               primitive: SeedPrimitive | None = None, n_points: int = 25) -> list[CheckResult]:
    """Run the named checks. ``primitive`` substitutes the seed primitive under test."""
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    s = Subject.build(source, n_points=n_points)
    if primitive is not None:
        s.primitive = primitive
    dispatch = {
        "null": lambda: check_null(s, tol["null"]),
        "primitive": lambda: check_primitive(s, tol["primitive"]),
        "metric": lambda: check_metric(s, tol),
        "reconstruction": lambda: check_reconstruction(s, tol["reconstruction"]),
        "gauss_quadric": lambda: check_gauss_quadric(s, tol["gauss_quadric"]),
        "harmonic": lambda: check_harmonic(s, tol["harmonic"]),
        "conformal": lambda: check_conformal(s, tol["conformal"]),
        "curvature": lambda: check_curvature(s, tol["curvature"]),
        "span": lambda: check_span(s, tol["span"]),
        "flat_family": lambda: check_flat_family(s, tol["flat_family"]),
        "mu_nu": lambda: check_mu_nu(s, tol["mu_nu"]),
    }
    return [dispatch[n]() for n in names]
