"""Acceptance criteria, one test per claim; a PASS/FAIL line per criterion is printed at the end."""
import time
import warnings

import numpy as np
import pytest

from conftest import random_data, random_points, random_seed
from minimal5 import DegenerateSeedWarning, HoloPoly, MonomialSeed, cli
from minimal5.frames import (
    DEFAULT_LAMBDAS,
    associated_family_residual,
    convergence_order,
    flatness_residual,
    maurer_cartan,
    mu_nu,
    reconstruct_from_mu_nu,
)
from minimal5.mesh import DomainSpec, affine_span_dim, project, sample
from minimal5.monomial_family import monomial_primitive, polar_X, quartic_cartesian
from minimal5.seed_family import (
    SeedData,
    conformal_factor,
    gauss_curvature,
    gauss_curvature_fd,
    gauss_explicit,
    gauss_map,
    metric_factor,
    metric_factor_general,
    reconstruct_seed,
    seed_curve,
    seed_primitive,
    seed_X,
)
from minimal5.weierstrass import (
    build_phi,
    conformality_residual,
    eval_X,
    fd_gradient,
    immerse,
    laplacian_residual,
    null_residual,
    stencil_scale,
)

criterion = pytest.mark.criterion
QUARTIC = SeedData(HoloPoly.monomial(4), 3, 5)


def away_from_zeros(seed, pts, margin=0.3):
    roots = np.roots(seed.psi.derivative(3).coeffs[::-1])
    if roots.size == 0:
        return pts
    return np.array([z for z in pts if np.min(np.abs(z - roots)) > margin])


@criterion("1. null identity: 100 random data, coefficients and pointwise <= 1e-10, < 1 s")
def test_c01_null_identity():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst_c = worst_p = 0.0
    for _ in range(100):
        curve = build_phi(random_data(rng, 5))
        worst_c = max(worst_c, curve.null_polynomial().max_abs_coeff())
        for z in random_points(rng, 25):
            worst_p = max(worst_p, null_residual(curve, z))
    elapsed = time.perf_counter() - t0
    print(f"coeff {worst_c:.2e}  pointwise {worst_p:.2e}  {elapsed:.3f}s")
    assert worst_c <= 1e-10 and worst_p <= 1e-10
    assert elapsed < 1.0


@criterion("2. primitive identity: 100 random seeds, F_k' - phi_k <= 1e-12, < 1 s")
def test_c02_primitive_identity():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        seed = random_seed(rng, 8)
        for F, phi in zip(seed_primitive(seed).F, seed_curve(seed).phi):
            worst = max(worst, (F.derivative() - phi).max_abs_coeff())
    elapsed = time.perf_counter() - t0
    print(f"worst {worst:.2e}  {elapsed:.3f}s")
    assert worst <= 1e-12
    assert elapsed < 1.0


@criterion("3. metric formula: closed form vs 2 sum |phi|^2, 1e-12 relative, 25 points x 100 seeds")
def test_c03_metric():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(100):
        seed = random_seed(rng)
        curve = seed_curve(seed)
        for z in random_points(rng, 25):
            a = metric_factor(seed, z).lambda_conf
            b = metric_factor_general(curve, z)
            worst = max(worst, abs(a - b) / a)
    print(f"worst relative {worst:.2e}")
    assert worst <= 1e-12


@criterion("4. reconstruction: Psi recovered to 1e-10 relative, 10 points x 100 seeds")
def test_c04_reconstruction():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        seed = random_seed(rng)
        prim = seed_primitive(seed)
        for z in random_points(rng, 10):
            psi = seed.psi(z)
            worst = max(worst, abs(reconstruct_seed(prim, z) - psi) / abs(psi))
    print(f"worst relative {worst:.2e}")
    assert worst <= 1e-10


@criterion("5a. monomial closed form = general primitive for m = 3..8, <= 1e-12")
def test_c05a_monomial_closed_form():
    worst = 0.0
    for m in range(3, 9):
        ms = MonomialSeed(m, 3, 5)
        for p, q in zip(monomial_primitive(ms).F, seed_primitive(ms.to_seed()).F):
            worst = max(worst, (p - q).max_abs_coeff())
    assert worst <= 1e-12


@criterion("5b. quartic coefficients exactly as printed (6, -Lambda, 8, 8 l1, 8 l2)")
def test_c05b_quartic_printed_coefficients():
    ms = MonomialSeed(4, 3, 5)
    L = ms.Lambda
    F = monomial_primitive(ms).F
    got = (F[0].coeff(2), F[0].coeff(4), F[2].coeff(3), F[3].coeff(3), F[4].coeff(3))
    print(f"z^2 of F1 {got[0]}, z^4 of F1 {got[1]} (printed {-L}), F3..F5 {got[2:]}")
    assert got == (6, -L, 8, 8 * ms.lambda1, 8 * ms.lambda2)


@criterion("6a. quartic Cartesian vs polar on a 20x20 grid, <= 1e-10")
def test_c06a_cartesian_vs_polar():
    ms = MonomialSeed(4, 3, 5)
    r, th = np.meshgrid(np.linspace(0, 1, 20), np.linspace(0, 2 * np.pi, 20))
    diff = np.abs(quartic_cartesian(3, 5, r * np.cos(th), r * np.sin(th)) - polar_X(ms, r, th))
    print(f"max diff {diff.max():.2e}")
    assert diff.max() <= 1e-10


@criterion("6b. polar formulas vs 2 Re F for m = 3..8, <= 1e-10")
def test_c06b_polar_vs_primitive():
    r, th = np.meshgrid(np.linspace(0, 1, 20), np.linspace(0, 2 * np.pi, 20))
    worst = 0.0
    for m in range(3, 9):
        ms = MonomialSeed(m, 3, 5)
        ref = 2 * monomial_primitive(ms)(r * np.exp(1j * th)).real
        worst = max(worst, np.abs(polar_X(ms, r, th) - ref).max())
    print(f"max diff {worst:.2e}")
    assert worst <= 1e-10


POINTS7 = (0.5, 0.3 + 0.4j, -0.6 + 0.1j, 0.2 - 0.7j)


@criterion("7a. harmonicity and conformality converge at order 2 +- 0.3 on the quartic seed")
def test_c07a_convergence_order():
    im = immerse(seed_curve(QUARTIC))
    hs = [1e-2, 5e-3, 2.5e-3]
    for z in POINTS7:
        lap = convergence_order(hs, [laplacian_residual(im, z, h) for h in hs])
        conf = convergence_order(hs, [max(conformality_residual(im, z, h)) for h in hs])
        print(f"z={z}: laplacian order {lap:.3f}, conformality order {conf:.3f}")
        assert abs(lap - 2) <= 0.3 and abs(conf - 2) <= 0.3


@criterion("7b. harmonicity and conformality residuals at h = 1e-4 <= 1e-5 relative")
def test_c07b_residuals_at_small_h():
    im = immerse(seed_curve(QUARTIC))
    h = 1e-4
    for z in POINTS7:
        lap = laplacian_residual(im, z, h) / stencil_scale(im, z, h)
        Xu, Xv = fd_gradient(im, z, h)
        conf = max(conformality_residual(im, z, h)) / (Xu @ Xu + Xv @ Xv)
        print(f"z={z}: laplacian {lap:.2e}, conformality {conf:.2e}")
        assert lap <= 1e-5 and conf <= 1e-5


@criterion("8. Gauss map: quadric <= 1e-10, explicit form at 25 points, independent of Psi")
def test_c08_gauss_map():
    rng = np.random.default_rng(8)
    other = SeedData(HoloPoly([0, 0, 0, 0, 0, 2, 1]), 3, 5)
    a, b = seed_curve(QUARTIC), seed_curve(other)
    for z in random_points(rng, 25, 1.5):
        G = gauss_map(a, z)
        assert G.quadric_residual() <= 1e-10
        assert G.projectively_equal(gauss_explicit(QUARTIC, z))
        assert G.projectively_equal(gauss_map(b, z))


@criterion("9. Gauss curvature: closed form vs oracle 1e-4 at 50 points, K <= 0, -4.340e-4 at z = 1")
def test_c09_gauss_curvature():
    rng = np.random.default_rng(9)
    seeds = [QUARTIC, random_seed(rng, 6)]
    n = 0
    for seed in seeds:
        for z in away_from_zeros(seed, random_points(rng, 200))[:25]:
            K = gauss_curvature(seed, z)
            assert K <= 0
            assert abs(gauss_curvature_fd(seed, z, 1e-3) - K) <= 1e-4 * abs(K)
            n += 1
    assert n == 50
    unit = SeedData(HoloPoly.monomial(4))
    K1 = gauss_curvature(unit, 1.0)
    print(f"K(1) = {K1:.6e}, oracle {gauss_curvature_fd(unit, 1.0, 1e-3):.6e}")
    assert round(K1, 7) == -4.340e-4


def _span(seed):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateSeedWarning)
        return affine_span_dim(sample(seed, DomainSpec.disk(1.0, 16, 32)), 1e-8)


@criterion("10a. degree <= 3 seeds give span 2")
def test_c10a_low_degree_span():
    spans = {str(c): _span(SeedData(HoloPoly(c), 3, 5)) for c in ([0, 0, 0, 1], [1, 2, 0, 1], [0, 1, 5])}
    print(f"spans {spans}")
    assert all(s == 2 for s in spans.values())


@criterion("10b. general seeds give span 3")
def test_c10b_general_span():
    rng = np.random.default_rng(10)
    for _ in range(5):
        assert _span(random_seed(rng, 8, 4)) == 3
    assert _span(QUARTIC) == 3


@criterion("10c. (3,4,5) projection has rank 1")
def test_c10c_triple_rank():
    mesh = sample(QUARTIC, DomainSpec.disk(1.0, 16, 32))
    assert affine_span_dim(project(mesh, (3, 4, 5)), 1e-8) == 1


@criterion("11. associated family: flat to 1e-3 (1 + |A_u||A_v|) at 10 points, order >= 1, lambda = 1 exact")
def test_c11_associated_family():
    rng = np.random.default_rng(11)
    pts = away_from_zeros(QUARTIC, random_points(rng, 40, 0.9))[:10]
    assert len(pts) == 10
    hs = [4e-3, 2e-3, 1e-3]
    for z in pts:
        mc = maurer_cartan(QUARTIC, z, 1e-3)
        bound = 1e-3 * (1 + np.linalg.norm(mc.A_u) * np.linalg.norm(mc.A_v))
        base = flatness_residual(QUARTIC, z, 1e-3)
        assert base <= bound
        assert associated_family_residual(QUARTIC, z, 1e-3, 1.0) == base
        for lam in DEFAULT_LAMBDAS:
            res = [associated_family_residual(QUARTIC, z, h, lam) for h in hs]
            assert res[-1] <= bound
            assert convergence_order(hs, res) >= 1


@criterion("12a. three-path reconstruction agrees to 1e-10 at 25 random (seed, z)")
def test_c12a_three_paths():
    rng = np.random.default_rng(12)
    for _ in range(25):
        seed = random_seed(rng)
        z = random_points(rng, 1)[0]
        a = seed_X(seed, z) - seed_X(seed, 0)
        b = eval_X(immerse(seed_curve(seed), 0), z)
        c = reconstruct_from_mu_nu(mu_nu(seed), 0, z)
        tol = 1e-10 * (1 + np.abs(a).max())
        assert np.abs(a - b).max() <= tol and np.abs(b - c).max() <= tol


@criterion("12b. quartic at z = 1, Lambda = 35 equals (-58, 0, 16, 48, 80)")
def test_c12b_quartic_value():
    got = reconstruct_from_mu_nu(mu_nu(QUARTIC), 0, 1.0)
    print(f"mu-nu {got}, seed_X {seed_X(QUARTIC, 1.0)}")
    np.testing.assert_allclose(got, [-58, 0, 16, 48, 80], atol=1e-10)


@criterion("13. CLI generate: Figure-1 OBJ with configured vertex count, byte-identical reruns")
def test_c13_cli_determinism(tmp_path, capsys):
    blobs = []
    for name in ("a.obj", "b.obj"):
        path = tmp_path / name
        code = cli.main(["generate", "--monomial", "m=4,l1=3,l2=5", "--disk", "r=1,res=64x128",
                         "--project", "1,2,3", "--format", "obj", "-o", str(path)])
        assert code == 0
        blobs.append(path.read_bytes())
    capsys.readouterr()
    assert blobs[0] == blobs[1]
    lines = blobs[0].decode("ascii").split("\n")
    verts = [ln for ln in lines if ln.startswith("v ")]
    faces = [ln for ln in lines if ln.startswith("f ")]
    assert len(verts) == 64 * 129
    assert len(faces) == 63 * 128
    assert all(len(v.split()) == 4 for v in verts)
    assert max(int(i) for f in faces for i in f.split()[1:]) == len(verts)
