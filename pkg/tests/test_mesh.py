import json

import numpy as np
import pytest

from minimal5 import HoloPoly, MonomialSeed
from minimal5.mesh import (
    PROJECTION_NOTE,
    DomainSpec,
    MeshGrid,
    ProjectionSpec,
    affine_span_dim,
    export,
    load_mesh_json,
    mesh_to_obj,
    project,
    read_csv_positions,
    sample,
)
from minimal5.monomial_family import polar_X
from minimal5.seed_family import SeedData, conformal_factor, seed_curve, seed_X
from minimal5.weierstrass import WeierstrassData, build_phi, immerse

QUARTIC = MonomialSeed(4, 3, 5)


def plane():
    one = HoloPoly.constant(1)
    return immerse(build_phi(WeierstrassData(one, HoloPoly(), HoloPoly(), HoloPoly())))


@pytest.fixture(scope="module")
def quartic_mesh():
    return sample(QUARTIC, DomainSpec.disk(1.0, 32, 64))


def test_domain_validation():
    with pytest.raises(ValueError):
        DomainSpec.disk(0, 4, 4)
    with pytest.raises(ValueError):
        DomainSpec.disk(1, 1, 4)
    with pytest.raises(ValueError):
        DomainSpec.rectangle(0, 0, 0, 1, 4, 4)
    d = DomainSpec.rectangle(-1, 1, 0, 2, 3, 5)
    assert DomainSpec.from_json(json.loads(json.dumps(d.to_json()))) == d


def test_projection_spec():
    assert ProjectionSpec.parse("1,2,3").indices == (1, 2, 3)
    for bad in ["1", "1,2,3,4", "2,1", "0,1", "1,6", "3,3"]:
        with pytest.raises(ValueError):
            ProjectionSpec.parse(bad)


def test_figure_mesh_layout(quartic_mesh):
    m = quartic_mesh
    assert m.n_vertices == 32 * 65
    assert m.faces.shape == (31 * 64, 4)
    assert m.faces.min() == 0 and m.faces.max() == m.n_vertices - 1
    k = int(np.argmin(np.abs(m.z - 1.0)))
    assert m.z[k] == 1.0
    np.testing.assert_allclose(m.positions[k], seed_X(QUARTIC.to_seed(), 1.0), atol=1e-12)
    np.testing.assert_allclose(m.positions[k], [-198, 0, 16, 48, 80], atol=1e-12)


def test_seam_duplicated(quartic_mesh):
    P = quartic_mesh.positions.reshape(32, 65, 5)
    np.testing.assert_array_equal(P[:, 0], P[:, -1])


def test_metric_channel(quartic_mesh):
    m = quartic_mesh
    expected = conformal_factor(QUARTIC.to_seed(), m.z)
    np.testing.assert_allclose(m.per_vertex["metric"], expected, rtol=1e-12)
    assert np.isnan(m.per_vertex["curvature"][np.abs(m.z) == 0]).all()


def test_plane_rectangle():
    m = sample(plane(), DomainSpec.rectangle(0, 1, 0, 1, 6, 7))
    assert m.n_vertices == 42
    assert np.all(m.positions[:, 3:] == 0)
    assert affine_span_dim(m) == 2


def test_spans(quartic_mesh):
    assert affine_span_dim(quartic_mesh, 1e-8) == 3
    assert affine_span_dim(project(quartic_mesh, (3, 4, 5))) == 1
    assert affine_span_dim(np.ones((5, 3))) == 0
    with pytest.raises(ValueError):
        affine_span_dim(np.zeros((3, 3)))


def test_span_brute_force_oracle(quartic_mesh):
    # X4 = 3 X3 and X5 = 5 X3, so (X1, X2, X3) carry all variation.
    P = quartic_mesh.positions
    np.testing.assert_allclose(P[:, 3], 3 * P[:, 2], atol=1e-12)
    np.testing.assert_allclose(P[:, 4], 5 * P[:, 2], atol=1e-12)
    assert np.linalg.matrix_rank(P[:, :3] - P[:, :3].mean(axis=0)) == 3


def test_projection_commutes_with_sampling(quartic_mesh):
    p = project(quartic_mesh, (1, 2, 3))
    direct = polar_X(QUARTIC, quartic_mesh.params[:, 0], quartic_mesh.params[:, 1])[:, :3]
    direct = direct.reshape(32, 65, 3)
    direct[:, -1] = direct[:, 0]
    np.testing.assert_array_equal(p.positions, direct.reshape(-1, 3))
    assert p.metadata["note"] == PROJECTION_NOTE
    np.testing.assert_array_equal(p.faces, quartic_mesh.faces)


def test_projection_of_projection(quartic_mesh):
    p = project(project(quartic_mesh, (1, 3, 5)), (3, 5))
    np.testing.assert_array_equal(p.positions, quartic_mesh.positions[:, [2, 4]])
    with pytest.raises(ValueError):
        project(p, (1, 2))


def test_planar_projection_frequencies():
    n = 128
    m = sample(QUARTIC, DomainSpec.disk(0.8, 2, n))
    ring = project(m, (1, 2)).positions.reshape(2, n + 1, 2)[1, :-1]
    w = ring[:, 0] + 1j * ring[:, 1]
    spec = np.abs(np.fft.fft(w))
    big = set(np.flatnonzero(spec > 1e-6 * spec.max()))
    assert big == {n - 2, 4}  # e^{-2i theta} and e^{4i theta}


def test_obj_export(tmp_path, quartic_mesh):
    path = export(project(quartic_mesh, (1, 2, 3)), "obj", tmp_path / "q.obj")
    raw = path.read_bytes()
    assert b"\r" not in raw
    raw.decode("ascii")
    lines = raw.decode().splitlines()
    v = [ln for ln in lines if ln.startswith("v ")]
    f = [ln for ln in lines if ln.startswith("f ")]
    assert len(v) == 32 * 65
    assert len(f) == 31 * 64
    assert all(1 <= int(i) <= len(v) for ln in f for i in ln.split()[1:])
    assert all(len(ln.split()) == 4 for ln in v)


@pytest.mark.parametrize("coords", [(1, 2), (1, 2, 3, 4, 5)])
def test_obj_rejects_non_3d(coords, quartic_mesh):
    m = quartic_mesh if len(coords) == 5 else project(quartic_mesh, coords)
    with pytest.raises(ValueError, match="project"):
        mesh_to_obj(m)


def test_csv_round_trip(tmp_path, quartic_mesh):
    p = project(quartic_mesh, (1, 2))
    path = export(p, "csv", tmp_path / "q.csv")
    names, pos = read_csv_positions(path)
    assert names == ["X1", "X2"]
    np.testing.assert_array_equal(pos, p.positions)
    header = path.read_text().splitlines()[0]
    assert header == "u,v,X1,X2,curvature,metric"


def test_json_round_trip(tmp_path, quartic_mesh):
    path = export(quartic_mesh, "json", tmp_path / "q.json")
    back = load_mesh_json(path)
    np.testing.assert_array_equal(back.positions, quartic_mesh.positions)
    np.testing.assert_array_equal(back.faces, quartic_mesh.faces)
    np.testing.assert_array_equal(back.z, quartic_mesh.z)
    assert back.coords == quartic_mesh.coords


def test_unknown_format(tmp_path, quartic_mesh):
    with pytest.raises(ValueError):
        export(quartic_mesh, "ply", tmp_path / "q.ply")


def test_seed_and_immersion_paths_agree():
    seed = SeedData(HoloPoly([0, 0, 1, 2, 0, 1j]), 1, -1)
    dom = DomainSpec.rectangle(-0.5, 0.5, -0.5, 0.5, 5, 5)
    a = sample(seed, dom)
    b = sample(immerse(seed_curve(seed)), dom)
    offset = seed_X(seed, 0)
    np.testing.assert_allclose(a.positions - offset, b.positions, atol=1e-12)


def test_mesh_validation():
    with pytest.raises(ValueError):
        MeshGrid(np.zeros((4, 2)), np.zeros(4), np.zeros((3, 5)), np.zeros((0, 4), int), (2, 2))
    with pytest.raises(ValueError):
        MeshGrid(np.zeros((4, 2)), np.zeros(4), np.zeros((4, 5)), np.array([[0, 1, 2, 9]]), (2, 2))
