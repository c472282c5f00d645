"""Parameter-grid sampling, coordinate projections, span detection and export."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .monomial_family import MonomialSeed, monomial_metric, polar_X
from .seed_family import SeedData, conformal_factor, metric_factor_general, seed_primitive
from .weierstrass import Immersion, NullCurve, immerse

PROJECTION_NOTE = "projection: not minimal unless affine span <= 3"


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    r_max: float = 1.0
    n_r: int = 2
    n_theta: int = 2
    u_min: float = 0.0
    u_max: float = 1.0
    v_min: float = 0.0
    v_max: float = 1.0
    n_u: int = 2
    n_v: int = 2

    def __post_init__(self):
        if self.kind == "disk":
            if not self.r_max > 0:
                raise ValueError("disk domain needs r_max > 0")
            if self.n_r < 2 or self.n_theta < 2:
                raise ValueError("disk resolutions n_r, n_theta must be >= 2")
        elif self.kind == "rectangle":
            if not (self.u_max > self.u_min and self.v_max > self.v_min):
                raise ValueError("rectangle extents must be positive")
            if self.n_u < 2 or self.n_v < 2:
                raise ValueError("rectangle resolutions n_u, n_v must be >= 2")
        else:
            raise ValueError(f"unknown domain kind {self.kind!r}; use 'disk' or 'rectangle'")

    @classmethod
    def disk(cls, r_max: float, n_r: int, n_theta: int) -> "DomainSpec":
        return cls("disk", r_max=float(r_max), n_r=int(n_r), n_theta=int(n_theta))

    @classmethod
    def rectangle(cls, u_min, u_max, v_min, v_max, n_u, n_v) -> "DomainSpec":
        return cls(
            "rectangle",
            u_min=float(u_min), u_max=float(u_max),
            v_min=float(v_min), v_max=float(v_max),
            n_u=int(n_u), n_v=int(n_v),
        )

    def to_json(self) -> dict:
        if self.kind == "disk":
            return {"kind": "disk", "r_max": self.r_max, "n_r": self.n_r, "n_theta": self.n_theta}
        return {
            "kind": "rectangle",
            "u_min": self.u_min, "u_max": self.u_max,
            "v_min": self.v_min, "v_max": self.v_max,
            "n_u": self.n_u, "n_v": self.n_v,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DomainSpec":
        data = dict(data)
        kind = data.pop("kind", None)
        if kind not in ("disk", "rectangle"):
            raise ValueError(f"domain.kind must be 'disk' or 'rectangle', got {kind!r}")
        return cls(kind, **data)


@dataclass(frozen=True)
class ProjectionSpec:
    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(idx) not in (2, 3):
            raise ValueError("a projection keeps 2 or 3 coordinates")
        if any(i < 1 or i > 5 for i in idx):
            raise ValueError("projection indices must lie in 1..5")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError("projection indices must be strictly increasing")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def parse(cls, text: str) -> "ProjectionSpec":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))


@dataclass
class MeshGrid:
    """Structured grid of sampled positions.

    ``params`` holds ``(r, theta)`` or ``(u, v)`` per vertex (see ``param_names``),
    ``z`` the complex parameter, ``positions`` one row per vertex, and ``coords``
    the 1-based ambient coordinate index of each position column.
    """

    params: np.ndarray
    z: np.ndarray
    positions: np.ndarray
    faces: np.ndarray
    shape: tuple
    param_names: tuple = ("u", "v")
    coords: tuple = (1, 2, 3, 4, 5)
    per_vertex: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.positions) != len(self.params):
            raise ValueError("positions and params must have equal length")
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.params)):
            raise ValueError("face index out of range")

    @property
    def n_vertices(self) -> int:
        return len(self.params)

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape),
            "param_names": list(self.param_names),
            "coords": list(self.coords),
            "params": self.params.tolist(),
            "z": [[float(w.real), float(w.imag)] for w in self.z],
            "positions": self.positions.tolist(),
            "faces": self.faces.tolist(),
            "per_vertex": {k: _nan_to_none(v) for k, v in self.per_vertex.items()},
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MeshGrid":
        z = np.array([complex(a, b) for a, b in data["z"]], dtype=complex)
        k = len(data["coords"])
        return cls(
            params=np.array(data["params"], dtype=float).reshape(-1, 2),
            z=z,
            positions=np.array(data["positions"], dtype=float).reshape(-1, k),
            faces=np.array(data["faces"], dtype=np.int64).reshape(-1, 4),
            shape=tuple(data["shape"]),
            param_names=tuple(data["param_names"]),
            coords=tuple(data["coords"]),
            per_vertex={
                name: np.array([np.nan if x is None else x for x in vals], dtype=float)
                for name, vals in data.get("per_vertex", {}).items()
            },
            metadata=dict(data.get("metadata", {})),
        )


def _nan_to_none(arr) -> list:
    return [None if not np.isfinite(x) else float(x) for x in np.asarray(arr, dtype=float)]


def _grid_faces(na: int, nb: int) -> np.ndarray:
    i, j = np.meshgrid(np.arange(na - 1), np.arange(nb - 1), indexing="ij")
    a = (i * nb + j).ravel()
    return np.stack([a, a + nb, a + nb + 1, a + 1], axis=1).astype(np.int64)


def _parameter_grid(dom: DomainSpec):
    if dom.kind == "disk":
        r = np.linspace(0.0, dom.r_max, dom.n_r)
        # the seam column theta = 2 pi duplicates theta = 0
        theta = np.linspace(0.0, 2.0 * np.pi, dom.n_theta + 1)
        R, T = np.meshgrid(r, theta, indexing="ij")
        z = R * np.exp(1j * T)
        return np.stack([R.ravel(), T.ravel()], axis=1), z.ravel(), R.shape, ("r", "theta")
    u = np.linspace(dom.u_min, dom.u_max, dom.n_u)
    v = np.linspace(dom.v_min, dom.v_max, dom.n_v)
    U, V = np.meshgrid(u, v, indexing="ij")
    z = U + 1j * V
    return np.stack([U.ravel(), V.ravel()], axis=1), z.ravel(), U.shape, ("u", "v")


def _curvature_channel(seed: SeedData, z: np.ndarray) -> np.ndarray:
    lam = conformal_factor(seed, z)
    L = seed.Lambda
    with np.errstate(divide="ignore", invalid="ignore"):
        K = -4.0 * L / (np.abs(seed.psi.derivative(3)(z)) ** 2 * (1.0 + L * np.abs(z) ** 2) ** 4)
    K[lam == 0] = np.nan
    return K


def _copy_seam(z, pos, per_vertex, shape):
    """Make the theta = 2 pi column an exact copy of theta = 0."""
    nr, nt = shape
    first = np.arange(nr) * nt
    last = first + nt - 1
    z[last] = z[first]
    pos[last] = pos[first]
    for arr in per_vertex.values():
        arr[last] = arr[first]


def sample(source, dom: DomainSpec) -> MeshGrid:
    """Sample an immersion source over ``dom``.

    ``source`` is an :class:`Immersion`, :class:`SeedData` or :class:`MonomialSeed`.
    Monomial seeds on disks are evaluated through the literal polar formulas.
    """
    params, z, shape, names = _parameter_grid(dom)
    per_vertex = {}
    meta = {"domain": dom.to_json()}
    if isinstance(source, MonomialSeed):
        if names == ("r", "theta"):
            pos = polar_X(source, params[:, 0], params[:, 1])
        else:
            pos = 2.0 * seed_primitive(source.to_seed())(z).real
        per_vertex["metric"] = monomial_metric(source, z)
        per_vertex["curvature"] = _curvature_channel(source.to_seed(), z)
        meta["source"] = {"monomial": source.to_json()}
    elif isinstance(source, SeedData):
        pos = 2.0 * seed_primitive(source)(z).real
        per_vertex["metric"] = conformal_factor(source, z)
        per_vertex["curvature"] = _curvature_channel(source, z)
        meta["source"] = {"seed": source.to_json()}
    elif isinstance(source, (Immersion, NullCurve)):
        im = source if isinstance(source, Immersion) else immerse(source)
        pos = im(z)
        per_vertex["metric"] = metric_factor_general(im.curve, z)
        meta["source"] = {"immersion": [p.to_json() for p in im.primitive]}
    else:
        raise TypeError(f"cannot sample {type(source).__name__}")
    pos = np.asarray(pos, dtype=float).reshape(-1, 5)
    if names == ("r", "theta"):
        _copy_seam(z, pos, per_vertex, shape)
    return MeshGrid(
        params=params,
        z=z,
        positions=pos,
        faces=_grid_faces(*shape),
        shape=tuple(shape),
        param_names=names,
        per_vertex=per_vertex,
        metadata=meta,
    )


def project(mesh: MeshGrid, spec: ProjectionSpec | Sequence[int]) -> MeshGrid:
    if not isinstance(spec, ProjectionSpec):
        spec = ProjectionSpec(tuple(spec))
    try:
        cols = [mesh.coords.index(i) for i in spec.indices]
    except ValueError:
        raise ValueError(f"mesh lacks coordinates {spec.indices}; it carries {mesh.coords}") from None
    meta = dict(mesh.metadata)
    meta["projection"] = list(spec.indices)
    meta["note"] = PROJECTION_NOTE
    return MeshGrid(
        params=mesh.params,
        z=mesh.z,
        positions=mesh.positions[:, cols].copy(),
        faces=mesh.faces,
        shape=mesh.shape,
        param_names=mesh.param_names,
        coords=spec.indices,
        per_vertex=dict(mesh.per_vertex),
        metadata=meta,
    )


def affine_span_dim(mesh_or_points, tol: float = 1e-8) -> int:
    """Number of singular values of the centered positions above ``tol * s_max``."""
    P = mesh_or_points.positions if isinstance(mesh_or_points, MeshGrid) else np.asarray(mesh_or_points)
    if len(P) < 4:
        raise ValueError("span detection needs at least 4 vertices")
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = np.linalg.svd(P - P.mean(axis=0), compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


# -- export ----------------------------------------------------------------
def mesh_to_obj(mesh: MeshGrid) -> str:
    if mesh.positions.shape[1] != 3:
        raise ValueError(
            f"OBJ needs 3-component positions, mesh has {mesh.positions.shape[1]}; "
            "project onto three coordinates first (e.g. --project 1,2,3)"
        )
    out = io.StringIO()
    out.write("# minimal5 mesh, coordinates " + ",".join(f"X{i}" for i in mesh.coords) + "\n")
    out.write(f"# {PROJECTION_NOTE}\n")
    out.write(f"# grid {mesh.shape[0]}x{mesh.shape[1]}, {mesh.n_vertices} vertices\n")
    for x, y, w in mesh.positions:
        out.write(f"v {x:.9g} {y:.9g} {w:.9g}\n")
    for a, b, c, d in mesh.faces + 1:
        out.write(f"f {a} {b} {c} {d}\n")
    return out.getvalue()


def mesh_to_csv(mesh: MeshGrid) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    channels = sorted(mesh.per_vertex)
    w.writerow(["u", "v"] + [f"X{i}" for i in mesh.coords] + channels)
    for k in range(mesh.n_vertices):
        row = [repr(float(mesh.z[k].real)), repr(float(mesh.z[k].imag))]
        row += [repr(float(x)) for x in mesh.positions[k]]
        row += ["" if not np.isfinite(mesh.per_vertex[c][k]) else repr(float(mesh.per_vertex[c][k]))
                for c in channels]
        w.writerow(row)
    return out.getvalue()


def export(mesh: MeshGrid, fmt: str, path) -> Path:
    path = Path(path)
    if fmt == "obj":
        text = mesh_to_obj(mesh)
    elif fmt == "csv":
        text = mesh_to_csv(mesh)
    elif fmt == "json":
        text = json.dumps(mesh.to_json(), indent=None, separators=(",", ":")) + "\n"
    else:
        raise ValueError(f"unknown export format {fmt!r}; use obj, csv or json")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
    return path


def load_mesh_json(path) -> MeshGrid:
    with open(path, encoding="ascii") as fh:
        return MeshGrid.from_json(json.load(fh))


def read_csv_positions(path) -> tuple[list, np.ndarray]:
    """Read back the ``X*`` columns of an exported CSV."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    cols = [i for i, h in enumerate(header) if h.startswith("X")]
    data = np.array([[float(r[i]) for i in cols] for r in rows[1:]], dtype=float)
    return [header[i] for i in cols], data
