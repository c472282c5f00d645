"""Command-line entry point.

    minimal5 generate --monomial m=4,l1=3,l2=5 --disk r=1,res=64x128 --project 1,2,3 -o fig1.obj
    minimal5 verify --psi '[[0,0],[0,0],[0,0],[0,0],[1,0]]' --lambdas 3,5
    minimal5 curvature --monomial m=4 --disk r=1,res=8x16 -o K.csv
    minimal5 project mesh.json --project 1,3,4 -o out.obj
    minimal5 frames-check --monomial m=4,l1=3,l2=5 --points 10

Configuration may also come from ``--config file.json``; flags override it.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import checks, frames
from .errors import BranchPoint
from .holomorphic import HoloPoly
from .mesh import (
    DomainSpec,
    ProjectionSpec,
    affine_span_dim,
    export,
    load_mesh_json,
    project,
    sample,
)
from .monomial_family import MonomialSeed
from .seed_family import (
    SeedData,
    conformal_factor,
    gauss_curvature,
    gauss_curvature_fd,
    planarity,
)
from .weierstrass import WeierstrassData, build_phi, immerse

FORMATS = ("obj", "csv", "json")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass
class RunConfig:
    seed: SeedData | MonomialSeed | WeierstrassData | None = None
    domain: DomainSpec | None = None
    projections: list = field(default_factory=list)
    outputs: list = field(default_factory=list)  # [(path, format)]
    verify: list = field(default_factory=lambda: list(checks.CHECKS))
    tolerances: dict = field(default_factory=dict)

    def seed_for_family(self) -> SeedData | None:
        if isinstance(self.seed, MonomialSeed):
            return self.seed.to_seed()
        return self.seed if isinstance(self.seed, SeedData) else None


# -- parsing helpers --------------------------------------------------------
def _kv(text: str, what: str) -> dict:
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ConfigError(f"{what}: expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_monomial(text: str) -> MonomialSeed:
    kv = _kv(text, "--monomial")
    if "m" not in kv:
        raise ConfigError("--monomial: field 'm' is required")
    try:
        return MonomialSeed(int(kv["m"]), float(kv.get("l1", 0)), float(kv.get("l2", 0)))
    except ValueError as exc:
        raise ConfigError(f"--monomial: {exc}") from None


def parse_disk(text: str) -> DomainSpec:
    kv = _kv(text, "--disk")
    try:
        n_r, n_t = (int(x) for x in kv.get("res", "32x64").lower().split("x"))
        return DomainSpec.disk(float(kv.get("r", 1.0)), n_r, n_t)
    except ValueError as exc:
        raise ConfigError(f"--disk: {exc}") from None


def parse_rect(text: str) -> DomainSpec:
    kv = _kv(text, "--rect")
    try:
        u0, u1 = (float(x) for x in kv.get("u", "0:1").split(":"))
        v0, v1 = (float(x) for x in kv.get("v", "0:1").split(":"))
        n_u, n_v = (int(x) for x in kv.get("res", "16x16").lower().split("x"))
        return DomainSpec.rectangle(u0, u1, v0, v1, n_u, n_v)
    except ValueError as exc:
        raise ConfigError(f"--rect: {exc}") from None


def _infer_format(path: str, fmt: str | None) -> str:
    if fmt:
        return fmt
    ext = Path(path).suffix.lstrip(".").lower()
    if ext not in FORMATS:
        raise ConfigError(f"output: cannot infer format from {path!r}; pass --format")
    return ext


def _seed_from_json(cfg: dict):
    present = [k for k in ("seed", "monomial", "weierstrass") if k in cfg]
    if len(present) > 1:
        raise ConfigError(f"config: exactly one seed spec allowed, got {present}")
    try:
        if "seed" in cfg:
            return SeedData.from_json(cfg["seed"])
        if "monomial" in cfg:
            return MonomialSeed.from_json(cfg["monomial"])
        if "weierstrass" in cfg:
            return WeierstrassData.from_json(cfg["weierstrass"])
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"config.{present[0]}: {exc}") from None
    return None


def build_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"--config: {exc}") from None
        cfg.seed = _seed_from_json(raw)
        if "domain" in raw:
            try:
                cfg.domain = DomainSpec.from_json(raw["domain"])
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"config.domain: {exc}") from None
        try:
            cfg.projections = [ProjectionSpec(tuple(p)) for p in raw.get("projections", [])]
        except ValueError as exc:
            raise ConfigError(f"config.projections: {exc}") from None
        for out in raw.get("outputs", []):
            cfg.outputs.append((out["path"], _infer_format(out["path"], out.get("format"))))
        if "verify" in raw:
            cfg.verify = list(raw["verify"])
        cfg.tolerances.update({k: float(v) for k, v in raw.get("tolerances", {}).items()})

    flag_seeds = [a for a in ("monomial", "psi", "weierstrass") if getattr(args, a, None)]
    if len(flag_seeds) > 1:
        raise ConfigError(f"seed: give only one of --monomial/--psi/--weierstrass, got {flag_seeds}")
    if getattr(args, "monomial", None):
        cfg.seed = parse_monomial(args.monomial)
    elif getattr(args, "psi", None):
        try:
            psi = HoloPoly.from_json(json.loads(args.psi))
            l1, l2 = (float(x) for x in (args.lambdas or "0,0").split(","))
        except (ValueError, json.JSONDecodeError) as exc:
            raise ConfigError(f"--psi/--lambdas: {exc}") from None
        cfg.seed = SeedData(psi, l1, l2)
    elif getattr(args, "weierstrass", None):
        try:
            with open(args.weierstrass) as fh:
                cfg.seed = WeierstrassData.from_json(json.load(fh))
        except (OSError, ValueError) as exc:
            raise ConfigError(f"--weierstrass: {exc}") from None

    if getattr(args, "disk", None):
        cfg.domain = parse_disk(args.disk)
    elif getattr(args, "rect", None):
        cfg.domain = parse_rect(args.rect)
    if getattr(args, "project", None):
        try:
            cfg.projections = [ProjectionSpec.parse(p) for p in args.project]
        except ValueError as exc:
            raise ConfigError(f"--project: {exc}") from None
    if getattr(args, "output", None):
        cfg.outputs = [(args.output, _infer_format(args.output, args.format))]
    if getattr(args, "checks", None):
        cfg.verify = [c.strip() for c in args.checks.split(",") if c.strip()]
    for item in getattr(args, "tol", None) or []:
        kv = _kv(item, "--tol")
        try:
            cfg.tolerances.update({k: float(v) for k, v in kv.items()})
        except ValueError as exc:
            raise ConfigError(f"--tol: {exc}") from None

    paths = [p for p, _ in cfg.outputs]
    if len(set(paths)) != len(paths):
        raise ConfigError("outputs: paths must be distinct")
    return cfg


def _source(cfg: RunConfig):
    if cfg.seed is None:
        raise ConfigError("seed: one of --monomial, --psi or --weierstrass (or config) is required")
    if isinstance(cfg.seed, WeierstrassData):
        return immerse(build_phi(cfg.seed))
    return cfg.seed


def _suffixed(path: str, spec: ProjectionSpec, many: bool) -> str:
    if not many:
        return path
    p = Path(path)
    return str(p.with_name(f"{p.stem}_p{''.join(map(str, spec.indices))}{p.suffix}"))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MINIMAL5_THREADS", "1")))
    except ValueError:
        return 1


# -- commands ----------------------------------------------------------------
def cmd_generate(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    source = _source(cfg)
    dom = cfg.domain or DomainSpec.disk(1.0, 32, 64)
    mesh = sample(source, dom)
    metric = mesh.per_vertex.get("metric")
    print(f"vertices: {mesh.n_vertices} (grid {mesh.shape[0]}x{mesh.shape[1]})", file=out)
    span = affine_span_dim(mesh)
    seed = cfg.seed_for_family()
    if seed is not None:
        pl = planarity(seed)
        kind = "planar" if pl.planar else "non-planar"
        print(f"span: {span} ({kind} (span {pl.span}) predicted: {pl.reason})", file=out)
    else:
        print(f"span: {span}", file=out)
    if metric is not None:
        print(f"metric range: [{np.nanmin(metric):.6g}, {np.nanmax(metric):.6g}]", file=out)

    targets = cfg.outputs
    if cfg.projections:
        many = len(cfg.projections) > 1
        for spec in cfg.projections:
            pm = project(mesh, spec)
            pspan = affine_span_dim(pm)
            label = ",".join(map(str, spec.indices))
            print(f"projection ({label}): span {pspan}", file=out)
            for path, fmt in targets:
                dest = export(pm, fmt, _suffixed(path, spec, many))
                print(f"wrote {dest} ({fmt}, {pm.n_vertices} vertices)", file=out)
    else:
        for path, fmt in targets:
            dest = export(mesh, fmt, path)
            print(f"wrote {dest} ({fmt}, {mesh.n_vertices} vertices)", file=out)
    return 0


def cmd_verify(cfg: RunConfig, report_path=None, out=None) -> int:
    out = out or sys.stdout
    results = checks.run_checks(_raw_or_seed(cfg), cfg.verify, cfg.tolerances)
    for r in results:
        val = "-" if r.value is None else f"{r.value:.3e}"
        tol = "-" if r.tolerance is None else f"{r.tolerance:.1e}"
        print(f"{r.status.upper():5s} {r.name:15s} value={val:>10s} tol={tol:>8s}  {r.detail}", file=out)
    ok = all(r.passed for r in results)
    report = {"passed": ok, "checks": [r.to_json() for r in results]}
    if report_path:
        with open(report_path, "w", newline="\n") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print("all checks passed" if ok else "some checks FAILED", file=out)
    return 0 if ok else 1


def _raw_or_seed(cfg: RunConfig):
    if cfg.seed is None:
        raise ConfigError("seed: one of --monomial, --psi or --weierstrass (or config) is required")
    return cfg.seed


def cmd_curvature(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    seed = cfg.seed_for_family()
    if seed is None:
        raise ConfigError("seed: curvature needs a seed (--monomial or --psi)")
    dom = cfg.domain or DomainSpec.disk(1.0, 8, 16)
    mesh = sample(seed, dom)
    lines = ["u,v,K,K_fd,branch"]
    worst, n_regular = 0.0, 0
    for z in mesh.z:
        if conformal_factor(seed, z) == 0:
            lines.append(f"{float(z.real)!r},{float(z.imag)!r},,,1")
            continue
        K = gauss_curvature(seed, z)
        try:
            K_fd = gauss_curvature_fd(seed, z)
            worst = max(worst, abs(K - K_fd) / abs(K))
            fd = repr(K_fd)
        except BranchPoint:  # stencil touches a branch point
            fd = ""
        n_regular += 1
        lines.append(f"{float(z.real)!r},{float(z.imag)!r},{K!r},{fd},0")
    if n_regular == 0:
        raise ConfigError("domain: every sample is a branch point")
    text = "\n".join(lines) + "\n"
    if cfg.outputs:
        with open(cfg.outputs[0][0], "w", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {cfg.outputs[0][0]} ({len(lines) - 1} rows)", file=out)
    else:
        out.write(text)
    print(f"max relative |K - K_fd| / |K|: {worst:.3e}", file=sys.stderr if not cfg.outputs else out)
    return 0


def cmd_project(mesh_path: str, cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if not cfg.projections:
        raise ConfigError("--project: at least one projection is required")
    if not cfg.outputs:
        raise ConfigError("output: -o is required")
    mesh = load_mesh_json(mesh_path)
    many = len(cfg.projections) > 1
    for spec in cfg.projections:
        pm = project(mesh, spec)
        for path, fmt in cfg.outputs:
            dest = export(pm, fmt, _suffixed(path, spec, many))
            print(f"wrote {dest} ({fmt}, span {affine_span_dim(pm)})", file=out)
    return 0


def cmd_frames_check(cfg: RunConfig, n_points: int, h: float, out=None) -> int:
    out = out or sys.stdout
    source = _source(cfg)
    subj = checks.Subject.build(cfg.seed, n_points=4 * n_points)
    pts = subj.regular_points()
    seed = cfg.seed_for_family()
    if seed is not None:
        pts = checks.away_from_branch(seed, pts)
    pts = pts[:n_points]
    rows = frames.frames_sweep(source, pts, h=h, workers=_threads())
    ok = True
    for row in rows:
        good = row["flatness"] <= row["tolerance"] and all(
            f["residual"] <= 5.0 * max(row["flatness"], 1e-300) and f["order"] >= 1.0
            for f in row["family"]
        )
        row["pass"] = bool(good)
        ok &= good
    report = {"h": h, "passed": ok, "points": rows}
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.outputs:
        with open(cfg.outputs[0][0], "w", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    print("frames check passed" if ok else "frames check FAILED", file=sys.stderr)
    return 0 if ok else 1


# -- argparse ----------------------------------------------------------------
def _add_seed_args(p):
    p.add_argument("--config", help="JSON run configuration; flags override it")
    p.add_argument("--monomial", help="monomial seed, e.g. m=4,l1=3,l2=5")
    p.add_argument("--psi", help="seed polynomial as JSON [[re,im],...], index = power")
    p.add_argument("--lambdas", help="l1,l2 for --psi (default 0,0)")
    p.add_argument("--weierstrass", help="JSON file with raw data {f,g1,g2,g3}")


def _add_domain_args(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--disk", help="disk domain, e.g. r=1,res=64x128 (radial x angular)")
    g.add_argument("--rect", help="rectangle, e.g. u=-1:1,v=-1:1,res=32x32")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minimal5", description=__doc__.split("\n")[0] or None)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample an immersion, project and write mesh files")
    _add_seed_args(g)
    _add_domain_args(g)
    g.add_argument("--project", action="append", help="coordinates to keep, e.g. 1,2,3 (repeatable)")
    g.add_argument("--format", choices=FORMATS)
    g.add_argument("-o", "--output")

    v = sub.add_parser("verify", help="run identity checks; exit 0 iff all pass")
    _add_seed_args(v)
    v.add_argument("--checks", help="comma-separated subset of: " + ", ".join(checks.CHECKS))
    v.add_argument("--tol", action="append", help="tolerance override, e.g. harmonic=1e-6")
    v.add_argument("--report", help="write the JSON report here")

    c = sub.add_parser("curvature", help="Gauss curvature with finite-difference oracle, as CSV")
    _add_seed_args(c)
    _add_domain_args(c)
    c.add_argument("-o", "--output")
    c.add_argument("--format", choices=("csv",), default="csv")

    pr = sub.add_parser("project", help="re-project an existing mesh JSON")
    pr.add_argument("mesh", help="mesh JSON written by generate")
    pr.add_argument("--project", action="append", required=True)
    pr.add_argument("--format", choices=FORMATS)
    pr.add_argument("-o", "--output", required=True)

    f = sub.add_parser("frames-check", help="moving-frame flatness sweeps, JSON report")
    _add_seed_args(f)
    f.add_argument("--points", type=int, default=10)
    f.add_argument("--h", type=float, default=1e-3)
    f.add_argument("-o", "--output")
    f.add_argument("--format", choices=("json",), default="json")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "generate":
            return cmd_generate(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.report)
        if args.command == "curvature":
            return cmd_curvature(cfg)
        if args.command == "project":
            return cmd_project(args.mesh, cfg)
        if args.command == "frames-check":
            return cmd_frames_check(cfg, args.points, args.h)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
