"""Command-line front end.

Subcommands ``eval``, ``transform``, ``heat``, ``verify`` and
``describe-operator`` write CSV data and JSON metadata into ``--out``.
Exit codes: 0 success, 1 verification or numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import even_case, heat, transform, verify
from .errors import HypergeoError
from .hypergeo import c_values, delta_density, gamma_coefficients, plancherel_density
from .quadrature import (TestFunction, gaussian_radii, load_grid_function,
                         resolved_nodes, save_grid_function, weyl_grid)
from .rootsys import SUPPORTED_TYPES, build_root_system, multiplicity, rho

log = logging.getLogger("hypergeo_heat")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
RANK2_RADIAL, RANK2_ANGULAR = 64, 32
BUMP_LAM_RADIUS = 40.0


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Everything a run depends on; JSON files and flags both fill it."""

    root_system: str = "A1"
    multiplicity: float | list | dict = 2.0
    grid_n: int | None = None
    grid_radius: float | None = None
    lam_n: int | None = None
    lam_radius: float | None = None
    n_angular: int | None = None
    scheme: str = "gauss_legendre"
    times: list[float] = field(default_factory=lambda: [0.5])
    tolerance: float | None = None
    out: str = "out"
    seed: int = 0
    function: dict = field(default_factory=lambda: {"kind": "gaussian", "width": 1.0})
    lam: list | None = None
    cap: int = 20

    def __post_init__(self):
        if self.root_system not in SUPPORTED_TYPES:
            raise UsageError(f"unknown root system {self.root_system!r}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError("tolerances must be positive")
        if any(not t > 0 for t in self.times):
            raise UsageError("heat times must be positive")
        if self.cap < 1:
            raise UsageError("cap must be positive")

    @classmethod
    def from_sources(cls, path: str | None, overrides: dict) -> "RunConfig":
        data = {}
        if path:
            try:
                data = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read config {path}: {exc}") from exc
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    # -- derived objects

    def system(self):
        rs = build_root_system(self.root_system)
        try:
            m = multiplicity(rs, self.multiplicity)
        except (ValueError, TypeError, KeyError) as exc:
            raise UsageError(f"invalid multiplicity {self.multiplicity!r}: {exc}") from exc
        return rs, m

    def test_function(self) -> TestFunction:
        spec = dict(self.function)
        if "center" in spec and spec["center"] is not None:
            spec["center"] = tuple(spec["center"])
        try:
            return TestFunction(**spec)
        except TypeError as exc:
            raise UsageError(f"invalid test function {self.function!r}") from exc

    def radii(self, rs, m) -> tuple[float, float]:
        tf = self.test_function()
        if tf.kind == "bump":
            xr, lr = tf.width, BUMP_LAM_RADIUS
        else:
            xr, lr = gaussian_radii(rs, rho(rs, m), tf.width, 1e-12)
        return self.grid_radius or xr, self.lam_radius or lr

    def grids(self, rs, m):
        xr, lr = self.radii(rs, m)
        if rs.type in ("A2", "B2"):
            n = self.grid_n or RANK2_RADIAL
            nl = self.lam_n or n
            na = self.n_angular or RANK2_ANGULAR
        else:
            n = self.grid_n or resolved_nodes(xr, lr)
            nl = self.lam_n or n
            na = None
        xg = weyl_grid(rs, n, xr, self.scheme, n_angular=na)
        lg = weyl_grid(rs, nl, lr, self.scheme, space="a*", n_angular=na)
        return xg, lg

    def lambdas(self, rs, m) -> np.ndarray:
        if self.lam is None:
            return rho(rs, m)[None, :].astype(complex)
        out = np.array([[complex(c) for c in row] for row in self.lam], dtype=complex)
        if out.ndim != 2 or out.shape[1] != rs.rank:
            raise UsageError(f"each lambda needs {rs.rank} coordinates")
        return out


def _parse_lam(text: str) -> list[str]:
    return [c.strip().replace(" ", "") for c in text.split(",")]


def _parse_multiplicity(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"multiplicity must be JSON: {text}") from exc


# ---------------------------------------------------------------------------
# output helpers


def _out_dir(cfg: RunConfig) -> Path:
    p = Path(cfg.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(header)
        for row in rows:
            wr.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, default=_jsonable))


def _jsonable(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return [o.real, o.imag]
    return str(o)


def _meta(cfg: RunConfig, **extra) -> dict:
    return {"config": asdict(cfg), **extra}


def _tag(t: float) -> str:
    return f"{t:g}".replace(".", "p")


def _coords(v) -> list:
    return [x for z in np.atleast_1d(v) for x in (float(np.real(z)), float(np.imag(z)))]


# ---------------------------------------------------------------------------
# eval


def cmd_eval(cfg: RunConfig, target: str) -> int:
    rs, m = cfg.system()
    out = _out_dir(cfg)
    r = rs.rank
    lam_cols = [f"lam{i + 1}_{p}" for i in range(r) for p in ("re", "im")]
    meta = _meta(cfg, target=target, root_system=rs.to_dict(), multiplicity=m.to_dict())
    if target == "c":
        lams = cfg.lambdas(rs, m)
        vals = c_values(rs, m, lams)
        _write_csv(out / "c.csv", lam_cols + ["re", "im"],
                   ([*_coords(l), v.real, v.imag] for l, v in zip(lams, vals)))
    elif target == "gamma":
        lams = cfg.lambdas(rs, m)
        table = gamma_coefficients(rs, m, lams, cap=cfg.cap)
        vals = np.atleast_2d(table.values.T)  # (B, n)
        rows = ([k, *map(int, n), v.real, v.imag]
                for k in range(len(lams)) for n, v in zip(table.coeffs, vals[k]))
        _write_csv(out / "gamma.csv", ["lam_index"] + [f"n{i + 1}" for i in range(r)]
                   + ["re", "im"], rows)
        meta.update(cap=cfg.cap, lambdas=[_coords(l) for l in lams])
    elif target == "phi":
        xg, _ = cfg.grids(rs, m)
        lams = cfg.lambdas(rs, m)
        K = transform.phi_kernel(rs, m, lams, xg.nodes)
        rows = ([p, *x, v.real, v.imag] for p in range(len(lams))
                for x, v in zip(xg.nodes, K[p]))
        _write_csv(out / "phi.csv", ["lam_index"] + [f"x{i + 1}" for i in range(r)]
                   + ["re", "im"], rows)
        meta.update(grid=xg.to_dict(), lambdas=[_coords(l) for l in lams],
                    method=_phi_method(rs, m))
    elif target == "delta":
        xg, _ = cfg.grids(rs, m)
        d = delta_density(rs, m, xg.nodes)
        _write_csv(out / "delta.csv", [f"x{i + 1}" for i in range(r)] + ["value"],
                   ([*x, v] for x, v in zip(xg.nodes, d)))
        meta.update(grid=xg.to_dict())
    elif target == "plancherel_density":
        _, lg = cfg.grids(rs, m)
        d = plancherel_density(rs, m, lg.nodes)
        _write_csv(out / "plancherel_density.csv", [f"lam{i + 1}" for i in range(r)] + ["value"],
                   ([*x, v] for x, v in zip(lg.nodes, d)))
        meta.update(grid=lg.to_dict())
    _write_json(out / f"{target}.json", meta)
    log.info("wrote %s", out / f"{target}.csv")
    return EXIT_OK


def _phi_method(rs, m) -> str:
    if m.is_zero:
        return "flat"
    if m.is_geometric_complex:
        return "closed_form"
    return "series" if rs.rank > 1 else "series+gauss_function_near_wall"


# ---------------------------------------------------------------------------
# transform


def _input(cfg: RunConfig, path: str | None, rs, m, space: str):
    xg, lg = cfg.grids(rs, m)
    if path:
        try:
            gf = load_grid_function(path)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read grid function {path}: {exc}") from exc
        if gf.grid.rank != rs.rank:
            raise UsageError("input rank does not match the root system")
        if gf.grid.space != space:
            raise UsageError(f"input lives on {gf.grid.space!r}, expected {space!r}")
        return gf, xg, lg
    if space != "a":
        raise UsageError("spectral input must be given with --input")
    return cfg.test_function().sample(xg, rs), xg, lg


def cmd_transform(cfg: RunConfig, direction: str, path: str | None) -> int:
    rs, m = cfg.system()
    out = _out_dir(cfg)
    space = "a*" if direction == "inverse" else "a"
    f, xg, lg = _input(cfg, path, rs, m, space)
    report: dict = {"direction": direction}
    if direction == "forward":
        if f.grid.space == "a":
            xg = f.grid
        Ff = transform.hypergeometric_fourier_grid(rs, m, f, lg)
        lhs, rhs = transform.plancherel_check(rs, m, f, lg, Ff=Ff)
        back = transform.inverse_on_grid(rs, m, Ff, f.grid)
        report.update(norm_sq_f=lhs, norm_sq_transform=rhs,
                      plancherel_defect=abs(rhs - lhs) / lhs if lhs else 0.0,
                      roundtrip_sup_error=float(np.abs(back.values - f.values).max()))
        result = Ff
    elif direction == "inverse":
        result = transform.inverse_on_grid(rs, m, f, xg)
        report.update(norm_sq_result=result.norm_sq(delta_density(rs, m, xg.nodes)))
    elif direction == "abel":
        result = transform.abel_transform(rs, m, f, lg)
        report.update(norm_sq_result=result.norm_sq())
    else:
        result = transform.lambda_map(rs, m, f, lg)
        nf = f.norm_sq(delta_density(rs, m, f.grid.nodes))
        report.update(norm_sq_f=nf, norm_sq_result=result.norm_sq(),
                      isometry_defect=abs(result.norm_sq() - nf) / nf if nf else 0.0)
        if m.is_geometric_complex:
            target = even_case.delta_half(rs, f.grid.nodes) * f.values
            report["sup_error_vs_delta_half_f"] = float(np.abs(result.values - target).max())
    save_grid_function(result, out / f"{direction}.csv")
    _write_json(out / f"{direction}_report.json", _meta(cfg, report=report))
    for k, v in report.items():
        print(f"{k}: {v}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# heat


def cmd_heat(cfg: RunConfig, path: str | None, complex_grid: bool) -> int:
    rs, m = cfg.system()
    out = _out_dir(cfg)
    f, xg, lg = _input(cfg, path, rs, m, "a")
    dens = delta_density(rs, m, f.grid.nodes)
    nf = np.sqrt(f.norm_sq(dens))
    Ff = transform.hypergeometric_fourier_grid(rs, m, f, lg)
    rows = []
    for t in cfg.times:
        u = heat.heat_on_grid(rs, m, Ff, f.grid, t)
        save_grid_function(u, out / f"heat_t{_tag(t)}.csv")
        nu = np.sqrt(u.norm_sq(dens))
        rows.append({"t": t, "norm_u": nu, "norm_f": nf, "contraction": bool(nu <= nf * (1 + 1e-12))})
        print(f"t={t:g} |u|={nu:.6e} |f|={nf:.6e} contraction={rows[-1]['contraction']}")
        if complex_grid:
            xr, lr = cfg.radii(rs, m)
            X, Y = heat.complex_grids(rs.rank, t, xr, lr)
            hg = heat.lambda_extension_grid(rs, m, Ff, t, X, Y)
            cols = [f"x{i + 1}" for i in range(rs.rank)] + [f"y{i + 1}" for i in range(rs.rank)]
            _write_csv(out / f"lambda_extension_t{_tag(t)}.csv", cols + ["re", "im", "weight"],
                       hg.rows())
    _write_json(out / "heat_report.json", _meta(cfg, contraction=rows))
    return EXIT_OK if all(r["contraction"] for r in rows) else EXIT_FAIL


# ---------------------------------------------------------------------------
# verify and describe-operator


def cmd_verify(cfg: RunConfig, suites: list[str]) -> int:
    out = _out_dir(cfg)
    checks = verify.run_suites(tuple(suites), seed=cfg.seed)
    if cfg.tolerance is not None:
        for c in checks:
            c.tolerance = cfg.tolerance
            c.passed = bool(np.isfinite(c.defect) and c.defect <= c.tolerance
                            and c.details.get("decreasing", True))
    for c in checks:
        print(c.line())
    failed = [c.name for c in checks if not c.passed]
    report = {"suites": suites, "seed": cfg.seed, "passed": not failed, "failed": failed,
              "checks": [c.to_dict() for c in checks]}
    _write_json(out / "verify_report.json", report)
    if failed:
        print("failing checks: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_describe_operator(cfg: RunConfig, which: str) -> int:
    rs, m = cfg.system()
    try:
        op = (even_case.build_d_operator(rs, m) if which == "d"
              else even_case.build_psi_a_operator(rs, m))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = op.to_json()
    print(text)
    (_out_dir(cfg) / f"operator_{which}.json").write_text(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--out", help="output directory")
    common.add_argument("--root-system", choices=SUPPORTED_TYPES)
    common.add_argument("--m", dest="multiplicity", type=_parse_multiplicity,
                        help='multiplicity as JSON: 2, [1, 2] or {"long": 1, "short": 2}')
    common.add_argument("--grid-n", type=int)
    common.add_argument("--grid-radius", type=float)
    common.add_argument("--lam-n", type=int)
    common.add_argument("--lam-radius", type=float)
    common.add_argument("--scheme", choices=["gauss_legendre", "trapezoid"])
    common.add_argument("--t", dest="times", type=float, nargs="+", help="heat time(s)")
    common.add_argument("--tolerance", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--lam", action="append", type=_parse_lam,
                        help="spectral parameter, comma separated (complex allowed); repeatable")
    common.add_argument("--cap", type=int, help="degree cap for the coefficient table")
    common.add_argument("--function", type=json.loads,
                        help='test function as JSON, e.g. {"kind": "bump", "width": 2}')
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="hypergeo-heat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    e = sub.add_parser("eval", parents=[common], help="evaluate special functions")
    e.add_argument("target", choices=["phi", "c", "gamma", "delta", "plancherel_density"])
    t = sub.add_parser("transform", parents=[common], help="run a transform")
    t.add_argument("direction", choices=["forward", "inverse", "abel", "lambda"])
    t.add_argument("--input", help="grid function (CSV stem); default samples --function")
    h = sub.add_parser("heat", parents=[common], help="heat flow and contraction report")
    h.add_argument("--input", help="grid function (CSV stem); default samples --function")
    h.add_argument("--complex-grid", action="store_true",
                   help="also write the holomorphic extension on a complex grid")
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", nargs="+", default=["all"], choices=["all", *verify.SUITES])
    d = sub.add_parser("describe-operator", parents=[common],
                       help="print an exponential-polynomial operator as JSON")
    d.add_argument("--which", choices=["d", "psi_a"], default="d")
    return p


_CONFIG_KEYS = ("out", "root_system", "multiplicity", "grid_n", "grid_radius", "lam_n",
                "lam_radius", "scheme", "times", "tolerance", "seed", "lam", "cap", "function")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = RunConfig.from_sources(args.config, {k: getattr(args, k) for k in _CONFIG_KEYS})
        if args.command == "eval":
            return cmd_eval(cfg, args.target)
        if args.command == "transform":
            return cmd_transform(cfg, args.direction, args.input)
        if args.command == "heat":
            return cmd_heat(cfg, args.input, args.complex_grid)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite)
        return cmd_describe_operator(cfg, args.which)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HypergeoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
