"""Command-line experiment driver.

Every subcommand has a dataclass config.  Values come from the dataclass
defaults, then the ``--config`` JSON file, then command-line overrides named
after the config keys (``steps`` -> ``--steps``).  Outputs go to ``--out``
(default ``out``) and are byte-identical for identical configs.

Exit codes: 0 success, 2 configuration error, 3 numerical abort,
4 invariant violation above the configured tolerance.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import compat as compat_mod
from .dynamics_sun import (
    E_map,
    F_map,
    FlowConfig,
    InversionError,
    evolve,
    invert_E,
    invert_F,
)
from .groupoids import constant_poisson as cp
from .groupoids import cotangent_group as ctg
from .groupoids import pair
from .groupoids.functions import linear, quadratic
from .integrate import FlowAbort
from .legendre_sb import DEFAULT_STEPS, MetricData, phi
from .matgroup import (
    DecompositionError,
    MembershipError,
    check_special_linear,
    check_su,
    check_triangular_positive,
    decompose_left,
    decompose_right,
    from_su_coords,
    matrix_from_dict,
    matrix_to_dict,
    random_sb,
    random_sl,
    random_su,
    sb_group_residual,
    su_coords,
    su_group_residual,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_INVARIANT = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    pass


def _require(cond: bool, msg: str):
    if not cond:
        raise ConfigError(msg)


def _matrix(obj, name: str, n: int | None = None) -> np.ndarray:
    try:
        m = matrix_from_dict(obj)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{name}: {exc}") from exc
    if n is not None and m.shape[0] != n:
        raise ConfigError(f"{name}: expected a {n}x{n} matrix, got n = {m.shape[0]}")
    return m


# --------------------------------------------------------------------------
# configs

@dataclass
class DecomposeConfig:
    n: int = 2
    seed: int = 0
    g: dict | None = None
    count: int = 100
    tol: float = 1e-12

    def validate(self):
        _require(self.n >= 2, "n must be >= 2")
        _require(self.count >= 1, "count must be >= 1")


@dataclass
class EvolveConfig:
    n: int = 2
    seed: int = 0
    epsilon: float = 1.0
    t: float = 1.0
    steps: int = 1000
    renormalize: bool = False
    g0: dict | None = None
    tol: float = 1e-8

    def validate(self):
        _require(self.n >= 2, "n must be >= 2")
        try:
            FlowConfig(self.epsilon, self.t, self.steps, self.renormalize)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass
class FEConfig:
    n: int = 2
    seed: int = 0
    epsilon: float = 1.0
    count: int = 20
    scale: float = 1.0
    gamma: dict | None = None
    invert: bool = False
    tol: float = 1e-9

    def validate(self):
        _require(self.n >= 2, "n must be >= 2")
        _require(self.epsilon != 0, "epsilon must be nonzero")
        _require(self.count >= 1, "count must be >= 1")


@dataclass
class PhiConfig:
    n: int = 2
    seed: int = 0
    c: float = 1.0
    steps: int = DEFAULT_STEPS
    eta0: dict | None = None
    oracle: bool = False
    grid: bool = False
    grid_count: int = 10
    grid_radius: float = 1.0
    tol: float = 1e-8

    def validate(self):
        _require(self.n >= 2, "n must be >= 2")
        _require(self.c > 0, "c must be positive")
        _require(self.steps >= 1, "steps must be >= 1")
        _require(self.grid_count >= 1, "grid_count must be >= 1")


@dataclass
class CompatConfig:
    n: int = 2
    seed: int = 0
    epsilon: float = 1.0
    c: float = 1.0
    steps: int = DEFAULT_STEPS
    per_norm: int = 3
    norms: list = field(default_factory=lambda: list(compat_mod.SAMPLE_NORMS))
    scan: str | None = None

    def validate(self):
        _require(self.n >= 2, "n must be >= 2")
        _require(self.c > 0, "c must be positive")
        _require(self.epsilon != 0, "epsilon must be nonzero")
        _require(self.steps >= 1, "steps must be >= 1")
        _require(self.per_norm >= 1, "per_norm must be >= 1")
        if self.scan is not None:
            self.scan_grids()

    def scan_grids(self):
        try:
            eps_spec, c_spec = self.scan.split(",")
            eps, cs = compat_mod.parse_range(eps_spec), compat_mod.parse_range(c_spec)
        except ValueError as exc:
            raise ConfigError(f"scan must read eps_min:eps_max:steps,c_min:c_max:steps ({exc})") from exc
        _require(bool(np.all(cs > 0)), "scan c values must be positive")
        _require(bool(np.all(eps != 0)), "scan epsilon values must be nonzero")
        return eps, cs


@dataclass
class ExampleConfig:
    example: int = 3
    seed: int = 0
    steps: int = 100
    count: int = 50
    radius: float = 1.0
    side: str = "left"
    n: int = 2
    x: dict | None = None
    r: list | None = None
    function: dict | None = None
    window: float | None = None
    tol: float = 1e-8

    def validate(self):
        _require(self.window is None or self.window > 0, "window must be positive")
        _require(self.example in (1, 2, 3), "example must be 1, 2 or 3")
        _require(self.steps >= 1, "steps must be >= 1")
        _require(self.count >= 1, "count must be >= 1")
        _require(self.side in ("left", "right"), "side must be 'left' or 'right'")


@dataclass
class CasimirConfig:
    n: int = 2
    seed: int = 0
    t: float = 1.0
    steps: int = 200
    units: int = 10
    starts: int = 10
    radius: float = 1.0
    f: str = "half_norm_squared"
    h: str = "sin"
    tol: float = 1e-8

    def validate(self):
        _require(self.n >= 2, "n must be >= 2")
        _require(self.steps >= 1, "steps must be >= 1")
        for name in (self.f, self.h):
            _require(name in CASIMIRS, f"unknown Casimir {name!r}; choose from {sorted(CASIMIRS)}")


CASIMIRS = {
    "half_norm_squared": lambda: ctg.Casimir.half_norm_squared(),
    "sin": lambda: ctg.Casimir(np.sin, np.cos),
    "square": lambda: ctg.Casimir(lambda s: 0.5 * s * s, lambda s: s),
    "exp": lambda: ctg.Casimir(np.exp, np.exp),
}


# --------------------------------------------------------------------------
# output

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _comment(command: str, cfg) -> str:
    d = dataclasses.asdict(cfg)
    head = [f"command={command}", f"seed={d.get('seed')}"]
    for key in ("steps", "tol"):
        if key in d:
            head.append(f"{key}={d[key]}")
    return "# " + ", ".join(head) + ", config=" + json.dumps(d, sort_keys=True)


def write_csv(path: Path, command: str, cfg, header: list[str], rows) -> Path:
    buf = io.StringIO()
    buf.write(_comment(command, cfg) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    path.write_text(buf.getvalue())
    return path


def write_json(path: Path, obj) -> Path:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def _sample_rows(sample):
    cols, data = sample.table()
    return cols, data.tolist()


# --------------------------------------------------------------------------
# commands

def cmd_decompose(cfg: DecomposeConfig, out: Path) -> list[Path]:
    if cfg.g is not None:
        g = check_special_linear(_matrix(cfg.g, "g"))
        u, gl = decompose_left(g)
        gr, ur = decompose_right(g)
        scale = np.linalg.norm(g)
        res = {"left": float(np.linalg.norm(u @ gl - g)), "right": float(np.linalg.norm(gr @ ur - g))}
        path = write_json(out / "decompose.json", {
            "left": {"u": matrix_to_dict(u), "gamma": matrix_to_dict(gl)},
            "right": {"gamma": matrix_to_dict(gr), "u": matrix_to_dict(ur)},
            "residual": res,
        })
        if max(res.values()) > cfg.tol * scale:
            raise InvariantViolation(f"reconstruction residual {max(res.values()):.3e} above tolerance")
        return [path]

    rng = np.random.default_rng(cfg.seed)
    rows, worst = [], 0.0
    for k in range(cfg.count):
        g = random_sl(cfg.n, rng)
        scale = np.linalg.norm(g)
        u, gl = decompose_left(g)
        gr, ur = decompose_right(g)
        for side, uu, gg, rec in (("left", u, gl, u @ gl), ("right", ur, gr, gr @ ur)):
            r = float(np.linalg.norm(rec - g) / scale)
            worst = max(worst, r)
            rows.append([k, side, r, su_group_residual(uu), sb_group_residual(gg)])
    path = write_csv(out / "decompose.csv", "decompose", cfg,
                     ["sample", "side", "rel_residual", "u_membership", "gamma_membership"], rows)
    if worst > cfg.tol:
        raise InvariantViolation(f"relative reconstruction residual {worst:.3e} above {cfg.tol:g}")
    return [path]


def cmd_evolve(cfg: EvolveConfig, out: Path) -> list[Path]:
    if cfg.g0 is None:
        g0 = random_sl(cfg.n, np.random.default_rng(cfg.seed))
    else:
        g0 = _matrix(cfg.g0, "g0", cfg.n)
        try:
            g0 = check_special_linear(g0)
        except MembershipError as exc:
            raise ConfigError(f"g0: {exc}") from exc
    rec = evolve(g0, FlowConfig(cfg.epsilon, cfg.t, cfg.steps, cfg.renormalize))
    rows = zip(rec.times, rec.energy, rec.det_drift, rec.gammaL_drift, rec.gammaR_drift)
    p1 = write_csv(out / "evolve_sun.csv", "evolve-sun", cfg,
                   ["t", "H", "detdrift", "gammaLdrift", "gammaRdrift"], rows)
    drift = rec.max_drift()
    p2 = write_json(out / "evolve_sun_final.json", {"g_final": matrix_to_dict(rec.final), "max_drift": drift})
    if max(drift.values()) > cfg.tol:
        raise InvariantViolation(f"conservation drift {max(drift.values()):.3e} above {cfg.tol:g}")
    return [p1, p2]


def cmd_fe_maps(cfg: FEConfig, out: Path) -> list[Path]:
    if cfg.gamma is not None:
        gamma = _matrix(cfg.gamma, "gamma", cfg.n)
        try:
            gamma = check_triangular_positive(gamma)
        except MembershipError as exc:
            raise ConfigError(f"gamma: {exc}") from exc
        fx, ex = F_map(gamma, cfg.epsilon), E_map(gamma, cfg.epsilon)
        doc = {"F": matrix_to_dict(fx), "E": matrix_to_dict(ex)}
        worst = 0.0
        if cfg.invert:
            fi, ei = invert_F(fx, cfg.epsilon), invert_E(ex, cfg.epsilon)
            doc["invert_F"], doc["invert_E"] = matrix_to_dict(fi), matrix_to_dict(ei)
            doc["roundtrip_residual"] = {"F": float(np.linalg.norm(fi - gamma)),
                                         "E": float(np.linalg.norm(ei - gamma))}
            worst = max(doc["roundtrip_residual"].values())
        path = write_json(out / "fe_maps.json", doc)
        if worst > cfg.tol:
            raise InvariantViolation(f"round-trip residual {worst:.3e} above {cfg.tol:g}")
        return [path]

    rng = np.random.default_rng(cfg.seed)
    dim = cfg.n * cfg.n - 1
    header = ["sample", "map"] + [f"x{k}" for k in range(dim)]
    if cfg.invert:
        header.append("roundtrip_residual")
    rows, worst = [], 0.0
    for k in range(cfg.count):
        gamma = random_sb(cfg.n, rng, cfg.scale)
        for name, fwd, inv in (("F", F_map, invert_F), ("E", E_map, invert_E)):
            x = fwd(gamma, cfg.epsilon)
            row = [k, name] + list(su_coords(x))
            if cfg.invert:
                r = float(np.linalg.norm(inv(x, cfg.epsilon) - gamma))
                worst = max(worst, r)
                row.append(r)
            rows.append(row)
    path = write_csv(out / "fe_maps.csv", "fe-maps", cfg, header, rows)
    if worst > cfg.tol:
        raise InvariantViolation(f"round-trip residual {worst:.3e} above {cfg.tol:g}")
    return [path]


def cmd_phi(cfg: PhiConfig, out: Path) -> list[Path]:
    metric = MetricData(cfg.c, cfg.n)
    if not cfg.grid:
        if cfg.eta0 is None:
            raise ConfigError("phi needs eta0 (or grid = true)")
        eta0 = _matrix(cfg.eta0, "eta0", cfg.n)
        try:
            eta0 = check_su(eta0)
        except MembershipError as exc:
            raise ConfigError(f"eta0: {exc}") from exc
        gamma = phi(eta0, metric, cfg.steps, oracle=cfg.oracle)
        doc = {"gamma": matrix_to_dict(gamma), "sb_membership": sb_group_residual(gamma)}
        path = write_json(out / "phi.json", doc)
        print(json.dumps(matrix_to_dict(gamma)))
        if doc["sb_membership"] > cfg.tol:
            raise InvariantViolation("phi left SB(N)")
        return [path]

    rng = np.random.default_rng(cfg.seed)
    dim = cfg.n * cfg.n - 1
    header = [f"eta{k}" for k in range(dim)]
    header += [f"g{a}{b}_{p}" for a in range(cfg.n) for b in range(cfg.n) for p in ("re", "im")]
    header.append("sb_membership")
    rows, worst = [], 0.0
    for k in range(cfg.grid_count):
        coords = rng.standard_normal(dim)
        coords *= cfg.grid_radius * (k + 1) / cfg.grid_count / np.linalg.norm(coords)
        eta0 = from_su_coords(coords, cfg.n)
        gamma = phi(eta0, metric, cfg.steps, oracle=cfg.oracle)
        m = sb_group_residual(gamma)
        worst = max(worst, m)
        rows.append(list(su_coords(eta0)) + list(np.stack([gamma.real, gamma.imag], -1).ravel()) + [m])
    path = write_csv(out / "phi_grid.csv", "phi", cfg, header, rows)
    if worst > cfg.tol:
        raise InvariantViolation("phi left SB(N)")
    return [path]


def cmd_compat(cfg: CompatConfig, out: Path) -> list[Path]:
    samples = compat_mod.sample_directions(cfg.n, cfg.seed, cfg.per_norm, tuple(cfg.norms))
    if cfg.scan is None:
        eps, cs = [cfg.epsilon], [cfg.c]
    else:
        eps, cs = cfg.scan_grids()
    rows = compat_mod.compat_scan(eps, cs, samples, cfg.steps)
    table = []
    for row in rows:
        for k, rep in enumerate(row.reports):
            for name, res in zip(compat_mod.VARIANTS, rep.residuals):
                table.append([row.epsilon, row.c, name, k, float(np.linalg.norm(rep.v)), res])
    paths = [write_csv(out / "compat.csv", "compat", cfg,
                       ["epsilon", "c", "variant", "v_id", "v_norm", "residual"], table)]
    if cfg.scan is not None:
        ranked = [[i + 1, r.epsilon, r.c, r.mean_best, r.max_best]
                  for i, r in enumerate(compat_mod.rank(rows))]
        paths.append(write_csv(out / "compat_ranked.csv", "compat", cfg,
                               ["rank", "epsilon", "c", "mean_best", "max_best"], ranked))
    return paths


def _cp_function(spec: dict | None, n: int):
    spec = spec or {"kind": "quadratic", "s": np.eye(n).tolist()}
    kind = spec.get("kind")
    try:
        if kind == "linear":
            a = np.asarray(spec["a"], dtype=float)
            _require(a.shape == (n,), f"function.a must have length {n}")
            return linear(a)
        if kind == "oscillator":
            return quadratic(np.eye(n))
        if kind == "quadratic":
            s = np.asarray(spec.get("s", np.eye(n)), dtype=float)
            _require(s.shape == (n, n), f"function.s must be {n}x{n}")
            return quadratic(s, spec.get("b"))
        if kind == "zero":
            return linear(np.zeros(n))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"function: {exc}") from exc
    raise ConfigError(f"function.kind must be linear, quadratic, oscillator or zero, got {kind!r}")


def _grid(rng, count: int, dim: int, radius: float) -> np.ndarray:
    return rng.uniform(-radius, radius, size=(count, dim))


def cmd_example(cfg: ExampleConfig, out: Path) -> list[Path]:
    rng = np.random.default_rng(cfg.seed)
    path = out / f"example{cfg.example}.csv"
    if cfg.example == 1:
        x = (np.pi / 2) * np.diag([1j, -1j] + [0] * (cfg.n - 2)) if cfg.x is None else _matrix(cfg.x, "x", cfg.n)
        try:
            x = check_su(x)
        except MembershipError as exc:
            raise ConfigError(f"x: {exc}") from exc
        sample = ctg.ctg_generate(ctg.Linear(x), ctg.fiber_grid(cfg.n, cfg.count, cfg.radius, cfg.seed),
                                  1.0, cfg.steps)
        worst = float(sample.residuals["base_vs_expX"].max())
    elif cfg.example == 2:
        spec = cfg.function or {"kind": "oscillator"}
        f = _cp_function(spec, 2)
        x0 = _grid(rng, cfg.count, 2, cfg.radius)
        sample = pair.pair_generate(f, x0, cfg.steps, cfg.side, cfg.window)
        worst = 0.0
        if spec.get("kind") == "oscillator":
            # closed form: rotation by +1 (left leg) or -1 (right leg)
            sgn = 1.0 if cfg.side == "left" else -1.0
            moved = sample.points[:, :2] if cfg.side == "left" else sample.points[:, 2:]
            res = np.linalg.norm(moved - x0 @ pair.oscillator_rotation(sgn).T, axis=1)
            sample.residuals["rotation_residual"] = res
            worst = float(res.max())
    else:
        r = np.array([[0.0, 1.0], [-1.0, 0.0]]) if cfg.r is None else np.asarray(cfg.r, dtype=float)
        try:
            space = cp.ConstantPoissonSpace(r)
        except ValueError as exc:
            raise ConfigError(f"r: {exc}") from exc
        f = _cp_function(cfg.function, space.n)
        x0 = _grid(rng, cfg.count, space.n, cfg.radius)
        sample = cp.cp_generate(f, space, x0, cfg.steps, side=cfg.side, radius=cfg.window)
        worst = 0.0
        if f.kind == "linear":
            res = np.abs(sample.points[:, space.n:] - np.asarray(cfg.function["a"], dtype=float)).max(axis=1)
            sample.residuals["momentum_error"] = res
            worst = float(res.max())
    cols, data = _sample_rows(sample)
    write_csv(path, f"examples run {cfg.example}", cfg, cols, data)
    if worst > cfg.tol:
        raise InvariantViolation(f"example {cfg.example} residual {worst:.3e} above {cfg.tol:g}")
    return [path]


def cmd_casimir(cfg: CasimirConfig, out: Path) -> list[Path]:
    rng = np.random.default_rng(cfg.seed)
    units = ctg.fiber_grid(cfg.n, cfg.units, cfg.radius, cfg.seed)
    starts = [ctg.CotangentGroupPoint(random_su(cfg.n, rng), m)
              for m in ctg.fiber_grid(cfg.n, cfg.starts, cfg.radius, cfg.seed + 1)]
    try:
        report = ctg.casimir_checks(CASIMIRS[cfg.f](), CASIMIRS[cfg.h](), units, starts, cfg.t, cfg.steps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [[k, v, cfg.tol, "pass" if v < cfg.tol else "fail"] for k, v in report.as_dict().items()]
    path = write_csv(out / "casimir_checks.csv", "casimir-checks", cfg, ["check", "residual", "tol", "status"], rows)
    bad = [k for k, v in report.as_dict().items() if not v < cfg.tol]
    if bad:
        raise InvariantViolation(f"Casimir checks above tolerance: {', '.join(bad)}")
    return [path]


COMMANDS = {
    "decompose": (DecomposeConfig, cmd_decompose),
    "evolve-sun": (EvolveConfig, cmd_evolve),
    "fe-maps": (FEConfig, cmd_fe_maps),
    "phi": (PhiConfig, cmd_phi),
    "compat": (CompatConfig, cmd_compat),
    "examples": (ExampleConfig, cmd_example),
    "casimir-checks": (CasimirConfig, cmd_casimir),
}


# --------------------------------------------------------------------------
# argument handling

def _json_or_file(text: str):
    if os.path.isfile(text):
        text = Path(text).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"not valid JSON: {exc}") from exc


def _add_overrides(p: argparse.ArgumentParser, cls):
    for f in dataclasses.fields(cls):
        if f.name in ("seed", "example"):
            continue
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        flag = "--" + f.name.replace("_", "-")
        if isinstance(default, bool):
            p.add_argument(flag, dest=f.name, action=argparse.BooleanOptionalAction, default=None)
        elif isinstance(default, int):
            p.add_argument(flag, dest=f.name, type=int, default=None)
        elif isinstance(default, float):
            p.add_argument(flag, dest=f.name, type=float, default=None)
        elif f.name == "window":
            p.add_argument(flag, dest=f.name, type=float, default=None)
        elif isinstance(default, str) or f.name == "scan":
            p.add_argument(flag, dest=f.name, type=str, default=None)
        else:
            p.add_argument(flag, dest=f.name, type=_json_or_file, default=None,
                           help="JSON literal or path to a JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grouplegendre", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON config file")
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        p.add_argument("--seed", type=int, default=None, help="unsigned 64-bit seed")

    for name, (cls, _) in COMMANDS.items():
        if name == "examples":
            p = sub.add_parser("examples", help="generating-function examples")
            esub = p.add_subparsers(dest="action", required=True)
            run = esub.add_parser("run", help="run example 1, 2 or 3")
            run.add_argument("example", type=int, choices=(1, 2, 3))
            common(run)
            _add_overrides(run, cls)
        else:
            p = sub.add_parser(name)
            common(p)
            _add_overrides(p, cls)
    return parser


def load_config(cls, path: Path | None, overrides: dict):
    values = {}
    if path is not None:
        try:
            values = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(values, dict):
            raise ConfigError("config file must hold a JSON object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(values) - names)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    values.update({k: v for k, v in overrides.items() if k in names and v is not None})
    try:
        cfg = cls(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    defaults = cls()
    for f in dataclasses.fields(cls):
        default, v = getattr(defaults, f.name), getattr(cfg, f.name)
        if default is None or v is None:
            continue
        if isinstance(default, float) and type(v) is int:
            setattr(cfg, f.name, float(v))
        elif type(v) is not type(default):
            raise ConfigError(f"{f.name} must be of type {type(default).__name__}")
    _require(0 <= cfg.seed < 2**64, "seed must be an unsigned 64-bit integer")
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK

    cls, fn = COMMANDS[args.command]
    overrides = dict(vars(args))
    if args.command == "examples":
        overrides["example"] = args.example
    try:
        cfg = load_config(cls, args.config, overrides)
        args.out.mkdir(parents=True, exist_ok=True)
        paths = fn(cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except MembershipError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (FlowAbort, InversionError, DecompositionError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for p in paths:
        print(f"wrote {p}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
