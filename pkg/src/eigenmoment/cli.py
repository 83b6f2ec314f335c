"""Command-line front end.

    eigenmoment lambda1 --space-form b=0 --dim 3 --radius 1
    eigenmoment sweep --space-form b=-1 --dim 2 --radius 0.5:5:0.5 --output out/
    eigenmoment check-balance --preset hyperbolic

Exit status: 0 success, 1 numerical failure, 2 infeasible hypothesis,
64 usage or configuration error.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bounds as bnd
from .comparison import (
    BoundingFunctions,
    ComparisonSpaceSpec,
    balance_check,
    build_comparison_space,
    constant,
    spec_from_dict,
)
from .errors import EigenmomentError, InfeasibleHypothesis, NotConverged
from .growth import reconcile
from .moments import (
    DEFAULT_KMAX,
    DEFAULT_NODES,
    DEFAULT_TOL,
    build_hierarchy,
    lambda1_sandwich,
    write_moments_csv,
)
from .warping import ModelSpace, warping_from_dict, warping_to_dict

COMMANDS = ("lambda1", "moments", "bounds", "build-comparison", "check-balance", "sweep", "reconcile")
EXIT_OK, EXIT_NUMERIC, EXIT_INFEASIBLE, EXIT_USAGE = 0, 1, 2, 64
SWEEP_COLUMNS = ("R",) + bnd.BOUND_NAMES + ("lambda_lo", "lambda_hi")

PRESETS = {
    "hyperbolic": {"w": {"kind": "space_form", "b": -1.0}, "g": "one", "h": "zero", "m": 3, "R": 5.0},
    "hyperbolic-plane": {"w": {"kind": "space_form", "b": -1.0}, "g": "one", "h": "zero", "m": 2, "R": 5.0},
    "theorem-b": {"w": {"kind": "space_form", "b": -1.0}, "g": "one", "h": {"kind": "constant", "value": 0.1}, "m": 3, "R": 2.0},
    "euclidean": {"w": {"kind": "space_form", "b": 0.0}, "g": "one", "h": "zero", "m": 3, "R": 1.0},
}


class ConfigError(EigenmomentError):
    pass


class UnknownFlag(ConfigError):
    pass


class TypeMismatch(ConfigError):
    pass


@dataclass
class RunConfig:
    command: str
    space: dict = None
    spec: dict = None
    radii: list = None
    tol: float = DEFAULT_TOL
    k_max: int = DEFAULT_KMAX
    grid_n: int = DEFAULT_NODES
    h_sup: float = 0.0
    output_path: str = None

    def model_space(self):
        return _space_from_doc(self.space)

    def comparison_spec(self):
        if self.spec is not None:
            return spec_from_dict(self.spec)
        space = self.model_space()
        g, h = constant(1.0), constant(self.h_sup)
        return ComparisonSpaceSpec(space.warping, BoundingFunctions(g, h), space.dim, space.radius)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "unrecognized arguments" in message:
            raise UnknownFlag(message)
        raise TypeMismatch(message)


def _space_form_arg(text):
    key, sep, value = text.partition("=")
    if not sep:
        key, value = "b", text
    if key.strip() != "b":
        raise argparse.ArgumentTypeError(f"expected b=<curvature>, got {text!r}")
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"curvature {value!r} is not a number") from None


def _radius_arg(text):
    """A single radius or an inclusive range ``start:stop:step``."""
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot read radius {text!r}") from None
    if len(nums) == 1:
        return nums
    if len(nums) != 3 or nums[2] <= 0 or nums[1] < nums[0]:
        raise argparse.ArgumentTypeError(f"radius range must be start:stop:step, got {text!r}")
    count = int(math.floor((nums[1] - nums[0]) / nums[2] + 1e-9)) + 1
    return [round(nums[0] + i * nums[2], 12) for i in range(count)]


def build_parser():
    p = _Parser(prog="eigenmoment", description="First Dirichlet eigenvalues from exit-time moment spectra.")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--config", help="JSON configuration file; flags override its values")
    p.add_argument("--space-form", type=_space_form_arg, metavar="b=VALUE")
    p.add_argument("--warping", help="JSON file describing the warping function")
    p.add_argument("--dim", type=int)
    p.add_argument("--radius", type=_radius_arg, help="radius, or start:stop:step for sweep")
    p.add_argument("--spec", help="JSON file with a comparison spec {w, g, h, m, R}")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--h-sup", type=float, help="constant mean-curvature bound h")
    p.add_argument("--tol", type=float)
    p.add_argument("--k-max", type=int)
    p.add_argument("--grid-n", type=int)
    p.add_argument("--output", help="directory for CSV/JSON/plot artifacts")
    return p


_FILE_FIELDS = {
    "command": str,
    "space": dict,
    "spec": dict,
    "preset": str,
    "radius": (int, float, str, list),
    "tol": (int, float),
    "k_max": int,
    "grid_n": int,
    "h_sup": (int, float),
    "output": str,
}


def _load_config_file(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise TypeMismatch(f"{path}: top level must be a JSON object")
    for key, value in doc.items():
        if key not in _FILE_FIELDS:
            raise UnknownFlag(f"{path}: unknown field {key!r}")
        expected = _FILE_FIELDS[key]
        if isinstance(value, bool) or not isinstance(value, expected):
            raise TypeMismatch(f"{path}: field {key!r} has wrong type ({type(value).__name__}): {value!r}")
    return doc


def _space_from_doc(doc):
    if doc is None:
        raise ConfigError("no model space given (use --space-form/--warping with --dim and --radius)")
    try:
        w = warping_from_dict(doc["w"])
        return ModelSpace(int(doc["m"]), w, float(doc["R"]))
    except KeyError as exc:
        raise ConfigError(f"space descriptor is missing field {exc.args[0]!r}") from None


def parse_config(argv):
    """Merge the optional JSON file with command-line flags (flags win)."""
    args = build_parser().parse_args(argv)
    doc = _load_config_file(args.config) if args.config else {}
    command = args.command or doc.get("command")
    if command is None:
        raise ConfigError("missing command; expected one of: " + ", ".join(COMMANDS))
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")

    space = dict(doc.get("space") or {})
    if args.warping:
        space["w"] = _load_json(args.warping)
    if args.space_form is not None:
        space["w"] = {"kind": "space_form", "b": args.space_form}
    if args.dim is not None:
        space["m"] = args.dim
    radius = args.radius
    if radius is None and "radius" in doc:
        value = doc["radius"]
        radius = [float(v) for v in value] if isinstance(value, list) else _radius_arg(str(value))
    radii = None
    if radius is not None:
        if command == "sweep":
            radii = radius
        elif len(radius) != 1:
            raise TypeMismatch("--radius ranges are only valid for sweep")
        else:
            space["R"] = radius[0]
    elif command == "sweep" and "R" in space:
        radii = [float(space["R"])]

    spec = doc.get("spec")
    preset = args.preset or doc.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}")
        spec = PRESETS[preset]
    if args.spec:
        spec = _load_json(args.spec)

    cfg = RunConfig(
        command=command,
        space=space or None,
        spec=spec,
        radii=radii,
        tol=float(_pick(args.tol, doc, "tol", DEFAULT_TOL)),
        k_max=int(_pick(args.k_max, doc, "k_max", DEFAULT_KMAX)),
        grid_n=int(_pick(args.grid_n, doc, "grid_n", DEFAULT_NODES)),
        h_sup=float(_pick(args.h_sup, doc, "h_sup", 0.0)),
        output_path=_pick(args.output, doc, "output", None),
    )
    _validate(cfg)
    return cfg


def _pick(flag, doc, key, default):
    if flag is not None:
        return flag
    return doc.get(key, default)


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _validate(cfg):
    if not cfg.tol > 0:
        raise TypeMismatch(f"tol must be positive, got {cfg.tol}")
    if cfg.k_max < 2:
        raise TypeMismatch(f"k_max must be at least 2, got {cfg.k_max}")
    if cfg.grid_n < 17:
        raise TypeMismatch(f"grid_n must be at least 17, got {cfg.grid_n}")
    try:
        if cfg.command == "sweep":
            if not cfg.radii:
                raise ConfigError("sweep needs --radius start:stop:step")
            base = dict(cfg.space or {})
            for R in cfg.radii:
                _space_from_doc({**base, "R": R})
        elif cfg.command in ("build-comparison", "check-balance"):
            cfg.comparison_spec()
        else:
            cfg.model_space()
    except ConfigError:
        raise
    except EigenmomentError as exc:
        raise ConfigError(f"invalid domain: {exc}") from None


# --- artifacts -----------------------------------------------------------------


def _fmt(x):
    if x is None:
        return ""
    return repr(float(x))


def _csv_text(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) if not isinstance(v, (int, str)) else v for v in row])
    return buf.getvalue()


def _plot_script(csv_name, xlabel, ylabel, columns):
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
    ]
    plots = [f"'{csv_name}' using 1:{c} with lines" for c in columns]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


class _Sink:
    def __init__(self, output_path, stdout):
        self.dir = Path(output_path) if output_path else None
        self.stdout = stdout
        if self.dir is not None:
            self.dir.mkdir(parents=True, exist_ok=True)

    def write(self, name, text, primary=False):
        """Save ``name`` under the output directory; the primary artifact also goes to stdout."""
        if self.dir is not None:
            (self.dir / name).write_text(text)
        if primary:
            self.stdout.write(text)

    def json(self, name, payload):
        self.write(name, json.dumps(payload, indent=2, sort_keys=True) + "\n", primary=True)


def _space_doc(space):
    return {"w": warping_to_dict(space.warping), "m": space.dim, "R": space.radius}


def _cmd_lambda1(cfg, sink):
    space = cfg.model_space()
    try:
        est = lambda1_sandwich(space, cfg.tol, cfg.k_max, N=cfg.grid_n)
        status = EXIT_OK
    except NotConverged as exc:
        est, status = exc.estimate, EXIT_NUMERIC
    g = est.eigenfunction
    sink.write(
        "eigenfunction.csv",
        _csv_text(("r", "g"), zip(g.grid.nodes, g.values)),
    )
    sink.write("eigenfunction.gp", _plot_script("eigenfunction.csv", "r", "g", [2]))
    sink.json("lambda1.json", {"space": _space_doc(space), **est.to_dict()})
    return status


def _cmd_moments(cfg, sink):
    hier = build_hierarchy(cfg.model_space(), cfg.k_max, N=cfg.grid_n)
    buf = io.StringIO()
    write_moments_csv(hier, buf)
    sink.write("moments.csv", buf.getvalue(), primary=True)
    return EXIT_OK


def _cmd_bounds(cfg, sink):
    space = cfg.model_space()
    b = _curvature_of(space)
    report = bnd.space_form_bounds(b, space.dim, space.radius, cfg.h_sup, cfg.tol, cfg.k_max, cfg.grid_n)
    sink.json("bounds.json", {"space": _space_doc(space), "h_sup": cfg.h_sup, **report.to_dict()})
    return EXIT_OK


def _curvature_of(space):
    if space.warping.label != "space_form":
        raise ConfigError("bounds and sweep need a space-form warping")
    return space.warping.params["b"]


def _cmd_build_comparison(cfg, sink):
    spec = cfg.comparison_spec()
    result = build_comparison_space(spec, cfg.grid_n)
    r = result.grid.nodes
    W = result.W_on_base_grid()
    sink.write(
        "comparison_profile.csv",
        _csv_text(("r", "s", "Lambda", "W"), zip(r, result.stretch.values, result.lambda_profile.values, W)),
    )
    sink.write("comparison_profile.gp", _plot_script("comparison_profile.csv", "r", "value", [2, 4]))
    Wf = result.W_model.warping
    sink.json(
        "comparison.json",
        {
            "spec": spec.to_dict(),
            "stretched_radius": result.stretched_radius,
            "W0": float(Wf.eval(0.0)),
            "W_prime0": float(Wf.deriv(0.0)),
        },
    )
    return EXIT_OK


def _cmd_check_balance(cfg, sink):
    spec = cfg.comparison_spec()
    result = build_comparison_space(spec, cfg.grid_n)
    report = balance_check(result, spec)
    sink.json("balance.json", {"spec": spec.to_dict(), **report.to_dict()})
    return EXIT_OK if report.balanced else EXIT_INFEASIBLE


def _sweep_row(args):
    b, m, R, cfg = args
    rep = bnd.space_form_bounds(b, m, R, cfg.h_sup, cfg.tol, cfg.k_max, cfg.grid_n)
    lows = rep.lower_bounds()
    return (R,) + tuple(lows[name] for name in bnd.BOUND_NAMES) + (
        rep.lambda_estimate.lower,
        rep.lambda_estimate.upper,
    )


def worker_count():
    try:
        return max(1, int(os.environ.get("EIGENMOMENT_THREADS", "1")))
    except ValueError:
        return 1


def _cmd_sweep(cfg, sink):
    base = _space_from_doc({**cfg.space, "R": cfg.radii[0]})
    b, m = _curvature_of(base), base.dim
    jobs = [(b, m, R, cfg) for R in cfg.radii]
    workers = min(worker_count(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(j) for j in jobs]
    sink.write("sweep.csv", _csv_text(SWEEP_COLUMNS, rows), primary=True)
    n = len(SWEEP_COLUMNS)
    sink.write("sweep.gp", _plot_script("sweep.csv", "R", "eigenvalue", list(range(2, n + 1))))
    return EXIT_OK


def _cmd_reconcile(cfg, sink):
    space = cfg.model_space()
    sandwich = lambda1_sandwich(space, cfg.tol, cfg.k_max, N=cfg.grid_n)
    hier = build_hierarchy(space, cfg.k_max, N=cfg.grid_n)
    report = reconcile(hier, sandwich)
    sink.json("reconcile.json", report.to_dict())
    return EXIT_OK


HANDLERS = {
    "lambda1": _cmd_lambda1,
    "moments": _cmd_moments,
    "bounds": _cmd_bounds,
    "build-comparison": _cmd_build_comparison,
    "check-balance": _cmd_check_balance,
    "sweep": _cmd_sweep,
    "reconcile": _cmd_reconcile,
}


def run(cfg, stdout=None):
    """Execute a parsed configuration; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    sink = _Sink(cfg.output_path, stdout)
    try:
        return HANDLERS[cfg.command](cfg, sink)
    except ConfigError:
        raise
    except InfeasibleHypothesis as exc:
        print(f"eigenmoment: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (EigenmomentError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"eigenmoment: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main(argv=None, stdout=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        return run(cfg, stdout)
    except ConfigError as exc:
        print(f"eigenmoment: {exc}", file=sys.stderr)
        print(build_parser().format_usage().rstrip(), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
