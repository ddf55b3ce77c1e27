"""Config-driven experiment runner.

A TOML config names an experiment and its inputs::

    experiment = "scaling-degree"
    seed = 0
    output = "free.csv"

    [measure]              # inline measure, or  file = "measure.toml",  or  random = true
    [[measure.atom]]
    mass_sq = 1.0
    weight = 1.0

    [probe]
    width = 1.0

    [grid]
    k = [4, 14]            # λ = 2^-k for k in this closed range
    window = 6

Grid entries accept an explicit list or a table ``{start, stop, num}``
(geometric when ``geometric = true``) or ``{start, stop, step}``.

Output is an RFC-4180 CSV preceded by ``#`` metadata lines (tool version,
config hash, summary). Rows are written in grid order after every point has
been computed, through a temporary file that replaces the target only on
success.
"""

from __future__ import annotations

import argparse
import copy
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, Callable, Mapping, Optional, Sequence

import numpy as np

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

from . import __version__
from .errors import SpectralLabError
from .fitting import fit_loglog
from .ftscale import DEFAULT_RADII, SHELLS, PowerLawSpec, check_radii, smeared_power_ft
from .kernel import TestFunction, free_two_point_direct, free_two_point_spacelike
from .measure import (
    SpectralMeasure,
    check_etcr_sum_rule,
    decompose,
    free_field,
    measure_from_dict,
    measure_to_dict,
    random_finite_measure,
    read_measure,
    total_mass,
)
from .parallel import pmap
from .scaling import (
    DEFAULT_WINDOW,
    MIN_WINDOW,
    ScalingGrid,
    check_lambdas,
    classify,
    fit_scaling_degree,
    scaled_value,
)
from .schwinger import DEFAULT_R_GRID, check_r_grid, dipole_energy, dipole_profile, fit_confinement

EXPERIMENTS = (
    "propagator",
    "scaling-degree",
    "classify",
    "schwinger-energy",
    "confinement",
    "ft-scaling",
    "decompose",
    "sum-rule",
)
_NEEDS_MEASURE = {"scaling-degree", "classify", "decompose", "sum-rule"}
_NEEDS_PROBE = {"scaling-degree", "classify"}

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


class ConfigError(SpectralLabError):
    """The config is malformed or fails validation."""

    def __init__(self, diagnostics: Sequence[str]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class RunError(SpectralLabError):
    """A computation failed; the message names the grid point."""


@dataclass(frozen=True)
class RunRecord:
    experiment: str
    config_hash: str
    version: str
    columns: tuple
    rows: tuple
    summary: str
    wall_time: float = field(default=0.0, compare=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# spectral-lab {self.version}\n")
        buf.write(f"# experiment: {self.experiment}\n")
        buf.write(f"# config-sha256: {self.config_hash}\n")
        buf.write(f"# summary: {self.summary}\n")
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(x) for x in row])
        return buf.getvalue()


def _cell(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return repr(x)
    return str(x)


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------


def load_config(path) -> dict:
    """Read a TOML config; relative measure files resolve against its directory."""
    path = Path(path)
    with path.open("rb") as fh:
        config = tomllib.load(fh)
    meas = config.get("measure")
    if isinstance(meas, Mapping) and "file" in meas:
        f = Path(meas["file"])
        if not f.is_absolute():
            config["measure"] = dict(meas, file=str(path.parent / f))
    return config


def default_config(experiment: str = "scaling-degree") -> dict:
    """A well-formed config for ``experiment`` (free field, unit Gaussian probe)."""
    cfg: dict = {"experiment": experiment, "seed": 0}
    if experiment in _NEEDS_MEASURE:
        cfg["measure"] = measure_to_dict(free_field(1.0))
    if experiment in _NEEDS_PROBE:
        cfg["probe"] = {"center": [0.0, 0.0, 0.0, 0.0], "width": 1.0, "amplitude": 1.0}
    grid: dict = {}
    if experiment == "propagator":
        grid = {"mass": {"start": 0.1, "stop": 10.0, "num": 5, "geometric": True},
                "r": {"start": 0.1, "stop": 10.0, "num": 5, "geometric": True}}
    elif experiment in ("scaling-degree", "classify"):
        grid = {"k": [4, 14], "window": DEFAULT_WINDOW}
    elif experiment in ("schwinger-energy", "confinement"):
        grid = {"R": list(DEFAULT_R_GRID), "e": 1.0, "epsilon": 1.0, "ramp": "linear"}
    elif experiment == "ft-scaling":
        grid = {"radii": list(DEFAULT_RADII), "pl_exponent": -2.0, "space_dim": 3,
                "regularization_order": 0, "shell": "gaussian"}
    elif experiment == "decompose":
        grid = {"mass_sq": {"start": 0.0, "stop": 10.0, "num": 11}}
    elif experiment == "sum-rule":
        grid = {"tol": 1e-8}
    cfg["grid"] = grid
    return cfg


def _points(spec, name: str) -> list[float]:
    if isinstance(spec, (list, tuple)):
        return [float(x) for x in spec]
    if isinstance(spec, Mapping):
        start, stop = float(spec["start"]), float(spec["stop"])
        if "step" in spec:
            step = float(spec["step"])
            if not step > 0:
                raise ValueError(f"{name}: step must be > 0")
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [start + i * step for i in range(n)]
        num = int(spec["num"])
        if spec.get("geometric", False):
            return [float(x) for x in np.geomspace(start, stop, num)]
        return [float(x) for x in np.linspace(start, stop, num)]
    raise ValueError(f"{name}: expected a list or a {{start, stop, num|step}} table")


def _lambdas(grid: Mapping) -> list[float]:
    if "lambdas" in grid:
        return _points(grid["lambdas"], "lambdas")
    k_lo, k_hi = grid.get("k", [4, 14])
    return [2.0 ** -k for k in range(int(k_lo), int(k_hi) + 1)]


def _measure(cfg: Mapping) -> SpectralMeasure:
    spec = cfg.get("measure")
    if spec is None:
        raise ValueError("experiment needs a [measure] table")
    if "file" in spec:
        return read_measure(spec["file"])
    if spec.get("random", False):
        return random_finite_measure(np.random.default_rng(int(cfg.get("seed", 0))))
    return measure_from_dict(spec)


def _probe(cfg: Mapping) -> TestFunction:
    p = cfg.get("probe", {})
    return TestFunction(tuple(p.get("center", (0.0, 0.0, 0.0, 0.0))), float(p.get("width", 1.0)),
                        float(p.get("amplitude", 1.0)))


def _power_spec(grid: Mapping) -> PowerLawSpec:
    return PowerLawSpec(float(grid.get("pl_exponent", -2.0)), int(grid.get("space_dim", 3)),
                        int(grid.get("regularization_order", 0)))


def validate(config: Mapping) -> list[str]:
    """All problems that would stop ``run``; an empty list means runnable."""
    diags: list[str] = []
    exp = config.get("experiment")
    if exp not in EXPERIMENTS:
        return [f"experiment must be one of {', '.join(EXPERIMENTS)}; got {exp!r}"]
    if not isinstance(config.get("seed", 0), int):
        diags.append("seed must be an integer")

    def check(label: str, fn: Callable[[], Any]):
        try:
            fn()
        except (SpectralLabError, ValueError, TypeError, KeyError, OSError) as exc:
            msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
            diags.append(f"{label}: {msg}")

    grid = config.get("grid", {})
    if exp in _NEEDS_MEASURE:
        check("measure", lambda: _measure(config))
    if exp in _NEEDS_PROBE:
        check("probe", lambda: _probe(config))
    if exp == "propagator":
        def prop():
            for m in _points(grid.get("mass", [1.0]), "mass"):
                if not m >= 0:
                    raise ValueError(f"mass must be >= 0, got {m}")
            for r in _points(grid.get("r", [1.0]), "r"):
                if not r > 0:
                    raise ValueError(f"r must be > 0, got {r}")
        check("grid", prop)
    elif exp in ("scaling-degree", "classify"):
        def lam():
            lams = _lambdas(grid)
            check_lambdas(lams)
            w = int(grid.get("window", DEFAULT_WINDOW))
            if not MIN_WINDOW <= w <= len(lams):
                raise ValueError(f"window must hold between {MIN_WINDOW} and {len(lams)} points")
        check("grid", lam)
    elif exp in ("schwinger-energy", "confinement"):
        def sch():
            R = _points(grid.get("R", list(DEFAULT_R_GRID)), "R")
            if exp == "confinement":
                check_r_grid(R)
            for r in R:
                dipole_profile(r, float(grid.get("epsilon", 1.0)), grid.get("ramp", "linear"))
            if not float(grid.get("e", 1.0)) >= 0:
                raise ValueError("coupling e must be >= 0")
        check("grid", sch)
    elif exp == "ft-scaling":
        def ft():
            _power_spec(grid)
            check_radii(_points(grid.get("radii", list(DEFAULT_RADII)), "radii"))
            if grid.get("shell", "gaussian") not in SHELLS:
                raise ValueError(f"shell must be one of {SHELLS}")
        check("grid", ft)
    elif exp == "decompose":
        check("grid", lambda: _points(grid.get("mass_sq", [0.0]), "mass_sq"))
    elif exp == "sum-rule":
        def tol():
            if not float(grid.get("tol", 1e-8)) > 0:
                raise ValueError("tol must be > 0")
        check("grid", tol)
    return diags


def config_hash(config: Mapping) -> str:
    """SHA-256 of the canonical config (measure files inlined, output path dropped)."""
    canon = copy.deepcopy(dict(config))
    canon.pop("output", None)
    meas = canon.get("measure")
    if isinstance(meas, Mapping) and "file" in meas:
        canon["measure"] = measure_to_dict(read_measure(meas["file"]))
    blob = json.dumps(canon, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def _guarded(fn, label, point):
    try:
        return True, fn(point)
    except SpectralLabError as exc:
        return False, f"{label}={point!r}: {type(exc).__name__}: {exc}"


def _evaluate(fn, points, label):
    out = pmap(partial(_guarded, fn, label), list(points))
    for ok, val in out:
        if not ok:
            raise RunError(val)
    return [val for _, val in out]


def _propagator_row(point):
    m, r = point
    a = free_two_point_spacelike(m, r)
    b = free_two_point_direct(m, r)
    return (m, r, a.value, a.abs_error, b.value, b.abs_error, abs(a.value - b.value) / abs(a.value))


def _exp_propagator(cfg):
    grid = cfg.get("grid", {})
    pts = [(m, r) for m in _points(grid.get("mass", [1.0]), "mass") for r in _points(grid.get("r", [1.0]), "r")]
    rows = _evaluate(_propagator_row, pts, "(mass, r)")
    worst = max(row[-1] for row in rows)
    cols = ("mass", "r", "bessel", "bessel_abs_error", "direct", "direct_abs_error", "rel_diff")
    return cols, rows, f"max_rel_diff={worst:.3g} points={len(rows)}"


def _scaling_rows(cfg):
    m, f = _measure(cfg), _probe(cfg)
    lams = _lambdas(cfg.get("grid", {}))
    evs = _evaluate(partial(scaled_value, m, f), lams, "lambda")
    grid = ScalingGrid(tuple(lams), tuple(e.value for e in evs), tuple(e.abs_error for e in evs))
    rows = [(lam, e.value, e.abs_error) for lam, e in zip(lams, evs)]
    return m, f, grid, rows


def _fit_or_raise(grid, window):
    try:
        return fit_scaling_degree(grid, window)
    except SpectralLabError as exc:
        raise RunError(f"fit over lambda window [{grid.lambdas[-window]:.6g}, {grid.lambdas[-1]:.6g}]: {exc}") from exc


def _exp_scaling(cfg):
    _, _, grid, rows = _scaling_rows(cfg)
    fit = _fit_or_raise(grid, int(cfg.get("grid", {}).get("window", DEFAULT_WINDOW)))
    return ("lambda", "value", "abs_error"), rows, fit.summary()


def _exp_classify(cfg):
    m, f, grid, rows = _scaling_rows(cfg)
    window = int(cfg.get("grid", {}).get("window", DEFAULT_WINDOW))
    _fit_or_raise(grid, window)
    try:
        verdict = classify(m, f, grid.lambdas, window)
    except SpectralLabError as exc:
        raise RunError(f"classify: {exc}") from exc
    summary = (
        f"{verdict.kind.value} degree={verdict.degree:.2f} stderr={verdict.stderr:.3g} "
        f"sigma_mass_finite={str(verdict.sigma_mass_finite).lower()}"
    )
    return ("lambda", "value", "abs_error"), rows, summary


def _energy_row(e, eps, ramp, R):
    rep = dipole_energy(e, dipole_profile(R, eps, ramp))
    return (R, rep.energy, rep.gradient_part, rep.mass_part)


def _energies(cfg):
    grid = cfg.get("grid", {})
    R = _points(grid.get("R", list(DEFAULT_R_GRID)), "R")
    e, eps, ramp = float(grid.get("e", 1.0)), float(grid.get("epsilon", 1.0)), grid.get("ramp", "linear")
    rows = _evaluate(partial(_energy_row, e, eps, ramp), R, "R")
    return ("R", "energy", "gradient_part", "mass_part"), rows, e


def _exp_schwinger(cfg):
    cols, rows, e = _energies(cfg)
    return cols, rows, f"e={e:g} photon_mass={e / math.sqrt(math.pi):.6g} points={len(rows)}"


def _exp_confinement(cfg):
    cols, rows, _ = _energies(cfg)
    try:
        v = fit_confinement([r[0] for r in rows], [r[1] for r in rows])
    except SpectralLabError as exc:
        raise RunError(f"fit over R grid: {exc}") from exc
    return cols, rows, f"{v.kind.value} growth_slope={v.growth_slope:.6g} stderr={v.slope_stderr:.3g}"


def _exp_ftscale(cfg):
    grid = cfg.get("grid", {})
    spec = _power_spec(grid)
    radii = _points(grid.get("radii", list(DEFAULT_RADII)), "radii")
    shell = grid.get("shell", "gaussian")
    width = grid.get("rel_width")
    evs = _evaluate(partial(smeared_power_ft, spec, shell=shell, rel_width=width), radii, "radius")
    rows = [(r, e.value, e.abs_error) for r, e in zip(radii, evs)]
    try:
        line = fit_loglog(radii, [e.value for e in evs])
    except SpectralLabError as exc:
        raise RunError(f"fit over radii: pairing changes sign across radii: {exc}") from exc
    summary = f"exponent={line.slope:.4f} stderr={line.slope_stderr:.3g} expected={spec.expected_exponent:g}"
    return ("radius", "pairing", "abs_error"), rows, summary


def _exp_decompose(cfg):
    m = _measure(cfg)
    atoms, cont = decompose(m)
    rows = [("atom", a.mass_sq, a.weight) for a in atoms]
    for x in _points(cfg.get("grid", {}).get("mass_sq", [0.0]), "mass_sq"):
        rows.append(("density", x, float(cont(x))))
    tm = total_mass(m)
    z = max((a.weight for a in atoms), default=0.0)
    summary = f"atoms={len(atoms)} components={len(cont.components)} total_mass={tm.value:.12g} max_atom_weight={z:.12g}"
    return ("kind", "mass_sq", "value"), rows, summary


def _exp_sum_rule(cfg):
    m = _measure(cfg)
    check = check_etcr_sum_rule(m, float(cfg.get("grid", {}).get("tol", 1e-8)))
    tm = total_mass(m)
    rows = [("total_mass", tm.value), ("quadrature_error", tm.quadrature_error)]
    rows += [("atom_weight", a.weight) for a in m.atoms]
    return ("quantity", "value"), rows, str(check)


_DISPATCH = {
    "propagator": _exp_propagator,
    "scaling-degree": _exp_scaling,
    "classify": _exp_classify,
    "schwinger-energy": _exp_schwinger,
    "confinement": _exp_confinement,
    "ft-scaling": _exp_ftscale,
    "decompose": _exp_decompose,
    "sum-rule": _exp_sum_rule,
}


def run(config: Mapping) -> RunRecord:
    """Validate, then run the configured experiment. Raises ConfigError or RunError."""
    diags = validate(config)
    if diags:
        raise ConfigError(diags)
    t0 = time.perf_counter()
    exp = config["experiment"]
    try:
        cols, rows, summary = _DISPATCH[exp](config)
    except RunError:
        raise
    except SpectralLabError as exc:
        raise RunError(f"{exp}: {type(exc).__name__}: {exc}") from exc
    return RunRecord(exp, config_hash(config), __version__, tuple(cols), tuple(tuple(r) for r in rows), summary,
                     time.perf_counter() - t0)


def write_csv(record: RunRecord, path) -> None:
    """Atomically write ``record`` to ``path`` (temp file + rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(record.to_csv())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectral-lab", description="Run a spectral-lab experiment from a TOML config.")
    p.add_argument("--config", type=Path, help="TOML config file (defaults to the experiment's default config)")
    p.add_argument("--out", type=Path, help="CSV output path (overrides 'output' in the config; stdout if absent)")
    p.add_argument("--experiment", choices=EXPERIMENTS, help="override the config's experiment")
    p.add_argument("--quiet", action="store_true", help="suppress the summary line")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            config = load_config(args.config)
        elif args.experiment is not None:
            config = default_config(args.experiment)
        else:
            print("error: need --config or --experiment", file=sys.stderr)
            return EXIT_INVALID
    except (OSError, tomllib.TOMLDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.experiment is not None:
        config["experiment"] = args.experiment
    out = args.out if args.out is not None else config.get("output")

    diags = validate(config)
    if diags:
        for d in diags:
            print(f"invalid: {d}", file=sys.stderr)
        return EXIT_INVALID
    try:
        record = run(config)
        if out is not None:
            write_csv(record, out)
        else:
            sys.stdout.write(record.to_csv())
    except SpectralLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if not args.quiet:
        print(record.summary, file=sys.stderr if out is None else sys.stdout)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
