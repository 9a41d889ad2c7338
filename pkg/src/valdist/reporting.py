"""JSON configuration and curve input, CSV/JSON report output."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .curves import ProjectiveCurve, reduce_representation
from .nevanlinna import SubschemeOnPn, coordinate_ring
from .poly import CPoly, MPoly
from .quadrature import DiskQuadratureSpec, QuadratureSpec
from .scalars import parse_exact


class ConfigError(ValueError):
    """Malformed configuration or input file."""


# ---------------------------------------------------------------- scalars

def parse_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ConfigError(f"expected a number or [re, im] pair, got {v!r}")


def parse_coefficient(v, exact: bool):
    if exact:
        try:
            return parse_exact(v)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"bad exact coefficient {v!r}") from e
    return parse_complex(v)


# ---------------------------------------------------------------- curves and targets

def parse_curve(spec: dict) -> ProjectiveCurve:
    """{"n": 2, "components": [[c_0, c_1, ...], ...], "exact": false}.

    Coefficients ascend in z. Float mode takes [re, im] pairs (or reals); exact mode takes
    [num, den] or [[num, den], [num, den]]. The representation is reduced on input.
    """
    if not isinstance(spec, dict) or "components" not in spec:
        raise ConfigError("curve needs a 'components' list")
    exact = bool(spec.get("exact", False))
    comps = spec["components"]
    if "n" in spec and len(comps) != int(spec["n"]) + 1:
        raise ConfigError("number of components must be n + 1")
    try:
        polys = [CPoly([parse_coefficient(c, exact) for c in comp]) for comp in comps]
        return reduce_representation(polys)
    except ConfigError:
        raise
    except (ValueError, TypeError) as e:
        raise ConfigError(str(e)) from e


def curve_to_spec(f: ProjectiveCurve) -> dict:
    return {"n": f.n, "components": [[[c.real, c.imag] for c in map(complex, p.coeffs)] for p in f.components]}


def parse_vector(v: Sequence) -> list[complex]:
    return [parse_complex(x) for x in v]


def parse_generator(terms: Sequence, n: int) -> MPoly:
    """[[coeff, [e_0, ..., e_n]], ...] -> homogeneous polynomial."""
    ring = coordinate_ring(n)
    out = {}
    for term in terms:
        if len(term) != 2 or len(term[1]) != n + 1:
            raise ConfigError(f"bad generator term {term!r}")
        c = parse_complex(term[0])
        m = ring.pack([int(e) for e in term[1]])
        out[m] = out.get(m, 0) + (c.real if c.imag == 0 else c)
    g = MPoly(ring, out)
    if not g.is_zero() and not g.is_homogeneous():
        raise ConfigError("generators must be homogeneous")
    return g


def parse_targets(spec: dict, n: int) -> dict:
    """{"hyperplanes": [[a_0..a_n], ...], "points": [[p_0..p_n], ...],
    "subschemes": [{"generators": [[[c, [e...]], ...], ...]}, ...]}."""
    out = {"hyperplanes": [], "points": [], "subschemes": []}
    for a in spec.get("hyperplanes", []):
        row = parse_vector(a)
        if len(row) != n + 1:
            raise ConfigError("hyperplane length must be n + 1")
        out["hyperplanes"].append(row)
    for p in spec.get("points", []):
        row = parse_vector(p)
        if len(row) != n + 1:
            raise ConfigError("point length must be n + 1")
        out["points"].append(row)
    for z in spec.get("subschemes", []):
        try:
            out["subschemes"].append(SubschemeOnPn(n, [parse_generator(g, n) for g in z["generators"]]))
        except (KeyError, TypeError) as e:
            raise ConfigError(f"bad subscheme {z!r}") from e
    return out


# ---------------------------------------------------------------- experiment config

@dataclass
class RGrid:
    r_min: float = 2.0
    r_max: float = 200.0
    count: int = 40
    log: bool = True

    def values(self) -> np.ndarray:
        if self.count < 1 or self.r_min <= 0 or (self.count > 1 and self.r_max <= self.r_min):
            raise ConfigError("r-grid must be positive and strictly increasing")
        if self.count == 1:
            return np.array([self.r_min])
        if self.log:
            return np.geomspace(self.r_min, self.r_max, self.count)
        return np.linspace(self.r_min, self.r_max, self.count)


@dataclass
class ExperimentConfig:
    experiment: str = ""
    curve: dict | None = None
    targets: dict = field(default_factory=dict)
    r_grid: RGrid = field(default_factory=RGrid)
    epsilons: list = field(default_factory=lambda: [0.1, 0.5])
    samples: int = 100_000
    seed: int | None = None
    quadrature: dict = field(default_factory=dict)
    disk_quadrature: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    out: str | None = None
    threads: int = 1

    def quad(self) -> QuadratureSpec:
        try:
            return QuadratureSpec(**self.quadrature)
        except TypeError as e:
            raise ConfigError(f"bad quadrature override: {e}") from e

    def disk(self) -> DiskQuadratureSpec:
        try:
            return DiskQuadratureSpec(**self.disk_quadrature)
        except TypeError as e:
            raise ConfigError(f"bad disk quadrature override: {e}") from e

    def require_seed(self) -> int:
        if self.seed is None:
            raise ConfigError("a seed is required for stochastic experiments")
        return int(self.seed)

    def echo(self) -> dict:
        """Everything that influences results (thread count and output path excluded)."""
        return {
            "experiment": self.experiment,
            "curve": self.curve,
            "targets": self.targets,
            "r_grid": {"min": self.r_grid.r_min, "max": self.r_grid.r_max, "count": self.r_grid.count,
                       "log": self.r_grid.log},
            "epsilons": list(self.epsilons),
            "samples": self.samples,
            "seed": self.seed,
            "quadrature": self.quadrature,
            "disk_quadrature": self.disk_quadrature,
            "options": self.options,
        }


_KNOWN = {"experiment", "curve", "targets", "r_grid", "epsilon", "epsilons", "samples", "seed",
          "quadrature", "disk_quadrature", "options", "out", "threads"}


def config_from_dict(d: dict) -> ExperimentConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(d) - _KNOWN
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    grid = d.get("r_grid", {})
    cfg = ExperimentConfig(
        experiment=d.get("experiment", ""),
        curve=d.get("curve"),
        targets=d.get("targets", {}),
        r_grid=RGrid(float(grid.get("min", 2.0)), float(grid.get("max", 200.0)), int(grid.get("count", 40)),
                     bool(grid.get("log", True))),
        epsilons=[float(e) for e in d.get("epsilons", d.get("epsilon", [0.1, 0.5]))],
        samples=int(d.get("samples", 100_000)),
        seed=d.get("seed"),
        quadrature=dict(d.get("quadrature", {})),
        disk_quadrature=dict(d.get("disk_quadrature", {})),
        options=dict(d.get("options", {})),
        out=d.get("out"),
        threads=int(d.get("threads", 1)),
    )
    cfg.r_grid.values()
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            return config_from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e


# ---------------------------------------------------------------- reports

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    experiment: str
    columns: dict  # name -> list of values, fixed insertion order
    checks: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def report_csv(rep: Report) -> str:
    names = list(rep.columns)
    lengths = {len(v) for v in rep.columns.values()}
    if len(lengths) > 1:
        raise ValueError("report columns have unequal length")
    buf = io.StringIO()
    buf.write(f"# columns: {','.join(names)}\n")
    buf.write(f"# version: valdist {__version__}\n")
    buf.write(f"# config: {json.dumps(rep.config, sort_keys=True, separators=(',', ':'))}\n")
    for c in rep.checks:
        buf.write(f"# check: {c.name} {'PASS' if c.passed else 'FAIL'} {c.detail}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    rows = lengths.pop() if lengths else 0
    for i in range(rows):
        w.writerow([_fmt(rep.columns[k][i]) for k in names])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    return v if isinstance(v, (str, type(None))) else str(v)


def report_json(rep: Report) -> str:
    doc: dict[str, Any] = {
        "experiment": rep.experiment,
        "version": __version__,
        "config": rep.config,
        "passed": rep.passed,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in rep.checks],
        "columns": {k: [_jsonable(x) for x in v] for k, v in rep.columns.items()},
    }
    return json.dumps(doc, sort_keys=False, indent=1)


def write_report(rep: Report, out: str | Path | None, json_mirror: bool = False) -> str:
    text = report_csv(rep)
    if out:
        Path(out).write_text(text)
        if json_mirror:
            Path(out).with_suffix(".json").write_text(report_json(rep))
    return text
