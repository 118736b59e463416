"""Command-line front end.

    casimir-polder --atom-a A.json --atom-b B.json --rmin 0.1 --rmax 100 --points 64 \
        --method imagfreq --out curve.csv
    casimir-polder report far --atom-a A.json --atom-b B.json --out far.json

Exit codes: 0 success, 1 configuration error, 2 unreadable or invalid atom
file, 3 numerical failure (the failing separation is printed).
Set CASIMIR_POLDER_WORKERS to spread the samples of a curve over processes.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import __version__
from .atoms import AtomModelError, load_atom_model
from .potential import (
    DEFAULT_BOX_FACTOR,
    DEFAULT_ORACLE_TOL,
    DEFAULT_ROUTE_TOL,
    Method,
    SampleError,
    ZoneError,
    asymptotic_fit,
    check_zone,
    compute_curve,
    cp_imagfreq_oracle,
    far_zone_coefficient,
    london_c6,
)
from .units import UnitSystem

WORKERS_ENV = "CASIMIR_POLDER_WORKERS"
CSV_HEADER = ["R", "energy", "error_estimate", "method", "conjectural"]

EXIT_CONFIG = 1
EXIT_ATOM_FILE = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; that code is reserved for atom files
    def error(self, message):
        raise ConfigError(message)


@dataclass
class RunConfig:
    atom_a: str
    atom_b: str
    rmin: float
    rmax: float
    points: int = 32
    spacing: str = "log"
    method: str = "imagfreq"
    temperature: Optional[float] = None
    out: Optional[str] = None
    format: str = "csv"
    tol: Optional[float] = None
    reference_length: Optional[float] = None

    def validate(self):
        if not (math.isfinite(self.rmin) and math.isfinite(self.rmax) and 0 < self.rmin < self.rmax):
            raise ConfigError(f"need 0 < rmin < rmax, got rmin={self.rmin} rmax={self.rmax}")
        if self.points < 2:
            raise ConfigError(f"points must be at least 2, got {self.points}")
        if self.spacing not in ("log", "linear"):
            raise ConfigError(f"spacing must be log or linear, got {self.spacing!r}")
        try:
            Method(self.method)
        except ValueError:
            raise ConfigError(f"unknown method {self.method!r}") from None
        if self.temperature is not None:
            if Method(self.method) is not Method.THERMAL:
                raise ConfigError("temperature requires thermal method")
            if not self.temperature >= 0:
                raise ConfigError(f"temperature must be nonnegative, got {self.temperature}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.reference_length is not None and not self.reference_length > 0:
            raise ConfigError(f"reference length must be positive, got {self.reference_length}")
        return self

    def grid(self):
        if self.spacing == "log":
            return np.geomspace(self.rmin, self.rmax, self.points)
        return np.linspace(self.rmin, self.rmax, self.points)

    def tolerances(self):
        method = Method(self.method)
        if method is Method.IMAGFREQ:
            return {"oracle": self.tol or DEFAULT_ORACLE_TOL}
        if method is Method.MODESUM:
            return {"box_factor": DEFAULT_BOX_FACTOR}
        return {"route": self.tol or DEFAULT_ROUTE_TOL}


def _workers():
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{WORKERS_ENV} must be at least 1, got {n}")
    return n


def _load_atoms(cfg):
    atoms = []
    for path in (cfg.atom_a, cfg.atom_b):
        try:
            atoms.append(load_atom_model(path))
        except OSError as exc:
            raise AtomModelError(f"cannot read {path}: {exc.strerror or exc}") from exc
        except AtomModelError as exc:
            raise AtomModelError(f"{path}: {exc}") from exc
    return atoms


def _fmt(x):
    return repr(float(x))


def format_csv(curve, units: Optional[UnitSystem] = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(CSV_HEADER)
    if units is not None:
        header += ["R_m", "energy_J"]
    writer.writerow(header)
    for v in curve.values:
        row = [_fmt(v.R), _fmt(v.energy), _fmt(v.error_estimate), v.method.value,
               "true" if v.conjectural else "false"]
        if units is not None:
            row += [_fmt(units.length_to_si(v.R)), _fmt(units.energy_to_si(v.energy))]
        writer.writerow(row)
    return buf.getvalue()


def _provenance(cfg, tolerances):
    return {"version": __version__, "config": asdict(cfg), "tolerances": tolerances}


def format_json(curve, cfg) -> str:
    records = [
        {"R": v.R, "energy": v.energy, "error_estimate": v.error_estimate,
         "method": v.method.value, "conjectural": v.conjectural}
        for v in curve.values
    ]
    doc = {"provenance": _provenance(cfg, cfg.tolerances()), "records": records}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run_curve(cfg: RunConfig) -> int:
    cfg.validate()
    atomA, atomB = _load_atoms(cfg)
    T = cfg.temperature or 0.0
    curve = compute_curve(atomA, atomB, cfg.grid(), cfg.method, T, cfg.tol, _workers())
    if cfg.format == "csv":
        units = UnitSystem(cfg.reference_length) if cfg.reference_length else None
        _write(format_csv(curve, units), cfg.out)
    else:
        _write(format_json(curve, cfg), cfg.out)
    return 0


# --- reports --------------------------------------------------------------------

def _zone_grid(cfg, atoms, zone):
    ks = np.concatenate([a.wavenumbers for a in atoms])
    k_min, k_max = float(ks.min()), float(ks.max())
    if cfg.rmin is None:
        cfg.rmin = 1e-3 / k_max if zone == "near" else 100.0 / k_min
    if cfg.rmax is None:
        cfg.rmax = 1e-2 / k_max if zone == "near" else 1000.0 / k_min
    cfg.validate()
    R = cfg.grid()
    try:
        check_zone(R, (k_min, k_max), zone)
    except ZoneError as exc:
        raise ConfigError(str(exc)) from exc
    return R


def run_report(cfg: RunConfig, report: str, box_sizes=(20.0, 40.0, 80.0), separation=2.0) -> int:
    atomA, atomB = _load_atoms(cfg)
    if report in ("far", "near"):
        R = _zone_grid(cfg, (atomA, atomB), report)
        curve = compute_curve(atomA, atomB, R, cfg.method, cfg.temperature or 0.0, cfg.tol, _workers())
        fit = asymptotic_fit(curve, report)
        expected = far_zone_coefficient(atomA, atomB) if report == "far" else -london_c6(atomA, atomB)
        body = {
            "zone": fit.zone.value,
            "exponent": fit.exponent,
            "coefficient": fit.coefficient,
            "expected_coefficient": expected,
            "relative_deviation": abs(fit.coefficient / expected - 1),
            "fit_residual": fit.fit_residual,
            "free_exponent": fit.free_exponent,
        }
        tolerances = cfg.tolerances()
    elif report == "box":
        from .modesum import box_sweep

        cfg.rmin = cfg.rmin if cfg.rmin is not None else separation
        cfg.rmax = cfg.rmax if cfg.rmax is not None else 2 * cfg.rmin
        k0 = float(min(atomA.wavenumbers.min(), atomB.wavenumbers.min()))
        R = separation / k0
        reference = cp_imagfreq_oracle(atomA, atomB, R, cfg.tol or DEFAULT_ORACLE_TOL).energy
        rows = box_sweep(atomA, atomB, R, box_sizes, reference)
        dev = [r.deviation for r in rows]
        body = {
            "separation": R,
            "reference": reference,
            "rows": [asdict(r) for r in rows],
            "monotone": all(b < a for a, b in zip(dev, dev[1:])),
        }
        tolerances = {"oracle": cfg.tol or DEFAULT_ORACLE_TOL}
    else:
        raise ConfigError(f"unknown report {report!r}")
    doc = {"provenance": _provenance(cfg, tolerances), "report": report, **body}
    _write(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg.out)
    return 0


# --- argument parsing -----------------------------------------------------------------

def _common(p, report=False):
    p.add_argument("--atom-a", required=True, help="atom model JSON for atom A")
    p.add_argument("--atom-b", required=True, help="atom model JSON for atom B")
    p.add_argument("--rmin", type=float, default=None if report else 0.1)
    p.add_argument("--rmax", type=float, default=None if report else 100.0)
    p.add_argument("--points", type=int, default=16 if report else 32)
    p.add_argument("--spacing", choices=["log", "linear"], default="log")
    p.add_argument("--method", choices=[m.value for m in Method], default="imagfreq")
    p.add_argument("--temperature", type=float, default=None)
    p.add_argument("--tol", type=float, default=None, help="quadrature tolerance override")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser():
    p = _Parser(prog="casimir-polder", description="Casimir-Polder potential curves between two atoms.")
    _common(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--reference-length", type=float, default=None,
                   help="reduced length unit in metres; adds R_m and energy_J columns")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def build_report_parser():
    p = _Parser(prog="casimir-polder report", description="Asymptotic and box-convergence reports (JSON).")
    p.add_argument("kind", choices=["far", "near", "box"])
    _common(p, report=True)
    p.add_argument("--box-sizes", default="20,40,80", help="comma-separated L*k0 values")
    p.add_argument("--separation", type=float, default=2.0, help="k0*R for the box report")
    return p


def _config(ns, fmt="csv", reference_length=None):
    return RunConfig(ns.atom_a, ns.atom_b, ns.rmin, ns.rmax, ns.points, ns.spacing, ns.method,
                     ns.temperature, ns.out, fmt, ns.tol, reference_length)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] == "report":
            ns = build_report_parser().parse_args(argv[1:])
            cfg = _config(ns, "json")
            if cfg.temperature is not None and Method(cfg.method) is not Method.THERMAL:
                raise ConfigError("temperature requires thermal method")
            try:
                sizes = tuple(float(s) for s in ns.box_sizes.split(","))
            except ValueError:
                raise ConfigError(f"bad --box-sizes {ns.box_sizes!r}") from None
            return run_report(cfg, ns.kind, sizes, ns.separation)
        ns = build_parser().parse_args(argv)
        return run_curve(_config(ns, ns.format, ns.reference_length))
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AtomModelError as exc:
        print(f"atom file error: {exc}", file=sys.stderr)
        return EXIT_ATOM_FILE
    except SampleError as exc:
        print(f"numerical failure at R={exc.R!r}: {exc.__cause__ or exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
