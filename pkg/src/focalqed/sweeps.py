"""
Parameter sweeps behind the figure datasets, with a deterministic CSV format.

A sweep is described by a `SweepSpec` (kind + flat parameter map).  Every
default is filled in by `resolve_spec`, so the metadata block written in
front of the CSV header is the complete recipe for the rows below it.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .modefield import (MAX_DISPLACEMENT, MAX_GRID, SCAN_DIRECTIONS, FOCUS,
                        DipoleOrientation, MirrorGeometry, density_scan,
                        make_grid, shift_density_many, vacuum_density_many)
from .observables import (DEFAULT_KAPPA, casimir_polder_shift, loglog_slope,
                          plane_mirror_shift)

KINDS = ("fig2_na_sweep", "fig3_displacement", "fig4_distance", "casimir_scaling", "check_suite")

_GRID = {"grid_theta": 160, "grid_phi": 320}
DEFAULTS = {
    "fig2_na_sweep": {"na_steps": 100, "na_min": 1e-3, "a": 20 * math.pi, "rho": 1.0,
                      "dipole": [1.0, 0.0, 0.0], **_GRID},
    "fig3_displacement": {"direction": "axial", "r_max": 12.0, "steps": 241, "a": 20 * math.pi,
                          "alpha_deg": 90.0, "rho": 1.0, "dipole": [1.0, 0.0, 0.0], **_GRID},
    "fig4_distance": {"a_min": 10 * math.pi, "a_max": 14 * math.pi, "steps": 401,
                      "kappa": DEFAULT_KAPPA, "dipole": [1.0, 0.0, 0.0], **_GRID},
    "casimir_scaling": {"n_list": [10, 20, 50, 100, 200, 500, 1000], "kappa": DEFAULT_KAPPA},
    "check_suite": {},
}


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    parameters: dict = field(default_factory=dict)
    output_path: str | None = None


@dataclass
class SweepResult:
    header: list
    rows: np.ndarray
    metadata: dict

    def __post_init__(self):
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if self.rows.shape[1] != len(self.header):
            raise ValueError(f"row width {self.rows.shape[1]} != header width {len(self.header)}")

    def to_csv(self):
        buf = io.StringIO()
        for key in sorted(self.metadata):
            buf.write(f"# {key} = {json.dumps(self.metadata[key], sort_keys=True)}\n")
        buf.write(",".join(self.header) + "\n")
        for row in self.rows:
            buf.write(",".join(format(float(v), ".17g") for v in row) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        metadata, lines = {}, []
        for line in text.splitlines():
            if line.startswith("# "):
                key, _, value = line[2:].partition(" = ")
                metadata[key] = json.loads(value)
            elif line:
                lines.append(line)
        header = lines[0].split(",")
        rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
        return cls(header, np.array(rows).reshape(-1, len(header)), metadata)

    def to_json(self):
        return json.dumps({"metadata": self.metadata, "header": self.header,
                           "rows": self.rows.tolist()}, sort_keys=True)

    def column(self, name):
        return self.rows[:, self.header.index(name)]


# ---------------------------------------------------------------------------
# validation

def _int(p, key, lo, hi=None):
    v = p[key]
    if isinstance(v, bool) or int(v) != v:
        raise ValueError(f"{key} must be an integer, got {v!r}")
    v = int(v)
    if v < lo or (hi is not None and v > hi):
        raise ValueError(f"{key} = {v} outside [{lo}, {hi if hi is not None else 'inf'}]")
    p[key] = v


def _real(p, key, lo=-math.inf, hi=math.inf, lo_open=False):
    v = float(p[key])
    if not math.isfinite(v) or v < lo or v > hi or (lo_open and v == lo):
        raise ValueError(f"{key} = {v} out of range")
    p[key] = v


def resolve_spec(kind, parameters=None, output_path=None):
    """Fill defaults, reject unknown keys and check ranges."""
    if kind not in KINDS:
        raise ValueError(f"unknown sweep kind {kind!r}; expected one of {KINDS}")
    parameters = dict(parameters or {})
    unknown = set(parameters) - set(DEFAULTS[kind])
    if unknown:
        raise ValueError(f"unknown parameters for {kind}: {sorted(unknown)}")
    p = {**DEFAULTS[kind], **parameters}
    if "grid_theta" in p:
        _int(p, "grid_theta", 8, MAX_GRID)
        _int(p, "grid_phi", 8, MAX_GRID)
    if "dipole" in p:
        p["dipole"] = list(DipoleOrientation.along(p["dipole"]).d_hat)
    if "rho" in p:
        _real(p, "rho", 0.0, 1.0)
    if "a" in p:
        _real(p, "a", 0.0, lo_open=True)
    if kind == "fig2_na_sweep":
        _int(p, "na_steps", 10)
        _real(p, "na_min", 0.0, 1.0, lo_open=True)
        if p["na_min"] >= 1.0:
            raise ValueError("na_min must be below 1")
    elif kind == "fig3_displacement":
        if p["direction"] not in SCAN_DIRECTIONS:
            raise ValueError(f"direction must be one of {sorted(SCAN_DIRECTIONS)}")
        _real(p, "r_max", 0.0, MAX_DISPLACEMENT, lo_open=True)
        _int(p, "steps", 2)
        _real(p, "alpha_deg", 0.0, 90.0, lo_open=True)
    elif kind == "fig4_distance":
        _real(p, "a_min", 10 * math.pi * (1 - 1e-12))
        _real(p, "a_max", p["a_min"], lo_open=True)
        _int(p, "steps", 2)
        _real(p, "kappa", 1.0, lo_open=True)
    elif kind == "casimir_scaling":
        n = [int(v) for v in p["n_list"]]
        if n != [float(v) for v in p["n_list"]] or len(n) < 2 or any(b <= a for a, b in zip(n, n[1:])):
            raise ValueError("n_list must be increasing integers")
        if n[0] < 10 or n[-1] < 100 * n[0]:
            raise ValueError("n_list must start at n >= 10 and span at least two decades")
        p["n_list"] = n
        _real(p, "kappa", 1.0, lo_open=True)
    return SweepSpec(kind, p, output_path)


def snap_phase(a, antinode=False):
    """Nearest n pi (node) or (n + 1/2) pi (antinode) to a; returns (n, snapped a)."""
    if antinode:
        n = max(0, int(round(a / math.pi - 0.5)))
        return n, (n + 0.5) * math.pi
    n = max(1, int(round(a / math.pi)))
    return n, n * math.pi


def _metadata(spec, **derived):
    return {"artifact": "focalqed", "version": __version__, "kind": spec.kind,
            "parameters": spec.parameters, **derived}


# ---------------------------------------------------------------------------
# runners

def run_fig2(spec):
    """Decay rate at the focus against numerical aperture, node and antinode."""
    p = spec.parameters
    grid = make_grid(p["grid_theta"], p["grid_phi"])
    dipole = DipoleOrientation(tuple(p["dipole"]))
    n_node, a_node = snap_phase(p["a"])
    n_anti, a_anti = snap_phase(p["a"], antinode=True)
    na = np.linspace(p["na_min"], 1.0, p["na_steps"])
    rows = []
    for x in na:
        g_anti = vacuum_density_many(1.0, [FOCUS.vector], MirrorGeometry.from_na(a_anti, x, p["rho"]), dipole, grid)[0]
        g_node = vacuum_density_many(1.0, [FOCUS.vector], MirrorGeometry.from_na(a_node, x, p["rho"]), dipole, grid)[0]
        rows.append((x, g_anti, g_node))
    meta = _metadata(spec, n_node=n_node, a_node=a_node, n_antinode=n_anti, a_antinode=a_anti)
    return SweepResult(["na", "gamma_antinode", "gamma_node"], rows, meta)


def run_fig3(spec):
    """Decay rate along an axial or transverse ray from the focus, node configuration."""
    p = spec.parameters
    grid = make_grid(p["grid_theta"], p["grid_phi"])
    n_node, a_node = snap_phase(p["a"])
    geom = MirrorGeometry(a_node, math.radians(p["alpha_deg"]), p["rho"])
    data = density_scan(geom, DipoleOrientation(tuple(p["dipole"])), p["direction"],
                        p["r_max"], p["steps"], grid)
    meta = _metadata(spec, n_node=n_node, a_node=a_node, na=geom.na)
    return SweepResult(["r_wavelengths", "gamma_bar"], data, meta)


def run_fig4(spec):
    """Decay rate, excited-state shift and Casimir-Polder shift against k0 R."""
    p = spec.parameters
    grid = make_grid(p["grid_theta"], p["grid_phi"])
    dipole = DipoleOrientation(tuple(p["dipole"]))
    a = np.linspace(p["a_min"], p["a_max"], p["steps"])
    focus = [FOCUS.vector]
    gamma = [vacuum_density_many(1.0, focus, MirrorGeometry(x), dipole, grid)[0] for x in a]
    shift = [shift_density_many(1.0, focus, MirrorGeometry(x), dipole, grid)[0] for x in a]
    cp = casimir_polder_shift(a)
    return SweepResult(["a", "gamma_bar", "delta_e_bar", "delta_cp_bar"],
                       np.column_stack([a, gamma, shift, cp]), _metadata(spec))


def run_scaling(spec):
    """Casimir-Polder shift at a = n pi with the plane-mirror reference curve."""
    p = spec.parameters
    a = math.pi * np.asarray(p["n_list"], dtype=float)
    cp = casimir_polder_shift(a)
    plane = plane_mirror_shift(a)
    meta = _metadata(spec, slope_delta_cp=loglog_slope(a, cp), slope_plane_mirror=loglog_slope(a, plane))
    return SweepResult(["a", "delta_cp", "plane_mirror"], np.column_stack([a, cp, plane]), meta)


RUNNERS = {
    "fig2_na_sweep": run_fig2,
    "fig3_displacement": run_fig3,
    "fig4_distance": run_fig4,
    "casimir_scaling": run_scaling,
}


def execute(spec):
    if spec.kind not in RUNNERS:
        raise ValueError(f"{spec.kind} does not produce a table")
    return RUNNERS[spec.kind](spec)
